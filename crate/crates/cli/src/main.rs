//! Command-line front end: instance generation, solving, verification,
//! MILP export, plotting and the benchmark suite.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use fcurp_core::exact::lp_string;
use fcurp_core::experiment::{generate, plot_svg, run_solver, run_suite, GenParams, Metric, SolverKind, SuiteConfig};
use fcurp_core::{build_model, derive_constants, validate, verify, Error, Instance, SearchLimits, Solution, Tour};

#[derive(Parser)]
#[command(name = "fcurp", version, about = "Fuel-constrained UAV routing with refueling depots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random instance and write it as JSON.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and print or write the verified solution.
    Solve {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "improve")]
        solver: SolverKind,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every solver over generated instances and report solution quality.
    Suite {
        /// Comma-separated target counts.
        #[arg(long, value_delimiter = ',', default_value = "10,15,20,25")]
        sizes: Vec<usize>,
        /// Instances per size.
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "approx,construct,improve")]
        solver: Vec<SolverKind>,
        /// Largest size the exact search is attempted on.
        #[arg(long, default_value_t = 10)]
        exact_cap: usize,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Directory for report.json, report.txt and timings.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the instance's MILP in LP format.
    ExportMilp {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a solution as SVG.
    Plot {
        #[command(flatten)]
        source: Source,
        /// Solution JSON to draw; solved with --solver when absent.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long, default_value = "approx")]
        solver: SolverKind,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate an instance and, given a solution, check its fuel feasibility.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        solution: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    targets: usize,
    #[arg(long, default_value_t = 5)]
    depots: usize,
    #[arg(long, default_value_t = 4500.0)]
    capacity: f64,
    #[arg(long, default_value_t = 100.0)]
    radius: f64,
    #[arg(long, default_value_t = 5000.0)]
    area: f64,
    #[arg(long, default_value = "dubins")]
    metric: Metric,
}

impl GenArgs {
    fn params(&self) -> GenParams {
        GenParams {
            n_targets: self.targets,
            n_depots: self.depots,
            area: self.area,
            turn_radius: self.radius,
            capacity: self.capacity,
            seed: self.seed,
            metric: self.metric,
        }
    }
}

/// An instance file, or generation flags when no file is given.
#[derive(Args, Clone)]
struct Source {
    #[arg(long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    gen: GenArgs,
}

#[derive(Args, Clone)]
struct LimitArgs {
    /// Node budget for the exact search.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Wall-clock budget for the exact search, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl LimitArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits { max_nodes: self.node_limit, max_time: self.time_limit.map(Duration::from_secs_f64) }
    }
}

enum Failure {
    Invalid(String),
    Unverified(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Unverified(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) => write!(f, "invalid instance: {m}"),
            Failure::Unverified(m) => write!(f, "verification failed: {m}"),
            Failure::Other(m) => f.write_str(m),
        }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Other(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load(source: &Source) -> std::result::Result<Instance, Failure> {
    let inst = match &source.instance {
        Some(path) => Instance::load(path).map_err(|e| match e {
            Error::InvalidInstance(m) => Failure::Invalid(m),
            e => e.into(),
        })?,
        None => generate(&source.gen.params())?,
    };
    let report = validate(&inst);
    if !report.is_ok() {
        return Err(Failure::Invalid(report.to_string()));
    }
    Ok(inst)
}

fn solve(inst: &Instance, kind: SolverKind, limits: &LimitArgs) -> std::result::Result<Solution, Failure> {
    let sol = run_solver(inst, kind, limits.limits())?
        .ok_or_else(|| Failure::Other(format!("{kind} found no solution within its limits")))?;
    let report = verify(inst, &sol.tour.sequence)?;
    if !report.feasible {
        return Err(Failure::Unverified(format!("{kind} returned {:?}", report.violation)));
    }
    Ok(sol)
}

/// Accepts a solution object (`tour.sequence`), a bare `sequence`, or a plain array.
fn read_sequence(path: &Path) -> std::result::Result<Vec<usize>, Failure> {
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let seq = value.pointer("/tour/sequence").or_else(|| value.get("sequence")).unwrap_or(&value);
    serde_json::from_value(seq.clone())
        .map_err(|e| Failure::Other(format!("{}: expected a vertex sequence ({e})", path.display())))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Generate { gen, out } => {
            let inst = generate(&gen.params())?;
            emit(out.as_deref(), &(inst.to_json_string()? + "\n"))
        }
        Command::Solve { source, solver, limits, out } => {
            let inst = load(&source)?;
            let sol = solve(&inst, solver, &limits)?;
            eprintln!(
                "{solver}: cost {:.3}, {} refuel trips, {:.3}s",
                sol.cost,
                sol.refuel_trip_count,
                sol.meta.elapsed.as_secs_f64()
            );
            emit(out.as_deref(), &(serde_json::to_string_pretty(&sol)? + "\n"))
        }
        Command::Suite { sizes, count, solver, exact_cap, gen, limits, out } => {
            let cfg = SuiteConfig {
                sizes,
                per_size: count,
                solvers: solver,
                seed: gen.seed,
                base: gen.params(),
                exact_cap,
                exact_node_limit: limits.node_limit.or(SuiteConfig::default().exact_node_limit),
            };
            let run = run_suite(&cfg)?;
            let table = run.report.table();
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join("report.json"), run.report.to_json()?)?;
                    std::fs::write(dir.join("report.txt"), &table)?;
                    std::fs::write(dir.join("timings.json"), serde_json::to_string_pretty(&run.timings)? + "\n")?;
                    print!("{table}");
                    Ok(())
                }
                None => emit(None, &run.report.to_json()?),
            }
        }
        Command::ExportMilp { source, out } => {
            let inst = load(&source)?;
            emit(out.as_deref(), &lp_string(&build_model(&inst)))
        }
        Command::Plot { source, solution, solver, limits, out } => {
            let inst = load(&source)?;
            let sol = match solution {
                Some(path) => {
                    let seq = read_sequence(&path)?;
                    let report = verify(&inst, &seq)?;
                    if !report.feasible {
                        return Err(Failure::Unverified(format!("{:?}", report.violation)));
                    }
                    let tour = Tour::new(&inst, seq);
                    let trips = tour.depot_visits(&inst).saturating_sub(1);
                    Solution::new(tour, trips, "file")
                }
                None => solve(&inst, solver, &limits)?,
            };
            emit(out.as_deref(), &plot_svg(&inst, &sol)?)
        }
        Command::Verify { source, solution } => {
            let inst = load(&source)?;
            let k = derive_constants(&inst);
            println!("instance ok: a = {:.6}, beta = {:.6}", k.a, k.beta);
            if let Some(path) = solution {
                let report = verify(&inst, &read_sequence(&path)?)?;
                if !report.feasible {
                    return Err(Failure::Unverified(format!("{:?}", report.violation)));
                }
                println!("tour feasible: cost {:.6}", report.cost);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
