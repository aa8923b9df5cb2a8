//! Batch experiments: generate instances per size, run solvers, verify,
//! and aggregate quality against the best reference cost.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Duration;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate, GenParams};
use crate::approx::approx_solve_with_table;
use crate::error::{Error, Result};
use crate::exact::{quality, solve_exact_with_table, verify, ExactResult, SearchLimits};
use crate::heuristics::{construct, improve, Phase, DEFAULT_K, DEFAULT_SPAN};
use crate::instance::{derive_constants, Instance};
use crate::paths::build_path_table;
use crate::tour::Solution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Approx,
    Construct,
    Improve,
    Exact,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] =
        [SolverKind::Approx, SolverKind::Construct, SolverKind::Improve, SolverKind::Exact];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Approx => "approx",
            SolverKind::Construct => "construct",
            SolverKind::Improve => "improve",
            SolverKind::Exact => "exact",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown solver `{s}`")))
    }
}

/// Solves `inst` with one solver and verifies the result. `improve` starts
/// from the construction heuristic.
pub fn run_solver(inst: &Instance, kind: SolverKind, limits: SearchLimits) -> Result<Option<Solution>> {
    let table = build_path_table(inst, derive_constants(inst))?;
    let sol = match kind {
        SolverKind::Approx => Some(approx_solve_with_table(inst, &table)?.solution),
        SolverKind::Construct => Some(construct(inst, &table)?),
        SolverKind::Improve => {
            let c = construct(inst, &table)?;
            Some(improve(inst, &c, DEFAULT_K, DEFAULT_SPAN)?.solution)
        }
        SolverKind::Exact => match solve_exact_with_table(inst, &table, limits)? {
            ExactResult::Optimal(s) => Some(s),
            ExactResult::BoundOnly { incumbent, .. } => incumbent,
        },
    };
    if let Some(s) = &sol {
        check(inst, s)?;
    }
    Ok(sol)
}

fn check(inst: &Instance, sol: &Solution) -> Result<()> {
    let report = verify(inst, &sol.tour.sequence)?;
    if report.feasible {
        Ok(())
    } else {
        Err(Error::SolverBug(format!("{} output fails verification: {:?}", sol.meta.solver, report.violation)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub sizes: Vec<usize>,
    pub per_size: usize,
    pub solvers: Vec<SolverKind>,
    pub seed: u64,
    /// Everything but `n_targets` and `seed` is taken from here.
    pub base: GenParams,
    /// Exact search is only attempted up to this many targets.
    pub exact_cap: usize,
    pub exact_node_limit: Option<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            sizes: vec![10, 15, 20, 25],
            per_size: 5,
            solvers: vec![SolverKind::Approx, SolverKind::Construct, SolverKind::Improve],
            seed: 1,
            base: GenParams::default(),
            exact_cap: 10,
            exact_node_limit: Some(20_000_000),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceRecord {
    pub n_targets: usize,
    pub seed: u64,
    pub a: f64,
    pub beta: f64,
    pub costs: BTreeMap<SolverKind, f64>,
    pub refuel_trips: BTreeMap<SolverKind, usize>,
    /// Reference cost: the exact optimum when proven, else the best found.
    pub reference: f64,
    pub exact_optimal: bool,
    pub qualities: BTreeMap<SolverKind, f64>,
    /// Percent of the construction cost removed by depot exchange.
    pub depot_exchange_gain: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolverStats {
    pub mean_quality: f64,
    pub worst_quality: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SizeRow {
    pub n_targets: usize,
    pub instances: usize,
    pub exact_solved: usize,
    pub solvers: BTreeMap<SolverKind, SolverStats>,
    pub mean_depot_exchange_gain: Option<f64>,
}

/// Deterministic part of a suite run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub rows: Vec<SizeRow>,
    pub instances: Vec<InstanceRecord>,
}

/// Wall-clock side of a suite run, kept apart so reports stay reproducible.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteTimings {
    /// Mean milliseconds per solver, per size.
    pub mean_ms: BTreeMap<usize, BTreeMap<SolverKind, f64>>,
}

pub struct SuiteRun {
    pub report: SuiteReport,
    pub timings: SuiteTimings,
}

struct Outcome {
    record: InstanceRecord,
    elapsed: BTreeMap<SolverKind, Duration>,
}

fn run_instance(cfg: &SuiteConfig, n_targets: usize, seed: u64) -> Result<Outcome> {
    let params = GenParams { n_targets, seed, ..cfg.base.clone() };
    let inst = generate(&params)?;
    let consts = derive_constants(&inst);
    let table = build_path_table(&inst, consts.clone())?;
    let wants = |k| cfg.solvers.contains(&k);

    let mut sols: BTreeMap<SolverKind, Solution> = BTreeMap::new();
    let mut depot_exchange_gain = None;
    if wants(SolverKind::Approx) {
        sols.insert(SolverKind::Approx, approx_solve_with_table(&inst, &table)?.solution);
    }
    if wants(SolverKind::Construct) || wants(SolverKind::Improve) {
        let c = construct(&inst, &table)?;
        if wants(SolverKind::Improve) {
            let imp = improve(&inst, &c, DEFAULT_K, DEFAULT_SPAN)?;
            depot_exchange_gain = Some(100.0 * imp.gain_of(Phase::DepotExchange) / c.cost);
            sols.insert(SolverKind::Improve, imp.solution);
        }
        if wants(SolverKind::Construct) {
            sols.insert(SolverKind::Construct, c);
        }
    }
    let mut exact_optimal = false;
    if wants(SolverKind::Exact) && n_targets <= cfg.exact_cap {
        let limits = SearchLimits { max_nodes: cfg.exact_node_limit, max_time: None };
        match solve_exact_with_table(&inst, &table, limits)? {
            ExactResult::Optimal(s) => {
                exact_optimal = true;
                sols.insert(SolverKind::Exact, s);
            }
            ExactResult::BoundOnly { incumbent: Some(s), .. } => {
                check(&inst, &s)?;
            }
            ExactResult::BoundOnly { incumbent: None, .. } => {}
        }
    }
    for s in sols.values() {
        check(&inst, s)?;
    }

    let reference = if exact_optimal {
        sols[&SolverKind::Exact].cost
    } else {
        sols.values().map(|s| s.cost).fold(f64::INFINITY, f64::min)
    };
    let record = InstanceRecord {
        n_targets,
        seed,
        a: consts.a,
        beta: consts.beta,
        costs: sols.iter().map(|(&k, s)| (k, s.cost)).collect(),
        refuel_trips: sols.iter().map(|(&k, s)| (k, s.refuel_trip_count)).collect(),
        reference,
        exact_optimal,
        qualities: sols.iter().map(|(&k, s)| (k, quality(s.cost, reference))).collect(),
        depot_exchange_gain,
    };
    let elapsed = sols.iter().map(|(&k, s)| (k, s.meta.elapsed)).collect();
    Ok(Outcome { record, elapsed })
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Runs every (size, instance) pair, in parallel, and aggregates in a fixed
/// order. Any verification failure aborts the run.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let jobs: Vec<(usize, u64)> =
        cfg.sizes.iter().flat_map(|&n| (0..cfg.per_size).map(move |_| n)).map(|n| (n, rng.next_u64())).collect();
    let outcomes: Vec<Outcome> = jobs.par_iter().map(|&(n, seed)| run_instance(cfg, n, seed)).collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut timings = SuiteTimings::default();
    for &n in &cfg.sizes {
        let group: Vec<&Outcome> = outcomes.iter().filter(|o| o.record.n_targets == n).collect();
        let mut solvers = BTreeMap::new();
        let mut ms = BTreeMap::new();
        for &kind in &cfg.solvers {
            let qs: Vec<f64> = group.iter().filter_map(|o| o.record.qualities.get(&kind).copied()).collect();
            if let Some(mq) = mean(qs.iter().copied()) {
                let worst = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                solvers.insert(kind, SolverStats { mean_quality: mq, worst_quality: worst, count: qs.len() });
            }
            let times = group.iter().filter_map(|o| o.elapsed.get(&kind)).map(|d| d.as_secs_f64() * 1e3);
            if let Some(t) = mean(times) {
                ms.insert(kind, t);
            }
        }
        timings.mean_ms.insert(n, ms);
        rows.push(SizeRow {
            n_targets: n,
            instances: group.len(),
            exact_solved: group.iter().filter(|o| o.record.exact_optimal).count(),
            solvers,
            mean_depot_exchange_gain: mean(group.iter().filter_map(|o| o.record.depot_exchange_gain)),
        });
    }
    let report = SuiteReport { config: cfg.clone(), rows, instances: outcomes.into_iter().map(|o| o.record).collect() };
    Ok(SuiteRun { report, timings })
}

impl SuiteReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Plain-text quality table (percent gap to the reference).
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:>4} {:>5} {:>6}", "|T|", "count", "exact");
        for k in &self.config.solvers {
            let _ = write!(out, " {:>16}", format!("{k} mean/worst"));
        }
        let _ = writeln!(out, " {:>10}", "dx gain %");
        for row in &self.rows {
            let _ = write!(out, "{:>4} {:>5} {:>6}", row.n_targets, row.instances, row.exact_solved);
            for k in &self.config.solvers {
                match row.solvers.get(k) {
                    Some(s) => {
                        let _ = write!(out, " {:>16}", format!("{:.2}/{:.2}", s.mean_quality, s.worst_quality));
                    }
                    None => {
                        let _ = write!(out, " {:>16}", "-");
                    }
                }
            }
            match row.mean_depot_exchange_gain {
                Some(g) => {
                    let _ = writeln!(out, " {g:>10.3}");
                }
                None => {
                    let _ = writeln!(out, " {:>10}", "-");
                }
            }
        }
        out
    }
}
