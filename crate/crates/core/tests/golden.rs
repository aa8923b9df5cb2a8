//! Byte-exact comparisons against committed files. Run with `UPDATE_GOLDEN=1` to rewrite them.

mod common;

use std::path::PathBuf;

use common::*;
use fcurp_core::exact::{build_model, lp_string, MilpModel};
use fcurp_core::experiment::{generate, plot_svg, GenParams};
use fcurp_core::{approx_solve, solve_exact, Instance, SearchLimits};

fn golden(name: &str, actual: &str) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{} differs from the generated output", path.display());
}

fn tiny() -> Instance {
    // targets 0, 1; depots 2 (start), 3
    let fuel =
        vec![vec![0.0, 4.0, 3.0, 5.0], vec![3.0, 0.0, 4.0, 2.0], vec![3.0, 4.0, 0.0, 6.0], vec![5.0, 2.0, 6.0, 0.0]];
    Instance::new(2, 2, 0, fuel, 10.0).unwrap()
}

#[test]
fn tiny_model_lp() {
    let model = build_model(&tiny());
    assert_eq!(model.vars.len(), MilpModel::expected_var_count(2, 2));
    assert_eq!(model.rows.len(), MilpModel::expected_row_count(2, 2));
    golden("tiny.lp", &lp_string(&model));
}

#[test]
fn approx_plot_svg() {
    let params = GenParams { n_targets: 8, n_depots: 5, seed: 42, ..GenParams::default() };
    let inst = generate(&params).unwrap();
    let sol = approx_solve(&inst).unwrap();
    golden("approx_8.svg", &plot_svg(&inst, &sol).unwrap());
}

#[test]
fn reordered_targets_keep_the_lp_optimum() {
    let inst = random_small_instance(3, 2, 17);
    let nt = inst.n_targets();
    let n = inst.n_vertices();
    let perm: Vec<usize> = (0..n).map(|v| if v < nt { nt - 1 - v } else { v }).collect();
    let fuel = (0..n).map(|i| (0..n).map(|j| inst.fuel(perm[i], perm[j])).collect()).collect();
    let reordered = Instance::new(nt, inst.n_depots(), 0, fuel, inst.capacity()).unwrap();

    let opt = solve_exact(&inst, SearchLimits::default()).unwrap().optimal().unwrap().cost;
    let a = highs_solve(&lp_string(&build_model(&inst))).unwrap();
    let b = highs_solve(&lp_string(&build_model(&reordered))).unwrap();
    assert!(rel_close(a, opt, 1e-6), "{a} vs {opt}");
    assert!(rel_close(b, opt, 1e-6), "{b} vs {opt}");
}
