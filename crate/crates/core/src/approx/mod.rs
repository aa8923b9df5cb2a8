//! The approximation algorithm: least-fuel target paths, a covering tour over
//! them, expansion of indirect edges, and greedy strand repair.

mod cover;
mod hungarian;
mod repair;

use std::time::Instant;

use serde::Serialize;

pub use cover::{ceil_log2, covering_tour, euler_circuit, min_cycle_cover, CoveringTour, CycleCover};
pub use hungarian::min_cost_assignment;
pub use repair::{repair_strand, RefuelTrip, RepairedStrand};

use crate::error::{Error, Result};
use crate::exact::verify;
use crate::instance::{derive_constants, Instance};
use crate::paths::{build_path_table, PathTable};
use crate::tour::{strand_decompose, Solution, Tour};

/// Index of the rotation of a closed target walk that is cheapest to splice
/// onto the start depot: minimizes `l(s, first) + l(last, s) - l(last, first)`.
pub fn best_rotation(table: &PathTable, walk: &[usize]) -> usize {
    let n = walk.len();
    let mut best = (f64::INFINITY, 0usize);
    for r in 0..n {
        let first = walk[r];
        let last = walk[(r + n - 1) % n];
        let closing = if n > 1 { table.l(last, first) } else { 0.0 };
        let splice = table.from_start(first).cost + table.to_start(last).cost - closing;
        if splice < best.0 {
            best = (splice, r);
        }
    }
    best.1
}

/// Turns a closed target walk into a depot-anchored tour, replacing each
/// consecutive pair with its least-fuel path.
pub fn expand_tour(inst: &Instance, table: &PathTable, walk: &[usize]) -> Tour {
    assert!(!walk.is_empty());
    let n = walk.len();
    let r = best_rotation(table, walk);
    let order: Vec<usize> = (0..n).map(|i| walk[(r + i) % n]).collect();

    let mut seq = table.from_start(order[0]).sequence.clone();
    for pair in order.windows(2) {
        seq.extend_from_slice(&table.target_path(pair[0], pair[1]).sequence[1..]);
    }
    seq.extend_from_slice(&table.to_start(order[n - 1]).sequence[1..]);
    Tour::new(inst, seq)
}

/// Everything produced between a closed target walk and a feasible tour.
#[derive(Clone, Debug, Serialize)]
pub struct Pipeline {
    /// Expanded tour before strand repair (`TOUR`).
    pub unrepaired: Tour,
    pub tour: Tour,
    pub trips: Vec<RefuelTrip>,
}

/// Expands `walk`, repairs every infeasible strand and checks the result.
pub fn finish_walk(inst: &Instance, table: &PathTable, walk: &[usize]) -> Result<Pipeline> {
    let unrepaired = expand_tour(inst, table, walk);
    let mut seq = vec![unrepaired.sequence[0]];
    let mut trips = Vec::new();
    for strand in strand_decompose(inst, &unrepaired.sequence) {
        let fixed = repair_strand(inst, table, &strand);
        seq.extend_from_slice(&fixed.sequence[1..]);
        trips.extend(fixed.trips);
    }
    let tour = Tour::new(inst, seq);
    let report = verify(inst, &tour.sequence)?;
    if !report.feasible {
        return Err(Error::SolverBug(format!("repaired tour fails verification: {:?}", report.violation)));
    }
    Ok(Pipeline { unrepaired, tour, trips })
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxOutcome {
    pub solution: Solution,
    pub covering: CoveringTour,
    pub pipeline: Pipeline,
}

pub fn approx_solve_with_table(inst: &Instance, table: &PathTable) -> Result<ApproxOutcome> {
    let started = Instant::now();
    let covering = covering_tour(table);
    let pipeline = finish_walk(inst, table, &covering.sequence)?;
    let solution = Solution::new(pipeline.tour.clone(), pipeline.trips.len(), "approx").with_elapsed(started.elapsed());
    Ok(ApproxOutcome { solution, covering, pipeline })
}

/// Runs the full approximation pipeline on a validated instance.
pub fn approx_solve(inst: &Instance) -> Result<Solution> {
    let started = Instant::now();
    let table = build_path_table(inst, derive_constants(inst))?;
    let out = approx_solve_with_table(inst, &table)?;
    Ok(out.solution.with_elapsed(started.elapsed()))
}
