//! Construction and improvement heuristics. Construction swaps the covering
//! step of the approximation pipeline for an ATSP tour over the `l` metric;
//! improvement alternates segment-restricted k-opt with depot exchange.

mod exchange;
mod kopt;
mod lk;

use std::time::Instant;

use serde::Serialize;

pub use exchange::{best_depot, depot_exchange};
pub use kopt::{close_at, cycle_of, k_opt, segments, Segment};
pub use lk::{atsp_tour, cycle_cost, local_search, nearest_neighbour, LkParams};

use crate::approx::finish_walk;
use crate::error::{Error, Result};
use crate::exact::verify;
use crate::instance::{Instance, EPS};
use crate::paths::PathTable;
use crate::tour::{Solution, Tour};

/// Span of the k-opt segments.
pub const DEFAULT_SPAN: usize = 4;
pub const DEFAULT_K: usize = 3;

pub fn construct_with(inst: &Instance, table: &PathTable, params: LkParams) -> Result<Solution> {
    let started = Instant::now();
    let nt = table.n_targets();
    let first = (0..nt)
        .min_by(|&a, &b| table.from_start(a).cost.total_cmp(&table.from_start(b).cost))
        .expect("at least one target");
    let order = atsp_tour(nt, first, &|x, y| table.l(x, y), params);
    let pipeline = finish_walk(inst, table, &order)?;
    Ok(Solution::new(pipeline.tour, pipeline.trips.len(), "construct").with_elapsed(started.elapsed()))
}

pub fn construct(inst: &Instance, table: &PathTable) -> Result<Solution> {
    construct_with(inst, table, LkParams::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    KOpt,
    DepotExchange,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseDelta {
    pub phase: Phase,
    /// Cost removed by this phase (non-negative).
    pub gain: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Improvement {
    pub solution: Solution,
    pub phases: Vec<PhaseDelta>,
}

impl Improvement {
    pub fn gain_of(&self, phase: Phase) -> f64 {
        self.phases.iter().filter(|p| p.phase == phase).map(|p| p.gain).sum()
    }
}

fn checked(inst: &Instance, tour: Tour, phase: Phase) -> Result<Tour> {
    let report = verify(inst, &tour.sequence)?;
    if report.feasible {
        Ok(tour)
    } else {
        Err(Error::SolverBug(format!("{phase:?} produced an infeasible tour: {:?}", report.violation)))
    }
}

/// Alternates k-opt and depot exchange until a round improves neither.
/// The refuel count of the result is its number of intermediate depot stops.
pub fn improve(inst: &Instance, solution: &Solution, k: usize, n: usize) -> Result<Improvement> {
    let started = Instant::now();
    let mut tour = solution.tour.clone();
    let mut phases = Vec::new();
    loop {
        let round_start = tour.cost;
        let before = tour.cost;
        tour = checked(inst, k_opt(inst, &tour, k, n), Phase::KOpt)?;
        phases.push(PhaseDelta { phase: Phase::KOpt, gain: before - tour.cost });
        let before = tour.cost;
        tour = checked(inst, depot_exchange(inst, &tour), Phase::DepotExchange)?;
        phases.push(PhaseDelta { phase: Phase::DepotExchange, gain: before - tour.cost });
        if tour.cost >= round_start - EPS {
            break;
        }
    }
    let stops = tour.depot_visits(inst).saturating_sub(1);
    let solution = Solution::new(tour, stops, "improve").with_elapsed(solution.meta.elapsed + started.elapsed());
    Ok(Improvement { solution, phases })
}
