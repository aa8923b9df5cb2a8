use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, EPS};

/// Fuel along a tour, one entry per position.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FuelTrace {
    /// Fuel on arrival, before any refill.
    pub arrival: Vec<f64>,
    /// Fuel on departure: `L` at depots, the arrival level at targets.
    pub level: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TourViolation {
    OutOfFuel { position: usize, vertex: usize, fuel: f64 },
    MissingTarget { target: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub feasible: bool,
    pub cost: f64,
    pub trace: FuelTrace,
    /// First problem found, if any.
    pub violation: Option<TourViolation>,
}

/// Simulates the tank along `tour` (refilled to `L` at every depot) and
/// checks target coverage. This is the single feasibility referee.
pub fn verify(inst: &Instance, tour: &[usize]) -> Result<VerifyReport> {
    let s = inst.start();
    if tour.len() < 2 {
        return Err(Error::MalformedTour("a tour needs at least two vertices".into()));
    }
    if tour[0] != s || tour[tour.len() - 1] != s {
        return Err(Error::MalformedTour(format!("tour must start and end at the start depot (vertex {s})")));
    }
    if let Some(&v) = tour.iter().find(|&&v| v >= inst.n_vertices()) {
        return Err(Error::MalformedTour(format!("unknown vertex {v}")));
    }

    let l = inst.capacity();
    let mut trace = FuelTrace { arrival: vec![l], level: vec![l] };
    let mut violation = None;
    let mut fuel = l;
    let mut cost = 0.0;
    for (pos, w) in tour.windows(2).enumerate() {
        let step = inst.fuel(w[0], w[1]);
        cost += step;
        fuel -= step;
        trace.arrival.push(fuel);
        if fuel < -EPS && violation.is_none() {
            violation = Some(TourViolation::OutOfFuel { position: pos + 1, vertex: w[1], fuel });
        }
        if inst.is_depot(w[1]) {
            fuel = l;
        }
        trace.level.push(fuel);
    }

    let mut seen = vec![false; inst.n_targets()];
    for &v in tour {
        if inst.is_target(v) {
            seen[v] = true;
        }
    }
    if violation.is_none() {
        if let Some(t) = seen.iter().position(|&x| !x) {
            violation = Some(TourViolation::MissingTarget { target: t });
        }
    }
    Ok(VerifyReport { feasible: violation.is_none(), cost, trace, violation })
}

/// Percentage gap `100 (alg - reference) / reference`.
pub fn quality(cost_alg: f64, cost_ref: f64) -> f64 {
    assert!(cost_ref > 0.0, "reference cost must be positive");
    100.0 * (cost_alg - cost_ref) / cost_ref
}
