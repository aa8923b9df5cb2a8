//! Tours, strands and solutions shared by every solver.

use std::time::Duration;

use serde::Serialize;

use crate::instance::Instance;

/// Closed vertex sequence that starts and ends at the start depot.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tour {
    pub sequence: Vec<usize>,
    pub cost: f64,
}

impl Tour {
    pub fn new(inst: &Instance, sequence: Vec<usize>) -> Self {
        let cost = sequence_cost(inst, &sequence);
        Self { sequence, cost }
    }

    pub fn depot_visits(&self, inst: &Instance) -> usize {
        // the closing return to `s` is the same visit as the departure
        self.sequence[..self.sequence.len().saturating_sub(1)].iter().filter(|&&v| inst.is_depot(v)).count()
    }
}

pub fn sequence_cost(inst: &Instance, seq: &[usize]) -> f64 {
    seq.windows(2).map(|w| inst.fuel(w[0], w[1])).sum()
}

/// Depot-to-depot slice of a tour whose interior vertices are all targets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Strand {
    pub sequence: Vec<usize>,
    pub fuel_required: f64,
}

impl Strand {
    pub fn targets(&self) -> &[usize] {
        &self.sequence[1..self.sequence.len() - 1]
    }

    pub fn is_feasible(&self, capacity: f64) -> bool {
        self.fuel_required <= capacity + crate::EPS
    }
}

/// Splits a depot-to-depot sequence at every depot. Consecutive strands
/// share their boundary depot.
pub fn strand_decompose(inst: &Instance, seq: &[usize]) -> Vec<Strand> {
    let mut out = Vec::new();
    let mut begin = 0;
    for (i, &v) in seq.iter().enumerate().skip(1) {
        if inst.is_depot(v) {
            let sequence = seq[begin..=i].to_vec();
            let fuel_required = sequence_cost(inst, &sequence);
            out.push(Strand { sequence, fuel_required });
            begin = i;
        }
    }
    out
}

/// True when every depot-to-depot piece of `seq` fits in the tank. `seq`
/// must start at a depot; a trailing piece that does not end at a depot is
/// checked as far as it goes.
pub fn sequence_fuel_feasible(inst: &Instance, seq: &[usize]) -> bool {
    let l = inst.capacity();
    let mut used = 0.0;
    for w in seq.windows(2) {
        used += inst.fuel(w[0], w[1]);
        if used > l + crate::EPS {
            return false;
        }
        if inst.is_depot(w[1]) {
            used = 0.0;
        }
    }
    true
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveMeta {
    pub solver: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub tour: Tour,
    pub cost: f64,
    pub refuel_trip_count: usize,
    pub meta: SolveMeta,
}

impl Solution {
    pub fn new(tour: Tour, refuel_trip_count: usize, solver: &str) -> Self {
        Self {
            cost: tour.cost,
            tour,
            refuel_trip_count,
            meta: SolveMeta { solver: solver.to_string(), elapsed: Duration::ZERO },
        }
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.meta.elapsed = elapsed;
        self
    }
}
