use crate::instance::{Instance, EPS};
use crate::tour::{sequence_fuel_feasible, Tour};

/// Cheapest depot to sit between `v1` and `v2`; lowest index on ties.
pub fn best_depot(inst: &Instance, v1: usize, v2: usize) -> usize {
    let mut best = (f64::INFINITY, usize::MAX);
    for d in inst.depots() {
        let c = inst.fuel(v1, d) + inst.fuel(d, v2);
        if c < best.0 {
            best = (c, d);
        }
    }
    best.1
}

/// Swaps each intermediate depot visit for the cheapest depot between its
/// neighbours whenever the tour stays feasible and gets cheaper. The start
/// and end visits to `s` are left alone.
pub fn depot_exchange(inst: &Instance, tour: &Tour) -> Tour {
    let mut seq = tour.sequence.clone();
    loop {
        let mut changed = false;
        for pos in 1..seq.len().saturating_sub(1) {
            let d = seq[pos];
            if !inst.is_depot(d) {
                continue;
            }
            let (v1, v2) = (seq[pos - 1], seq[pos + 1]);
            let cand = best_depot(inst, v1, v2);
            let old = inst.fuel(v1, d) + inst.fuel(d, v2);
            let new = inst.fuel(v1, cand) + inst.fuel(cand, v2);
            if cand == d || new >= old - EPS {
                continue;
            }
            seq[pos] = cand;
            if sequence_fuel_feasible(inst, &seq) {
                changed = true;
            } else {
                seq[pos] = d;
            }
        }
        if !changed {
            break;
        }
    }
    seq.dedup();
    Tour::new(inst, seq)
}
