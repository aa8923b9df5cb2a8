use serde::Serialize;

use crate::paths::PathTable;
use crate::tour::{sequence_cost, sequence_fuel_feasible, Strand};
use crate::Instance;

/// Detour `t -> n_t -> ... -> m_t -> t` that refills the tank at `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefuelTrip {
    pub target: usize,
    /// `PATH(n_t, m_t)` as a depot sequence.
    pub depots: Vec<usize>,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepairedStrand {
    /// Depot-to-depot sequence, now possibly with refuel detours inside.
    pub sequence: Vec<usize>,
    pub trips: Vec<RefuelTrip>,
}

fn trip_for(inst: &Instance, table: &PathTable, t: usize) -> RefuelTrip {
    let k = &table.constants;
    let n_t = k.nearest_terminal[t];
    let m_t = k.nearest_start[t];
    let path = table.depot_path(n_t, m_t);
    let cost = inst.fuel(t, n_t) + path.cost + inst.fuel(m_t, t);
    RefuelTrip { target: t, depots: path.sequence.clone(), cost }
}

fn assemble(strand: &Strand, trips: &[RefuelTrip], active: &[bool]) -> Vec<usize> {
    let seq = &strand.sequence;
    let mut out = Vec::with_capacity(seq.len() * 3);
    out.push(seq[0]);
    for (i, &t) in strand.targets().iter().enumerate() {
        out.push(t);
        if active[i] {
            out.extend_from_slice(&trips[i].depots);
            out.push(t);
        }
    }
    out.push(seq[seq.len() - 1]);
    out
}

/// Greedy repair: add a refuel trip after every target, then drop each trip
/// in insertion order whenever the strand stays fuel-feasible without it.
pub fn repair_strand(inst: &Instance, table: &PathTable, strand: &Strand) -> RepairedStrand {
    if strand.is_feasible(inst.capacity()) {
        return RepairedStrand { sequence: strand.sequence.clone(), trips: Vec::new() };
    }
    let trips: Vec<RefuelTrip> = strand.targets().iter().map(|&t| trip_for(inst, table, t)).collect();
    let mut active = vec![true; trips.len()];
    for i in 0..trips.len() {
        active[i] = false;
        if !sequence_fuel_feasible(inst, &assemble(strand, &trips, &active)) {
            active[i] = true;
        }
    }
    let sequence = assemble(strand, &trips, &active);
    debug_assert!(
        (sequence_cost(inst, &sequence)
            - strand.fuel_required
            - trips.iter().zip(&active).filter(|(_, &a)| a).map(|(t, _)| t.cost).sum::<f64>())
        .abs()
            < 1e-6
    );
    let trips = trips.into_iter().zip(active).filter_map(|(t, a)| a.then_some(t)).collect();
    RepairedStrand { sequence, trips }
}
