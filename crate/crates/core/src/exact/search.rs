//! Exact branch-and-bound over target visit orders.
//!
//! Each target is visited once (the triangle inequality lets any optimal
//! tour be shortcut to that form). Between consecutive targets the vehicle
//! either flies direct or detours through depots; a detour is fixed by its
//! first depot `d1` (reachable with the fuel on hand) and its last depot
//! `dk`, joined by the least-fuel depot path. States carrying less fuel at a
//! higher cost than an already explored state are pruned.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::instance::{derive_constants, Instance, EPS};
use crate::paths::{build_path_table, PathTable};
use crate::tour::{Solution, Tour};

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

#[derive(Clone, Debug)]
pub enum ExactResult {
    Optimal(Solution),
    /// A cap was hit; the best tour found so far, if any.
    BoundOnly {
        incumbent: Option<Solution>,
        nodes: u64,
    },
}

impl ExactResult {
    pub fn optimal(&self) -> Option<&Solution> {
        match self {
            ExactResult::Optimal(s) => Some(s),
            ExactResult::BoundOnly { .. } => None,
        }
    }
}

struct Move {
    cost: f64,
    arrival: f64,
    /// Vertices after the current one, ending at the destination.
    path: Vec<usize>,
}

struct Search<'a> {
    inst: &'a Instance,
    table: &'a PathTable,
    limits: SearchLimits,
    started: Instant,
    nodes: u64,
    aborted: bool,
    labels: HashMap<(u64, usize), Vec<(f64, f64)>>,
    best_cost: f64,
    best_seq: Option<Vec<usize>>,
}

impl Search<'_> {
    /// Ways to get from `u` (holding `fuel`) to target `v`, dominated ones dropped.
    fn moves(&self, u: usize, fuel: f64, v: usize) -> Vec<Move> {
        let inst = self.inst;
        let l = inst.capacity();
        let mut out: Vec<Move> = Vec::new();
        let f_uv = inst.fuel(u, v);
        if f_uv <= fuel + EPS {
            out.push(Move { cost: f_uv, arrival: fuel - f_uv, path: vec![v] });
        }
        for dk in inst.depots() {
            let f_last = inst.fuel(dk, v);
            if f_last > l + EPS {
                continue;
            }
            let Some((to_dk, d1)) = self.cheapest_depot_chain(u, fuel, dk) else {
                continue;
            };
            let mut path = self.chain(u, d1, dk);
            path.push(v);
            out.push(Move { cost: to_dk + f_last, arrival: l - f_last, path });
        }
        // keep the Pareto front over (cost, arrival fuel)
        out.sort_by(|a, b| a.cost.total_cmp(&b.cost).then(b.arrival.total_cmp(&a.arrival)));
        let mut front: Vec<Move> = Vec::new();
        for m in out {
            if front.iter().all(|f| m.arrival > f.arrival + EPS) {
                front.push(m);
            }
        }
        front
    }

    /// Cheapest `f(u, d1) + l'(d1, dk)` over first depots reachable with `fuel`.
    fn cheapest_depot_chain(&self, u: usize, fuel: f64, dk: usize) -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for d1 in self.inst.depots() {
            let hop = if d1 == u { 0.0 } else { self.inst.fuel(u, d1) };
            if hop > fuel + EPS {
                continue;
            }
            let total = hop + self.table.l_depot(d1, dk);
            if total.is_finite() && best.is_none_or(|b| total < b.0) {
                best = Some((total, d1));
            }
        }
        best
    }

    fn chain(&self, u: usize, d1: usize, dk: usize) -> Vec<usize> {
        let seq = &self.table.depot_path(d1, dk).sequence;
        if d1 == u {
            seq[1..].to_vec()
        } else {
            seq.clone()
        }
    }

    fn finish(&self, u: usize, fuel: f64) -> Option<(f64, Vec<usize>)> {
        let s = self.inst.start();
        let direct = self.inst.fuel(u, s);
        let mut best = (direct <= fuel + EPS).then(|| (direct, vec![s]));
        if let Some((cost, d1)) = self.cheapest_depot_chain(u, fuel, s) {
            if best.as_ref().is_none_or(|b| cost < b.0) {
                best = Some((cost, self.chain(u, d1, s)));
            }
        }
        best
    }

    /// Sum of cheapest entries into every unvisited target and into `s`.
    fn lower_bound(&self, mask: u64, at: usize) -> f64 {
        let nt = self.inst.n_targets();
        let open: Vec<usize> = (0..nt).filter(|&t| mask & (1 << t) == 0).collect();
        if open.is_empty() {
            return 0.0;
        }
        let entry = |from: usize, to: usize| -> f64 {
            if self.inst.is_depot(from) {
                self.table.from_start(to).cost
            } else {
                self.table.l(from, to)
            }
        };
        let mut lb = 0.0;
        for &u in &open {
            let mut m = entry(at, u);
            for &v in &open {
                if v != u {
                    m = m.min(entry(v, u));
                }
            }
            lb += m;
        }
        lb + open.iter().map(|&v| self.table.to_start(v).cost).fold(f64::INFINITY, f64::min)
    }

    fn dominated(&mut self, mask: u64, at: usize, cost: f64, fuel: f64) -> bool {
        let labels = self.labels.entry((mask, at)).or_default();
        if labels.iter().any(|&(c, f)| c <= cost + EPS && f >= fuel - EPS) {
            return true;
        }
        labels.retain(|&(c, f)| !(cost <= c + EPS && fuel >= f - EPS));
        labels.push((cost, fuel));
        false
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        self.nodes += 1;
        let over_nodes = self.limits.max_nodes.is_some_and(|m| self.nodes > m);
        let over_time = self.nodes.is_multiple_of(1024) && self.limits.max_time.is_some_and(|t| self.started.elapsed() > t);
        if over_nodes || over_time {
            self.aborted = true;
        }
        self.aborted
    }

    fn dfs(&mut self, mask: u64, at: usize, fuel: f64, cost: f64, seq: &mut Vec<usize>) {
        if self.out_of_budget() {
            return;
        }
        let nt = self.inst.n_targets();
        if mask.count_ones() as usize == nt {
            if let Some((tail, path)) = self.finish(at, fuel) {
                if cost + tail < self.best_cost - EPS {
                    self.best_cost = cost + tail;
                    let mut full = seq.clone();
                    full.extend(path);
                    self.best_seq = Some(full);
                }
            }
            return;
        }
        if cost + self.lower_bound(mask, at) >= self.best_cost - EPS {
            return;
        }
        if mask != 0 && self.dominated(mask, at, cost, fuel) {
            return;
        }
        let mut children: Vec<(usize, Move)> = Vec::new();
        for v in (0..nt).filter(|&v| mask & (1 << v) == 0) {
            for m in self.moves(at, fuel, v) {
                children.push((v, m));
            }
        }
        children.sort_by(|a, b| a.1.cost.total_cmp(&b.1.cost).then(a.0.cmp(&b.0)));
        for (v, m) in children {
            let len = seq.len();
            seq.extend_from_slice(&m.path);
            self.dfs(mask | (1 << v), v, m.arrival, cost + m.cost, seq);
            seq.truncate(len);
            if self.aborted {
                return;
            }
        }
    }
}

pub fn solve_exact_with_table(inst: &Instance, table: &PathTable, limits: SearchLimits) -> Result<ExactResult> {
    assert!(inst.n_targets() <= 63, "exact search supports at most 63 targets");
    let started = Instant::now();
    let mut search = Search {
        inst,
        table,
        limits,
        started,
        nodes: 0,
        aborted: false,
        labels: HashMap::new(),
        best_cost: f64::INFINITY,
        best_seq: None,
    };
    let s = inst.start();
    let mut seq = vec![s];
    search.dfs(0, s, inst.capacity(), 0.0, &mut seq);

    let to_solution = |seq: Vec<usize>| {
        let tour = Tour::new(inst, seq);
        let refuels = tour.depot_visits(inst).saturating_sub(1);
        Solution::new(tour, refuels, "exact").with_elapsed(started.elapsed())
    };
    if search.aborted {
        return Ok(ExactResult::BoundOnly { incumbent: search.best_seq.map(to_solution), nodes: search.nodes });
    }
    match search.best_seq {
        Some(seq) => Ok(ExactResult::Optimal(to_solution(seq))),
        None => Err(Error::Infeasible("no fuel-feasible tour exists".into())),
    }
}

pub fn solve_exact(inst: &Instance, limits: SearchLimits) -> Result<ExactResult> {
    let table = build_path_table(inst, derive_constants(inst))?;
    solve_exact_with_table(inst, &table, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::verify;

    #[test]
    fn single_target_is_cheapest_round_trip() {
        let fuel = vec![vec![0.0, 4.0], vec![3.0, 0.0]];
        let inst = Instance::new(1, 1, 0, fuel, 10.0).unwrap();
        let sol = solve_exact(&inst, SearchLimits::default()).unwrap();
        let sol = sol.optimal().unwrap();
        assert_eq!(sol.tour.sequence, vec![1, 0, 1]);
        assert_eq!(sol.cost, 7.0);
    }

    #[test]
    fn refuel_stop_inserted_when_needed() {
        // t0, t1 far from each other, one depot between them
        let fuel = vec![vec![0.0, 8.0, 4.0], vec![8.0, 0.0, 4.0], vec![4.0, 4.0, 0.0]];
        let inst = Instance::new(2, 1, 0, fuel, 10.0).unwrap();
        let res = solve_exact(&inst, SearchLimits::default()).unwrap();
        let sol = res.optimal().unwrap();
        assert_eq!(sol.cost, 16.0);
        assert!(verify(&inst, &sol.tour.sequence).unwrap().feasible);
    }

    #[test]
    fn node_cap_yields_bound_only() {
        let fuel = vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ];
        let inst = Instance::new(3, 1, 0, fuel, 10.0).unwrap();
        let res = solve_exact(&inst, SearchLimits { max_nodes: Some(1), ..Default::default() });
        assert!(matches!(res.unwrap(), ExactResult::BoundOnly { .. }));
    }
}
