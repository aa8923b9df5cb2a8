//! Least-fuel refuel-feasible paths between targets (through intermediate
//! depots when the direct edge is too expensive) and between depots.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{DerivedConstants, Instance, EPS};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasiblePath {
    /// Endpoints first and last; every interior vertex is a depot.
    pub sequence: Vec<usize>,
    pub cost: f64,
    pub direct: bool,
}

impl FeasiblePath {
    fn new(sequence: Vec<usize>, cost: f64) -> Self {
        let direct = sequence.len() == 2;
        Self { sequence, cost, direct }
    }

    /// Interior depots, empty for a direct path.
    pub fn interior(&self) -> &[usize] {
        let n = self.sequence.len();
        if n <= 2 {
            &[]
        } else {
            &self.sequence[1..n - 1]
        }
    }
}

/// Path-search label; ordering is cost, then hop count, then the depot
/// sequence lexicographically.
#[derive(Clone, Debug)]
struct Label {
    cost: f64,
    hops: usize,
    seq: Vec<usize>,
}

impl Label {
    fn better_than(&self, other: &Label) -> bool {
        match self.cost.total_cmp(&other.cost) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => (self.hops, &self.seq) < (other.hops, &other.seq),
        }
    }
}

/// Dense label-setting search over `n` nodes with `O(n^2)` work.
fn label_setting(
    n: usize,
    source: usize,
    sink: usize,
    edge: impl Fn(usize, usize) -> Option<f64>,
) -> Option<(f64, Vec<usize>)> {
    let mut best: Vec<Option<Label>> = vec![None; n];
    let mut done = vec![false; n];
    best[source] = Some(Label { cost: 0.0, hops: 0, seq: vec![source] });
    loop {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(lv) = &best[v] {
                if pick.is_none_or(|p| lv.better_than(best[p].as_ref().unwrap())) {
                    pick = Some(v);
                }
            }
        }
        let u = pick?;
        if u == sink {
            let l = best[u].take().unwrap();
            return Some((l.cost, l.seq));
        }
        done[u] = true;
        let lu = best[u].clone().unwrap();
        for v in 0..n {
            if done[v] || v == u {
                continue;
            }
            if let Some(w) = edge(u, v) {
                let mut seq = lu.seq.clone();
                seq.push(v);
                let cand = Label { cost: lu.cost + w, hops: lu.hops + 1, seq };
                if best[v].as_ref().is_none_or(|cur| cand.better_than(cur)) {
                    best[v] = Some(cand);
                }
            }
        }
    }
}

/// Least-fuel path from `from` to `to` where the vehicle holds at most
/// `budget` fuel on leaving `from` and must keep `reserve` on reaching `to`.
///
/// The direct edge is taken whenever `budget - reserve >= f(from, to)`.
/// Otherwise the search runs over the auxiliary graph: `from -> d` when
/// `f <= budget`, `d1 -> d2` when `f <= L`, `d -> to` when `f <= L - reserve`.
/// Depot endpoints take part in the depot graph directly.
pub fn least_fuel_path(inst: &Instance, from: usize, to: usize, budget: f64, reserve: f64) -> Result<FeasiblePath> {
    let direct = inst.fuel(from, to);
    if direct <= budget - reserve + EPS {
        return Ok(FeasiblePath::new(vec![from, to], direct));
    }
    let l = inst.capacity();
    let nd = inst.n_depots();
    // node layout: depots 0..nd, then a source node and a sink node for
    // non-depot endpoints
    let node_of = |v: usize| -> usize {
        if inst.is_depot(v) {
            v - inst.n_targets()
        } else if v == from {
            nd
        } else {
            nd + 1
        }
    };
    let vertex_of = |node: usize| -> usize {
        if node < nd {
            inst.depot(node)
        } else if node == nd {
            from
        } else {
            to
        }
    };
    let source = node_of(from);
    let sink = node_of(to);
    let edge = |u: usize, v: usize| -> Option<f64> {
        let (a, b) = (vertex_of(u), vertex_of(v));
        if a == to || b == from {
            return None;
        }
        let limit = match (inst.is_depot(a), inst.is_depot(b)) {
            (true, true) => {
                let mut lim = l;
                if a == from {
                    lim = lim.min(budget);
                }
                if b == to {
                    lim = lim.min(l - reserve);
                }
                lim
            }
            (false, true) => budget,
            (true, false) => l - reserve,
            // target-to-target edges only exist as the direct case above
            (false, false) => return None,
        };
        let w = inst.fuel(a, b);
        (w <= limit + EPS).then_some(w)
    };
    let (cost, nodes) = label_setting(nd + 2, source, sink, edge).ok_or(Error::NoFeasiblePath { from, to })?;
    Ok(FeasiblePath::new(nodes.into_iter().map(vertex_of).collect(), cost))
}

/// `PATH(x, y)` between two distinct targets.
pub fn target_path(inst: &Instance, k: &DerivedConstants, x: usize, y: usize) -> Result<FeasiblePath> {
    debug_assert!(x != y && inst.is_target(x) && inst.is_target(y));
    least_fuel_path(inst, x, y, inst.capacity() - k.c[x], k.b[y])
}

/// Least-fuel path between two depots over edges with `f <= L`.
pub fn depot_path(inst: &Instance, from: usize, to: usize) -> Result<FeasiblePath> {
    debug_assert!(inst.is_depot(from) && inst.is_depot(to));
    if from == to {
        return Ok(FeasiblePath { sequence: vec![from], cost: 0.0, direct: false });
    }
    least_fuel_path(inst, from, to, inst.capacity(), 0.0)
}

/// All-pairs depot path costs `l'` as a row-major `|D| x |D|` matrix
/// (`+inf` when unreachable, 0 on the diagonal).
pub fn depot_path_costs(inst: &Instance) -> Vec<f64> {
    let nd = inst.n_depots();
    let mut out = vec![0.0; nd * nd];
    for a in 0..nd {
        for b in 0..nd {
            if a != b {
                out[a * nd + b] =
                    depot_path(inst, inst.depot(a), inst.depot(b)).map(|p| p.cost).unwrap_or(f64::INFINITY);
            }
        }
    }
    out
}

/// Every least-fuel path the solvers need, computed once per instance.
#[derive(Clone, Debug, Serialize)]
pub struct PathTable {
    n_targets: usize,
    n_depots: usize,
    target_paths: Vec<Option<FeasiblePath>>,
    depot_paths: Vec<FeasiblePath>,
    from_start: Vec<FeasiblePath>,
    to_start: Vec<FeasiblePath>,
    pub constants: DerivedConstants,
}

impl PathTable {
    pub fn build(inst: &Instance, constants: DerivedConstants) -> Result<Self> {
        let nt = inst.n_targets();
        let nd = inst.n_depots();
        let mut target_paths = Vec::with_capacity(nt * nt);
        for x in 0..nt {
            for y in 0..nt {
                target_paths.push(if x == y { None } else { Some(target_path(inst, &constants, x, y)?) });
            }
        }
        let mut depot_paths = Vec::with_capacity(nd * nd);
        for a in 0..nd {
            for b in 0..nd {
                depot_paths.push(depot_path(inst, inst.depot(a), inst.depot(b))?);
            }
        }
        // the start depot leaves with a full tank and needs no reserve
        let s = inst.start();
        let l = inst.capacity();
        let from_start = (0..nt).map(|t| least_fuel_path(inst, s, t, l, constants.b[t])).collect::<Result<Vec<_>>>()?;
        let to_start =
            (0..nt).map(|t| least_fuel_path(inst, t, s, l - constants.c[t], 0.0)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n_targets: nt, n_depots: nd, target_paths, depot_paths, from_start, to_start, constants })
    }

    pub fn n_targets(&self) -> usize {
        self.n_targets
    }

    /// `PATH(x, y)` for distinct targets.
    pub fn target_path(&self, x: usize, y: usize) -> &FeasiblePath {
        self.target_paths[x * self.n_targets + y].as_ref().expect("no path from a target to itself")
    }

    /// `l_xy`; zero when `x == y`.
    pub fn l(&self, x: usize, y: usize) -> f64 {
        self.target_paths[x * self.n_targets + y].as_ref().map_or(0.0, |p| p.cost)
    }

    /// Depot path between global depot vertices.
    pub fn depot_path(&self, from: usize, to: usize) -> &FeasiblePath {
        let a = from - self.n_targets;
        let b = to - self.n_targets;
        &self.depot_paths[a * self.n_depots + b]
    }

    /// `l'` between global depot vertices.
    pub fn l_depot(&self, from: usize, to: usize) -> f64 {
        self.depot_path(from, to).cost
    }

    pub fn from_start(&self, t: usize) -> &FeasiblePath {
        &self.from_start[t]
    }

    pub fn to_start(&self, t: usize) -> &FeasiblePath {
        &self.to_start[t]
    }

    pub fn iter_target_paths(&self) -> impl Iterator<Item = &FeasiblePath> {
        self.target_paths.iter().flatten()
    }
}

pub fn build_path_table(inst: &Instance, constants: DerivedConstants) -> Result<PathTable> {
    PathTable::build(inst, constants)
}
