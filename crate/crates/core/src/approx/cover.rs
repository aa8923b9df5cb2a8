//! Repeated minimum cycle covers over the `l` metric, unioned into an
//! Eulerian multigraph and walked as a single closed target sequence.

use serde::Serialize;

use super::hungarian::min_cost_assignment;
use crate::paths::PathTable;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleCover {
    pub edges: Vec<(usize, usize)>,
    /// Each cycle starts at its lowest-index member.
    pub cycles: Vec<Vec<usize>>,
    pub cost: f64,
}

/// Minimum-cost cycle cover on `targets` (at least two) under `cost`.
/// Self-assignment is priced at `1e6 * max cost` and never selected.
pub fn min_cycle_cover(targets: &[usize], cost: impl Fn(usize, usize) -> f64) -> CycleCover {
    let m = targets.len();
    assert!(m >= 2, "a cycle cover needs at least two vertices");
    let max_cost = targets
        .iter()
        .flat_map(|&x| targets.iter().filter(move |&&y| y != x).map(move |&y| (x, y)))
        .map(|(x, y)| cost(x, y))
        .fold(0.0f64, f64::max);
    let forbidden = 1e6 * max_cost.max(1.0);
    let matrix: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { forbidden } else { cost(targets[i], targets[j]) }).collect())
        .collect();
    let (assign, _) = min_cost_assignment(&matrix);
    assert!(assign.iter().enumerate().all(|(i, &j)| i != j), "cycle cover selected a self-loop");

    let mut seen = vec![false; m];
    let mut cycles = Vec::new();
    let mut edges = Vec::with_capacity(m);
    // visit positions in order of target index so each cycle starts at its minimum
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| targets[i]);
    for &start in &order {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(targets[i]);
            edges.push((targets[i], targets[assign[i]]));
            i = assign[i];
        }
        cycles.push(cycle);
    }
    let total = edges.iter().map(|&(x, y)| cost(x, y)).sum();
    CycleCover { edges, cycles, cost: total }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringTour {
    /// Closed target walk; the edge from the last element back to the first
    /// is implied. Targets may repeat.
    pub sequence: Vec<usize>,
    /// Summed cost of every cycle cover.
    pub cover_cost: f64,
    /// Number of selected vertices entering each round.
    pub round_sizes: Vec<usize>,
}

impl CoveringTour {
    pub fn rounds(&self) -> usize {
        self.round_sizes.len()
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    assert!(n >= 1);
    usize::BITS - (n - 1).leading_zeros()
}

pub fn covering_tour(table: &PathTable) -> CoveringTour {
    let nt = table.n_targets();
    if nt == 1 {
        return CoveringTour { sequence: vec![0], cover_cost: 0.0, round_sizes: Vec::new() };
    }
    let mut selected: Vec<usize> = (0..nt).collect();
    let mut all_edges = Vec::new();
    let mut cover_cost = 0.0;
    let mut round_sizes = Vec::new();
    loop {
        round_sizes.push(selected.len());
        let cover = min_cycle_cover(&selected, |x, y| table.l(x, y));
        cover_cost += cover.cost;
        all_edges.extend_from_slice(&cover.edges);
        if cover.cycles.len() == 1 {
            break;
        }
        selected = cover.cycles.iter().map(|c| c[0]).collect();
    }
    let sequence = euler_circuit(nt, &all_edges, 0);
    CoveringTour { sequence, cover_cost, round_sizes }
}

/// Hierholzer walk over a balanced connected multigraph. Out-edges are used
/// in `(tail, head)` order. The returned walk omits the closing vertex.
pub fn euler_circuit(n: usize, edges: &[(usize, usize)], start: usize) -> Vec<usize> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    for list in &mut adj {
        // popped from the back, so store descending
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut stack = vec![start];
    let mut circuit = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        if let Some(w) = adj[v].pop() {
            stack.push(w);
        } else {
            circuit.push(stack.pop().unwrap());
        }
    }
    circuit.reverse();
    debug_assert_eq!(circuit.len(), edges.len() + 1, "graph is not Eulerian and connected");
    circuit.pop();
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertices_form_one_two_cycle() {
        let cover = min_cycle_cover(&[0, 1], |x, y| if x < y { 3.0 } else { 4.0 });
        assert_eq!(cover.cycles, vec![vec![0, 1]]);
        assert_eq!(cover.cost, 7.0);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(25), 5);
    }

    #[test]
    fn euler_circuit_uses_every_edge_once() {
        // two 2-cycles joined by a second-round 2-cycle between 0 and 2
        let edges = [(0, 1), (1, 0), (2, 3), (3, 2), (0, 2), (2, 0)];
        let walk = euler_circuit(4, &edges, 0);
        assert_eq!(walk.len(), edges.len());
        let mut used: Vec<(usize, usize)> = (0..walk.len()).map(|i| (walk[i], walk[(i + 1) % walk.len()])).collect();
        used.sort_unstable();
        let mut expect = edges.to_vec();
        expect.sort_unstable();
        assert_eq!(used, expect);
    }
}
