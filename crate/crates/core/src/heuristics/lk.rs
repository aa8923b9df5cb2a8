//! Asymmetric TSP tour by nearest neighbour, then edge-exchange local search
//! with don't-look bits, wrapped in iterated local search with double-bridge
//! kicks.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IMPROVE: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub struct LkParams {
    pub seed: u64,
    /// Kick-and-reoptimize rounds after the first local optimum.
    pub kicks: usize,
}

impl Default for LkParams {
    fn default() -> Self {
        Self { seed: 0x5EED, kicks: 200 }
    }
}

pub fn cycle_cost(order: &[usize], cost: &impl Fn(usize, usize) -> f64) -> f64 {
    let n = order.len();
    (0..n).map(|i| cost(order[i], order[(i + 1) % n])).sum()
}

/// Greedy walk from `first`, always to the cheapest unvisited vertex.
pub fn nearest_neighbour(n: usize, first: usize, cost: &impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut at = first;
    used[at] = true;
    order.push(at);
    for _ in 1..n {
        let mut best = (f64::INFINITY, usize::MAX);
        for v in (0..n).filter(|&v| !used[v]) {
            let c = cost(at, v);
            if c < best.0 {
                best = (c, v);
            }
        }
        at = best.1;
        used[at] = true;
        order.push(at);
    }
    order
}

/// Tries every move whose first removed edge leaves `t[0]`. Returns the
/// rearranged cycle for the first improving move.
fn improve_from(t: &[usize], cost: &impl Fn(usize, usize) -> f64) -> Option<Vec<usize>> {
    let n = t.len();
    if n < 3 {
        return None;
    }
    let mut fwd = vec![0.0; n];
    let mut bwd = vec![0.0; n];
    for i in 1..n {
        fwd[i] = fwd[i - 1] + cost(t[i - 1], t[i]);
        bwd[i] = bwd[i - 1] + cost(t[i], t[i - 1]);
    }
    let next = |i: usize| t[(i + 1) % n];

    // reverse t[1..=q]
    for q in 2..n {
        let old = cost(t[0], t[1]) + cost(t[q], next(q)) + fwd[q] - fwd[1];
        let new = cost(t[0], t[q]) + cost(t[1], next(q)) + bwd[q] - bwd[1];
        if new < old - IMPROVE {
            let mut out = t.to_vec();
            out[1..=q].reverse();
            return Some(out);
        }
    }
    // swap t[1..=j] and t[j+1..=k], keeping orientation
    for j in 1..n - 1 {
        for k in j + 1..n {
            let old = cost(t[0], t[1]) + cost(t[j], t[j + 1]) + cost(t[k], next(k));
            let new = cost(t[0], t[j + 1]) + cost(t[k], t[1]) + cost(t[j], next(k));
            if new < old - IMPROVE {
                let mut out = Vec::with_capacity(n);
                out.push(t[0]);
                out.extend_from_slice(&t[j + 1..=k]);
                out.extend_from_slice(&t[1..=j]);
                out.extend_from_slice(&t[k + 1..]);
                return Some(out);
            }
        }
    }
    None
}

/// Local search to a 2-opt / or-3-opt optimum.
pub fn local_search(order: &mut Vec<usize>, cost: &impl Fn(usize, usize) -> f64) {
    let n = order.len();
    if n < 3 {
        return;
    }
    let mut queued = vec![true; n];
    let mut queue: VecDeque<usize> = order.iter().copied().collect();
    while let Some(c) = queue.pop_front() {
        queued[c] = false;
        let p = order.iter().position(|&v| v == c).unwrap();
        let rotated: Vec<usize> = order[p..].iter().chain(&order[..p]).copied().collect();
        if let Some(better) = improve_from(&rotated, cost) {
            // wake the endpoints of every changed edge
            for i in 0..n {
                let (a, b) = (better[i], better[(i + 1) % n]);
                let pa = rotated.iter().position(|&v| v == a).unwrap();
                if rotated[(pa + 1) % n] != b {
                    for v in [a, b] {
                        if !queued[v] {
                            queued[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            if !queued[c] {
                queued[c] = true;
                queue.push_back(c);
            }
            *order = better;
        }
    }
}

fn double_bridge(order: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = order.len();
    let mut cuts = [rng.gen_range(1..n), rng.gen_range(1..n), rng.gen_range(1..n)];
    cuts.sort_unstable();
    let [a, b, c] = cuts;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&order[..a]);
    out.extend_from_slice(&order[b..c]);
    out.extend_from_slice(&order[a..b]);
    out.extend_from_slice(&order[c..]);
    out
}

/// Closed tour over `0..n`, grown by nearest neighbour from `first`.
pub fn atsp_tour(n: usize, first: usize, cost: &impl Fn(usize, usize) -> f64, params: LkParams) -> Vec<usize> {
    assert!(n >= 1 && first < n);
    let mut best = nearest_neighbour(n, first, cost);
    local_search(&mut best, cost);
    if n < 8 {
        // the kick needs three distinct interior cuts to do anything useful
        return best;
    }
    let mut best_cost = cycle_cost(&best, cost);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.kicks {
        let mut cand = double_bridge(&best, &mut rng);
        local_search(&mut cand, cost);
        let c = cycle_cost(&cand, cost);
        if c < best_cost - IMPROVE {
            best = cand;
            best_cost = c;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                (a.cos(), a.sin())
            })
            .collect()
    }

    #[test]
    fn scrambled_circle_comes_back_in_hull_order() {
        let n = 12;
        let pts = circle(n);
        // relabel so index order is not hull order
        let perm: Vec<usize> = (0..n).map(|i| (i * 5) % n).collect();
        let cost = |a: usize, b: usize| {
            let (p, q) = (pts[perm[a]], pts[perm[b]]);
            (p.0 - q.0).hypot(p.1 - q.1)
        };
        let tour = atsp_tour(n, 0, &cost, LkParams::default());
        let hull = n as f64 * 2.0 * (std::f64::consts::PI / n as f64).sin();
        assert!((cycle_cost(&tour, &cost) - hull).abs() < 1e-9);
        let mut sorted = tour.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn local_search_is_a_fixed_point_on_optimal_tour() {
        let pts = circle(6);
        let cost = |a: usize, b: usize| {
            let (p, q) = (pts[a], pts[b]);
            (p.0 - q.0).hypot(p.1 - q.1)
        };
        let mut order: Vec<usize> = (0..6).collect();
        local_search(&mut order, &cost);
        assert_eq!(order, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn asymmetric_reversal_cost_respected() {
        // going "up" the index order is cheap, "down" is expensive
        let cost = |a: usize, b: usize| if b == (a + 1) % 5 { 1.0 } else { 10.0 };
        let mut order = vec![0, 4, 3, 2, 1];
        local_search(&mut order, &cost);
        assert_eq!(cycle_cost(&order, &cost), 5.0);
    }
}
