//! Segment-restricted 2- and 3-exchanges on a concrete tour.
//!
//! The tour is handled as a cycle (the closing `s` dropped). A segment of
//! span `n` is the `2n + 1` cyclic positions centred on a depot visit; only
//! edges between consecutive segment positions may be removed.

use serde::Serialize;

use crate::instance::{Instance, EPS};
use crate::tour::{sequence_cost, sequence_fuel_feasible, Tour};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// Cyclic position of the depot visit.
    pub center: usize,
    pub span: usize,
    /// Cyclic positions in tour order.
    pub window: Vec<usize>,
}

impl Segment {
    /// Positions `q` whose edge `q -> q + 1` lies inside the window.
    pub fn edges(&self, cycle_len: usize) -> Vec<usize> {
        if 2 * self.span >= cycle_len {
            let first = self.window[0];
            (0..cycle_len).map(|i| (first + i) % cycle_len).collect()
        } else {
            self.window[..self.window.len() - 1].to_vec()
        }
    }
}

/// Closed tour minus its repeated final vertex.
pub fn cycle_of(tour: &[usize]) -> &[usize] {
    &tour[..tour.len() - 1]
}

/// Rotates a cycle to begin at its first `s`, closes it, and merges
/// repeated consecutive vertices.
pub fn close_at(cycle: &[usize], s: usize) -> Vec<usize> {
    let m = cycle.len();
    let p = cycle.iter().position(|&v| v == s).expect("start depot must stay on the tour");
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let v = cycle[(p + i) % m];
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    if out.len() == 1 {
        out.push(s);
    }
    out
}

/// One segment per depot visit, in visit order.
pub fn segments(inst: &Instance, tour: &[usize], n: usize) -> Vec<Segment> {
    let cycle = cycle_of(tour);
    let m = cycle.len();
    let len = (2 * n + 1).min(m);
    cycle
        .iter()
        .enumerate()
        .filter(|(_, &v)| inst.is_depot(v))
        .map(|(p, _)| {
            let first = (p + m - n % m) % m;
            Segment { center: p, span: n, window: (0..len).map(|i| (first + i) % m).collect() }
        })
        .collect()
}

/// Reconnection of the pieces between removed edges: piece order and
/// which pieces run backwards. The piece holding the rest of the tour is
/// implicit, first, and never reversed.
#[derive(Clone, Copy, Debug)]
struct Pattern {
    order: [usize; 2],
    reversed: [bool; 2],
}

const PATTERNS_3: [Pattern; 7] = [
    Pattern { order: [0, 1], reversed: [true, false] },
    Pattern { order: [0, 1], reversed: [false, true] },
    Pattern { order: [0, 1], reversed: [true, true] },
    Pattern { order: [1, 0], reversed: [false, false] },
    Pattern { order: [1, 0], reversed: [true, false] },
    Pattern { order: [1, 0], reversed: [false, true] },
    Pattern { order: [1, 0], reversed: [true, true] },
];

struct Frame<'a> {
    inst: &'a Instance,
    /// Cycle rotated so removed-edge positions are increasing.
    r: Vec<usize>,
    fwd: Vec<f64>,
    bwd: Vec<f64>,
}

impl<'a> Frame<'a> {
    fn new(inst: &'a Instance, r: Vec<usize>) -> Self {
        let m = r.len();
        let mut fwd = vec![0.0; m];
        let mut bwd = vec![0.0; m];
        for i in 1..m {
            fwd[i] = fwd[i - 1] + inst.fuel(r[i - 1], r[i]);
            bwd[i] = bwd[i - 1] + inst.fuel(r[i], r[i - 1]);
        }
        Self { inst, r, fwd, bwd }
    }

    fn f(&self, a: usize, b: usize) -> f64 {
        self.inst.fuel(a, b)
    }

    /// Pieces `[q_i + 1, q_{i+1}]` between consecutive removed edges.
    fn pieces(cuts: &[usize]) -> Vec<(usize, usize)> {
        cuts.windows(2).map(|w| (w[0] + 1, w[1])).collect()
    }

    fn ends(&self, piece: (usize, usize), rev: bool) -> (usize, usize) {
        if rev {
            (self.r[piece.1], self.r[piece.0])
        } else {
            (self.r[piece.0], self.r[piece.1])
        }
    }

    fn inner(&self, piece: (usize, usize), rev: bool) -> f64 {
        if rev {
            self.bwd[piece.1] - self.bwd[piece.0]
        } else {
            self.fwd[piece.1] - self.fwd[piece.0]
        }
    }

    /// Cost change of rearranging the pieces after `cuts` as `(order, reversed)`.
    fn delta(&self, cuts: &[usize], order: &[usize], reversed: &[bool]) -> f64 {
        let m = self.r.len();
        let pieces = Self::pieces(cuts);
        let last = *cuts.last().unwrap();
        let head = self.r[cuts[0]];
        let tail = self.r[(last + 1) % m];
        let mut old = 0.0;
        for &q in cuts {
            old += self.f(self.r[q], self.r[(q + 1) % m]);
        }
        let mut new = 0.0;
        let mut at = head;
        for (&k, &rev) in order.iter().zip(reversed) {
            let (first, end) = self.ends(pieces[k], rev);
            new += self.f(at, first) + self.inner(pieces[k], rev);
            old += self.inner(pieces[k], false);
            at = end;
        }
        new + self.f(at, tail) - old
    }

    fn apply(&self, cuts: &[usize], order: &[usize], reversed: &[bool]) -> Vec<usize> {
        let pieces = Self::pieces(cuts);
        let last = *cuts.last().unwrap();
        let mut out: Vec<usize> = self.r[..=cuts[0]].to_vec();
        for (&k, &rev) in order.iter().zip(reversed) {
            let (a, b) = pieces[k];
            if rev {
                out.extend(self.r[a..=b].iter().rev());
            } else {
                out.extend_from_slice(&self.r[a..=b]);
            }
        }
        out.extend_from_slice(&self.r[last + 1..]);
        out
    }
}

struct Candidate {
    delta: f64,
    cycle: Vec<usize>,
}

/// Every improving exchange of `2..=k` edges inside `seg`, best first.
fn candidates(inst: &Instance, cycle: &[usize], seg: &Segment, k: usize) -> Vec<Candidate> {
    let m = cycle.len();
    let edges = seg.edges(m);
    if edges.len() < 2 {
        return Vec::new();
    }
    // rotate so the segment's edges are increasing positions starting at 0
    let shift = edges[0];
    let r: Vec<usize> = (0..m).map(|i| cycle[(shift + i) % m]).collect();
    let frame = Frame::new(inst, r);
    let local: Vec<usize> = edges.iter().map(|&q| (q + m - shift) % m).collect();

    let mut out = Vec::new();
    let mut consider = |cuts: &[usize], order: &[usize], reversed: &[bool]| {
        let delta = frame.delta(cuts, order, reversed);
        if delta < -EPS {
            out.push(Candidate { delta, cycle: frame.apply(cuts, order, reversed) });
        }
    };
    for (i, &a) in local.iter().enumerate() {
        for (j, &b) in local.iter().enumerate().skip(i + 1) {
            consider(&[a, b], &[0], &[true]);
            if k < 3 {
                continue;
            }
            for &c in &local[j + 1..] {
                for p in &PATTERNS_3 {
                    consider(&[a, b, c], &p.order, &p.reversed);
                }
            }
        }
    }
    out.sort_by(|x, y| x.delta.total_cmp(&y.delta));
    out
}

/// Repeats passes over the depot visits, applying the best feasible
/// improving exchange in each segment, until a pass changes nothing.
pub fn k_opt(inst: &Instance, tour: &Tour, k: usize, n: usize) -> Tour {
    assert!((2..=3).contains(&k), "k must be 2 or 3");
    assert!(n >= 1, "span must be positive");
    let s = inst.start();
    let mut seq = tour.sequence.clone();
    let mut cost = tour.cost;
    loop {
        let mut improved = false;
        let visits = segments(inst, &seq, n).len();
        for i in 0..visits {
            let segs = segments(inst, &seq, n);
            let Some(seg) = segs.get(i) else { break };
            let cycle = cycle_of(&seq).to_vec();
            for cand in candidates(inst, &cycle, seg, k) {
                let next = close_at(&cand.cycle, s);
                if !sequence_fuel_feasible(inst, &next) {
                    continue;
                }
                let next_cost = sequence_cost(inst, &next);
                if next_cost < cost - EPS {
                    seq = next;
                    cost = next_cost;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Tour::new(inst, seq)
}
