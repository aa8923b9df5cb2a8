//! Reference implementations shared by the integration tests. Nothing here
//! calls the solver internals it is used to check.

#![allow(dead_code)]

use std::f64::consts::TAU;
use std::io::Write;
use std::process::Command;

use fcurp_core::experiment::{generate, GenParams, Metric};
use fcurp_core::{Instance, Pose, EPS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------- Dubins

fn wrap(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Turn {
    L,
    R,
    S,
}

fn turn_center(x: f64, y: f64, h: f64, r: f64, t: Turn) -> (f64, f64) {
    match t {
        Turn::L => (x - r * h.sin(), y + r * h.cos()),
        Turn::R => (x + r * h.sin(), y - r * h.cos()),
        Turn::S => unreachable!(),
    }
}

/// Flies `word` with extents (arcs in radians, straight in length units).
pub fn fly(from: &Pose, r: f64, word: [Turn; 3], ext: [f64; 3]) -> (f64, f64, f64) {
    let (mut x, mut y, mut h) = (from.x, from.y, from.heading);
    for (t, e) in word.into_iter().zip(ext) {
        match t {
            Turn::S => {
                x += e * h.cos();
                y += e * h.sin();
            }
            Turn::L => {
                let (cx, cy) = turn_center(x, y, h, r, t);
                h += e;
                x = cx + r * h.sin();
                y = cy - r * h.cos();
            }
            Turn::R => {
                let (cx, cy) = turn_center(x, y, h, r, t);
                h -= e;
                x = cx - r * h.sin();
                y = cy + r * h.cos();
            }
        }
    }
    (x, y, h)
}

fn lands(from: &Pose, to: &Pose, r: f64, word: [Turn; 3], ext: [f64; 3]) -> bool {
    let (x, y, h) = fly(from, r, word, ext);
    let dh = wrap(h - to.heading);
    let dh = dh.min(TAU - dh);
    (x - to.x).hypot(y - to.y) < 1e-6 * r.max(1.0) && dh < 1e-7
}

/// Candidate paths built from circle tangents, each confirmed by flying it.
pub fn dubins_candidates(from: &Pose, to: &Pose, r: f64) -> Vec<([Turn; 3], [f64; 3])> {
    use Turn::*;
    let mut out = Vec::new();
    for (a, b) in [(L, L), (R, R), (L, R), (R, L)] {
        let c1 = turn_center(from.x, from.y, from.heading, r, a);
        let c2 = turn_center(to.x, to.y, to.heading, r, b);
        let (dx, dy) = (c2.0 - c1.0, c2.1 - c1.1);
        let d = dx.hypot(dy);
        let base = dy.atan2(dx);
        let (psi, len) = match (a, b) {
            (L, L) | (R, R) => (base, d),
            _ => {
                if d < 2.0 * r {
                    continue;
                }
                let len = (d * d - 4.0 * r * r).max(0.0).sqrt();
                let off = (2.0 * r).atan2(len);
                (if a == L { base + off } else { base - off }, len)
            }
        };
        let first = if a == L { wrap(psi - from.heading) } else { wrap(from.heading - psi) };
        let last = if b == L { wrap(to.heading - psi) } else { wrap(psi - to.heading) };
        out.push(([a, S, b], [first, len, last]));
    }
    for a in [L, R] {
        let mid = if a == L { R } else { L };
        let c1 = turn_center(from.x, from.y, from.heading, r, a);
        let c2 = turn_center(to.x, to.y, to.heading, r, a);
        let (dx, dy) = (c2.0 - c1.0, c2.1 - c1.1);
        let d = dx.hypot(dy);
        if d > 4.0 * r {
            continue;
        }
        let h = (4.0 * r * r - d * d / 4.0).max(0.0).sqrt();
        let (mx, my) = ((c1.0 + c2.0) / 2.0, (c1.1 + c2.1) / 2.0);
        let (nx, ny) = if d > 0.0 { (-dy / d, dx / d) } else { (1.0, 0.0) };
        for sign in [1.0, -1.0] {
            let c3 = (mx + sign * h * nx, my + sign * h * ny);
            // tangent headings where the middle circle meets the outer ones
            let (u1, u2) = if a == L {
                ((c3.0 - c1.0, c3.1 - c1.1), (c3.0 - c2.0, c3.1 - c2.1))
            } else {
                ((c1.0 - c3.0, c1.1 - c3.1), (c2.0 - c3.0, c2.1 - c3.1))
            };
            let phi1 = u1.0.atan2(-u1.1);
            let phi2 = u2.0.atan2(-u2.1);
            let ext = if a == L {
                [wrap(phi1 - from.heading), wrap(phi1 - phi2), wrap(to.heading - phi2)]
            } else {
                [wrap(from.heading - phi1), wrap(phi2 - phi1), wrap(phi2 - to.heading)]
            };
            out.push(([a, mid, a], ext));
        }
    }
    out.into_iter().filter(|&(w, e)| lands(from, to, r, w, e)).collect()
}

pub fn path_length(r: f64, word: [Turn; 3], ext: [f64; 3]) -> f64 {
    word.iter().zip(ext).map(|(t, e)| if *t == Turn::S { e } else { r * e }).sum()
}

/// Shortest path length by tangent construction over all six words.
pub fn dubins_oracle(from: &Pose, to: &Pose, r: f64) -> f64 {
    if from.x == to.x && from.y == to.y && wrap(from.heading - to.heading) == 0.0 {
        return 0.0;
    }
    dubins_candidates(from, to, r).into_iter().map(|(w, e)| path_length(r, w, e)).fold(f64::INFINITY, f64::min)
}

/// Pose pairs: half spread over a 5000 square, half close enough for
/// three-arc paths to matter.
pub fn random_pose_pairs(n: usize, seed: u64) -> Vec<(Pose, Pose)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let spread = if i % 2 == 0 { 5000.0 } else { 300.0 };
            let a = Pose::new(rng.gen_range(0.0..spread), rng.gen_range(0.0..spread), rng.gen_range(0.0..TAU));
            let b = Pose::new(rng.gen_range(0.0..spread), rng.gen_range(0.0..spread), rng.gen_range(0.0..TAU));
            (a, b)
        })
        .collect()
}

// ------------------------------------------------------- depot chains

/// Every simple depot sequence whose hops fit in the tank, with its cost.
pub fn depot_chains(inst: &Instance) -> Vec<(Vec<usize>, f64)> {
    let l = inst.capacity();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, f64)> = inst.depots().map(|d| (vec![d], 0.0)).collect();
    while let Some((chain, cost)) = stack.pop() {
        let last = *chain.last().unwrap();
        for d in inst.depots() {
            if !chain.contains(&d) && inst.fuel(last, d) <= l + EPS {
                let mut next = chain.clone();
                next.push(d);
                stack.push((next, cost + inst.fuel(last, d)));
            }
        }
        out.push((chain, cost));
    }
    out
}

/// Cheapest `x -> depots... -> y` walk with fuel `start_fuel` on leaving `x`
/// and at least `reserve` left at `y`, by enumerating every depot chain.
/// `None` when only the direct edge (or nothing) works.
pub fn best_chain_path(
    inst: &Instance,
    chains: &[(Vec<usize>, f64)],
    x: usize,
    y: usize,
    start_fuel: f64,
    reserve: f64,
) -> Option<f64> {
    let l = inst.capacity();
    chains
        .iter()
        .filter(|(c, _)| {
            inst.fuel(x, c[0]) <= start_fuel + EPS && inst.fuel(*c.last().unwrap(), y) <= l - reserve + EPS
        })
        .map(|(c, cost)| inst.fuel(x, c[0]) + cost + inst.fuel(*c.last().unwrap(), y))
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))))
}

pub fn c_b(inst: &Instance, x: usize) -> (f64, f64) {
    let c = inst.depots().map(|d| inst.fuel(d, x)).fold(f64::INFINITY, f64::min);
    let b = inst.depots().map(|d| inst.fuel(x, d)).fold(f64::INFINITY, f64::min);
    (c, b)
}

// ------------------------------------------------------ exhaustive FCURP

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Optimal tour cost over every target order and every way of inserting
/// depot chains between consecutive stops.
pub fn exhaustive_optimum(inst: &Instance) -> f64 {
    let l = inst.capacity();
    let s = inst.start();
    let chains = depot_chains(inst);
    let mut best = f64::INFINITY;
    for order in permutations(inst.n_targets()) {
        // (fuel on hand, cost so far); states with equal fuel merged
        let mut states: Vec<(f64, f64)> = vec![(l, 0.0)];
        let mut at = s;
        for &v in &order {
            let mut next: Vec<(f64, f64)> = Vec::new();
            let mut add = |fuel: f64, cost: f64| match next.iter_mut().find(|(f, _)| *f == fuel) {
                Some(e) => e.1 = e.1.min(cost),
                None => next.push((fuel, cost)),
            };
            for &(fuel, cost) in &states {
                let f = inst.fuel(at, v);
                if f <= fuel + EPS {
                    add(fuel - f, cost + f);
                }
                for (c, cc) in &chains {
                    let (first, last) = (c[0], *c.last().unwrap());
                    let hop = inst.fuel(at, first);
                    let tail = inst.fuel(last, v);
                    if hop <= fuel + EPS && tail <= l + EPS {
                        add(l - tail, cost + hop + cc + tail);
                    }
                }
            }
            states = next;
            at = v;
        }
        for &(fuel, cost) in &states {
            let f = inst.fuel(at, s);
            if f <= fuel + EPS {
                best = best.min(cost + f);
            }
            for (c, cc) in &chains {
                if *c.last().unwrap() != s {
                    continue;
                }
                let hop = inst.fuel(at, c[0]);
                if hop <= fuel + EPS {
                    best = best.min(cost + hop + cc);
                }
            }
        }
    }
    best
}

// ---------------------------------------------------------- instances

pub fn euclidean_instance(n_targets: usize, n_depots: usize, seed: u64) -> Instance {
    generate(&GenParams { n_targets, n_depots, seed, metric: Metric::Euclidean, ..Default::default() }).unwrap()
}

pub fn dubins_instance(n_targets: usize, n_depots: usize, seed: u64) -> Instance {
    generate(&GenParams { n_targets, n_depots, seed, ..Default::default() }).unwrap()
}

/// Random metric instance from points in a small square; capacity chosen so
/// that some pairs need refuelling.
pub fn random_small_instance(n_targets: usize, n_depots: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<(f64, f64)> =
            (0..n_targets + n_depots).map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
        let fuel: Vec<Vec<f64>> =
            pts.iter().map(|a| pts.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).collect()).collect();
        let capacity = rng.gen_range(6.0..16.0);
        let inst = Instance::new(n_targets, n_depots, 0, fuel, capacity).unwrap();
        if fcurp_core::validate(&inst).is_ok() && !fcurp_core::derive_constants(&inst).degenerate_bound {
            return inst;
        }
    }
}

// -------------------------------------------------------------- HiGHS

const HIGHS_SCRIPT: &str = r#"
import sys, highspy
h = highspy.Highs()
h.setOptionValue("output_flag", False)
h.setOptionValue("mip_rel_gap", 0.0)
h.setOptionValue("mip_abs_gap", 1e-9)
h.setOptionValue("mip_feasibility_tolerance", 1e-9)
h.setOptionValue("primal_feasibility_tolerance", 1e-9)
h.readModel(sys.argv[1])
h.run()
print(h.modelStatusToString(h.getModelStatus()))
print(repr(h.getInfo().objective_function_value))
"#;

/// Solves an LP file with HiGHS (through its Python bindings). Returns the
/// optimal objective, or an error describing why no optimum came back.
pub fn highs_solve(lp_text: &str) -> Result<f64, String> {
    let mut file = tempfile::Builder::new().suffix(".lp").tempfile().map_err(|e| e.to_string())?;
    file.write_all(lp_text.as_bytes()).map_err(|e| e.to_string())?;
    let out = Command::new("python3")
        .arg("-c")
        .arg(HIGHS_SCRIPT)
        .arg(file.path())
        .output()
        .map_err(|e| format!("cannot run python3: {e}"))?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    let status = lines.next().unwrap_or_default();
    if status != "Optimal" {
        return Err(format!("HiGHS status {status}"));
    }
    lines.next().and_then(|v| v.trim().parse().ok()).ok_or_else(|| "no objective".into())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
