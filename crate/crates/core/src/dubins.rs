//! Shortest bounded-curvature (Dubins) paths between oriented poses.
//!
//! All six candidate words are evaluated in normalized coordinates (turn
//! radius 1) and the cheapest valid one is returned.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Radians, normalized to `[0, 2pi)` by [`Pose::new`].
    #[serde(default)]
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self { x, y, heading: mod2pi(heading) }
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DubinsWord {
    Lsl,
    Rsr,
    Lsr,
    Rsl,
    Rlr,
    Lrl,
}

impl DubinsWord {
    pub const ALL: [DubinsWord; 6] =
        [DubinsWord::Lsl, DubinsWord::Rsr, DubinsWord::Lsr, DubinsWord::Rsl, DubinsWord::Rlr, DubinsWord::Lrl];

    pub fn segments(self) -> [SegmentKind; 3] {
        use SegmentKind::*;
        match self {
            DubinsWord::Lsl => [Left, Straight, Left],
            DubinsWord::Rsr => [Right, Straight, Right],
            DubinsWord::Lsr => [Left, Straight, Right],
            DubinsWord::Rsl => [Right, Straight, Left],
            DubinsWord::Rlr => [Right, Left, Right],
            DubinsWord::Lrl => [Left, Right, Left],
        }
    }
}

impl fmt::Display for DubinsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DubinsWord::Lsl => "LSL",
            DubinsWord::Rsr => "RSR",
            DubinsWord::Lsr => "LSR",
            DubinsWord::Rsl => "RSL",
            DubinsWord::Rlr => "RLR",
            DubinsWord::Lrl => "LRL",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    Left,
    Straight,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DubinsResult {
    pub length: f64,
    pub word: DubinsWord,
    /// Segment extents in normalized units (radians for arcs, distance over
    /// radius for the straight piece).
    pub params: [f64; 3],
    pub radius: f64,
}

impl DubinsResult {
    pub fn segment_lengths(&self) -> [f64; 3] {
        self.params.map(|p| p * self.radius)
    }
}

/// Wraps an angle into `[0, 2pi)`. Values within rounding of `2pi` snap to 0.
pub fn mod2pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU - 1e-12 {
        0.0
    } else {
        r
    }
}

struct Frame {
    alpha: f64,
    beta: f64,
    d: f64,
    sa: f64,
    sb: f64,
    ca: f64,
    cb: f64,
    c_ab: f64,
}

impl Frame {
    fn new(from: &Pose, to: &Pose, radius: f64) -> Self {
        let dx = to.x - from.x;
        let dy = to.y - from.y;
        let d = dx.hypot(dy) / radius;
        let theta = if d > 0.0 { mod2pi(dy.atan2(dx)) } else { 0.0 };
        let alpha = mod2pi(from.heading - theta);
        let beta = mod2pi(to.heading - theta);
        Self {
            alpha,
            beta,
            d,
            sa: alpha.sin(),
            sb: beta.sin(),
            ca: alpha.cos(),
            cb: beta.cos(),
            c_ab: (alpha - beta).cos(),
        }
    }

    fn word(&self, word: DubinsWord) -> Option<[f64; 3]> {
        let Frame { alpha, beta, d, sa, sb, ca, cb, c_ab } = *self;
        match word {
            DubinsWord::Lsl => {
                let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb);
                let p = clamped_sqrt(p_sq)?;
                let tmp = (cb - ca).atan2(d + sa - sb);
                Some([mod2pi(tmp - alpha), p, mod2pi(beta - tmp)])
            }
            DubinsWord::Rsr => {
                let p_sq = 2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa);
                let p = clamped_sqrt(p_sq)?;
                let tmp = (ca - cb).atan2(d - sa + sb);
                Some([mod2pi(alpha - tmp), p, mod2pi(tmp - beta)])
            }
            DubinsWord::Lsr => {
                let p_sq = -2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb);
                let p = clamped_sqrt(p_sq)?;
                let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
                Some([mod2pi(tmp - alpha), p, mod2pi(tmp - beta)])
            }
            DubinsWord::Rsl => {
                let p_sq = -2.0 + d * d + 2.0 * c_ab - 2.0 * d * (sa + sb);
                let p = clamped_sqrt(p_sq)?;
                let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
                Some([mod2pi(alpha - tmp), p, mod2pi(beta - tmp)])
            }
            DubinsWord::Rlr => {
                let c = clamped_unit((6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0)?;
                let phi = (ca - cb).atan2(d - sa + sb);
                let p = mod2pi(TAU - c.acos());
                let t = mod2pi(alpha - phi + mod2pi(p / 2.0));
                Some([t, p, mod2pi(alpha - beta - t + p)])
            }
            DubinsWord::Lrl => {
                let c = clamped_unit((6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sb - sa)) / 8.0)?;
                let phi = (ca - cb).atan2(d + sa - sb);
                let p = mod2pi(TAU - c.acos());
                let t = mod2pi(-alpha - phi + p / 2.0);
                Some([t, p, mod2pi(beta - alpha - t + p)])
            }
        }
    }
}

const CLAMP_SLACK: f64 = 1e-10;

fn clamped_sqrt(v: f64) -> Option<f64> {
    if v >= 0.0 {
        Some(v.sqrt())
    } else if v > -CLAMP_SLACK {
        Some(0.0)
    } else {
        None
    }
}

fn clamped_unit(v: f64) -> Option<f64> {
    if v.abs() <= 1.0 {
        Some(v)
    } else if v.abs() <= 1.0 + CLAMP_SLACK {
        Some(v.signum())
    } else {
        None
    }
}

/// Normalized parameters of one word, or `None` when the word has no
/// solution for this pose pair.
pub fn word_params(from: &Pose, to: &Pose, radius: f64, word: DubinsWord) -> Option<[f64; 3]> {
    Frame::new(from, to, radius).word(word)
}

/// Shortest Dubins path from `from` to `to`. Ties between words keep the
/// first in [`DubinsWord::ALL`] order.
pub fn dubins_length(from: &Pose, to: &Pose, radius: f64) -> DubinsResult {
    assert!(radius > 0.0, "turn radius must be positive");
    if from.x == to.x && from.y == to.y && mod2pi(from.heading) == mod2pi(to.heading) {
        return DubinsResult { length: 0.0, word: DubinsWord::Lsl, params: [0.0; 3], radius };
    }
    let frame = Frame::new(from, to, radius);
    let mut best: Option<DubinsResult> = None;
    for word in DubinsWord::ALL {
        if let Some(params) = frame.word(word) {
            let length = (params[0] + params[1] + params[2]) * radius;
            if best.is_none_or(|b| length < b.length) {
                best = Some(DubinsResult { length, word, params, radius });
            }
        }
    }
    // LSL and RSR are both valid whenever positions differ; CCC covers the rest
    best.expect("at least one Dubins word is always valid")
}

fn advance(x: f64, y: f64, h: f64, kind: SegmentKind, s: f64) -> (f64, f64, f64) {
    match kind {
        SegmentKind::Left => (x + (h + s).sin() - h.sin(), y - (h + s).cos() + h.cos(), h + s),
        SegmentKind::Right => (x - (h - s).sin() + h.sin(), y + (h - s).cos() - h.cos(), h - s),
        SegmentKind::Straight => (x + h.cos() * s, y + h.sin() * s, h),
    }
}

/// Pose reached after flying `dist` along the path (clamped to its length).
pub fn point_at(from: &Pose, path: &DubinsResult, dist: f64) -> Pose {
    let r = path.radius;
    let mut remaining = (dist / r).max(0.0);
    let (mut x, mut y, mut h) = (0.0, 0.0, from.heading);
    for (kind, &extent) in path.word.segments().iter().zip(&path.params) {
        let s = remaining.min(extent);
        (x, y, h) = advance(x, y, h, *kind, s);
        remaining -= s;
        if remaining <= 0.0 {
            break;
        }
    }
    Pose::new(from.x + x * r, from.y + y * r, h)
}

/// Coarse polyline along the path, `samples + 1` points including both ends.
pub fn polyline(from: &Pose, path: &DubinsResult, samples: usize) -> Vec<(f64, f64)> {
    let samples = samples.max(1);
    (0..=samples)
        .map(|k| {
            let p = point_at(from, path, path.length * k as f64 / samples as f64);
            (p.x, p.y)
        })
        .collect()
}

/// Fuel matrix (targets first, then depots) with `f_ij = scale * dubins(i, j)`.
pub fn fuel_matrix_from_poses(targets: &[Pose], depots: &[Pose], radius: f64, scale: f64) -> Vec<Vec<f64>> {
    let poses: Vec<&Pose> = targets.iter().chain(depots).collect();
    poses
        .iter()
        .enumerate()
        .map(|(i, a)| {
            poses
                .iter()
                .enumerate()
                .map(|(j, b)| if i == j { 0.0 } else { scale * dubins_length(a, b, radius).length })
                .collect()
        })
        .collect()
}

/// Straight-line fuel matrix over the pose positions.
pub fn euclidean_matrix(targets: &[Pose], depots: &[Pose], scale: f64) -> Vec<Vec<f64>> {
    let poses: Vec<&Pose> = targets.iter().chain(depots).collect();
    poses.iter().map(|a| poses.iter().map(|b| scale * a.distance(b)).collect()).collect()
}
