//! Problem data: targets, refueling depots, the fuel matrix and the tank
//! capacity, plus the standing-assumption checks and the constants derived
//! from them.
//!
//! Vertices are addressed by a single global index. Targets come first
//! (`0..n_targets`), depots follow (`n_targets..n_targets + n_depots`).

use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dubins::{self, Pose};
use crate::error::{Error, Result};
use crate::paths;

/// Absolute tolerance used for every fuel and metric comparison.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Target,
    Depot,
}

/// A vertex named by its kind and its index within that kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub kind: VertexKind,
    pub index: usize,
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VertexKind::Target => write!(f, "t{}", self.index),
            VertexKind::Depot => write!(f, "d{}", self.index),
        }
    }
}

/// Planar positions (and headings) of the vertices, when known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub targets: Vec<Pose>,
    pub depots: Vec<Pose>,
    /// Turning radius the fuel matrix was built with; `None` for straight-line
    /// (Euclidean) costs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turn_radius: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    n_targets: usize,
    n_depots: usize,
    start: usize,
    capacity: f64,
    fuel: Vec<f64>,
    layout: Option<Layout>,
}

impl Instance {
    /// Builds an instance from a square fuel matrix ordered targets first,
    /// then depots. `start` is a depot index (not a global vertex index).
    ///
    /// Only structural problems are rejected here; semantic assumptions are
    /// reported by [`validate`].
    pub fn new(n_targets: usize, n_depots: usize, start: usize, fuel: Vec<Vec<f64>>, capacity: f64) -> Result<Self> {
        if n_targets == 0 {
            return Err(Error::InvalidInstance("at least one target is required".into()));
        }
        if n_depots == 0 {
            return Err(Error::InvalidInstance("at least one depot is required".into()));
        }
        if start >= n_depots {
            return Err(Error::InvalidInstance(format!("start depot {start} out of range (have {n_depots} depots)")));
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(Error::InvalidInstance(format!("capacity must be positive, got {capacity}")));
        }
        let n = n_targets + n_depots;
        if fuel.len() != n || fuel.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInstance(format!("fuel matrix must be {n}x{n}")));
        }
        let fuel: Vec<f64> = fuel.into_iter().flatten().collect();
        if let Some(pos) = fuel.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInstance(format!("fuel[{}][{}] is not finite", pos / n, pos % n)));
        }
        Ok(Self { n_targets, n_depots, start, capacity, fuel, layout: None })
    }

    pub fn with_layout(mut self, layout: Layout) -> Result<Self> {
        if layout.targets.len() != self.n_targets || layout.depots.len() != self.n_depots {
            return Err(Error::InvalidInstance("layout does not match vertex counts".into()));
        }
        self.layout = Some(layout);
        Ok(self)
    }

    pub fn n_targets(&self) -> usize {
        self.n_targets
    }

    pub fn n_depots(&self) -> usize {
        self.n_depots
    }

    pub fn n_vertices(&self) -> usize {
        self.n_targets + self.n_depots
    }

    pub fn targets(&self) -> Range<usize> {
        0..self.n_targets
    }

    pub fn depots(&self) -> Range<usize> {
        self.n_targets..self.n_vertices()
    }

    pub fn is_target(&self, v: usize) -> bool {
        v < self.n_targets
    }

    pub fn is_depot(&self, v: usize) -> bool {
        v >= self.n_targets && v < self.n_vertices()
    }

    /// Global vertex index of depot `j`.
    pub fn depot(&self, j: usize) -> usize {
        self.n_targets + j
    }

    /// Global vertex index of the start depot `s`.
    pub fn start(&self) -> usize {
        self.n_targets + self.start
    }

    /// Start depot as an index among depots.
    pub fn start_depot_index(&self) -> usize {
        self.start
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    #[inline]
    pub fn fuel(&self, i: usize, j: usize) -> f64 {
        self.fuel[i * self.n_vertices() + j]
    }

    pub fn fuel_rows(&self) -> Vec<Vec<f64>> {
        self.fuel.chunks(self.n_vertices()).map(<[f64]>::to_vec).collect()
    }

    pub fn layout(&self) -> Option<&Layout> {
        self.layout.as_ref()
    }

    pub fn vertex_id(&self, v: usize) -> VertexId {
        if self.is_target(v) {
            VertexId { kind: VertexKind::Target, index: v }
        } else {
            VertexId { kind: VertexKind::Depot, index: v - self.n_targets }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n_vertices();
        (0..n).all(|i| (0..n).all(|j| (self.fuel(i, j) - self.fuel(j, i)).abs() <= EPS))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(s)?;
        file.into_instance()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&InstanceFile::from_instance(self))?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json_string()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

/// On-disk instance document.
///
/// Either `fuel` is given (row-major, targets first), in which case
/// `targets`/`depots` only carry optional poses for plotting, or `poses` and
/// `turn_radius` are given and the fuel matrix is the Dubins length matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub capacity: f64,
    pub start: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<Pose>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub depots: Vec<Pose>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuel: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poses: Option<PoseSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turn_radius: Option<f64>,
    /// Fuel per unit length when expanding poses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoseSet {
    pub targets: Vec<Pose>,
    pub depots: Vec<Pose>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        match (self.fuel, self.poses) {
            (Some(fuel), _) => {
                let n = fuel.len();
                let (nt, nd) = match (self.targets.len(), self.depots.len()) {
                    (0, 0) => {
                        return Err(Error::InvalidInstance(
                            "a fuel matrix needs `targets` and `depots` lists to size it".into(),
                        ))
                    }
                    (nt, nd) => (nt, nd),
                };
                if nt + nd != n {
                    return Err(Error::InvalidInstance(format!(
                        "{nt} targets + {nd} depots does not match a {n}x{n} fuel matrix"
                    )));
                }
                let inst = Instance::new(nt, nd, self.start, fuel, self.capacity)?;
                inst.with_layout(Layout { targets: self.targets, depots: self.depots, turn_radius: self.turn_radius })
            }
            (None, Some(poses)) => {
                let radius =
                    self.turn_radius.ok_or_else(|| Error::InvalidInstance("`poses` requires `turn_radius`".into()))?;
                if radius.is_nan() || radius <= 0.0 {
                    return Err(Error::InvalidInstance("turn_radius must be positive".into()));
                }
                let scale = self.scale.unwrap_or(1.0);
                if scale.is_nan() || scale <= 0.0 {
                    return Err(Error::InvalidInstance("scale must be positive".into()));
                }
                let fuel = dubins::fuel_matrix_from_poses(&poses.targets, &poses.depots, radius, scale);
                let inst = Instance::new(poses.targets.len(), poses.depots.len(), self.start, fuel, self.capacity)?;
                inst.with_layout(Layout { targets: poses.targets, depots: poses.depots, turn_radius: Some(radius) })
            }
            (None, None) => Err(Error::InvalidInstance("instance needs either `fuel` or `poses`".into())),
        }
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let (targets, depots, turn_radius) = match inst.layout() {
            Some(l) => (l.targets.clone(), l.depots.clone(), l.turn_radius),
            None => (vec![Pose::default(); inst.n_targets()], vec![Pose::default(); inst.n_depots()], None),
        };
        Self {
            capacity: inst.capacity(),
            start: inst.start_depot_index(),
            targets,
            depots,
            fuel: Some(inst.fuel_rows()),
            poses: None,
            turn_radius,
            scale: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NegativeCost { from: VertexId, to: VertexId, value: f64 },
    NonzeroDiagonal { vertex: VertexId, value: f64 },
    UnreachableTarget { target: usize, round_trip: f64 },
    DepotGraphDisconnected { from: usize, to: usize },
    TriangleInequality { i: VertexId, j: VertexId, k: VertexId, excess: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeCost { from, to, value } => {
                write!(f, "negative cost {value} on {from}->{to}")
            }
            Violation::NonzeroDiagonal { vertex, value } => {
                write!(f, "nonzero self cost {value} at {vertex}")
            }
            Violation::UnreachableTarget { target, round_trip } => {
                write!(f, "unreachable target t{target} (cheapest depot round trip {round_trip} exceeds capacity)")
            }
            Violation::DepotGraphDisconnected { from, to } => {
                write!(f, "depot graph disconnected: d{to} not reachable from d{from}")
            }
            Violation::TriangleInequality { i, j, k, excess } => {
                write!(f, "triangle inequality violated on {i}->{j}->{k} by {excess}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the standing assumptions. Every problem found is reported, in a
/// canonical order.
pub fn validate(inst: &Instance) -> ValidationReport {
    let n = inst.n_vertices();
    let l = inst.capacity();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in 0..n {
            let value = inst.fuel(i, j);
            if i == j && value != 0.0 {
                violations.push(Violation::NonzeroDiagonal { vertex: inst.vertex_id(i), value });
            } else if value < 0.0 {
                violations.push(Violation::NegativeCost { from: inst.vertex_id(i), to: inst.vertex_id(j), value });
            }
        }
    }

    for x in inst.targets() {
        let c = inst.depots().map(|d| inst.fuel(d, x)).fold(f64::INFINITY, f64::min);
        let b = inst.depots().map(|d| inst.fuel(x, d)).fold(f64::INFINITY, f64::min);
        if c + b > l + EPS {
            violations.push(Violation::UnreachableTarget { target: x, round_trip: c + b });
        }
    }

    let reach = depot_reachability(inst);
    let nd = inst.n_depots();
    'outer: for a in 0..nd {
        for b in 0..nd {
            if !reach[a * nd + b] {
                violations.push(Violation::DepotGraphDisconnected { from: a, to: b });
                break 'outer;
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let excess = inst.fuel(i, k) - (inst.fuel(i, j) + inst.fuel(j, k));
                if excess > EPS {
                    violations.push(Violation::TriangleInequality {
                        i: inst.vertex_id(i),
                        j: inst.vertex_id(j),
                        k: inst.vertex_id(k),
                        excess,
                    });
                }
            }
        }
    }

    ValidationReport { violations }
}

/// Transitive closure of the depot graph with edges `f <= L`.
fn depot_reachability(inst: &Instance) -> Vec<bool> {
    let nd = inst.n_depots();
    let l = inst.capacity();
    let mut reach = vec![false; nd * nd];
    for a in 0..nd {
        for b in 0..nd {
            reach[a * nd + b] = a == b || inst.fuel(inst.depot(a), inst.depot(b)) <= l + EPS;
        }
    }
    for k in 0..nd {
        for a in 0..nd {
            if !reach[a * nd + k] {
                continue;
            }
            for b in 0..nd {
                if reach[k * nd + b] {
                    reach[a * nd + b] = true;
                }
            }
        }
    }
    reach
}

/// Per-target depot distances and the data-dependent constants `a` and `beta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// `C_x`: cheapest fuel from any depot to target `x`.
    pub c: Vec<f64>,
    /// `B_x`: cheapest fuel from target `x` to any depot.
    pub b: Vec<f64>,
    /// Nearest starting depot `m_x` (global vertex index).
    pub nearest_start: Vec<usize>,
    /// Nearest terminal depot `n_x` (global vertex index).
    pub nearest_terminal: Vec<usize>,
    /// Tightest `a` with `C_x + B_x <= a L` for every target.
    pub a: f64,
    /// Tightest `beta` with `l'(d2, d1) <= beta * l'(d1, d2)`.
    pub beta: f64,
    /// Set when `a >= 1 - EPS`; the approximation factor is then undefined.
    pub degenerate_bound: bool,
}

impl DerivedConstants {
    /// `(1 + a + 2 beta a) / (1 - a)`, or `None` for degenerate instances.
    pub fn approx_factor(&self) -> Option<f64> {
        if self.degenerate_bound || !self.beta.is_finite() {
            None
        } else {
            Some((1.0 + self.a + 2.0 * self.beta * self.a) / (1.0 - self.a))
        }
    }

    /// Upper bound on the cost of one refueling trip, `(1 + beta) a L`.
    pub fn trip_cost_bound(&self, capacity: f64) -> f64 {
        (1.0 + self.beta) * self.a * capacity
    }
}

pub fn derive_constants(inst: &Instance) -> DerivedConstants {
    let mut c = Vec::with_capacity(inst.n_targets());
    let mut b = Vec::with_capacity(inst.n_targets());
    let mut nearest_start = Vec::with_capacity(inst.n_targets());
    let mut nearest_terminal = Vec::with_capacity(inst.n_targets());
    let mut a: f64 = 0.0;

    for x in inst.targets() {
        // strict `<` keeps the lowest depot index on ties
        let mut best_in = (f64::INFINITY, usize::MAX);
        let mut best_out = (f64::INFINITY, usize::MAX);
        for d in inst.depots() {
            if inst.fuel(d, x) < best_in.0 {
                best_in = (inst.fuel(d, x), d);
            }
            if inst.fuel(x, d) < best_out.0 {
                best_out = (inst.fuel(x, d), d);
            }
        }
        c.push(best_in.0);
        b.push(best_out.0);
        nearest_start.push(best_in.1);
        nearest_terminal.push(best_out.1);
        a = a.max((best_in.0 + best_out.0) / inst.capacity());
    }

    let costs = paths::depot_path_costs(inst);
    let nd = inst.n_depots();
    let mut beta: f64 = 1.0;
    for d1 in 0..nd {
        for d2 in 0..nd {
            if d1 == d2 {
                continue;
            }
            let fwd = costs[d1 * nd + d2];
            let back = costs[d2 * nd + d1];
            let ratio = if !fwd.is_finite() || !back.is_finite() {
                f64::INFINITY
            } else if fwd <= 0.0 {
                if back <= 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                back / fwd
            };
            beta = beta.max(ratio);
        }
    }

    DerivedConstants { c, b, nearest_start, nearest_terminal, a, beta, degenerate_bound: a >= 1.0 - EPS }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn single_depot(f_dt: f64, f_td: f64, capacity: f64) -> Instance {
        Instance::new(1, 1, 0, vec![vec![0.0, f_td], vec![f_dt, 0.0]], capacity).unwrap()
    }

    #[test]
    fn trivial_instance_is_ok() {
        let inst = single_depot(1.0, 1.0, 10.0);
        assert!(validate(&inst).is_ok());
    }

    #[test]
    fn unreachable_target_reported() {
        let inst = single_depot(6.0, 6.0, 10.0);
        let report = validate(&inst);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0], Violation::UnreachableTarget { target: 0, .. }));
        assert!(report.to_string().contains("unreachable target t0"));
    }

    #[test]
    fn disconnected_depots_reported() {
        // t0, d0, d1; depots 15 apart in both directions, target next to d0
        let fuel = vec![vec![0.0, 1.0, 14.0], vec![1.0, 0.0, 15.0], vec![14.0, 15.0, 0.0]];
        let inst = Instance::new(1, 2, 0, fuel, 10.0).unwrap();
        let report = validate(&inst);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::DepotGraphDisconnected { .. })));
        assert!(report.to_string().contains("depot graph disconnected"));
    }

    #[test]
    fn negative_and_triangle_violations_reported() {
        let fuel = vec![vec![0.0, -1.0, 9.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]];
        let inst = Instance::new(2, 1, 0, fuel, 10.0).unwrap();
        let report = validate(&inst);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::NegativeCost { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::TriangleInequality { .. })));
    }

    #[test]
    fn structural_errors_rejected() {
        assert!(Instance::new(0, 1, 0, vec![vec![0.0]], 1.0).is_err());
        assert!(Instance::new(1, 1, 1, vec![vec![0.0, 1.0], vec![1.0, 0.0]], 1.0).is_err());
        assert!(Instance::new(1, 1, 0, vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0.0).is_err());
        assert!(Instance::new(1, 1, 0, vec![vec![0.0, 1.0]], 1.0).is_err());
        assert!(Instance::new(1, 1, 0, vec![vec![0.0, f64::NAN], vec![1.0, 0.0]], 1.0).is_err());
    }

    #[test]
    fn single_depot_constants() {
        let inst = single_depot(3.0, 4.0, 10.0);
        let k = derive_constants(&inst);
        assert_eq!(k.c, vec![3.0]);
        assert_eq!(k.b, vec![4.0]);
        assert!((k.a - 0.7).abs() < 1e-12);
        assert_eq!(k.beta, 1.0);
        assert!(!k.degenerate_bound);
        assert_eq!(k.nearest_start, vec![1]);
        assert_eq!(k.nearest_terminal, vec![1]);
    }

    #[test]
    fn degenerate_bound_flagged() {
        let inst = single_depot(5.0, 5.0, 10.0);
        let k = derive_constants(&inst);
        assert!(k.degenerate_bound);
        assert!(k.approx_factor().is_none());
    }

    #[test]
    fn symmetric_depots_give_unit_beta() {
        let fuel = vec![vec![0.0, 2.0, 3.0], vec![2.0, 0.0, 4.0], vec![3.0, 4.0, 0.0]];
        let inst = Instance::new(1, 2, 0, fuel, 10.0).unwrap();
        assert_eq!(derive_constants(&inst).beta, 1.0);
    }

    #[test]
    fn ties_pick_lowest_depot() {
        let fuel = vec![vec![0.0, 2.0, 2.0], vec![2.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
        let inst = Instance::new(1, 2, 1, fuel, 10.0).unwrap();
        let k = derive_constants(&inst);
        assert_eq!(k.nearest_start, vec![1]);
        assert_eq!(k.nearest_terminal, vec![1]);
    }

    #[test]
    fn json_round_trip_matrix_form() {
        let inst = single_depot(3.0, 4.0, 10.0);
        let text = inst.to_json_string().unwrap();
        let back = Instance::from_json_str(&text).unwrap();
        assert_eq!(back.fuel_rows(), inst.fuel_rows());
        assert_eq!(back.capacity(), 10.0);
        assert_eq!(back.start(), inst.start());
    }

    #[test]
    fn json_pose_form_expands_dubins() {
        let text = r#"{
            "capacity": 5000, "start": 0, "turn_radius": 100,
            "poses": {"targets": [{"x": 1000, "y": 0, "heading": 0}],
                      "depots":  [{"x": 0, "y": 0, "heading": 0}]}
        }"#;
        let inst = Instance::from_json_str(text).unwrap();
        assert!((inst.fuel(1, 0) - 1000.0).abs() < 1e-9);
        assert!(inst.fuel(0, 1) > 1000.0);
        assert_eq!(inst.layout().unwrap().turn_radius, Some(100.0));
    }
}
