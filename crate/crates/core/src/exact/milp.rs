//! Mixed-integer model of the routing problem with single-commodity flow
//! connectivity and big-M fuel propagation.

use serde::Serialize;

use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Binary,
    Integer,
    Continuous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Var {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    /// `None` means unbounded above.
    pub upper: Option<f64>,
    pub objective: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// Row family, one per numbered constraint group of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowGroup {
    /// In-degree equals out-degree.
    Degree,
    /// Each target entered once.
    Enter,
    /// Start depot ships `|T|` units.
    FlowSource,
    /// Each target absorbs one unit.
    FlowTarget,
    /// Other depots conserve flow.
    FlowDepot,
    /// Flow only on used arcs.
    Capacity,
    /// Target to target fuel, upper side.
    FuelTargetUpper,
    /// Target to target fuel, lower side.
    FuelTargetLower,
    /// Depot to target fuel, lower side.
    FuelDepotLower,
    /// Depot to target fuel, upper side.
    FuelDepotUpper,
    /// Target to depot reserve.
    FuelReserve,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub name: String,
    pub group: RowGroup,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Amount by which `values` violate the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MilpModel {
    pub n_targets: usize,
    pub n_depots: usize,
    pub capacity: f64,
    pub big_m: f64,
    pub vars: Vec<Var>,
    pub rows: Vec<Row>,
    x: Vec<Vec<Option<usize>>>,
    p: Vec<Vec<Option<usize>>>,
    r: Vec<usize>,
}

impl MilpModel {
    pub fn n_vertices(&self) -> usize {
        self.n_targets + self.n_depots
    }

    /// Column of `x_ij`; `None` on the diagonal.
    pub fn x(&self, i: usize, j: usize) -> Option<usize> {
        self.x[i][j]
    }

    pub fn p(&self, i: usize, j: usize) -> Option<usize> {
        self.p[i][j]
    }

    pub fn r(&self, t: usize) -> usize {
        self.r[t]
    }

    pub fn objective(&self, values: &[f64]) -> f64 {
        self.vars.iter().zip(values).map(|(v, x)| v.objective * x).sum()
    }

    pub fn rows_in(&self, group: RowGroup) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.group == group)
    }

    /// Closed-form variable count: `x` and `p` on every ordered pair plus one `r` per target.
    pub fn expected_var_count(n_targets: usize, n_depots: usize) -> usize {
        let n = n_targets + n_depots;
        2 * n * (n - 1) + n_targets
    }

    /// Closed-form row count.
    pub fn expected_row_count(n_targets: usize, n_depots: usize) -> usize {
        let (t, d) = (n_targets, n_depots);
        let n = t + d;
        n + t + 1 + t + (d - 1) + n * (n - 1) + 2 * t * (t - 1) + 2 * d * t + t * d
    }
}

fn var(name: String, kind: VarKind, lower: f64, upper: Option<f64>, objective: f64) -> Var {
    Var { name, kind, lower, upper, objective }
}

/// Builds the model over global vertex indices (targets first, then depots).
///
/// Depot-to-depot arcs longer than `L` get an upper bound of 0, since no
/// strand can contain them.
pub fn build_model(inst: &Instance) -> MilpModel {
    let nt = inst.n_targets();
    let nd = inst.n_depots();
    let n = nt + nd;
    let l = inst.capacity();
    let tt = nt as f64;
    let max_f = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| inst.fuel(i, j)).fold(0.0f64, f64::max);
    let big_m = l + max_f;

    let mut vars = Vec::with_capacity(MilpModel::expected_var_count(nt, nd));
    let mut x = vec![vec![None; n]; n];
    let mut p = vec![vec![None; n]; n];
    for (i, row) in x.iter_mut().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            let f = inst.fuel(i, j);
            let v = if inst.is_target(i) || inst.is_target(j) {
                var(format!("x_{i}_{j}"), VarKind::Binary, 0.0, Some(1.0), f)
            } else {
                let ub = if f <= l { tt } else { 0.0 };
                var(format!("x_{i}_{j}"), VarKind::Integer, 0.0, Some(ub), f)
            };
            row[j] = Some(vars.len());
            vars.push(v);
        }
    }
    for (i, row) in p.iter_mut().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            row[j] = Some(vars.len());
            vars.push(var(format!("p_{i}_{j}"), VarKind::Continuous, 0.0, None, 0.0));
        }
    }
    let mut r = Vec::with_capacity(nt);
    for t in 0..nt {
        r.push(vars.len());
        vars.push(var(format!("r_{t}"), VarKind::Continuous, 0.0, Some(l), 0.0));
    }

    let xi = |i: usize, j: usize| x[i][j].unwrap();
    let pi = |i: usize, j: usize| p[i][j].unwrap();
    let others = |k: usize| (0..n).filter(move |&i| i != k);
    let mut rows = Vec::new();
    let mut push = |name: String, group, terms, sense, rhs| {
        rows.push(Row { name, group, terms, sense, rhs });
    };

    for k in 0..n {
        let mut terms: Vec<(usize, f64)> = others(k).map(|i| (xi(i, k), 1.0)).collect();
        terms.extend(others(k).map(|i| (xi(k, i), -1.0)));
        push(format!("deg_{k}"), RowGroup::Degree, terms, Sense::Eq, 0.0);
    }
    for k in 0..nt {
        let terms = others(k).map(|i| (xi(i, k), 1.0)).collect();
        push(format!("enter_{k}"), RowGroup::Enter, terms, Sense::Eq, 1.0);
    }

    let s = inst.start();
    let mut terms: Vec<(usize, f64)> = others(s).map(|i| (pi(s, i), 1.0)).collect();
    terms.extend(others(s).map(|i| (pi(i, s), -1.0)));
    push("flow_src".into(), RowGroup::FlowSource, terms, Sense::Eq, tt);
    for i in 0..n {
        if i == s {
            continue;
        }
        let mut terms: Vec<(usize, f64)> = others(i).map(|j| (pi(j, i), 1.0)).collect();
        terms.extend(others(i).map(|j| (pi(i, j), -1.0)));
        if inst.is_target(i) {
            push(format!("flow_t_{i}"), RowGroup::FlowTarget, terms, Sense::Eq, 1.0);
        } else {
            push(format!("flow_d_{i}"), RowGroup::FlowDepot, terms, Sense::Eq, 0.0);
        }
    }
    for i in 0..n {
        for j in others(i) {
            let terms = vec![(pi(i, j), 1.0), (xi(i, j), -tt)];
            push(format!("cap_{i}_{j}"), RowGroup::Capacity, terms, Sense::Le, 0.0);
        }
    }

    let targets = || 0..nt;
    let depots = || nt..n;
    // r_j - r_i + f_ij <= M (1 - x_ij)
    for i in targets() {
        for j in targets().filter(|&j| j != i) {
            let f = inst.fuel(i, j);
            let terms = vec![(r[j], 1.0), (r[i], -1.0), (xi(i, j), big_m)];
            push(format!("fuel_tt_up_{i}_{j}"), RowGroup::FuelTargetUpper, terms, Sense::Le, big_m - f);
        }
    }
    // r_j - r_i + f_ij >= -M (1 - x_ij)
    for i in targets() {
        for j in targets().filter(|&j| j != i) {
            let f = inst.fuel(i, j);
            let terms = vec![(r[j], 1.0), (r[i], -1.0), (xi(i, j), -big_m)];
            push(format!("fuel_tt_lo_{i}_{j}"), RowGroup::FuelTargetLower, terms, Sense::Ge, -big_m - f);
        }
    }
    // r_j - L + f_ij >= -M (1 - x_ij)
    for i in depots() {
        for j in targets() {
            let f = inst.fuel(i, j);
            let terms = vec![(r[j], 1.0), (xi(i, j), -big_m)];
            push(format!("fuel_dt_lo_{i}_{j}"), RowGroup::FuelDepotLower, terms, Sense::Ge, l - f - big_m);
        }
    }
    // r_j - L + f_ij <= M (1 - x_ij)
    for i in depots() {
        for j in targets() {
            let f = inst.fuel(i, j);
            let terms = vec![(r[j], 1.0), (xi(i, j), big_m)];
            push(format!("fuel_dt_up_{i}_{j}"), RowGroup::FuelDepotUpper, terms, Sense::Le, big_m + l - f);
        }
    }
    // r_i - f_ij >= -M (1 - x_ij)
    for i in targets() {
        for j in depots() {
            let f = inst.fuel(i, j);
            let terms = vec![(r[i], 1.0), (xi(i, j), -big_m)];
            push(format!("fuel_td_{i}_{j}"), RowGroup::FuelReserve, terms, Sense::Ge, f - big_m);
        }
    }

    MilpModel { n_targets: nt, n_depots: nd, capacity: l, big_m, vars, rows, x, p, r }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_targets() -> Instance {
        let fuel = vec![vec![0.0, 2.0, 3.0], vec![2.5, 0.0, 4.0], vec![3.0, 4.0, 0.0]];
        Instance::new(2, 1, 0, fuel, 10.0).unwrap()
    }

    #[test]
    fn hand_counts_for_two_targets_one_depot() {
        let m = build_model(&two_targets());
        // x and p on 6 ordered pairs, r on 2 targets
        assert_eq!(m.vars.len(), 14);
        // 3 degree + 2 enter + 1 source + 2 target flow + 6 capacity
        // + 2 + 2 target fuel + 2 + 2 depot fuel + 2 reserve
        assert_eq!(m.rows.len(), 24);
        assert_eq!(MilpModel::expected_var_count(2, 1), 14);
        assert_eq!(MilpModel::expected_row_count(2, 1), 24);
    }

    #[test]
    fn enter_row_for_target() {
        let m = build_model(&two_targets());
        let row = m.rows.iter().find(|r| r.name == "enter_1").unwrap();
        assert_eq!(row.rhs, 1.0);
        assert_eq!(row.sense, Sense::Eq);
        let mut cols: Vec<usize> = row.terms.iter().map(|t| t.0).collect();
        cols.sort_unstable();
        let mut expect = vec![m.x(0, 1).unwrap(), m.x(2, 1).unwrap()];
        expect.sort_unstable();
        assert_eq!(cols, expect);
        assert!(row.terms.iter().all(|t| t.1 == 1.0));
    }

    #[test]
    fn big_m_is_capacity_plus_max_cost() {
        assert_eq!(build_model(&two_targets()).big_m, 14.0);
    }

    #[test]
    fn every_variable_is_used() {
        let m = build_model(&two_targets());
        let mut used = vec![false; m.vars.len()];
        for row in &m.rows {
            for &(v, _) in &row.terms {
                used[v] = true;
            }
        }
        assert!(used.iter().all(|&u| u));
    }

    #[test]
    fn long_depot_arcs_fixed_to_zero() {
        let fuel = vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 12.0], vec![1.0, 9.0, 0.0]];
        let inst = Instance::new(1, 2, 0, fuel, 10.0).unwrap();
        let m = build_model(&inst);
        assert_eq!(m.vars[m.x(1, 2).unwrap()].upper, Some(0.0));
        assert_eq!(m.vars[m.x(2, 1).unwrap()].upper, Some(1.0));
        assert_eq!(m.vars[m.x(2, 1).unwrap()].kind, VarKind::Integer);
    }
}
