//! Substitutes a concrete tour into the MILP and checks every row.

use serde::Serialize;

use super::milp::{MilpModel, RowGroup};
use super::verify::verify;
use crate::error::{Error, Result};
use crate::instance::Instance;

/// Reduces a tour to one visit per target: later visits are shortcut and
/// repeated consecutive depots merged. Fuel use never grows under the
/// triangle inequality.
pub fn canonicalize(inst: &Instance, tour: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; inst.n_targets()];
    let mut out: Vec<usize> = Vec::with_capacity(tour.len());
    for &v in tour {
        if inst.is_target(v) {
            if seen[v] {
                continue;
            }
            seen[v] = true;
        }
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowViolation {
    pub name: String,
    pub group: Option<RowGroup>,
    pub amount: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Encoding {
    /// The canonical tour that was encoded.
    pub tour: Vec<usize>,
    pub values: Vec<f64>,
    pub objective: f64,
    pub violations: Vec<RowViolation>,
}

impl Encoding {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds `x` from arc traversal counts, `p` by carrying `|T|` units from
/// the start depot and dropping one at each target, and `r` from the fuel
/// trace; then reports every row or bound off by more than `1e-6 M`.
pub fn encode_tour(inst: &Instance, model: &MilpModel, tour: &[usize]) -> Result<Encoding> {
    let tour = canonicalize(inst, tour);
    let report = verify(inst, &tour)?;
    if !report.feasible {
        return Err(Error::Infeasible(format!("tour fails verification: {:?}", report.violation)));
    }

    let mut values = vec![0.0; model.vars.len()];
    let mut load = inst.n_targets() as f64;
    for (pos, w) in tour.windows(2).enumerate() {
        let (i, j) = (w[0], w[1]);
        values[model.x(i, j).expect("consecutive vertices differ")] += 1.0;
        values[model.p(i, j).unwrap()] += load;
        if inst.is_target(j) {
            load -= 1.0;
            values[model.r(j)] = report.trace.arrival[pos + 1];
        }
    }

    let tol = 1e-6 * model.big_m;
    let mut violations = Vec::new();
    for row in &model.rows {
        let amount = row.violation(&values);
        if amount > tol {
            violations.push(RowViolation { name: row.name.clone(), group: Some(row.group), amount });
        }
    }
    for (v, &x) in model.vars.iter().zip(&values) {
        let over = v.upper.map_or(0.0, |u| x - u);
        let amount = (v.lower - x).max(over);
        if amount > tol {
            violations.push(RowViolation { name: v.name.clone(), group: None, amount });
        }
    }
    let objective = model.objective(&values);
    Ok(Encoding { tour, values, objective, violations })
}
