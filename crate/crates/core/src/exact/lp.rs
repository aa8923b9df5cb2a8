//! CPLEX LP text export.

use std::fmt::Write as _;
use std::path::Path;

use super::milp::{MilpModel, VarKind};
use crate::error::Result;

const WRAP: usize = 200;

/// Appends `terms` after `head`, breaking long expressions across lines.
fn write_expr(out: &mut String, head: &str, terms: &[(String, f64)], tail: &str) {
    let mut line = String::from(head);
    let mut first = true;
    for (name, c) in terms {
        let sign = if *c < 0.0 { "-" } else { "+" };
        let mag = c.abs();
        let piece = match (first, mag == 1.0) {
            (true, true) if *c > 0.0 => name.clone(),
            (true, false) if *c > 0.0 => format!("{mag} {name}"),
            (_, true) => format!("{sign} {name}"),
            (_, false) => format!("{sign} {mag} {name}"),
        };
        if line.len() + piece.len() + 1 > WRAP {
            out.push_str(&line);
            out.push('\n');
            line = String::from("  ");
        } else {
            line.push(' ');
        }
        line.push_str(&piece);
        first = false;
    }
    if first {
        line.push_str(" 0");
    }
    line.push_str(tail);
    out.push_str(&line);
    out.push('\n');
}

fn write_names(out: &mut String, names: impl Iterator<Item = String>) {
    let mut line = String::new();
    for name in names {
        if line.len() + name.len() + 1 > WRAP {
            out.push_str(&line);
            out.push('\n');
            line.clear();
        }
        line.push(' ');
        line.push_str(&name);
    }
    if !line.is_empty() {
        out.push_str(&line);
        out.push('\n');
    }
}

/// Renders the model in the CPLEX LP dialect. Output depends only on the model.
pub fn lp_string(model: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ fuel-constrained routing: {} targets, {} depots, L = {}, M = {}",
        model.n_targets, model.n_depots, model.capacity, model.big_m
    );
    out.push_str("Minimize\n");
    let obj: Vec<(String, f64)> =
        model.vars.iter().filter(|v| v.objective != 0.0).map(|v| (v.name.clone(), v.objective)).collect();
    write_expr(&mut out, " obj:", &obj, "");

    out.push_str("Subject To\n");
    for row in &model.rows {
        let terms: Vec<(String, f64)> = row.terms.iter().map(|&(v, c)| (model.vars[v].name.clone(), c)).collect();
        let tail = format!(" {} {}", row.sense.symbol(), row.rhs);
        write_expr(&mut out, &format!(" {}:", row.name), &terms, &tail);
    }

    out.push_str("Bounds\n");
    for v in model.vars.iter().filter(|v| v.kind != VarKind::Binary) {
        match v.upper {
            Some(u) => {
                let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, u);
            }
            None => {
                let _ = writeln!(out, " {} >= {}", v.name, v.lower);
            }
        }
    }

    let names_of = |kind: VarKind| model.vars.iter().filter(move |v| v.kind == kind).map(|v| v.name.clone());
    if names_of(VarKind::Integer).next().is_some() {
        out.push_str("General\n");
        write_names(&mut out, names_of(VarKind::Integer));
    }
    if names_of(VarKind::Binary).next().is_some() {
        out.push_str("Binary\n");
        write_names(&mut out, names_of(VarKind::Binary));
    }
    out.push_str("End\n");
    out
}

pub fn export_model(model: &MilpModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, lp_string(model))?;
    Ok(())
}
