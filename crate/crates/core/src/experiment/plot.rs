//! SVG rendering of a tour over its instance layout.

use std::fmt::Write as _;
use std::path::Path;

use crate::dubins::{dubins_length, polyline};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::tour::Solution;

const WIDTH: f64 = 800.0;
const PAD: f64 = 20.0;
const ARC_SAMPLES: usize = 24;
const TOUR_COLOR: &str = "#1f77b4";
const REFUEL_COLOR: &str = "#d62728";

struct View {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl View {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (PAD + (x - self.min_x) * self.scale, PAD + (self.max_y - y) * self.scale)
    }
}

/// Renders `solution` as SVG. Depots are squares, targets dots; legs into
/// or out of an intermediate depot stop are drawn dashed in red.
pub fn plot_svg(inst: &Instance, solution: &Solution) -> Result<String> {
    let layout = inst.layout().ok_or_else(|| Error::InvalidInstance("instance has no layout to plot".into()))?;
    let poses: Vec<_> = layout.targets.iter().chain(&layout.depots).copied().collect();
    let seq = &solution.tour.sequence;

    let mut legs: Vec<(Vec<(f64, f64)>, bool)> = Vec::with_capacity(seq.len());
    for (i, w) in seq.windows(2).enumerate() {
        let (a, b) = (poses[w[0]], poses[w[1]]);
        let points = match layout.turn_radius {
            Some(r) if w[0] != w[1] => polyline(&a, &dubins_length(&a, &b, r), ARC_SAMPLES),
            _ => vec![(a.x, a.y), (b.x, b.y)],
        };
        let stop = |pos: usize| pos != 0 && pos != seq.len() - 1 && inst.is_depot(seq[pos]);
        legs.push((points, stop(i) || stop(i + 1)));
    }

    let all = legs.iter().flat_map(|(p, _)| p.iter().copied()).chain(poses.iter().map(|p| (p.x, p.y)));
    let (mut min_x, mut min_y, mut max_x, mut max_y) =
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1.0);
    let view = View { min_x, max_y, scale: (WIDTH - 2.0 * PAD) / span };
    let height = 2.0 * PAD + (max_y - min_y) * view.scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        "<!-- {} cost {:.3}, {} refuel trips -->",
        solution.meta.solver, solution.cost, solution.refuel_trip_count
    );
    for (points, refuel) in &legs {
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| {
                let (u, v) = view.map(x, y);
                format!("{u:.2},{v:.2}")
            })
            .collect();
        let style = if *refuel {
            format!(r#"stroke="{REFUEL_COLOR}" stroke-dasharray="6 4""#)
        } else {
            format!(r#"stroke="{TOUR_COLOR}""#)
        };
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" {style} stroke-width="1.5"/>"#, path.join(" "));
    }
    for (i, p) in layout.depots.iter().enumerate() {
        let (u, v) = view.map(p.x, p.y);
        let fill = if inst.depot(i) == inst.start() { "#2ca02c" } else { "black" };
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{fill}"><title>d{i}</title></rect>"#,
            u - 5.0,
            v - 5.0
        );
    }
    for (i, p) in layout.targets.iter().enumerate() {
        let (u, v) = view.map(p.x, p.y);
        let _ = writeln!(out, r#"<circle cx="{u:.2}" cy="{v:.2}" r="3.5" fill="black"><title>t{i}</title></circle>"#);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn plot(inst: &Instance, solution: &Solution, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, plot_svg(inst, solution)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dubins::Pose;
    use crate::instance::Layout;
    use crate::tour::Tour;

    fn one_target(radius: Option<f64>) -> (Instance, Solution) {
        let fuel = vec![vec![0.0, 10.0], vec![10.0, 0.0]];
        let layout = Layout {
            targets: vec![Pose::new(10.0, 0.0, 0.0)],
            depots: vec![Pose::new(0.0, 0.0, 0.0)],
            turn_radius: radius,
        };
        let inst = Instance::new(1, 1, 0, fuel, 30.0).unwrap().with_layout(layout).unwrap();
        let sol = Solution::new(Tour::new(&inst, vec![1, 0, 1]), 0, "test");
        (inst, sol)
    }

    #[test]
    fn one_target_draws_two_legs() {
        let (inst, sol) = one_target(None);
        let svg = plot_svg(&inst, &sol).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<rect x=").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn euclidean_legs_are_straight() {
        let (inst, sol) = one_target(None);
        let svg = plot_svg(&inst, &sol).unwrap();
        for line in svg.lines().filter(|l| l.starts_with("<polyline")) {
            let pts = line.split('"').nth(1).unwrap();
            assert_eq!(pts.split(' ').count(), 2);
        }
    }

    #[test]
    fn dubins_legs_are_sampled() {
        let (inst, sol) = one_target(Some(1.0));
        let svg = plot_svg(&inst, &sol).unwrap();
        let line = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        assert_eq!(line.split('"').nth(1).unwrap().split(' ').count(), ARC_SAMPLES + 1);
    }
}
