//! Static SVG pictures of a world, optionally with a trajectory.

use std::fmt::Write as _;

use crate::geometry::{Direction, Point};
use crate::world::Gridworld;

pub const PIXELS_PER_UNIT: f64 = 32.0;

const PALETTE: [&str; 16] = [
    "#f2f2f2", "#dbe9f6", "#fde0c5", "#d7efd3", "#f6d5e5", "#e4dcf4", "#fff3bf", "#d3f0ee", "#f9dcdc", "#e2ecd0", "#eadbcb", "#d6e4f0", "#f3e1f7",
    "#e0f2e9", "#fbe7d3", "#e6e6e6",
];
const TARGET_FILL: &str = "#9bd49b";

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Frame {
    side: f64,
}

impl Frame {
    fn xy(&self, p: &Point) -> (String, String) {
        let x = p.x.to_f64() * PIXELS_PER_UNIT;
        let y = (self.side - p.y.to_f64()) * PIXELS_PER_UNIT;
        (fmt_num(x), fmt_num(y))
    }

    fn pair(&self, p: &Point) -> String {
        let (x, y) = self.xy(p);
        format!("{x},{y}")
    }
}

/// Regions filled by action cone, cone arrows at centroids, the target
/// shaded, the initial state as a dot, and `trajectory` as one polyline.
pub fn render_svg(world: &Gridworld, trajectory: Option<&[Point]>) -> String {
    let frame = Frame { side: world.side.to_f64() };
    let size = fmt_num(frame.side * PIXELS_PER_UNIT);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    out.push_str("  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"5\" markerHeight=\"5\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#444\"/></marker></defs>\n");
    for r in &world.regions {
        let fill = if r.id == world.target { TARGET_FILL } else { PALETTE[r.actions.bits() as usize] };
        let pts: Vec<String> = r.vertices.iter().map(|v| frame.pair(v)).collect();
        let _ = writeln!(out, "  <polygon points=\"{}\" fill=\"{fill}\" stroke=\"#555\" stroke-width=\"1\"/>", pts.join(" "));
    }
    let reach = PIXELS_PER_UNIT * 0.3 * (frame.side / 8.0).clamp(0.25, 1.0);
    for r in &world.regions {
        let c = r.centroid();
        let (cx, cy) = (c.x.to_f64() * PIXELS_PER_UNIT, (frame.side - c.y.to_f64()) * PIXELS_PER_UNIT);
        for d in Direction::ALL {
            if !r.actions.has(d) {
                continue;
            }
            let (dx, dy) = match d {
                Direction::Left => (-reach, 0.0),
                Direction::Right => (reach, 0.0),
                Direction::Up => (0.0, -reach),
                Direction::Down => (0.0, reach),
            };
            let _ = writeln!(
                out,
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444\" stroke-width=\"1\" marker-end=\"url(#arrow)\"/>",
                fmt_num(cx),
                fmt_num(cy),
                fmt_num(cx + dx),
                fmt_num(cy + dy)
            );
        }
    }
    if let Some(points) = trajectory {
        let pts: Vec<String> = points.iter().map(|p| frame.pair(p)).collect();
        let _ = writeln!(out, "  <polyline points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>", pts.join(" "));
    }
    let (ix, iy) = frame.xy(&world.initial);
    let _ = writeln!(out, "  <circle cx=\"{ix}\" cy=\"{iy}\" r=\"4\" fill=\"#1f77b4\"/>");
    out.push_str("</svg>\n");
    out
}

/// Reads the one-point-per-line `(x,y)` trajectory dump.
pub fn parse_trajectory(text: &str) -> Result<Vec<Point>, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            let inner = l.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| format!("line {}: expected (x,y)", i + 1))?;
            let (x, y) = inner.split_once(',').ok_or_else(|| format!("line {}: expected (x,y)", i + 1))?;
            let x = x.trim().parse().map_err(|_| format!("line {}: bad coordinate `{x}`", i + 1))?;
            let y = y.trim().parse().map_err(|_| format!("line {}: bad coordinate `{y}`", i + 1))?;
            Ok(Point::new(x, y))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::dump_trajectory;
    use crate::world::{spiral, two_cell};

    #[test]
    fn one_polyline_with_every_point() {
        let w = spiral();
        let pts = vec![Point::int(0, 0), Point::int(26, 0), Point::int(13, 13)];
        let svg = render_svg(&w, Some(&pts));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("points=\"0,896 832,896 416,480\""));
        assert_eq!(svg.matches("<polygon").count(), 5);
        assert!(render_svg(&w, None).matches("<polyline").count() == 0);
    }

    #[test]
    fn deterministic_and_scaled() {
        let w = two_cell();
        let a = render_svg(&w, None);
        assert_eq!(a, render_svg(&w, None));
        assert!(a.contains("width=\"64\""));
    }

    #[test]
    fn trajectory_text_round_trip() {
        let pts = vec![Point::int(0, 0), Point::new("1/2".parse().unwrap(), 3.into())];
        assert_eq!(parse_trajectory(&dump_trajectory(&pts)).unwrap(), pts);
        assert!(parse_trajectory("(1,2\n").is_err());
    }
}
