//! Discretised PRISM `mdp` model of a world.
//!
//! Coordinates are scaled by `resolution * D`, where `D` is the world's common
//! denominator, so every vertex lands on the integer lattice. Each command is
//! a unit lattice step that starts and ends inside the same region.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::Gridworld;
use crate::geometry::{Direction, Point};
use crate::rat::Rat;

fn scaled(v: &Rat, s: &BigInt) -> BigInt {
    let r = v * &Rat::from(s.clone());
    debug_assert!(r.is_integer());
    r.numer().clone()
}

/// Guards `orient(P, Q, (x+ox, y+oy)) >= 0` for each side.
fn region_guard(vertices: &[Point], s: &BigInt, ox: i64, oy: i64) -> String {
    let n = vertices.len();
    let mut parts = Vec::new();
    for i in 0..n {
        let (p, q) = (&vertices[i], &vertices[(i + 1) % n]);
        let (px, py) = (scaled(&p.x, s), scaled(&p.y, s));
        let dx = scaled(&q.x, s) - &px;
        let dy = scaled(&q.y, s) - &py;
        if dx == BigInt::from(0) && dy == BigInt::from(0) {
            continue;
        }
        // dx*(Y-py) - dy*(X-px) >= 0  <=>  -dy*X + dx*Y >= dx*py - dy*px
        let rhs = &dx * &py - &dy * &px - &dx * BigInt::from(oy) + &dy * BigInt::from(ox);
        parts.push(format!("({})*x + ({})*y >= {}", -&dy, dx, rhs));
    }
    parts.join(" & ")
}

pub fn export_prism(world: &Gridworld, resolution: u32) -> String {
    let s = world.common_denominator() * BigInt::from(resolution.max(1));
    let w = scaled(&world.side, &s);
    let mut out = String::new();
    let _ = writeln!(out, "mdp");
    let _ = writeln!(out);
    let _ = writeln!(out, "module gridworld");
    let _ = writeln!(out, "    x : [0..{w}] init {};", scaled(&world.initial.x, &s).min(w.clone()));
    let _ = writeln!(out, "    y : [0..{w}] init {};", scaled(&world.initial.y, &s).min(w.clone()));
    for r in &world.regions {
        let _ = writeln!(out, "    // region {}", r.id);
        for d in r.actions.directions() {
            let v = d.vector();
            let (ox, oy) = (v.x.numer().try_into().unwrap_or(0i64), v.y.numer().try_into().unwrap_or(0i64));
            let here = region_guard(&r.vertices, &s, 0, 0);
            let there = region_guard(&r.vertices, &s, ox, oy);
            let update = match d {
                Direction::Left => "(x'=x-1)",
                Direction::Right => "(x'=x+1)",
                Direction::Up => "(y'=y+1)",
                Direction::Down => "(y'=y-1)",
            };
            let _ = writeln!(out, "    [] {here} & {there} -> {update};");
        }
    }
    let _ = writeln!(out, "endmodule");
    let _ = writeln!(out);
    let target = &world.regions[world.target];
    let _ = writeln!(out, "label \"target\" = {};", region_guard(&target.vertices, &s, 0, 0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{spiral, two_cell};

    #[test]
    fn two_cell_export() {
        let text = export_prism(&two_cell(), 1);
        assert_eq!(text.matches("// region").count(), 2);
        assert_eq!(text.matches("module ").count(), 1);
        assert_eq!(text.matches("endmodule").count(), 1);
        assert!(text.starts_with("mdp"));
        assert!(text.contains("x : [0..2] init 0;"));
        // {RIGHT, UP} plus the target's {UP}
        assert_eq!(text.matches(" -> ").count(), 3);
        assert!(text.contains("label \"target\""));
    }

    #[test]
    fn resolution_scales_range() {
        let text = export_prism(&spiral(), 2);
        assert!(text.contains("x : [0..56]"));
        assert_eq!(export_prism(&spiral(), 2), text);
    }
}
