//! Random worlds cut out of `[0,n]^2` by straight lines.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Gridworld, Region};
use crate::geometry::{clip_convex_halfplane, convex_contains_strict, orient, twice_area, ActionCone, Point};
use crate::rat::Rat;

#[derive(Clone, Debug, Default)]
pub struct GenerateOptions {
    pub allow_empty_cones: bool,
    /// Put the initial state strictly inside a region instead of on a
    /// boundary vertex.
    pub interior_initial: bool,
}

/// Line through two integer points, normalised so equal lines compare equal.
fn line_key(p: &Point, q: &Point) -> (Rat, Rat, Rat) {
    // a x + b y = c
    let a = &q.y - &p.y;
    let b = &p.x - &q.x;
    let c = &a * &p.x + &b * &p.y;
    let lead = if !a.is_zero() { a.clone() } else { b.clone() };
    (a / &lead, b / &lead, c / &lead)
}

fn split(cell: &[Point], p: &Point, q: &Point) -> Vec<Vec<Point>> {
    let left = clip_convex_halfplane(cell, p, q);
    let right = clip_convex_halfplane(cell, q, p);
    let ok = |c: &Vec<Point>| c.len() >= 3 && twice_area(c).is_positive();
    if ok(&left) && ok(&right) {
        vec![left, right]
    } else {
        vec![cell.to_vec()]
    }
}

fn random_cone(rng: &mut ChaCha8Rng, allow_empty: bool) -> ActionCone {
    let lo = if allow_empty { 0 } else { 1 };
    ActionCone::from_bits(rng.gen_range(lo..16u8))
}

/// Random integer point on the boundary of `[0,n]^2`, with its side index.
fn boundary_point(rng: &mut ChaCha8Rng, n: i64) -> (usize, Point) {
    let side = rng.gen_range(0..4usize);
    let t = rng.gen_range(0..n);
    let p = match side {
        0 => Point::int(t, 0),
        1 => Point::int(n, t),
        2 => Point::int(n - t, n),
        _ => Point::int(0, n - t),
    };
    (side, p)
}

/// Deterministic for a fixed `(n, num_predicates, seed, options)`.
///
/// Each predicate is a chord of the square between integer boundary points on
/// two different sides; chords that repeat an earlier line are redrawn (with a
/// bounded number of attempts).
pub fn generate_random(n: u32, num_predicates: u32, seed: u64, options: &GenerateOptions) -> Gridworld {
    assert!(n >= 2, "grid side must be at least 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = Rat::from_int(n as i64);
    let square = vec![
        Point::int(0, 0),
        Point::int(n as i64, 0),
        Point::int(n as i64, n as i64),
        Point::int(0, n as i64),
    ];
    let mut lines: Vec<(Point, Point)> = Vec::new();
    let mut keys = Vec::new();
    let mut attempts = 0;
    while lines.len() < num_predicates as usize && attempts < 1000 * (num_predicates as usize + 1) {
        attempts += 1;
        let (sp, p) = boundary_point(&mut rng, n as i64);
        let (sq, q) = boundary_point(&mut rng, n as i64);
        if sp == sq || p == q {
            continue;
        }
        let key = line_key(&p, &q);
        if keys.contains(&key) {
            continue;
        }
        let signs: Vec<i32> = square.iter().map(|c| orient(&p, &q, c).signum()).collect();
        if !(signs.contains(&1) && signs.contains(&-1)) {
            continue;
        }
        keys.push(key);
        lines.push((p, q));
    }

    let mut cells = vec![square];
    for (p, q) in &lines {
        cells = cells.iter().flat_map(|c| split(c, p, q)).collect();
    }
    // Regions in a canonical order so ids do not depend on split history.
    cells.sort_by_cached_key(|c| {
        let mut c = c.clone();
        c.sort();
        c
    });
    let regions: Vec<Region> = cells
        .into_iter()
        .enumerate()
        .map(|(id, vertices)| Region::new(id, vertices, random_cone(&mut rng, options.allow_empty_cones)))
        .collect();
    let target = rng.gen_range(0..regions.len());

    let initial = if options.interior_initial {
        let r = loop {
            let r = rng.gen_range(0..regions.len());
            if r != target || regions.len() == 1 {
                break r;
            }
        };
        let c = regions[r].centroid();
        debug_assert!(convex_contains_strict(&regions[r].vertices, &c));
        c
    } else {
        pick_boundary_vertex(&mut rng, &regions, target, &side)
    };
    Gridworld { side, regions, initial, target }
}

fn pick_boundary_vertex(rng: &mut ChaCha8Rng, regions: &[Region], target: usize, side: &Rat) -> Point {
    let on_border = |p: &Point| p.x.is_zero() || p.y.is_zero() || &p.x == side || &p.y == side;
    let target_poly = &regions[target].vertices;
    let mut candidates: Vec<Point> = regions
        .iter()
        .flat_map(|r| r.vertices.iter())
        .filter(|p| on_border(p) && !super::convex_contains(target_poly, p))
        .cloned()
        .collect();
    if candidates.is_empty() {
        candidates = regions
            .iter()
            .flat_map(|r| r.vertices.iter())
            .filter(|p| !super::convex_contains(target_poly, p))
            .cloned()
            .collect();
    }
    if candidates.is_empty() {
        candidates = regions[target].vertices.clone();
    }
    candidates.sort();
    candidates.dedup();
    candidates.choose(rng).cloned().expect("at least one vertex")
}
