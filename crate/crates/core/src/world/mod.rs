//! Gridworld model: convex regions with action cones tiling `[0, side]^2`.

mod fixtures;
mod generate;
mod io;
mod prism;
mod subdivision;

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::geometry::{convex_contains, convex_intersection, orient, twice_area, ActionCone, Point};
use crate::rat::Rat;

pub use fixtures::{double_pass_triangle, spiral, two_cell, two_cell_with, two_squares, DOUBLE_PASS_TRIANGLE_ID};
pub use generate::{generate_random, GenerateOptions};
pub use io::{load, save, LoadError};
pub use prism::export_prism;
pub use subdivision::{build_subdivision, CanonicalEdge, EdgeId, HalfEdge, HalfEdgeId, Subdivision, SubdivisionError};

pub type RegionId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: RegionId,
    /// Counterclockwise; collinear interior vertices are allowed.
    pub vertices: Vec<Point>,
    pub actions: ActionCone,
}

impl Region {
    pub fn new(id: RegionId, vertices: Vec<Point>, actions: ActionCone) -> Region {
        Region { id, vertices, actions }
    }

    pub fn contains(&self, p: &Point) -> bool {
        convex_contains(&self.vertices, p)
    }

    pub fn area(&self) -> Rat {
        twice_area(&self.vertices) / Rat::from_int(2)
    }

    pub fn centroid(&self) -> Point {
        let k = Rat::from_int(self.vertices.len() as i64);
        let mut sx = Rat::zero();
        let mut sy = Rat::zero();
        for v in &self.vertices {
            sx = sx + &v.x;
            sy = sy + &v.y;
        }
        Point::new(sx / &k, sy / &k)
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            if v.x < lo.x {
                lo.x = v.x.clone();
            }
            if v.y < lo.y {
                lo.y = v.y.clone();
            }
            if v.x > hi.x {
                hi.x = v.x.clone();
            }
            if v.y > hi.y {
                hi.y = v.y.clone();
            }
        }
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gridworld {
    pub side: Rat,
    pub regions: Vec<Region>,
    pub initial: Point,
    pub target: RegionId,
}

impl Gridworld {
    pub fn region(&self, id: RegionId) -> &Region {
        &self.regions[id]
    }

    pub fn target_region(&self) -> &Region {
        &self.regions[self.target]
    }

    pub fn in_target(&self, p: &Point) -> bool {
        self.regions.get(self.target).is_some_and(|r| r.contains(p))
    }

    pub fn square(&self) -> Vec<Point> {
        let s = &self.side;
        vec![
            Point::new(Rat::zero(), Rat::zero()),
            Point::new(s.clone(), Rat::zero()),
            Point::new(s.clone(), s.clone()),
            Point::new(Rat::zero(), s.clone()),
        ]
    }

    /// Regions whose closed polygon contains `p`, in id order.
    pub fn regions_containing(&self, p: &Point) -> Vec<RegionId> {
        self.regions.iter().filter(|r| r.contains(p)).map(|r| r.id).collect()
    }

    /// Least common multiple of every coordinate denominator in the world.
    pub fn common_denominator(&self) -> BigInt {
        let coords = self
            .regions
            .iter()
            .flat_map(|r| r.vertices.iter())
            .chain(std::iter::once(&self.initial))
            .flat_map(|p| [&p.x, &p.y])
            .chain(std::iter::once(&self.side));
        Rat::common_denominator(coords)
    }

    pub fn common_denominator_u64(&self) -> Option<u64> {
        self.common_denominator().to_u64()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IdMismatch { index: usize, id: RegionId },
    TooFewVertices(RegionId),
    NotConvex(RegionId),
    NonPositiveArea(RegionId),
    OutOfBounds(RegionId),
    Overlap(RegionId, RegionId),
    Coverage { area_sum: Rat, expected: Rat },
    InitialOutOfBounds,
    UnknownTarget(RegionId),
    BadSide,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdMismatch { index, id } => write!(f, "region at position {index} has id {id}"),
            Violation::TooFewVertices(id) => write!(f, "region {id} has fewer than 3 vertices"),
            Violation::NotConvex(id) => write!(f, "region {id} is not convex and counterclockwise"),
            Violation::NonPositiveArea(id) => write!(f, "region {id} has non-positive area"),
            Violation::OutOfBounds(id) => write!(f, "region {id} leaves the grid"),
            Violation::Overlap(a, b) => write!(f, "regions {a} and {b} overlap"),
            Violation::Coverage { area_sum, expected } => {
                write!(f, "region areas sum to {area_sum}, grid area is {expected}")
            }
            Violation::InitialOutOfBounds => write!(f, "initial state outside the grid"),
            Violation::UnknownTarget(id) => write!(f, "target region {id} does not exist"),
            Violation::BadSide => write!(f, "grid side must be positive"),
        }
    }
}

fn convex_ccw(vertices: &[Point]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        if a == b {
            return false;
        }
        if vertices.iter().any(|v| orient(a, b, v).is_negative()) {
            return false;
        }
    }
    true
}

fn bboxes_overlap(a: &(Point, Point), b: &(Point, Point)) -> bool {
    a.0.x < b.1.x && b.0.x < a.1.x && a.0.y < b.1.y && b.0.y < a.1.y
}

/// Exact structural checks. An empty result means the world is valid.
pub fn validate(world: &Gridworld) -> Vec<Violation> {
    let mut out = Vec::new();
    if !world.side.is_positive() {
        out.push(Violation::BadSide);
        return out;
    }
    let square = world.square();
    let mut shapes_ok = vec![false; world.regions.len()];
    for (index, r) in world.regions.iter().enumerate() {
        if r.id != index {
            out.push(Violation::IdMismatch { index, id: r.id });
        }
        if r.vertices.len() < 3 {
            out.push(Violation::TooFewVertices(r.id));
            continue;
        }
        if !twice_area(&r.vertices).is_positive() {
            out.push(Violation::NonPositiveArea(r.id));
            continue;
        }
        if !convex_ccw(&r.vertices) {
            out.push(Violation::NotConvex(r.id));
            continue;
        }
        if r.vertices.iter().any(|v| !convex_contains(&square, v)) {
            out.push(Violation::OutOfBounds(r.id));
        }
        shapes_ok[index] = true;
    }
    let boxes: Vec<_> = world.regions.iter().map(|r| (r.vertices.len() >= 3).then(|| r.bbox())).collect();
    for i in 0..world.regions.len() {
        for j in (i + 1)..world.regions.len() {
            if !(shapes_ok[i] && shapes_ok[j]) {
                continue;
            }
            let (Some(bi), Some(bj)) = (&boxes[i], &boxes[j]) else { continue };
            if !bboxes_overlap(bi, bj) {
                continue;
            }
            let inter = convex_intersection(&world.regions[i].vertices, &world.regions[j].vertices);
            if inter.len() >= 3 && twice_area(&inter).is_positive() {
                out.push(Violation::Overlap(world.regions[i].id, world.regions[j].id));
            }
        }
    }
    let area_sum = world.regions.iter().filter(|r| r.vertices.len() >= 3).fold(Rat::zero(), |acc, r| acc + r.area());
    let expected = &world.side * &world.side;
    if area_sum != expected {
        out.push(Violation::Coverage { area_sum, expected });
    }
    if !convex_contains(&square, &world.initial) {
        out.push(Violation::InitialOutOfBounds);
    }
    if world.target >= world.regions.len() {
        out.push(Violation::UnknownTarget(world.target));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Direction;

    #[test]
    fn fixtures_validate() {
        assert_eq!(spiral().validate(), vec![]);
        assert_eq!(two_squares().validate(), vec![]);
        assert_eq!(two_cell().validate(), vec![]);
        assert_eq!(double_pass_triangle().validate(), vec![]);
    }

    #[test]
    fn spiral_areas_are_exact() {
        let w = spiral();
        let areas: Vec<Rat> = w.regions.iter().map(|r| r.area()).collect();
        let total = areas.iter().fold(Rat::zero(), |a, b| a + b);
        assert_eq!(total, Rat::from_int(784));
        assert_eq!(w.target_region().area(), Rat::from_int(1));
    }

    #[test]
    fn overlap_is_reported() {
        let cone = ActionCone::of(&[Direction::Right]);
        let sq = |x0: i64, x1: i64| {
            vec![Point::int(x0, 0), Point::int(x1, 0), Point::int(x1, 1), Point::int(x0, 1)]
        };
        let w = Gridworld {
            side: Rat::from_int(2),
            regions: vec![Region::new(0, sq(0, 2), cone), Region::new(1, sq(1, 2), cone)],
            initial: Point::int(0, 0),
            target: 1,
        };
        let v = w.validate();
        assert!(v.contains(&Violation::Overlap(0, 1)), "{v:?}");
    }

    #[test]
    fn clockwise_region_is_rejected() {
        let mut w = two_squares();
        w.regions[0].vertices.reverse();
        assert_eq!(w.validate().first(), Some(&Violation::NonPositiveArea(0)));
    }
}
