//! Half-edge view of a gridworld.
//!
//! A canonical edge is either the maximal segment shared by two regions or a
//! region's contact with one side of the square. Edges of a region may meet
//! several neighbours along one polygon side (T-junctions), so canonical
//! edges are computed pairwise rather than from polygon sides.

use std::collections::BTreeMap;

use super::{Gridworld, RegionId};
use crate::geometry::{collinear_hull, orient, Point, Segment};
use crate::rat::Rat;

pub type EdgeId = usize;
pub type HalfEdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalEdge {
    pub id: EdgeId,
    /// Endpoints in lexicographic order.
    pub segment: Segment,
    /// One region for boundary edges, two for interior ones.
    pub regions: Vec<RegionId>,
}

impl CanonicalEdge {
    pub fn is_boundary(&self) -> bool {
        self.regions.len() == 1
    }

    pub fn other_region(&self, r: RegionId) -> Option<RegionId> {
        self.regions.iter().copied().find(|&x| x != r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub id: HalfEdgeId,
    pub region: RegionId,
    pub edge: EdgeId,
    /// Oriented counterclockwise around `region`.
    pub segment: Segment,
    pub twin: Option<HalfEdgeId>,
}

#[derive(Clone, Debug, Default)]
pub struct Subdivision {
    pub edges: Vec<CanonicalEdge>,
    pub half_edges: Vec<HalfEdge>,
    /// Per region, half-edge ids in counterclockwise order.
    pub region_half_edges: Vec<Vec<HalfEdgeId>>,
    region_boxes: Vec<Bbox>,
    edge_boxes: Vec<Bbox>,
}

/// Float bounding box, padded so it never rejects a point the exact test
/// would accept.
#[derive(Clone, Copy, Debug, Default)]
struct Bbox([f64; 4]);

impl Bbox {
    fn around<'a>(points: impl IntoIterator<Item = &'a Point>) -> Bbox {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for p in points {
            let (x, y) = (p.x.to_f64(), p.y.to_f64());
            b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
        }
        let pad = 1e-9 * (1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        Bbox([b[0] - pad, b[1] - pad, b[2] + pad, b[3] + pad])
    }

    fn may_contain(&self, x: f64, y: f64) -> bool {
        let b = &self.0;
        !(x < b[0] || y < b[1] || x > b[2] || y > b[3])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubdivisionError {
    #[error("region {region}: boundary near {at} is not shared with any region or the grid border")]
    Uncovered { region: RegionId, at: Point },
}

impl Subdivision {
    pub fn edge(&self, id: EdgeId) -> &CanonicalEdge {
        &self.edges[id]
    }

    /// Canonical edge ids of `region`, counterclockwise.
    pub fn edges_of(&self, region: RegionId) -> Vec<EdgeId> {
        self.region_half_edges[region].iter().map(|&h| self.half_edges[h].edge).collect()
    }

    pub fn adjacent_region(&self, region: RegionId, edge: EdgeId) -> Option<RegionId> {
        self.edges[edge].other_region(region)
    }

    /// Canonical edges (of any region) whose segment contains `p`.
    pub fn edges_containing(&self, p: &Point) -> Vec<EdgeId> {
        let (x, y) = (p.x.to_f64(), p.y.to_f64());
        self.edges
            .iter()
            .zip(&self.edge_boxes)
            .filter(|(e, b)| b.may_contain(x, y) && e.segment.contains(p))
            .map(|(e, _)| e.id)
            .collect()
    }

    /// Same as [`Gridworld::regions_containing`], using the cached boxes.
    pub fn regions_containing(&self, world: &Gridworld, p: &Point) -> Vec<RegionId> {
        let (x, y) = (p.x.to_f64(), p.y.to_f64());
        world
            .regions
            .iter()
            .zip(&self.region_boxes)
            .filter(|(r, b)| b.may_contain(x, y) && r.contains(p))
            .map(|(r, _)| r.id)
            .collect()
    }

    pub fn find_edge(&self, segment: &Segment) -> Option<EdgeId> {
        let c = segment.canonical();
        self.edges.iter().position(|e| e.segment == c)
    }
}

fn sides(poly: &[Point]) -> impl Iterator<Item = Segment> + '_ {
    let n = poly.len();
    (0..n).map(move |i| Segment::new(poly[i].clone(), poly[(i + 1) % n].clone()))
}

/// Positive-length intersection of two collinear segments.
fn collinear_overlap(s: &Segment, t: &Segment) -> Option<Segment> {
    if !(s.on_line(&t.a) && s.on_line(&t.b)) {
        return None;
    }
    let (t0, t1) = (s.param_of(&t.a), s.param_of(&t.b));
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let lo = lo.greater(&Rat::zero()).clone();
    let hi = hi.lesser(&Rat::one()).clone();
    (lo < hi).then(|| s.sub_segment(&lo, &hi))
}

/// Union of the collinear overlaps of the two boundaries, which is a single
/// segment for convex regions with disjoint interiors.
fn shared_segment(p: &[Point], q: &[Point]) -> Option<Segment> {
    let mut acc: Option<Segment> = None;
    for s in sides(p) {
        for t in sides(q) {
            if let Some(o) = collinear_overlap(&s, &t) {
                acc = Some(match acc {
                    None => o,
                    Some(prev) => collinear_hull(&prev, &o).unwrap_or(prev),
                });
            }
        }
    }
    acc.map(|s| s.canonical())
}

fn border_segments(poly: &[Point], side: &Rat) -> Vec<Segment> {
    let zero = Rat::zero();
    let corners = [
        Segment::new(Point::new(zero.clone(), zero.clone()), Point::new(side.clone(), zero.clone())),
        Segment::new(Point::new(side.clone(), zero.clone()), Point::new(side.clone(), side.clone())),
        Segment::new(Point::new(side.clone(), side.clone()), Point::new(zero.clone(), side.clone())),
        Segment::new(Point::new(zero.clone(), side.clone()), Point::new(zero.clone(), zero.clone())),
    ];
    let mut out = Vec::new();
    for border in &corners {
        let mut acc: Option<Segment> = None;
        for s in sides(poly) {
            if let Some(o) = collinear_overlap(border, &s) {
                acc = Some(match acc {
                    None => o,
                    Some(prev) => collinear_hull(&prev, &o).unwrap_or(prev),
                });
            }
        }
        out.extend(acc.map(|s| s.canonical()));
    }
    out
}

/// `(side index, parameter)` of `p` walking the boundary counterclockwise.
fn boundary_key(poly: &[Point], p: &Point) -> (usize, Rat) {
    for (i, s) in sides(poly).enumerate() {
        if s.contains(p) && *p != s.b {
            return (i, s.param_of(p));
        }
    }
    (poly.len(), Rat::zero())
}

fn vertex_mean(poly: &[Point]) -> Point {
    let k = Rat::from_int(poly.len() as i64);
    let (sx, sy) = poly.iter().fold((Rat::zero(), Rat::zero()), |(x, y), v| (x + &v.x, y + &v.y));
    Point::new(sx / &k, sy / &k)
}

/// Checks that the canonical pieces cover every polygon side of `poly`.
fn check_covered(region: RegionId, poly: &[Point], pieces: &[Segment]) -> Result<(), SubdivisionError> {
    for s in sides(poly) {
        let mut ts: Vec<(Rat, Rat)> = pieces
            .iter()
            .filter_map(|p| collinear_overlap(&s, p))
            .map(|o| {
                let (a, b) = (s.param_of(&o.a), s.param_of(&o.b));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        ts.sort();
        let mut cursor = Rat::zero();
        for (lo, hi) in ts {
            if lo > cursor {
                break;
            }
            if hi > cursor {
                cursor = hi;
            }
        }
        if cursor < Rat::one() {
            return Err(SubdivisionError::Uncovered { region, at: s.at(&cursor) });
        }
    }
    Ok(())
}

pub fn build_subdivision(world: &Gridworld) -> Result<Subdivision, SubdivisionError> {
    let n = world.regions.len();
    let boxes: Vec<_> = world.regions.iter().map(|r| r.bbox()).collect();
    let mut edges: Vec<CanonicalEdge> = Vec::new();
    let mut per_region: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    // Boundary pieces first per region, then shared ones; ids follow
    // discovery order which is deterministic.
    for r in &world.regions {
        for seg in border_segments(&r.vertices, &world.side) {
            let id = edges.len();
            edges.push(CanonicalEdge { id, segment: seg, regions: vec![r.id] });
            per_region[r.id].push(id);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (bi, bj) = (&boxes[i], &boxes[j]);
            if bi.0.x > bj.1.x || bj.0.x > bi.1.x || bi.0.y > bj.1.y || bj.0.y > bi.1.y {
                continue;
            }
            if let Some(seg) = shared_segment(&world.regions[i].vertices, &world.regions[j].vertices) {
                let id = edges.len();
                edges.push(CanonicalEdge { id, segment: seg, regions: vec![i, j] });
                per_region[i].push(id);
                per_region[j].push(id);
            }
        }
    }

    let mut half_edges: Vec<HalfEdge> = Vec::new();
    let mut region_half_edges = vec![Vec::new(); n];
    let mut slot: BTreeMap<(EdgeId, RegionId), HalfEdgeId> = BTreeMap::new();
    for r in &world.regions {
        let pieces: Vec<Segment> = per_region[r.id].iter().map(|&e| edges[e].segment.clone()).collect();
        check_covered(r.id, &r.vertices, &pieces)?;
        let inside = vertex_mean(&r.vertices);
        let mut oriented: Vec<(EdgeId, Segment)> = per_region[r.id]
            .iter()
            .map(|&e| {
                let s = &edges[e].segment;
                let s = if orient(&s.a, &s.b, &inside).is_positive() { s.clone() } else { s.reversed() };
                (e, s)
            })
            .collect();
        oriented.sort_by_cached_key(|(_, s)| boundary_key(&r.vertices, &s.a));
        for (e, s) in oriented {
            let id = half_edges.len();
            half_edges.push(HalfEdge { id, region: r.id, edge: e, segment: s, twin: None });
            region_half_edges[r.id].push(id);
            slot.insert((e, r.id), id);
        }
    }
    for h in 0..half_edges.len() {
        let (e, r) = (half_edges[h].edge, half_edges[h].region);
        if let Some(other) = edges[e].other_region(r) {
            half_edges[h].twin = slot.get(&(e, other)).copied();
        }
    }
    let region_boxes = world.regions.iter().map(|r| Bbox::around(&r.vertices)).collect();
    let edge_boxes = edges.iter().map(|e| Bbox::around([&e.segment.a, &e.segment.b])).collect();
    Ok(Subdivision { edges, half_edges, region_half_edges, region_boxes, edge_boxes })
}
