//! Shortest branch extraction and the structural checks on it.

use std::fmt;

use super::{covers_point, NodeId, ReachTree};
use crate::geometry::{clip_segment_to_convex, coreach_with_cone, orient, reach_with_cone, Point, Segment};
use crate::world::{EdgeId, Gridworld, RegionId, Subdivision};

/// Segments from the initial state toward the target, with the region of
/// each hop. All index vectors are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub segments: Vec<Segment>,
    /// `regions[i]` licenses the move from `segments[i]` to `segments[i + 1]`.
    pub regions: Vec<RegionId>,
    /// Canonical edge of each segment; `None` only for an initial state that
    /// lies on no edge.
    pub edges: Vec<Option<EdgeId>>,
    /// Tree node behind each segment; `None` for a prepended initial point.
    pub nodes: Vec<Option<NodeId>>,
    /// The state the branch was extracted for; lies on `segments[0]`.
    pub initial: Point,
}

impl Branch {
    pub fn p(&self) -> usize {
        self.segments.len()
    }

    pub fn moves(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    /// The From segment of index `i`: the whole canonical edge, or the point
    /// itself when the segment lies on no edge.
    pub fn edge_segment(&self, i: usize, sub: &Subdivision) -> Segment {
        match self.edges[i] {
            Some(e) => sub.edge(e).segment.clone(),
            None => self.segments[i].clone(),
        }
    }

    /// Same edge identity, treating point-only entries by their segment.
    pub fn same_edge(&self, i: usize, j: usize) -> bool {
        match (self.edges[i], self.edges[j]) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.segments[i] == self.segments[j],
            _ => false,
        }
    }
}

fn first_edge(sub: &Subdivision, p: &Point) -> Option<EdgeId> {
    sub.edges_containing(p).into_iter().next()
}

pub fn find_branch(tree: &ReachTree, world: &Gridworld, sub: &Subdivision, initial: &Point) -> Option<Branch> {
    if world.in_target(initial) {
        return Some(Branch {
            segments: vec![Segment::point(initial.clone())],
            regions: Vec::new(),
            edges: vec![first_edge(sub, initial)],
            nodes: vec![None],
            initial: initial.clone(),
        });
    }
    let best = |pred: &dyn Fn(&Segment) -> bool| {
        tree.nodes.iter().filter(|n| pred(&n.segment)).min_by_key(|n| (n.depth, n.id)).map(|n| n.id)
    };
    let from_node = |id: NodeId| {
        let path = tree.path_to_root(id);
        let segments = path.iter().map(|&i| tree.nodes[i].segment.clone()).collect();
        let regions = path[..path.len() - 1].iter().map(|&i| tree.nodes[i].region).collect();
        let edges = path.iter().map(|&i| Some(tree.nodes[i].edge)).collect();
        let nodes = path.iter().map(|&i| Some(i)).collect();
        Branch { segments, regions, edges, nodes, initial: initial.clone() }
    };
    if let Some(id) = best(&|s| s.contains(initial)) {
        return Some(from_node(id));
    }
    let id = best(&|s| covers_point(world, sub, s, initial))?;
    let mut b = from_node(id);
    let target = &tree.nodes[id].segment;
    let hop = sub.regions_containing(world, initial).into_iter().find(|&r| {
        let region = world.region(r);
        clip_segment_to_convex(target, &region.vertices)
            .and_then(|s| reach_with_cone(region.actions, initial, &s))
            .is_some()
    })?;
    b.segments.insert(0, Segment::point(initial.clone()));
    b.regions.insert(0, hop);
    b.edges.insert(0, first_edge(sub, initial));
    b.nodes.insert(0, None);
    Some(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchViolation {
    /// (i): not every point of segment `i` can move into segment `i+1`
    /// inside region `i`.
    NoMove(usize),
    /// (ii)
    SameRegion(usize),
    /// (iii)
    NotOnEdge(usize),
    /// (iv): edge `i+1` is not an edge of region `i`, and the hop is not a
    /// vertex hop either.
    EdgeNotShared(usize),
    /// Moves `i` and `j` of the witness path meet.
    SelfIntersection(usize, usize),
    /// More than two indices show the repeated-edge pattern.
    RepeatedEdgeLoop { count: usize },
    Shape,
}

impl fmt::Display for BranchViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchViolation::NoMove(i) => write!(f, "(i) fails at index {i}"),
            BranchViolation::SameRegion(i) => write!(f, "(ii) fails at index {i}"),
            BranchViolation::NotOnEdge(i) => write!(f, "(iii) fails at index {i}"),
            BranchViolation::EdgeNotShared(i) => write!(f, "(iv) fails at index {i}"),
            BranchViolation::SelfIntersection(i, j) => write!(f, "witness moves {i} and {j} intersect"),
            BranchViolation::RepeatedEdgeLoop { count } => write!(f, "{count} indices repeat an edge in the same region"),
            BranchViolation::Shape => write!(f, "branch vectors have inconsistent lengths"),
        }
    }
}

/// Canonical witness: start at `start`, then hop to the reachable point of
/// each next segment nearest its first endpoint.
pub fn witness_path(branch: &Branch, world: &Gridworld, start: &Point) -> Option<Vec<Point>> {
    let mut pts = vec![start.clone()];
    for i in 0..branch.moves() {
        let region = world.region(branch.regions[i]);
        let cur = pts.last().unwrap();
        let target = clip_segment_to_convex(&branch.segments[i + 1], &region.vertices)?;
        let reach = reach_with_cone(region.actions, cur, &target)?;
        pts.push(reach.a);
    }
    Some(pts)
}

fn moves_meet(m: &Segment, n: &Segment, adjacent: bool) -> bool {
    if adjacent {
        // consecutive moves share m.b == n.a; they must not fold back
        let collinear = orient(&m.a, &m.b, &n.b).is_zero();
        return collinear && m.delta().dot(&n.delta()).is_negative();
    }
    m.intersects(n)
}

pub fn check_branch_properties(branch: &Branch, world: &Gridworld, sub: &Subdivision) -> Vec<BranchViolation> {
    let p = branch.p();
    if p == 0 || branch.regions.len() + 1 != p || branch.edges.len() != p {
        return vec![BranchViolation::Shape];
    }
    let mut out = Vec::new();
    for i in 0..p - 1 {
        let region = world.region(branch.regions[i]);
        let ok = clip_segment_to_convex(&branch.segments[i], &region.vertices).as_ref() == Some(&branch.segments[i])
            && clip_segment_to_convex(&branch.segments[i + 1], &region.vertices)
                .and_then(|t| coreach_with_cone(region.actions, &branch.segments[i], &t))
                .is_some_and(|s| s == branch.segments[i]);
        if !ok {
            out.push(BranchViolation::NoMove(i));
        }
    }
    for i in 0..p.saturating_sub(2) {
        if branch.regions[i] == branch.regions[i + 1] {
            out.push(BranchViolation::SameRegion(i));
        }
    }
    for i in 0..p {
        let ok = match branch.edges[i] {
            Some(e) => sub.edge(e).segment.covers(&branch.segments[i]),
            None => i == 0 && branch.segments[0].is_degenerate(),
        };
        if !ok {
            out.push(BranchViolation::NotOnEdge(i));
        }
    }
    for i in 0..p.saturating_sub(2) {
        let Some(e) = branch.edges[i + 1] else {
            out.push(BranchViolation::EdgeNotShared(i));
            continue;
        };
        let in_next = sub.edges_of(branch.regions[i + 1]).contains(&e);
        let in_cur = sub.edges_of(branch.regions[i]).contains(&e);
        let vertex_hop = !in_cur && {
            let region = world.region(branch.regions[i]);
            let seg = &branch.segments[i + 1];
            clip_segment_to_convex(seg, &region.vertices)
                .is_some_and(|c| c.is_degenerate() && (c.a == seg.a || c.a == seg.b))
        };
        if !in_next || !(in_cur || vertex_hop) {
            out.push(BranchViolation::EdgeNotShared(i));
        }
    }
    match witness_path(branch, world, &branch.initial) {
        Some(path) => out.extend(self_intersections(&path)),
        None => {
            if !out.iter().any(|v| matches!(v, BranchViolation::NoMove(_))) {
                out.push(BranchViolation::NoMove(0));
            }
        }
    }
    let count = repeated_edge_indices(branch);
    if count > 2 {
        out.push(BranchViolation::RepeatedEdgeLoop { count });
    }
    out
}

fn self_intersections(path: &[Point]) -> Vec<BranchViolation> {
    let moves: Vec<(usize, Segment)> = path
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] != w[1])
        .map(|(k, w)| (k, Segment::new(w[0].clone(), w[1].clone())))
        .collect();
    let mut out = Vec::new();
    for x in 0..moves.len() {
        for y in (x + 1)..moves.len() {
            if moves_meet(&moves[x].1, &moves[y].1, y == x + 1) {
                out.push(BranchViolation::SelfIntersection(moves[x].0, moves[y].0));
            }
        }
    }
    out
}

/// Indices `i` with `e_i = e_{i+1}` that share region and edge with another
/// such index.
pub fn repeated_edge_indices(branch: &Branch) -> usize {
    let p = branch.p();
    let pattern: Vec<usize> = (0..p.saturating_sub(1)).filter(|&i| branch.same_edge(i, i + 1)).collect();
    pattern
        .iter()
        .filter(|&&i| {
            pattern
                .iter()
                .any(|&j| j != i && branch.regions[i] == branch.regions[j] && branch.same_edge(i, j))
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Direction;
    use crate::reachtree::{build_tree, Limits};
    use crate::world::{build_subdivision, double_pass_triangle, spiral, two_cell, two_cell_with};

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(Point::int(a.0, a.1), Point::int(b.0, b.1))
    }

    fn branch_of(w: &Gridworld) -> Option<Branch> {
        let sub = build_subdivision(w).unwrap();
        let t = build_tree(w, &sub, &Limits::for_world(w));
        find_branch(&t, w, &sub, &w.initial)
    }

    #[test]
    fn two_cell_branch() {
        let w = two_cell();
        let b = branch_of(&w).unwrap();
        assert_eq!(b.segments, vec![seg((0, 0), (0, 2)), seg((1, 0), (1, 2))]);
        assert_eq!(b.moves(), 1);
        assert_eq!(check_branch_properties(&b, &w, &build_subdivision(&w).unwrap()), vec![]);
    }

    #[test]
    fn initial_in_target() {
        let mut w = two_cell();
        w.initial = Point::new(crate::rat::Rat::new(3, 2), crate::rat::Rat::one());
        let b = branch_of(&w).unwrap();
        assert_eq!(b.p(), 1);
    }

    #[test]
    fn empty_cone_start_has_no_branch() {
        let mut w = two_cell_with(&[]);
        w.initial = Point::new(crate::rat::Rat::new(1, 2), crate::rat::Rat::one());
        assert!(branch_of(&w).is_none());
    }

    #[test]
    fn interior_initial_is_prepended() {
        let mut w = two_cell();
        w.initial = Point::new(crate::rat::Rat::new(1, 2), crate::rat::Rat::one());
        let b = branch_of(&w).unwrap();
        assert_eq!(b.p(), 2);
        assert_eq!(b.edges[0], None);
        assert_eq!(check_branch_properties(&b, &w, &build_subdivision(&w).unwrap()), vec![]);
    }

    #[test]
    fn spiral_branch_properties() {
        let w = spiral();
        let b = branch_of(&w).unwrap();
        assert_eq!(b.p(), 26);
        let sub = build_subdivision(&w).unwrap();
        assert_eq!(check_branch_properties(&b, &w, &sub), vec![]);
    }

    #[test]
    fn double_pass_branch() {
        let w = double_pass_triangle();
        let b = branch_of(&w).unwrap();
        assert_eq!(b.moves(), 4);
        let sub = build_subdivision(&w).unwrap();
        assert_eq!(check_branch_properties(&b, &w, &sub), vec![]);
        let path = witness_path(&b, &w, &w.initial).unwrap();
        let expect: Vec<Point> = [(4, 3), (5, 3), (8, 6), (4, 6), (2, 6)].iter().map(|&(x, y)| Point::int(x, y)).collect();
        assert_eq!(path, expect);
    }

    #[test]
    fn same_region_is_flagged() {
        let w = two_cell_with(&[Direction::Right, Direction::Up]);
        let sub = build_subdivision(&w).unwrap();
        let mut b = branch_of(&w).unwrap();
        // duplicate the first hop
        b.segments.insert(0, b.segments[0].clone());
        b.regions.insert(0, b.regions[0]);
        b.edges.insert(0, b.edges[0]);
        b.nodes.insert(0, None);
        assert!(check_branch_properties(&b, &w, &sub).contains(&BranchViolation::SameRegion(0)));
    }

    #[test]
    fn triple_repeat_is_flagged() {
        let s = seg((0, 0), (0, 2));
        let b = Branch {
            segments: vec![s.clone(); 7],
            regions: vec![0, 1, 0, 1, 2, 0],
            edges: vec![Some(0), Some(0), Some(1), Some(1), Some(2), Some(0), Some(0)],
            nodes: vec![None; 7],
            initial: s.a.clone(),
        };
        // pattern at 0, 2, 5 -> 0 and 5 pair (region 0, edge 0); 2 has no partner
        assert_eq!(repeated_edge_indices(&b), 2);
        let b = Branch {
            segments: vec![s.clone(); 7],
            regions: vec![0, 1, 0, 1, 0, 1],
            edges: vec![Some(0); 7],
            nodes: vec![None; 7],
            initial: s.a.clone(),
        };
        assert!(repeated_edge_indices(&b) > 2);
    }
}
