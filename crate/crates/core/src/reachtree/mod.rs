//! Backward breadth-first tree of shortest paths into the target region.
//!
//! Each node is a segment lying on a canonical edge, together with the region
//! in which the single move from that segment to its parent's segment takes
//! place. Root children are the edges of the target region.

mod branch;
mod dump;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::Bound;

use crate::geometry::{clip_segment_to_convex, coreach_with_cone, reach_with_cone, Point, Segment};
use crate::rat::Rat;
use crate::world::{EdgeId, Gridworld, RegionId, Subdivision};

pub use branch::{check_branch_properties, find_branch, repeated_edge_indices, witness_path, Branch, BranchViolation};
pub use dump::{dump_tree, tree_to_dot};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub id: NodeId,
    pub segment: Segment,
    /// Region of the move from `segment` toward the parent segment; the
    /// target region for root children.
    pub region: RegionId,
    /// Canonical edge holding `segment`.
    pub edge: EdgeId,
    /// `None` for root children.
    pub parent: Option<NodeId>,
    pub depth: usize,
    /// Created by expanding into a region that touches the parent segment only
    /// at an endpoint.
    pub via_vertex: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeStatus {
    /// Frontier emptied: every winning edge point is in the tree.
    Exhausted,
    /// A depth or node limit stopped the search.
    Truncated,
    /// Stopped early once the requested point was covered.
    Found,
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub max_depth: usize,
    pub max_nodes: usize,
    /// Stop as soon as a node covering this point has been created.
    pub stop_at: Option<Point>,
    /// Nodes with a coordinate denominator wider than this many bits are
    /// kept but not expanded, and the tree then ends Truncated rather than
    /// Exhausted.
    pub max_bits: Option<u64>,
}

impl Limits {
    pub fn for_world(world: &Gridworld) -> Limits {
        let r = world.regions.len().max(1);
        Limits { max_depth: 4 * r * r, max_nodes: 1_000_000, stop_at: None, max_bits: None }
    }

    pub fn new(max_depth: usize, max_nodes: usize) -> Limits {
        Limits { max_depth, max_nodes, stop_at: None, max_bits: None }
    }

    pub fn stopping_at(mut self, p: Point) -> Limits {
        self.stop_at = Some(p);
        self
    }

    pub fn with_max_bits(mut self, bits: u64) -> Limits {
        self.max_bits = Some(bits);
        self
    }

    fn too_wide(&self, s: &Segment) -> bool {
        self.max_bits.is_some_and(|cap| [&s.a.x, &s.a.y, &s.b.x, &s.b.y].iter().any(|v| v.denom().bits() > cap))
    }
}

#[derive(Clone, Debug)]
pub struct ReachTree {
    pub nodes: Vec<TreeNode>,
    /// Claimed segments per canonical edge.
    pub explored: Vec<Vec<Segment>>,
    pub frontier: VecDeque<NodeId>,
    pub status: TreeStatus,
    claims: Vec<Claims>,
}

/// Claimed parts of one edge as parameter ranges along the edge segment.
#[derive(Clone, Debug, Default)]
struct Claims {
    /// Disjoint open interiors, keyed by start.
    spans: BTreeMap<Rat, Rat>,
    points: BTreeSet<Rat>,
}

impl Claims {
    fn covers(&self, t: &Rat) -> bool {
        self.points.contains(t) || self.spans.range((Bound::Unbounded, Bound::Included(t))).next_back().is_some_and(|(_, hi)| hi >= t)
    }

    /// Unclaimed subranges of `[lo, hi]` with positive length.
    fn gaps(&self, lo: &Rat, hi: &Rat) -> Vec<(Rat, Rat)> {
        let first = self.spans.range((Bound::Unbounded, Bound::Included(lo))).next_back().map(|(k, _)| k.clone());
        let iter = match &first {
            Some(k) => self.spans.range((Bound::Included(k), Bound::Unbounded)),
            None => self.spans.range::<Rat, _>(..),
        };
        let mut out = Vec::new();
        let mut cur = lo.clone();
        for (a, b) in iter {
            if a >= hi {
                break;
            }
            if a > &cur {
                out.push((cur.clone(), a.clone()));
            }
            if b > &cur {
                cur = b.clone();
            }
        }
        if &cur < hi {
            out.push((cur, hi.clone()));
        }
        out
    }

    fn insert(&mut self, lo: Rat, hi: Rat) {
        if lo == hi {
            self.points.insert(lo);
        } else {
            self.spans.insert(lo, hi);
        }
    }
}

fn span_on(base: &Segment, s: &Segment) -> (Rat, Rat) {
    let (u, v) = (base.param_of(&s.a), base.param_of(&s.b));
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl ReachTree {
    /// Node count including the virtual root.
    pub fn node_count(&self) -> usize {
        self.nodes.len() + 1
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn children_of_root(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.parent.is_none())
    }

    /// Node ids from `id` up to its root child.
    pub fn path_to_root(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out
    }

    fn claimed(&self, sub: &Subdivision, p: &Point) -> bool {
        sub.edges_containing(p).into_iter().any(|e| self.claims[e].covers(&sub.edge(e).segment.param_of(p)))
    }

    fn add_child(&mut self, sub: &Subdivision, segment: Segment, region: RegionId, edge: EdgeId, parent: Option<NodeId>, depth: usize, via_vertex: bool) -> NodeId {
        let id = self.nodes.len();
        let (lo, hi) = span_on(&sub.edge(edge).segment, &segment);
        self.claims[edge].insert(lo, hi);
        self.explored[edge].push(segment.clone());
        self.nodes.push(TreeNode { id, segment, region, edge, parent, depth, via_vertex });
        self.frontier.push_back(id);
        id
    }

    /// Adds every uncovered part of `candidate` (a subsegment of edge `edge`)
    /// as a child of `parent`.
    fn offer(&mut self, sub: &Subdivision, candidate: Option<Segment>, region: RegionId, edge: EdgeId, parent: NodeId, via_vertex: bool) -> Vec<NodeId> {
        let Some(c) = candidate else { return Vec::new() };
        let pieces = if c.is_degenerate() {
            if self.claimed(sub, &c.a) {
                Vec::new()
            } else {
                vec![c]
            }
        } else {
            let base = &sub.edge(edge).segment;
            let (lo, hi) = span_on(base, &c);
            let forward = base.param_of(&c.a) <= base.param_of(&c.b);
            let mut gaps = self.claims[edge].gaps(&lo, &hi);
            if !forward {
                gaps.reverse();
            }
            gaps.into_iter()
                .map(|(u, v)| if forward { base.sub_segment(&u, &v) } else { base.sub_segment(&v, &u) })
                .collect()
        };
        let depth = self.nodes[parent].depth + 1;
        pieces.into_iter().map(|s| self.add_child(sub, s, region, edge, Some(parent), depth, via_vertex)).collect()
    }
}

pub fn init_tree(world: &Gridworld, sub: &Subdivision) -> ReachTree {
    let mut tree = ReachTree {
        nodes: Vec::new(),
        explored: vec![Vec::new(); sub.edges.len()],
        frontier: VecDeque::new(),
        status: TreeStatus::Exhausted,
        claims: vec![Claims::default(); sub.edges.len()],
    };
    for e in sub.edges_of(world.target) {
        tree.add_child(sub, sub.edge(e).segment.clone(), world.target, e, None, 1, false);
    }
    tree
}

/// `edges` rotated so that it starts at `first` (unchanged if absent).
fn rotated(edges: Vec<EdgeId>, first: impl Fn(EdgeId) -> bool) -> Vec<EdgeId> {
    let k = edges.iter().position(|&e| first(e)).unwrap_or(0);
    let mut out = edges[k..].to_vec();
    out.extend_from_slice(&edges[..k]);
    out
}

/// Expands a node into the region across its edge.
pub fn expand_node(tree: &mut ReachTree, id: NodeId, world: &Gridworld, sub: &Subdivision) -> Vec<NodeId> {
    let node = tree.nodes[id].clone();
    let Some(adj) = sub.adjacent_region(node.region, node.edge) else { return Vec::new() };
    let cone = world.region(adj).actions;
    let mut out = Vec::new();
    for f in rotated(sub.edges_of(adj), |e| e == node.edge) {
        let cand = coreach_with_cone(cone, &sub.edge(f).segment, &node.segment);
        out.extend(tree.offer(sub, cand, adj, f, id, false));
    }
    out
}

/// Expands a node into regions that meet its segment only at an endpoint.
pub fn expand_vertices(tree: &mut ReachTree, id: NodeId, world: &Gridworld, sub: &Subdivision) -> Vec<NodeId> {
    let node = tree.nodes[id].clone();
    let adj = sub.adjacent_region(node.region, node.edge);
    let mut ends = vec![node.segment.a.clone()];
    if !node.segment.is_degenerate() {
        ends.push(node.segment.b.clone());
    }
    let mut out = Vec::new();
    for v in &ends {
        for x in sub.regions_containing(world, v) {
            if x == node.region || Some(x) == adj {
                continue;
            }
            let cone = world.region(x).actions;
            let target = Segment::point(v.clone());
            for f in rotated(sub.edges_of(x), |e| sub.edge(e).segment.contains(v)) {
                let cand = coreach_with_cone(cone, &sub.edge(f).segment, &target);
                out.extend(tree.offer(sub, cand, x, f, id, true));
            }
        }
    }
    out
}

/// True when `p` is won by `segment`: it lies on it, or (for a point off every
/// edge) reaches it in one move inside a region holding both.
pub(crate) fn covers_point(world: &Gridworld, sub: &Subdivision, segment: &Segment, p: &Point) -> bool {
    if segment.contains(p) {
        return true;
    }
    if !sub.edges_containing(p).is_empty() {
        return false;
    }
    sub.regions_containing(world, p).into_iter().any(|r| {
        let region = world.region(r);
        clip_segment_to_convex(segment, &region.vertices)
            .and_then(|s| reach_with_cone(region.actions, p, &s))
            .is_some()
    })
}

pub fn build_tree(world: &Gridworld, sub: &Subdivision, limits: &Limits) -> ReachTree {
    let mut tree = init_tree(world, sub);
    let hit = |tree: &ReachTree, ids: &[NodeId]| {
        limits
            .stop_at
            .as_ref()
            .is_some_and(|p| ids.iter().any(|&i| covers_point(world, sub, &tree.nodes[i].segment, p)))
    };
    let roots: Vec<NodeId> = (0..tree.nodes.len()).collect();
    if hit(&tree, &roots) {
        tree.status = TreeStatus::Found;
        return tree;
    }
    let mut pruned = false;
    while let Some(&front) = tree.frontier.front() {
        let depth = tree.nodes[front].depth;
        if depth >= limits.max_depth {
            tree.status = TreeStatus::Truncated;
            return tree;
        }
        let mut level = Vec::new();
        while tree.frontier.front().is_some_and(|&i| tree.nodes[i].depth == depth) {
            level.push(tree.frontier.pop_front().unwrap());
        }
        let before = level.len();
        level.retain(|&i| !limits.too_wide(&tree.nodes[i].segment));
        pruned |= level.len() < before;
        for pass in 0..2 {
            for &id in &level {
                let born = if pass == 0 { expand_node(&mut tree, id, world, sub) } else { expand_vertices(&mut tree, id, world, sub) };
                if hit(&tree, &born) {
                    tree.status = TreeStatus::Found;
                    return tree;
                }
                if tree.node_count() >= limits.max_nodes {
                    tree.status = TreeStatus::Truncated;
                    return tree;
                }
            }
        }
    }
    tree.status = if pruned { TreeStatus::Truncated } else { TreeStatus::Exhausted };
    tree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Direction;
    use crate::world::{build_subdivision, spiral, two_cell, two_cell_with};

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(Point::int(a.0, a.1), Point::int(b.0, b.1))
    }

    #[test]
    fn root_children_are_target_edges() {
        let w = spiral();
        let sub = build_subdivision(&w).unwrap();
        assert_eq!(init_tree(&w, &sub).nodes.len(), 3);
        let w = two_cell();
        let sub = build_subdivision(&w).unwrap();
        assert_eq!(init_tree(&w, &sub).nodes.len(), 4);
    }

    #[test]
    fn two_cell_expansion() {
        let w = two_cell();
        let sub = build_subdivision(&w).unwrap();
        let mut t = init_tree(&w, &sub);
        let shared = t.nodes.iter().find(|n| !sub.edge(n.edge).is_boundary()).unwrap().id;
        let kids = expand_node(&mut t, shared, &w, &sub);
        let mut segs: Vec<Segment> = kids.iter().map(|&k| t.nodes[k].segment.clone()).collect();
        segs.sort();
        assert_eq!(segs, vec![seg((0, 0), (0, 2)), seg((0, 0), (1, 0)), seg((0, 2), (1, 2))]);
        let boundary = t.nodes.iter().find(|n| sub.edge(n.edge).is_boundary()).unwrap().id;
        assert!(expand_node(&mut t, boundary, &w, &sub).is_empty());
    }

    #[test]
    fn up_only_left_cell_has_no_children() {
        let w = two_cell_with(&[Direction::Up]);
        let sub = build_subdivision(&w).unwrap();
        let mut t = init_tree(&w, &sub);
        let shared = t.nodes.iter().find(|n| !sub.edge(n.edge).is_boundary()).unwrap().id;
        assert!(expand_node(&mut t, shared, &w, &sub).is_empty());
    }

    #[test]
    fn two_cell_tree_size() {
        let w = two_cell();
        let sub = build_subdivision(&w).unwrap();
        let t = build_tree(&w, &sub, &Limits::new(10, 1000));
        assert_eq!(t.status, TreeStatus::Exhausted);
        assert_eq!(t.node_count(), 8);
    }

    #[test]
    fn spiral_tree_reaches_origin() {
        let w = spiral();
        let sub = build_subdivision(&w).unwrap();
        let t = build_tree(&w, &sub, &Limits::new(40, 1_000_000));
        assert!(t.node_count() >= 20);
        let origin = Point::int(0, 0);
        let d = t.nodes.iter().filter(|n| n.segment.contains(&origin)).map(|n| n.depth).min();
        assert_eq!(d, Some(26));
    }

    #[test]
    fn claimed_segments_are_disjoint() {
        let w = spiral();
        let sub = build_subdivision(&w).unwrap();
        let t = build_tree(&w, &sub, &Limits::new(40, 1_000_000));
        for (e, segs) in t.explored.iter().enumerate() {
            let base = &sub.edge(e).segment;
            let mut spans: Vec<_> = segs
                .iter()
                .map(|s| {
                    let (u, v) = (base.param_of(&s.a), base.param_of(&s.b));
                    if u <= v { (u, v) } else { (v, u) }
                })
                .collect();
            spans.sort();
            for pair in spans.windows(2) {
                assert!(pair[0].1 <= pair[1].0, "edge {e}: {:?}", pair);
            }
        }
    }

    #[test]
    fn stop_at_halts_early() {
        let w = spiral();
        let sub = build_subdivision(&w).unwrap();
        let full = build_tree(&w, &sub, &Limits::new(40, 1_000_000));
        let t = build_tree(&w, &sub, &Limits::new(40, 1_000_000).stopping_at(Point::int(0, 0)));
        assert_eq!(t.status, TreeStatus::Found);
        assert!(t.nodes.len() < full.nodes.len());
        assert!(t.nodes.last().unwrap().segment.contains(&Point::int(0, 0)));
    }
}
