//! Compress a shortest branch into a subgoal program.
//!
//! Blocks follow the order in which edges are first reached: reaching a new
//! edge closes the open block with that edge as its goal. Inside a block every
//! edge gets one `From` rule whose alternatives are kept newest first.

use crate::dsl::{Alt, DoUntil, FromInstr, Program};
use crate::geometry::{clip_segment_to_convex, collinear_hull, reach_with_cone, Direction, Point, Segment};
use crate::reachtree::{check_branch_properties, Branch, BranchViolation};
use crate::world::{Gridworld, Subdivision};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoPlacement {
    /// Below every existing alternative.
    Bottom,
    /// Above every existing alternative, like targets.
    Top,
}

#[derive(Clone, Debug)]
pub struct SynthOptions {
    pub go_placement: GoPlacement,
    /// Grow merged targets to the end of their canonical edge on the side
    /// where the merge made progress, and prefer that end.
    pub extend_merged: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions { go_placement: GoPlacement::Bottom, extend_merged: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("branch property violated: {0}")]
    Branch(BranchViolation),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MergeError {
    #[error("segments {0} and {1} are not collinear")]
    NotCollinear(Segment, Segment),
}

/// Collinear hull of the two segments, preferring the hull end contributed by
/// `incoming`. Gaps between the segments are allowed.
///
/// Equal segments (or an `incoming` inside `existing`) keep `existing.a`; when
/// `incoming` sticks out on both sides the hull's first endpoint is used.
pub fn merge_preference(existing: &Segment, incoming: &Segment) -> Result<(Segment, Point), MergeError> {
    let merged = collinear_hull(existing, incoming).ok_or_else(|| MergeError::NotCollinear(existing.clone(), incoming.clone()))?;
    let grown: Vec<&Point> = [&merged.a, &merged.b].into_iter().filter(|p| !existing.contains(p)).collect();
    let pref = match grown.as_slice() {
        [] => existing.a.clone(),
        [p] => (*p).clone(),
        _ => merged.a.clone(),
    };
    Ok((merged, pref))
}

/// Replaces the preferred end of `merged` by the end of `edge` lying beyond it.
fn extend_to_edge(merged: &Segment, pref: &Point, edge: &Segment) -> (Segment, Point) {
    if merged.is_degenerate() {
        return (merged.clone(), pref.clone());
    }
    let other = if *pref == merged.a { &merged.b } else { &merged.a };
    let dir = pref.sub(other);
    let end = [&edge.a, &edge.b].into_iter().max_by_key(|e| e.sub(other).dot(&dir)).unwrap().clone();
    if end.sub(other).dot(&dir) <= pref.sub(other).dot(&dir) {
        return (merged.clone(), pref.clone());
    }
    let seg = if *pref == merged.a { Segment::new(end.clone(), merged.b.clone()) } else { Segment::new(merged.a.clone(), end.clone()) };
    (seg, end)
}

/// Axis direction of a witness move from segment `i` into segment `i + 1`.
fn go_direction(branch: &Branch, world: &Gridworld, i: usize) -> Option<Direction> {
    let region = world.region(branch.regions[i]);
    let target = clip_segment_to_convex(&branch.segments[i + 1], &region.vertices)?;
    let src = &branch.segments[i];
    [src.midpoint(), src.a.clone(), src.b.clone()].iter().find_map(|p| {
        let r = reach_with_cone(region.actions, p, &target)?;
        // nearest reachable point to p along the target
        let d = [r.a.sub(p), r.b.sub(p)]
            .into_iter()
            .filter(|d| !d.is_zero())
            .min_by_key(|d| d.dot(d))?;
        Direction::of_vector(&d)
    })
}

struct OpenBlock {
    body: Vec<FromInstr>,
}

impl OpenBlock {
    fn instr_for(&mut self, source: &Segment) -> usize {
        match self.body.iter().position(|f| f.source == *source) {
            Some(k) => k,
            None => {
                self.body.push(FromInstr { source: source.clone(), alternatives: Vec::new() });
                self.body.len() - 1
            }
        }
    }
}

pub fn synthesize(branch: &Branch, world: &Gridworld, sub: &Subdivision) -> Result<Program, SynthError> {
    synthesize_with(branch, world, sub, &SynthOptions::default())
}

pub fn synthesize_with(branch: &Branch, world: &Gridworld, sub: &Subdivision, options: &SynthOptions) -> Result<Program, SynthError> {
    let structural = check_branch_properties(branch, world, sub).into_iter().find(|v| {
        matches!(
            v,
            BranchViolation::NoMove(_)
                | BranchViolation::SameRegion(_)
                | BranchViolation::NotOnEdge(_)
                | BranchViolation::EdgeNotShared(_)
                | BranchViolation::Shape
        )
    });
    if let Some(v) = structural {
        return Err(SynthError::Branch(v));
    }
    let p = branch.p();
    let mut blocks: Vec<DoUntil> = Vec::new();
    let mut open = OpenBlock { body: Vec::new() };
    let mut visited: Vec<usize> = Vec::new();
    let close = |open: &mut OpenBlock, blocks: &mut Vec<DoUntil>, goal: Segment| {
        if !open.body.is_empty() {
            blocks.push(DoUntil { body: std::mem::take(&mut open.body), goal });
        }
    };
    for i in 0..p.saturating_sub(1) {
        if !visited.iter().any(|&j| branch.same_edge(i, j)) {
            visited.push(i);
            close(&mut open, &mut blocks, branch.edge_segment(i, sub));
        }
        let source = branch.edge_segment(i, sub);
        let k = open.instr_for(&source);
        let alts = &mut open.body[k].alternatives;
        let cone = world.region(branch.regions[i]).actions;
        let moves_on = !branch.same_edge(i, i + 1);
        let next = &branch.segments[i + 1];
        let next_edge = branch.edge_segment(i + 1, sub);

        if moves_on && !cone.is_empty() && cone.is_axis_only() {
            if let Some(d) = go_direction(branch, world, i) {
                if !alts.contains(&Alt::Go(d)) {
                    match options.go_placement {
                        GoPlacement::Bottom => alts.push(Alt::Go(d)),
                        GoPlacement::Top => alts.insert(0, Alt::Go(d)),
                    }
                }
                continue;
            }
        }
        let mergeable = match alts.first() {
            Some(Alt::Target { segment, .. }) => moves_on && next_edge.covers(segment),
            _ => false,
        };
        if mergeable {
            let Some(Alt::Target { segment, preference }) = alts.first().cloned() else { unreachable!() };
            if let Ok((merged, pref)) = merge_preference(&segment, next) {
                let pref = if merged == segment { preference } else { pref };
                let (merged, pref) = if options.extend_merged && merged != segment {
                    extend_to_edge(&merged, &pref, &next_edge)
                } else {
                    (merged, pref)
                };
                alts[0] = Alt::Target { segment: merged, preference: pref };
                continue;
            }
        }
        alts.insert(0, Alt::Target { segment: next.clone(), preference: next.a.clone() });
    }
    if p >= 2 {
        close(&mut open, &mut blocks, branch.edge_segment(p - 1, sub));
    }
    Ok(Program { blocks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeBound {
    pub instructions: usize,
    /// Distinct edges on the branch.
    pub q: usize,
    /// `sum_{m=1..q} 12 m`
    pub bound: usize,
    pub ok: bool,
}

pub fn size_bound_check(program: &Program, branch: &Branch) -> SizeBound {
    let mut distinct: Vec<usize> = Vec::new();
    for i in 0..branch.p() {
        if !distinct.iter().any(|&j| branch.same_edge(i, j)) {
            distinct.push(i);
        }
    }
    let q = distinct.len();
    let bound = 6 * q * (q + 1);
    let instructions = program.size().instructions;
    SizeBound { instructions, q, bound, ok: instructions <= bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::print;
    use crate::reachtree::{build_tree, find_branch, Limits};
    use crate::world::{build_subdivision, double_pass_triangle, spiral, two_cell, DOUBLE_PASS_TRIANGLE_ID};

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(Point::int(a.0, a.1), Point::int(b.0, b.1))
    }

    fn pipeline(w: &Gridworld) -> (Program, Branch, Subdivision) {
        let sub = build_subdivision(w).unwrap();
        let t = build_tree(w, &sub, &Limits::for_world(w));
        let b = find_branch(&t, w, &sub, &w.initial).unwrap();
        (synthesize(&b, w, &sub).unwrap(), b, sub)
    }

    #[test]
    fn merge_rules() {
        let (m, p) = merge_preference(&seg((4, 0), (6, 0)), &seg((6, 0), (9, 0))).unwrap();
        assert_eq!((m, p), (seg((4, 0), (9, 0)), Point::int(9, 0)));
        let (m, p) = merge_preference(&seg((4, 0), (6, 0)), &seg((1, 0), (4, 0))).unwrap();
        assert_eq!((m, p), (seg((1, 0), (6, 0)), Point::int(1, 0)));
        let (m, p) = merge_preference(&seg((4, 0), (6, 0)), &seg((4, 0), (6, 0))).unwrap();
        assert_eq!((m, p), (seg((4, 0), (6, 0)), Point::int(4, 0)));
        let (m, _) = merge_preference(&seg((4, 0), (6, 0)), &seg((8, 0), (9, 0))).unwrap();
        assert_eq!(m, seg((4, 0), (9, 0)));
        assert!(merge_preference(&seg((4, 0), (6, 0)), &seg((4, 1), (6, 1))).is_err());
    }

    #[test]
    fn extension_reaches_edge_end() {
        let edge = seg((14, 12), (26, 0));
        let (s, p) = extend_to_edge(&seg((15, 11), (24, 2)), &Point::int(15, 11), &edge);
        assert_eq!((s, p), (seg((14, 12), (24, 2)), Point::int(14, 12)));
    }

    #[test]
    fn two_cell_program() {
        let (prog, b, _) = pipeline(&two_cell());
        assert_eq!(
            print(&prog),
            "Do:\n    From [(0,0),(0,2)] ->\n        Target [(1,0),(1,2)], Preference: (1,0)\nUntil([(1,0),(1,2)])\n"
        );
        let s = size_bound_check(&prog, &b);
        assert_eq!((s.instructions, s.q, s.bound, s.ok), (1, 2, 36, true));
    }

    #[test]
    fn spiral_final_block() {
        let (prog, b, _) = pipeline(&spiral());
        let last = prog.blocks.last().unwrap();
        assert_eq!(last.goal, seg((13, 13), (14, 12)));
        let from = last.body.iter().find(|f| f.source == seg((0, 0), (13, 13))).unwrap();
        let target_edge = seg((13, 13), (14, 12));
        let side_edge = seg((14, 12), (26, 0));
        let pos = |edge: &Segment| {
            from.alternatives.iter().position(|a| matches!(a, Alt::Target { segment, .. } if edge.covers(segment)))
        };
        let (t, s) = (pos(&target_edge).unwrap(), pos(&side_edge).unwrap());
        assert!(t < s);
        match &from.alternatives[s] {
            Alt::Target { preference, .. } => assert_eq!(*preference, Point::int(14, 12)),
            Alt::Go(_) => unreachable!(),
        }
        assert!(size_bound_check(&prog, &b).ok);
    }

    #[test]
    fn double_pass_has_two_alternatives() {
        let w = double_pass_triangle();
        let (prog, _, sub) = pipeline(&w);
        let entry = sub
            .edges
            .iter()
            .find(|e| e.regions.contains(&DOUBLE_PASS_TRIANGLE_ID) && e.regions.contains(&3))
            .unwrap()
            .segment
            .clone();
        let alts: Vec<&Alt> = prog.blocks.iter().flat_map(|b| &b.body).filter(|f| f.source == entry).flat_map(|f| &f.alternatives).collect();
        let mut distinct = alts.clone();
        distinct.dedup();
        assert!(distinct.len() >= 2, "{}", print(&prog));
        assert!(alts.contains(&&Alt::Go(Direction::Right)));
        assert!(alts.contains(&&Alt::Go(Direction::Left)));
    }

    #[test]
    fn target_start_gives_empty_program() {
        let mut w = two_cell();
        w.initial = Point::int(2, 1);
        let (prog, _, _) = pipeline(&w);
        assert!(prog.is_empty());
    }

    #[test]
    fn deterministic() {
        let (a, _, _) = pipeline(&spiral());
        let (b, _, _) = pipeline(&spiral());
        assert_eq!(a, b);
    }
}
