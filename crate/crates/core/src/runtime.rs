//! Program execution, optimality verification, and a forward reachability
//! oracle that is independent of the backward tree.

use std::fmt::Write as _;

use crate::dsl::{Alt, Program};
use crate::geometry::{clip_segment_to_convex, cone_contains, image_with_cone, reach_with_cone, subtract_segments, Direction, Point, Segment};
use crate::rat::Rat;
use crate::reachtree::Branch;
use crate::world::{Gridworld, RegionId, Subdivision};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Reached,
    Stuck { at: Point, block: usize },
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub points: Vec<Point>,
    /// Licensing region of each move.
    pub regions: Vec<RegionId>,
    pub status: RunStatus,
}

impl Run {
    pub fn moves(&self) -> usize {
        self.points.len() - 1
    }

    pub fn reached(&self) -> bool {
        self.status == RunStatus::Reached
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Move { to: Point, region: RegionId, block: usize },
    /// Every block goal has been passed.
    Done,
    Stuck { block: usize },
}

fn dist2(p: &Point, q: &Point) -> Rat {
    let d = p.sub(q);
    d.dot(&d)
}

/// Closest reachable point of `segment` to `preference`, over every region
/// holding `point`. Staying put does not count as a move.
fn target_move(world: &Gridworld, point: &Point, segment: &Segment, preference: &Point) -> Option<(Point, RegionId)> {
    let mut best: Option<(Rat, Point, RegionId)> = None;
    for r in world.regions_containing(point) {
        let region = world.region(r);
        let Some(reach) = clip_segment_to_convex(segment, &region.vertices).and_then(|s| reach_with_cone(region.actions, point, &s)) else {
            continue;
        };
        let end = if dist2(&reach.a, preference) <= dist2(&reach.b, preference) { reach.a } else { reach.b };
        if end == *point {
            continue;
        }
        let d = dist2(&end, preference);
        if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
            best = Some((d, end, r));
        }
    }
    best.map(|(_, p, r)| (p, r))
}

/// Farthest translation along `dir` inside a region holding `point` whose
/// cone has `dir`; the longest one wins, ties to the lowest region id.
fn go_move(world: &Gridworld, point: &Point, dir: Direction) -> Option<(Point, RegionId)> {
    let far = point.add(&dir.vector().scale(&(&world.side * &Rat::from_int(2))));
    let ray = Segment::new(point.clone(), far);
    let mut best: Option<(Rat, Point, RegionId)> = None;
    for r in world.regions_containing(point) {
        let region = world.region(r);
        if !region.actions.has(dir) {
            continue;
        }
        let Some(s) = clip_segment_to_convex(&ray, &region.vertices) else { continue };
        let len = dist2(&s.a, &s.b);
        if len.is_positive() && best.as_ref().is_none_or(|(bl, _, _)| len > *bl) {
            let end = if s.a == *point { s.b } else { s.a };
            best = Some((len, end, r));
        }
    }
    best.map(|(_, p, r)| (p, r))
}

/// One move of `block`'s body. Goals are not consulted here: a block only
/// ends once one of its own moves lands on the goal.
pub fn step(world: &Gridworld, program: &Program, point: &Point, block: usize) -> Step {
    if block >= program.blocks.len() {
        return Step::Done;
    }
    let Some(from) = program.blocks[block].body.iter().find(|f| f.source.contains(point)) else {
        return Step::Stuck { block };
    };
    for alt in &from.alternatives {
        let mv = match alt {
            Alt::Target { segment, preference } => target_move(world, point, segment, preference),
            Alt::Go(d) => go_move(world, point, *d),
        };
        if let Some((to, region)) = mv {
            return Step::Move { to, region, block };
        }
    }
    Step::Stuck { block }
}

pub fn run(world: &Gridworld, program: &Program, initial: &Point, max_moves: usize) -> Run {
    let mut points = vec![initial.clone()];
    let mut regions = Vec::new();
    let mut block = 0;
    loop {
        let cur = points.last().unwrap().clone();
        if world.in_target(&cur) {
            return Run { points, regions, status: RunStatus::Reached };
        }
        if regions.len() >= max_moves {
            return Run { points, regions, status: RunStatus::Truncated };
        }
        match step(world, program, &cur, block) {
            Step::Move { to, region, block: b } => {
                block = if program.blocks[b].goal.contains(&to) { b + 1 } else { b };
                points.push(to);
                regions.push(region);
            }
            Step::Done => {
                return Run { points, regions, status: RunStatus::Stuck { at: cur, block: program.blocks.len() } };
            }
            Step::Stuck { block: b } => {
                return Run { points, regions, status: RunStatus::Stuck { at: cur, block: b } };
            }
        }
    }
}

/// Index of the first illegal move, if any.
pub fn first_illegal_move(world: &Gridworld, run: &Run) -> Option<usize> {
    run.points.windows(2).position(|w| {
        let d = w[1].sub(&w[0]);
        !world.regions.iter().any(|r| r.contains(&w[0]) && r.contains(&w[1]) && cone_contains(r.actions, &d))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub run_moves: usize,
    pub branch_moves: usize,
    pub run: Run,
}

pub fn verify_optimal(world: &Gridworld, program: &Program, branch: &Branch) -> Verification {
    verify_optimal_with(world, program, branch, 4 * branch.p() + 4)
}

pub fn verify_optimal_with(world: &Gridworld, program: &Program, branch: &Branch, max_moves: usize) -> Verification {
    let r = run(world, program, &world.initial, max_moves);
    let branch_moves = branch.moves();
    let on_branch = r.points.len() == branch.p() && r.points.iter().zip(&branch.segments).all(|(p, s)| s.contains(p));
    let ok = r.reached() && r.moves() == branch_moves && on_branch && first_illegal_move(world, &r).is_none();
    Verification { ok, run_moves: r.moves(), branch_moves, run: r }
}

/// Regions holding all of `s`, plus, for each endpoint, regions that hold
/// only that endpoint (paired with the endpoint as the source).
fn sources(world: &Gridworld, s: &Segment) -> Vec<(RegionId, Segment)> {
    let mut out = Vec::new();
    for r in &world.regions {
        if clip_segment_to_convex(s, &r.vertices).as_ref() == Some(s) {
            out.push((r.id, s.clone()));
        } else if !s.is_degenerate() {
            for v in [&s.a, &s.b] {
                if r.contains(v) {
                    out.push((r.id, Segment::point(v.clone())));
                }
            }
        }
    }
    out
}

/// Least number of moves from `initial` to the target region, by forward
/// breadth-first search over exact edge intervals.
pub fn forward_min_moves(world: &Gridworld, sub: &Subdivision, initial: &Point, max_depth: usize) -> Option<usize> {
    if world.in_target(initial) {
        return Some(0);
    }
    let target = &world.target_region().vertices;
    let mut seen: Vec<Vec<Segment>> = vec![Vec::new(); sub.edges.len()];
    let mut frontier = vec![Segment::point(initial.clone())];
    for k in 1..=max_depth {
        let mut next = Vec::new();
        for s in &frontier {
            for (r, src) in sources(world, s) {
                let region = world.region(r);
                for f in sub.edges_of(r) {
                    let Some(img) = image_with_cone(region.actions, &src, &sub.edge(f).segment) else { continue };
                    if clip_segment_to_convex(&img, target).is_some() {
                        return Some(k);
                    }
                    let pieces = if img.is_degenerate() {
                        if seen.iter().flatten().any(|x| x.contains(&img.a)) {
                            Vec::new()
                        } else {
                            vec![img]
                        }
                    } else {
                        subtract_segments(&img, &seen[f])
                    };
                    for piece in pieces {
                        seen[f].push(piece.clone());
                        next.push(piece);
                    }
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

/// One `(x,y)` per line.
pub fn dump_trajectory(points: &[Point]) -> String {
    let mut out = String::new();
    for p in points {
        let _ = writeln!(out, "{p}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse, DoUntil, FromInstr};
    use crate::reachtree::{build_tree, find_branch, Limits};
    use crate::synth::synthesize;
    use crate::world::{build_subdivision, double_pass_triangle, spiral, two_cell, two_cell_with, DOUBLE_PASS_TRIANGLE_ID};

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
    fn two_cell_step_and_run() {
        let w = two_cell();
        let (prog, b, _) = pipeline(&w);
        match step(&w, &prog, &Point::int(0, 0), 0) {
            Step::Move { to, .. } => assert_eq!(to, Point::int(1, 0)),
            other => panic!("{other:?}"),
        }
        let r = run(&w, &prog, &w.initial, 10);
        assert!(r.reached());
        assert_eq!(r.moves(), 1);
        let v = verify_optimal(&w, &prog, &b);
        assert!(v.ok);
        assert_eq!((v.run_moves, v.branch_moves), (1, 1));
    }

    #[test]
    fn spiral_run_is_optimal() {
        let w = spiral();
        let (prog, b, _) = pipeline(&w);
        let v = verify_optimal(&w, &prog, &b);
        assert!(v.ok, "{:?}", v.run.status);
        assert_eq!(v.run_moves, 25);
        // first diagonal visits move inward two units per lap
        let on_diag: Vec<Point> = v.run.points.iter().filter(|p| p.x == p.y && p.x < Rat::from_int(13)).cloned().collect();
        assert_eq!(on_diag.first(), Some(&Point::int(0, 0)));
        assert!(on_diag.windows(2).all(|w| w[0].x < w[1].x));
    }

    #[test]
    fn spiral_listing_runs() {
        let w = spiral();
        let listing = crate::dsl::parse(
            "Do:
    From [(0, 0), (13, 13)] ->
        Target [(13, 13), (14, 12)], Preference: (13,13)
        Else Target [(14, 12), (26, 0)], Preference: (14,12)
    From [(14, 12), (26, 0)] ->
        Target [(14, 14), (28, 28)], Preference: (14, 14)
    From [(14, 14), (28, 28)] ->
        Target [(14, 14), (0, 28)], Preference: (0,28)
    From [(14, 14), (0, 28)] ->
        Target [(0, 0), (13, 13)], Preference: (0,0)
Until([(13, 13), (14, 12)])",
        )
        .unwrap();
        match step(&w, &listing, &Point::int(0, 0), 0) {
            Step::Move { to, .. } => assert_eq!(to, Point::int(26, 0)),
            other => panic!("{other:?}"),
        }
        let r = run(&w, &listing, &w.initial, 200);
        assert!(r.reached());
        assert_eq!(first_illegal_move(&w, &r), None);
    }

    #[test]
    fn flipped_preference_fails() {
        let w = spiral();
        let (mut prog, b, _) = pipeline(&w);
        let last = prog.blocks.last_mut().unwrap();
        for f in &mut last.body {
            for a in &mut f.alternatives {
                if let Alt::Target { segment, preference } = a {
                    *preference = if *preference == segment.a { segment.b.clone() } else { segment.a.clone() };
                }
            }
        }
        let v = verify_optimal(&w, &prog, &b);
        assert!(!v.ok);
        assert!(!v.run.reached());
    }

    #[test]
    fn double_pass_crosses_twice() {
        let w = double_pass_triangle();
        let (prog, b, _) = pipeline(&w);
        let v = verify_optimal(&w, &prog, &b);
        assert!(v.ok, "{:?}", v.run);
        let tri = &w.region(DOUBLE_PASS_TRIANGLE_ID).vertices;
        let signs: Vec<i32> = v
            .run
            .points
            .windows(2)
            .filter(|m| crate::geometry::convex_contains_strict(tri, &m[0].add(&m[1]).scale(&Rat::new(1, 2))))
            .map(|m| (&m[1].x - &m[0].x).signum())
            .collect();
        assert_eq!(signs, vec![1, -1]);
    }

    #[test]
    fn empty_program_is_stuck() {
        let w = two_cell();
        let r = run(&w, &Program::default(), &w.initial, 10);
        assert_eq!(r.status, RunStatus::Stuck { at: Point::int(0, 0), block: 0 });
        let mut inside = w.clone();
        inside.initial = Point::int(2, 2);
        assert!(run(&inside, &Program::default(), &inside.initial, 10).reached());
    }

    #[test]
    fn body_runs_before_goal_check() {
        let w = two_cell();
        let prog = Program {
            blocks: vec![DoUntil {
                body: vec![FromInstr { source: seg((0, 0), (0, 2)), alternatives: vec![Alt::Go(Direction::Right)] }],
                goal: seg((0, 0), (0, 2)),
            }],
        };
        assert_eq!(step(&w, &prog, &Point::int(0, 1), 1), Step::Done);
        let r = run(&w, &prog, &Point::int(0, 1), 5);
        assert!(r.reached());
        assert_eq!(r.moves(), 1);
    }

    #[test]
    fn forward_oracle_cases() {
        let w = two_cell();
        let sub = build_subdivision(&w).unwrap();
        assert_eq!(forward_min_moves(&w, &sub, &w.initial, 10), Some(1));
        assert_eq!(forward_min_moves(&w, &sub, &Point::int(2, 2), 10), Some(0));
        let dead = two_cell_with(&[]);
        let sub = build_subdivision(&dead).unwrap();
        assert_eq!(forward_min_moves(&dead, &sub, &dead.initial, 10), None);
        let s = spiral();
        let sub = build_subdivision(&s).unwrap();
        assert_eq!(forward_min_moves(&s, &sub, &s.initial, 60), Some(25));
        let d = double_pass_triangle();
        let sub = build_subdivision(&d).unwrap();
        assert_eq!(forward_min_moves(&d, &sub, &d.initial, 60), Some(4));
    }

    #[test]
    fn trajectory_dump() {
        assert_eq!(dump_trajectory(&[Point::int(0, 0), Point::new(Rat::new(1, 2), Rat::one())]), "(0,0)\n(1/2,1)\n");
    }

    #[test]
    fn foreign_policy_gets_stuck() {
        let w = spiral();
        let other = parse("Do:\n    From [(0,0),(0,2)] ->\n        Target [(1,0),(1,2)], Preference: (1,0)\nUntil([(1,0),(1,2)])").unwrap();
        let r = run(&w, &other, &w.initial, 10);
        assert!(matches!(r.status, RunStatus::Stuck { .. }));
    }
}
