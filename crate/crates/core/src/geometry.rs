//! Exact planar predicates over [`Rat`] coordinates.
//!
//! Everything here is closed-set geometry: segments include their endpoints
//! and polygons include their boundary. No floating point is involved.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Point {
        Point::new(Rat::from_int(x), Rat::from_int(y))
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, k: &Rat) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, other: &Point) -> Rat {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Point) -> Rat {
        &self.x * &other.y - &self.y * &other.x
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Signed area test: positive when `c` lies left of the ray `a -> b`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Rat {
    b.sub(a).cross(&c.sub(a))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Segment {
        Segment { a, b }
    }

    pub fn point(p: Point) -> Segment {
        Segment { a: p.clone(), b: p }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn delta(&self) -> Point {
        self.b.sub(&self.a)
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b.clone(), self.a.clone())
    }

    /// Point at parameter `t` along `a -> b`.
    pub fn at(&self, t: &Rat) -> Point {
        self.a.add(&self.delta().scale(t))
    }

    pub fn sub_segment(&self, t0: &Rat, t1: &Rat) -> Segment {
        Segment::new(self.at(t0), self.at(t1))
    }

    /// Parameter of a point known to lie on the supporting line.
    pub fn param_of(&self, p: &Point) -> Rat {
        let d = self.delta();
        if !d.x.is_zero() {
            (&p.x - &self.a.x) / &d.x
        } else if !d.y.is_zero() {
            (&p.y - &self.a.y) / &d.y
        } else {
            Rat::zero()
        }
    }

    pub fn on_line(&self, p: &Point) -> bool {
        if self.is_degenerate() {
            return *p == self.a;
        }
        orient(&self.a, &self.b, p).is_zero()
    }

    pub fn contains(&self, p: &Point) -> bool {
        point_on_segment(p, self)
    }

    /// `other` is a subset of `self`.
    pub fn covers(&self, other: &Segment) -> bool {
        self.contains(&other.a) && self.contains(&other.b)
    }

    /// True when the two segments share at least one point.
    pub fn intersects(&self, other: &Segment) -> bool {
        let (p1, p2, q1, q2) = (&self.a, &self.b, &other.a, &other.b);
        let d1 = orient(q1, q2, p1).signum();
        let d2 = orient(q1, q2, p2).signum();
        let d3 = orient(p1, p2, q1).signum();
        let d4 = orient(p1, p2, q2).signum();
        if d1 * d2 < 0 && d3 * d4 < 0 {
            return true;
        }
        other.contains(p1) || other.contains(p2) || self.contains(q1) || self.contains(q2)
    }

    pub fn midpoint(&self) -> Point {
        self.at(&Rat::new(1, 2))
    }

    /// Same point set, endpoints sorted lexicographically.
    pub fn canonical(&self) -> Segment {
        if self.a <= self.b {
            self.clone()
        } else {
            self.reversed()
        }
    }

    pub fn same_set(&self, other: &Segment) -> bool {
        self.canonical() == other.canonical()
    }
}

/// `p` lies on the closed segment `s`.
pub fn point_on_segment(p: &Point, s: &Segment) -> bool {
    if s.is_degenerate() {
        return *p == s.a;
    }
    if !orient(&s.a, &s.b, p).is_zero() {
        return false;
    }
    let (lo_x, hi_x) = (s.a.x.lesser(&s.b.x), s.a.x.greater(&s.b.x));
    let (lo_y, hi_y) = (s.a.y.lesser(&s.b.y), s.a.y.greater(&s.b.y));
    &p.x >= lo_x && &p.x <= hi_x && &p.y >= lo_y && &p.y <= hi_y
}

/// Convex hull of the union of two collinear segments that overlap or abut.
///
/// The result is oriented like `s1` (like `s2` when `s1` is a point).
pub fn segments_collinear_overlap(s1: &Segment, s2: &Segment) -> Option<Segment> {
    let hull = collinear_hull(s1, s2)?;
    let touching = s1.contains(&s2.a) || s1.contains(&s2.b) || s2.contains(&s1.a) || s2.contains(&s1.b);
    touching.then_some(hull)
}

/// Hull of two collinear segments on their common line, gaps allowed.
pub fn collinear_hull(s1: &Segment, s2: &Segment) -> Option<Segment> {
    let (base, other) = if s1.is_degenerate() { (s2, s1) } else { (s1, s2) };
    if base.is_degenerate() {
        return (base.a == other.a).then(|| base.clone());
    }
    if !(base.on_line(&other.a) && base.on_line(&other.b)) {
        return None;
    }
    let ts = [Rat::zero(), Rat::one(), base.param_of(&other.a), base.param_of(&other.b)];
    let lo = ts.iter().min().unwrap();
    let hi = ts.iter().max().unwrap();
    Some(base.sub_segment(lo, hi))
}

/// Parts of `s` not covered by any collinear member of `explored`.
///
/// Returns closures of the uncovered components, ordered from `s.a` toward
/// `s.b`. A point segment survives iff no explored segment contains it.
/// Explored members that merely cross `s` are ignored.
pub fn subtract_segments(s: &Segment, explored: &[Segment]) -> Vec<Segment> {
    if s.is_degenerate() {
        if explored.iter().any(|e| e.contains(&s.a)) {
            return Vec::new();
        }
        return vec![s.clone()];
    }
    let mut covered: Vec<(Rat, Rat)> = explored
        .iter()
        .filter(|e| !e.is_degenerate() && s.on_line(&e.a) && s.on_line(&e.b))
        .filter_map(|e| {
            let (t0, t1) = (s.param_of(&e.a), s.param_of(&e.b));
            let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
            let lo = lo.greater(&Rat::zero()).clone();
            let hi = hi.lesser(&Rat::one()).clone();
            (lo < hi).then_some((lo, hi))
        })
        .collect();
    covered.sort();
    let mut out = Vec::new();
    let mut cursor = Rat::zero();
    for (lo, hi) in covered {
        if lo > cursor {
            out.push(s.sub_segment(&cursor, &lo));
        }
        if hi > cursor {
            cursor = hi;
        }
    }
    if cursor < Rat::one() {
        out.push(s.sub_segment(&cursor, &Rat::one()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Left, Direction::Right, Direction::Up, Direction::Down];

    pub fn vector(self) -> Point {
        match self {
            Direction::Left => Point::int(-1, 0),
            Direction::Right => Point::int(1, 0),
            Direction::Up => Point::int(0, 1),
            Direction::Down => Point::int(0, -1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Left => "LEFT",
            Direction::Right => "RIGHT",
            Direction::Up => "UP",
            Direction::Down => "DOWN",
        }
    }

    pub fn from_name(s: &str) -> Option<Direction> {
        match s {
            "LEFT" => Some(Direction::Left),
            "RIGHT" => Some(Direction::Right),
            "UP" => Some(Direction::Up),
            "DOWN" => Some(Direction::Down),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Direction::Left => 1,
            Direction::Right => 2,
            Direction::Up => 4,
            Direction::Down => 8,
        }
    }

    /// The axis direction of a nonzero axis-aligned vector.
    pub fn of_vector(v: &Point) -> Option<Direction> {
        match (v.x.signum(), v.y.signum()) {
            (-1, 0) => Some(Direction::Left),
            (1, 0) => Some(Direction::Right),
            (0, 1) => Some(Direction::Up),
            (0, -1) => Some(Direction::Down),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Convex cone generated by a subset of the cardinal directions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ActionCone(u8);

impl ActionCone {
    pub fn empty() -> ActionCone {
        ActionCone(0)
    }

    pub fn from_bits(bits: u8) -> ActionCone {
        ActionCone(bits & 0xf)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn of(dirs: &[Direction]) -> ActionCone {
        ActionCone(dirs.iter().fold(0, |acc, d| acc | d.bit()))
    }

    pub fn has(self, d: Direction) -> bool {
        self.0 & d.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn directions(self) -> Vec<Direction> {
        Direction::ALL.iter().copied().filter(|d| self.has(*d)).collect()
    }

    /// Generators are all horizontal or all vertical.
    pub fn is_axis_only(self) -> bool {
        let horizontal = ActionCone::of(&[Direction::Left, Direction::Right]).0;
        let vertical = ActionCone::of(&[Direction::Up, Direction::Down]).0;
        self.0 & !horizontal == 0 || self.0 & !vertical == 0
    }

    /// Half-plane constraints `n . v <= 0` describing the cone, one per
    /// missing generator.
    fn constraint_normals(self) -> Vec<Point> {
        let mut out = Vec::new();
        if !self.has(Direction::Right) {
            out.push(Point::int(1, 0));
        }
        if !self.has(Direction::Left) {
            out.push(Point::int(-1, 0));
        }
        if !self.has(Direction::Up) {
            out.push(Point::int(0, 1));
        }
        if !self.has(Direction::Down) {
            out.push(Point::int(0, -1));
        }
        out
    }
}

impl fmt::Debug for ActionCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.directions().iter().map(|d| d.name()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// `v` is a nonnegative combination of the cone's generators. The zero
/// vector belongs to every cone, the empty one included.
pub fn cone_contains(cone: ActionCone, v: &Point) -> bool {
    cone.constraint_normals().iter().all(|n| !n.dot(v).is_positive())
}

/// `coef_s * s + coef_t * t <= rhs` over the two segment parameters.
#[derive(Clone, Debug)]
struct Constraint {
    coef_s: Rat,
    coef_t: Rat,
    rhs: Rat,
}

/// Constraints on `(s, t) in [0,1]^2` such that
/// `target.at(t) - source.at(s)` lies in `cone`.
fn move_constraints(cone: ActionCone, source: &Segment, target: &Segment) -> Vec<Constraint> {
    let ds = source.delta();
    let dt = target.delta();
    let base = target.a.sub(&source.a);
    let mut out: Vec<Constraint> = cone
        .constraint_normals()
        .into_iter()
        .map(|n| Constraint {
            coef_s: -n.dot(&ds),
            coef_t: n.dot(&dt),
            rhs: -n.dot(&base),
        })
        .collect();
    let one = Rat::one();
    let zero = Rat::zero();
    for (cs, ct, rhs) in [
        (one.clone(), zero.clone(), one.clone()),
        (-&one, zero.clone(), zero.clone()),
        (zero.clone(), one.clone(), one.clone()),
        (zero.clone(), -&one, zero.clone()),
    ] {
        out.push(Constraint { coef_s: cs, coef_t: ct, rhs });
    }
    out
}

/// Interval of one variable satisfying `coef * x <= rhs` for all pairs.
fn solve_1d(rows: impl IntoIterator<Item = (Rat, Rat)>) -> Option<(Rat, Rat)> {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (coef, rhs) in rows {
        match coef.signum() {
            0 => {
                if rhs.is_negative() {
                    return None;
                }
            }
            1 => {
                let b = &rhs / &coef;
                if hi.as_ref().is_none_or(|h| &b < h) {
                    hi = Some(b);
                }
            }
            _ => {
                let b = &rhs / &coef;
                if lo.as_ref().is_none_or(|l| &b > l) {
                    lo = Some(b);
                }
            }
        }
    }
    let lo = lo?;
    let hi = hi?;
    (lo <= hi).then_some((lo, hi))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Keep {
    Source,
    Target,
}

/// Fourier-Motzkin elimination of the other parameter, leaving the feasible
/// interval of `keep`.
fn project(constraints: &[Constraint], keep: Keep) -> Option<(Rat, Rat)> {
    let split = |c: &Constraint| -> (Rat, Rat, Rat) {
        match keep {
            Keep::Source => (c.coef_s.clone(), c.coef_t.clone(), c.rhs.clone()),
            Keep::Target => (c.coef_t.clone(), c.coef_s.clone(), c.rhs.clone()),
        }
    };
    let mut rows = Vec::new();
    let mut uppers = Vec::new();
    let mut lowers = Vec::new();
    for c in constraints {
        let (k, e, r) = split(c);
        match e.signum() {
            0 => rows.push((k, r)),
            1 => uppers.push((k, e, r)),
            _ => lowers.push((k, e, r)),
        }
    }
    for (kl, el, rl) in &lowers {
        for (ku, eu, ru) in &uppers {
            // eu * lower - el * upper cancels the eliminated variable.
            let coef = eu * kl - el * ku;
            let rhs = eu * rl - el * ru;
            rows.push((coef, rhs));
        }
    }
    solve_1d(rows)
}

/// The part of `target` reachable from `from` in one move with `cone`.
///
/// Assumes the straight move stays inside the licensing region, which holds
/// when `from` and `target` both lie in the same convex region.
pub fn reach_with_cone(cone: ActionCone, from: &Point, target: &Segment) -> Option<Segment> {
    image_with_cone(cone, &Segment::point(from.clone()), target)
}

/// Points of `target` reachable in one move from some point of `source`.
pub fn image_with_cone(cone: ActionCone, source: &Segment, target: &Segment) -> Option<Segment> {
    let cs = move_constraints(cone, source, target);
    let (lo, hi) = project(&cs, Keep::Target)?;
    Some(target.sub_segment(&lo, &hi))
}

/// Points of `source` from which some point of `target` is reachable.
pub fn coreach_with_cone(cone: ActionCone, source: &Segment, target: &Segment) -> Option<Segment> {
    let cs = move_constraints(cone, source, target);
    let (lo, hi) = project(&cs, Keep::Source)?;
    Some(source.sub_segment(&lo, &hi))
}

/// Intersection of a segment with a closed convex polygon given
/// counterclockwise.
pub fn clip_segment_to_convex(s: &Segment, polygon: &[Point]) -> Option<Segment> {
    let mut lo = Rat::zero();
    let mut hi = Rat::one();
    let d = s.delta();
    let n = polygon.len();
    for i in 0..n {
        let p = &polygon[i];
        let q = &polygon[(i + 1) % n];
        let e = q.sub(p);
        // inside: cross(e, x - p) >= 0, linear in t.
        let c0 = e.cross(&s.a.sub(p));
        let c1 = e.cross(&d);
        match c1.signum() {
            0 => {
                if c0.is_negative() {
                    return None;
                }
            }
            1 => {
                let t = -&c0 / &c1;
                if t > lo {
                    lo = t;
                }
            }
            _ => {
                let t = -&c0 / &c1;
                if t < hi {
                    hi = t;
                }
            }
        }
        if lo > hi {
            return None;
        }
    }
    Some(s.sub_segment(&lo, &hi))
}

/// Closed convex polygon (counterclockwise) contains `p`.
pub fn convex_contains(polygon: &[Point], p: &Point) -> bool {
    let n = polygon.len();
    (0..n).all(|i| !orient(&polygon[i], &polygon[(i + 1) % n], p).is_negative())
}

/// `p` lies strictly inside the convex polygon.
pub fn convex_contains_strict(polygon: &[Point], p: &Point) -> bool {
    let n = polygon.len();
    let mut any_edge = false;
    for i in 0..n {
        let (a, b) = (&polygon[i], &polygon[(i + 1) % n]);
        if a == b {
            continue;
        }
        let o = orient(a, b, p);
        if o.is_zero() {
            // collinear vertices leave zero-length turns that do not bound
            return false;
        }
        if o.is_negative() {
            return false;
        }
        any_edge = true;
    }
    any_edge
}

/// Twice the signed area (shoelace).
pub fn twice_area(polygon: &[Point]) -> Rat {
    let n = polygon.len();
    (0..n).fold(Rat::zero(), |acc, i| acc + polygon[i].cross(&polygon[(i + 1) % n]))
}

/// Clip a convex polygon to the half-plane `orient(a, b, x) >= 0`.
pub fn clip_convex_halfplane(polygon: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    let n = polygon.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = &polygon[i];
        let q = &polygon[(i + 1) % n];
        let op = orient(a, b, p);
        let oq = orient(a, b, q);
        if !op.is_negative() {
            push_distinct(&mut out, p.clone());
        }
        if op.signum() * oq.signum() < 0 {
            let t = &op / &(&op - &oq);
            push_distinct(&mut out, p.add(&q.sub(p).scale(&t)));
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn push_distinct(out: &mut Vec<Point>, p: Point) {
    if out.last() != Some(&p) {
        out.push(p);
    }
}

/// Intersection of two convex polygons (both counterclockwise).
pub fn convex_intersection(p: &[Point], q: &[Point]) -> Vec<Point> {
    let mut cur = p.to_vec();
    let n = q.len();
    for i in 0..n {
        if cur.is_empty() {
            break;
        }
        cur = clip_convex_halfplane(&cur, &q[i], &q[(i + 1) % n]);
    }
    cur
}

/// `(D, max_bits)`: lcm of all coordinate denominators, and the largest bit
/// length among all numerators and denominators.
pub fn denominator_profile(points: &[Point]) -> (BigInt, u64) {
    let mut d = BigInt::one();
    let mut bits = 0u64;
    for p in points {
        for c in [&p.x, &p.y] {
            d = d.lcm(c.denom());
            bits = bits.max(c.numer().bits()).max(c.denom().bits());
        }
    }
    (d, bits.max(1))
}

/// Whether `den` divides `D * (D * D!)^p`, compared prime by prime so the
/// factorial is never formed.
pub fn divides_compound_bound(den: &BigInt, d: &BigInt, p: u64) -> bool {
    let mut rest = num_traits::Signed::abs(den);
    let mut q = BigInt::from(2);
    while !rest.is_one() {
        if &q > d {
            return false;
        }
        let mut e = 0u64;
        while (&rest % &q).is_zero() {
            rest /= &q;
            e += 1;
        }
        if e > 0 {
            let (mut vd, mut dd) = (BigInt::zero(), d.clone());
            while (&dd % &q).is_zero() {
                dd /= &q;
                vd += 1;
            }
            let (mut vf, mut pow) = (BigInt::zero(), q.clone());
            while &pow <= d {
                vf += d / &pow;
                pow *= &q;
            }
            if BigInt::from(e) > &vd + BigInt::from(p) * (&vd + vf) {
                return false;
            }
        }
        q += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq)]
pub struct BitsizeCheck {
    /// Denominator scale of the unit-square world, `side * D`.
    pub scale: BigInt,
    /// lcm of the unit-square coordinate denominators of the points.
    pub denominator: BigInt,
    pub max_bits: u64,
    /// `c * p * scale * log2(scale + 2)` with `c = 4`.
    pub bits_bound: f64,
    pub divides: bool,
}

impl BitsizeCheck {
    pub fn ok(&self) -> bool {
        self.divides && self.max_bits as f64 <= self.bits_bound
    }
}

/// Bitsize of branch points after rescaling the world to the unit square,
/// where every vertex has the form `(a / scale, b / scale)`.
pub fn bitsize_check(points: &[Point], side: &Rat, world_denominator: &BigInt, p: usize) -> BitsizeCheck {
    let scale = world_denominator * side.numer();
    let unit: Vec<Point> = points.iter().map(|q| Point::new(&q.x / side, &q.y / side)).collect();
    let (denominator, max_bits) = denominator_profile(&unit);
    let s = num_traits::ToPrimitive::to_f64(&scale).unwrap_or(f64::INFINITY);
    let bits_bound = 4.0 * p as f64 * s * (s + 2.0).log2();
    let divides = divides_compound_bound(&denominator, &scale, p as u64);
    BitsizeCheck { scale, denominator, max_bits, bits_bound, divides }
}
