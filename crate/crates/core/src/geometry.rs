//! Exact lattice geometry.
//!
//! Everything here works on integer coordinates. Areas are carried as
//! [`HalfArea`], an integer count of half square units, which is the natural
//! granularity of lattice polygons.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("segment endpoints coincide")]
    ZeroLength,
    #[error("a cycle needs at least three vertices")]
    TooFewVertices,
    #[error("consecutive cycle vertices coincide")]
    RepeatedVertex,
    #[error("cycle encloses zero area")]
    Degenerate,
    #[error("cycle is not simple")]
    NotSimple,
}

/// A dot of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i32,
    pub y: i32,
}

impl LatticePoint {
    pub const fn new(x: i32, y: i32) -> Self {
        LatticePoint { x, y }
    }

    /// The point with both coordinates doubled. Midpoints of lattice
    /// segments are lattice points in the doubled lattice.
    pub fn doubled(self) -> Self {
        LatticePoint::new(2 * self.x, 2 * self.y)
    }

    pub fn translate(self, dx: i32, dy: i32) -> Self {
        LatticePoint::new(self.x + dx, self.y + dy)
    }
}

impl From<(i32, i32)> for LatticePoint {
    fn from((x, y): (i32, i32)) -> Self {
        LatticePoint::new(x, y)
    }
}

impl From<[i32; 2]> for LatticePoint {
    fn from([x, y]: [i32; 2]) -> Self {
        LatticePoint::new(x, y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `a b c`; positive when the turn
/// `a -> b -> c` is counterclockwise.
#[inline]
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    let (ax, ay) = (a.x as i64, a.y as i64);
    let (bx, by) = (b.x as i64, b.y as i64);
    let (cx, cy) = (c.x as i64, c.y as i64);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A straight segment between two distinct dots, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    a: LatticePoint,
    b: LatticePoint,
}

impl Segment {
    pub fn new(p: impl Into<LatticePoint>, q: impl Into<LatticePoint>) -> Result<Self, GeometryError> {
        let (p, q) = (p.into(), q.into());
        match p.cmp(&q) {
            Ordering::Less => Ok(Segment { a: p, b: q }),
            Ordering::Greater => Ok(Segment { a: q, b: p }),
            Ordering::Equal => Err(GeometryError::ZeroLength),
        }
    }

    /// Panicking constructor for literals in tests and fixtures.
    pub fn of(p: (i32, i32), q: (i32, i32)) -> Self {
        Segment::new(p, q).expect("distinct endpoints")
    }

    pub fn a(&self) -> LatticePoint {
        self.a
    }

    pub fn b(&self) -> LatticePoint {
        self.b
    }

    pub fn endpoints(&self) -> [LatticePoint; 2] {
        [self.a, self.b]
    }

    pub fn has_endpoint(&self, p: LatticePoint) -> bool {
        self.a == p || self.b == p
    }

    /// The endpoint that is not `p`.
    pub fn other(&self, p: LatticePoint) -> LatticePoint {
        if self.a == p {
            self.b
        } else {
            self.a
        }
    }

    /// Midpoint in doubled coordinates.
    pub fn doubled_midpoint(&self) -> LatticePoint {
        LatticePoint::new(self.a.x + self.b.x, self.a.y + self.b.y)
    }

    /// True if `p` lies on the closed segment.
    pub fn contains(&self, p: LatticePoint) -> bool {
        orient(self.a, self.b, p) == 0
            && p.x >= self.a.x.min(self.b.x)
            && p.x <= self.a.x.max(self.b.x)
            && p.y >= self.a.y.min(self.b.y)
            && p.y <= self.a.y.max(self.b.y)
    }

    /// True if `p` lies on the segment but is not one of its endpoints.
    pub fn contains_strictly(&self, p: LatticePoint) -> bool {
        !self.has_endpoint(p) && self.contains(p)
    }

    /// The lattice points of the segment in order from `a` to `b`, both
    /// endpoints included.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        points_between(self.a, self.b, true)
    }

    /// Splits the segment at its interior lattice points.
    pub fn primitive_pieces(&self) -> Vec<Segment> {
        self.lattice_points()
            .windows(2)
            .map(|w| Segment::new(w[0], w[1]).unwrap())
            .collect()
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

fn points_between(p: LatticePoint, q: LatticePoint, include_end: bool) -> Vec<LatticePoint> {
    let (dx, dy) = ((q.x - p.x) as i64, (q.y - p.y) as i64);
    let g = gcd(dx, dy).max(1);
    let (sx, sy) = ((dx / g) as i32, (dy / g) as i32);
    let steps = if include_end { g } else { g - 1 };
    (0..=steps as i32).map(|k| p.translate(k * sx, k * sy)).collect()
}

/// Number of lattice points strictly between the endpoints of `s`.
pub fn interior_lattice_count(s: &Segment) -> u64 {
    let (a, b) = (s.a(), s.b());
    (gcd((b.x - a.x) as i64, (b.y - a.y) as i64) - 1) as u64
}

/// A segment is a legal move geometry iff it passes through no other dot.
pub fn is_primitive(s: &Segment) -> bool {
    interior_lattice_count(s) == 0
}

/// True iff the two segments share a point other than a common endpoint:
/// a proper crossing, an endpoint touching the other's interior, or a
/// collinear overlap. Identical segments conflict.
pub fn segments_conflict(s1: &Segment, s2: &Segment) -> bool {
    if s1 == s2 {
        return true;
    }
    let (a1, b1, a2, b2) = (s1.a, s1.b, s2.a, s2.b);
    let o1 = orient(a1, b1, a2);
    let o2 = orient(a1, b1, b2);
    if o1 == 0 && o2 == 0 {
        // Collinear: project on the dominant axis and test for an overlap of
        // positive length.
        let key = |p: LatticePoint| {
            if a1.x != b1.x {
                p.x
            } else {
                p.y
            }
        };
        let (lo1, hi1) = (key(a1).min(key(b1)), key(a1).max(key(b1)));
        let (lo2, hi2) = (key(a2).min(key(b2)), key(a2).max(key(b2)));
        return lo1.max(lo2) < hi1.min(hi2);
    }
    let o3 = orient(a2, b2, a1);
    let o4 = orient(a2, b2, b1);
    if o1.signum() * o2.signum() < 0 && o3.signum() * o4.signum() < 0 {
        return true;
    }
    s1.contains_strictly(a2) || s1.contains_strictly(b2) || s2.contains_strictly(a1) || s2.contains_strictly(b1)
}

/// True iff the closed segments share any point at all.
pub fn segments_touch(s1: &Segment, s2: &Segment) -> bool {
    if segments_conflict(s1, s2) {
        return true;
    }
    s1.endpoints().iter().any(|p| s2.has_endpoint(*p))
}

/// An area measured in halves of a square unit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfArea(u64);

impl HalfArea {
    pub const ZERO: HalfArea = HalfArea(0);

    pub const fn from_halves(halves: u64) -> Self {
        HalfArea(halves)
    }

    pub const fn from_units(units: u64) -> Self {
        HalfArea(2 * units)
    }

    pub const fn halves(self) -> u64 {
        self.0
    }
}

impl Add for HalfArea {
    type Output = HalfArea;
    fn add(self, rhs: HalfArea) -> HalfArea {
        HalfArea(self.0 + rhs.0)
    }
}

impl AddAssign for HalfArea {
    fn add_assign(&mut self, rhs: HalfArea) {
        self.0 += rhs.0;
    }
}

impl Sub for HalfArea {
    type Output = HalfArea;
    fn sub(self, rhs: HalfArea) -> HalfArea {
        HalfArea(self.0 - rhs.0)
    }
}

impl Sum for HalfArea {
    fn sum<I: Iterator<Item = HalfArea>>(iter: I) -> HalfArea {
        iter.fold(HalfArea::ZERO, Add::add)
    }
}

impl fmt::Display for HalfArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Area of a lattice polygon from its interior and boundary lattice counts.
pub fn pick_area(interior: u64, boundary: u64) -> HalfArea {
    debug_assert!(boundary >= 3);
    HalfArea(2 * interior + boundary - 2)
}

/// Twice the signed area enclosed by a closed walk (positive when
/// counterclockwise). Works for walks that revisit vertices or edges.
pub fn walk_twice_signed_area(walk: &[LatticePoint]) -> i64 {
    let n = walk.len();
    (0..n)
        .map(|i| {
            let (p, q) = (walk[i], walk[(i + 1) % n]);
            p.x as i64 * q.y as i64 - q.x as i64 * p.y as i64
        })
        .sum()
}

/// Winding number of a closed walk around `p`. `p` must not lie on the walk.
pub fn winding_number(p: LatticePoint, walk: &[LatticePoint]) -> i32 {
    let n = walk.len();
    let mut wn = 0;
    for i in 0..n {
        let (a, b) = (walk[i], walk[(i + 1) % n]);
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0 {
                wn += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0 {
            wn -= 1;
        }
    }
    wn
}

/// True if `p` lies on some edge of the closed walk.
pub fn on_walk(p: LatticePoint, walk: &[LatticePoint]) -> bool {
    let n = walk.len();
    (0..n).any(|i| {
        let (a, b) = (walk[i], walk[(i + 1) % n]);
        a == p || Segment { a: a.min(b), b: a.max(b) }.contains(p)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A closed polygonal cycle through lattice points, stored counterclockwise.
///
/// Vertices are corners of the cycle; an edge may pass through further
/// lattice points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatticePoint>", into = "Vec<LatticePoint>")]
pub struct LatticeCycle {
    vertices: Vec<LatticePoint>,
}

impl TryFrom<Vec<LatticePoint>> for LatticeCycle {
    type Error = GeometryError;
    fn try_from(v: Vec<LatticePoint>) -> Result<Self, GeometryError> {
        LatticeCycle::new(v)
    }
}

impl From<LatticeCycle> for Vec<LatticePoint> {
    fn from(c: LatticeCycle) -> Self {
        c.vertices
    }
}

impl LatticeCycle {
    /// Builds a cycle from vertices in either orientation.
    pub fn new(vertices: Vec<LatticePoint>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices);
        }
        let n = vertices.len();
        if (0..n).any(|i| vertices[i] == vertices[(i + 1) % n]) {
            return Err(GeometryError::RepeatedVertex);
        }
        let mut vertices = vertices;
        match walk_twice_signed_area(&vertices).cmp(&0) {
            Ordering::Equal => return Err(GeometryError::Degenerate),
            Ordering::Less => vertices.reverse(),
            Ordering::Greater => {}
        }
        Ok(LatticeCycle { vertices })
    }

    pub fn from_coords(coords: &[(i32, i32)]) -> Result<Self, GeometryError> {
        LatticeCycle::new(coords.iter().map(|&c| c.into()).collect())
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(from, to)` pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// The cycle's edges split into primitive segments.
    pub fn primitive_segments(&self) -> Vec<Segment> {
        self.edges()
            .flat_map(|(p, q)| Segment::new(p, q).unwrap().primitive_pieces())
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        let edges: Vec<Segment> = self.edges().map(|(p, q)| Segment::new(p, q).unwrap()).collect();
        for i in 0..n {
            // Adjacent edges meet at vertices[i + 1]; they may only share it.
            let (prev, v, next) = (self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]);
            if orient(prev, v, next) == 0 {
                let dot = (prev.x - v.x) as i64 * (next.x - v.x) as i64 + (prev.y - v.y) as i64 * (next.y - v.y) as i64;
                if dot > 0 {
                    return false;
                }
            }
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_touch(&edges[i], &edges[j]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn twice_area(&self) -> u64 {
        walk_twice_signed_area(&self.vertices).unsigned_abs()
    }

    /// Every lattice point on the cycle, walking counterclockwise from the
    /// first vertex.
    pub fn boundary_points(&self) -> Vec<LatticePoint> {
        self.edges().flat_map(|(p, q)| points_between(p, q, false)).collect()
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.vertices.iter().map(|p| p.x);
        let ys = self.vertices.iter().map(|p| p.y);
        (
            LatticePoint::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            LatticePoint::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    pub fn translate(&self, dx: i32, dy: i32) -> LatticeCycle {
        LatticeCycle { vertices: self.vertices.iter().map(|p| p.translate(dx, dy)).collect() }
    }

    /// The same cycle with corners that merely continue a straight edge
    /// removed.
    pub fn corners_only(&self) -> LatticeCycle {
        let n = self.vertices.len();
        let vertices = (0..n)
            .filter(|&i| orient(self.vertices[(i + n - 1) % n], self.vertices[i], self.vertices[(i + 1) % n]) != 0)
            .map(|i| self.vertices[i])
            .collect();
        LatticeCycle { vertices }
    }

    /// True iff every turn is a strict left turn (after dropping straight
    /// corners).
    pub fn is_convex(&self) -> bool {
        let c = self.corners_only();
        let n = c.vertices.len();
        self.is_simple() && (0..n).all(|i| orient(c.vertices[i], c.vertices[(i + 1) % n], c.vertices[(i + 2) % n]) > 0)
    }

    pub fn locate(&self, p: LatticePoint) -> Location {
        point_in_cycle(p, self)
    }
}

/// Area by the shoelace formula. Rejects non-simple cycles.
pub fn shoelace_area(c: &LatticeCycle) -> Result<HalfArea, GeometryError> {
    if !c.is_simple() {
        return Err(GeometryError::NotSimple);
    }
    Ok(HalfArea(c.twice_area()))
}

/// Exact point location by crossing count.
pub fn point_in_cycle(p: LatticePoint, c: &LatticeCycle) -> Location {
    if on_walk(p, &c.vertices) {
        return Location::Boundary;
    }
    let mut inside = false;
    for (a, b) in c.edges() {
        if (a.y > p.y) != (b.y > p.y) {
            // p is left of the edge's crossing with the horizontal line
            // through p iff the orientation matches the edge direction.
            let o = orient(a, b, p);
            if (b.y > a.y) == (o > 0) {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Boundary and strictly interior lattice points of a simple cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub boundary: Vec<LatticePoint>,
    pub interior: Vec<LatticePoint>,
}

impl Census {
    pub fn area(&self) -> HalfArea {
        pick_area(self.interior.len() as u64, self.boundary.len() as u64)
    }
}

pub fn lattice_census(c: &LatticeCycle) -> Result<Census, GeometryError> {
    if !c.is_simple() {
        return Err(GeometryError::NotSimple);
    }
    let boundary = c.boundary_points();
    let (lo, hi) = c.bounding_box();
    let mut interior = Vec::new();
    for x in lo.x + 1..hi.x {
        for y in lo.y + 1..hi.y {
            let p = LatticePoint::new(x, y);
            if point_in_cycle(p, c) == Location::Inside {
                interior.push(p);
            }
        }
    }
    let census = Census { boundary, interior };
    debug_assert_eq!(census.area().halves(), c.twice_area());
    Ok(census)
}

/// The eight symmetries of the square lattice fixing the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symmetry(u8);

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry(0);

    pub fn all() -> impl Iterator<Item = Symmetry> {
        (0..8).map(Symmetry)
    }

    pub fn apply(self, p: LatticePoint) -> LatticePoint {
        let (x, y) = (p.x, p.y);
        let (x, y) = match self.0 {
            0 => (x, y),
            1 => (-y, x),
            2 => (-x, -y),
            3 => (y, -x),
            4 => (-x, y),
            5 => (x, -y),
            6 => (y, x),
            _ => (-y, -x),
        };
        LatticePoint::new(x, y)
    }

    /// Whether the symmetry exchanges the two axes.
    pub fn swaps_axes(self) -> bool {
        matches!(self.0, 1 | 3 | 6 | 7)
    }
}

/// Canonical form of a vertex list up to translation, the eight lattice
/// symmetries, and the cycle's starting vertex and direction.
pub fn canonical_cycle(vertices: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut best: Option<Vec<LatticePoint>> = None;
    for sym in Symmetry::all() {
        let moved: Vec<LatticePoint> = vertices.iter().map(|&p| sym.apply(p)).collect();
        let min_x = moved.iter().map(|p| p.x).min().unwrap();
        let min_y = moved.iter().map(|p| p.y).min().unwrap();
        let moved: Vec<LatticePoint> = moved.iter().map(|p| p.translate(-min_x, -min_y)).collect();
        for seq in [moved.clone(), moved.into_iter().rev().collect::<Vec<_>>()] {
            let start = (0..seq.len()).min_by_key(|&i| seq[i]).unwrap();
            let rotated: Vec<LatticePoint> = seq[start..].iter().chain(&seq[..start]).copied().collect();
            if best.as_ref().is_none_or(|b| rotated < *b) {
                best = Some(rotated);
            }
        }
    }
    best.unwrap()
}

/// Draws a random simple lattice cycle with corners in `[0, side]^2`.
///
/// Picks a handful of distinct points, orders them by angle around their
/// centroid and retries until the result is simple and non-degenerate.
pub fn random_simple_cycle<R: Rng>(rng: &mut R, side: i32) -> LatticeCycle {
    loop {
        let k = rng.gen_range(3..=8);
        let mut pts: Vec<LatticePoint> = Vec::with_capacity(k);
        while pts.len() < k {
            let p = LatticePoint::new(rng.gen_range(0..=side), rng.gen_range(0..=side));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let (cx, cy) = (
            pts.iter().map(|p| p.x as f64).sum::<f64>() / k as f64,
            pts.iter().map(|p| p.y as f64).sum::<f64>() / k as f64,
        );
        pts.sort_by(|p, q| {
            let ap = (p.y as f64 - cy).atan2(p.x as f64 - cx);
            let aq = (q.y as f64 - cy).atan2(q.x as f64 - cx);
            ap.partial_cmp(&aq).unwrap()
        });
        if let Ok(c) = LatticeCycle::new(pts) {
            if c.is_simple() {
                return c;
            }
        }
    }
}
