//! Closed regions and their taxonomy: reduced and extremely reduced shapes,
//! eyes and irises, plus the constructive procedures that claim a region in
//! a single turn.
//!
//! A [`Region`] is analysed inside a sandbox game whose board is the
//! region's bounding box. Only moves whose midpoint lies inside the region
//! (or on its boundary, for regions with missing boundary edges) are
//! considered, so play outside the region never interferes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{BoardSpec, Face, GameState, IllegalMove, Player, Variant};
use crate::geometry::{
    is_primitive, lattice_census, on_walk, winding_number, GeometryError, HalfArea, LatticeCycle, LatticePoint,
    Location, Segment,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("the region's boundary is not closed")]
    OpenRegion,
    #[error("the region has interior lattice points")]
    HasInteriorPoints,
    #[error("the region has no iris")]
    NoIris,
    #[error("the region is not a reduced eye")]
    NotReducedEye,
    #[error("the first move claims area")]
    FirstMoveClaims,
    #[error("the first move is not playable in the region: {0}")]
    IllegalFirstMove(IllegalMove),
    #[error("no single-turn sequence claims the whole region")]
    NoFullClaim,
    #[error("invalid region: {0}")]
    Invalid(String),
}

impl From<GeometryError> for ShapeError {
    fn from(e: GeometryError) -> Self {
        ShapeError::Invalid(e.to_string())
    }
}

/// An unclaimed closed region: its outer cycle, the segments drawn inside
/// it, and the claimed polygons lying inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    outer: LatticeCycle,
    interior_segments: Vec<Segment>,
    claimed: Vec<LatticeCycle>,
    omitted: Vec<Segment>,
}

impl Region {
    /// A region with nothing claimed and every boundary edge drawn.
    pub fn new(outer: LatticeCycle, interior_segments: &[Segment]) -> Result<Region, ShapeError> {
        Region::build(outer, interior_segments, &[], &[])
    }

    /// The general constructor. `omitted` lists boundary edges (or pieces of
    /// them) that are not drawn yet, which makes the region open.
    pub fn build(
        outer: LatticeCycle,
        interior_segments: &[Segment],
        claimed: &[LatticeCycle],
        omitted: &[Segment],
    ) -> Result<Region, ShapeError> {
        if !outer.is_simple() {
            return Err(GeometryError::NotSimple.into());
        }
        let (lo, _) = outer.bounding_box();
        if lo.x < 0 || lo.y < 0 {
            return Err(ShapeError::Invalid("coordinates must be nonnegative".into()));
        }
        let boundary: BTreeSet<Segment> = outer.primitive_segments().into_iter().collect();
        let doubled: Vec<LatticePoint> = outer.vertices().iter().map(|p| p.doubled()).collect();
        let mut inner = BTreeSet::new();
        for s in interior_segments.iter().chain(claimed.iter().flat_map(|c| c.primitive_segments()).collect::<Vec<_>>().iter())
        {
            for piece in s.primitive_pieces() {
                if boundary.contains(&piece) {
                    continue;
                }
                let mid = piece.doubled_midpoint();
                if on_walk(mid, &doubled) || winding_number(mid, &doubled) == 0 {
                    return Err(ShapeError::Invalid(format!("segment {piece} is not inside the region")));
                }
                inner.insert(piece);
            }
        }
        let mut omitted_pieces = BTreeSet::new();
        for s in omitted {
            for piece in s.primitive_pieces() {
                if !boundary.contains(&piece) {
                    return Err(ShapeError::Invalid(format!("omitted segment {piece} is not a boundary edge")));
                }
                omitted_pieces.insert(piece);
            }
        }
        Ok(Region {
            outer,
            interior_segments: inner.into_iter().collect(),
            claimed: claimed.to_vec(),
            omitted: omitted_pieces.into_iter().collect(),
        })
    }

    /// The region bounded by a simple face of a game, with the face's hole
    /// components as interior structure and the claims inside them.
    pub fn from_face(state: &GameState, face: &Face) -> Option<Region> {
        let outer = face.outer()?;
        let hole_vertices: BTreeSet<LatticePoint> =
            face.holes.iter().flat_map(|h| h.vertices.iter().copied()).collect();
        let segments: Vec<Segment> = face.holes.iter().flat_map(|h| h.segments.iter().copied()).collect();
        let claimed: Vec<LatticeCycle> = state
            .claims()
            .filter(|c| c.face.walk.iter().all(|p| hole_vertices.contains(p)))
            .filter_map(|c| c.face.outer())
            .collect();
        Region::build(outer, &segments, &claimed, &[]).ok()
    }

    pub fn outer(&self) -> &LatticeCycle {
        &self.outer
    }

    /// Primitive segments drawn strictly inside the region, including the
    /// edges of claimed polygons.
    pub fn interior_segments(&self) -> &[Segment] {
        &self.interior_segments
    }

    pub fn claimed(&self) -> &[LatticeCycle] {
        &self.claimed
    }

    pub fn omitted(&self) -> &[Segment] {
        &self.omitted
    }

    pub fn is_closed(&self) -> bool {
        self.omitted.is_empty()
    }

    /// Area enclosed by the outer cycle.
    pub fn area(&self) -> HalfArea {
        HalfArea::from_halves(self.outer.twice_area())
    }

    pub fn boundary_points(&self) -> Vec<LatticePoint> {
        self.outer.boundary_points()
    }

    pub fn interior_points(&self) -> Vec<LatticePoint> {
        lattice_census(&self.outer).map(|c| c.interior).unwrap_or_default()
    }

    /// The smallest board holding the region.
    pub fn board(&self) -> BoardSpec {
        let (_, hi) = self.outer.bounding_box();
        BoardSpec::new((hi.x + 1).max(2) as u32, (hi.y + 1).max(2) as u32).expect("region fits a board")
    }

    /// Every drawn primitive segment of the region, boundary included.
    pub fn drawn_segments(&self) -> Vec<Segment> {
        let omitted: BTreeSet<Segment> = self.omitted.iter().copied().collect();
        let mut out: Vec<Segment> =
            self.outer.primitive_segments().into_iter().filter(|s| !omitted.contains(s)).collect();
        out.extend(self.interior_segments.iter().copied());
        out
    }

    /// Builds the sandbox game. Iris faces that the variant would have
    /// claimed on closure are recorded as claimed.
    pub fn game(&self, variant: Variant) -> RegionGame {
        let board = self.board();
        let segments = self.drawn_segments();
        let mut claimed: Vec<(LatticeCycle, Player)> = self.claimed.iter().map(|c| (c.clone(), Player::First)).collect();
        let initial = GameState::from_position(board, variant, &segments, &claimed, Player::First)
            .expect("region segments are consistent");
        let boundary: BTreeSet<Segment> = self.outer.primitive_segments().into_iter().collect();
        let known: BTreeSet<Vec<LatticePoint>> = initial.claims().map(|c| c.face.walk.clone()).collect();
        let mut extra = false;
        for face in initial.faces() {
            if known.contains(&face.walk) || !face.is_claimable(variant) {
                continue;
            }
            let n = face.walk.len();
            let touches_outer =
                (0..n).any(|i| boundary.contains(&Segment::new(face.walk[i], face.walk[(i + 1) % n]).unwrap()));
            if !touches_outer {
                if let Some(c) = face.outer() {
                    claimed.push((c, Player::First));
                    extra = true;
                }
            }
        }
        let state = if extra {
            GameState::from_position(board, variant, &segments, &claimed, Player::First).expect("iris faces close")
        } else {
            initial
        };
        let candidates = region_candidates(&self.outer, board, !self.omitted.is_empty());
        RegionGame { state, candidates, target: self.area() }
    }
}

/// Primitive segments whose midpoint lies inside the cycle (or on it, when
/// `with_boundary` is set).
pub fn region_candidates(outer: &LatticeCycle, board: BoardSpec, with_boundary: bool) -> Vec<Segment> {
    let doubled: Vec<LatticePoint> = outer.vertices().iter().map(|p| p.doubled()).collect();
    let (lo, hi) = outer.bounding_box();
    let pts: Vec<LatticePoint> = (lo.y..=hi.y)
        .flat_map(|y| (lo.x..=hi.x).map(move |x| LatticePoint::new(x, y)))
        .filter(|p| board.contains(*p) && outer.locate(*p) != Location::Outside)
        .collect();
    let mut out = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let s = Segment::new(p, q).unwrap();
            if !is_primitive(&s) {
                continue;
            }
            let mid = s.doubled_midpoint();
            let keep = if on_walk(mid, &doubled) { with_boundary } else { winding_number(mid, &doubled) != 0 };
            if keep {
                out.push(s);
            }
        }
    }
    out.sort();
    out
}

/// A sandbox game restricted to one region.
#[derive(Debug, Clone)]
pub struct RegionGame {
    pub state: GameState,
    /// Every segment that could ever be played inside the region.
    pub candidates: Vec<Segment>,
    /// The region's area; the region is fully claimed once the sandbox's
    /// claimed total reaches it.
    pub target: HalfArea,
}

impl RegionGame {
    pub fn moves(&self, state: &GameState) -> Vec<Segment> {
        region_moves(state, &self.candidates)
    }

    pub fn fully_claimed(&self, state: &GameState) -> bool {
        state.claimed_area() >= self.target
    }

    /// Moves of the region that claim something right away.
    pub fn claiming_moves(&self, state: &GameState) -> Vec<Segment> {
        self.moves(state)
            .into_iter()
            .filter(|s| state.after(*s).map(|(_, o)| o.claims_anything()).unwrap_or(false))
            .collect()
    }
}

pub fn region_moves(state: &GameState, candidates: &[Segment]) -> Vec<Segment> {
    if state.is_over() {
        return Vec::new();
    }
    candidates.iter().copied().filter(|s| state.is_legal(*s)).collect()
}

/// True when the region's own face is claimable as it stands, so the move
/// that closed it has already claimed it.
pub fn claimed_on_closure(region: &Region, variant: Variant) -> bool {
    if !region.is_closed() {
        return false;
    }
    let game = region.game(variant);
    let boundary: BTreeSet<LatticePoint> = region.boundary_points().into_iter().collect();
    game.state.unclaimed_faces().iter().any(|f| {
        f.is_claimable(variant)
            && f.walk.len() == boundary.len()
            && f.walk.iter().all(|p| boundary.contains(p))
    })
}

/// Depth-first search for one turn (a run of claiming moves) that brings
/// the claimed total to `target_total`. Visited dead ends are memoised by
/// their drawn segment set. Returns the moves and the final state.
pub fn one_turn_claim(
    state: &GameState,
    candidates: &[Segment],
    target_total: HalfArea,
) -> Option<(Vec<Segment>, GameState)> {
    fn go(
        state: &GameState,
        candidates: &[Segment],
        target: HalfArea,
        failed: &mut HashSet<Vec<Segment>>,
        path: &mut Vec<Segment>,
    ) -> Option<GameState> {
        if state.claimed_area() >= target {
            return Some(state.clone());
        }
        let key: Vec<Segment> = state.drawn().iter().copied().collect();
        if failed.contains(&key) {
            return None;
        }
        for s in region_moves(state, candidates) {
            let (child, out) = state.after(s).expect("legal move");
            if !out.claims_anything() {
                continue;
            }
            path.push(s);
            if let Some(done) = go(&child, candidates, target, failed, path) {
                return Some(done);
            }
            path.pop();
        }
        failed.insert(key);
        None
    }
    let mut path = Vec::new();
    let mut failed = HashSet::new();
    go(state, candidates, target_total, &mut failed, &mut path).map(|s| (path, s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionClass {
    Claimable,
    NotReduced,
    Reduced,
    ExtremelyReduced,
}

impl ReductionClass {
    pub fn is_reduced(self) -> bool {
        matches!(self, ReductionClass::Reduced | ReductionClass::ExtremelyReduced)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EyeKind {
    NotAnEye,
    Eye,
    HangingEye,
    SplitHangingEye,
}

/// A connected piece of interior structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrisComponent {
    /// Interior points touched by the component.
    pub vertices: Vec<LatticePoint>,
    pub segments: Vec<Segment>,
    /// Boundary points joined to the component by a segment.
    pub attachments: Vec<LatticePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EyeClass {
    pub kind: EyeKind,
    pub lazy: bool,
    pub iris_expanded: bool,
    pub iris_components: Vec<IrisComponent>,
}

impl EyeClass {
    pub fn is_eye(&self) -> bool {
        self.kind != EyeKind::NotAnEye
    }
}

fn interior_structure(region: &Region) -> (Vec<IrisComponent>, bool) {
    let boundary: BTreeSet<LatticePoint> = region.boundary_points().into_iter().collect();
    let interior: BTreeSet<LatticePoint> = region.interior_points().into_iter().collect();
    let mut parent: BTreeMap<LatticePoint, LatticePoint> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<LatticePoint, LatticePoint>, p: LatticePoint) -> LatticePoint {
        let q = parent[&p];
        if q == p {
            return p;
        }
        let r = find(parent, q);
        parent.insert(p, r);
        r
    }
    let mut chord = false;
    for s in region.interior_segments() {
        for p in s.endpoints() {
            if interior.contains(&p) {
                parent.entry(p).or_insert(p);
            }
        }
        match (interior.contains(&s.a()), interior.contains(&s.b())) {
            (true, true) => {
                let (ra, rb) = (find(&mut parent, s.a()), find(&mut parent, s.b()));
                parent.insert(ra, rb);
            }
            (false, false) => chord = true,
            _ => {}
        }
    }
    let mut groups: BTreeMap<LatticePoint, IrisComponent> = BTreeMap::new();
    let roots: Vec<(LatticePoint, LatticePoint)> =
        parent.keys().copied().collect::<Vec<_>>().into_iter().map(|p| (p, find(&mut parent, p))).collect();
    for (p, r) in roots {
        groups
            .entry(r)
            .or_insert_with(|| IrisComponent { vertices: Vec::new(), segments: Vec::new(), attachments: Vec::new() })
            .vertices
            .push(p);
    }
    for s in region.interior_segments() {
        let inner = if interior.contains(&s.a()) { s.a() } else if interior.contains(&s.b()) { s.b() } else { continue };
        let r = find(&mut parent, inner);
        let comp = groups.get_mut(&r).unwrap();
        comp.segments.push(*s);
        for p in s.endpoints() {
            if boundary.contains(&p) && !comp.attachments.contains(&p) {
                comp.attachments.push(p);
            }
        }
    }
    let mut comps: Vec<IrisComponent> = groups.into_values().collect();
    for c in &mut comps {
        c.vertices.sort();
        c.segments.sort();
        c.attachments.sort();
    }
    comps.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    (comps, chord)
}

/// Labels a region with the eye taxonomy. Interior points lying inside a
/// claimed polygon count as covered by the iris, which is the relaxed
/// condition of the polygon variant and changes nothing for triangles.
pub fn classify_eye(region: &Region, variant: Variant) -> Result<EyeClass, ShapeError> {
    if !region.is_closed() {
        return Err(ShapeError::OpenRegion);
    }
    let (comps, chord) = interior_structure(region);
    let interior = region.interior_points();
    let game = region.game(variant);

    let covered = |p: LatticePoint| {
        comps.iter().any(|c| c.vertices.contains(&p))
            || game.state.claims().any(|c| {
                let walk = &c.face.walk;
                !on_walk(p, walk) && winding_number(p, walk) != 0
            })
    };
    // A lone interior point with nothing drawn is its own trivial iris.
    let trivial = comps.is_empty() && interior.len() == 1;
    let lazy = !trivial && interior.iter().any(|&p| !covered(p));

    let iris_vertices: BTreeSet<LatticePoint> = comps.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    let iris_expanded = !game
        .moves(&game.state)
        .iter()
        .any(|s| iris_vertices.contains(&s.a()) && iris_vertices.contains(&s.b()));

    let kind = if chord || comps.iter().any(|c| c.attachments.len() >= 2) {
        EyeKind::NotAnEye
    } else {
        let hanging = comps.iter().filter(|c| c.attachments.len() == 1).count();
        match comps.len() {
            0 if interior.len() == 1 => EyeKind::Eye,
            0 => EyeKind::NotAnEye,
            1 if hanging == 1 => EyeKind::HangingEye,
            1 => EyeKind::Eye,
            _ if hanging > 0 => EyeKind::SplitHangingEye,
            _ => EyeKind::NotAnEye,
        }
    };
    Ok(EyeClass { kind, lazy, iris_expanded, iris_components: comps })
}

/// Interior lattice points of the two parts a chord cuts the outer cycle
/// into.
fn chord_parts_interior(outer: &LatticeCycle, chord: &Segment) -> Option<(usize, usize)> {
    let bp = outer.boundary_points();
    let i = bp.iter().position(|&p| p == chord.a())?;
    let j = bp.iter().position(|&p| p == chord.b())?;
    let (i, j) = (i.min(j), i.max(j));
    let first: Vec<LatticePoint> = bp[i..=j].to_vec();
    let second: Vec<LatticePoint> = bp[j..].iter().chain(&bp[..=i]).copied().collect();
    let count = |v: Vec<LatticePoint>| -> Option<usize> {
        let c = LatticeCycle::new(v).ok()?;
        Some(lattice_census(&c).ok()?.interior.len())
    };
    Some((count(first)?, count(second)?))
}

/// Boundary-to-boundary moves through the interior.
pub fn chords(region: &Region, game: &RegionGame) -> Vec<Segment> {
    let boundary: BTreeSet<LatticePoint> = region.boundary_points().into_iter().collect();
    game.moves(&game.state)
        .into_iter()
        .filter(|s| boundary.contains(&s.a()) && boundary.contains(&s.b()))
        .collect()
}

pub fn classify_reduction(region: &Region, variant: Variant) -> Result<ReductionClass, ShapeError> {
    if !region.is_closed() {
        return Err(ShapeError::OpenRegion);
    }
    let game = region.game(variant);
    if !game.claiming_moves(&game.state).is_empty() || claimed_on_closure(region, variant) {
        return Ok(ReductionClass::Claimable);
    }
    let eye = classify_eye(region, variant)?;
    if eye.is_eye() && eye.lazy {
        return Ok(ReductionClass::NotReduced);
    }
    let chords = chords(region, &game);
    if chords.is_empty() {
        return Ok(ReductionClass::ExtremelyReduced);
    }
    let all_split = chords
        .iter()
        .all(|c| matches!(chord_parts_interior(region.outer(), c), Some((a, b)) if a >= 1 && b >= 1));
    Ok(if all_split { ReductionClass::Reduced } else { ReductionClass::NotReduced })
}

/// A reduced eye: a non-lazy eye (no hanging parts) with an expanded iris
/// in which no single move claims and every chord leaves interior points
/// on both sides.
pub fn is_reduced_eye(region: &Region, variant: Variant) -> Result<bool, ShapeError> {
    let eye = classify_eye(region, variant)?;
    if eye.kind != EyeKind::Eye || eye.lazy || !eye.iris_expanded {
        return Ok(false);
    }
    Ok(classify_reduction(region, variant)?.is_reduced())
}

/// A one-turn claim of a region with no interior lattice points.
///
/// Follows the ear-first procedure: close triangles formed by two drawn
/// edges first, then repeat on what is left. Falls back to exhaustive
/// search if the greedy order ever stalls.
pub fn claim_all_no_interior(region: &Region, variant: Variant) -> Result<Vec<Segment>, ShapeError> {
    if !region.is_closed() {
        return Err(ShapeError::OpenRegion);
    }
    if !region.interior_points().is_empty() {
        return Err(ShapeError::HasInteriorPoints);
    }
    if claimed_on_closure(region, variant) && region_first_moves(region, variant).is_empty() {
        return Ok(Vec::new());
    }
    let game = region.game(variant);
    let mut state = game.state.clone();
    let mut seq = Vec::new();
    while !game.fully_claimed(&state) {
        let mut best: Option<(bool, Segment, GameState)> = None;
        for s in game.moves(&state) {
            let (child, out) = state.after(s).expect("legal");
            if !out.claims_anything() {
                continue;
            }
            let ear = out.claimed.iter().all(|(f, a)| f.walk.len() == 3 && *a == HalfArea::from_halves(1));
            if best.as_ref().is_none_or(|(e, _, _)| ear && !*e) {
                best = Some((ear, s, child));
            }
        }
        match best {
            Some((_, s, child)) => {
                seq.push(s);
                state = child;
            }
            None => {
                return one_turn_claim(&game.state, &game.candidates, game.target)
                    .map(|(moves, _)| moves)
                    .ok_or(ShapeError::NoFullClaim);
            }
        }
    }
    Ok(seq)
}

/// Plays claiming moves between iris vertices until no iris vertices can
/// be joined. Every emitted move claims, so the mover keeps the turn.
pub fn expand_iris(region: &Region, variant: Variant) -> Result<Vec<Segment>, ShapeError> {
    let eye = classify_eye(region, variant)?;
    let iris: BTreeSet<LatticePoint> = eye.iris_components.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    if iris.is_empty() {
        return Err(ShapeError::NoIris);
    }
    let game = region.game(variant);
    let mut state = game.state.clone();
    let mut seq = Vec::new();
    loop {
        let next = game
            .moves(&state)
            .into_iter()
            .filter(|s| iris.contains(&s.a()) && iris.contains(&s.b()))
            .find_map(|s| {
                let (child, out) = state.after(s).ok()?;
                out.claims_anything().then_some((s, child))
            });
        match next {
            Some((s, child)) => {
                seq.push(s);
                state = child;
            }
            None => return Ok(seq),
        }
    }
}

/// A single turn claiming the whole region, if one exists. The search is
/// exhaustive over claiming moves inside the region.
pub fn single_turn_claim(region: &Region, variant: Variant) -> Option<Vec<Segment>> {
    let game = region.game(variant);
    one_turn_claim(&game.state, &game.candidates, game.target).map(|(moves, _)| moves)
}

/// After `first` is played in a reduced eye, the opponent's one-turn claim
/// of the entire eye.
pub fn second_player_eye_reply(region: &Region, first: Segment, variant: Variant) -> Result<Vec<Segment>, ShapeError> {
    if !is_reduced_eye(region, variant)? {
        return Err(ShapeError::NotReducedEye);
    }
    let game = region.game(variant);
    if !game.candidates.contains(&first) {
        return Err(ShapeError::IllegalFirstMove(IllegalMove::OutOfBoard));
    }
    let (after, out) = game.state.after(first).map_err(ShapeError::IllegalFirstMove)?;
    if out.claims_anything() {
        return Err(ShapeError::FirstMoveClaims);
    }
    one_turn_claim(&after, &game.candidates, game.target).map(|(moves, _)| moves).ok_or(ShapeError::NoFullClaim)
}

/// Legal first moves inside a region.
pub fn region_first_moves(region: &Region, variant: Variant) -> Vec<Segment> {
    let game = region.game(variant);
    game.moves(&game.state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(c: &[(i32, i32)]) -> LatticeCycle {
        LatticeCycle::from_coords(c).unwrap()
    }

    fn seg(a: (i32, i32), b: (i32, i32)) -> Segment {
        Segment::of(a, b)
    }

    // Oracle: a move claims iff some face next to it closes as claimable.
    fn brute_claimable(region: &Region, v: Variant) -> bool {
        let g = region.game(v);
        g.candidates.iter().any(|s| g.state.after(*s).map(|(_, o)| o.claims_anything()).unwrap_or(false))
    }

    #[test]
    fn square_is_not_reduced_in_triangles() {
        let r = Region::new(cycle(&[(0, 0), (2, 0), (2, 2), (0, 2)]), &[]).unwrap();
        assert!(brute_claimable(&r, Variant::Triangles));
        assert_eq!(classify_reduction(&r, Variant::Triangles).unwrap(), ReductionClass::Claimable);
        assert!(!classify_reduction(&r, Variant::Triangles).unwrap().is_reduced());
    }

    #[test]
    fn thin_triangle_with_one_interior_point_is_extremely_reduced() {
        let r = Region::new(cycle(&[(0, 0), (3, 2), (0, 1)]), &[]).unwrap();
        assert_eq!(r.interior_points(), vec![LatticePoint::new(1, 1)]);
        assert_eq!(classify_reduction(&r, Variant::Triangles).unwrap(), ReductionClass::ExtremelyReduced);
        let eye = classify_eye(&r, Variant::Triangles).unwrap();
        assert_eq!(eye.kind, EyeKind::Eye);
        assert!(!eye.lazy);
    }

    #[test]
    fn open_region_is_rejected() {
        let r = Region::build(cycle(&[(0, 0), (3, 2), (0, 1)]), &[], &[], &[seg((0, 0), (0, 1))]).unwrap();
        assert_eq!(classify_reduction(&r, Variant::Polygons), Err(ShapeError::OpenRegion));
        assert_eq!(classify_eye(&r, Variant::Polygons).unwrap_err(), ShapeError::OpenRegion);
    }

    #[test]
    fn doublecross_triangle_claims_in_one_move() {
        let r = Region::new(cycle(&[(0, 0), (2, 1), (0, 1)]), &[]).unwrap();
        assert_eq!(claim_all_no_interior(&r, Variant::Triangles).unwrap(), vec![seg((0, 0), (1, 1))]);
    }

    #[test]
    fn claim_all_rejects_interior_points() {
        let r = Region::new(cycle(&[(0, 0), (3, 2), (0, 1)]), &[]).unwrap();
        assert_eq!(claim_all_no_interior(&r, Variant::Triangles), Err(ShapeError::HasInteriorPoints));
    }

    #[test]
    fn iris_triangle_expands_with_one_move() {
        let outer = cycle(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let r = Region::new(outer, &[seg((1, 1), (2, 1)), seg((2, 1), (2, 2))]).unwrap();
        for v in [Variant::Triangles, Variant::Polygons] {
            assert_eq!(expand_iris(&r, v).unwrap(), vec![seg((1, 1), (2, 2))]);
        }
        let bare = Region::new(cycle(&[(0, 0), (4, 0), (4, 4), (0, 4)]), &[]).unwrap();
        assert_eq!(expand_iris(&bare, Variant::Triangles), Err(ShapeError::NoIris));
    }

    #[test]
    fn open_square_closes_in_one_move() {
        let r = Region::build(cycle(&[(0, 0), (1, 0), (1, 1), (0, 1)]), &[], &[], &[seg((0, 0), (0, 1))]).unwrap();
        assert_eq!(single_turn_claim(&r, Variant::Polygons), Some(vec![seg((0, 0), (0, 1))]));
    }

    #[test]
    fn chord_parts_count_interior_points() {
        let outer = cycle(&[(0, 0), (4, 0), (4, 2), (0, 2)]);
        let (a, b) = chord_parts_interior(&outer, &seg((2, 0), (2, 2))).unwrap_or((9, 9));
        assert_eq!((a, b), (1, 1));
    }

    #[test]
    fn segments_outside_region_are_rejected() {
        let outer = cycle(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert!(Region::new(outer, &[seg((2, 2), (3, 3))]).is_err());
    }
}
