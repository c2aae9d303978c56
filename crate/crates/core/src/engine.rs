//! Game state, move legality, face tracking and claiming.
//!
//! Drawn segments never cross, so they form a straight-line plane graph on
//! the dots. Faces are traced with the usual half-edge rule: leaving a
//! vertex, take the neighbour that comes next clockwise after the edge we
//! arrived on. Counterclockwise walks (positive signed area) bound faces;
//! the others are the outer boundaries of connected components.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    is_primitive, on_walk, segments_conflict, walk_twice_signed_area, winding_number, HalfArea,
    LatticeCycle, LatticePoint, Segment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Triangles,
    Polygons,
}

impl Variant {
    pub fn token(self) -> &'static str {
        match self {
            Variant::Triangles => "triangles",
            Variant::Polygons => "polygons",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "triangles" => Ok(Variant::Triangles),
            "polygons" => Ok(Variant::Polygons),
            other => Err(format!("unknown variant `{other}` (expected triangles or polygons)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
#[error("a board needs at least 2x2 dots, got {width}x{height}")]
pub struct BoardError {
    pub width: u32,
    pub height: u32,
}

/// Board dimensions in dots. Dots sit at `(0..width, 0..height)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBoard")]
pub struct BoardSpec {
    width: u32,
    height: u32,
}

#[derive(Deserialize)]
struct RawBoard {
    width: u32,
    height: u32,
}

impl TryFrom<RawBoard> for BoardSpec {
    type Error = BoardError;
    fn try_from(raw: RawBoard) -> Result<Self, BoardError> {
        BoardSpec::new(raw.width, raw.height)
    }
}

impl BoardSpec {
    pub fn new(width: u32, height: u32) -> Result<Self, BoardError> {
        if width < 2 || height < 2 || width > 64 || height > 64 {
            return Err(BoardError { width, height });
        }
        Ok(BoardSpec { width, height })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dot_count(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    /// Total claimable area, `(width - 1) * (height - 1)` square units.
    pub fn area(&self) -> HalfArea {
        HalfArea::from_units((self.width as u64 - 1) * (self.height as u64 - 1))
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as u32) < self.width && (p.y as u32) < self.height
    }

    pub fn dots(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (0..self.height as i32).flat_map(move |y| (0..self.width as i32).map(move |x| LatticePoint::new(x, y)))
    }

    fn index(&self, p: LatticePoint) -> usize {
        p.y as usize * self.width as usize + p.x as usize
    }

    /// Every primitive segment between two dots of the board, sorted.
    pub fn primitive_segments(&self) -> Vec<Segment> {
        let dots: Vec<LatticePoint> = self.dots().collect();
        let mut out = Vec::new();
        for (i, &p) in dots.iter().enumerate() {
            for &q in &dots[i + 1..] {
                let s = Segment::new(p, q).unwrap();
                if is_primitive(&s) {
                    out.push(s);
                }
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    First,
    Second,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }

    /// 1 for the first player, 2 for the second.
    pub fn number(self) -> u8 {
        match self {
            Player::First => 1,
            Player::Second => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::First),
            2 => Some(Player::Second),
            _ => None,
        }
    }
}

/// Why a segment cannot be drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
pub enum IllegalMove {
    #[error("segment already drawn")]
    Duplicate,
    #[error("segment crosses or overlaps a drawn segment")]
    Conflict,
    #[error("segment passes through a dot")]
    NonPrimitive,
    #[error("segment leaves the board")]
    OutOfBoard,
    #[error("segment lies inside a claimed region")]
    InsideClaimedRegion,
    #[error("the game is over")]
    GameOver,
}

impl IllegalMove {
    /// Stable reason token used by records, the service and the CLI.
    pub fn token(self) -> &'static str {
        match self {
            IllegalMove::Duplicate => "duplicate",
            IllegalMove::Conflict => "conflict",
            IllegalMove::NonPrimitive => "non-primitive",
            IllegalMove::OutOfBoard => "out-of-board",
            IllegalMove::InsideClaimedRegion => "inside-claimed-region",
            IllegalMove::GameOver => "game-over",
        }
    }
}

/// A connected group of segments lying inside a face without touching its
/// outer walk.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HoleComponent {
    pub vertices: Vec<LatticePoint>,
    pub segments: Vec<Segment>,
}

/// One bounded face of the drawn plane graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    /// Counterclockwise boundary walk starting at its least rotation. A walk
    /// that revisits a vertex (pendant edges, pinches) is not simple.
    pub walk: Vec<LatticePoint>,
    pub simple: bool,
    pub holes: Vec<HoleComponent>,
    /// Dots strictly inside the face with no incident segment.
    pub interior_unused: Vec<LatticePoint>,
    /// Area of the face itself: the walk's area minus what the holes enclose.
    pub area: HalfArea,
}

impl Face {
    /// The outer boundary as a cycle, when the walk is simple.
    pub fn outer(&self) -> Option<LatticeCycle> {
        if self.simple {
            LatticeCycle::new(self.walk.clone()).ok()
        } else {
            None
        }
    }

    pub fn is_claimable(&self, variant: Variant) -> bool {
        match variant {
            Variant::Triangles => self.walk.len() == 3 && self.area == HalfArea::from_halves(1),
            Variant::Polygons => self.simple && self.holes.is_empty(),
        }
    }

    /// True if the doubled-coordinate point lies strictly inside the walk.
    fn contains_doubled(&self, p: LatticePoint) -> bool {
        let walk: Vec<LatticePoint> = self.walk.iter().map(|q| q.doubled()).collect();
        !on_walk(p, &walk) && winding_number(p, &walk) != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Claim {
    pub face: Face,
    pub player: Player,
}

impl Claim {
    pub fn area(&self) -> HalfArea {
        self.face.area
    }
}

/// Turn and doublecross bookkeeping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameAccounting {
    /// Dots on the board.
    pub dots: u64,
    /// Completed turns.
    pub turns: u64,
    /// Segments drawn.
    pub segments: u64,
    /// Regions claimed.
    pub regions: u64,
    /// Moves that claimed two regions at once.
    pub doublecrosses: u64,
    /// Dots without any incident segment; set when the game ends.
    pub unused_dots: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveOutcome {
    pub segment: Segment,
    pub player: Player,
    pub claimed: Vec<(Face, HalfArea)>,
    pub extra_turn: bool,
    pub doublecross: bool,
    pub next_player: Player,
    pub game_over: bool,
}

impl MoveOutcome {
    pub fn claimed_area(&self) -> HalfArea {
        self.claimed.iter().map(|(_, a)| *a).sum()
    }

    pub fn claims_anything(&self) -> bool {
        !self.claimed.is_empty()
    }
}

/// One drawn move in game order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlayedMove {
    pub segment: Segment,
    pub player: Player,
}

/// Complete game state. Cloning yields an independent copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    board: BoardSpec,
    variant: Variant,
    segments: Vec<PlayedMove>,
    drawn: BTreeSet<Segment>,
    /// Neighbours of each dot, sorted counterclockwise by direction.
    adjacency: Vec<Vec<LatticePoint>>,
    claims: Vec<Arc<Claim>>,
    to_move: Player,
    accounting: GameAccounting,
    claimed_total: HalfArea,
    /// Segments placed by [`GameState::from_position`] rather than played.
    setup_segments: usize,
}

impl GameState {
    pub fn new(board: BoardSpec, variant: Variant) -> GameState {
        GameState {
            board,
            variant,
            segments: Vec::new(),
            drawn: BTreeSet::new(),
            adjacency: vec![Vec::new(); board.dot_count() as usize],
            claims: Vec::new(),
            to_move: Player::First,
            accounting: GameAccounting { dots: board.dot_count(), ..Default::default() },
            claimed_total: HalfArea::ZERO,
            setup_segments: 0,
        }
    }

    /// Builds an arbitrary position: `segments` are placed without claiming
    /// anything, then each cycle in `claimed` is recorded as a claim by the
    /// given player. Primitive pieces of non-primitive input segments are
    /// used.
    pub fn from_position(
        board: BoardSpec,
        variant: Variant,
        segments: &[Segment],
        claimed: &[(LatticeCycle, Player)],
        to_move: Player,
    ) -> Result<GameState, IllegalMove> {
        let mut state = GameState::new(board, variant);
        for s in segments {
            for piece in s.primitive_pieces() {
                if state.drawn.contains(&piece) {
                    continue;
                }
                state.check_geometry(piece)?;
                state.insert_segment(piece, to_move);
            }
        }
        state.setup_segments = state.segments.len();
        state.accounting.segments = state.segments.len() as u64;
        for (cycle, player) in claimed {
            let start = cycle.vertices()[0];
            let next = cycle.boundary_points()[1];
            if !state.drawn.contains(&Segment::new(start, next).unwrap()) {
                return Err(IllegalMove::Conflict);
            }
            let walk = state.trace(start, next);
            let face = state.face_from_walk(walk);
            state.claimed_total += face.area;
            state.claims.push(Arc::new(Claim { face, player: *player }));
        }
        state.to_move = to_move;
        Ok(state)
    }

    pub fn board(&self) -> BoardSpec {
        self.board
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn set_to_move(&mut self, player: Player) {
        self.to_move = player;
    }

    pub fn accounting(&self) -> &GameAccounting {
        &self.accounting
    }

    /// Drawn segments in the order they were drawn.
    pub fn played(&self) -> &[PlayedMove] {
        &self.segments
    }

    /// Moves made through [`GameState::apply_move`], excluding setup.
    pub fn moves(&self) -> &[PlayedMove] {
        &self.segments[self.setup_segments..]
    }

    pub fn is_setup_position(&self) -> bool {
        self.setup_segments > 0 || (self.segments.is_empty() && !self.claims.is_empty())
    }

    pub fn drawn(&self) -> &BTreeSet<Segment> {
        &self.drawn
    }

    pub fn is_drawn(&self, s: &Segment) -> bool {
        self.drawn.contains(s)
    }

    pub fn claims(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().map(|c| c.as_ref())
    }

    pub fn claim_count(&self) -> usize {
        self.claims.len()
    }

    pub fn claimed_area(&self) -> HalfArea {
        self.claimed_total
    }

    pub fn unclaimed_area(&self) -> HalfArea {
        self.board.area() - self.claimed_total
    }

    pub fn degree(&self, p: LatticePoint) -> usize {
        self.adjacency[self.board.index(p)].len()
    }

    pub fn neighbours(&self, p: LatticePoint) -> &[LatticePoint] {
        &self.adjacency[self.board.index(p)]
    }

    /// Claimed area per player, `(first, second)`.
    pub fn scores(&self) -> (HalfArea, HalfArea) {
        let mut first = HalfArea::ZERO;
        let mut second = HalfArea::ZERO;
        for c in &self.claims {
            match c.player {
                Player::First => first += c.area(),
                Player::Second => second += c.area(),
            }
        }
        (first, second)
    }

    pub fn score(&self, player: Player) -> HalfArea {
        let (a, b) = self.scores();
        match player {
            Player::First => a,
            Player::Second => b,
        }
    }

    /// The game ends once every bit of area is claimed; at that point no
    /// legal move remains.
    pub fn is_over(&self) -> bool {
        self.claimed_total == self.board.area()
    }

    fn check_geometry(&self, s: Segment) -> Result<(), IllegalMove> {
        if !self.board.contains(s.a()) || !self.board.contains(s.b()) {
            return Err(IllegalMove::OutOfBoard);
        }
        if !is_primitive(&s) {
            return Err(IllegalMove::NonPrimitive);
        }
        if self.drawn.contains(&s) {
            return Err(IllegalMove::Duplicate);
        }
        if self.drawn.iter().any(|d| segments_conflict(d, &s)) {
            return Err(IllegalMove::Conflict);
        }
        Ok(())
    }

    pub fn check_move(&self, s: Segment) -> Result<(), IllegalMove> {
        self.check_geometry(s)?;
        let mid = s.doubled_midpoint();
        if self.claims.iter().any(|c| c.face.contains_doubled(mid)) {
            return Err(IllegalMove::InsideClaimedRegion);
        }
        if self.is_over() {
            return Err(IllegalMove::GameOver);
        }
        Ok(())
    }

    pub fn is_legal(&self, s: Segment) -> bool {
        self.check_move(s).is_ok()
    }

    /// Every legal move, sorted. Empty exactly when the game is over.
    pub fn legal_moves(&self) -> Vec<Segment> {
        if self.is_over() {
            return Vec::new();
        }
        self.board.primitive_segments().into_iter().filter(|s| self.is_legal(*s)).collect()
    }

    /// Legal moves whose midpoint lies strictly inside `zone`, or on its
    /// boundary when `include_boundary` is set.
    pub fn legal_moves_in(&self, zone: &LatticeCycle, include_boundary: bool) -> Vec<Segment> {
        let doubled: Vec<LatticePoint> = zone.vertices().iter().map(|p| p.doubled()).collect();
        let (lo, hi) = zone.bounding_box();
        let mut out = Vec::new();
        for x1 in lo.x..=hi.x {
            for y1 in lo.y..=hi.y {
                let p = LatticePoint::new(x1, y1);
                for x2 in lo.x..=hi.x {
                    for y2 in lo.y..=hi.y {
                        let q = LatticePoint::new(x2, y2);
                        if q <= p {
                            continue;
                        }
                        let s = Segment::new(p, q).unwrap();
                        let mid = s.doubled_midpoint();
                        let on = on_walk(mid, &doubled);
                        let inside = if on { include_boundary } else { winding_number(mid, &doubled) != 0 };
                        if inside && self.board.contains(p) && self.board.contains(q) && self.is_legal(s) {
                            out.push(s);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Draws `s` for the player to move.
    pub fn apply_move(&mut self, s: Segment) -> Result<MoveOutcome, IllegalMove> {
        self.check_move(s)?;
        let player = self.to_move;
        self.insert_segment(s, player);
        self.accounting.segments += 1;

        let claimed = self.newly_claimable(s);
        for face in &claimed {
            self.claimed_total += face.area;
            self.claims.push(Arc::new(Claim { face: face.clone(), player }));
        }
        self.accounting.regions += claimed.len() as u64;
        let doublecross = claimed.len() == 2;
        if doublecross {
            self.accounting.doublecrosses += 1;
        }
        let game_over = self.is_over();
        let extra_turn = !claimed.is_empty() && !game_over;
        if game_over {
            self.accounting.turns += 1;
            self.accounting.unused_dots = self.board.dots().filter(|&p| self.degree(p) == 0).count() as u64;
        } else if claimed.is_empty() {
            self.accounting.turns += 1;
            self.to_move = player.other();
        }
        Ok(MoveOutcome {
            segment: s,
            player,
            claimed: claimed.into_iter().map(|f| {
                let a = f.area;
                (f, a)
            }).collect(),
            extra_turn,
            doublecross,
            next_player: self.to_move,
            game_over,
        })
    }

    /// Applies `s` to a copy of the state.
    pub fn after(&self, s: Segment) -> Result<(GameState, MoveOutcome), IllegalMove> {
        let mut next = self.clone();
        let outcome = next.apply_move(s)?;
        Ok((next, outcome))
    }

    fn insert_segment(&mut self, s: Segment, player: Player) {
        self.segments.push(PlayedMove { segment: s, player });
        self.drawn.insert(s);
        for (from, to) in [(s.a(), s.b()), (s.b(), s.a())] {
            let idx = self.board.index(from);
            let list = &mut self.adjacency[idx];
            let pos = list
                .binary_search_by(|q| direction_cmp(delta(from, *q), delta(from, to)))
                .unwrap_or_else(|e| e);
            list.insert(pos, to);
        }
    }

    /// Faces on either side of the freshly drawn `s` that are claimable.
    fn newly_claimable(&self, s: Segment) -> Vec<Face> {
        let left = self.trace(s.a(), s.b());
        let mut out = Vec::new();
        let right_is_same = walk_uses(&left, s.b(), s.a());
        let mut walks = vec![left];
        if !right_is_same {
            walks.push(self.trace(s.b(), s.a()));
        }
        for walk in walks {
            if walk_twice_signed_area(&walk) <= 0 {
                continue;
            }
            let claimable = match self.variant {
                Variant::Triangles => walk.len() == 3 && walk_twice_signed_area(&walk) == 1,
                Variant::Polygons => walk_is_simple(&walk) && !self.has_hole(&walk),
            };
            if claimable {
                out.push(self.face_from_walk(walk));
            }
        }
        out
    }

    /// Traces the face to the left of the directed edge `from -> to`.
    fn trace(&self, from: LatticePoint, to: LatticePoint) -> Vec<LatticePoint> {
        let mut walk = Vec::new();
        let (mut u, mut v) = (from, to);
        loop {
            walk.push(u);
            let nbrs = &self.adjacency[self.board.index(v)];
            let i = nbrs.iter().position(|&q| q == u).expect("edge present in adjacency");
            let w = nbrs[(i + nbrs.len() - 1) % nbrs.len()];
            u = v;
            v = w;
            if u == from && v == to {
                break;
            }
        }
        walk
    }

    /// True if some drawn vertex off the walk lies inside it.
    fn has_hole(&self, walk: &[LatticePoint]) -> bool {
        let on: BTreeSet<LatticePoint> = walk.iter().copied().collect();
        let (lo, hi) = walk_bbox(walk);
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                let p = LatticePoint::new(x, y);
                if on.contains(&p) || !self.board.contains(p) || self.degree(p) == 0 {
                    continue;
                }
                if winding_number(p, walk) != 0 {
                    return true;
                }
            }
        }
        false
    }

    /// A face with no holes built from a positive walk.
    fn face_from_walk(&self, walk: Vec<LatticePoint>) -> Face {
        let simple = walk_is_simple(&walk);
        let (lo, hi) = walk_bbox(&walk);
        let mut unused = Vec::new();
        for y in lo.y..=hi.y {
            for x in lo.x..=hi.x {
                let p = LatticePoint::new(x, y);
                if self.board.contains(p) && self.degree(p) == 0 && winding_number(p, &walk) != 0 {
                    unused.push(p);
                }
            }
        }
        let area = HalfArea::from_halves(walk_twice_signed_area(&walk) as u64);
        Face { walk: canonical_rotation(walk), simple, holes: Vec::new(), interior_unused: unused, area }
    }

    /// All bounded faces of the drawn graph, claimed or not, sorted by walk.
    pub fn faces(&self) -> Vec<Face> {
        let mut seen: BTreeSet<(LatticePoint, LatticePoint)> = BTreeSet::new();
        let mut bounded: Vec<Vec<LatticePoint>> = Vec::new();
        let mut outer_walks: Vec<Vec<LatticePoint>> = Vec::new();
        for s in &self.drawn {
            for (u, v) in [(s.a(), s.b()), (s.b(), s.a())] {
                if seen.contains(&(u, v)) {
                    continue;
                }
                let walk = self.trace(u, v);
                let n = walk.len();
                for i in 0..n {
                    seen.insert((walk[i], walk[(i + 1) % n]));
                }
                if walk_twice_signed_area(&walk) > 0 {
                    bounded.push(walk);
                } else {
                    outer_walks.push(walk);
                }
            }
        }
        let areas: Vec<i64> = bounded.iter().map(|w| walk_twice_signed_area(w)).collect();
        // The smallest bounded walk winding around p, skipping walks through p.
        let innermost = |p: LatticePoint, skip: &dyn Fn(&[LatticePoint]) -> bool| -> Option<usize> {
            (0..bounded.len())
                .filter(|&i| !skip(&bounded[i]) && winding_number(p, &bounded[i]) != 0)
                .min_by_key(|&i| areas[i])
        };

        let mut holes: Vec<Vec<HoleComponent>> = vec![Vec::new(); bounded.len()];
        let mut hole_area: Vec<i64> = vec![0; bounded.len()];
        for walk in &outer_walks {
            let members: BTreeSet<LatticePoint> = walk.iter().copied().collect();
            let probe = walk[0];
            let skip = |w: &[LatticePoint]| w.iter().any(|q| members.contains(q));
            if let Some(i) = innermost(probe, &skip) {
                let segments: Vec<Segment> =
                    self.drawn.iter().filter(|s| members.contains(&s.a())).copied().collect();
                let mut vertices: Vec<LatticePoint> = members.iter().copied().collect();
                vertices.sort();
                holes[i].push(HoleComponent { vertices, segments });
                hole_area[i] += -walk_twice_signed_area(walk);
            }
        }
        let mut unused: Vec<Vec<LatticePoint>> = vec![Vec::new(); bounded.len()];
        for p in self.board.dots() {
            if self.degree(p) == 0 {
                if let Some(i) = innermost(p, &|_| false) {
                    unused[i].push(p);
                }
            }
        }
        let mut faces: Vec<Face> = bounded
            .into_iter()
            .enumerate()
            .map(|(i, walk)| {
                let simple = walk_is_simple(&walk);
                let mut hs = std::mem::take(&mut holes[i]);
                hs.sort_by(|a, b| a.vertices.cmp(&b.vertices));
                Face {
                    area: HalfArea::from_halves((areas[i] - hole_area[i]) as u64),
                    walk: canonical_rotation(walk),
                    simple,
                    holes: hs,
                    interior_unused: std::mem::take(&mut unused[i]),
                }
            })
            .collect();
        faces.sort_by(|a, b| a.walk.cmp(&b.walk));
        faces
    }

    /// Bounded faces that have not been claimed.
    pub fn unclaimed_faces(&self) -> Vec<Face> {
        let claimed: BTreeSet<&Vec<LatticePoint>> = self.claims.iter().map(|c| &c.face.walk).collect();
        self.faces().into_iter().filter(|f| !claimed.contains(&f.walk)).collect()
    }

    /// Area of the board not enclosed by any drawn cycle.
    ///
    /// Computed from the outer boundaries of connected components that sit
    /// in no bounded face, so it does not depend on the face areas.
    pub fn open_area(&self) -> HalfArea {
        let mut seen: BTreeSet<(LatticePoint, LatticePoint)> = BTreeSet::new();
        let mut bounded: Vec<Vec<LatticePoint>> = Vec::new();
        let mut outer_walks: Vec<Vec<LatticePoint>> = Vec::new();
        for s in &self.drawn {
            for (u, v) in [(s.a(), s.b()), (s.b(), s.a())] {
                if seen.contains(&(u, v)) {
                    continue;
                }
                let walk = self.trace(u, v);
                let n = walk.len();
                for i in 0..n {
                    seen.insert((walk[i], walk[(i + 1) % n]));
                }
                if walk_twice_signed_area(&walk) > 0 {
                    bounded.push(walk);
                } else {
                    outer_walks.push(walk);
                }
            }
        }
        let mut enclosed = 0i64;
        for walk in &outer_walks {
            let members: BTreeSet<LatticePoint> = walk.iter().copied().collect();
            let nested = bounded
                .iter()
                .any(|b| !b.iter().any(|q| members.contains(q)) && winding_number(walk[0], b) != 0);
            if !nested {
                enclosed += -walk_twice_signed_area(walk);
            }
        }
        self.board.area() - HalfArea::from_halves(enclosed as u64)
    }

    /// Claims made so far, in order.
    pub fn claim_list(&self) -> Vec<Claim> {
        self.claims.iter().map(|c| (**c).clone()).collect()
    }
}

fn delta(from: LatticePoint, to: LatticePoint) -> (i64, i64) {
    ((to.x - from.x) as i64, (to.y - from.y) as i64)
}

/// Orders directions counterclockwise starting from the positive x-axis.
fn direction_cmp(d1: (i64, i64), d2: (i64, i64)) -> Ordering {
    let half = |d: (i64, i64)| if d.1 > 0 || (d.1 == 0 && d.0 > 0) { 0 } else { 1 };
    half(d1).cmp(&half(d2)).then_with(|| {
        let cross = d1.0 * d2.1 - d1.1 * d2.0;
        0.cmp(&cross)
    })
}

fn walk_uses(walk: &[LatticePoint], from: LatticePoint, to: LatticePoint) -> bool {
    let n = walk.len();
    (0..n).any(|i| walk[i] == from && walk[(i + 1) % n] == to)
}

fn walk_is_simple(walk: &[LatticePoint]) -> bool {
    let set: BTreeSet<LatticePoint> = walk.iter().copied().collect();
    set.len() == walk.len()
}

fn walk_bbox(walk: &[LatticePoint]) -> (LatticePoint, LatticePoint) {
    let min_x = walk.iter().map(|p| p.x).min().unwrap();
    let max_x = walk.iter().map(|p| p.x).max().unwrap();
    let min_y = walk.iter().map(|p| p.y).min().unwrap();
    let max_y = walk.iter().map(|p| p.y).max().unwrap();
    (LatticePoint::new(min_x, min_y), LatticePoint::new(max_x, max_y))
}

/// Rotates a closed walk to its lexicographically least starting point.
pub fn canonical_rotation(walk: Vec<LatticePoint>) -> Vec<LatticePoint> {
    let n = walk.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            let a = walk[i..].iter().chain(&walk[..i]);
            let b = walk[j..].iter().chain(&walk[..j]);
            a.cmp(b)
        })
        .unwrap_or(0);
    walk[best..].iter().chain(&walk[..best]).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board(w: u32, h: u32) -> BoardSpec {
        BoardSpec::new(w, h).unwrap()
    }

    fn seg(a: (i32, i32), b: (i32, i32)) -> Segment {
        Segment::of(a, b)
    }

    #[test]
    fn new_game_examples() {
        let g = GameState::new(board(3, 3), Variant::Triangles);
        assert_eq!(g.accounting().dots, 9);
        assert_eq!(g.accounting().turns, 0);
        assert_eq!(g.to_move(), Player::First);
        assert_eq!(GameState::new(board(2, 2), Variant::Polygons).board().area(), HalfArea::from_units(1));
        assert_eq!(GameState::new(board(5, 5), Variant::Triangles).accounting().dots, 25);
        assert!(BoardSpec::new(1, 3).is_err());
        assert!(BoardSpec::new(3, 1).is_err());
    }

    // Oracle: all dot pairs whose segment contains no third dot.
    fn brute_primitive_pairs(w: i32, h: i32) -> usize {
        let dots: Vec<(i32, i32)> = (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect();
        let mut n = 0;
        for i in 0..dots.len() {
            for j in i + 1..dots.len() {
                let s = seg(dots[i], dots[j]);
                let blocked = dots.iter().any(|&d| s.contains_strictly(d.into()));
                if !blocked {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn legal_move_counts_on_fresh_boards() {
        assert_eq!(brute_primitive_pairs(2, 2), 6);
        assert_eq!(GameState::new(board(2, 2), Variant::Triangles).legal_moves().len(), 6);
        assert_eq!(brute_primitive_pairs(3, 3), 28);
        assert_eq!(GameState::new(board(3, 3), Variant::Triangles).legal_moves().len(), 28);
    }

    #[test]
    fn crossing_diagonal_becomes_illegal() {
        let mut g = GameState::new(board(2, 2), Variant::Triangles);
        g.apply_move(seg((0, 0), (1, 1))).unwrap();
        assert!(!g.legal_moves().contains(&seg((0, 1), (1, 0))));
        assert_eq!(g.apply_move(seg((0, 1), (1, 0))), Err(IllegalMove::Conflict));
    }

    #[test]
    fn rejection_reasons() {
        let mut g = GameState::new(board(3, 3), Variant::Triangles);
        assert_eq!(g.apply_move(seg((0, 0), (2, 2))), Err(IllegalMove::NonPrimitive));
        assert_eq!(g.apply_move(seg((0, 0), (3, 1))), Err(IllegalMove::OutOfBoard));
        g.apply_move(seg((0, 0), (1, 0))).unwrap();
        assert_eq!(g.apply_move(seg((1, 0), (0, 0))), Err(IllegalMove::Duplicate));
        assert_eq!(IllegalMove::InsideClaimedRegion.token(), "inside-claimed-region");
    }

    #[test]
    fn minimal_triangle_claim_grants_extra_turn() {
        let mut g = GameState::new(board(2, 2), Variant::Triangles);
        g.apply_move(seg((0, 0), (1, 0))).unwrap();
        g.apply_move(seg((0, 0), (1, 1))).unwrap();
        let mover = g.to_move();
        let out = g.apply_move(seg((1, 0), (1, 1))).unwrap();
        assert_eq!(out.claimed_area(), HalfArea::from_halves(1));
        assert!(out.extra_turn);
        assert!(!out.doublecross);
        assert_eq!(out.next_player, mover);
    }

    #[test]
    fn splitting_a_triangle_through_its_edge_point_is_a_doublecross() {
        // Triangle (0,0),(2,1),(0,1); the top edge passes through (1,1).
        let mut g = GameState::new(board(3, 2), Variant::Triangles);
        for s in [seg((0, 0), (2, 1)), seg((0, 1), (1, 1)), seg((1, 1), (2, 1)), seg((0, 0), (0, 1))] {
            g.apply_move(s).unwrap();
        }
        assert_eq!(g.claim_count(), 0);
        let out = g.apply_move(seg((0, 0), (1, 1))).unwrap();
        assert_eq!(out.claimed.len(), 2);
        assert!(out.doublecross);
        assert!(out.extra_turn);
        assert_eq!(out.claimed_area(), HalfArea::from_units(1));
        assert_eq!(g.accounting().doublecrosses, 1);
    }

    #[test]
    fn polygon_octagon_closed_in_one_move() {
        let octagon = LatticeCycle::from_coords(&[(0, 0), (1, 1), (0, 1), (1, 2), (0, 3), (2, 2), (3, 3), (2, 0)])
            .unwrap();
        let mut pieces = octagon.primitive_segments();
        let last = pieces.pop().unwrap();
        let mut g = GameState::new(board(4, 4), Variant::Polygons);
        for s in pieces {
            let out = g.apply_move(s).unwrap();
            assert!(!out.claims_anything());
        }
        let out = g.apply_move(last).unwrap();
        assert_eq!(out.claimed.len(), 1);
        assert_eq!(out.claimed_area(), HalfArea::from_halves(9));
    }

    #[test]
    fn faces_examples() {
        let mut g = GameState::new(board(3, 3), Variant::Polygons);
        assert!(g.faces().is_empty());
        for s in [seg((0, 0), (1, 0)), seg((1, 0), (1, 1)), seg((1, 1), (0, 1))] {
            g.apply_move(s).unwrap();
        }
        g.apply_move(seg((0, 1), (0, 0))).unwrap();
        let faces = g.faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].area, HalfArea::from_units(1));
        assert_eq!(faces[0].walk[0], LatticePoint::new(0, 0));
    }

    #[test]
    fn eye_face_has_one_hole() {
        let outer = LatticeCycle::from_coords(&[(1, 0), (4, 2), (2, 3), (0, 2)]).unwrap();
        let iris = LatticeCycle::from_coords(&[(1, 1), (1, 2), (3, 2), (2, 1)]).unwrap();
        let mut segs = outer.primitive_segments();
        segs.extend(iris.primitive_segments());
        let g = GameState::from_position(board(5, 4), Variant::Polygons, &segs, &[], Player::First).unwrap();
        let faces = g.faces();
        assert_eq!(faces.len(), 2);
        let big = faces.iter().find(|f| f.area > HalfArea::from_units(2)).unwrap();
        assert_eq!(big.holes.len(), 1);
        assert_eq!(big.holes[0].vertices.len(), 5);
        let outer_area = outer.twice_area();
        let iris_area = iris.twice_area();
        assert_eq!(big.area.halves(), outer_area - iris_area);
    }

    #[test]
    fn pendant_edge_makes_walk_non_simple() {
        let square = LatticeCycle::from_coords(&[(0, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
        let mut segs = square.primitive_segments();
        segs.push(seg((0, 0), (1, 1)));
        let g = GameState::from_position(board(3, 3), Variant::Polygons, &segs, &[], Player::First).unwrap();
        let faces = g.faces();
        assert_eq!(faces.len(), 1);
        assert!(!faces[0].simple);
        assert!(faces[0].holes.is_empty());
        assert!(!faces[0].is_claimable(Variant::Polygons));
    }

    #[test]
    fn moves_inside_claimed_polygon_are_illegal() {
        let mut g = GameState::new(board(3, 3), Variant::Polygons);
        let square = LatticeCycle::from_coords(&[(0, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
        let segs = square.primitive_segments();
        for s in &segs {
            g.apply_move(*s).unwrap();
        }
        assert_eq!(g.claimed_area(), HalfArea::from_units(4));
        assert!(g.is_over());
        assert_eq!(g.accounting().unused_dots, 1);
        let fresh = GameState::from_position(board(4, 4), Variant::Polygons, &segs, &[(square.clone(), Player::First)], Player::First)
            .unwrap();
        assert_eq!(fresh.check_move(seg((0, 0), (1, 1))), Err(IllegalMove::InsideClaimedRegion));
        assert_eq!(fresh.check_move(seg((1, 1), (1, 2))), Err(IllegalMove::InsideClaimedRegion));
        assert!(fresh.is_legal(seg((2, 2), (3, 3))));
    }

    #[test]
    fn scores_track_claims() {
        let mut g = GameState::new(board(2, 2), Variant::Triangles);
        assert_eq!(g.scores(), (HalfArea::ZERO, HalfArea::ZERO));
        g.apply_move(seg((0, 0), (1, 0))).unwrap();
        g.apply_move(seg((0, 0), (1, 1))).unwrap();
        g.set_to_move(Player::First);
        g.apply_move(seg((1, 0), (1, 1))).unwrap();
        assert_eq!(g.scores(), (HalfArea::from_halves(1), HalfArea::ZERO));
    }

    #[test]
    fn full_2x2_game_ends_with_all_area_claimed() {
        let mut g = GameState::new(board(2, 2), Variant::Triangles);
        assert!(!g.is_over());
        for s in [seg((0, 0), (1, 0)), seg((1, 0), (1, 1)), seg((1, 1), (0, 1)), seg((0, 1), (0, 0))] {
            g.apply_move(s).unwrap();
        }
        let out = g.apply_move(seg((0, 0), (1, 1))).unwrap();
        assert!(out.game_over && out.doublecross && !out.extra_turn);
        assert!(g.is_over());
        assert!(g.legal_moves().is_empty());
        assert_eq!(g.claimed_area(), HalfArea::from_units(1));
        let acc = g.accounting();
        assert_eq!(acc.turns, acc.dots + acc.doublecrosses);
    }

    #[test]
    fn direction_order_is_counterclockwise() {
        let dirs = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
        for w in dirs.windows(2) {
            assert_eq!(direction_cmp(w[0], w[1]), Ordering::Less);
        }
    }
}
