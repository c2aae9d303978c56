//! Move choosers and an exact solver.
//!
//! Values are area differentials in half units from the point of view of
//! the player to move, counting only area claimed from the given position
//! onward. A claiming move keeps the mover, so its child is searched from
//! the same side instead of being negated.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{BoardSpec, GameState, Player, Variant};
use crate::geometry::{on_walk, winding_number, HalfArea, LatticeCycle, LatticePoint, Segment, Symmetry};
use crate::shapes::{one_turn_claim, region_candidates, region_moves};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrategyId {
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "greedy")]
    GreedyChild,
    #[serde(rename = "double-dealer")]
    DoubleDealer,
    #[serde(rename = "nested-diamond")]
    NestedDiamondSecond,
    #[serde(rename = "exact")]
    Exact,
}

impl StrategyId {
    pub const ALL: [StrategyId; 5] = [
        StrategyId::Random,
        StrategyId::GreedyChild,
        StrategyId::DoubleDealer,
        StrategyId::NestedDiamondSecond,
        StrategyId::Exact,
    ];

    pub fn token(self) -> &'static str {
        match self {
            StrategyId::Random => "random",
            StrategyId::GreedyChild => "greedy",
            StrategyId::DoubleDealer => "double-dealer",
            StrategyId::NestedDiamondSecond => "nested-diamond",
            StrategyId::Exact => "exact",
        }
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl std::str::FromStr for StrategyId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.token() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected random, greedy, double-dealer, nested-diamond or exact)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("the game is over")]
    GameOver,
    #[error("the nested diamond does not fit the board")]
    DiamondDoesNotFit,
}

/// Node budget used when the exact strategy picks a move.
pub const EXACT_STRATEGY_BUDGET: u64 = 200_000;

/// Picks a move for the player to move. Deterministic in `(state, seed)`.
pub fn choose_move(id: StrategyId, state: &GameState, seed: u64) -> Result<Segment, StrategyError> {
    let moves = state.legal_moves();
    if moves.is_empty() {
        return Err(StrategyError::GameOver);
    }
    Ok(match id {
        StrategyId::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            *moves.choose(&mut rng).unwrap()
        }
        StrategyId::GreedyChild => greedy_move(state, &moves),
        StrategyId::DoubleDealer => double_dealer_move(state, &moves),
        StrategyId::NestedDiamondSecond => nested_diamond_move(state).unwrap_or_else(|| greedy_move(state, &moves)),
        StrategyId::Exact => {
            let result = solve(state, EXACT_STRATEGY_BUDGET);
            match result.principal_variation.first() {
                Some(m) if result.complete => *m,
                _ => greedy_move(state, &moves),
            }
        }
    })
}

/// Legal moves that claim, with their immediate gain.
pub fn claiming_moves(state: &GameState, moves: &[Segment]) -> Vec<(Segment, HalfArea)> {
    moves
        .iter()
        .filter_map(|&s| {
            let (_, out) = state.after(s).ok()?;
            out.claims_anything().then(|| (s, out.claimed_area()))
        })
        .collect()
}

/// The most area the player to move can claim before the turn passes.
/// Exhaustive over claiming moves, memoised on the drawn segment set.
pub fn max_turn_gain(state: &GameState) -> HalfArea {
    fn go(state: &GameState, memo: &mut HashMap<Vec<Segment>, u64>) -> u64 {
        let key: Vec<Segment> = state.drawn().iter().copied().collect();
        if let Some(v) = memo.get(&key) {
            return *v;
        }
        let mut best = 0;
        for s in state.legal_moves() {
            let (child, out) = state.after(s).expect("legal");
            if out.claims_anything() {
                best = best.max(out.claimed_area().halves() + go(&child, memo));
            }
        }
        memo.insert(key, best);
        best
    }
    HalfArea::from_halves(go(state, &mut HashMap::new()))
}

/// Claim the largest immediate gain when possible; otherwise play the move
/// that lets the opponent claim the least in their next turn. Ties go to
/// the lexicographically least segment.
fn greedy_move(state: &GameState, moves: &[Segment]) -> Segment {
    let claims = claiming_moves(state, moves);
    if let Some(&(s, _)) = claims.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))) {
        return s;
    }
    let mut best: Option<(HalfArea, Segment)> = None;
    for &s in moves {
        let (child, _) = state.after(s).expect("legal");
        let cede = max_turn_gain(&child);
        if best.is_none_or(|(c, _)| cede < c) {
            best = Some((cede, s));
        }
    }
    best.unwrap().1
}

/// Greedy play, except that while claims are available it looks for a
/// double-dealing move and plays it when the area ceded is smaller than
/// what remains outside the ceded region.
fn double_dealer_move(state: &GameState, moves: &[Segment]) -> Segment {
    if !claiming_moves(state, moves).is_empty() {
        let mut best: Option<(HalfArea, Segment)> = None;
        for &s in moves {
            if let Some(ceded) = double_deal_cession(state, s) {
                let rest = state.unclaimed_area() - ceded;
                if ceded < rest && best.is_none_or(|(c, _)| ceded < c) {
                    best = Some((ceded, s));
                }
            }
        }
        if let Some((_, s)) = best {
            return s;
        }
    }
    greedy_move(state, moves)
}

/// Candidate segments lying in or on a closed walk, which may revisit
/// vertices.
fn walk_candidates(walk: &[LatticePoint], board: BoardSpec) -> Vec<Segment> {
    let doubled: Vec<LatticePoint> = walk.iter().map(|p| p.doubled()).collect();
    let inside = |p: LatticePoint| on_walk(p, &doubled) || winding_number(p, &doubled) != 0;
    let min_x = walk.iter().map(|p| p.x).min().unwrap();
    let max_x = walk.iter().map(|p| p.x).max().unwrap();
    let min_y = walk.iter().map(|p| p.y).min().unwrap();
    let max_y = walk.iter().map(|p| p.y).max().unwrap();
    let pts: Vec<LatticePoint> = (min_y..=max_y)
        .flat_map(|y| (min_x..=max_x).map(move |x| LatticePoint::new(x, y)))
        .filter(|p| board.contains(*p) && inside(p.doubled()))
        .collect();
    let mut out = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let s = Segment::new(p, q).unwrap();
            if crate::geometry::is_primitive(&s) && inside(s.doubled_midpoint()) {
                out.push(s);
            }
        }
    }
    out.sort();
    out
}

/// If `s` is a double-dealing move, the area it cedes.
///
/// `s` qualifies when it claims nothing and, for the unclaimed face `R`
/// next to it afterwards:
/// * before `s`, the mover could have claimed all of `R` in one turn;
/// * after `s`, the opponent can claim all of `R` in one turn;
/// * having done so, the opponent has no claiming move left and the game
///   goes on, so the opponent must give the turn back.
pub fn double_deal_cession(state: &GameState, s: Segment) -> Option<HalfArea> {
    let (after, out) = state.after(s).ok()?;
    if out.claims_anything() || after.is_over() {
        return None;
    }
    let claimed_walks: HashSet<Vec<LatticePoint>> = after.claims().map(|c| c.face.walk.clone()).collect();
    let faces = after.faces();
    for face in &faces {
        if claimed_walks.contains(&face.walk) {
            continue;
        }
        let n = face.walk.len();
        let uses_s = (0..n).any(|i| Segment::new(face.walk[i], face.walk[(i + 1) % n]).ok() == Some(s));
        if !uses_s {
            continue;
        }
        let hole_vertices: HashSet<LatticePoint> =
            face.holes.iter().flat_map(|h| h.vertices.iter().copied()).collect();
        let nested: HalfArea = faces
            .iter()
            .filter(|f| !claimed_walks.contains(&f.walk) && f.walk.iter().all(|p| hole_vertices.contains(p)))
            .map(|f| f.area)
            .sum();
        let region_area = face.area + nested;
        let candidates = walk_candidates(&face.walk, state.board());
        if one_turn_claim(state, &candidates, state.claimed_area() + region_area).is_none() {
            continue;
        }
        let Some((_, end)) = one_turn_claim(&after, &candidates, after.claimed_area() + region_area) else {
            continue;
        };
        if end.is_over() {
            continue;
        }
        let end_moves = end.legal_moves();
        if claiming_moves(&end, &end_moves).is_empty() {
            return Some(region_area);
        }
    }
    None
}

pub fn is_double_dealing(state: &GameState, s: Segment) -> bool {
    double_deal_cession(state, s).is_some()
}

/// Exact search result. `value` is in half units for the player to move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: i64,
    pub principal_variation: Vec<Segment>,
    pub nodes_visited: u64,
    /// False when the node budget ran out; `value` is then only the best
    /// line found so far.
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub node_budget: u64,
    /// Merge positions equivalent under the lattice symmetries that map
    /// the board (and the region, if any) onto itself.
    pub symmetry: bool,
    /// Visit moves in reverse lexicographic order (claiming moves still
    /// first). Used to cross-check the search.
    pub reverse_order: bool,
    /// Search root moves on this many threads; results do not depend on it.
    pub threads: usize,
    /// Restrict play to segments inside this cycle.
    pub region: Option<LatticeCycle>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { node_budget: 5_000_000, symmetry: true, reverse_order: false, threads: 1, region: None }
    }
}

pub fn solve(state: &GameState, node_budget: u64) -> SolveResult {
    solve_with(state, &SolveOptions { node_budget, ..SolveOptions::default() })
}

struct Aborted;

#[derive(Clone, Copy)]
struct Bounds {
    lower: i64,
    upper: i64,
}

struct Solver {
    candidates: Vec<Segment>,
    index: HashMap<Segment, usize>,
    /// For each usable symmetry, the image index of every candidate.
    perms: Vec<Vec<usize>>,
    table: HashMap<Vec<u64>, Bounds>,
    nodes: u64,
    budget: u64,
    reverse: bool,
}

const INF: i64 = i64::MAX / 4;

impl Solver {
    fn new(state: &GameState, opts: &SolveOptions) -> Solver {
        let board = state.board();
        let candidates = match &opts.region {
            Some(c) => region_candidates(c, board, false),
            None => board.primitive_segments(),
        };
        let index: HashMap<Segment, usize> = candidates.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut perms = Vec::new();
        if opts.symmetry {
            // Drawn segments outside the candidate set must map onto drawn
            // segments as well, or the symmetry does not fix the position.
            let outside: HashSet<Segment> = state.drawn().iter().filter(|s| !index.contains_key(s)).copied().collect();
            for sym in Symmetry::all().skip(1) {
                let fixes_outside = outside.iter().all(|s| {
                    Segment::new(map_point(sym, board, s.a()), map_point(sym, board, s.b()))
                        .map(|t| outside.contains(&t))
                        .unwrap_or(false)
                });
                if !fixes_outside {
                    continue;
                }
                if let Some(p) = symmetry_perm(sym, board, opts.region.as_ref(), &candidates, &index) {
                    perms.push(p);
                }
            }
        }
        Solver { candidates, index, perms, table: HashMap::new(), nodes: 0, budget: opts.node_budget, reverse: opts.reverse_order }
    }

    fn key(&self, state: &GameState) -> Vec<u64> {
        let words = self.candidates.len().div_ceil(64).max(1);
        let mut base = vec![0u64; words];
        let mut set = Vec::new();
        for s in state.drawn() {
            if let Some(&i) = self.index.get(s) {
                base[i / 64] |= 1 << (i % 64);
                set.push(i);
            }
        }
        let mut best = base;
        for perm in &self.perms {
            let mut k = vec![0u64; words];
            for &i in &set {
                let j = perm[i];
                k[j / 64] |= 1 << (j % 64);
            }
            if k < best {
                best = k;
            }
        }
        best
    }

    fn ordered_children(&self, state: &GameState) -> Vec<(Segment, GameState, i64)> {
        let mut moves = region_moves(state, &self.candidates);
        if self.reverse {
            moves.reverse();
        }
        let mut children: Vec<(Segment, GameState, i64)> = moves
            .into_iter()
            .map(|s| {
                let (child, out) = state.after(s).expect("legal");
                (s, child, out.claimed_area().halves() as i64)
            })
            .collect();
        children.sort_by_key(|(_, _, gain)| std::cmp::Reverse(*gain > 0));
        children
    }

    fn negamax(&mut self, state: &GameState, mut alpha: i64, mut beta: i64) -> Result<i64, Aborted> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Aborted);
        }
        let key = self.key(state);
        let (alpha0, beta0) = (alpha, beta);
        if let Some(b) = self.table.get(&key) {
            if b.lower == b.upper || b.lower >= beta {
                return Ok(b.lower);
            }
            if b.upper <= alpha {
                return Ok(b.upper);
            }
            alpha = alpha.max(b.lower);
            beta = beta.min(b.upper);
        }
        let children = self.ordered_children(state);
        if children.is_empty() {
            self.table.insert(key, Bounds { lower: 0, upper: 0 });
            return Ok(0);
        }
        let mut best = -INF;
        for (_, child, gain) in children {
            let v = if gain > 0 {
                gain + self.negamax(&child, alpha - gain, beta - gain)?
            } else {
                -self.negamax(&child, -beta, -alpha)?
            };
            best = best.max(v);
            alpha = alpha.max(v);
            if alpha >= beta {
                break;
            }
        }
        let entry = self.table.entry(key).or_insert(Bounds { lower: -INF, upper: INF });
        if best <= alpha0 {
            entry.upper = entry.upper.min(best);
        } else if best >= beta0 {
            entry.lower = entry.lower.max(best);
        } else {
            entry.lower = best;
            entry.upper = best;
        }
        Ok(best)
    }

    fn exact(&mut self, state: &GameState) -> Result<i64, Aborted> {
        self.negamax(state, -INF, INF)
    }

    /// Follows moves that achieve the known value.
    fn principal_variation(&mut self, state: &GameState, value: i64) -> Result<Vec<Segment>, Aborted> {
        let mut pv = Vec::new();
        let mut state = state.clone();
        let mut value = value;
        loop {
            let children = self.ordered_children(&state);
            if children.is_empty() {
                return Ok(pv);
            }
            let mut next = None;
            for (s, child, gain) in children {
                let sub = self.exact(&child)?;
                let v = if gain > 0 { gain + sub } else { -sub };
                if v == value {
                    next = Some((s, child, if gain > 0 { sub } else { -v }));
                    break;
                }
            }
            let (s, child, child_value) = next.expect("some move achieves the value");
            pv.push(s);
            state = child;
            value = child_value;
        }
    }
}

fn map_point(sym: Symmetry, board: BoardSpec, p: LatticePoint) -> LatticePoint {
    let (w, h) = (board.width() as i32 - 1, board.height() as i32 - 1);
    let corners = [LatticePoint::new(0, 0), LatticePoint::new(w, h)].map(|c| sym.apply(c));
    let dx = -corners[0].x.min(corners[1].x);
    let dy = -corners[0].y.min(corners[1].y);
    sym.apply(p).translate(dx, dy)
}

fn symmetry_perm(
    sym: Symmetry,
    board: BoardSpec,
    region: Option<&LatticeCycle>,
    candidates: &[Segment],
    index: &HashMap<Segment, usize>,
) -> Option<Vec<usize>> {
    if sym.swaps_axes() && board.width() != board.height() {
        return None;
    }
    if let Some(c) = region {
        let pts: HashSet<LatticePoint> = c.boundary_points().into_iter().collect();
        if !pts.iter().all(|p| pts.contains(&map_point(sym, board, *p))) {
            return None;
        }
    }
    candidates
        .iter()
        .map(|s| {
            let t = Segment::new(map_point(sym, board, s.a()), map_point(sym, board, s.b())).ok()?;
            index.get(&t).copied()
        })
        .collect()
}

pub fn solve_with(state: &GameState, opts: &SolveOptions) -> SolveResult {
    if opts.threads <= 1 {
        let mut solver = Solver::new(state, opts);
        return match solver.exact(state) {
            Ok(value) => {
                let pv = solver.principal_variation(state, value).unwrap_or_default();
                SolveResult { value, principal_variation: pv, nodes_visited: solver.nodes, complete: true }
            }
            Err(Aborted) => {
                SolveResult { value: 0, principal_variation: Vec::new(), nodes_visited: solver.nodes, complete: false }
            }
        };
    }
    // Each root move gets its own solver and table; the merge takes the
    // best value and the earliest move in search order on ties.
    let probe = Solver::new(state, opts);
    let children = probe.ordered_children(state);
    if children.is_empty() {
        return SolveResult { value: 0, principal_variation: Vec::new(), nodes_visited: 1, complete: true };
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build().expect("thread pool");
    let results: Vec<(Segment, i64, Vec<Segment>, u64, bool)> = pool.install(|| {
        children
            .par_iter()
            .map(|(s, child, gain)| {
                let mut solver = Solver::new(child, opts);
                match solver.exact(child) {
                    Ok(sub) => {
                        let pv = solver.principal_variation(child, sub).unwrap_or_default();
                        let v = if *gain > 0 { gain + sub } else { -sub };
                        (*s, v, pv, solver.nodes, true)
                    }
                    Err(Aborted) => (*s, -INF, Vec::new(), solver.nodes, false),
                }
            })
            .collect()
    });
    let nodes = results.iter().map(|r| r.3).sum::<u64>() + 1;
    let complete = results.iter().all(|r| r.4);
    let best = results.iter().max_by(|a, b| a.1.cmp(&b.1).then(std::cmp::Ordering::Greater)).unwrap();
    let (s, value, tail) = (best.0, best.1, best.2.clone());
    let mut pv = vec![s];
    pv.extend(tail);
    SolveResult { value: if complete { value } else { 0 }, principal_variation: if complete { pv } else { Vec::new() }, nodes_visited: nodes, complete }
}

/// `n` concentric diamonds (squares rotated by 45 degrees) around `center`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedDiamondSpec {
    pub n: u32,
    pub center: LatticePoint,
}

impl NestedDiamondSpec {
    /// `n` nested diamonds centred on the smallest board that holds them.
    pub fn centered(n: u32) -> NestedDiamondSpec {
        NestedDiamondSpec { n, center: LatticePoint::new(n as i32, n as i32) }
    }

    pub fn board(&self) -> BoardSpec {
        let side = 2 * self.n + 1;
        BoardSpec::new(side, side).expect("n >= 1")
    }

    pub fn fits(&self, board: BoardSpec) -> bool {
        let k = self.n as i32;
        self.n >= 1
            && [(-k, 0), (k, 0), (0, -k), (0, k)]
                .iter()
                .all(|&(dx, dy)| board.contains(self.center.translate(dx, dy)))
    }

    /// Layer `k`, counting from 1 at the centre.
    pub fn layer(&self, k: u32) -> LatticeCycle {
        let k = k as i32;
        let c = self.center;
        LatticeCycle::new(vec![c.translate(k, 0), c.translate(0, k), c.translate(-k, 0), c.translate(0, -k)])
            .expect("diamond")
    }

    /// Area between layer `k` and layer `k - 1`.
    pub fn layer_area(&self, k: u32) -> HalfArea {
        let k = k as u64;
        HalfArea::from_units(2 * k * k - 2 * (k - 1) * (k - 1))
    }

    pub fn total_area(&self) -> HalfArea {
        HalfArea::from_units(2 * self.n as u64 * self.n as u64)
    }

    fn dist(&self, p: LatticePoint) -> u32 {
        ((p.x - self.center.x).abs() + (p.y - self.center.y).abs()) as u32
    }

    /// The layer a segment or claimed walk lies in.
    fn layer_of(&self, points: &[LatticePoint]) -> u32 {
        points.iter().map(|p| self.dist(*p)).max().unwrap_or(0)
    }

    /// All layer boundaries drawn, nothing claimed, the first player to move.
    pub fn setup(&self, board: BoardSpec, variant: Variant) -> Result<GameState, StrategyError> {
        if !self.fits(board) {
            return Err(StrategyError::DiamondDoesNotFit);
        }
        let segments: Vec<Segment> = (1..=self.n).flat_map(|k| self.layer(k).primitive_segments()).collect();
        GameState::from_position(board, variant, &segments, &[], Player::First).map_err(|_| StrategyError::DiamondDoesNotFit)
    }

    /// Segments inside the outermost layer.
    pub fn candidates(&self, board: BoardSpec) -> Vec<Segment> {
        region_candidates(&self.layer(self.n), board, false)
    }

    pub fn layer_candidates(&self, board: BoardSpec, k: u32) -> Vec<Segment> {
        self.candidates(board).into_iter().filter(|s| self.layer_of(&[s.a(), s.b()]) == k).collect()
    }

    pub fn unclaimed_in_layer(&self, state: &GameState, k: u32) -> HalfArea {
        let claimed: HalfArea =
            state.claims().filter(|c| self.layer_of(&c.face.walk) == k).map(|c| c.area()).sum();
        self.layer_area(k) - claimed
    }

    /// The innermost layer that still has unclaimed area.
    pub fn open_layer(&self, state: &GameState) -> Option<u32> {
        (1..=self.n).find(|&k| self.unclaimed_in_layer(state, k) > HalfArea::ZERO)
    }

    /// Claimed area per player inside the diamond.
    pub fn scores(&self, state: &GameState) -> (HalfArea, HalfArea) {
        let mut first = HalfArea::ZERO;
        let mut second = HalfArea::ZERO;
        for c in state.claims() {
            if self.layer_of(&c.face.walk) <= self.n {
                match c.player {
                    Player::First => first += c.area(),
                    Player::Second => second += c.area(),
                }
            }
        }
        (first, second)
    }
}

/// The second player's move inside a nested diamond: take every remaining
/// area of the outermost layer, and in every other layer claim all but two
/// units, then hand the last two back with a move that lets the opponent
/// close them and forces the opponent to open the next layer.
pub fn nested_diamond_second_move(spec: &NestedDiamondSpec, state: &GameState) -> Option<Segment> {
    let k = spec.open_layer(state)?;
    let board = state.board();
    let layer_moves = spec.layer_candidates(board, k);
    if k == spec.n {
        let target = state.claimed_area() + spec.unclaimed_in_layer(state, k);
        return one_turn_claim(state, &layer_moves, target).and_then(|(seq, _)| seq.first().copied());
    }
    double_deal_plan(spec, state, k, &layer_moves, &mut HashSet::new()).and_then(|p| p.first().copied())
}

fn double_deal_plan(
    spec: &NestedDiamondSpec,
    state: &GameState,
    k: u32,
    layer_moves: &[Segment],
    failed: &mut HashSet<Vec<Segment>>,
) -> Option<Vec<Segment>> {
    let remaining = spec.unclaimed_in_layer(state, k);
    let two = HalfArea::from_units(2);
    let key: Vec<Segment> = state.drawn().iter().copied().collect();
    if failed.contains(&key) {
        return None;
    }
    for s in region_moves(state, layer_moves) {
        let (child, out) = state.after(s).expect("legal");
        if remaining == two && !out.claims_anything() {
            let target = child.claimed_area() + two;
            if let Some((_, end)) = one_turn_claim(&child, layer_moves, target) {
                if claiming_moves(&end, &end.legal_moves()).is_empty() {
                    return Some(vec![s]);
                }
            }
        } else if remaining > two && out.claims_anything() && spec.unclaimed_in_layer(&child, k) >= two {
            if let Some(mut rest) = double_deal_plan(spec, &child, k, layer_moves, failed) {
                rest.insert(0, s);
                return Some(rest);
            }
        }
    }
    failed.insert(key);
    None
}

/// The first player's policy in the nested diamond: claim whenever
/// possible, otherwise move in the innermost layer with unclaimed area.
pub fn nested_diamond_first_move(spec: &NestedDiamondSpec, state: &GameState) -> Option<Segment> {
    let board = state.board();
    let moves = region_moves(state, &spec.candidates(board));
    if let Some(&(s, _)) = claiming_moves(state, &moves).first() {
        return Some(s);
    }
    let k = spec.open_layer(state)?;
    region_moves(state, &spec.layer_candidates(board, k)).first().copied()
}

/// Infers a nested diamond centred on a square board of odd side whose
/// layers are all drawn.
fn infer_diamond(state: &GameState) -> Option<NestedDiamondSpec> {
    let board = state.board();
    if board.width() != board.height() || board.width().is_multiple_of(2) {
        return None;
    }
    let spec = NestedDiamondSpec::centered((board.width() - 1) / 2);
    let drawn = (1..=spec.n).all(|k| spec.layer(k).primitive_segments().iter().all(|s| state.is_drawn(s)));
    drawn.then_some(spec)
}

fn nested_diamond_move(state: &GameState) -> Option<Segment> {
    let spec = infer_diamond(state)?;
    let s = nested_diamond_second_move(&spec, state)?;
    state.is_legal(s).then_some(s)
}

/// Plays the nested diamond subgame to the end with the scripted policies
/// and returns the areas `(first, second)`.
pub fn nested_diamond_playout(spec: &NestedDiamondSpec, variant: Variant) -> Result<(HalfArea, HalfArea), StrategyError> {
    let board = spec.board();
    let mut state = spec.setup(board, variant)?;
    let candidates = spec.candidates(board);
    while !region_moves(&state, &candidates).is_empty() && spec.open_layer(&state).is_some() {
        let s = match state.to_move() {
            Player::First => nested_diamond_first_move(spec, &state),
            Player::Second => nested_diamond_second_move(spec, &state),
        };
        let s = match s {
            Some(s) => s,
            None => greedy_move(&state, &region_moves(&state, &candidates)),
        };
        state.apply_move(s).expect("strategy moves are legal");
    }
    Ok(spec.scores(&state))
}
