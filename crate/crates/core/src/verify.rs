//! Bounded, reproducible checks of the game's theorems.
//!
//! Every check returns a [`TheoremReport`]: how many instances were
//! examined and every instance that disagreed with the expected outcome.
//! Random instances are drawn from a ChaCha stream per instance index, so
//! a report depends only on its parameters, never on thread count.
//! Enumerations are exhaustive inside their bounding box and say nothing
//! outside it.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::engine::{BoardSpec, GameState, Player, Variant};
use crate::fixtures::{self, RegionData};
use crate::geometry::{
    canonical_cycle, gcd, lattice_census, on_walk, orient, pick_area, random_simple_cycle, segments_conflict,
    shoelace_area, winding_number, HalfArea, LatticeCycle, LatticePoint, Location, Segment, Symmetry,
};
use crate::record::GameRecord;
use crate::shapes::{
    claim_all_no_interior, claimed_on_closure, classify_eye, classify_reduction, is_reduced_eye, region_candidates, region_first_moves,
    second_player_eye_reply, single_turn_claim, EyeKind, ReductionClass, Region, RegionGame,
};
use crate::strategy::{
    double_deal_cession, is_double_dealing, nested_diamond_playout, solve_with, NestedDiamondSpec, SolveOptions,
};

/// One instance that did not behave as the theorem says.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub instance: u64,
    pub expected: String,
    pub observed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<GameRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionData>,
}

impl Violation {
    pub fn new(instance: u64, expected: impl Into<String>, observed: impl Into<String>) -> Violation {
        Violation { instance, expected: expected.into(), observed: observed.into(), record: None, region: None }
    }

    fn with_game(mut self, state: &GameState) -> Violation {
        self.record = GameRecord::from_state(state).ok();
        self
    }

    fn with_region(mut self, name: &str, region: &Region) -> Violation {
        self.region = Some(RegionData::from_region(name, region));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub params: serde_json::Value,
    pub checked: u64,
    pub violations: Vec<Violation>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn finish(
        theorem: &str,
        params: serde_json::Value,
        start: Instant,
        checked: u64,
        violations: Vec<Violation>,
        notes: Vec<String>,
    ) -> TheoremReport {
        TheoremReport {
            theorem: theorem.to_string(),
            params,
            checked,
            violations,
            elapsed_ms: start.elapsed().as_millis() as u64,
            notes,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report with its timing zeroed, for comparing two runs.
    pub fn without_timing(&self) -> TheoremReport {
        TheoremReport { elapsed_ms: 0, ..self.clone() }
    }
}

fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A complete game with every move drawn uniformly from the legal ones.
pub fn random_playout(board: BoardSpec, variant: Variant, seed: u64, index: u64) -> GameState {
    let mut rng = instance_rng(seed, index);
    let mut state = GameState::new(board, variant);
    while !state.is_over() {
        let moves = state.legal_moves();
        let s = *moves.choose(&mut rng).expect("an unfinished game has a legal move");
        state.apply_move(s).expect("legal move");
    }
    state
}

// ---------------------------------------------------------------------------
// Turn identity

pub fn verify_turn_identity(variant: Variant, games: u64, board: BoardSpec, seed: u64) -> TheoremReport {
    let start = Instant::now();
    let violations: Vec<Violation> =
        (0..games).into_par_iter().filter_map(|i| turn_identity_violation(variant, board, seed, i)).collect();
    let formula = match variant {
        Variant::Triangles => "T = D + C",
        Variant::Polygons => "T = D + C - I_unused",
    };
    TheoremReport::finish(
        &format!("turn-identity-{}", variant.token()),
        json!({"variant": variant.token(), "games": games, "width": board.width(), "height": board.height(), "seed": seed}),
        start,
        games,
        violations,
        vec![format!("checked {formula} on {games} uniform random games")],
    )
}

/// Recounts turns, doublecrosses and unused dots from the move list alone
/// and compares them with the identity and with the engine's own counters.
fn turn_identity_violation(variant: Variant, board: BoardSpec, seed: u64, index: u64) -> Option<Violation> {
    let game = random_playout(board, variant, seed, index);
    let moves = game.moves();
    let turns = 1 + moves.windows(2).filter(|w| w[0].player != w[1].player).count() as u64;
    let mut replay = GameState::new(board, variant);
    let mut doublecrosses = 0u64;
    for m in moves {
        let out = replay.apply_move(m.segment).expect("replay");
        if out.claimed.len() == 2 {
            doublecrosses += 1;
        }
    }
    let unused = board.dots().filter(|&p| game.degree(p) == 0).count() as u64;
    let dots = board.dot_count();
    let expected = match variant {
        Variant::Triangles => dots + doublecrosses,
        Variant::Polygons => dots + doublecrosses - unused,
    };
    let acc = game.accounting();
    if turns != expected {
        return Some(
            Violation::new(
                index,
                format!("T = {expected} (D={dots}, C={doublecrosses}, I={unused})"),
                format!("T = {turns}"),
            )
            .with_game(&game),
        );
    }
    if acc.turns != turns || acc.doublecrosses != doublecrosses || acc.unused_dots != unused {
        return Some(
            Violation::new(
                index,
                format!("counters T={turns} C={doublecrosses} I={unused}"),
                format!("engine T={} C={} I={}", acc.turns, acc.doublecrosses, acc.unused_dots),
            )
            .with_game(&game),
        );
    }
    None
}

// ---------------------------------------------------------------------------
// Nested diamonds

pub fn verify_nested_diamond(n_max: u32) -> TheoremReport {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    let mut checked = 0;
    for n in 1..=n_max.min(4) {
        checked += 1;
        let spec = NestedDiamondSpec::centered(n);
        let n64 = n as u64;
        let want_first = HalfArea::from_units(2 * (n64 - 1));
        let want_second = HalfArea::from_units(2 * n64 * n64 - 2 * n64 + 2);
        match nested_diamond_playout(&spec, Variant::Triangles) {
            Ok((first, second)) => {
                notes.push(format!("n={n}: playout First {first}, Second {second}"));
                if first != want_first || second != want_second || first + second != spec.total_area() {
                    violations.push(Violation::new(
                        n as u64,
                        format!("playout ({want_first}, {want_second}) totalling {}", spec.total_area()),
                        format!("({first}, {second})"),
                    ));
                }
            }
            Err(e) => violations.push(Violation::new(n as u64, "playout completes", e.to_string())),
        }
        if n <= 2 {
            checked += 1;
            let state = spec.setup(spec.board(), Variant::Triangles).expect("diamond fits its own board");
            let opts =
                SolveOptions { region: Some(spec.layer(n)), node_budget: 50_000_000, ..SolveOptions::default() };
            let r = solve_with(&state, &opts);
            let total = spec.total_area().halves() as i64;
            // value = First - Second with First to move, so Second = (total - value) / 2.
            let second_guaranteed = (total - r.value) / 2;
            notes.push(format!(
                "n={n}: solver value {} halves for First, Second guarantees {} ({} nodes)",
                r.value,
                HalfArea::from_halves(second_guaranteed as u64),
                r.nodes_visited
            ));
            if !r.complete || second_guaranteed < want_second.halves() as i64 {
                violations.push(Violation::new(
                    n as u64,
                    format!("solver: Second guarantees at least {want_second}"),
                    format!("complete={} Second={}", r.complete, HalfArea::from_halves(second_guaranteed.max(0) as u64)),
                ));
            }
        }
    }
    TheoremReport::finish("nested-diamond", json!({"n_max": n_max}), start, checked, violations, notes)
}

// ---------------------------------------------------------------------------
// Convex lattice polygons

fn direction_order(a: (i32, i32), b: (i32, i32)) -> std::cmp::Ordering {
    let half = |d: (i32, i32)| if d.1 > 0 || (d.1 == 0 && d.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i64 * b.1 as i64 - a.1 as i64 * b.0 as i64;
        0.cmp(&cross)
    })
}

fn primitive_directions(side: i32) -> Vec<(i32, i32)> {
    let mut dirs: Vec<(i32, i32)> = (-side..=side)
        .flat_map(|dx| (-side..=side).map(move |dy| (dx, dy)))
        .filter(|&(dx, dy)| (dx, dy) != (0, 0) && gcd(dx as i64, dy as i64) == 1)
        .collect();
    dirs.sort_by(|&a, &b| direction_order(a, b));
    dirs
}

/// Walks every convex lattice polygon whose lowest-leftmost corner is the
/// origin, one primitive boundary step at a time with non-decreasing
/// direction. Each polygon is reached exactly once, as the list of all
/// its boundary lattice points in counterclockwise order.
struct ConvexWalk<'a> {
    dirs: Vec<(i32, i32)>,
    side: i32,
    max_points: usize,
    keep: &'a dyn Fn(&[LatticePoint]) -> bool,
    found: &'a mut dyn FnMut(&[LatticePoint]),
    nodes: u64,
}

impl ConvexWalk<'_> {
    fn run(&mut self) {
        let mut pts = vec![LatticePoint::new(0, 0)];
        self.step(&mut pts, 0, (0, 0, 0, 0));
    }

    fn step(&mut self, pts: &mut Vec<LatticePoint>, from_dir: usize, bbox: (i32, i32, i32, i32)) {
        self.nodes += 1;
        let cur = *pts.last().unwrap();
        for di in from_dir..self.dirs.len() {
            let (dx, dy) = self.dirs[di];
            if pts.len() == 1 && !(dy > 0 || (dy == 0 && dx > 0)) {
                break;
            }
            let q = cur.translate(dx, dy);
            if q == pts[0] {
                if pts.len() >= 3 && crate::geometry::walk_twice_signed_area(pts) > 0 {
                    (self.found)(pts);
                }
                continue;
            }
            if q.y < 0 || (q.y == 0 && q.x < 0) || pts.len() >= self.max_points {
                continue;
            }
            let nb = (bbox.0.min(q.x), bbox.1.max(q.x), bbox.2.min(q.y), bbox.3.max(q.y));
            if nb.1 - nb.0 > self.side || nb.3 - nb.2 > self.side {
                continue;
            }
            pts.push(q);
            if (self.keep)(pts) {
                self.step(pts, di, nb);
            }
            pts.pop();
        }
    }
}

/// Canonical corner list of the polygon through these boundary points.
fn canonical_shape(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let cycle = LatticeCycle::new(points.to_vec()).expect("non-degenerate polygon").corners_only();
    canonical_cycle(cycle.vertices())
}

fn shape_cycle(shape: &[LatticePoint]) -> LatticeCycle {
    LatticeCycle::new(shape.to_vec()).expect("canonical shapes are valid cycles")
}

fn no_chord_prefix(pts: &[LatticePoint]) -> bool {
    let j = pts.len() - 1;
    let q = pts[j];
    if j < 3 {
        return true;
    }
    pts[1..j - 1].iter().all(|p| gcd((q.x - p.x) as i64, (q.y - p.y) as i64) > 1)
}

fn no_chord_closed(pts: &[LatticePoint]) -> bool {
    let m = pts.len();
    let o = pts[0];
    (2..m.saturating_sub(1)).all(|j| gcd((pts[j].x - o.x) as i64, (pts[j].y - o.y) as i64) > 1)
}

/// Convex polygons with exactly `boundary_points` boundary lattice points
/// inside a `max_box` square, up to symmetry. With `extremely_reduced`
/// only those where no two non-adjacent boundary points see each other
/// through a primitive segment are kept. Returns the shapes and the number
/// of search nodes.
pub fn convex_shapes(boundary_points: usize, max_box: i32, extremely_reduced: bool) -> (BTreeSet<Vec<LatticePoint>>, u64) {
    let mut shapes = BTreeSet::new();
    let keep_all = |_: &[LatticePoint]| true;
    let keep: &dyn Fn(&[LatticePoint]) -> bool = if extremely_reduced { &no_chord_prefix } else { &keep_all };
    let mut found = |pts: &[LatticePoint]| {
        if pts.len() == boundary_points && (!extremely_reduced || no_chord_closed(pts)) {
            shapes.insert(canonical_shape(pts));
        }
    };
    let mut walk = ConvexWalk {
        dirs: primitive_directions(max_box),
        side: max_box,
        max_points: boundary_points,
        keep,
        found: &mut found,
        nodes: 0,
    };
    walk.run();
    let nodes = walk.nodes;
    (shapes, nodes)
}

/// Strict convex hull by the monotone chain, counterclockwise.
fn strict_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort();
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The slow reference enumerator: every vertex subset of the box in
/// strictly convex position, classified with the full region machinery.
/// Returns (all shapes, extremely reduced shapes).
pub fn naive_convex_shapes(boundary_points: usize, max_box: i32) -> (BTreeSet<Vec<LatticePoint>>, BTreeSet<Vec<LatticePoint>>) {
    let grid: Vec<LatticePoint> =
        (0..=max_box).flat_map(|y| (0..=max_box).map(move |x| LatticePoint::new(x, y))).collect();
    let mut all = BTreeSet::new();
    let mut chosen = Vec::new();
    fn subsets(
        grid: &[LatticePoint],
        from: usize,
        chosen: &mut Vec<LatticePoint>,
        k: usize,
        all: &mut BTreeSet<Vec<LatticePoint>>,
    ) {
        if chosen.len() >= 3 {
            let hull = strict_hull(chosen);
            if hull.len() == chosen.len() {
                let n = hull.len();
                let b: i64 = (0..n)
                    .map(|i| {
                        let (p, q) = (hull[i], hull[(i + 1) % n]);
                        gcd((q.x - p.x) as i64, (q.y - p.y) as i64)
                    })
                    .sum();
                if b as usize == k {
                    all.insert(canonical_cycle(&hull));
                }
            }
        }
        if chosen.len() == k {
            return;
        }
        for i in from..grid.len() {
            chosen.push(grid[i]);
            subsets(grid, i + 1, chosen, k, all);
            chosen.pop();
        }
    }
    subsets(&grid, 0, &mut chosen, boundary_points, &mut all);
    let er = all
        .iter()
        .filter(|shape| {
            let region = Region::new(shape_cycle(shape), &[]).expect("convex shape is a region");
            classify_reduction(&region, Variant::Triangles) == Ok(ReductionClass::ExtremelyReduced)
        })
        .cloned()
        .collect();
    (all, er)
}

fn fig13_class() -> Vec<LatticePoint> {
    canonical_cycle(fixtures::region("fig13").outer().corners_only().vertices())
}

fn format_shape(shape: &[LatticePoint]) -> String {
    shape.iter().map(|p| format!("({},{})", p.x, p.y)).collect::<Vec<_>>().join(",")
}

/// Convex extremely reduced shapes without interior segments with a given
/// number of boundary points. Five points are expected to give none and
/// six must include the `fig13` hexagon class. Seven is reported without
/// a verdict.
pub fn enumerate_convex_ers(boundary_points: usize, max_box: i32) -> TheoremReport {
    let start = Instant::now();
    let (shapes, nodes) = convex_shapes(boundary_points, max_box, true);
    let mut violations = Vec::new();
    let mut notes = vec![
        format!("verified within bounding box {max_box}, not proved"),
        format!("{} search nodes, {} shape classes found", nodes, shapes.len()),
    ];
    for (i, shape) in shapes.iter().enumerate() {
        let region = Region::new(shape_cycle(shape), &[]).expect("convex shape is a region");
        let class = classify_reduction(&region, Variant::Triangles);
        if class != Ok(ReductionClass::ExtremelyReduced) {
            violations.push(
                Violation::new(i as u64, "extremely-reduced under full classification", format!("{class:?}"))
                    .with_region("shape", &region),
            );
        }
        if i < 20 {
            notes.push(format!("shape {}", format_shape(shape)));
        }
    }
    match boundary_points {
        5 => {
            for (i, shape) in shapes.iter().enumerate() {
                let region = Region::new(shape_cycle(shape), &[]).expect("region");
                violations.push(
                    Violation::new(i as u64, "no five-point convex extremely reduced shape", format_shape(shape))
                        .with_region("counterexample", &region),
                );
            }
        }
        6 => {
            let fig13 = fig13_class();
            let present = shapes.contains(&fig13);
            notes.push(format!("reference hexagon class present: {present}"));
            if max_box >= 8 && !present {
                violations.push(Violation::new(0, format!("class {} found", format_shape(&fig13)), "absent"));
            }
            if shapes.is_empty() && max_box >= 8 {
                violations.push(Violation::new(0, "at least one six-point shape", "none"));
            }
        }
        _ => notes.push("no expected outcome for this boundary count".into()),
    }
    TheoremReport::finish(
        "convex-ers",
        json!({"boundary_points": boundary_points, "max_box": max_box}),
        start,
        nodes,
        violations,
        notes,
    )
}

/// Runs the fast and the naive enumerator side by side and compares both
/// the full convex shape counts and the extremely reduced counts.
pub fn cross_check_enumerators(boundary_points: usize, max_box: i32) -> TheoremReport {
    let start = Instant::now();
    let (fast_all, _) = convex_shapes(boundary_points, max_box, false);
    let (fast_er, _) = convex_shapes(boundary_points, max_box, true);
    let (naive_all, naive_er) = naive_convex_shapes(boundary_points, max_box);
    let mut violations = Vec::new();
    if fast_all != naive_all {
        violations.push(Violation::new(
            0,
            format!("{} convex shapes (naive)", naive_all.len()),
            format!("{} convex shapes (fast)", fast_all.len()),
        ));
    }
    if fast_er != naive_er {
        violations.push(Violation::new(
            1,
            format!("{} extremely reduced shapes (naive)", naive_er.len()),
            format!("{} extremely reduced shapes (fast)", fast_er.len()),
        ));
    }
    TheoremReport::finish(
        "enumeration-cross-check",
        json!({"boundary_points": boundary_points, "max_box": max_box}),
        start,
        (naive_all.len() + naive_er.len()) as u64,
        violations,
        vec![format!("{} convex shapes, {} extremely reduced", naive_all.len(), naive_er.len())],
    )
}

// ---------------------------------------------------------------------------
// Eyes

/// Lattice points strictly inside the convex polygon closed from `pts`.
fn strict_interior_count(pts: &[LatticePoint]) -> usize {
    let n = pts.len();
    if n < 3 {
        return 0;
    }
    let (lx, hx) = (pts.iter().map(|p| p.x).min().unwrap(), pts.iter().map(|p| p.x).max().unwrap());
    let (ly, hy) = (pts.iter().map(|p| p.y).min().unwrap(), pts.iter().map(|p| p.y).max().unwrap());
    let mut count = 0;
    for y in ly + 1..hy {
        for x in lx + 1..hx {
            let p = LatticePoint::new(x, y);
            if (0..n).all(|i| orient(pts[i], pts[(i + 1) % n], p) > 0) {
                count += 1;
            }
        }
    }
    count
}

/// Convex outer cycles in the box with between one and `max_interior`
/// interior points, up to symmetry.
pub fn convex_outers(max_box: i32, max_interior: usize) -> BTreeSet<Vec<LatticePoint>> {
    let mut shapes = BTreeSet::new();
    let keep = |pts: &[LatticePoint]| strict_interior_count(pts) <= max_interior;
    let mut found = |pts: &[LatticePoint]| {
        let interior = strict_interior_count(pts);
        if (1..=max_interior).contains(&interior) {
            shapes.insert(canonical_shape(pts));
        }
    };
    let mut walk = ConvexWalk {
        dirs: primitive_directions(max_box),
        side: max_box,
        max_points: 4 * max_box as usize + 4,
        keep: &keep,
        found: &mut found,
        nodes: 0,
    };
    walk.run();
    shapes
}

/// Every maximal set of pairwise compatible primitive segments between the
/// given points. An empty point set or one with no such segment yields the
/// empty set once.
pub fn maximal_irises(points: &[LatticePoint]) -> Vec<Vec<Segment>> {
    let mut segs = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            let s = Segment::new(p, q).expect("distinct points");
            if crate::geometry::is_primitive(&s) {
                segs.push(s);
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<Segment> = Vec::new();
    fn go(segs: &[Segment], i: usize, chosen: &mut Vec<Segment>, out: &mut Vec<Vec<Segment>>) {
        if i == segs.len() {
            let maximal =
                segs.iter().all(|s| chosen.contains(s) || chosen.iter().any(|c| segments_conflict(s, c)));
            if maximal {
                out.push(chosen.clone());
            }
            return;
        }
        if chosen.iter().all(|c| !segments_conflict(&segs[i], c)) {
            chosen.push(segs[i]);
            go(segs, i + 1, chosen, out);
            chosen.pop();
        }
        go(segs, i + 1, chosen, out);
    }
    go(&segs, 0, &mut chosen, &mut out);
    out
}

/// Checks a one-turn claim by playing it: every move must claim, and the
/// region must end fully claimed.
fn replays_as_one_turn(game: &RegionGame, start: &GameState, moves: &[Segment]) -> Result<(), String> {
    let mover = start.to_move();
    let mut state = start.clone();
    for (i, &s) in moves.iter().enumerate() {
        if !game.candidates.contains(&s) {
            return Err(format!("move {i} {s} is outside the region"));
        }
        let out = state.apply_move(s).map_err(|e| format!("move {i} {s}: {e}"))?;
        if out.player != mover || !out.claims_anything() {
            return Err(format!("move {i} {s} does not claim"));
        }
    }
    // The sandbox holds nothing but the region, so its claimed total is
    // the region's claimed area.
    if state.claimed_area() != game.target {
        return Err(format!("region ends with {} of {} claimed", state.claimed_area(), game.target));
    }
    Ok(())
}

/// The two eye theorems for one region: it is extremely reduced, and after
/// any first move the opponent claims everything in one turn while the
/// first mover claims nothing.
fn check_reduced_eye(region: &Region, variant: Variant) -> (u64, Vec<String>) {
    let mut problems = Vec::new();
    match classify_reduction(region, variant) {
        Ok(ReductionClass::ExtremelyReduced) => {}
        other => problems.push(format!("{}: classified {other:?}, expected extremely-reduced", variant.token())),
    }
    let game = region.game(variant);
    let firsts = region_first_moves(region, variant);
    for &first in &firsts {
        let (after, out) = game.state.after(first).expect("region moves are legal");
        if out.claims_anything() {
            problems.push(format!("{}: first move {first} claims", variant.token()));
            continue;
        }
        match second_player_eye_reply(region, first, variant) {
            Ok(reply) => {
                if let Err(e) = replays_as_one_turn(&game, &after, &reply) {
                    problems.push(format!("{}: reply to {first}: {e}", variant.token()));
                }
            }
            Err(e) => problems.push(format!("{}: no reply to {first}: {e}", variant.token())),
        }
    }
    (firsts.len() as u64, problems)
}

const EYE_FIXTURES: &[(&str, &[Variant])] = &[
    ("fig8L-reduced", &[Variant::Triangles, Variant::Polygons]),
    ("fig14", &[Variant::Triangles, Variant::Polygons]),
    ("fig16", &[Variant::Triangles, Variant::Polygons]),
    ("fig11L", &[Variant::Triangles, Variant::Polygons]),
    ("fig5", &[Variant::Polygons]),
];

pub fn verify_eye_theorems(max_box: i32) -> TheoremReport {
    verify_eye_theorems_with(max_box, 5)
}

/// Enumerates eyes with a convex outer cycle in the box, at most
/// `max_interior` interior points and a maximal iris, keeps the reduced
/// ones and checks both theorems on each, in both variants. The reference
/// eye fixtures are checked as well.
pub fn verify_eye_theorems_with(max_box: i32, max_interior: usize) -> TheoremReport {
    let start = Instant::now();
    let outers: Vec<Vec<LatticePoint>> = convex_outers(max_box, max_interior).into_iter().collect();
    let variants = [Variant::Triangles, Variant::Polygons];

    struct EyeResult {
        candidates: u64,
        eyes: [u64; 2],
        first_moves: u64,
        smallest: Option<HalfArea>,
        violations: Vec<Violation>,
    }
    let results: Vec<EyeResult> = outers
        .par_iter()
        .enumerate()
        .map(|(index, shape)| {
            let outer = shape_cycle(shape);
            let interior = lattice_census(&outer).expect("simple").interior;
            let mut res =
                EyeResult { candidates: 0, eyes: [0, 0], first_moves: 0, smallest: None, violations: Vec::new() };
            for iris in maximal_irises(&interior) {
                let Ok(region) = Region::new(outer.clone(), &iris) else { continue };
                res.candidates += 1;
                for (vi, &v) in variants.iter().enumerate() {
                    if is_reduced_eye(&region, v) != Ok(true) {
                        continue;
                    }
                    res.eyes[vi] += 1;
                    let area = region.area();
                    res.smallest = Some(res.smallest.map_or(area, |a: HalfArea| a.min(area)));
                    let (firsts, problems) = check_reduced_eye(&region, v);
                    res.first_moves += firsts;
                    for p in problems {
                        res.violations.push(
                            Violation::new(index as u64, "both eye theorems hold", p).with_region("eye", &region),
                        );
                    }
                }
            }
            res
        })
        .collect();

    let mut violations = Vec::new();
    let (mut candidates, mut eyes, mut first_moves) = (0u64, [0u64; 2], 0u64);
    let mut smallest: Option<HalfArea> = None;
    for r in results {
        candidates += r.candidates;
        eyes[0] += r.eyes[0];
        eyes[1] += r.eyes[1];
        first_moves += r.first_moves;
        if let Some(a) = r.smallest {
            smallest = Some(smallest.map_or(a, |s| s.min(a)));
        }
        violations.extend(r.violations);
    }
    let mut fixture_eyes = 0;
    for (k, (name, vs)) in EYE_FIXTURES.iter().enumerate() {
        let region = fixtures::region(name);
        for &v in vs.iter() {
            fixture_eyes += 1;
            if is_reduced_eye(&region, v) != Ok(true) {
                violations.push(
                    Violation::new(1_000_000 + k as u64, format!("{name} is a reduced eye in {}", v.token()), "not")
                        .with_region(name, &region),
                );
                continue;
            }
            let (firsts, problems) = check_reduced_eye(&region, v);
            first_moves += firsts;
            for p in problems {
                violations.push(
                    Violation::new(1_000_000 + k as u64, "both eye theorems hold", p).with_region(name, &region),
                );
            }
        }
    }
    if eyes[0] + eyes[1] == 0 {
        violations.push(Violation::new(0, "at least one reduced eye in the box", "none"));
    }
    let notes = vec![
        format!("verified within bounding box {max_box} for convex outer cycles with at most {max_interior} interior points"),
        format!("{} outer cycles, {candidates} outer+iris candidates", outers.len()),
        format!("reduced eyes: {} triangles, {} polygons, plus {fixture_eyes} fixture cases", eyes[0], eyes[1]),
        format!("{first_moves} first moves answered"),
        format!("smallest reduced eye area: {}", smallest.map_or("none".to_string(), |a| a.to_string())),
    ];
    TheoremReport::finish(
        "eye-theorems",
        json!({"max_box": max_box, "max_interior": max_interior}),
        start,
        eyes[0] + eyes[1] + fixture_eyes,
        violations,
        notes,
    )
}

// ---------------------------------------------------------------------------
// Double-dealing

/// Simple lattice polygons in the box with at most `max_boundary` boundary
/// points and twice-area at most `max_twice_area`, up to symmetry. Every
/// boundary lattice point is a listed vertex, so edges are primitive.
pub fn small_polygons(max_box: i32, max_boundary: usize, max_twice_area: u64) -> BTreeSet<Vec<LatticePoint>> {
    let grid: Vec<LatticePoint> =
        (0..=max_box).flat_map(|y| (0..=max_box).map(move |x| LatticePoint::new(x, y))).collect();
    let mut out = BTreeSet::new();
    fn primitive_step(p: LatticePoint, q: LatticePoint) -> bool {
        gcd((q.x - p.x) as i64, (q.y - p.y) as i64) == 1
    }
    fn go(
        grid: &[LatticePoint],
        path: &mut Vec<LatticePoint>,
        max_boundary: usize,
        max_twice_area: u64,
        out: &mut BTreeSet<Vec<LatticePoint>>,
    ) {
        let last = *path.last().unwrap();
        if path.len() >= 3 && primitive_step(last, path[0]) {
            if let Ok(c) = LatticeCycle::new(path.clone()) {
                if c.is_simple() && c.twice_area() > 0 && c.twice_area() <= max_twice_area {
                    out.insert(canonical_cycle(c.corners_only().vertices()));
                }
            }
        }
        if path.len() == max_boundary {
            return;
        }
        for &q in grid {
            if q > path[0] && !path.contains(&q) && primitive_step(last, q) {
                path.push(q);
                go(grid, path, max_boundary, max_twice_area, out);
                path.pop();
            }
        }
    }
    for &p in &grid {
        let mut path = vec![p];
        go(&grid, &mut path, max_boundary, max_twice_area, &mut out);
    }
    out
}

/// Positions inside a polygon: all boundary edges drawn or one left out,
/// plus at most one interior segment. Built on a board with a margin so
/// the game never ends with the region.
fn double_deal_positions(shape: &[LatticePoint]) -> Vec<(GameState, Vec<Segment>, String)> {
    let outer = shape_cycle(shape).translate(1, 1);
    let (_, hi) = outer.bounding_box();
    let board = BoardSpec::new((hi.x + 2) as u32, (hi.y + 2) as u32).expect("small board");
    let edges = outer.primitive_segments();
    let inner = region_candidates(&outer, board, false);
    let with_boundary = region_candidates(&outer, board, true);
    let mut out = Vec::new();
    let omissions: Vec<Option<Segment>> = std::iter::once(None).chain(edges.iter().copied().map(Some)).collect();
    let extras: Vec<Option<Segment>> = std::iter::once(None).chain(inner.iter().copied().map(Some)).collect();
    for omit in &omissions {
        for extra in &extras {
            let mut drawn: Vec<Segment> = edges.iter().copied().filter(|e| Some(*e) != *omit).collect();
            drawn.extend(*extra);
            let Ok(state) = GameState::from_position(board, Variant::Polygons, &drawn, &[], Player::First) else {
                continue;
            };
            // Claimable faces are claimed the moment they close, so such a
            // position never arises in play.
            if state.unclaimed_faces().iter().any(|f| f.is_claimable(Variant::Polygons)) {
                continue;
            }
            let label = format!(
                "omitted {} interior {}",
                omit.map_or("none".into(), |s| s.to_string()),
                extra.map_or("none".into(), |s| s.to_string())
            );
            out.push((state, with_boundary.clone(), label));
        }
    }
    out
}

/// Searches small regions for double-dealing moves in the polygon variant.
/// None may exist in regions of area 1/2 or 1, none in regions without
/// interior points, and some must exist at area 3/2, including the
/// reference triangle with one interior point.
pub fn verify_min_double_deal(max_box: i32) -> TheoremReport {
    let start = Instant::now();
    let shapes: Vec<Vec<LatticePoint>> = small_polygons(max_box, 5, 3).into_iter().collect();
    struct Found {
        checked: u64,
        hits: Vec<(HalfArea, usize, String)>,
    }
    let results: Vec<Found> = shapes
        .par_iter()
        .map(|shape| {
            let cycle = shape_cycle(shape);
            let interior = lattice_census(&cycle).expect("simple").interior.len();
            let mut found = Found { checked: 0, hits: Vec::new() };
            for (state, candidates, label) in double_deal_positions(shape) {
                for s in state.legal_moves().into_iter().filter(|s| candidates.contains(s)) {
                    found.checked += 1;
                    if let Some(ceded) = double_deal_cession(&state, s) {
                        found.hits.push((ceded, interior, format!("{label}, move {s}, cedes {ceded}")));
                    }
                }
            }
            found
        })
        .collect();

    let mut violations = Vec::new();
    let mut checked = 0;
    let mut by_area: BTreeMap<u64, u64> = BTreeMap::new();
    let mut classes_at_three_halves = BTreeSet::new();
    for (i, (shape, found)) in shapes.iter().zip(&results).enumerate() {
        checked += found.checked;
        let cycle = shape_cycle(shape);
        let area = HalfArea::from_halves(cycle.twice_area());
        for (_, interior, what) in &found.hits {
            *by_area.entry(area.halves()).or_default() += 1;
            if area.halves() <= 2 {
                violations.push(
                    Violation::new(i as u64, format!("no double-dealing in a region of area {area}"), what.clone())
                        .with_region("region", &Region::new(cycle.clone(), &[]).expect("region")),
                );
            }
            if *interior == 0 {
                violations.push(
                    Violation::new(i as u64, "no double-dealing without interior points", what.clone())
                        .with_region("region", &Region::new(cycle.clone(), &[]).expect("region")),
                );
            }
            if area.halves() == 3 {
                classes_at_three_halves.insert(shape.clone());
            }
        }
    }
    let fig10 = fixtures::region("fig10");
    let fig10_class = canonical_cycle(fig10.outer().corners_only().vertices());
    if classes_at_three_halves.is_empty() {
        violations.push(Violation::new(0, "a double-dealing move in a region of area 3/2", "none"));
    }
    if !classes_at_three_halves.contains(&fig10_class) {
        violations.push(Violation::new(0, "the reference area-3/2 triangle admits double-dealing", "not found"));
    }
    let game = fig10.game(Variant::Polygons);
    let fig10_move = Segment::of((0, 1), (0, 0));
    let direct = double_deal_cession(&game.state, fig10_move);
    checked += 1;
    if direct != Some(HalfArea::from_halves(3)) {
        violations.push(
            Violation::new(0, "fixture move (0,1)-(0,0) double-deals 3/2", format!("{direct:?}"))
                .with_region("fig10", &fig10),
        );
    }
    let notes = vec![
        format!("verified within bounding box {max_box}"),
        format!("{} polygon classes with area at most 3/2", shapes.len()),
        format!(
            "double-dealing moves by region area (halves): {}",
            by_area.iter().map(|(a, n)| format!("{a}:{n}")).collect::<Vec<_>>().join(" ")
        ),
        format!(
            "area-3/2 classes with double-dealing: {}",
            classes_at_three_halves.iter().map(|s| format_shape(s)).collect::<Vec<_>>().join(" ")
        ),
    ];
    TheoremReport::finish("min-double-deal", json!({"max_box": max_box}), start, checked, violations, notes)
}

/// The two reference positions without double-dealing: no move of the
/// split hanging eye qualifies, nor the named move of the diamond.
pub fn verify_double_deal_negatives() -> TheoremReport {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut checked = 0;
    for v in [Variant::Polygons, Variant::Triangles] {
        let fig15 = fixtures::region("fig15");
        let game = fig15.game(v);
        for s in game.moves(&game.state) {
            checked += 1;
            if is_double_dealing(&game.state, s) {
                violations.push(
                    Violation::new(15, format!("no double-dealing move ({})", v.token()), format!("{s} qualifies"))
                        .with_region("fig15", &fig15),
                );
            }
        }
        let fig16 = fixtures::region("fig16");
        let game = fig16.game(v);
        let s = Segment::of((1, 2), (1, 3));
        checked += 1;
        if is_double_dealing(&game.state, s) {
            violations.push(
                Violation::new(16, format!("{s} is not double-dealing ({})", v.token()), "it qualifies")
                    .with_region("fig16", &fig16),
            );
        }
    }
    TheoremReport::finish("double-deal-negatives", json!({}), start, checked, violations, Vec::new())
}

// ---------------------------------------------------------------------------
// Single-turn claims

pub fn verify_single_turn_claims() -> TheoremReport {
    verify_single_turn_claims_with(200, 7)
}

pub fn verify_single_turn_claims_with(random_regions: usize, seed: u64) -> TheoremReport {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut checked = 0u64;
    let variants = [Variant::Triangles, Variant::Polygons];

    let mut zero_interior = Vec::new();
    for name in fixtures::names() {
        let r = fixtures::region(name);
        if r.is_closed() && r.interior_points().is_empty() {
            zero_interior.push((name.to_string(), r));
        }
    }
    let fixture_count = zero_interior.len();
    let mut rng = instance_rng(seed, 0);
    let mut seen = HashSet::new();
    let mut attempts = 0;
    while zero_interior.len() < fixture_count + random_regions && attempts < 200_000 {
        attempts += 1;
        let c = random_simple_cycle(&mut rng, 5);
        if lattice_census(&c).map_or(true, |k| !k.interior.is_empty()) || !seen.insert(c.clone()) {
            continue;
        }
        if let Ok(r) = Region::new(c, &[]) {
            zero_interior.push((format!("random-{}", zero_interior.len() - fixture_count), r));
        }
    }
    if zero_interior.len() < fixture_count + random_regions {
        violations.push(Violation::new(0, format!("{random_regions} random regions"), "generator ran dry"));
    }

    let results: Vec<Vec<Violation>> = zero_interior
        .par_iter()
        .enumerate()
        .map(|(i, (name, region))| {
            let mut out = Vec::new();
            for v in variants {
                let game = region.game(v);
                let outcome = claim_all_no_interior(region, v).map_err(|e| e.to_string()).and_then(|moves| {
                    if moves.is_empty() && claimed_on_closure(region, v) {
                        Ok(())
                    } else {
                        replays_as_one_turn(&game, &game.state, &moves)
                    }
                });
                if let Err(e) = outcome {
                    out.push(
                        Violation::new(i as u64, format!("{name} claimed in one turn ({})", v.token()), e)
                            .with_region(name, region),
                    );
                }
            }
            out
        })
        .collect();
    checked += 2 * zero_interior.len() as u64;
    violations.extend(results.into_iter().flatten());

    for (k, name) in ["fig11M", "fig11R"].iter().enumerate() {
        checked += 1;
        let region = fixtures::region(name);
        let game = region.game(Variant::Polygons);
        let outcome = single_turn_claim(&region, Variant::Polygons)
            .ok_or_else(|| "no one-turn claim".to_string())
            .and_then(|moves| replays_as_one_turn(&game, &game.state, &moves));
        if let Err(e) = outcome {
            violations
                .push(Violation::new(100 + k as u64, format!("{name} claimed in one turn"), e).with_region(name, &region));
        }
    }
    let fig12 = fixtures::region("fig12");
    for v in variants {
        checked += 1;
        if let Some(moves) = single_turn_claim(&fig12, v) {
            violations.push(
                Violation::new(
                    200,
                    format!("fig12 has no one-turn claim ({})", v.token()),
                    format!("found {} moves", moves.len()),
                )
                .with_region("fig12", &fig12),
            );
        }
    }
    let closed_claimed = zero_interior.iter().filter(|(_, r)| claimed_on_closure(r, Variant::Triangles)).count();
    let notes = vec![
        format!(
            "{fixture_count} zero-interior fixtures and {} random regions, each in both variants",
            zero_interior.len() - fixture_count
        ),
        format!("{closed_claimed} regions are single triangles, claimed by the move that closes them"),
    ];
    TheoremReport::finish(
        "single-turn-claims",
        json!({"random_regions": random_regions, "seed": seed}),
        start,
        checked,
        violations,
        notes,
    )
}

// ---------------------------------------------------------------------------
// Doublecrosses in the polygon variant

/// The closed region a segment is about to be drawn in: the unclaimed
/// face around the segment's midpoint, with its dangling edges and nested
/// structure moved inside and the largest simple loop of its boundary
/// walk as the outer cycle.
pub fn region_around(state: &GameState, s: Segment) -> Option<Region> {
    let mid = s.doubled_midpoint();
    let claimed: HashSet<Vec<LatticePoint>> = state.claims().map(|c| c.face.walk.clone()).collect();
    let doubled = |walk: &[LatticePoint]| walk.iter().map(|p| p.doubled()).collect::<Vec<_>>();
    let face = state
        .faces()
        .into_iter()
        .filter(|f| !claimed.contains(&f.walk))
        .filter(|f| {
            let d = doubled(&f.walk);
            !on_walk(mid, &d) && winding_number(mid, &d) != 0
        })
        .min_by_key(|f| crate::geometry::walk_twice_signed_area(&f.walk))?;

    let n = face.walk.len();
    let directed: Vec<(LatticePoint, LatticePoint)> = (0..n).map(|i| (face.walk[i], face.walk[(i + 1) % n])).collect();
    let set: HashSet<(LatticePoint, LatticePoint)> = directed.iter().copied().collect();
    let kept: Vec<(LatticePoint, LatticePoint)> =
        directed.iter().copied().filter(|&(u, v)| !set.contains(&(v, u))).collect();
    // Split the remaining closed walk into simple loops at repeated vertices.
    let mut loops: Vec<Vec<LatticePoint>> = Vec::new();
    let mut stack: Vec<LatticePoint> = Vec::new();
    for &(u, _) in &kept {
        if let Some(pos) = stack.iter().position(|&p| p == u) {
            loops.push(stack.split_off(pos));
        }
        stack.push(u);
    }
    if !stack.is_empty() {
        loops.push(stack);
    }
    let outer_walk = loops
        .into_iter()
        .filter(|l| l.len() >= 3)
        .max_by_key(|l| crate::geometry::walk_twice_signed_area(l))?;
    let outer = LatticeCycle::new(outer_walk).ok()?;
    let od = doubled(outer.vertices());
    let strictly_inside = |p: LatticePoint| !on_walk(p, &od) && winding_number(p, &od) != 0;
    let not_outside = |p: LatticePoint| on_walk(p, &od) || winding_number(p, &od) != 0;
    let inner: Vec<Segment> = state.drawn().iter().copied().filter(|d| strictly_inside(d.doubled_midpoint())).collect();
    let claims: Vec<LatticeCycle> = state
        .claims()
        .filter(|c| {
            let w = &c.face.walk;
            let k = w.len();
            w.iter().all(|p| not_outside(p.doubled()))
                && (0..k).all(|i| not_outside(Segment::new(w[i], w[(i + 1) % k]).unwrap().doubled_midpoint()))
        })
        .filter_map(|c| c.face.outer())
        .collect();
    Region::build(outer, &inner, &claims, &[]).ok()
}

/// In random polygon-variant games, every doublecrossed move must be made
/// inside a closed region holding a hanging eye or split hanging eyes.
pub fn verify_doublecross_necessity(games: u64, board: BoardSpec, seed: u64) -> TheoremReport {
    let start = Instant::now();
    let results: Vec<(u64, Vec<Violation>)> = (0..games)
        .into_par_iter()
        .map(|i| {
            let game = random_playout(board, Variant::Polygons, seed, i);
            let mut replay = GameState::new(board, Variant::Polygons);
            let mut found = 0;
            let mut out = Vec::new();
            for m in game.moves() {
                let before = replay.clone();
                let outcome = replay.apply_move(m.segment).expect("replay");
                if !outcome.doublecross {
                    continue;
                }
                found += 1;
                let kind = region_around(&before, m.segment)
                    .ok_or_else(|| "no closed region".to_string())
                    .and_then(|r| classify_eye(&r, Variant::Polygons).map(|e| e.kind).map_err(|e| e.to_string()));
                match kind {
                    Ok(EyeKind::HangingEye | EyeKind::SplitHangingEye) => {}
                    other => out.push(
                        Violation::new(
                            i,
                            format!("doublecross {} inside a hanging eye", m.segment),
                            format!("{other:?}"),
                        )
                        .with_game(&game),
                    ),
                }
            }
            (found, out)
        })
        .collect();
    let doublecrosses: u64 = results.iter().map(|r| r.0).sum();
    let violations: Vec<Violation> = results.into_iter().flat_map(|r| r.1).collect();
    TheoremReport::finish(
        "doublecross-necessity",
        json!({"games": games, "width": board.width(), "height": board.height(), "seed": seed}),
        start,
        doublecrosses,
        violations,
        vec![format!("{doublecrosses} doublecrossed moves in {games} games")],
    )
}

// ---------------------------------------------------------------------------
// Engine properties

const PROPERTY_BOARDS: &[(u32, u32)] = &[(2, 2), (2, 3), (3, 3), (3, 4), (4, 4)];

/// Area conservation after every move, pairwise compatibility of drawn
/// segments, no claimable face left unclaimed, score bookkeeping, and
/// record round trips, over random games of both variants.
pub fn verify_engine_properties(games: u64, seed: u64) -> TheoremReport {
    let start = Instant::now();
    let violations: Vec<Violation> = (0..games)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (w, h) = PROPERTY_BOARDS[(i as usize / 2) % PROPERTY_BOARDS.len()];
            let variant = if i % 2 == 0 { Variant::Triangles } else { Variant::Polygons };
            engine_property_violations(BoardSpec::new(w, h).expect("board"), variant, seed, i)
        })
        .collect();
    TheoremReport::finish(
        "engine-properties",
        json!({"games": games, "seed": seed}),
        start,
        games,
        violations,
        Vec::new(),
    )
}

fn engine_property_violations(board: BoardSpec, variant: Variant, seed: u64, index: u64) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut rng = instance_rng(seed, index);
    let mut state = GameState::new(board, variant);
    while !state.is_over() {
        let moves = state.legal_moves();
        let s = *moves.choose(&mut rng).expect("legal move");
        if let Some(clash) = state.drawn().iter().find(|d| segments_conflict(d, &s) || **d == s) {
            out.push(Violation::new(index, format!("{s} compatible with drawn segments"), format!("clashes with {clash}")));
        }
        state.apply_move(s).expect("legal");
        let faces = state.faces();
        let claimed_walks: HashSet<&Vec<LatticePoint>> = state.claims().map(|c| &c.face.walk).collect();
        let unclaimed: HalfArea = faces.iter().filter(|f| !claimed_walks.contains(&f.walk)).map(|f| f.area).sum();
        if state.claimed_area() + unclaimed + state.open_area() != board.area() {
            out.push(
                Violation::new(
                    index,
                    format!("claimed + unclaimed faces + open = {}", board.area()),
                    format!("{} + {} + {}", state.claimed_area(), unclaimed, state.open_area()),
                )
                .with_game(&state),
            );
        }
        if let Some(f) = faces.iter().find(|f| !claimed_walks.contains(&f.walk) && f.is_claimable(variant)) {
            out.push(
                Violation::new(index, "every claimable face is claimed", format!("unclaimed face of area {}", f.area))
                    .with_game(&state),
            );
        }
        let (p1, p2) = state.scores();
        if p1 + p2 != state.claimed_area() {
            out.push(Violation::new(index, "scores sum to claimed area", format!("{p1} + {p2}")).with_game(&state));
        }
        if !out.is_empty() {
            return out;
        }
    }
    if state.claimed_area() != board.area() {
        out.push(Violation::new(index, "finished game fully claimed", state.claimed_area().to_string()));
    }
    let record = GameRecord::from_state(&state).expect("played game");
    let text = record.to_json();
    match GameRecord::from_json(&text).and_then(|r| r.replay()) {
        Ok(back) => {
            if back != state {
                out.push(Violation::new(index, "replay equals the original game", "differs").with_game(&state));
            }
            let again = GameRecord::from_state(&back).map(|r| r.to_json());
            if again.as_deref().ok() != Some(text.as_str()) {
                out.push(Violation::new(index, "re-serialised record is identical", "differs").with_game(&state));
            }
        }
        Err(e) => out.push(Violation::new(index, "record replays", e.to_string()).with_game(&state)),
    }
    out
}

// ---------------------------------------------------------------------------
// Solver sanity

/// Maps a point by a lattice symmetry, then back onto the board.
fn board_map(sym: Symmetry, board: BoardSpec, p: LatticePoint) -> LatticePoint {
    let corner = LatticePoint::new(board.width() as i32 - 1, board.height() as i32 - 1);
    let a = sym.apply(LatticePoint::new(0, 0));
    let b = sym.apply(corner);
    let q = sym.apply(p);
    q.translate(-a.x.min(b.x), -a.y.min(b.y))
}

fn board_symmetries(board: BoardSpec) -> Vec<Symmetry> {
    Symmetry::all().filter(|s| !s.swaps_axes() || board.width() == board.height()).collect()
}

/// Plain negamax over the full game tree with a memo on the drawn set, as
/// an independent reference for the solver. Values are for the player to
/// move, in halves.
pub fn reference_value(state: &GameState) -> i64 {
    fn go(state: &GameState, memo: &mut HashMap<(Vec<Segment>, Player), i64>) -> i64 {
        if state.is_over() {
            return 0;
        }
        let mut key: Vec<Segment> = state.drawn().iter().copied().collect();
        key.sort();
        let key = (key, state.to_move());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut best = i64::MIN;
        for s in state.legal_moves() {
            let (child, out) = state.after(s).expect("legal");
            let gain = out.claimed_area().halves() as i64;
            let v = if child.to_move() == state.to_move() { gain + go(&child, memo) } else { gain - go(&child, memo) };
            best = best.max(v);
        }
        memo.insert(key, best);
        best
    }
    go(state, &mut HashMap::new())
}

/// The solver against the reference search on small empty boards, under
/// each traversal order, with and without symmetry, across thread counts,
/// with the players swapped, and for symmetric images of each opening.
pub fn verify_solver_sanity() -> TheoremReport {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    let mut checked = 0;
    let budget = 20_000_000;
    for (w, h) in [(2u32, 2u32), (2, 3)] {
        let board = BoardSpec::new(w, h).expect("board");
        let empty = GameState::new(board, Variant::Triangles);
        let reference = reference_value(&empty);
        let variants = [
            ("default", SolveOptions { node_budget: budget, ..SolveOptions::default() }),
            ("reverse", SolveOptions { node_budget: budget, reverse_order: true, ..SolveOptions::default() }),
            ("no-symmetry", SolveOptions { node_budget: budget, symmetry: false, ..SolveOptions::default() }),
            ("threads-4", SolveOptions { node_budget: budget, threads: 4, ..SolveOptions::default() }),
        ];
        for (label, opts) in &variants {
            checked += 1;
            let r = solve_with(&empty, opts);
            if !r.complete || r.value != reference {
                violations.push(Violation::new(
                    checked,
                    format!("{w}x{h} {label}: value {reference}"),
                    format!("value {} complete {}", r.value, r.complete),
                ));
            }
            if *label == "default" {
                notes.push(format!("{w}x{h}: value {} halves, {} nodes", r.value, r.nodes_visited));
                // Playing the principal variation must realise the value.
                let mut st = empty.clone();
                let mut diff = 0i64;
                for &s in &r.principal_variation {
                    let mover = st.to_move();
                    let out = st.apply_move(s).expect("pv moves are legal");
                    let gain = out.claimed_area().halves() as i64;
                    diff += if mover == Player::First { gain } else { -gain };
                }
                checked += 1;
                if !st.is_over() || diff != r.value {
                    violations.push(Violation::new(
                        checked,
                        format!("{w}x{h}: principal variation realises {}", r.value),
                        format!("realised {diff}, finished {}", st.is_over()),
                    ));
                }
            }
        }
        let mut swapped = empty.clone();
        swapped.set_to_move(Player::Second);
        checked += 1;
        let first_view = solve(&empty);
        let second_view = -solve(&swapped);
        if first_view != -second_view {
            violations.push(Violation::new(
                checked,
                format!("{w}x{h}: swapping players negates the first player's value"),
                format!("{first_view} vs {second_view}"),
            ));
        }
        for s in empty.legal_moves() {
            let (child, _) = empty.after(s).expect("legal");
            let v = solve(&child);
            for sym in board_symmetries(board) {
                let image = Segment::new(board_map(sym, board, s.a()), board_map(sym, board, s.b())).expect("image");
                let (twin, _) = empty.after(image).expect("symmetric image is legal");
                checked += 1;
                let tv = solve_with(&twin, &SolveOptions { node_budget: budget, symmetry: false, ..Default::default() });
                if tv.value != v {
                    violations.push(Violation::new(
                        checked,
                        format!("{w}x{h}: opening {s} and its image {image} have equal value {v}"),
                        tv.value.to_string(),
                    ));
                }
            }
        }
    }
    fn solve(state: &GameState) -> i64 {
        solve_with(state, &SolveOptions { node_budget: 20_000_000, ..SolveOptions::default() }).value
    }
    TheoremReport::finish("solver-sanity", json!({}), start, checked, violations, notes)
}

// ---------------------------------------------------------------------------
// Area formulas

/// Pick's formula against the shoelace formula on random simple cycles.
pub fn verify_pick(cycles: u64, side: i32, seed: u64) -> TheoremReport {
    let start = Instant::now();
    let violations: Vec<Violation> = (0..cycles)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = instance_rng(seed, i);
            let c = random_simple_cycle(&mut rng, side);
            let census = lattice_census(&c).expect("simple");
            let pick = pick_area(census.interior.len() as u64, census.boundary.len() as u64);
            let shoelace = shoelace_area(&c).expect("simple");
            (pick != shoelace).then(|| {
                Violation::new(i, format!("shoelace {shoelace}"), format!("pick {pick}"))
                    .with_region("cycle", &Region::new(c, &[]).expect("region"))
            })
        })
        .collect();
    TheoremReport::finish(
        "pick-shoelace",
        json!({"cycles": cycles, "side": side, "seed": seed}),
        start,
        cycles,
        violations,
        Vec::new(),
    )
}

/// The census of the first reference region: 12 boundary points, 2
/// interior points, area 7.
pub fn verify_fig2_census() -> TheoremReport {
    let start = Instant::now();
    let region = fixtures::region("fig2");
    let census = lattice_census(region.outer()).expect("simple");
    let mut violations = Vec::new();
    let observed = (census.boundary.len(), census.interior.len(), census.area());
    if observed != (12, 2, HalfArea::from_units(7)) {
        violations.push(Violation::new(
            0,
            "B=12, I=2, area 7",
            format!("B={}, I={}, area {}", observed.0, observed.1, observed.2),
        ));
    }
    let outside = region.outer().locate(LatticePoint::new(-1, -1)) != Location::Outside;
    if outside {
        violations.push(Violation::new(1, "(-1,-1) outside", "not outside"));
    }
    TheoremReport::finish("fig2-census", json!({}), start, 1, violations, Vec::new())
}

// ---------------------------------------------------------------------------
// Registry

/// Parameters accepted by [`run`]; each check reads the ones it needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyParams {
    pub variant: Variant,
    pub games: u64,
    pub width: u32,
    pub height: u32,
    pub seed: u64,
    pub n_max: u32,
    pub boundary_points: usize,
    pub max_box: Option<i32>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            variant: Variant::Triangles,
            games: 500,
            width: 3,
            height: 3,
            seed: 7,
            n_max: 3,
            boundary_points: 5,
            max_box: None,
        }
    }
}

pub const THEOREM_IDS: &[&str] = &[
    "pick-shoelace",
    "fig2-census",
    "turn-identity",
    "nested-diamond",
    "convex-ers",
    "enumeration-cross-check",
    "eye-theorems",
    "single-turn-claims",
    "min-double-deal",
    "double-deal-negatives",
    "doublecross-necessity",
    "engine-properties",
    "solver-sanity",
];

pub fn run(theorem: &str, p: &VerifyParams) -> Result<TheoremReport, String> {
    let board = || BoardSpec::new(p.width, p.height).map_err(|e| e.to_string());
    Ok(match theorem {
        "pick-shoelace" => verify_pick(p.games.max(1000), p.max_box.unwrap_or(10), p.seed),
        "fig2-census" => verify_fig2_census(),
        "turn-identity" | "turn-identity-triangles" | "turn-identity-polygons" => {
            let variant = match theorem {
                "turn-identity-triangles" => Variant::Triangles,
                "turn-identity-polygons" => Variant::Polygons,
                _ => p.variant,
            };
            verify_turn_identity(variant, p.games, board()?, p.seed)
        }
        "nested-diamond" => {
            if p.n_max > 4 {
                return Err("n_max must be at most 4".into());
            }
            verify_nested_diamond(p.n_max)
        }
        "convex-ers" => {
            let b = p.max_box.unwrap_or(8);
            if b > 8 || !(5..=7).contains(&p.boundary_points) {
                return Err("convex-ers needs boundary points in 5..=7 and a box of at most 8".into());
            }
            enumerate_convex_ers(p.boundary_points, b)
        }
        "enumeration-cross-check" => cross_check_enumerators(p.boundary_points, p.max_box.unwrap_or(4).min(4)),
        "eye-theorems" => {
            let b = p.max_box.unwrap_or(6);
            if b > 6 {
                return Err("eye-theorems needs a box of at most 6".into());
            }
            verify_eye_theorems(b)
        }
        "single-turn-claims" => verify_single_turn_claims_with(200, p.seed),
        "min-double-deal" => {
            let b = p.max_box.unwrap_or(4);
            if b > 4 {
                return Err("min-double-deal needs a box of at most 4".into());
            }
            verify_min_double_deal(b)
        }
        "double-deal-negatives" => verify_double_deal_negatives(),
        "doublecross-necessity" => verify_doublecross_necessity(p.games, board()?, p.seed),
        "engine-properties" => verify_engine_properties(p.games, p.seed),
        "solver-sanity" => verify_solver_sanity(),
        other => return Err(format!("unknown theorem id {other:?}; known: {}", THEOREM_IDS.join(", "))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_sorted_counterclockwise() {
        let d = primitive_directions(1);
        assert_eq!(d, vec![(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]);
    }

    #[test]
    fn unit_box_has_two_convex_classes() {
        // Triangle of area 1/2 and the unit square.
        let three = convex_shapes(3, 1, false).0;
        let four = convex_shapes(4, 1, false).0;
        assert_eq!(three.len(), 1);
        assert_eq!(four.len(), 1);
    }

    #[test]
    fn strict_hull_drops_collinear_points() {
        let pts = [(0, 0), (1, 0), (2, 0), (1, 1)].map(LatticePoint::from);
        assert_eq!(strict_hull(&pts).len(), 3);
    }

    #[test]
    fn maximal_irises_of_a_triangle_take_all_edges() {
        let pts = [(1, 1), (2, 1), (1, 2)].map(LatticePoint::from);
        let sets = maximal_irises(&pts);
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].len(), 3);
        // Crossing diagonals of a unit square give two maximal sets.
        let square = [(1, 1), (2, 1), (1, 2), (2, 2)].map(LatticePoint::from);
        assert_eq!(maximal_irises(&square).len(), 2);
        assert_eq!(maximal_irises(&[LatticePoint::new(3, 3)]), vec![Vec::<Segment>::new()]);
    }

    #[test]
    fn small_polygons_by_area() {
        let shapes = small_polygons(2, 5, 3);
        let areas: BTreeSet<u64> = shapes.iter().map(|s| shape_cycle(s).twice_area()).collect();
        assert_eq!(areas, BTreeSet::from([1, 2, 3]));
        // One class of area 1/2: every primitive triangle is unimodular-equivalent,
        // but up to the square symmetries there are several in a 2-box.
        assert!(shapes.iter().any(|s| s == &canonical_cycle(&[(0, 0), (1, 0), (0, 1)].map(LatticePoint::from))));
    }

    #[test]
    fn turn_identity_small_run() {
        let r = verify_turn_identity(Variant::Triangles, 20, BoardSpec::new(2, 2).unwrap(), 1);
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.checked, 20);
        let again = verify_turn_identity(Variant::Triangles, 20, BoardSpec::new(2, 2).unwrap(), 1);
        assert_eq!(r.without_timing(), again.without_timing());
    }

    #[test]
    fn report_json_has_the_documented_keys() {
        let r = verify_fig2_census();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["theorem", "params", "checked", "violations", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(r.passed());
    }

    #[test]
    fn region_around_a_doublecross() {
        // A hanging eye: square with a spoke from (0,1) to the centre point.
        let board = BoardSpec::new(3, 3).unwrap();
        let outer = LatticeCycle::from_coords(&[(0, 0), (2, 0), (2, 2), (0, 2)]).unwrap();
        let mut drawn = outer.primitive_segments();
        drawn.push(Segment::of((0, 1), (1, 1)));
        let state = GameState::from_position(board, Variant::Polygons, &drawn, &[], Player::First).unwrap();
        let s = Segment::of((1, 1), (2, 1));
        let region = region_around(&state, s).unwrap();
        assert_eq!(region.area(), HalfArea::from_units(4));
        assert_eq!(classify_eye(&region, Variant::Polygons).unwrap().kind, EyeKind::HangingEye);
        let (_, out) = state.after(s).unwrap();
        assert!(out.doublecross);
    }

    #[test]
    fn unknown_theorem_is_an_error() {
        assert!(run("nope", &VerifyParams::default()).is_err());
    }
}
