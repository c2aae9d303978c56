use polydots::engine::{BoardSpec, GameState, Variant};
use polydots::geometry::*;
use polydots::record::GameRecord;
use polydots::strategy::{choose_move, solve, StrategyId};
use proptest::prelude::*;

/// An x-monotone polygon: a lower chain left to right and an upper chain
/// back, sharing only the two extreme points. Always simple.
fn monotone_cycle() -> impl Strategy<Value = LatticeCycle> {
    (2usize..6)
        .prop_flat_map(|k| {
            (
                proptest::collection::btree_set(0i32..10, k + 1),
                proptest::collection::vec((0i32..10, 1i32..5), k - 1),
                0i32..10,
                0i32..10,
            )
        })
        .prop_map(|(xs, mids, y0, y1)| {
            let xs: Vec<i32> = xs.into_iter().collect();
            let last = xs.len() - 1;
            let mut lower = vec![LatticePoint::new(xs[0], y0)];
            let mut upper = Vec::new();
            for (i, &(lo, gap)) in mids.iter().enumerate() {
                lower.push(LatticePoint::new(xs[i + 1], lo));
                upper.push(LatticePoint::new(xs[i + 1], lo + gap));
            }
            lower.push(LatticePoint::new(xs[last], y1));
            upper.reverse();
            lower.extend(upper);
            lower
        })
        .prop_filter_map("degenerate", |v| LatticeCycle::new(v).ok())
}

fn ray_inside(q: LatticePoint, c: &LatticeCycle) -> bool {
    let v = c.vertices();
    let (qx, qy) = (2 * q.x as i64, 2 * q.y as i64);
    let mut inside = false;
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let (ax, ay, bx, by) = (2 * a.x as i64, 2 * a.y as i64, 2 * b.x as i64, 2 * b.y as i64);
        if (ay > qy) != (by > qy) {
            let lhs = (qx - ax) * (by - ay);
            let rhs = (bx - ax) * (qy - ay);
            if (by > ay && lhs < rhs) || (by < ay && lhs > rhs) {
                inside = !inside;
            }
        }
    }
    inside
}

fn on_boundary(q: LatticePoint, c: &LatticeCycle) -> bool {
    c.edges().any(|(a, b)| {
        orient(a, b, q) == 0
            && q.x >= a.x.min(b.x)
            && q.x <= a.x.max(b.x)
            && q.y >= a.y.min(b.y)
            && q.y <= a.y.max(b.y)
    })
}

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Triangles), Just(Variant::Polygons)]
}

/// Plays `len` moves chosen by index from the legal list.
fn mid_game(w: u32, h: u32, v: Variant, picks: &[usize]) -> GameState {
    let mut g = GameState::new(BoardSpec::new(w, h).unwrap(), v);
    for &i in picks {
        if g.is_over() {
            break;
        }
        let moves = g.legal_moves();
        g.apply_move(moves[i % moves.len()]).unwrap();
    }
    g
}

fn point() -> impl Strategy<Value = (i32, i32)> {
    (-6i32..7, -6i32..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pick_agrees_with_shoelace(c in monotone_cycle()) {
        let census = lattice_census(&c).unwrap();
        let pick = pick_area(census.interior.len() as u64, census.boundary.len() as u64);
        prop_assert_eq!(pick, shoelace_area(&c).unwrap());
    }

    #[test]
    fn location_agrees_with_ray_casting(c in monotone_cycle(), x in -1i32..11, y in -1i32..16) {
        let q = LatticePoint::new(x, y);
        let expected = if on_boundary(q, &c) {
            Location::Boundary
        } else if ray_inside(q, &c) {
            Location::Inside
        } else {
            Location::Outside
        };
        prop_assert_eq!(point_in_cycle(q, &c), expected);
    }

    #[test]
    fn conflict_is_symmetric(a in point(), b in point(), c in point(), d in point()) {
        prop_assume!(a != b && c != d);
        let (s, t) = (Segment::of(a, b), Segment::of(c, d));
        prop_assert_eq!(segments_conflict(&s, &t), segments_conflict(&t, &s));
        prop_assert_eq!(interior_lattice_count(&s) == 0, is_primitive(&s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn area_is_conserved(v in variant(), w in 2u32..5, h in 2u32..5, picks in proptest::collection::vec(any::<usize>(), 0..40)) {
        let g = mid_game(w, h, v, &picks);
        let unclaimed: u64 = g.unclaimed_faces().iter().map(|f| f.area.halves()).sum();
        let total = g.claimed_area().halves() + unclaimed + g.open_area().halves();
        prop_assert_eq!(total, g.board().area().halves());
    }

    #[test]
    fn records_round_trip(v in variant(), picks in proptest::collection::vec(any::<usize>(), 0..30)) {
        let g = mid_game(3, 3, v, &picks);
        let rec = GameRecord::from_state(&g).unwrap();
        let back = GameRecord::from_json(&rec.to_json()).unwrap();
        prop_assert_eq!(&back, &rec);
        let replayed = back.replay().unwrap();
        prop_assert_eq!(replayed.drawn(), g.drawn());
        prop_assert_eq!(replayed.scores(), g.scores());
        prop_assert_eq!(replayed.to_move(), g.to_move());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn strategies_return_legal_moves(v in variant(), seed in any::<u64>(), picks in proptest::collection::vec(any::<usize>(), 0..25)) {
        let g = mid_game(4, 4, v, &picks);
        prop_assume!(!g.is_over());
        for id in [StrategyId::Random, StrategyId::GreedyChild, StrategyId::DoubleDealer] {
            let m = choose_move(id, &g, seed).unwrap();
            prop_assert!(g.check_move(m).is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// The solved value satisfies the negamax recurrence one ply down:
    /// a move that keeps the turn adds the child's value, a move that
    /// passes it subtracts it.
    #[test]
    fn solver_value_obeys_the_recurrence(v in variant(), picks in proptest::collection::vec(any::<usize>(), 2..8)) {
        let g = mid_game(2, 3, v, &picks);
        prop_assume!(!g.is_over());
        let root = solve(&g, u64::MAX);
        prop_assert!(root.complete);
        let best = g
            .legal_moves()
            .into_iter()
            .map(|m| {
                let (child, out) = g.after(m).unwrap();
                let gain = out.claimed_area().halves() as i64;
                let sub = if child.is_over() { 0 } else { solve(&child, u64::MAX).value };
                if child.is_over() || child.to_move() == g.to_move() { gain + sub } else { gain - sub }
            })
            .max()
            .unwrap();
        prop_assert_eq!(root.value, best);
    }
}
