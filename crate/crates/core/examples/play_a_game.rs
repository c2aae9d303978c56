//! Two built-in strategies play one game of each variant on a 4x4 board.
//!
//! Run with `cargo run --example play_a_game -- [seed]`.

use polydots::engine::{BoardSpec, GameState, Variant};
use polydots::render::{render_text, segment_text};
use polydots::strategy::{choose_move, StrategyId};

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    for variant in [Variant::Triangles, Variant::Polygons] {
        let mut game = GameState::new(BoardSpec::new(4, 4).unwrap(), variant);
        let seats = [StrategyId::GreedyChild, StrategyId::DoubleDealer];
        let mut ply = 0u64;
        while !game.is_over() {
            let who = game.to_move();
            let strategy = seats[(who.number() - 1) as usize];
            let m = choose_move(strategy, &game, seed.wrapping_add(ply)).expect("game not over");
            let out = game.apply_move(m).expect("strategies return legal moves");
            if out.claims_anything() {
                let tag = if out.doublecross { " (doublecross)" } else { "" };
                println!(
                    "{:?} plays {} and claims {}{tag}",
                    who,
                    segment_text(&m),
                    out.claimed_area()
                );
            }
            ply += 1;
        }
        println!("\n{variant}, greedy (first) vs double-dealer (second):");
        print!("{}", render_text(&game));
        let acc = game.accounting();
        println!(
            "turns {}, doublecrosses {}, unused dots {}, segments {}\n",
            acc.turns, acc.doublecrosses, acc.unused_dots, acc.segments
        );
    }
}
