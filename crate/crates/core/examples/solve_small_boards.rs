//! Exact values of small empty boards, with and without symmetry pruning.
//!
//! The value is the first player's score minus the second's, in half
//! units, under perfect play.

use std::time::Instant;

use polydots::engine::{BoardSpec, GameState, Variant};
use polydots::render::segment_text;
use polydots::strategy::{solve_with, SolveOptions};

fn main() {
    for (w, h) in [(2, 2), (2, 3), (3, 3)] {
        for variant in [Variant::Triangles, Variant::Polygons] {
            let g = GameState::new(BoardSpec::new(w, h).unwrap(), variant);
            for symmetry in [true, false] {
                if (w, h) == (3, 3) && !symmetry {
                    continue;
                }
                let start = Instant::now();
                let opts = SolveOptions { symmetry, node_budget: 50_000_000, ..SolveOptions::default() };
                let r = solve_with(&g, &opts);
                let pv: Vec<String> = r.principal_variation.iter().take(6).map(segment_text).collect();
                println!(
                    "{w}x{h} {variant:<9} symmetry={symmetry:<5} value {:>3} halves, complete {}, {} nodes, {:.2}s, line {}",
                    r.value,
                    r.complete,
                    r.nodes_visited,
                    start.elapsed().as_secs_f64(),
                    pv.join(" ")
                );
            }
        }
    }
}
