//! Nested diamonds: the second player's mirroring strategy against the
//! scripted first player, and the exact solver on the smallest cases.

use polydots::engine::Variant;
use polydots::geometry::HalfArea;
use polydots::strategy::{nested_diamond_playout, solve_with, NestedDiamondSpec, SolveOptions};

fn main() {
    for n in 1..=4 {
        let spec = NestedDiamondSpec::centered(n);
        let (first, second) = nested_diamond_playout(&spec, Variant::Triangles).expect("playout");
        println!(
            "n = {n}: board {}x{}, total area {}, scripted playout gives first {first}, second {second}",
            spec.board().width(),
            spec.board().height(),
            spec.total_area()
        );
    }
    for n in 1..=2 {
        let spec = NestedDiamondSpec::centered(n);
        let g = spec.setup(spec.board(), Variant::Triangles).unwrap();
        let r = solve_with(&g, &SolveOptions { region: Some(spec.layer(n)), ..SolveOptions::default() });
        // The value is first minus second, and the two shares sum to the total.
        let total = spec.total_area().halves() as i64;
        let second = HalfArea::from_halves(((total - r.value) / 2) as u64);
        println!(
            "n = {n}: exact first-minus-second margin {} halves, so the second player can guarantee {second} ({} nodes)",
            r.value, r.nodes_visited
        );
    }
}
