//! Searches for convex extremely reduced shapes, regions where every pair
//! of non-adjacent boundary points has a dot strictly between them, so no
//! single move connects them.
//!
//! `cargo run --release --example enumerate_ers -- [boundary points] [box]`

use polydots::geometry::shoelace_area;
use polydots::verify::convex_shapes;
use polydots::LatticeCycle;

fn main() {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let max_box: i32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let (shapes, nodes) = convex_shapes(k, max_box, true);
    println!("{k} boundary points, {max_box}x{max_box} box: {} shape classes ({nodes} search nodes)", shapes.len());
    let mut by_area: Vec<_> = shapes
        .iter()
        .map(|pts| (shoelace_area(&LatticeCycle::new(pts.clone()).unwrap()).unwrap(), pts))
        .collect();
    by_area.sort();
    for (area, pts) in by_area.iter().take(10) {
        let coords: Vec<String> = pts.iter().map(|p| format!("({},{})", p.x, p.y)).collect();
        println!("  area {area:>5}: {}", coords.join(" "));
    }
}
