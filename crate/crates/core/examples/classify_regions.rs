//! Runs the region classifier over every bundled fixture.

use polydots::engine::Variant;
use polydots::fixtures;
use polydots::shapes::{classify_eye, classify_reduction, single_turn_claim};

fn main() {
    println!("{:<14} {:>5} {:>3} {:>3}  {:<10} {:<22} {:<22} one turn", "region", "area", "B", "I", "variant", "reduction", "eye");
    for name in fixtures::names() {
        let region = fixtures::region(name);
        for variant in [Variant::Triangles, Variant::Polygons] {
            let reduction = classify_reduction(&region, variant).map(|r| format!("{r:?}")).unwrap_or_else(|e| e.to_string());
            let eye = match classify_eye(&region, variant) {
                Ok(e) if e.is_eye() && e.lazy => format!("{:?} (lazy)", e.kind),
                Ok(e) => format!("{:?}", e.kind),
                Err(e) => e.to_string(),
            };
            let one_turn = match single_turn_claim(&region, variant) {
                Some(moves) => format!("yes, {} moves", moves.len()),
                None => "no".to_string(),
            };
            println!(
                "{name:<14} {:>5} {:>3} {:>3}  {:<10} {reduction:<22} {eye:<22} {one_turn}",
                region.area().to_string(),
                region.boundary_points().len(),
                region.interior_points().len(),
                variant.token(),
            );
        }
    }
}
