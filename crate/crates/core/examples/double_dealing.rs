//! Double-dealing: declining area so the opponent must move first
//! elsewhere. Shows the smallest cession found and a move that only looks
//! like one.

use polydots::engine::Variant;
use polydots::fixtures;
use polydots::geometry::Segment;
use polydots::render::{render_text, segment_text};
use polydots::strategy::{double_deal_cession, is_double_dealing};

fn main() {
    let fig10 = fixtures::region("fig10").game(Variant::Polygons);
    print!("{}", render_text(&fig10.state));
    for m in fig10.state.legal_moves() {
        if let Some(ceded) = double_deal_cession(&fig10.state, m) {
            println!("{} double-deals, ceding {ceded}", segment_text(&m));
        }
    }

    let fig16 = fixtures::region("fig16").game(Variant::Polygons);
    print!("\n{}", render_text(&fig16.state));
    let m = Segment::of((1, 2), (1, 3));
    println!("{} double-deals: {}", segment_text(&m), is_double_dealing(&fig16.state, m));
}
