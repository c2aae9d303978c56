//! Saving a finished game as JSON and replaying it.

use polydots::engine::{BoardSpec, Variant};
use polydots::record::{load_record, save_record, GameRecord};
use polydots::verify::random_playout;

fn main() {
    let game = random_playout(BoardSpec::new(3, 3).unwrap(), Variant::Polygons, 11, 0);
    let bytes = save_record(&game).expect("a played game can be recorded");
    let text = String::from_utf8(bytes.clone()).unwrap();
    println!("{text}");

    let replayed = load_record(&bytes).expect("record replays");
    assert_eq!(replayed.drawn(), game.drawn());
    assert_eq!(replayed.scores(), game.scores());
    println!("replayed {} moves, scores {:?}", replayed.moves().len(), replayed.scores());

    // Tampering with a recorded claim is caught on load.
    let mut rec = GameRecord::from_json(&text).unwrap();
    if let Some(m) = rec.moves.iter_mut().find(|m| !m.claims.is_empty()) {
        m.claims[0].area_halves += 1;
        println!("tampered record: {}", GameRecord::from_json(&rec.to_json()).and_then(|r| r.replay()).unwrap_err());
    }
}
