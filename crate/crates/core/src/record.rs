//! JSON game records: save a played game and replay it back into a state.
//!
//! The `claims` of each move and the final `result` block are redundant with
//! the move list. They are written for readers and checked on load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{BoardSpec, GameState, IllegalMove, Variant};
use crate::geometry::{LatticePoint, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardDims {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub outer: Vec<[i32; 2]>,
    pub area_halves: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub player: u8,
    pub from: [i32; 2],
    pub to: [i32; 2],
    #[serde(default)]
    pub claims: Vec<ClaimRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub p1_halves: u64,
    pub p2_halves: u64,
    pub turns: u64,
    pub doublecrosses: u64,
    pub unused_dots: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub board: BoardDims,
    pub variant: Variant,
    pub moves: Vec<MoveRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultRecord>,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed record: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("invalid board: {0}")]
    Board(#[from] crate::engine::BoardError),
    #[error("move {index}: {reason}")]
    IllegalReplay { index: usize, reason: IllegalMove },
    #[error("move {index}: degenerate segment")]
    Degenerate { index: usize },
    #[error("move {index}: recorded player {recorded} but player {expected} was to move")]
    WrongPlayer { index: usize, recorded: u8, expected: u8 },
    #[error("move {index}: recorded claims do not match the replay")]
    ClaimMismatch { index: usize },
    #[error("recorded result does not match the replay")]
    ResultMismatch,
    #[error("positions built from a setup cannot be recorded as a game")]
    SetupPosition,
}

fn pair(p: LatticePoint) -> [i32; 2] {
    [p.x, p.y]
}

impl GameRecord {
    pub fn from_state(state: &GameState) -> Result<GameRecord, RecordError> {
        if state.is_setup_position() {
            return Err(RecordError::SetupPosition);
        }
        let mut replay = GameState::new(state.board(), state.variant());
        let mut moves = Vec::with_capacity(state.moves().len());
        for m in state.moves() {
            // The oriented direction is lost in storage; segments are canonical.
            let out = replay.apply_move(m.segment).expect("state moves replay");
            moves.push(MoveRecord {
                player: m.player.number(),
                from: pair(m.segment.a()),
                to: pair(m.segment.b()),
                claims: out
                    .claimed
                    .iter()
                    .map(|(f, a)| ClaimRecord { outer: f.walk.iter().map(|p| pair(*p)).collect(), area_halves: a.halves() })
                    .collect(),
            });
        }
        Ok(GameRecord {
            board: BoardDims { width: state.board().width(), height: state.board().height() },
            variant: state.variant(),
            moves,
            result: Some(result_of(state)),
        })
    }

    /// Replays the record, validating every redundant field.
    pub fn replay(&self) -> Result<GameState, RecordError> {
        let board = BoardSpec::new(self.board.width, self.board.height)?;
        let mut state = GameState::new(board, self.variant);
        for (index, m) in self.moves.iter().enumerate() {
            let expected = state.to_move().number();
            let seg = Segment::new(LatticePoint::from(m.from), LatticePoint::from(m.to))
                .map_err(|_| RecordError::Degenerate { index })?;
            if state.is_over() {
                return Err(RecordError::IllegalReplay { index, reason: IllegalMove::GameOver });
            }
            if m.player != expected {
                return Err(RecordError::WrongPlayer { index, recorded: m.player, expected });
            }
            let out = state.apply_move(seg).map_err(|reason| RecordError::IllegalReplay { index, reason })?;
            let mut got: Vec<(Vec<[i32; 2]>, u64)> =
                out.claimed.iter().map(|(f, a)| (f.walk.iter().map(|p| pair(*p)).collect(), a.halves())).collect();
            let mut want: Vec<(Vec<[i32; 2]>, u64)> = m
                .claims
                .iter()
                .map(|c| {
                    let walk: Vec<LatticePoint> = c.outer.iter().map(|&p| LatticePoint::from(p)).collect();
                    (crate::engine::canonical_rotation(walk).iter().map(|p| pair(*p)).collect(), c.area_halves)
                })
                .collect();
            got.sort();
            want.sort();
            if got != want {
                return Err(RecordError::ClaimMismatch { index });
            }
        }
        if let Some(result) = &self.result {
            if *result != result_of(&state) {
                return Err(RecordError::ResultMismatch);
            }
        }
        Ok(state)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn from_json(text: &str) -> Result<GameRecord, RecordError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn result_of(state: &GameState) -> ResultRecord {
    let (p1, p2) = state.scores();
    let acc = state.accounting();
    ResultRecord {
        p1_halves: p1.halves(),
        p2_halves: p2.halves(),
        turns: acc.turns,
        doublecrosses: acc.doublecrosses,
        unused_dots: acc.unused_dots,
    }
}

/// Serializes a game as record bytes.
pub fn save_record(state: &GameState) -> Result<Vec<u8>, RecordError> {
    Ok(GameRecord::from_state(state)?.to_json().into_bytes())
}

/// Parses record bytes and replays them.
pub fn load_record(bytes: &[u8]) -> Result<GameState, RecordError> {
    let record: GameRecord = serde_json::from_slice(bytes)?;
    record.replay()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_game(seed: u64, w: u32, h: u32, variant: Variant) -> GameState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = GameState::new(BoardSpec::new(w, h).unwrap(), variant);
        while !g.is_over() {
            let moves = g.legal_moves();
            g.apply_move(*moves.choose(&mut rng).unwrap()).unwrap();
        }
        g
    }

    #[test]
    fn round_trip_random_games() {
        for seed in 0..40 {
            let variant = if seed % 2 == 0 { Variant::Triangles } else { Variant::Polygons };
            let g = random_game(seed, 3, 3, variant);
            let bytes = save_record(&g).unwrap();
            let back = load_record(&bytes).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn empty_record_is_fresh_state() {
        let text = r#"{"board":{"width":3,"height":3},"variant":"triangles","moves":[]}"#;
        let g = load_record(text.as_bytes()).unwrap();
        assert_eq!(g, GameState::new(BoardSpec::new(3, 3).unwrap(), Variant::Triangles));
    }

    #[test]
    fn nested_diamond_opening_replays() {
        let text = r#"{"board":{"width":5,"height":5},"variant":"triangles","moves":[
            {"player":1,"from":[1,2],"to":[2,2]},
            {"player":2,"from":[2,2],"to":[3,2]}]}"#;
        let g = load_record(text.as_bytes()).unwrap();
        assert_eq!(g.played().len(), 2);
    }

    #[test]
    fn tampered_records_are_rejected() {
        let g = random_game(3, 3, 3, Variant::Triangles);
        let mut rec = GameRecord::from_state(&g).unwrap();
        rec.result.as_mut().unwrap().p1_halves += 1;
        assert!(matches!(rec.replay(), Err(RecordError::ResultMismatch)));

        let mut rec = GameRecord::from_state(&g).unwrap();
        let idx = rec.moves.iter().position(|m| !m.claims.is_empty()).unwrap();
        rec.moves[idx].claims[0].area_halves += 2;
        assert!(matches!(rec.replay(), Err(RecordError::ClaimMismatch { .. })));

        let mut rec = GameRecord::from_state(&g).unwrap();
        rec.moves[0].player = 2;
        assert!(matches!(rec.replay(), Err(RecordError::WrongPlayer { .. })));

        assert!(matches!(load_record(b"{not json"), Err(RecordError::Malformed(_))));
    }
}
