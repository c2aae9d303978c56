//! Strategy-versus-strategy matches.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{BoardSpec, GameState, Variant};
use crate::strategy::{choose_move, StrategyId};

/// Win counts and the mean margin (first minus second, in half units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchStats {
    pub games: u64,
    pub p1_wins: u64,
    pub p2_wins: u64,
    pub draws: u64,
    pub mean_margin_halves: f64,
}

/// Plays one game. Each move's strategy seed is drawn from a ChaCha8 stream
/// keyed by `seed`, so the game is a pure function of its arguments.
pub fn play_game(board: BoardSpec, variant: Variant, seats: [StrategyId; 2], seed: u64) -> GameState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = GameState::new(board, variant);
    while !state.is_over() {
        let strategy = seats[(state.to_move().number() - 1) as usize];
        let m = choose_move(strategy, &state, rng.next_u64()).expect("an unfinished game has a move");
        state.apply_move(m).expect("strategies return legal moves");
    }
    state
}

/// Plays `games` games in parallel. Game `i` uses the seed stream `i` of
/// `seed`, so the result does not depend on the thread count.
pub fn simulate(board: BoardSpec, variant: Variant, seats: [StrategyId; 2], games: u64, seed: u64) -> MatchStats {
    let margins: Vec<i64> = (0..games)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let g = play_game(board, variant, seats, rng.next_u64());
            let (a, b) = g.scores();
            a.halves() as i64 - b.halves() as i64
        })
        .collect();
    let count = |f: fn(&i64) -> bool| margins.iter().filter(|m| f(m)).count() as u64;
    MatchStats {
        games,
        p1_wins: count(|m| *m > 0),
        p2_wins: count(|m| *m < 0),
        draws: count(|m| *m == 0),
        mean_margin_halves: if games == 0 { 0.0 } else { margins.iter().sum::<i64>() as f64 / games as f64 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_add_up_and_repeat() {
        let board = BoardSpec::new(3, 3).unwrap();
        let seats = [StrategyId::Random, StrategyId::GreedyChild];
        let a = simulate(board, Variant::Triangles, seats, 40, 1);
        assert_eq!(a.p1_wins + a.p2_wins + a.draws, 40);
        assert_eq!(a, simulate(board, Variant::Triangles, seats, 40, 1));
    }

    #[test]
    fn greedy_beats_random_on_average() {
        let board = BoardSpec::new(3, 3).unwrap();
        let s = simulate(board, Variant::Polygons, [StrategyId::GreedyChild, StrategyId::Random], 60, 2);
        assert!(s.mean_margin_halves > 0.0, "{s:?}");
    }
}
