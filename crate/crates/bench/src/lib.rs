//! Shared positions for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgo_core::oracle::random_input;
use sgo_core::{apply_turn, Board, TurnInput};

/// A busy mid-game position reached by seeded random play, and the next input.
pub fn midgame(size: usize, turns: usize, seed: u64) -> (Board, TurnInput) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut board = Board::new(size).expect("valid size");
    for _ in 0..turns {
        let input = random_input(&board, &mut rng);
        if !input.is_double_pass() {
            board = apply_turn(&board, input).expect("generated input is valid").board;
        }
    }
    let input = random_input(&board, &mut rng);
    (board, input)
}
