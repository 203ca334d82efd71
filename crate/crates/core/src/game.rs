//! Game lifecycle: turn sequencing, prisoners, termination and scoring.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::board::{Board, BoardError, CellState};
use crate::engine::{apply_turn, TurnError, TurnInput, TurnOutcome};
use crate::fixture::to_fixture;
use crate::point::{Color, Point};

pub const DEFAULT_SIZE: usize = 19;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub size: usize,
    /// Initial stones; points must be distinct.
    pub setup: Vec<(Point, CellState)>,
    /// Optional cap on the number of turns. There is no repetition rule, so
    /// automated play should set one.
    pub max_turns: Option<u32>,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig { size: DEFAULT_SIZE, setup: Vec::new(), max_turns: None }
    }
}

impl GameConfig {
    pub fn new(size: usize) -> GameConfig {
        GameConfig { size, ..GameConfig::default() }
    }

    /// A config whose setup reproduces `board`.
    pub fn from_board(board: &Board) -> GameConfig {
        let setup = board.points().map(|p| (p, board.get(p))).filter(|(_, s)| !s.is_empty()).collect();
        GameConfig { size: board.size() as usize, setup, max_turns: None }
    }

    pub fn with_max_turns(mut self, max_turns: u32) -> GameConfig {
        self.max_turns = Some(max_turns);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid board: {0}")]
    Board(#[from] BoardError),
    #[error("setup point {0} is off the board")]
    SetupOutOfBounds(Point),
    #[error("setup point {0} is listed twice")]
    SetupOverlap(Point),
    #[error("setup entry for {0} places no stone")]
    SetupEmpty(Point),
    #[error("the game is over")]
    GameOver,
    #[error("the game is not over")]
    NotOver,
    #[error(transparent)]
    InvalidMove(#[from] TurnError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    pub board: Board,
    pub turn: u32,
    /// Stones captured by black.
    pub prisoners_black: u32,
    /// Stones captured by white.
    pub prisoners_white: u32,
    pub over: bool,
    pub max_turns: Option<u32>,
    pub history: Vec<(TurnInput, TurnOutcome)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    BlackWins,
    WhiteWins,
    Tie,
}

impl Outcome {
    pub fn winner(self) -> Option<Color> {
        match self {
            Outcome::BlackWins => Some(Color::Black),
            Outcome::WhiteWins => Some(Color::White),
            Outcome::Tie => None,
        }
    }

    pub fn win_for(color: Color) -> Outcome {
        match color {
            Color::Black => Outcome::BlackWins,
            Color::White => Outcome::WhiteWins,
        }
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::BlackWins => Outcome::WhiteWins,
            Outcome::WhiteWins => Outcome::BlackWins,
            Outcome::Tie => Outcome::Tie,
        }
    }
}

/// Territory plus prisoners. There is no komi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Score {
    pub black_territory: u32,
    pub white_territory: u32,
    pub black_prisoners: u32,
    pub white_prisoners: u32,
    pub black_total: u32,
    pub white_total: u32,
    pub outcome: Outcome,
}

pub fn new_game(cfg: &GameConfig) -> Result<GameState, GameError> {
    let mut board = Board::new(cfg.size)?;
    let mut seen = BTreeSet::new();
    for &(p, state) in &cfg.setup {
        if !p.in_bounds(board.size()) {
            return Err(GameError::SetupOutOfBounds(p));
        }
        if !seen.insert(p) {
            return Err(GameError::SetupOverlap(p));
        }
        if state.is_empty() {
            return Err(GameError::SetupEmpty(p));
        }
        board.set(p, state);
    }
    board.check_registry()?;
    Ok(GameState {
        board,
        turn: 0,
        prisoners_black: 0,
        prisoners_white: 0,
        over: false,
        max_turns: cfg.max_turns,
        history: Vec::new(),
    })
}

impl GameState {
    pub fn new(cfg: &GameConfig) -> Result<GameState, GameError> {
        new_game(cfg)
    }

    pub fn is_over(&self) -> bool {
        self.over
    }

    pub fn prisoners(&self, color: Color) -> u32 {
        match color {
            Color::Black => self.prisoners_black,
            Color::White => self.prisoners_white,
        }
    }

    /// Successor state; `self` is untouched.
    pub fn step(&self, input: TurnInput) -> Result<GameState, GameError> {
        let mut next = self.clone();
        next.play(input)?;
        Ok(next)
    }

    /// In-place variant of [`GameState::step`]. On error the state is unchanged.
    pub fn play(&mut self, input: TurnInput) -> Result<&TurnOutcome, GameError> {
        if self.over {
            return Err(GameError::GameOver);
        }
        let outcome = apply_turn(&self.board, input)?;
        self.board = outcome.board.clone();
        self.prisoners_black += outcome.prisoners_black;
        self.prisoners_white += outcome.prisoners_white;
        self.turn += 1;
        if input.is_double_pass() || self.max_turns.is_some_and(|cap| self.turn >= cap) {
            self.over = true;
        }
        self.history.push((input, outcome));
        Ok(&self.history.last().expect("just pushed").1)
    }

    pub fn score(&self) -> Result<Score, GameError> {
        if !self.over {
            return Err(GameError::NotOver);
        }
        Ok(score_position(&self.board, self.prisoners_black, self.prisoners_white))
    }

    /// Stable digest of board, turn, prisoners and termination flag.
    pub fn fingerprint(&self) -> String {
        let text = format!(
            "{}turn {}\nprisoners {} {}\nover {}\n",
            to_fixture(&self.board),
            self.turn,
            self.prisoners_black,
            self.prisoners_white,
            self.over
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Scores a position as it stands.
///
/// Each empty region counts for the single color whose stones border it.
/// Entangled stones are walls of their nominal color; red stones are walls
/// of both, so a region bordered only by red and black is black's. Regions
/// with both colors, only red, or no walls at all are neutral.
pub fn score_position(board: &Board, prisoners_black: u32, prisoners_white: u32) -> Score {
    let mut seen = vec![false; board.area()];
    let (mut black_territory, mut white_territory) = (0u32, 0u32);
    for start in board.points() {
        let i = start.index(board.size());
        if seen[i] || !board.get(start).is_empty() {
            continue;
        }
        seen[i] = true;
        let mut stack = vec![start];
        let mut region = 0u32;
        let (mut touches_black, mut touches_white) = (false, false);
        while let Some(p) = stack.pop() {
            region += 1;
            for q in board.neighbors(p) {
                let state = board.get(q);
                match state {
                    CellState::Empty => {
                        let j = q.index(board.size());
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(q);
                        }
                    }
                    CellState::Red => {}
                    _ => match state.color() {
                        Some(Color::Black) => touches_black = true,
                        Some(Color::White) => touches_white = true,
                        None => {}
                    },
                }
            }
        }
        match (touches_black, touches_white) {
            (true, false) => black_territory += region,
            (false, true) => white_territory += region,
            _ => {}
        }
    }
    let black_total = black_territory + prisoners_black;
    let white_total = white_territory + prisoners_white;
    let outcome = match black_total.cmp(&white_total) {
        std::cmp::Ordering::Greater => Outcome::BlackWins,
        std::cmp::Ordering::Less => Outcome::WhiteWins,
        std::cmp::Ordering::Equal => Outcome::Tie,
    };
    Score {
        black_territory,
        white_territory,
        black_prisoners: prisoners_black,
        white_prisoners: prisoners_white,
        black_total,
        white_total,
        outcome,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Move;
    use crate::fixture::parse_diagram;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn new_game_from_setup() {
        let g = new_game(&GameConfig::new(7)).unwrap();
        assert!(g.board.is_empty());
        assert_eq!((g.turn, g.prisoners_black, g.prisoners_white), (0, 0, 0));
        assert!(!g.is_over());

        let cfg = GameConfig {
            size: 7,
            setup: vec![(pt("C4"), CellState::Black), (pt("C4"), CellState::White)],
            max_turns: None,
        };
        assert_eq!(new_game(&cfg), Err(GameError::SetupOverlap(pt("C4"))));
        let cfg = GameConfig { size: 7, setup: vec![(pt("H1"), CellState::Black)], max_turns: None };
        assert_eq!(new_game(&cfg), Err(GameError::SetupOutOfBounds(pt("H1"))));
        assert!(matches!(new_game(&GameConfig::new(1)), Err(GameError::Board(_))));
    }

    #[test]
    fn double_pass_ends_game() {
        let g = new_game(&GameConfig::new(7)).unwrap();
        let g = g.step(TurnInput::DOUBLE_PASS).unwrap();
        assert!(g.is_over());
        assert!(g.board.is_empty());
        assert_eq!(g.step(TurnInput::DOUBLE_PASS), Err(GameError::GameOver));
    }

    #[test]
    fn one_sided_pass_is_not_terminal() {
        let g = new_game(&GameConfig::new(7)).unwrap();
        let g = g.step(TurnInput::new(Move::Pass, Move::Place(pt("D4")))).unwrap();
        assert!(!g.is_over());
        assert_eq!(g.history.len(), 1);
    }

    #[test]
    fn turn_cap_ends_game() {
        let mut g = new_game(&GameConfig::new(5).with_max_turns(2)).unwrap();
        g.play(TurnInput::new(Move::Place(pt("A1")), Move::Pass)).unwrap();
        assert!(!g.is_over());
        g.play(TurnInput::new(Move::Place(pt("B1")), Move::Pass)).unwrap();
        assert!(g.is_over());
        assert_eq!(g.turn, 2);
    }

    #[test]
    fn invalid_move_leaves_state_alone() {
        let mut g = new_game(&GameConfig::new(5)).unwrap();
        g.play(TurnInput::new(Move::Place(pt("A1")), Move::Pass)).unwrap();
        let before = g.clone();
        assert!(matches!(
            g.play(TurnInput::new(Move::Pass, Move::Place(pt("A1")))),
            Err(GameError::InvalidMove(_))
        ));
        assert_eq!(g, before);
    }

    #[test]
    fn empty_board_is_a_tie() {
        let g = new_game(&GameConfig::new(7)).unwrap().step(TurnInput::DOUBLE_PASS).unwrap();
        let s = g.score().unwrap();
        assert_eq!((s.black_total, s.white_total), (0, 0));
        assert_eq!(s.outcome, Outcome::Tie);
    }

    #[test]
    fn lone_stone_owns_the_board() {
        let mut g = new_game(&GameConfig::new(7)).unwrap();
        g.play(TurnInput::new(Move::Place(pt("D4")), Move::Pass)).unwrap();
        assert_eq!(g.score(), Err(GameError::NotOver));
        g.play(TurnInput::DOUBLE_PASS).unwrap();
        let s = g.score().unwrap();
        assert_eq!(s.black_territory, 48);
        assert_eq!(s.outcome, Outcome::BlackWins);
    }

    #[test]
    fn red_walls_count_for_both_but_alone_for_neither() {
        let b = parse_diagram("size 3\nR . W\n. R W\n. . R\n").unwrap();
        let s = score_position(&b, 0, 0);
        // region {B3} touches R A3, W C3, R B2 -> white; region {A1,A2,B1} touches only red -> neutral
        assert_eq!(s.white_territory, 1);
        assert_eq!(s.black_territory, 0);
    }

    #[test]
    fn entangled_stones_wall_as_their_color() {
        let b = parse_diagram("size 3\n. b1 .\nb1 w1 .\n. . .\n").unwrap();
        let s = score_position(&b, 0, 0);
        // A3 touches only black e-stones; the rest touches both
        assert_eq!(s.black_territory, 1);
        assert_eq!(s.white_territory, 0);
    }
}
