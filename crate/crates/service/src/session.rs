//! One match between two players.
//!
//! Each color commits a move for the current turn without seeing the
//! other's. The turn resolves the moment the second commitment arrives.
//! Until then the only thing anybody else can learn is that a commitment
//! exists.

use serde::{Deserialize, Serialize};
use sgo_core::fixture::cell_code;
use sgo_core::game::score_position;
use sgo_core::{Color, Event, GameConfig, GameState, Move, Outcome, Point, Score, TurnInput};

use crate::error::ServiceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Viewer {
    Black,
    White,
    Spectator,
}

impl From<Color> for Viewer {
    fn from(c: Color) -> Viewer {
        match c {
            Color::Black => Viewer::Black,
            Color::White => Viewer::White,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Status {
    /// Waiting for both players to show up.
    Open,
    InProgress,
    Finished {
        outcome: Outcome,
        /// Absent when the game ended by resignation.
        score: Option<Score>,
        resigned: Option<Color>,
    },
    /// The journal could not be replayed.
    Abandoned,
}

/// A resolved turn as shown to players and spectators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedTurn {
    pub turn: u32,
    pub black: Move,
    pub white: Move,
    pub events: Vec<Event>,
    pub prisoners_black: u32,
    pub prisoners_white: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Committed {
    pub black: bool,
    pub white: bool,
}

/// What any caller may see. Never contains a pending move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicState {
    pub match_id: String,
    pub you: Viewer,
    pub size: u8,
    /// Cell codes, top row first.
    pub board: Vec<Vec<String>>,
    /// Number of resolved turns; commitments are for turn `turn + 1`.
    pub turn: u32,
    pub prisoners_black: u32,
    pub prisoners_white: u32,
    pub status: Status,
    pub committed: Committed,
    pub history: Vec<ResolvedTurn>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SubmitOutcome {
    /// Stored; waiting for the opponent.
    Committed { turn: u32 },
    Resolved(ResolvedTurn),
}

#[derive(Clone, Debug)]
pub struct MatchSession {
    pub id: String,
    black_token: String,
    white_token: String,
    pub config: GameConfig,
    pub game: GameState,
    joined: [bool; 2],
    pending: [Option<Move>; 2],
    pub status: Status,
}

fn slot(c: Color) -> usize {
    match c {
        Color::Black => 0,
        Color::White => 1,
    }
}

impl MatchSession {
    pub fn new(id: String, black_token: String, white_token: String, config: GameConfig) -> Result<MatchSession, ServiceError> {
        let game = GameState::new(&config).map_err(|e| ServiceError::InvalidConfig(e.to_string()))?;
        Ok(MatchSession {
            id,
            black_token,
            white_token,
            config,
            game,
            joined: [false; 2],
            pending: [None; 2],
            status: Status::Open,
        })
    }

    pub fn token(&self, color: Color) -> &str {
        match color {
            Color::Black => &self.black_token,
            Color::White => &self.white_token,
        }
    }

    pub fn joined(&self, color: Color) -> bool {
        self.joined[slot(color)]
    }

    pub fn authenticate(&self, token: &str) -> Result<Color, ServiceError> {
        Color::BOTH.into_iter().find(|&c| self.token(c) == token).ok_or(ServiceError::Unauthorized)
    }

    /// Resolves a token to a viewer; no token means spectator.
    pub fn viewer(&self, token: Option<&str>) -> Result<Viewer, ServiceError> {
        match token {
            None => Ok(Viewer::Spectator),
            Some(t) => self.authenticate(t).map(Viewer::from),
        }
    }

    fn ensure_live(&self) -> Result<(), ServiceError> {
        match self.status {
            Status::Finished { .. } | Status::Abandoned => Err(ServiceError::MatchFinished),
            _ => Ok(()),
        }
    }

    pub fn mark_joined(&mut self, color: Color) {
        self.joined[slot(color)] = true;
        if self.status == Status::Open && self.joined.iter().all(|&j| j) {
            self.status = Status::InProgress;
        }
    }

    pub fn join(&mut self, token: &str) -> Result<Color, ServiceError> {
        let color = self.authenticate(token)?;
        self.ensure_live()?;
        self.mark_joined(color);
        Ok(color)
    }

    /// Commits `mv` for `turn` (1-based). Committing also counts as joining.
    pub fn submit(&mut self, token: &str, mv: Move, turn: u32) -> Result<SubmitOutcome, ServiceError> {
        let color = self.authenticate(token)?;
        self.ensure_live()?;
        let expected = self.game.turn + 1;
        if turn != expected {
            return Err(ServiceError::WrongTurn { expected, got: turn });
        }
        if let Some(prev) = self.pending[slot(color)] {
            return if prev == mv {
                Ok(SubmitOutcome::Committed { turn })
            } else {
                Err(ServiceError::AlreadyCommittedDifferently)
            };
        }
        sgo_core::validate_move(&self.game.board, mv).map_err(|e| ServiceError::InvalidMove(e.to_string()))?;
        self.mark_joined(color);
        self.pending[slot(color)] = Some(mv);

        match self.pending {
            [Some(black), Some(white)] => {
                let resolved = self.resolve(TurnInput::new(black, white))?;
                Ok(SubmitOutcome::Resolved(resolved))
            }
            _ => Ok(SubmitOutcome::Committed { turn }),
        }
    }

    /// Applies a full turn. Both pending slots clear in the same step.
    pub fn resolve(&mut self, input: TurnInput) -> Result<ResolvedTurn, ServiceError> {
        let next = self.game.step(input).map_err(|e| ServiceError::InvalidMove(e.to_string()))?;
        self.game = next;
        self.pending = [None; 2];
        if self.status == Status::Open {
            self.status = Status::InProgress;
        }
        if self.game.is_over() {
            let score = self.game.score().expect("game is over");
            self.status = Status::Finished { outcome: score.outcome, score: Some(score), resigned: None };
        }
        Ok(self.resolved_turn(self.game.history.len() - 1))
    }

    pub fn resign(&mut self, token: &str) -> Result<Color, ServiceError> {
        let color = self.authenticate(token)?;
        if matches!(self.status, Status::Finished { .. } | Status::Abandoned) {
            return Err(ServiceError::AlreadyFinished);
        }
        self.finish_by_resignation(color);
        Ok(color)
    }

    pub fn finish_by_resignation(&mut self, color: Color) {
        self.pending = [None; 2];
        self.status = Status::Finished { outcome: Outcome::win_for(color.opposite()), score: None, resigned: Some(color) };
    }

    pub fn resolved_turn(&self, index: usize) -> ResolvedTurn {
        let (input, outcome) = &self.game.history[index];
        ResolvedTurn {
            turn: index as u32 + 1,
            black: input.black,
            white: input.white,
            events: outcome.events.clone(),
            prisoners_black: outcome.prisoners_black,
            prisoners_white: outcome.prisoners_white,
        }
    }

    /// Resolved turns after the first `since`.
    pub fn turns_since(&self, since: usize) -> Vec<ResolvedTurn> {
        (since.min(self.game.history.len())..self.game.history.len()).map(|i| self.resolved_turn(i)).collect()
    }

    pub fn view(&self, you: Viewer) -> PublicState {
        let board = &self.game.board;
        let size = board.size();
        let rows = (0..size)
            .rev()
            .map(|row| (0..size).map(|col| cell_code(board.get(Point::new(col, row)))).collect())
            .collect();
        PublicState {
            match_id: self.id.clone(),
            you,
            size,
            board: rows,
            turn: self.game.turn,
            prisoners_black: self.game.prisoners_black,
            prisoners_white: self.game.prisoners_white,
            status: self.status.clone(),
            committed: Committed { black: self.pending[0].is_some(), white: self.pending[1].is_some() },
            history: self.turns_since(0),
        }
    }

    /// Current score of the board as it stands, whether or not the game is over.
    pub fn provisional_score(&self) -> Score {
        score_position(&self.game.board, self.game.prisoners_black, self.game.prisoners_white)
    }
}
