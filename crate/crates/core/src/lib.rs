//! Rules engine for time-symmetric Go, where both players move at once.
//!
//! Moves are submitted blind and resolved together: a point picked by both
//! players becomes a red stone that belongs to both colors until it is used
//! in a kill, and groups that capture each other in the same turn become an
//! entangled pair instead of dying. There is no komi and no ko.

pub mod board;
pub mod engine;
pub mod fixture;
pub mod game;
pub mod oracle;
pub mod point;
pub mod record;
pub mod sim;

pub use board::{Board, BoardError, CellState, Entanglement, Group, GroupKind, PairId};
pub use engine::{
    apply_turn, classify_mutual, replay_events, resolve_captures, validate_move, Event, Move, MoveError,
    TurnError, TurnInput, TurnOutcome,
};
pub use fixture::{parse_diagram, to_fixture, FixtureError};
pub use game::{GameConfig, GameError, GameState, Outcome, Score};
pub use point::{neighbors, Color, CoordError, Point};
pub use record::{GameRecord, RecordError};
