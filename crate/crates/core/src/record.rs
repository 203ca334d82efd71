//! Line-oriented game records.
//!
//! ```text
//! sgo 1
//! size 7
//! setup
//! B C5
//! W D5
//! 1. B C4 W C4
//! 2. B D4 W pass
//! ```
//!
//! Keywords and coordinates are case-insensitive; `#` starts a comment.
//! The optional `setup` block lists `<cell code> <coord>` lines and ends at
//! the first turn line. Turns are numbered from 1 without gaps.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use thiserror::Error;

use crate::board::{Board, CellState};
use crate::engine::{Move, TurnInput};
use crate::fixture::{cell_code, parse_cell_code};
use crate::game::{new_game, GameConfig, GameError, GameState};
use crate::point::{CoordError, Point, MAX_SIZE, MIN_SIZE};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRecord {
    pub size: usize,
    pub setup: Vec<(Point, CellState)>,
    pub turns: Vec<TurnInput>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordErrorKind {
    #[error("expected `sgo {FORMAT_VERSION}` header")]
    MissingHeader,
    #[error("unsupported format version `{0}`")]
    UnsupportedVersion(String),
    #[error("expected `size N`")]
    MissingSize,
    #[error("size `{0}` is outside {MIN_SIZE}..={MAX_SIZE}")]
    SizeOutOfRange(String),
    #[error("{0}")]
    Coordinate(#[from] CoordError),
    #[error("unknown setup code `{0}`")]
    UnknownCellCode(String),
    #[error("setup point {0} listed twice")]
    DuplicateSetupPoint(Point),
    #[error("inconsistent entangled setup: {0}")]
    InconsistentSetup(String),
    #[error("expected turn {expected}, found `{found}`")]
    NonContiguousTurn { expected: usize, found: String },
    #[error("malformed turn line, expected `k. B <move> W <move>`")]
    MalformedTurn,
    #[error("setup must precede the first turn")]
    SetupAfterTurns,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct RecordError {
    pub line: usize,
    pub column: usize,
    pub kind: RecordErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("turn {turn}: {source}")]
pub struct ReplayError {
    /// 1-based; 0 means the setup itself was rejected.
    pub turn: usize,
    pub source: GameError,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token { text: &line[s..i], column: s + 1 });
                start = None;
            }
            _ => {}
        }
    }
    out
}

#[derive(PartialEq, Eq)]
enum Section {
    Header,
    Size,
    Body,
    Setup,
    Turns,
}

impl GameRecord {
    pub fn new(size: usize) -> GameRecord {
        GameRecord { size, setup: Vec::new(), turns: Vec::new() }
    }

    pub fn from_board(board: &Board) -> GameRecord {
        let cfg = GameConfig::from_board(board);
        GameRecord { size: cfg.size, setup: cfg.setup, turns: Vec::new() }
    }

    pub fn config(&self) -> GameConfig {
        GameConfig { size: self.size, setup: self.setup.clone(), max_turns: None }
    }

    /// Header and setup lines, without turns.
    pub fn header(&self) -> String {
        let mut out = format!("sgo {FORMAT_VERSION}\nsize {}\n", self.size);
        if !self.setup.is_empty() {
            out.push_str("setup\n");
            for (p, state) in &self.setup {
                let _ = writeln!(out, "{} {p}", cell_code(*state));
            }
        }
        out
    }

    /// The canonical line for turn `number` (1-based).
    pub fn turn_line(number: usize, input: &TurnInput) -> String {
        format!("{number}. B {} W {}\n", input.black, input.white)
    }

    pub fn serialize(&self) -> String {
        let mut out = self.header();
        for (i, t) in self.turns.iter().enumerate() {
            out.push_str(&GameRecord::turn_line(i + 1, t));
        }
        out
    }

    pub fn parse(text: &str) -> Result<GameRecord, Vec<RecordError>> {
        let mut errors = Vec::new();
        let mut record = GameRecord::new(0);
        let mut section = Section::Header;
        let mut seen_setup = BTreeSet::new();
        let mut setup_line = 0;
        let mut last_line = 0;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let tokens = tokenize(raw);
            let Some(first) = tokens.first() else { continue };
            let mut fail = |column: usize, kind: RecordErrorKind| errors.push(RecordError { line, column, kind });
            let keyword = first.text.to_ascii_lowercase();

            match section {
                Section::Header => {
                    match tokens.as_slice() {
                        [_, v] if keyword == "sgo" => {
                            if v.text != FORMAT_VERSION.to_string() {
                                fail(v.column, RecordErrorKind::UnsupportedVersion(v.text.to_string()));
                            }
                        }
                        _ => fail(first.column, RecordErrorKind::MissingHeader),
                    }
                    section = Section::Size;
                }
                Section::Size => {
                    match tokens.as_slice() {
                        [_, n] if keyword == "size" => match n.text.parse::<usize>() {
                            Ok(size) if (MIN_SIZE as usize..=MAX_SIZE as usize).contains(&size) => {
                                record.size = size;
                            }
                            _ => fail(n.column, RecordErrorKind::SizeOutOfRange(n.text.to_string())),
                        },
                        _ => fail(first.column, RecordErrorKind::MissingSize),
                    }
                    if record.size == 0 {
                        // Nothing below can be checked without a size.
                        return Err(errors);
                    }
                    section = Section::Body;
                }
                Section::Body | Section::Setup | Section::Turns if keyword == "setup" && tokens.len() == 1 => {
                    if section == Section::Body {
                        section = Section::Setup;
                        setup_line = line;
                    } else {
                        fail(first.column, RecordErrorKind::SetupAfterTurns);
                    }
                }
                _ if first.text.ends_with('.') => {
                    section = Section::Turns;
                    let expected = record.turns.len() + 1;
                    if first.text[..first.text.len() - 1] != expected.to_string() {
                        fail(first.column, RecordErrorKind::NonContiguousTurn {
                            expected,
                            found: first.text.to_string(),
                        });
                    }
                    match tokens.as_slice() {
                        [_, b, bm, w, wm]
                            if b.text.eq_ignore_ascii_case("b") && w.text.eq_ignore_ascii_case("w") =>
                        {
                            let mut parse_move = |tok: &Token| -> Option<Move> {
                                if tok.text.eq_ignore_ascii_case("pass") {
                                    return Some(Move::Pass);
                                }
                                match Point::parse_on(tok.text, record.size as u8) {
                                    Ok(p) => Some(Move::Place(p)),
                                    Err(e) => {
                                        fail(tok.column, e.into());
                                        None
                                    }
                                }
                            };
                            let black = parse_move(bm);
                            let white = parse_move(wm);
                            if let (Some(black), Some(white)) = (black, white) {
                                record.turns.push(TurnInput { black, white });
                            } else {
                                // keep numbering aligned with the text
                                record.turns.push(TurnInput::DOUBLE_PASS);
                            }
                        }
                        _ => {
                            fail(first.column, RecordErrorKind::MalformedTurn);
                            record.turns.push(TurnInput::DOUBLE_PASS);
                        }
                    }
                }
                Section::Setup => match tokens.as_slice() {
                    [code, coord] => {
                        let state = parse_cell_code(code.text).filter(|s| !s.is_empty());
                        if state.is_none() {
                            fail(code.column, RecordErrorKind::UnknownCellCode(code.text.to_string()));
                        }
                        match Point::parse_on(coord.text, record.size as u8) {
                            Ok(p) if !seen_setup.insert(p) => {
                                fail(coord.column, RecordErrorKind::DuplicateSetupPoint(p))
                            }
                            Ok(p) => {
                                if let Some(state) = state {
                                    record.setup.push((p, state));
                                }
                            }
                            Err(e) => fail(coord.column, e.into()),
                        }
                    }
                    _ => fail(first.column, RecordErrorKind::UnknownDirective(first.text.to_string())),
                },
                _ => fail(first.column, RecordErrorKind::UnknownDirective(first.text.to_string())),
            }
        }

        match section {
            Section::Header => errors.push(RecordError { line: last_line + 1, column: 1, kind: RecordErrorKind::MissingHeader }),
            Section::Size => errors.push(RecordError { line: last_line + 1, column: 1, kind: RecordErrorKind::MissingSize }),
            _ => {}
        }
        if errors.is_empty() {
            if let Err(e) = new_game(&record.config()) {
                errors.push(RecordError {
                    line: setup_line,
                    column: 1,
                    kind: RecordErrorKind::InconsistentSetup(e.to_string()),
                });
            }
        }
        if errors.is_empty() {
            Ok(record)
        } else {
            Err(errors)
        }
    }

    /// Plays the record from its setup. Errors carry the offending turn.
    pub fn replay(&self) -> Result<GameState, ReplayError> {
        let mut game = new_game(&self.config()).map_err(|source| ReplayError { turn: 0, source })?;
        for (i, &input) in self.turns.iter().enumerate() {
            game.play(input).map_err(|source| ReplayError { turn: i + 1, source })?;
        }
        Ok(game)
    }
}

impl fmt::Display for GameRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}
