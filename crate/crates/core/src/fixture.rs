//! ASCII board diagrams.
//!
//! ```text
//! size 3
//! . B w1
//! R b1 .
//! . . W
//! ```
//!
//! The first line is `size N`, followed by N rows from the top edge down,
//! each holding N space-separated cell codes: `.` empty, `B` black, `W`
//! white, `R` red, `b<k>`/`w<k>` the black/white side of entangled pair k.
//! Blank lines and `#` comments are ignored.

use std::fmt::Write;

use thiserror::Error;

use crate::board::{Board, BoardError, CellState, PairId};
use crate::point::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("line {line}: expected `size N`")]
    MissingSize { line: usize },
    #[error("line {line}: {source}")]
    Size { line: usize, source: BoardError },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RowWidth { line: usize, expected: usize, found: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("line {line}, column {column}: unknown cell code `{code}`")]
    UnknownCode { line: usize, column: usize, code: String },
    #[error("inconsistent entanglement: {0}")]
    InconsistentPair(BoardError),
}

/// Cell code used by diagrams and record setup blocks.
pub fn cell_code(state: CellState) -> String {
    match state {
        CellState::Empty => ".".into(),
        CellState::Black => "B".into(),
        CellState::White => "W".into(),
        CellState::Red => "R".into(),
        CellState::EBlack(k) => format!("b{k}"),
        CellState::EWhite(k) => format!("w{k}"),
    }
}

/// Inverse of [`cell_code`]. The single-letter codes are case-insensitive.
pub fn parse_cell_code(code: &str) -> Option<CellState> {
    match code {
        "." => return Some(CellState::Empty),
        "B" | "b" => return Some(CellState::Black),
        "W" | "w" => return Some(CellState::White),
        "R" | "r" => return Some(CellState::Red),
        _ => {}
    }
    let (head, digits) = code.split_at(1);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    let k = PairId(digits.parse().ok()?);
    match head {
        "b" | "B" => Some(CellState::EBlack(k)),
        "w" | "W" => Some(CellState::EWhite(k)),
        _ => None,
    }
}

/// Canonical diagram text, newline-terminated.
pub fn to_fixture(board: &Board) -> String {
    let size = board.size();
    let mut out = format!("size {size}\n");
    for row in (0..size).rev() {
        for col in 0..size {
            if col > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", cell_code(board.get(Point::new(col, row))));
        }
        out.push('\n');
    }
    out
}

pub fn parse_diagram(text: &str) -> Result<Board, FixtureError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(FixtureError::MissingSize { line: 1 })?;
    let size: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        [kw, n] if kw.eq_ignore_ascii_case("size") => {
            n.parse().map_err(|_| FixtureError::MissingSize { line })?
        }
        _ => return Err(FixtureError::MissingSize { line }),
    };
    let mut board = Board::new(size).map_err(|source| FixtureError::Size { line, source })?;

    let mut rows = 0;
    for (line, text) in lines {
        if rows >= size {
            rows += 1;
            continue;
        }
        let codes: Vec<&str> = text.split_whitespace().collect();
        if codes.len() != size {
            return Err(FixtureError::RowWidth { line, expected: size, found: codes.len() });
        }
        let row = (size - 1 - rows) as u8;
        for (col, code) in codes.into_iter().enumerate() {
            let state = parse_cell_code(code).ok_or_else(|| FixtureError::UnknownCode {
                line,
                column: col + 1,
                code: code.to_string(),
            })?;
            board.set(Point::new(col as u8, row), state);
        }
        rows += 1;
    }
    if rows != size {
        return Err(FixtureError::RowCount { expected: size, found: rows });
    }
    board.check_registry().map_err(FixtureError::InconsistentPair)?;
    Ok(board)
}
