//! Board coordinates and stone colors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Column letters in record notation. `I` is skipped, as on a real goban.
pub const COLUMN_LETTERS: &[u8; 25] = b"ABCDEFGHJKLMNOPQRSTUVWXYZ";

/// Largest supported board edge, bounded by the column alphabet.
pub const MAX_SIZE: u8 = 25;

/// Smallest supported board edge.
pub const MIN_SIZE: u8 = 2;

/// One of the two players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub const BOTH: [Color; 2] = [Color::Black, Color::White];
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Black => f.write_str("black"),
            Color::White => f.write_str("white"),
        }
    }
}

/// An intersection on the board. `row` 0 is the bottom edge (row "1" in
/// record notation) and `col` 0 is column "A".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub col: u8,
    pub row: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("malformed coordinate `{0}`")]
    Malformed(String),
    #[error("coordinate `{coord}` is off a {size}x{size} board")]
    OutOfBounds { coord: String, size: u8 },
}

impl Point {
    pub const fn new(col: u8, row: u8) -> Point {
        Point { col, row }
    }

    pub fn in_bounds(self, size: u8) -> bool {
        self.col < size && self.row < size
    }

    /// Row-major index with the bottom row first.
    #[inline]
    pub fn index(self, size: u8) -> usize {
        self.row as usize * size as usize + self.col as usize
    }

    #[inline]
    pub fn from_index(index: usize, size: u8) -> Point {
        let size = size as usize;
        Point::new((index % size) as u8, (index / size) as u8)
    }

    /// Parses a coordinate and checks it against the board size.
    pub fn parse_on(text: &str, size: u8) -> Result<Point, CoordError> {
        let p: Point = text.parse()?;
        if p.in_bounds(size) {
            Ok(p)
        } else {
            Err(CoordError::OutOfBounds { coord: text.to_string(), size })
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", COLUMN_LETTERS[self.col as usize] as char, self.row as u32 + 1)
    }
}

impl FromStr for Point {
    type Err = CoordError;

    fn from_str(s: &str) -> Result<Point, CoordError> {
        let malformed = || CoordError::Malformed(s.to_string());
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(malformed)?.to_ascii_uppercase();
        let col = COLUMN_LETTERS
            .iter()
            .position(|&c| c as char == letter)
            .ok_or_else(malformed)?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
            return Err(malformed());
        }
        let row: u32 = digits.parse().map_err(|_| malformed())?;
        if row == 0 || row > MAX_SIZE as u32 {
            return Err(malformed());
        }
        Ok(Point::new(col as u8, (row - 1) as u8))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Point, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Orthogonal neighbors of `p` that lie on a `size`x`size` board.
pub fn neighbors(p: Point, size: u8) -> impl Iterator<Item = Point> {
    let Point { col, row } = p;
    let candidates = [
        (col.checked_sub(1), Some(row)),
        (Some(col + 1), Some(row)),
        (Some(col), row.checked_sub(1)),
        (Some(col), Some(row + 1)),
    ];
    candidates.into_iter().filter_map(move |(c, r)| match (c, r) {
        (Some(c), Some(r)) if c < size && r < size => Some(Point::new(c, r)),
        _ => None,
    })
}
