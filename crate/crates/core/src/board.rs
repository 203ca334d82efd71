//! Board state, chains and liberties.
//!
//! The board is a plain value: a square grid of [`CellState`]s. Entangled
//! stones carry the id of the pair they belong to, and the pair registry is
//! derived from the grid on demand so the two can never drift apart.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::point::{neighbors, Color, Point, MAX_SIZE, MIN_SIZE};

/// Identifier of an entangled pair of groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PairId(pub u32);

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellState {
    #[default]
    Empty,
    Black,
    White,
    /// Both colors at once; created when both players pick the same point.
    Red,
    EBlack(PairId),
    EWhite(PairId),
}

impl CellState {
    pub fn plain(color: Color) -> CellState {
        match color {
            Color::Black => CellState::Black,
            Color::White => CellState::White,
        }
    }

    pub fn entangled(color: Color, pair: PairId) -> CellState {
        match color {
            Color::Black => CellState::EBlack(pair),
            Color::White => CellState::EWhite(pair),
        }
    }

    pub fn is_empty(self) -> bool {
        self == CellState::Empty
    }

    /// The color of a plain or entangled stone. Red and empty have none.
    pub fn color(self) -> Option<Color> {
        match self {
            CellState::Black | CellState::EBlack(_) => Some(Color::Black),
            CellState::White | CellState::EWhite(_) => Some(Color::White),
            CellState::Empty | CellState::Red => None,
        }
    }

    /// Color of a plain (non-entangled) stone.
    pub fn plain_color(self) -> Option<Color> {
        match self {
            CellState::Black => Some(Color::Black),
            CellState::White => Some(Color::White),
            _ => None,
        }
    }

    pub fn pair(self) -> Option<PairId> {
        match self {
            CellState::EBlack(k) | CellState::EWhite(k) => Some(k),
            _ => None,
        }
    }

    pub fn flipped(self) -> CellState {
        match self {
            CellState::Black => CellState::White,
            CellState::White => CellState::Black,
            CellState::EBlack(k) => CellState::EWhite(k),
            CellState::EWhite(k) => CellState::EBlack(k),
            other => other,
        }
    }

    pub fn kind(self) -> Option<GroupKind> {
        match self {
            CellState::Empty => None,
            CellState::Black => Some(GroupKind::Black),
            CellState::White => Some(GroupKind::White),
            CellState::Red => Some(GroupKind::Red),
            CellState::EBlack(_) => Some(GroupKind::EBlack),
            CellState::EWhite(_) => Some(GroupKind::EWhite),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKind {
    Black,
    White,
    Red,
    EBlack,
    EWhite,
}

impl GroupKind {
    pub fn color(self) -> Option<Color> {
        match self {
            GroupKind::Black | GroupKind::EBlack => Some(Color::Black),
            GroupKind::White | GroupKind::EWhite => Some(Color::White),
            GroupKind::Red => None,
        }
    }

    pub fn is_plain(self) -> bool {
        matches!(self, GroupKind::Black | GroupKind::White)
    }
}

/// A chain of stones that live and die together.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    pub kind: GroupKind,
    /// Sorted, nonempty.
    pub stones: Vec<Point>,
    pub pair: Option<PairId>,
}

impl Group {
    pub fn color(&self) -> Option<Color> {
        self.kind.color()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.stones.binary_search(&p).is_ok()
    }
}

/// Both sides of one entanglement.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Entanglement {
    pub black: BTreeSet<Point>,
    pub white: BTreeSet<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("board size {0} is outside {MIN_SIZE}..={MAX_SIZE}")]
    InvalidSize(usize),
    #[error("point {0} is off the board")]
    OutOfBounds(Point),
    #[error("entangled pair {pair} is missing its {missing} side")]
    HalfPair { pair: PairId, missing: Color },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Board {
    size: u8,
    cells: Vec<CellState>,
}

impl Board {
    pub fn new(size: usize) -> Result<Board, BoardError> {
        if !(MIN_SIZE as usize..=MAX_SIZE as usize).contains(&size) {
            return Err(BoardError::InvalidSize(size));
        }
        Ok(Board { size: size as u8, cells: vec![CellState::Empty; size * size] })
    }

    /// Builds a board from cells listed in index order (bottom row first),
    /// validating the pair registry.
    pub fn from_cells(size: usize, cells: Vec<CellState>) -> Result<Board, BoardError> {
        let mut board = Board::new(size)?;
        assert_eq!(cells.len(), size * size, "cell count must be size squared");
        board.cells = cells;
        board.check_registry()?;
        Ok(board)
    }

    pub fn size(&self) -> u8 {
        self.size
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn get(&self, p: Point) -> CellState {
        self.cells[p.index(self.size)]
    }

    /// Overwrites one cell. Callers that create or dissolve entangled stones
    /// are responsible for leaving the registry consistent.
    #[inline]
    pub fn set(&mut self, p: Point, state: CellState) {
        let i = p.index(self.size);
        self.cells[i] = state;
    }

    pub fn cells(&self) -> &[CellState] {
        &self.cells
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.cells.len()).map(move |i| Point::from_index(i, self.size))
    }

    pub fn neighbors(&self, p: Point) -> impl Iterator<Item = Point> {
        neighbors(p, self.size)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty())
    }

    pub fn count(&self, state: impl Fn(CellState) -> bool) -> usize {
        self.cells.iter().filter(|&&c| state(c)).count()
    }

    /// The entanglement registry, derived from the grid.
    pub fn entanglements(&self) -> BTreeMap<PairId, Entanglement> {
        let mut registry: BTreeMap<PairId, Entanglement> = BTreeMap::new();
        for p in self.points() {
            match self.get(p) {
                CellState::EBlack(k) => {
                    registry.entry(k).or_default().black.insert(p);
                }
                CellState::EWhite(k) => {
                    registry.entry(k).or_default().white.insert(p);
                }
                _ => {}
            }
        }
        registry
    }

    /// Every pair present on the board must have stones of both colors.
    pub fn check_registry(&self) -> Result<(), BoardError> {
        for (pair, e) in self.entanglements() {
            if e.black.is_empty() {
                return Err(BoardError::HalfPair { pair, missing: Color::Black });
            }
            if e.white.is_empty() {
                return Err(BoardError::HalfPair { pair, missing: Color::White });
            }
        }
        Ok(())
    }

    /// Smallest pair id strictly above every id in use.
    pub fn next_pair_id(&self) -> PairId {
        let max = self.cells.iter().filter_map(|c| c.pair()).map(|k| k.0).max().unwrap_or(0);
        PairId(max + 1)
    }

    /// Partitions the stones into groups, ordered by their lowest point.
    ///
    /// Plain stones group by 4-connectivity. Red stones are always singleton
    /// groups. Entangled stones group by (color, pair id) whether or not they
    /// touch.
    pub fn groups(&self) -> Vec<Group> {
        let n = self.cells.len();
        let mut seen = vec![false; n];
        let mut groups = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let state = self.cells[start];
            let Some(kind) = state.kind() else { continue };
            let mut stones = Vec::new();
            match state {
                CellState::Red => {
                    seen[start] = true;
                    stones.push(Point::from_index(start, self.size));
                }
                CellState::EBlack(_) | CellState::EWhite(_) => {
                    for (i, cell) in self.cells.iter().enumerate().skip(start) {
                        if *cell == state {
                            seen[i] = true;
                            stones.push(Point::from_index(i, self.size));
                        }
                    }
                    stones.sort_unstable();
                }
                _ => {
                    seen[start] = true;
                    queue.push_back(Point::from_index(start, self.size));
                    while let Some(p) = queue.pop_front() {
                        stones.push(p);
                        for q in self.neighbors(p) {
                            let j = q.index(self.size);
                            if !seen[j] && self.cells[j] == state {
                                seen[j] = true;
                                queue.push_back(q);
                            }
                        }
                    }
                    stones.sort_unstable();
                }
            }
            groups.push(Group { kind, stones, pair: state.pair() });
        }
        groups
    }

    /// The group containing `p`, if `p` holds a stone.
    pub fn group_at(&self, p: Point) -> Option<Group> {
        self.get(p).kind()?;
        self.groups().into_iter().find(|g| g.contains(p))
    }

    /// Empty points adjacent to any stone of `group`.
    pub fn liberties(&self, group: &Group) -> BTreeSet<Point> {
        group
            .stones
            .iter()
            .flat_map(|&p| self.neighbors(p))
            .filter(|&q| self.get(q).is_empty())
            .collect()
    }

    /// Swaps the two colors. Red and empty cells, and pair ids, are kept.
    pub fn color_flip(&self) -> Board {
        Board { size: self.size, cells: self.cells.iter().map(|c| c.flipped()).collect() }
    }
}

impl fmt::Debug for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::fixture::to_fixture(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::parse_diagram;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn make_board_bounds() {
        let b = Board::new(7).unwrap();
        assert_eq!(b.size(), 7);
        assert!(b.is_empty());
        assert!(b.entanglements().is_empty());
        assert_eq!(Board::new(19).unwrap().area(), 361);
        assert_eq!(Board::new(1), Err(BoardError::InvalidSize(1)));
        assert_eq!(Board::new(26), Err(BoardError::InvalidSize(26)));
        assert!(Board::new(25).is_ok());
    }

    #[test]
    fn adjacent_black_stones_form_one_group() {
        let mut b = Board::new(7).unwrap();
        b.set(pt("C5"), CellState::Black);
        b.set(pt("C6"), CellState::Black);
        let groups = b.groups();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].kind, GroupKind::Black);
        assert_eq!(groups[0].stones, vec![pt("C5"), pt("C6")]);
    }

    #[test]
    fn adjacent_reds_stay_singletons() {
        let mut b = Board::new(5).unwrap();
        b.set(pt("B2"), CellState::Red);
        b.set(pt("B3"), CellState::Red);
        let groups = b.groups();
        assert_eq!(groups.len(), 2);
        assert!(groups.iter().all(|g| g.kind == GroupKind::Red && g.stones.len() == 1));
    }

    #[test]
    fn entangled_group_spans_disconnected_stones() {
        let mut b = Board::new(5).unwrap();
        b.set(pt("A1"), CellState::EBlack(PairId(3)));
        b.set(pt("E5"), CellState::EBlack(PairId(3)));
        b.set(pt("C3"), CellState::EWhite(PairId(3)));
        b.set(pt("A2"), CellState::Black);
        let groups = b.groups();
        assert_eq!(groups.len(), 3);
        let eb = groups.iter().find(|g| g.kind == GroupKind::EBlack).unwrap();
        assert_eq!(eb.stones, vec![pt("A1"), pt("E5")]);
        assert_eq!(eb.pair, Some(PairId(3)));
        // the plain stone next to an e-stone keeps its own group
        let plain = groups.iter().find(|g| g.kind == GroupKind::Black).unwrap();
        assert_eq!(plain.stones, vec![pt("A2")]);
    }

    #[test]
    fn lone_stone_has_four_liberties() {
        let mut b = Board::new(7).unwrap();
        b.set(pt("D4"), CellState::Black);
        let g = b.group_at(pt("D4")).unwrap();
        assert_eq!(b.liberties(&g).len(), 4);
    }

    #[test]
    fn sealed_black_pair_has_one_liberty() {
        let b = parse_diagram(
            "size 7\n\
             . W . W B . .\n\
             . W B W B . .\n\
             . W B W . . .\n\
             . . R . . . .\n\
             . . . . . . .\n\
             . . . . . . .\n\
             . . . . . . .\n",
        )
        .unwrap();
        let g = b.group_at(pt("C5")).unwrap();
        assert_eq!(b.liberties(&g), BTreeSet::from([pt("C7")]));
    }

    #[test]
    fn flip_is_involution_and_fixes_red() {
        let mut b = Board::new(4).unwrap();
        b.set(pt("A1"), CellState::Black);
        b.set(pt("B1"), CellState::EWhite(PairId(2)));
        b.set(pt("C1"), CellState::EBlack(PairId(2)));
        b.set(pt("D4"), CellState::Red);
        let f = b.color_flip();
        assert_eq!(f.get(pt("A1")), CellState::White);
        assert_eq!(f.get(pt("B1")), CellState::EBlack(PairId(2)));
        assert_eq!(f.get(pt("D4")), CellState::Red);
        assert_eq!(f.color_flip(), b);

        let reds = Board::from_cells(3, vec![CellState::Red; 9]).unwrap();
        assert_eq!(reds.color_flip(), reds);
    }

    #[test]
    fn half_pair_is_rejected() {
        let mut cells = vec![CellState::Empty; 9];
        cells[0] = CellState::EBlack(PairId(1));
        assert_eq!(
            Board::from_cells(3, cells),
            Err(BoardError::HalfPair { pair: PairId(1), missing: Color::White })
        );
    }
}
