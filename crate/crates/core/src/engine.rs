//! Simultaneous turn resolution.
//!
//! Both players' moves arrive together. Placements are written first (a
//! shared point becomes a red stone), then the capture fixpoint runs:
//!
//! 1. every plain group without liberties is a candidate;
//! 2. candidates of opposite colors that kill each other are entangled
//!    instead of captured (see [`classify_mutual`]);
//! 3. the remaining candidates die. Red stones and opposite-colored
//!    entangled groups touching a dying group were used for the kill and
//!    resolve to the killer's color, dissolving the entangled pair;
//! 4. dead stones leave the board together and become prisoners.
//!
//! The loop repeats until nothing changes, so a pair partner freed by a
//! resolution is captured on the next pass. A red stone that ends up fully
//! enclosed by plain stones of one color is taken over by that color.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::board::{Board, CellState, Group, PairId};
use crate::point::{CoordError, Color, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Pass,
    Place(Point),
}

impl Move {
    pub fn point(self) -> Option<Point> {
        match self {
            Move::Pass => None,
            Move::Place(p) => Some(p),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Pass => f.write_str("pass"),
            Move::Place(p) => p.fmt(f),
        }
    }
}

impl FromStr for Move {
    type Err = CoordError;

    fn from_str(s: &str) -> Result<Move, CoordError> {
        if s.eq_ignore_ascii_case("pass") {
            Ok(Move::Pass)
        } else {
            s.parse().map(Move::Place)
        }
    }
}

impl Serialize for Move {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Move {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Move, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One move per color, chosen blind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TurnInput {
    pub black: Move,
    pub white: Move,
}

impl TurnInput {
    pub fn new(black: Move, white: Move) -> TurnInput {
        TurnInput { black, white }
    }

    pub const DOUBLE_PASS: TurnInput = TurnInput { black: Move::Pass, white: Move::Pass };

    pub fn get(&self, color: Color) -> Move {
        match color {
            Color::Black => self.black,
            Color::White => self.white,
        }
    }

    /// Exchanges the two moves; paired with [`Board::color_flip`].
    pub fn swap(self) -> TurnInput {
        TurnInput { black: self.white, white: self.black }
    }

    pub fn is_double_pass(&self) -> bool {
        *self == TurnInput::DOUBLE_PASS
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    PlacedBlack { point: Point },
    PlacedWhite { point: Point },
    RedCreated { point: Point },
    EntangleCreated { pair: PairId, black: Vec<Point>, white: Vec<Point> },
    /// A red stone used in a kill takes the killer's color.
    RedResolved { point: Point, to: Color },
    /// A pair was used in a kill; both sides become plain stones.
    EResolved { pair: PairId, to: Color },
    GroupCaptured { color: Color, points: Vec<Point>, captured_by: Color },
    /// A red stone created this turn where the dying color's own stone
    /// would have been suicide joins the dying group and is captured with it.
    SuicideAbsorbedRed { point: Point, dying: Color },
    /// An enclosed red stone taken over by the enclosing color.
    RedCaptured { point: Point, by: Color },
}

fn points(ps: &[Point]) -> String {
    ps.iter().map(Point::to_string).collect::<Vec<_>>().join(",")
}

/// One line per event, in record notation.
impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::PlacedBlack { point } => write!(f, "black plays {point}"),
            Event::PlacedWhite { point } => write!(f, "white plays {point}"),
            Event::RedCreated { point } => write!(f, "red stone at {point}"),
            Event::EntangleCreated { pair, black, white } => {
                write!(f, "pair {pair} entangled: black {} white {}", points(black), points(white))
            }
            Event::RedResolved { point, to } => write!(f, "red {point} becomes {to}"),
            Event::EResolved { pair, to } => write!(f, "pair {pair} resolved for {to}"),
            Event::GroupCaptured { color, points: ps, captured_by } => {
                write!(f, "{captured_by} captures {color} {}", points(ps))
            }
            Event::SuicideAbsorbedRed { point, dying } => write!(f, "red {point} dies with {dying}"),
            Event::RedCaptured { point, by } => write!(f, "{by} takes enclosed red {point}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnOutcome {
    pub board: Board,
    pub events: Vec<Event>,
    /// Stones captured by black this turn.
    pub prisoners_black: u32,
    /// Stones captured by white this turn.
    pub prisoners_white: u32,
}

impl TurnOutcome {
    pub fn prisoners(&self, color: Color) -> u32 {
        match color {
            Color::Black => self.prisoners_black,
            Color::White => self.prisoners_white,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{0} is off the board")]
    OutOfBounds(Point),
    #[error("{0} is occupied")]
    Occupied(Point),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub struct TurnError {
    pub black: Option<MoveError>,
    pub white: Option<MoveError>,
}

impl TurnError {
    pub fn offenders(&self) -> Vec<Color> {
        Color::BOTH.into_iter().filter(|&c| self.get(c).is_some()).collect()
    }

    pub fn get(&self, color: Color) -> Option<MoveError> {
        match color {
            Color::Black => self.black,
            Color::White => self.white,
        }
    }
}

impl fmt::Display for TurnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for color in Color::BOTH {
            if let Some(err) = self.get(color) {
                if !first {
                    f.write_str("; ")?;
                }
                write!(f, "invalid move by {color}: {err}")?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Passing is always legal; a placement needs an empty on-board point.
/// Suicide is not checked: it depends on the opponent's hidden move.
pub fn validate_move(board: &Board, m: Move) -> Result<(), MoveError> {
    match m {
        Move::Pass => Ok(()),
        Move::Place(p) if !p.in_bounds(board.size()) => Err(MoveError::OutOfBounds(p)),
        Move::Place(p) if !board.get(p).is_empty() => Err(MoveError::Occupied(p)),
        Move::Place(_) => Ok(()),
    }
}

pub fn apply_turn(board: &Board, input: TurnInput) -> Result<TurnOutcome, TurnError> {
    let err = TurnError {
        black: validate_move(board, input.black).err(),
        white: validate_move(board, input.white).err(),
    };
    if err.black.is_some() || err.white.is_some() {
        return Err(err);
    }

    let mut board = board.clone();
    if input.is_double_pass() {
        return Ok(TurnOutcome { board, events: Vec::new(), prisoners_black: 0, prisoners_white: 0 });
    }

    let mut events = Vec::new();
    let mut red_created = None;
    match (input.black, input.white) {
        (Move::Place(b), Move::Place(w)) if b == w => {
            board.set(b, CellState::Red);
            events.push(Event::RedCreated { point: b });
            red_created = Some(b);
        }
        (black, white) => {
            if let Move::Place(p) = black {
                board.set(p, CellState::Black);
                events.push(Event::PlacedBlack { point: p });
            }
            if let Move::Place(p) = white {
                board.set(p, CellState::White);
                events.push(Event::PlacedWhite { point: p });
            }
        }
    }

    let resolution = resolve_captures(board, red_created);
    events.extend(resolution.events);
    Ok(TurnOutcome {
        board: resolution.board,
        events,
        prisoners_black: resolution.prisoners_black,
        prisoners_white: resolution.prisoners_white,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub board: Board,
    pub events: Vec<Event>,
    pub prisoners_black: u32,
    pub prisoners_white: u32,
}

impl Resolution {
    fn credit(&mut self, color: Color, stones: u32) {
        match color {
            Color::Black => self.prisoners_black += stones,
            Color::White => self.prisoners_white += stones,
        }
    }
}

/// Runs the capture fixpoint on a board whose placements are already
/// written. `red_created` is the point where both players collided this
/// turn, if any.
pub fn resolve_captures(board: Board, red_created: Option<Point>) -> Resolution {
    let mut res = Resolution { board, events: Vec::new(), prisoners_black: 0, prisoners_white: 0 };
    let mut first_pass = true;
    loop {
        let candidates: Vec<Group> = res
            .board
            .groups()
            .into_iter()
            .filter(|g| g.kind.is_plain() && res.board.liberties(g).is_empty())
            .collect();

        if candidates.is_empty() {
            if capture_enclosed_reds(&mut res) {
                first_pass = false;
                continue;
            }
            break;
        }

        let components = classify_mutual(&candidates, &res.board);
        let mut entangled = vec![false; candidates.len()];
        for component in &components {
            let pair = res.board.next_pair_id();
            let mut black = Vec::new();
            let mut white = Vec::new();
            for &i in component {
                entangled[i] = true;
                let g = &candidates[i];
                let color = g.color().expect("plain group");
                for &p in &g.stones {
                    res.board.set(p, CellState::entangled(color, pair));
                }
                match color {
                    Color::Black => black.extend_from_slice(&g.stones),
                    Color::White => white.extend_from_slice(&g.stones),
                }
            }
            black.sort_unstable();
            white.sort_unstable();
            res.events.push(Event::EntangleCreated { pair, black, white });
        }

        let mut dying: Vec<&Group> =
            candidates.iter().zip(&entangled).filter(|(_, &e)| !e).map(|(g, _)| g).collect();
        dying.sort_by_key(|g| g.stones[0]);
        if !dying.is_empty() {
            kill(&mut res, &dying, if first_pass { red_created } else { None });
        }
        first_pass = false;
    }
    res
}

/// Resolves the markers used against `dying`, then removes the dead.
fn kill(res: &mut Resolution, dying: &[&Group], fresh_red: Option<Point>) {
    let board = &res.board;
    let mut absorbed: BTreeMap<Point, Color> = BTreeMap::new();
    let mut reds: BTreeMap<Point, Color> = BTreeMap::new();
    let mut pairs: BTreeMap<PairId, Color> = BTreeMap::new();
    let mut dead: Vec<(Color, Vec<Point>)> = Vec::with_capacity(dying.len());

    for g in dying {
        let victim = g.color().expect("plain group");
        let killer = victim.opposite();
        let mut stones = g.stones.clone();
        for &p in &g.stones {
            for q in board.neighbors(p) {
                match board.get(q) {
                    CellState::Red if Some(q) == fresh_red && is_suicide(board, q, victim) => {
                        // Counted once, with the first group it touches.
                        if absorbed.insert(q, victim).is_none() {
                            stones.push(q);
                        }
                    }
                    CellState::Red => {
                        let prev = reds.insert(q, killer);
                        debug_assert!(prev.is_none_or(|c| c == killer), "red {q} claimed by both colors");
                    }
                    state @ (CellState::EBlack(k) | CellState::EWhite(k)) if state.color() == Some(killer) => {
                        let prev = pairs.insert(k, killer);
                        debug_assert!(prev.is_none_or(|c| c == killer), "pair {k} claimed by both colors");
                    }
                    _ => {}
                }
            }
        }
        stones.sort_unstable();
        stones.dedup();
        dead.push((victim, stones));
    }

    for (&point, &dying) in &absorbed {
        res.board.set(point, CellState::plain(dying));
        res.events.push(Event::SuicideAbsorbedRed { point, dying });
    }
    for (&point, &to) in &reds {
        res.board.set(point, CellState::plain(to));
        res.events.push(Event::RedResolved { point, to });
    }
    if !pairs.is_empty() {
        for p in res.board.points().collect::<Vec<_>>() {
            let state = res.board.get(p);
            if let Some(k) = state.pair() {
                if pairs.contains_key(&k) {
                    res.board.set(p, CellState::plain(state.color().expect("entangled stone")));
                }
            }
        }
        for (&pair, &to) in &pairs {
            res.events.push(Event::EResolved { pair, to });
        }
    }
    for (victim, stones) in dead {
        for &p in &stones {
            res.board.set(p, CellState::Empty);
        }
        res.credit(victim.opposite(), stones.len() as u32);
        res.events.push(Event::GroupCaptured { color: victim, points: stones, captured_by: victim.opposite() });
    }
}

/// Whether a plain `color` stone at `p` would leave its own chain without
/// liberties, i.e. the mover of `color` killed itself by playing there.
fn is_suicide(board: &Board, p: Point, color: Color) -> bool {
    let mut alone = board.clone();
    alone.set(p, CellState::plain(color));
    let chain = alone.group_at(p).expect("stone just placed");
    alone.liberties(&chain).is_empty()
}

/// Converts red stones with no liberties whose neighbors are all plain
/// stones of a single color. Returns whether anything changed.
fn capture_enclosed_reds(res: &mut Resolution) -> bool {
    let captured: Vec<(Point, Color)> = res
        .board
        .points()
        .filter(|&p| res.board.get(p) == CellState::Red)
        .filter_map(|p| {
            let mut colors = res.board.neighbors(p).map(|q| res.board.get(q).plain_color());
            let first = colors.next()??;
            colors.all(|c| c == Some(first)).then_some((p, first))
        })
        .collect();
    for &(point, by) in &captured {
        res.board.set(point, CellState::plain(by));
        res.credit(by, 1);
        res.events.push(Event::RedCaptured { point, by });
    }
    !captured.is_empty()
}

/// Groups zero-liberty candidates of opposite colors that kill each other.
///
/// Black candidate `b` and white candidate `w` are linked when they touch,
/// when one red stone touches both, or when some pair's white side touches
/// `b` while its black side touches `w` (the pair would be claimed by both
/// colors at once). Returns the connected components that contain both
/// colors, as sorted indices into `candidates`, ordered by lowest stone.
pub fn classify_mutual(candidates: &[Group], board: &Board) -> Vec<Vec<usize>> {
    let n = candidates.len();
    let mut owner: BTreeMap<Point, usize> = BTreeMap::new();
    for (i, g) in candidates.iter().enumerate() {
        for &p in &g.stones {
            owner.insert(p, i);
        }
    }

    struct Contacts {
        touching: BTreeSet<usize>,
        reds: BTreeSet<Point>,
        // pairs whose killer-colored side touches this group
        pairs: BTreeSet<PairId>,
    }
    let contacts: Vec<Contacts> = candidates
        .iter()
        .map(|g| {
            let killer = g.color().expect("plain group").opposite();
            let mut c = Contacts { touching: BTreeSet::new(), reds: BTreeSet::new(), pairs: BTreeSet::new() };
            for &p in &g.stones {
                for q in board.neighbors(p) {
                    if let Some(&j) = owner.get(&q) {
                        c.touching.insert(j);
                    }
                    match board.get(q) {
                        CellState::Red => {
                            c.reds.insert(q);
                        }
                        s @ (CellState::EBlack(k) | CellState::EWhite(k)) if s.color() == Some(killer) => {
                            c.pairs.insert(k);
                        }
                        _ => {}
                    }
                }
            }
            c
        })
        .collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if candidates[i].kind == candidates[j].kind {
                continue;
            }
            let (a, b) = (&contacts[i], &contacts[j]);
            let linked = a.touching.contains(&j)
                || !a.reds.is_disjoint(&b.reds)
                || !a.pairs.is_disjoint(&b.pairs);
            if linked {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }

    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        components.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = components
        .into_values()
        .filter(|members| {
            let colors: BTreeSet<_> = members.iter().map(|&i| candidates[i].kind).collect();
            colors.len() > 1
        })
        .collect();
    out.sort_by_key(|members| members.iter().map(|&i| candidates[i].stones[0]).min());
    out
}

/// Folds an event log over the pre-turn board, returning the post-turn
/// board and the prisoner deltas (black, white).
pub fn replay_events(board: &Board, events: &[Event]) -> (Board, u32, u32) {
    let mut board = board.clone();
    let (mut black, mut white) = (0u32, 0u32);
    let mut credit = |color: Color, n: u32| match color {
        Color::Black => black += n,
        Color::White => white += n,
    };
    for event in events {
        match event {
            Event::PlacedBlack { point } => board.set(*point, CellState::Black),
            Event::PlacedWhite { point } => board.set(*point, CellState::White),
            Event::RedCreated { point } => board.set(*point, CellState::Red),
            Event::EntangleCreated { pair, black, white } => {
                for &p in black {
                    board.set(p, CellState::EBlack(*pair));
                }
                for &p in white {
                    board.set(p, CellState::EWhite(*pair));
                }
            }
            Event::RedResolved { point, to } => board.set(*point, CellState::plain(*to)),
            Event::EResolved { pair, .. } => {
                for p in board.points().collect::<Vec<_>>() {
                    let state = board.get(p);
                    if state.pair() == Some(*pair) {
                        board.set(p, CellState::plain(state.color().expect("entangled stone")));
                    }
                }
            }
            Event::GroupCaptured { points, captured_by, .. } => {
                for &p in points {
                    board.set(p, CellState::Empty);
                }
                credit(*captured_by, points.len() as u32);
            }
            Event::SuicideAbsorbedRed { point, dying } => board.set(*point, CellState::plain(*dying)),
            Event::RedCaptured { point, by } => {
                board.set(*point, CellState::plain(*by));
                credit(*by, 1);
            }
        }
    }
    (board, black, white)
}
