//! Reference implementation of turn resolution for differential testing.
//!
//! Everything here is written from the rules again, without touching the
//! engine's chain or liberty code: a plain row/column grid, chains labelled
//! by repeated relaxation, and every question answered by rescanning the
//! whole grid. It is slow on purpose and only meant for small boards.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::board::{Board, CellState, PairId};
use crate::engine::{apply_turn, Event, Move, MoveError, TurnError, TurnInput, TurnOutcome};
use crate::fixture::to_fixture;
use crate::point::{Color, Point};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Stone {
    Open,
    Black,
    White,
    Red,
    EntBlack(u32),
    EntWhite(u32),
}

impl Stone {
    fn plain(self) -> Option<Color> {
        match self {
            Stone::Black => Some(Color::Black),
            Stone::White => Some(Color::White),
            _ => None,
        }
    }
}

fn slot(color: Color) -> usize {
    match color {
        Color::Black => 0,
        Color::White => 1,
    }
}

fn stone_of(color: Color) -> Stone {
    if color == Color::Black {
        Stone::Black
    } else {
        Stone::White
    }
}

struct Grid {
    n: usize,
    at: Vec<Vec<Stone>>,
}

impl Grid {
    fn from_board(board: &Board) -> Grid {
        let n = board.size() as usize;
        let mut at = vec![vec![Stone::Open; n]; n];
        for (r, row) in at.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = match board.get(Point::new(c as u8, r as u8)) {
                    CellState::Empty => Stone::Open,
                    CellState::Black => Stone::Black,
                    CellState::White => Stone::White,
                    CellState::Red => Stone::Red,
                    CellState::EBlack(PairId(k)) => Stone::EntBlack(k),
                    CellState::EWhite(PairId(k)) => Stone::EntWhite(k),
                };
            }
        }
        Grid { n, at }
    }

    fn to_board(&self) -> Board {
        let mut board = Board::new(self.n).expect("size came from a board");
        for r in 0..self.n {
            for c in 0..self.n {
                let state = match self.at[r][c] {
                    Stone::Open => CellState::Empty,
                    Stone::Black => CellState::Black,
                    Stone::White => CellState::White,
                    Stone::Red => CellState::Red,
                    Stone::EntBlack(k) => CellState::EBlack(PairId(k)),
                    Stone::EntWhite(k) => CellState::EWhite(PairId(k)),
                };
                board.set(Point::new(c as u8, r as u8), state);
            }
        }
        board
    }

    fn adjacent(&self, r: usize, c: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (dr, dc) in [(-1i32, 0i32), (1, 0), (0, -1), (0, 1)] {
            let (rr, cc) = (r as i32 + dr, c as i32 + dc);
            if rr >= 0 && cc >= 0 && (rr as usize) < self.n && (cc as usize) < self.n {
                out.push((rr as usize, cc as usize));
            }
        }
        out
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|r| (0..self.n).map(move |c| (r, c))).collect()
    }

    /// Chain label per cell: plain stones by relaxation over same-stone
    /// neighbors, entangled stones by identical (color, pair), red alone.
    fn labels(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.n;
        let mut label = vec![vec![None; n]; n];
        for (r, c) in self.cells() {
            if self.at[r][c] != Stone::Open {
                label[r][c] = Some(r * n + c);
            }
        }
        for (r, c) in self.cells() {
            if let Stone::EntBlack(_) | Stone::EntWhite(_) = self.at[r][c] {
                let first = self.cells().into_iter().find(|&(rr, cc)| self.at[rr][cc] == self.at[r][c]).unwrap();
                label[r][c] = Some(first.0 * n + first.1);
            }
        }
        loop {
            let mut changed = false;
            for (r, c) in self.cells() {
                if self.at[r][c].plain().is_none() {
                    continue;
                }
                for (rr, cc) in self.adjacent(r, c) {
                    if self.at[rr][cc] == self.at[r][c] && label[rr][cc] < label[r][c] {
                        label[r][c] = label[rr][cc];
                        changed = true;
                    }
                }
            }
            if !changed {
                return label;
            }
        }
    }

    fn members(&self, labels: &[Vec<Option<usize>>], l: usize) -> Vec<(usize, usize)> {
        self.cells().into_iter().filter(|&(r, c)| labels[r][c] == Some(l)).collect()
    }

    fn touches(&self, cells: &[(usize, usize)], pred: impl Fn(usize, usize) -> bool) -> bool {
        cells.iter().any(|&(r, c)| self.adjacent(r, c).into_iter().any(|(rr, cc)| pred(rr, cc)))
    }
}

fn point(rc: (usize, usize)) -> Point {
    Point::new(rc.1 as u8, rc.0 as u8)
}

fn sorted_points(cells: &[(usize, usize)]) -> Vec<Point> {
    let mut v: Vec<Point> = cells.iter().map(|&rc| point(rc)).collect();
    v.sort();
    v
}

/// Would a plain stone of `color` at `at` have no liberties in its chain?
fn self_kill(grid: &Grid, at: (usize, usize), color: Color) -> bool {
    let mut trial = Grid { n: grid.n, at: grid.at.clone() };
    trial.at[at.0][at.1] = stone_of(color);
    let labels = trial.labels();
    let chain = trial.members(&labels, labels[at.0][at.1].unwrap());
    !trial.touches(&chain, |r, c| trial.at[r][c] == Stone::Open)
}

fn check_move(grid: &Grid, m: Move) -> Option<MoveError> {
    let p = m.point()?;
    if p.col as usize >= grid.n || p.row as usize >= grid.n {
        Some(MoveError::OutOfBounds(p))
    } else if grid.at[p.row as usize][p.col as usize] != Stone::Open {
        Some(MoveError::Occupied(p))
    } else {
        None
    }
}

/// Same contract as [`crate::engine::apply_turn`].
pub fn oracle_apply_turn(board: &Board, input: TurnInput) -> Result<TurnOutcome, TurnError> {
    let mut grid = Grid::from_board(board);
    let err = TurnError { black: check_move(&grid, input.black), white: check_move(&grid, input.white) };
    if err.black.is_some() || err.white.is_some() {
        return Err(err);
    }
    let mut events = Vec::new();
    let mut credit = [0u32; 2];
    if input.black == Move::Pass && input.white == Move::Pass {
        return Ok(TurnOutcome { board: board.clone(), events, prisoners_black: 0, prisoners_white: 0 });
    }

    let mut fresh_red = None;
    if input.black.point().is_some() && input.black == input.white {
        let p = input.black.point().unwrap();
        grid.at[p.row as usize][p.col as usize] = Stone::Red;
        events.push(Event::RedCreated { point: p });
        fresh_red = Some((p.row as usize, p.col as usize));
    } else {
        if let Some(p) = input.black.point() {
            grid.at[p.row as usize][p.col as usize] = Stone::Black;
            events.push(Event::PlacedBlack { point: p });
        }
        if let Some(p) = input.white.point() {
            grid.at[p.row as usize][p.col as usize] = Stone::White;
            events.push(Event::PlacedWhite { point: p });
        }
    }

    let mut pass = 0;
    loop {
        let labels = grid.labels();
        // Plain chains with no empty neighbor anywhere.
        let mut dead_chains: BTreeMap<usize, (Color, Vec<(usize, usize)>)> = BTreeMap::new();
        for (r, c) in grid.cells() {
            let Some(color) = grid.at[r][c].plain() else { continue };
            let l = labels[r][c].unwrap();
            if dead_chains.contains_key(&l) {
                continue;
            }
            let cells = grid.members(&labels, l);
            if !grid.touches(&cells, |rr, cc| grid.at[rr][cc] == Stone::Open) {
                dead_chains.insert(l, (color, cells));
            }
        }

        if dead_chains.is_empty() {
            let mut any = false;
            let snapshot: Vec<Vec<Stone>> = grid.at.clone();
            for (r, c) in grid.cells() {
                if snapshot[r][c] != Stone::Red {
                    continue;
                }
                for color in Color::BOTH {
                    if grid.adjacent(r, c).into_iter().all(|(rr, cc)| snapshot[rr][cc] == stone_of(color)) {
                        grid.at[r][c] = stone_of(color);
                        credit[slot(color)] += 1;
                        events.push(Event::RedCaptured { point: point((r, c)), by: color });
                        any = true;
                    }
                }
            }
            pass += 1;
            if any {
                continue;
            }
            break;
        }

        // Mutual-kill links between opposite-colored dead chains.
        let keys: Vec<usize> = dead_chains.keys().copied().collect();
        let linked = |x: usize, y: usize| -> bool {
            let (cx, ax) = &dead_chains[&x];
            let (cy, ay) = &dead_chains[&y];
            if cx == cy {
                return false;
            }
            if grid.touches(ax, |rr, cc| labels[rr][cc] == Some(y)) {
                return true;
            }
            for (r, c) in grid.cells() {
                if grid.at[r][c] == Stone::Red {
                    let around = grid.adjacent(r, c);
                    let hit = |l| around.iter().any(|&(rr, cc)| labels[rr][cc] == Some(l));
                    if hit(x) && hit(y) {
                        return true;
                    }
                }
            }
            // some pair whose killer side touches both
            let (blk, wht) = if *cx == Color::Black { (ax, ay) } else { (ay, ax) };
            for (r, c) in grid.cells() {
                if let Stone::EntWhite(k) = grid.at[r][c] {
                    let near_black = grid.touches(blk, |rr, cc| rr == r && cc == c);
                    let near_white =
                        grid.touches(wht, |rr, cc| grid.at[rr][cc] == Stone::EntBlack(k));
                    if near_black && near_white {
                        return true;
                    }
                }
            }
            false
        };
        let mut comp: BTreeMap<usize, usize> = keys.iter().map(|&k| (k, k)).collect();
        loop {
            let mut changed = false;
            for &x in &keys {
                for &y in &keys {
                    if comp[&x] != comp[&y] && linked(x, y) {
                        let (a, b) = (comp[&x], comp[&y]);
                        let m = a.min(b);
                        for v in comp.values_mut() {
                            if *v == a || *v == b {
                                *v = m;
                            }
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &k in &keys {
            groups.entry(comp[&k]).or_default().push(k);
        }
        let mut mixed: Vec<(Point, Vec<usize>)> = groups
            .into_values()
            .filter(|ks| ks.iter().any(|k| dead_chains[k].0 == Color::Black) && ks.iter().any(|k| dead_chains[k].0 == Color::White))
            .map(|ks| {
                let low = ks.iter().flat_map(|k| dead_chains[k].1.iter().map(|&rc| point(rc))).min().unwrap();
                (low, ks)
            })
            .collect();
        mixed.sort();

        let first_id = 1 + grid
            .cells()
            .into_iter()
            .filter_map(|(r, c)| match grid.at[r][c] {
                Stone::EntBlack(k) | Stone::EntWhite(k) => Some(k),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let mut entangled: BTreeSet<usize> = BTreeSet::new();
        for (next_id, (_, ks)) in (first_id..).zip(&mixed) {
            let (mut black, mut white) = (Vec::new(), Vec::new());
            for k in ks {
                entangled.insert(*k);
                let (color, cells) = &dead_chains[k];
                for &(r, c) in cells {
                    grid.at[r][c] = if *color == Color::Black { Stone::EntBlack(next_id) } else { Stone::EntWhite(next_id) };
                }
                if *color == Color::Black {
                    black.extend(cells.iter().copied());
                } else {
                    white.extend(cells.iter().copied());
                }
            }
            events.push(Event::EntangleCreated {
                pair: PairId(next_id),
                black: sorted_points(&black),
                white: sorted_points(&white),
            });
        }

        // Whatever is left dies. Markers are read from the grid as it stands
        // after entanglement.
        let dying: Vec<(Color, Vec<(usize, usize)>)> = dead_chains
            .iter()
            .filter(|(k, _)| !entangled.contains(k))
            .map(|(_, v)| v.clone())
            .collect();
        if !dying.is_empty() {
            let mut absorbed_into: Option<(Point, usize)> = None;
            let mut red_to: BTreeMap<Point, Color> = BTreeMap::new();
            let mut pair_to: BTreeMap<u32, Color> = BTreeMap::new();
            for (i, (color, cells)) in dying.iter().enumerate() {
                let killer = color.opposite();
                for &(r, c) in cells {
                    for (rr, cc) in grid.adjacent(r, c) {
                        match grid.at[rr][cc] {
                            Stone::Red if pass == 0 && fresh_red == Some((rr, cc)) && self_kill(&grid, (rr, cc), *color) => {
                                let low = sorted_points(cells)[0];
                                if absorbed_into.is_none_or(|(best, _)| low < best) {
                                    absorbed_into = Some((low, i));
                                }
                            }
                            Stone::Red => {
                                red_to.insert(point((rr, cc)), killer);
                            }
                            Stone::EntBlack(k) if killer == Color::Black => {
                                pair_to.insert(k, killer);
                            }
                            Stone::EntWhite(k) if killer == Color::White => {
                                pair_to.insert(k, killer);
                            }
                            _ => {}
                        }
                    }
                }
            }
            if let (Some((_, i)), Some(rc)) = (absorbed_into, fresh_red) {
                events.push(Event::SuicideAbsorbedRed { point: point(rc), dying: dying[i].0 });
            }
            for (&p, &to) in &red_to {
                grid.at[p.row as usize][p.col as usize] = stone_of(to);
                events.push(Event::RedResolved { point: p, to });
            }
            for (&k, &to) in &pair_to {
                for (r, c) in grid.cells() {
                    if grid.at[r][c] == Stone::EntBlack(k) {
                        grid.at[r][c] = Stone::Black;
                    }
                    if grid.at[r][c] == Stone::EntWhite(k) {
                        grid.at[r][c] = Stone::White;
                    }
                }
                events.push(Event::EResolved { pair: PairId(k), to });
            }
            for (i, (color, cells)) in dying.iter().enumerate() {
                let mut cells = cells.clone();
                if absorbed_into.is_some_and(|(_, j)| j == i) {
                    cells.push(fresh_red.unwrap());
                }
                for &(r, c) in &cells {
                    grid.at[r][c] = Stone::Open;
                }
                credit[slot(color.opposite())] += cells.len() as u32;
                events.push(Event::GroupCaptured {
                    color: *color,
                    points: sorted_points(&cells),
                    captured_by: color.opposite(),
                });
            }
        }
        pass += 1;
    }

    Ok(TurnOutcome { board: grid.to_board(), events, prisoners_black: credit[0], prisoners_white: credit[1] })
}

/// Order-insensitive digest of a turn outcome: post-board diagram, sorted
/// events and prisoner deltas.
pub fn outcome_digest(outcome: &TurnOutcome) -> String {
    let mut events = outcome.events.clone();
    events.sort();
    let text = format!(
        "{}{:?}\n{} {}\n",
        to_fixture(&outcome.board),
        events,
        outcome.prisoners_black,
        outcome.prisoners_white
    );
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Short stable fingerprint of a board.
pub fn board_fingerprint(board: &Board) -> String {
    hex::encode(&Sha256::digest(to_fixture(board).as_bytes())[..8])
}

/// Every (black, white) move pair on `board`: pass or any empty point for
/// each side, so `(e + 1)^2` inputs for `e` empty points.
pub fn enumerate_turns(board: &Board) -> Vec<TurnInput> {
    let moves: Vec<Move> = std::iter::once(Move::Pass)
        .chain(board.points().filter(|&p| board.get(p).is_empty()).map(Move::Place))
        .collect();
    moves.iter().flat_map(|&b| moves.iter().map(move |&w| TurnInput::new(b, w))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MismatchKind {
    /// Engine and oracle disagree.
    Divergence,
    /// Engine result does not commute with color flip.
    EngineSymmetry,
    /// Oracle result does not commute with color flip.
    OracleSymmetry,
    /// A plain group was left without liberties, or a pair lost a side.
    Invariant,
    /// One side rejected a move the other accepted.
    Rejected,
}

impl fmt::Display for MismatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MismatchKind::Divergence => "divergence",
            MismatchKind::EngineSymmetry => "engine-symmetry",
            MismatchKind::OracleSymmetry => "oracle-symmetry",
            MismatchKind::Invariant => "invariant",
            MismatchKind::Rejected => "rejected",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mismatch {
    pub board: String,
    pub input: TurnInput,
    pub kind: MismatchKind,
    pub engine: String,
    pub oracle: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MISMATCH {} {} B {} W {} engine={} oracle={}",
            self.board,
            self.kind,
            self.input.black,
            self.input.white,
            &self.engine[..self.engine.len().min(16)],
            &self.oracle[..self.oracle.len().min(16)]
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub cases_checked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn merge(mut self, other: OracleReport) -> OracleReport {
        self.cases_checked += other.cases_checked;
        self.mismatches.extend(other.mismatches);
        self
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Whether every plain group has a liberty and every pair has both sides.
/// Written against the raw cells so it does not lean on either resolver.
pub fn post_turn_invariants_hold(board: &Board) -> bool {
    let grid = Grid::from_board(board);
    let labels = grid.labels();
    for (r, c) in grid.cells() {
        if grid.at[r][c].plain().is_some() {
            let l = labels[r][c].unwrap();
            if !grid.touches(&grid.members(&labels, l), |rr, cc| grid.at[rr][cc] == Stone::Open) {
                return false;
            }
        }
    }
    board.check_registry().is_ok()
}

fn flip_outcome(o: &TurnOutcome) -> (Board, u32, u32) {
    (o.board.color_flip(), o.prisoners_white, o.prisoners_black)
}

/// Compares engine and oracle on one (board, input) case, including the
/// color-flip symmetry of both and the post-turn invariants.
pub fn check_case(board: &Board, input: TurnInput) -> Vec<Mismatch> {
    let mut out = Vec::new();
    let mismatch = |kind, engine: String, oracle: String| Mismatch {
        board: board_fingerprint(board),
        input,
        kind,
        engine,
        oracle,
    };
    let flipped = board.color_flip();
    match (apply_turn(board, input), oracle_apply_turn(board, input)) {
        (Ok(e), Ok(o)) => {
            let (de, dor) = (outcome_digest(&e), outcome_digest(&o));
            if de != dor {
                out.push(mismatch(MismatchKind::Divergence, de.clone(), dor.clone()));
            }
            let fe = apply_turn(&flipped, input.swap()).expect("flipped input stays valid");
            if (fe.board.clone(), fe.prisoners_black, fe.prisoners_white) != flip_outcome(&e) {
                out.push(mismatch(MismatchKind::EngineSymmetry, de.clone(), outcome_digest(&fe)));
            }
            let fo = oracle_apply_turn(&flipped, input.swap()).expect("flipped input stays valid");
            if (fo.board.clone(), fo.prisoners_black, fo.prisoners_white) != flip_outcome(&o) {
                out.push(mismatch(MismatchKind::OracleSymmetry, outcome_digest(&fo), dor.clone()));
            }
            if !post_turn_invariants_hold(&e.board) {
                out.push(mismatch(MismatchKind::Invariant, de, dor));
            }
        }
        (Err(a), Err(b)) if a == b => {}
        (e, o) => out.push(mismatch(
            MismatchKind::Rejected,
            format!("{:?}", e.err()),
            format!("{:?}", o.err()),
        )),
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub size: usize,
    /// Exhaustive search depth in turns, or turns per playout when sampling.
    pub depth: u32,
    pub seed: u64,
    /// Number of seeded random playouts. `None` searches exhaustively.
    pub budget: Option<u64>,
}

/// Walks game trees from the empty board comparing engine and oracle.
///
/// Exhaustive mode expands every input at every distinct position up to
/// `depth` turns deep; the root counts as one case and each expanded
/// (position, input) pair as one more. Sampling mode plays `budget` seeded
/// random games of at most `depth` turns, one case per turn.
pub fn differential_check(cfg: CheckConfig) -> OracleReport {
    let root = Board::new(cfg.size).expect("valid size");
    let mut report = match cfg.budget {
        None => exhaustive(root, cfg.depth),
        Some(playouts) => sampled(root, cfg.depth, cfg.seed, playouts),
    };
    report.mismatches.sort();
    report
}

fn exhaustive(root: Board, depth: u32) -> OracleReport {
    let mut report = OracleReport { cases_checked: 1, mismatches: Vec::new() };
    if !post_turn_invariants_hold(&root) {
        report.mismatches.push(Mismatch {
            board: board_fingerprint(&root),
            input: TurnInput::DOUBLE_PASS,
            kind: MismatchKind::Invariant,
            engine: String::new(),
            oracle: String::new(),
        });
    }
    let mut seen: HashSet<Board> = HashSet::from([root.clone()]);
    let mut frontier = vec![root];
    for _ in 0..depth {
        let results: Vec<(OracleReport, Vec<Board>)> = frontier
            .par_iter()
            .map(|board| {
                let mut local = OracleReport::default();
                let mut children = Vec::new();
                for input in enumerate_turns(board) {
                    local.cases_checked += 1;
                    local.mismatches.extend(check_case(board, input));
                    if let Ok(out) = apply_turn(board, input) {
                        children.push(out.board);
                    }
                }
                (local, children)
            })
            .collect();
        let mut next = Vec::new();
        for (local, children) in results {
            report = report.merge(local);
            for child in children {
                if seen.insert(child.clone()) {
                    next.push(child);
                }
            }
        }
        frontier = next;
    }
    report
}

/// Per-playout seed: the master seed mixed with the playout index.
pub fn playout_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random input biased toward collisions and dense boards, so red stones
/// and entanglements show up often.
pub fn random_input(board: &Board, rng: &mut impl Rng) -> TurnInput {
    let empty: Vec<Point> = board.points().filter(|&p| board.get(p).is_empty()).collect();
    let pick = |rng: &mut dyn rand::RngCore| -> Move {
        if empty.is_empty() || rng.random_bool(0.04) {
            Move::Pass
        } else {
            Move::Place(empty[rng.random_range(0..empty.len())])
        }
    };
    let black = pick(rng);
    let white = if black != Move::Pass && rng.random_bool(0.2) { black } else { pick(rng) };
    TurnInput::new(black, white)
}

fn sampled(root: Board, depth: u32, seed: u64, playouts: u64) -> OracleReport {
    (0..playouts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(playout_seed(seed, i));
            let mut report = OracleReport::default();
            let mut board = root.clone();
            for _ in 0..depth {
                let input = random_input(&board, &mut rng);
                report.cases_checked += 1;
                report.mismatches.extend(check_case(&board, input));
                if input.is_double_pass() {
                    break;
                }
                board = apply_turn(&board, input).expect("generated input is valid").board;
            }
            report
        })
        .reduce(OracleReport::default, OracleReport::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::parse_diagram;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_turns(&Board::new(2).unwrap()).len(), 25);
        let full = Board::from_cells(2, vec![CellState::Red; 4]).unwrap();
        assert_eq!(enumerate_turns(&full), vec![TurnInput::DOUBLE_PASS]);
        let b = parse_diagram("size 3\nB . .\n. W .\n. . R\n").unwrap();
        assert_eq!(enumerate_turns(&b).len(), 49);
    }

    #[test]
    fn oracle_double_pass_is_identity() {
        let b = parse_diagram("size 3\nB W .\n. R .\nb1 w1 .\n").unwrap();
        let o = oracle_apply_turn(&b, TurnInput::DOUBLE_PASS).unwrap();
        assert_eq!(o.board, b);
        assert!(o.events.is_empty());
    }

    #[test]
    fn oracle_rejects_occupied_points() {
        let b = parse_diagram("size 3\nB . .\n. . .\n. . .\n").unwrap();
        let input = TurnInput::new(Move::Place("A3".parse().unwrap()), Move::Pass);
        assert_eq!(oracle_apply_turn(&b, input).unwrap_err(), apply_turn(&b, input).unwrap_err());
    }

    #[test]
    fn depth_zero_checks_only_the_root() {
        let r = differential_check(CheckConfig { size: 3, depth: 0, seed: 0, budget: None });
        assert_eq!(r.cases_checked, 1);
        assert!(r.is_clean());
    }

    #[test]
    fn shallow_exhaustive_runs_clean() {
        let r = differential_check(CheckConfig { size: 2, depth: 3, seed: 0, budget: None });
        assert!(r.cases_checked > 25);
        assert!(r.is_clean(), "{}", r.mismatches.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n"));
    }

    #[test]
    fn playout_seeds_differ() {
        assert_ne!(playout_seed(42, 0), playout_seed(42, 1));
        assert_eq!(playout_seed(42, 7), playout_seed(42, 7));
    }
}
