//! Baseline bots and seeded self-play.

use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::board::{Board, CellState};
use crate::engine::{Event, Move, TurnInput};
use crate::game::{new_game, GameConfig, GameState, Outcome};
use crate::oracle::playout_seed;
use crate::point::{Color, Point};

pub const DEFAULT_PASS_PROBABILITY: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// Uniform over empty points.
    UniformRandom,
    /// Fills the last liberties of the weakest adjacent enemy group.
    GreedyCapture,
    AlwaysPass,
}

impl std::str::FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(PolicyKind::UniformRandom),
            "greedy" => Ok(PolicyKind::GreedyCapture),
            "pass" => Ok(PolicyKind::AlwaysPass),
            other => Err(format!("unknown policy `{other}` (expected random, greedy or pass)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BotPolicy {
    pub kind: PolicyKind,
    pub seed: u64,
    /// Chance of passing when a placement is available.
    pub pass_probability: f64,
}

impl BotPolicy {
    pub fn new(kind: PolicyKind, seed: u64) -> BotPolicy {
        BotPolicy { kind, seed, pass_probability: DEFAULT_PASS_PROBABILITY }
    }

    pub fn uniform(seed: u64) -> BotPolicy {
        BotPolicy::new(PolicyKind::UniformRandom, seed)
    }

    pub fn greedy(seed: u64) -> BotPolicy {
        BotPolicy::new(PolicyKind::GreedyCapture, seed)
    }
}

/// Chooses a move from the public state.
///
/// The random stream depends only on the policy seed and the turn number,
/// and greedy targets are relative to `perspective`, so a game replayed on
/// the color-flipped board with the seeds swapped mirrors the original.
pub fn pick_move(policy: &BotPolicy, game: &GameState, perspective: Color) -> Move {
    let board = &game.board;
    let empty: Vec<Point> = board.points().filter(|&p| board.get(p).is_empty()).collect();
    if empty.is_empty() || policy.kind == PolicyKind::AlwaysPass {
        return Move::Pass;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(playout_seed(policy.seed, game.turn as u64));
    if rng.random_bool(policy.pass_probability.clamp(0.0, 1.0)) {
        return Move::Pass;
    }
    match policy.kind {
        PolicyKind::UniformRandom | PolicyKind::AlwaysPass => Move::Place(empty[rng.random_range(0..empty.len())]),
        PolicyKind::GreedyCapture => {
            let mut order = empty.clone();
            order.shuffle(&mut rng);
            greedy_target(board, &order, perspective.opposite())
                .unwrap_or_else(|| Move::Place(empty[rng.random_range(0..empty.len())]))
        }
    }
}

/// First point in `order` that leaves some adjacent plain `enemy` group with
/// the fewest liberties.
fn greedy_target(board: &Board, order: &[Point], enemy: Color) -> Option<Move> {
    let enemy_state = CellState::plain(enemy);
    let groups: Vec<_> = board.groups().into_iter().filter(|g| g.kind.color() == Some(enemy) && g.kind.is_plain()).collect();
    let liberties: Vec<usize> = groups.iter().map(|g| board.liberties(g).len()).collect();
    let mut best: Option<(usize, Point)> = None;
    for &p in order {
        let after = board
            .neighbors(p)
            .filter(|&q| board.get(q) == enemy_state)
            .filter_map(|q| groups.iter().position(|g| g.contains(q)))
            .map(|i| liberties[i] - 1)
            .min();
        if let Some(after) = after {
            if best.is_none_or(|(b, _)| after < b) {
                best = Some((after, p));
            }
        }
    }
    best.map(|(_, p)| Move::Place(p))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfPlayConfig {
    pub size: usize,
    pub black: PolicyKind,
    pub white: PolicyKind,
    pub pass_probability: f64,
    pub games: u64,
    pub max_turns: u32,
    pub seed: u64,
    /// Play games in mirrored pairs: game 2k+1 swaps the policies and
    /// seeds of game 2k, so it is the color-flipped replay of game 2k.
    pub paired: bool,
}

impl SelfPlayConfig {
    pub fn new(size: usize, games: u64, seed: u64) -> SelfPlayConfig {
        SelfPlayConfig {
            size,
            black: PolicyKind::UniformRandom,
            white: PolicyKind::UniformRandom,
            pass_probability: DEFAULT_PASS_PROBABILITY,
            games,
            max_turns: 4 * (size * size) as u32,
            seed,
            paired: false,
        }
    }

    /// Policies for game `index`: black seed from slot `2i`, white from `2i+1`
    /// of the master seed, with odd games mirroring even ones when paired.
    pub fn policies(&self, index: u64) -> (BotPolicy, BotPolicy) {
        let base = if self.paired { index & !1 } else { index };
        let sb = playout_seed(self.seed, 2 * base);
        let sw = playout_seed(self.seed, 2 * base + 1);
        let black = BotPolicy { kind: self.black, seed: sb, pass_probability: self.pass_probability };
        let white = BotPolicy { kind: self.white, seed: sw, pass_probability: self.pass_probability };
        if self.paired && index % 2 == 1 {
            (white, black)
        } else {
            (black, white)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRow {
    pub index: u64,
    pub length: u32,
    pub outcome: Outcome,
    pub prisoners_black: u32,
    pub prisoners_white: u32,
    pub reds: u32,
    pub entanglements: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfPlayStats {
    pub games: u64,
    pub mean_game_length: f64,
    pub red_created_per_game: f64,
    pub entanglements_per_game: f64,
    pub tie_rate: f64,
    pub win_rate_black: f64,
    pub win_rate_white: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelfPlayReport {
    pub config: SelfPlayConfig,
    pub rows: Vec<GameRow>,
    pub stats: SelfPlayStats,
}

pub fn play_game(cfg: &SelfPlayConfig, index: u64) -> (GameState, GameRow) {
    let (black, white) = cfg.policies(index);
    let mut game = new_game(&GameConfig::new(cfg.size).with_max_turns(cfg.max_turns)).expect("valid size");
    let (mut reds, mut entanglements) = (0, 0);
    while !game.is_over() {
        let input = TurnInput::new(pick_move(&black, &game, Color::Black), pick_move(&white, &game, Color::White));
        let outcome = game.play(input).expect("bots only pick legal moves");
        for e in &outcome.events {
            match e {
                Event::RedCreated { .. } => reds += 1,
                Event::EntangleCreated { .. } => entanglements += 1,
                _ => {}
            }
        }
    }
    let score = game.score().expect("game is over");
    let row = GameRow {
        index,
        length: game.turn,
        outcome: score.outcome,
        prisoners_black: game.prisoners_black,
        prisoners_white: game.prisoners_white,
        reds,
        entanglements,
    };
    (game, row)
}

/// Runs the batch in parallel; rows come back in game-index order.
pub fn selfplay(cfg: SelfPlayConfig) -> SelfPlayReport {
    assert!(cfg.games >= 1 && cfg.max_turns >= 1, "need at least one game and one turn");
    let rows: Vec<GameRow> = (0..cfg.games).into_par_iter().map(|i| play_game(&cfg, i).1).collect();
    let n = rows.len() as f64;
    let count = |o: Outcome| rows.iter().filter(|r| r.outcome == o).count() as f64 / n;
    let mean = |f: fn(&GameRow) -> u32| rows.iter().map(|r| f(r) as f64).sum::<f64>() / n;
    let stats = SelfPlayStats {
        games: cfg.games,
        mean_game_length: mean(|r| r.length),
        red_created_per_game: mean(|r| r.reds),
        entanglements_per_game: mean(|r| r.entanglements),
        tie_rate: count(Outcome::Tie),
        win_rate_black: count(Outcome::BlackWins),
        win_rate_white: count(Outcome::WhiteWins),
    };
    SelfPlayReport { config: cfg, rows, stats }
}

impl SelfPlayReport {
    /// One CSV row per game followed by a `#`-prefixed summary block.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("game,length,winner,prisoners_black,prisoners_white,red_created,entanglements\n");
        for r in &self.rows {
            let winner = match r.outcome {
                Outcome::BlackWins => "black",
                Outcome::WhiteWins => "white",
                Outcome::Tie => "tie",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.index, r.length, winner, r.prisoners_black, r.prisoners_white, r.reds, r.entanglements
            );
        }
        let s = &self.stats;
        let c = &self.config;
        let _ = write!(
            out,
            "# games: {}\n# size: {}\n# max_turns: {}\n# seed: {}\n\
             # seed_rule: game i uses splitmix(seed + (2i+1)*golden) for black and splitmix(seed + (2i+2)*golden) for white{}\n\
             # mean_game_length: {:.6}\n# red_created_per_game: {:.6}\n# entanglements_per_game: {:.6}\n\
             # tie_rate: {:.6}\n# win_rate_black: {:.6}\n# win_rate_white: {:.6}\n",
            s.games,
            c.size,
            c.max_turns,
            c.seed,
            if c.paired { ", odd games mirror the preceding even game" } else { "" },
            s.mean_game_length,
            s.red_created_per_game,
            s.entanglements_per_game,
            s.tie_rate,
            s.win_rate_black,
            s.win_rate_white,
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::parse_diagram;

    fn state(board: Board) -> GameState {
        let mut g = new_game(&GameConfig::new(board.size() as usize)).unwrap();
        g.board = board;
        g
    }

    #[test]
    fn full_board_forces_pass() {
        let b = Board::from_cells(2, vec![CellState::Red; 4]).unwrap();
        let g = state(b);
        assert_eq!(pick_move(&BotPolicy::uniform(1), &g, Color::Black), Move::Pass);
        assert_eq!(pick_move(&BotPolicy::greedy(1), &g, Color::White), Move::Pass);
    }

    #[test]
    fn same_seed_same_move() {
        let g = state(Board::new(9).unwrap());
        let p = BotPolicy::uniform(77);
        let m = pick_move(&p, &g, Color::Black);
        for _ in 0..5 {
            assert_eq!(pick_move(&p, &g, Color::Black), m);
        }
    }

    #[test]
    fn greedy_fills_last_liberty() {
        // white C3 group {C3,C4} has only D3 left
        let b = parse_diagram(
            "size 5\n\
             . . B . .\n\
             . B W B .\n\
             . B W . .\n\
             . . B . .\n\
             . . . . .\n",
        )
        .unwrap();
        let g = state(b.clone());
        let white = b.group_at("C3".parse().unwrap()).unwrap();
        let libs: Vec<Point> = b.liberties(&white).into_iter().collect();
        assert_eq!(libs, vec!["D3".parse().unwrap()]);
        for seed in 0..20 {
            let p = BotPolicy { pass_probability: 0.0, ..BotPolicy::greedy(seed) };
            assert_eq!(pick_move(&p, &g, Color::Black), Move::Place(libs[0]));
        }
    }

    #[test]
    fn always_pass_ends_on_turn_one() {
        let cfg = SelfPlayConfig {
            black: PolicyKind::AlwaysPass,
            white: PolicyKind::AlwaysPass,
            ..SelfPlayConfig::new(7, 1, 3)
        };
        let r = selfplay(cfg);
        assert_eq!(r.rows[0].length, 1);
        assert_eq!(r.rows[0].outcome, Outcome::Tie);
        assert_eq!(r.stats.tie_rate, 1.0);
    }

    #[test]
    fn rates_sum_to_one() {
        let r = selfplay(SelfPlayConfig::new(5, 20, 9));
        let s = &r.stats;
        assert!((s.tie_rate + s.win_rate_black + s.win_rate_white - 1.0).abs() < 1e-12);
    }
}
