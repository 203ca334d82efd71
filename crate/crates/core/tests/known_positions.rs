use std::collections::BTreeSet;

use sgo_core::game::score_position;
use sgo_core::oracle::{oracle_apply_turn, outcome_digest};
use sgo_core::{
    apply_turn, classify_mutual, parse_diagram, Board, CellState, Color, Event, GameConfig, GameRecord, GameState,
    Move, Outcome, PairId, Point, TurnInput,
};

fn fixture(name: &str) -> Board {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_diagram(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn record(name: &str) -> GameRecord {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    GameRecord::parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn pt(s: &str) -> Point {
    s.parse().unwrap()
}

fn pts(list: &[&str]) -> Vec<Point> {
    let mut v: Vec<Point> = list.iter().map(|s| pt(s)).collect();
    v.sort();
    v
}

fn turn(b: &str, w: &str) -> TurnInput {
    TurnInput::new(b.parse().unwrap(), w.parse().unwrap())
}

/// Plays `inputs` from `board`, checking each turn against the oracle.
fn play(board: &Board, inputs: &[TurnInput]) -> (Board, Vec<sgo_core::TurnOutcome>) {
    let mut b = board.clone();
    let mut outs = Vec::new();
    for &t in inputs {
        let out = apply_turn(&b, t).unwrap();
        let reference = oracle_apply_turn(&b, t).unwrap();
        assert_eq!(outcome_digest(&out), outcome_digest(&reference), "oracle disagrees on {t:?}");
        b = out.board.clone();
        outs.push(out);
    }
    (b, outs)
}

#[test]
fn race_turn1_creates_red_and_seals_black() {
    let setup = fixture("race_setup.txt");
    let (b, outs) = play(&setup, &[turn("C4", "C4")]);
    assert_eq!(b.get(pt("C4")), CellState::Red);
    assert_eq!(outs[0].events, vec![Event::RedCreated { point: pt("C4") }]);
    let black = b.group_at(pt("C5")).unwrap();
    assert_eq!(black.stones, pts(&["C5", "C6"]));
    assert_eq!(b.liberties(&black), BTreeSet::from([pt("C7")]));
}

#[test]
fn race_turn3_resolves_to_classical_position() {
    let setup = fixture("race_setup.txt");
    let (b, outs) = play(&setup, &[turn("C4", "C4"), turn("D4", "E3"), turn("E5", "C7")]);
    assert_eq!(b, fixture("race_resolved.txt"));
    let last = &outs[2];
    assert_eq!(last.prisoners_white, 2);
    assert_eq!(last.prisoners_black, 0);
    assert!(last.events.contains(&Event::RedResolved { point: pt("C4"), to: Color::White }));
    assert!(last.events.contains(&Event::GroupCaptured {
        color: Color::Black,
        points: pts(&["C5", "C6"]),
        captured_by: Color::White
    }));
}

#[test]
fn race_shared_last_liberty_is_suicide() {
    let setup = fixture("race_setup.txt");
    let (b, outs) = play(&setup, &[turn("C4", "C4"), turn("D4", "E3"), turn("C7", "C7")]);
    assert_eq!(b, fixture("race_suicide.txt"));
    let last = &outs[2];
    assert_eq!(last.prisoners_white, 3);
    assert_eq!(
        last.events,
        vec![
            Event::RedCreated { point: pt("C7") },
            Event::SuicideAbsorbedRed { point: pt("C7"), dying: Color::Black },
            Event::RedResolved { point: pt("C4"), to: Color::White },
            Event::GroupCaptured { color: Color::Black, points: pts(&["C5", "C6", "C7"]), captured_by: Color::White },
        ]
    );
}

#[test]
fn mutual_capture_capture_entangles() {
    let setup = fixture("entangle_setup.txt");
    let white = setup.group_at(pt("D3")).unwrap();
    assert_eq!(white.stones, pts(&["D3", "D5", "E3", "E4", "E5"]));
    assert_eq!(setup.liberties(&white), BTreeSet::from([pt("C3")]));

    let (b, outs) = play(&setup, &[turn("C3", "C4")]);
    assert_eq!(b, fixture("entangle_turn1.txt"));
    assert_eq!(b.get(pt("E2")), CellState::Red);
    assert_eq!(outs[0].prisoners_black + outs[0].prisoners_white, 0);
    assert!(outs[0].events.contains(&Event::EntangleCreated {
        pair: PairId(1),
        black: pts(&["D4"]),
        white: pts(&["D3", "D5", "E3", "E4", "E5"]),
    }));

    let eg = b.group_at(pt("E4")).unwrap();
    assert!(b.liberties(&eg).is_empty());
}

#[test]
fn mutual_capture_resolution_cascade() {
    let setup = fixture("entangle_setup.txt");
    let (b, outs) = play(&setup, &[turn("C3", "C4"), turn("B4", "B4")]);
    assert_eq!(b, fixture("entangle_resolved.txt"));
    assert_eq!(b.count(|c| c == CellState::Black), 12);
    assert_eq!(b.count(|c| c.is_empty()), 49 - 12);
    let last = &outs[1];
    assert_eq!(last.prisoners_black, 6);
    assert_eq!(last.prisoners_white, 0);
    for e in [
        Event::RedCreated { point: pt("B4") },
        Event::RedResolved { point: pt("B4"), to: Color::Black },
        Event::EResolved { pair: PairId(1), to: Color::Black },
        Event::RedResolved { point: pt("E2"), to: Color::Black },
        Event::GroupCaptured { color: Color::White, points: pts(&["C4"]), captured_by: Color::Black },
        Event::GroupCaptured {
            color: Color::White,
            points: pts(&["D3", "D5", "E3", "E4", "E5"]),
            captured_by: Color::Black,
        },
    ] {
        assert!(last.events.contains(&e), "missing {e:?}");
    }
}

#[test]
fn reckless_race_line_stays_unresolved() {
    let setup = fixture("race_setup.txt");
    let (b, outs) = play(&setup, &[turn("C4", "C4"), turn("D4", "E3"), turn("E5", "F5"), turn("C7", "C7")]);
    assert_eq!(b, fixture("unresolved.txt"));
    let reg = b.entanglements();
    assert_eq!(reg.len(), 1);
    assert_eq!(reg[&PairId(1)].black, pts(&["C5", "C6"]).into_iter().collect());
    assert_eq!(reg[&PairId(1)].white, pts(&["D5", "D6", "D7"]).into_iter().collect());
    assert_eq!(outs[3].prisoners_black + outs[3].prisoners_white, 0);
}

#[test]
fn mutual_components_on_known_positions() {
    let zero_lib = |b: &Board| -> Vec<sgo_core::Group> {
        b.groups().into_iter().filter(|g| g.kind.is_plain() && b.liberties(g).is_empty()).collect()
    };

    // second example, turn 1 placements written, before resolution
    let mut b = fixture("entangle_setup.txt");
    b.set(pt("C3"), CellState::Black);
    b.set(pt("C4"), CellState::White);
    let c = zero_lib(&b);
    assert_eq!(c.len(), 2);
    assert_eq!(classify_mutual(&c, &b), vec![vec![0, 1]]);

    // third example, turn 4 red written
    let setup = fixture("race_setup.txt");
    let (mut b, _) = play(&setup, &[turn("C4", "C4"), turn("D4", "E3"), turn("E5", "F5")]);
    b.set(pt("C7"), CellState::Red);
    let c = zero_lib(&b);
    let comps = classify_mutual(&c, &b);
    assert_eq!(comps.len(), 1);
    let stones: BTreeSet<Point> = comps[0].iter().flat_map(|&i| c[i].stones.clone()).collect();
    assert_eq!(stones, pts(&["C5", "C6", "D5", "D6", "D7"]).into_iter().collect());
}

#[test]
fn flipped_entangled_position_swaps_entangled_sides() {
    let b = fixture("entangle_turn1.txt").color_flip();
    assert_eq!(b.get(pt("D4")), CellState::EWhite(PairId(1)));
    assert_eq!(b.count(|c| matches!(c, CellState::EBlack(_))), 5);
    assert_eq!(b.count(|c| matches!(c, CellState::EWhite(_))), 1);
    assert_eq!(b.get(pt("E2")), CellState::Red);
}

#[test]
fn records_replay_to_the_diagrams() {
    let cases = [
        ("race.sgo", "race_resolved.txt", 0, 2),
        ("race_suicide.sgo", "race_suicide.txt", 0, 3),
        ("entangle.sgo", "entangle_resolved.txt", 6, 0),
        ("unresolved.sgo", "unresolved.txt", 0, 0),
    ];
    for (rec, diagram, pb, pw) in cases {
        let r = record(rec);
        let g = r.replay().unwrap();
        assert_eq!(g.board, fixture(diagram), "{rec}");
        assert_eq!((g.prisoners_black, g.prisoners_white), (pb, pw), "{rec}");
        assert_eq!(g.fingerprint(), r.replay().unwrap().fingerprint());
        assert_eq!(GameRecord::parse(&r.serialize()).unwrap(), r);
    }
}

#[test]
fn race_record_uses_move_notation() {
    assert!(record("race.sgo").serialize().contains("1. B C4 W C4"));
}

#[test]
fn race_game_tallies_prisoners() {
    let cfg = GameConfig::from_board(&fixture("race_setup.txt"));
    let mut g = GameState::new(&cfg).unwrap();
    assert_eq!(g.board, fixture("race_setup.txt"));
    for t in [turn("C4", "C4"), turn("D4", "E3"), turn("E5", "C7")] {
        g.play(t).unwrap();
    }
    assert_eq!(g.prisoners_white, 2);
    assert_eq!(g.turn, 3);
}

#[test]
fn resolved_second_example_scores_for_black_only() {
    let r = record("entangle.sgo");
    let mut g = r.replay().unwrap();
    g.play(TurnInput::new(Move::Pass, Move::Pass)).unwrap();
    let s = g.score().unwrap();
    assert_eq!(s.black_territory, 37);
    assert_eq!(s.black_prisoners, 6);
    assert_eq!(s.black_total, 43);
    assert_eq!(s.white_total, 0);
    assert_eq!(s.outcome, Outcome::BlackWins);
    assert_eq!(score_position(&g.board, 6, 0), s);
}
