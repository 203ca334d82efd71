use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;

use clap::Args;
use sgo_core::{to_fixture, validate_move, Color, GameConfig, GameRecord, GameState, Move, Outcome, TurnInput};

use crate::error::CliError;
use crate::score_lines;

#[derive(Args)]
pub struct HotseatArgs {
    #[arg(long, default_value_t = 9, value_parser = crate::board_size)]
    size: usize,
    #[arg(long)]
    max_turns: Option<u32>,
    /// Write the game record here when play stops.
    #[arg(long)]
    save: Option<PathBuf>,
}

enum Entry {
    Move(Move),
    Resign,
    Quit,
}

/// Reads one move. On a terminal the entry is not echoed; otherwise lines
/// come straight from stdin so games can be scripted.
struct Prompter {
    tty: bool,
    lines: io::Lines<io::StdinLock<'static>>,
}

impl Prompter {
    fn new() -> Prompter {
        Prompter { tty: io::stdin().is_terminal(), lines: io::stdin().lock().lines() }
    }

    fn ask(&mut self, color: Color, game: &GameState) -> Result<Entry, CliError> {
        let name = match color {
            Color::Black => "Black",
            Color::White => "White",
        };
        loop {
            let prompt = format!("turn {} {name} (point, pass, resign): ", game.turn + 1);
            let line = if self.tty {
                rpassword::prompt_password(prompt)?
            } else {
                eprint!("{prompt}");
                match self.lines.next() {
                    Some(l) => l?,
                    None => return Ok(Entry::Quit),
                }
            };
            let text = line.trim();
            if text.eq_ignore_ascii_case("resign") {
                return Ok(Entry::Resign);
            }
            if text.eq_ignore_ascii_case("quit") {
                return Ok(Entry::Quit);
            }
            let parsed = if text.eq_ignore_ascii_case("pass") {
                Ok(Move::Pass)
            } else {
                sgo_core::Point::parse_on(text, game.board.size()).map(Move::Place).map_err(|e| e.to_string())
            };
            match parsed.and_then(|mv| validate_move(&game.board, mv).map(|_| mv).map_err(|e| e.to_string())) {
                Ok(mv) => return Ok(Entry::Move(mv)),
                Err(e) => eprintln!("  {e}; try again"),
            }
        }
    }
}

pub fn run(args: HotseatArgs, out: &mut impl Write) -> Result<(), CliError> {
    let mut cfg = GameConfig::new(args.size);
    cfg.max_turns = args.max_turns;
    let mut game = GameState::new(&cfg).map_err(|e| CliError::BadFlags(e.to_string()))?;
    let mut record = GameRecord::new(args.size);
    let mut prompter = Prompter::new();
    out.write_all(to_fixture(&game.board).as_bytes())?;

    let result = loop {
        if game.is_over() {
            break game.score().ok().map(|s| score_lines(&s, "# "));
        }
        let mut moves = [Move::Pass; 2];
        let mut stop = None;
        for (slot, color) in Color::BOTH.into_iter().enumerate() {
            match prompter.ask(color, &game)? {
                Entry::Move(mv) => moves[slot] = mv,
                Entry::Resign => {
                    let winner = match Outcome::win_for(color.opposite()) {
                        Outcome::BlackWins => "black",
                        _ => "white",
                    };
                    stop = Some(Some(format!("# result {winner} by resignation\n")));
                    break;
                }
                Entry::Quit => {
                    stop = Some(None);
                    break;
                }
            }
        }
        if let Some(s) = stop {
            break s;
        }
        let input = TurnInput::new(moves[0], moves[1]);
        let outcome = game.play(input).expect("moves were validated").clone();
        record.turns.push(input);
        writeln!(out, "# turn {}: B {} W {}", game.turn, input.black, input.white)?;
        for e in &outcome.events {
            writeln!(out, "# {e}")?;
        }
        out.write_all(to_fixture(&game.board).as_bytes())?;
        out.flush()?;
    };
    if let Some(text) = result {
        out.write_all(text.as_bytes())?;
    }
    if let Some(path) = args.save {
        std::fs::write(&path, record.serialize()).map_err(|source| CliError::File { path, source })?;
    }
    Ok(())
}
