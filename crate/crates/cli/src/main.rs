mod error;
mod hotseat;

use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use sgo_core::oracle::{differential_check, CheckConfig};
use sgo_core::point::{MAX_SIZE, MIN_SIZE};
use sgo_core::sim::{selfplay, PolicyKind, SelfPlayConfig, DEFAULT_PASS_PROBABILITY};
use sgo_core::{parse_diagram, to_fixture, GameRecord, GameState, Outcome, Score};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "sgo", version, about = "Simultaneous-move Go: rules engine tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an empty game record.
    New {
        #[arg(long, default_value_t = 19, value_parser = board_size)]
        size: usize,
        /// Start from a board diagram instead of an empty board.
        #[arg(long, conflicts_with = "size")]
        setup: Option<PathBuf>,
    },
    /// Replay a record and print the final board, plus the score if the game ended.
    Replay { file: PathBuf },
    /// Score the final position of a record.
    Score { file: PathBuf },
    /// Bot-vs-bot games as CSV.
    Selfplay(SelfplayArgs),
    /// Compare the engine against the reference oracle.
    OracleCheck(OracleArgs),
    /// Run the match server.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Journal directory. Without one, matches live in memory only.
        #[arg(long, env = "SGO_DATA_DIR")]
        data_dir: Option<PathBuf>,
    },
    /// Two players at one terminal; moves are read without echo.
    Hotseat(hotseat::HotseatArgs),
}

#[derive(Args)]
struct SelfplayArgs {
    #[arg(long, default_value_t = 9, value_parser = board_size)]
    size: usize,
    #[arg(long, default_value_t = 100)]
    games: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to four times the number of points.
    #[arg(long)]
    max_turns: Option<u32>,
    /// random, greedy or pass; applies to both colors unless overridden.
    #[arg(long, default_value = "random")]
    policy: PolicyKind,
    #[arg(long)]
    black_policy: Option<PolicyKind>,
    #[arg(long)]
    white_policy: Option<PolicyKind>,
    #[arg(long, default_value_t = DEFAULT_PASS_PROBABILITY)]
    pass_probability: f64,
    /// Mirror every even game with colors swapped.
    #[arg(long)]
    paired: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 3, value_parser = board_size)]
    size: usize,
    /// Search depth, or turns per playout with --budget (default 2 x points).
    #[arg(long)]
    depth: Option<u32>,
    /// Number of random playouts; omit for an exhaustive search.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn board_size(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (MIN_SIZE as usize..=MAX_SIZE as usize).contains(&n) {
        Ok(n)
    } else {
        Err(format!("size must be between {MIN_SIZE} and {MAX_SIZE}"))
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn load_record(path: &Path) -> Result<(GameRecord, GameState), CliError> {
    let text = read(path)?;
    let record = GameRecord::parse(&text).map_err(|errors| CliError::Record { path: path.to_path_buf(), errors })?;
    let game = record.replay().map_err(|source| CliError::Replay { path: path.to_path_buf(), source })?;
    Ok((record, game))
}

pub fn score_lines(score: &Score, prefix: &str) -> String {
    let result = match score.outcome {
        Outcome::BlackWins => "black",
        Outcome::WhiteWins => "white",
        Outcome::Tie => "tie",
    };
    format!(
        "{prefix}black territory {} prisoners {} total {}\n\
         {prefix}white territory {} prisoners {} total {}\n\
         {prefix}result {result}\n",
        score.black_territory,
        score.black_prisoners,
        score.black_total,
        score.white_territory,
        score.white_prisoners,
        score.white_total,
    )
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::New { size, setup } => {
            let record = match setup {
                Some(path) => {
                    let board = parse_diagram(&read(&path)?).map_err(|e| CliError::BadFlags(format!("{}: {e}", path.display())))?;
                    GameRecord::from_board(&board)
                }
                None => GameRecord::new(size),
            };
            out.write_all(record.serialize().as_bytes())?;
        }
        Command::Replay { file } => {
            let (_, game) = load_record(&file)?;
            out.write_all(to_fixture(&game.board).as_bytes())?;
            if let Ok(score) = game.score() {
                out.write_all(score_lines(&score, "# ").as_bytes())?;
            }
        }
        Command::Score { file } => {
            let (_, game) = load_record(&file)?;
            let score = sgo_core::game::score_position(&game.board, game.prisoners_black, game.prisoners_white);
            out.write_all(score_lines(&score, "").as_bytes())?;
        }
        Command::Selfplay(a) => {
            if a.games == 0 {
                return Err(CliError::BadFlags("--games must be at least 1".into()));
            }
            if !(0.0..=1.0).contains(&a.pass_probability) {
                return Err(CliError::BadFlags("--pass-probability must be within [0, 1]".into()));
            }
            let mut cfg = SelfPlayConfig::new(a.size, a.games, a.seed);
            cfg.black = a.black_policy.unwrap_or(a.policy);
            cfg.white = a.white_policy.unwrap_or(a.policy);
            cfg.pass_probability = a.pass_probability;
            cfg.paired = a.paired;
            if let Some(t) = a.max_turns {
                if t == 0 {
                    return Err(CliError::BadFlags("--max-turns must be at least 1".into()));
                }
                cfg.max_turns = t;
            }
            out.write_all(selfplay(cfg).to_csv().as_bytes())?;
        }
        Command::OracleCheck(a) => {
            let depth = a.depth.unwrap_or(match a.budget {
                None => 4,
                Some(_) => 2 * (a.size * a.size) as u32,
            });
            let report = differential_check(CheckConfig { size: a.size, depth, seed: a.seed, budget: a.budget });
            for m in &report.mismatches {
                writeln!(out, "{m}")?;
            }
            writeln!(out, "{} cases, {} mismatches", report.cases_checked, report.mismatches.len())?;
            if !report.is_clean() {
                return Err(CliError::Mismatches(report.mismatches.len()));
            }
        }
        Command::Serve { addr, data_dir } => {
            tracing_subscriber::fmt()
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
                )
                .with_writer(std::io::stderr)
                .init();
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(sgo_service::serve(addr, data_dir))?;
        }
        Command::Hotseat(a) => hotseat::run(a, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let err = match e.kind() {
                ErrorKind::InvalidSubcommand | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    CliError::UnknownSubcommand(String::new())
                }
                _ => CliError::BadFlags(String::new()),
            };
            return err.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sgo: {e}");
            e.exit_code()
        }
    }
}
