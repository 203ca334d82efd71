//! Session registry with an on-disk journal.
//!
//! Every match is two files in the data directory: `<id>.session.json`
//! (tokens, joins, resignation) and `<id>.sgo`, a game record that only
//! ever grows by one turn line per resolved turn. On startup each match is
//! rebuilt by replaying its record.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard, RwLock};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use sgo_core::{Color, GameConfig, GameRecord, Move};
use tokio::sync::watch;

use crate::error::ServiceError;
use crate::session::{MatchSession, Status, SubmitOutcome};

const HEADER_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct SessionHeader {
    version: u32,
    id: String,
    black_token: String,
    white_token: String,
    max_turns: Option<u32>,
    joined: [bool; 2],
    resigned: Option<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Created {
    pub match_id: String,
    pub black_token: String,
    pub white_token: String,
}

/// One live match. The watch channel carries a counter bumped on every
/// mutation so long-polls can wake up.
pub struct Entry {
    session: Mutex<MatchSession>,
    changed: watch::Sender<u64>,
}

impl Entry {
    fn new(session: MatchSession) -> Entry {
        Entry { session: Mutex::new(session), changed: watch::Sender::new(0) }
    }

    pub fn lock(&self) -> MutexGuard<'_, MatchSession> {
        self.session.lock().unwrap_or_else(|p| p.into_inner())
    }

    pub fn subscribe(&self) -> watch::Receiver<u64> {
        self.changed.subscribe()
    }

    fn bump(&self) {
        self.changed.send_modify(|v| *v += 1);
    }
}

pub struct MatchStore {
    data_dir: Option<PathBuf>,
    matches: RwLock<HashMap<String, Arc<Entry>>>,
}

fn random_hex(bytes: usize) -> String {
    let mut buf = vec![0u8; bytes];
    rand::rng().fill_bytes(&mut buf);
    hex::encode(buf)
}

fn storage<E: std::fmt::Display>(e: E) -> ServiceError {
    ServiceError::Storage(e.to_string())
}

impl MatchStore {
    /// A store that keeps nothing on disk.
    pub fn in_memory() -> MatchStore {
        MatchStore { data_dir: None, matches: RwLock::new(HashMap::new()) }
    }

    /// Opens `dir`, creating it if needed, and reloads every journaled match.
    pub fn open(dir: impl Into<PathBuf>) -> Result<MatchStore, ServiceError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut matches = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
            let Some(id) = name.strip_suffix(".session.json") else { continue };
            match load(&dir, id) {
                Ok(session) => {
                    matches.insert(id.to_string(), Arc::new(Entry::new(session)));
                }
                Err(e) => tracing::warn!(match_id = id, error = %e, "skipping unreadable session"),
            }
        }
        Ok(MatchStore { data_dir: Some(dir), matches: RwLock::new(matches) })
    }

    pub fn len(&self) -> usize {
        self.matches.read().unwrap_or_else(|p| p.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: &str) -> Result<Arc<Entry>, ServiceError> {
        self.matches
            .read()
            .unwrap_or_else(|p| p.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownMatch(id.to_string()))
    }

    pub fn create(&self, config: GameConfig) -> Result<Created, ServiceError> {
        let id = random_hex(8);
        let created = Created { match_id: id.clone(), black_token: random_hex(16), white_token: random_hex(16) };
        let session =
            MatchSession::new(id.clone(), created.black_token.clone(), created.white_token.clone(), config)?;
        if let Some(dir) = &self.data_dir {
            let record = GameRecord { size: session.config.size, setup: session.config.setup.clone(), turns: Vec::new() };
            fs::write(record_path(dir, &id), record.header())?;
            write_header(dir, &session)?;
        }
        self.matches
            .write()
            .unwrap_or_else(|p| p.into_inner())
            .insert(id, Arc::new(Entry::new(session)));
        Ok(created)
    }

    pub fn join(&self, id: &str, token: &str) -> Result<Color, ServiceError> {
        let entry = self.get(id)?;
        let mut session = entry.lock();
        let was = session.joined(session.authenticate(token)?);
        let color = session.join(token)?;
        if !was {
            self.persist_header(&session)?;
            entry.bump();
        }
        Ok(color)
    }

    pub fn submit(&self, id: &str, token: &str, mv: Move, turn: u32) -> Result<SubmitOutcome, ServiceError> {
        let entry = self.get(id)?;
        let mut session = entry.lock();
        let before = session.view(crate::session::Viewer::Spectator).committed;
        let joined_before = Color::BOTH.map(|c| session.joined(c));
        let outcome = session.submit(token, mv, turn)?;
        if let SubmitOutcome::Resolved(resolved) = &outcome {
            if let Some(dir) = &self.data_dir {
                let input = session.game.history.last().expect("just resolved").0;
                append_turn(dir, id, resolved.turn as usize, &input)?;
            }
        }
        if joined_before != Color::BOTH.map(|c| session.joined(c)) {
            self.persist_header(&session)?;
        }
        let after = session.view(crate::session::Viewer::Spectator).committed;
        if before != after || matches!(outcome, SubmitOutcome::Resolved(_)) {
            entry.bump();
        }
        Ok(outcome)
    }

    pub fn resign(&self, id: &str, token: &str) -> Result<Color, ServiceError> {
        let entry = self.get(id)?;
        let mut session = entry.lock();
        let color = session.resign(token)?;
        self.persist_header(&session)?;
        entry.bump();
        Ok(color)
    }

    fn persist_header(&self, session: &MatchSession) -> Result<(), ServiceError> {
        match &self.data_dir {
            Some(dir) => write_header(dir, session),
            None => Ok(()),
        }
    }
}

fn header_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.session.json"))
}

fn record_path(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.sgo"))
}

fn write_header(dir: &Path, session: &MatchSession) -> Result<(), ServiceError> {
    let resigned = match &session.status {
        Status::Finished { resigned, .. } => *resigned,
        _ => None,
    };
    let header = SessionHeader {
        version: HEADER_VERSION,
        id: session.id.clone(),
        black_token: session.token(Color::Black).to_string(),
        white_token: session.token(Color::White).to_string(),
        max_turns: session.config.max_turns,
        joined: Color::BOTH.map(|c| session.joined(c)),
        resigned,
    };
    let tmp = dir.join(format!("{}.session.json.tmp", session.id));
    fs::write(&tmp, serde_json::to_vec_pretty(&header).map_err(storage)?)?;
    fs::rename(&tmp, header_path(dir, &session.id))?;
    Ok(())
}

fn append_turn(dir: &Path, id: &str, number: usize, input: &sgo_core::TurnInput) -> Result<(), ServiceError> {
    let mut file = OpenOptions::new().append(true).open(record_path(dir, id))?;
    file.write_all(GameRecord::turn_line(number, input).as_bytes())?;
    file.sync_data()?;
    Ok(())
}

/// Rebuilds a session from its journal. A header that parses but a record
/// that does not replay yields an `Abandoned` session rather than an error.
fn load(dir: &Path, id: &str) -> Result<MatchSession, ServiceError> {
    let header: SessionHeader =
        serde_json::from_slice(&fs::read(header_path(dir, id))?).map_err(storage)?;
    if header.version != HEADER_VERSION || header.id != id {
        return Err(ServiceError::Storage(format!("bad session header for {id}")));
    }
    let text = fs::read_to_string(record_path(dir, id))?;
    let Ok(record) = GameRecord::parse(&text) else {
        return abandoned(&header);
    };
    let mut config = record.config();
    config.max_turns = header.max_turns;
    let mut session = MatchSession::new(id.to_string(), header.black_token.clone(), header.white_token.clone(), config)?;
    for input in &record.turns {
        if session.resolve(*input).is_err() {
            return abandoned(&header);
        }
    }
    for (color, joined) in Color::BOTH.into_iter().zip(header.joined) {
        if joined {
            session.mark_joined(color);
        }
    }
    if let Some(color) = header.resigned {
        session.finish_by_resignation(color);
    }
    Ok(session)
}

fn abandoned(header: &SessionHeader) -> Result<MatchSession, ServiceError> {
    tracing::warn!(match_id = %header.id, "journal does not replay; marking abandoned");
    let mut session = MatchSession::new(
        header.id.clone(),
        header.black_token.clone(),
        header.white_token.clone(),
        GameConfig::new(sgo_core::point::MIN_SIZE as usize),
    )?;
    session.status = Status::Abandoned;
    Ok(session)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(s: &str) -> Move {
        s.parse().unwrap()
    }

    #[test]
    fn journal_survives_restart() {
        let dir = tempfile::tempdir().unwrap();
        let store = MatchStore::open(dir.path()).unwrap();
        let m = store.create(GameConfig::new(7)).unwrap();
        store.submit(&m.match_id, &m.black_token, mv("C4"), 1).unwrap();
        store.submit(&m.match_id, &m.white_token, mv("C4"), 1).unwrap();
        store.submit(&m.match_id, &m.black_token, mv("D4"), 2).unwrap();
        let before = store.get(&m.match_id).unwrap().lock().game.fingerprint();
        drop(store);

        let reopened = MatchStore::open(dir.path()).unwrap();
        let entry = reopened.get(&m.match_id).unwrap();
        let session = entry.lock();
        assert_eq!(session.game.fingerprint(), before);
        assert_eq!(session.status, Status::InProgress);
        // The uncommitted D4 was never written, so the turn starts over.
        assert!(!session.view(crate::session::Viewer::Spectator).committed.black);
        let text = fs::read_to_string(record_path(dir.path(), &m.match_id)).unwrap();
        assert_eq!(text, "sgo 1\nsize 7\n1. B C4 W C4\n");
    }

    #[test]
    fn resignation_is_journaled() {
        let dir = tempfile::tempdir().unwrap();
        let store = MatchStore::open(dir.path()).unwrap();
        let m = store.create(GameConfig::new(5)).unwrap();
        store.resign(&m.match_id, &m.white_token).unwrap();
        let reopened = MatchStore::open(dir.path()).unwrap();
        let status = reopened.get(&m.match_id).unwrap().lock().status.clone();
        assert!(matches!(status, Status::Finished { resigned: Some(Color::White), .. }));
    }

    #[test]
    fn corrupt_record_marks_abandoned() {
        let dir = tempfile::tempdir().unwrap();
        let store = MatchStore::open(dir.path()).unwrap();
        let m = store.create(GameConfig::new(5)).unwrap();
        fs::write(record_path(dir.path(), &m.match_id), "sgo 1\nsize 5\n1. B A1 W A1\n2. B A1 W B1\n").unwrap();
        let reopened = MatchStore::open(dir.path()).unwrap();
        assert_eq!(reopened.get(&m.match_id).unwrap().lock().status, Status::Abandoned);
    }

    #[test]
    fn unknown_match() {
        let store = MatchStore::in_memory();
        assert_eq!(store.join("zz", "t").unwrap_err(), ServiceError::UnknownMatch("zz".into()));
    }
}
