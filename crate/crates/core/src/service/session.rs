use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::automaton::{Automaton, Dfa, Letter};
use crate::constructions::named;
use crate::error::Error;
use crate::format::{parse_value, serialize_automaton};
use crate::game::{Engine, GamePosition, Player, StrategyMode, FULL_GAME_CAP};
use crate::stateset::StateSet;

use super::{ApiError, ErrorCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SessionStatus {
    InProgress,
    AliceWon,
    Abandoned,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionView {
    pub coins: Vec<usize>,
    pub mover: Player,
}

impl From<GamePosition> for PositionView {
    fn from(p: GamePosition) -> Self {
        PositionView {
            coins: p.coins.iter().collect(),
            mover: p.mover,
        }
    }
}

/// One half-move: who played which letter and where the coins ended up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfMove {
    pub mover: Player,
    pub letter: String,
    pub letter_index: usize,
    pub coins: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub n: usize,
    pub alphabet: Vec<String>,
    pub human_role: Player,
    pub strategy_mode: StrategyMode,
    pub prediction: Player,
    pub position: PositionView,
    pub status: SessionStatus,
    pub moves: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub summary: SessionSummary,
    pub automaton: Value,
    pub history: Vec<HalfMove>,
}

/// Reply to a human move: the move itself, the engine's answer if the game
/// went on, and the resulting state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveOutcome {
    pub human_move: HalfMove,
    pub engine_move: Option<HalfMove>,
    pub position: PositionView,
    pub status: SessionStatus,
}

/// Request body of `POST /sessions`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    /// An interchange document or a builtin name such as `cerny:5`.
    pub automaton: Value,
    pub human_role: Player,
    #[serde(default)]
    pub strategy_mode: Option<StrategyMode>,
}

/// Request body of `POST /sessions/{id}/moves`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    /// Letter name, or its index in the alphabet.
    pub letter: Value,
}

pub struct GameSession {
    id: String,
    engine: Engine,
    position: GamePosition,
    human_role: Player,
    history: Vec<HalfMove>,
    status: SessionStatus,
    last_active: Instant,
}

impl GameSession {
    fn dfa(&self) -> &Dfa {
        self.engine.dfa()
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            id: self.id.clone(),
            n: self.dfa().n(),
            alphabet: self.dfa().alphabet().to_vec(),
            human_role: self.human_role,
            strategy_mode: self.engine.mode(),
            prediction: self.engine.winner(),
            position: self.position.into(),
            status: self.status,
            moves: self.history.len(),
        }
    }

    pub fn view(&self) -> SessionView {
        let doc = serialize_automaton(&Automaton::Dfa(self.dfa().clone()));
        SessionView {
            summary: self.summary(),
            automaton: serde_json::from_str(&doc).expect("canonical document is JSON"),
            history: self.history.clone(),
        }
    }

    fn apply(&mut self, a: usize) -> HalfMove {
        let coins = self.dfa().image_letter(self.position.coins, a);
        let entry = HalfMove {
            mover: self.position.mover,
            letter: self.dfa().alphabet()[a].clone(),
            letter_index: a,
            coins: coins.iter().collect(),
        };
        self.position = GamePosition::new(coins, self.position.mover.other());
        if coins.is_singleton() {
            self.status = SessionStatus::AliceWon;
        }
        self.history.push(entry.clone());
        entry
    }

    /// Engine's choice for the side to move. When Alice cannot force a win
    /// the engine still plays, shrinking the coin set as much as it can.
    fn engine_letter(&self) -> usize {
        let pos = self.position;
        match pos.mover {
            Player::Bob => {
                self.engine
                    .bob_move(pos)
                    .expect("engine moves on its turn")
                    .0
            }
            Player::Alice => match self.engine.alice_move(pos) {
                Ok(Letter(a)) => a,
                Err(_) => (0..self.dfa().k())
                    .min_by_key(|&a| (self.dfa().image_letter(pos.coins, a).len(), a))
                    .expect("alphabet is non-empty"),
            },
        }
    }

    /// Replay the history from the full set and compare with the stored
    /// position.
    fn audit(&self) -> Result<(), ApiError> {
        let mut coins = StateSet::full(self.dfa().n());
        let mut mover = Player::Alice;
        for (i, h) in self.history.iter().enumerate() {
            coins = self.dfa().image_letter(coins, h.letter_index);
            if h.mover != mover || h.coins != coins.iter().collect::<Vec<_>>() {
                return Err(ApiError::new(
                    ErrorCode::Internal,
                    format!("history entry {i} does not replay"),
                ));
            }
            mover = mover.other();
        }
        let won = coins.is_singleton();
        if GamePosition::new(coins, mover) != self.position
            || won != (self.status == SessionStatus::AliceWon)
        {
            return Err(ApiError::new(
                ErrorCode::Internal,
                "history does not reproduce the position",
            ));
        }
        Ok(())
    }

    fn resolve_letter(&self, letter: &Value) -> Result<usize, ApiError> {
        let alphabet = self.dfa().alphabet();
        let found = match letter {
            Value::String(s) => alphabet.iter().position(|x| x == s),
            Value::Number(i) => i
                .as_u64()
                .map(|i| i as usize)
                .filter(|&i| i < alphabet.len()),
            _ => None,
        };
        found.ok_or_else(|| {
            ApiError::new(
                ErrorCode::InvalidLetter,
                format!("{letter} is not a letter of this automaton"),
            )
        })
    }
}

/// Settings for a [`SessionStore`].
#[derive(Clone, Debug)]
pub struct StoreConfig {
    pub idle_timeout: Duration,
    /// Finished and abandoned sessions are appended here as JSON lines.
    pub transcripts: Option<std::path::PathBuf>,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            idle_timeout: Duration::from_secs(30 * 60),
            transcripts: None,
        }
    }
}

/// All live sessions. Each session has its own lock; the map lock is held
/// only to look sessions up or to insert and remove them.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<GameSession>>>>,
    idle_timeout: Duration,
    transcripts: Option<Mutex<File>>,
}

fn lock(s: &Mutex<GameSession>) -> std::sync::MutexGuard<'_, GameSession> {
    s.lock().unwrap_or_else(|e| e.into_inner())
}

impl SessionStore {
    pub fn new(config: StoreConfig) -> std::io::Result<Self> {
        let transcripts = match &config.transcripts {
            Some(p) => Some(Mutex::new(open_append(p)?)),
            None => None,
        };
        Ok(SessionStore {
            sessions: RwLock::default(),
            idle_timeout: config.idle_timeout,
            transcripts,
        })
    }

    pub fn idle_timeout(&self) -> Duration {
        self.idle_timeout
    }

    fn find(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ApiError> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(ErrorCode::NotFound, format!("no session {id:?}")))
    }

    pub fn create(&self, req: CreateRequest) -> Result<SessionView, ApiError> {
        let dfa = resolve_automaton(&req.automaton)?;
        let mode = req.strategy_mode.unwrap_or(if dfa.n() <= FULL_GAME_CAP {
            StrategyMode::Exact
        } else {
            StrategyMode::Pair
        });
        let engine = Engine::new(&dfa, mode)?;
        let id = format!("{:016x}", rand::thread_rng().gen::<u64>());
        let mut session = GameSession {
            id: id.clone(),
            engine,
            position: GamePosition::start(dfa.n()),
            human_role: req.human_role,
            history: Vec::new(),
            status: if dfa.n() == 1 {
                SessionStatus::AliceWon
            } else {
                SessionStatus::InProgress
            },
            last_active: Instant::now(),
        };
        if session.human_role == Player::Bob && session.status == SessionStatus::InProgress {
            let a = session.engine_letter();
            session.apply(a);
        }
        session.audit()?;
        let view = session.view();
        log::info!(
            "session {id} created: n={}, human={}, mode={:?}, prediction={}",
            dfa.n(),
            session.human_role,
            mode,
            session.engine.winner()
        );
        if session.status == SessionStatus::AliceWon {
            self.record(&session);
        }
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub fn play(&self, id: &str, req: MoveRequest) -> Result<MoveOutcome, ApiError> {
        let entry = self.find(id)?;
        let mut s = lock(&entry);
        if s.status != SessionStatus::InProgress {
            return Err(ApiError::new(
                ErrorCode::SessionFinished,
                format!("session {id} is over"),
            ));
        }
        if s.position.mover != s.human_role {
            return Err(ApiError::new(
                ErrorCode::OutOfTurn,
                format!("it is {}'s turn", s.position.mover),
            ));
        }
        let a = s.resolve_letter(&req.letter)?;
        s.last_active = Instant::now();
        let human_move = s.apply(a);
        let engine_move = if s.status == SessionStatus::InProgress {
            let b = s.engine_letter();
            Some(s.apply(b))
        } else {
            None
        };
        s.audit()?;
        log::info!(
            "session {id}: {} played {}, engine {}, coins {:?}",
            human_move.mover,
            human_move.letter,
            engine_move.as_ref().map_or("-", |m| m.letter.as_str()),
            s.position.coins
        );
        if s.status == SessionStatus::AliceWon {
            log::info!(
                "session {id} finished: ALICE_WON after {} half-moves",
                s.history.len()
            );
            self.record(&s);
        }
        Ok(MoveOutcome {
            human_move,
            engine_move,
            position: s.position.into(),
            status: s.status,
        })
    }

    pub fn get(&self, id: &str) -> Result<SessionView, ApiError> {
        let entry = self.find(id)?;
        let view = lock(&entry).view();
        Ok(view)
    }

    pub fn list(&self) -> Vec<SessionSummary> {
        let entries: Vec<_> = self
            .sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .values()
            .cloned()
            .collect();
        let mut out: Vec<SessionSummary> = entries.iter().map(|e| lock(e).summary()).collect();
        out.sort_by(|a, b| a.id.cmp(&b.id));
        out
    }

    /// Drop sessions idle for longer than the timeout, as of `now`. Games
    /// still in progress are recorded as abandoned. Returns the number of
    /// sessions removed.
    pub fn evict_idle(&self, now: Instant) -> usize {
        let mut map = self.sessions.write().unwrap_or_else(|e| e.into_inner());
        let stale: Vec<String> = map
            .iter()
            .filter(|(_, s)| now.saturating_duration_since(lock(s).last_active) > self.idle_timeout)
            .map(|(id, _)| id.clone())
            .collect();
        for id in &stale {
            let entry = map.remove(id).expect("stale id present");
            let mut s = lock(&entry);
            if s.status == SessionStatus::InProgress {
                s.status = SessionStatus::Abandoned;
                self.record(&s);
            }
            log::info!("session {id} evicted ({:?})", s.status);
        }
        stale.len()
    }

    fn record(&self, s: &GameSession) {
        let Some(file) = &self.transcripts else {
            return;
        };
        let line = serde_json::to_string(&s.view()).expect("views serialize");
        let mut f = file.lock().unwrap_or_else(|e| e.into_inner());
        if let Err(e) = writeln!(f, "{line}") {
            log::warn!("transcript write failed: {e}");
        }
    }
}

fn open_append(p: &Path) -> std::io::Result<File> {
    OpenOptions::new().create(true).append(true).open(p)
}

/// A builtin name or an interchange document holding a complete automaton.
/// Weighted documents are played on their underlying automaton.
pub fn resolve_automaton(v: &Value) -> Result<Dfa, ApiError> {
    match v {
        Value::String(name) => Ok(named(name)?),
        _ => match parse_value(v).map_err(Error::from)? {
            Automaton::Dfa(d) => Ok(d),
            Automaton::Dwa(w) => Ok(w.dfa().clone()),
            Automaton::Pfa(_) => Err(ApiError::new(
                ErrorCode::ParseError,
                "the game needs every transition defined",
            )),
        },
    }
}
