//! C interface to the syncplay engine.
//!
//! Automata and engines are opaque handles created by `sync_*` functions
//! and released with the matching `*_free`. Every call returns a
//! [`SyncStatus`]; on failure [`sync_last_error`] describes the problem.
//! Strings handed out by the library are released with
//! [`sync_string_free`]. Coin sets are bitmasks, bit `q` for state `q`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use syncplay::automaton::{Automaton, Dfa, Letter, Word};
use syncplay::constructions::{cerny, duplication, BudgetInstance};
use syncplay::format::{parse_automaton, serialize_automaton};
use syncplay::game::{
    decide_winner, optimal_moves, short_game_decide_with, Engine, GamePosition, MoveCounting,
    Player, StrategyMode,
};
use syncplay::sync::{is_synchronizing, shortest_reset_word};
use syncplay::weighted::{budget_decide, min_sync_cost, sync_cost};
use syncplay::{Error, StateSet};

/// Stands for "no such value": no reset word, or Bob wins.
pub const SYNC_INFINITE: u64 = u64::MAX;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyncStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InputDomain = 4,
    Capacity = 5,
    Strategy = 6,
    Contract = 7,
    Cancelled = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyncPlayer {
    Alice = 0,
    Bob = 1,
}

impl From<Player> for SyncPlayer {
    fn from(p: Player) -> Self {
        match p {
            Player::Alice => SyncPlayer::Alice,
            Player::Bob => SyncPlayer::Bob,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyncKind {
    Dfa = 0,
    Pfa = 1,
    Dwa = 2,
}

/// An automaton of any kind.
pub struct SyncAutomaton {
    inner: Automaton,
}

/// Precomputed strategy tables for one automaton.
pub struct SyncEngine {
    inner: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SyncStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => SyncStatus::Parse,
            Error::InputDomain(_) => SyncStatus::InputDomain,
            Error::Capacity { .. } => SyncStatus::Capacity,
            Error::Strategy(_) => SyncStatus::Strategy,
            Error::Contract(_) => SyncStatus::Contract,
            Error::Cancelled => SyncStatus::Cancelled,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SyncStatus::NullPointer, format!("{what} is null"))
}

/// Run `f`, converting errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SyncStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SyncStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            SyncStatus::Panic
        }
    }
}

unsafe fn automaton<'a>(a: *const SyncAutomaton) -> Result<&'a Automaton, Failure> {
    a.as_ref()
        .map(|a| &a.inner)
        .ok_or_else(|| null("automaton"))
}

unsafe fn total(a: *const SyncAutomaton) -> Result<Dfa, Failure> {
    automaton(a)?.to_dfa().ok_or_else(|| {
        Failure(
            SyncStatus::InputDomain,
            "operation needs every transition defined".into(),
        )
    })
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(SyncStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn into_handle(a: impl Into<Automaton>) -> *mut SyncAutomaton {
    Box::into_raw(Box::new(SyncAutomaton { inner: a.into() }))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("engine strings have no nul")
        .into_raw()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn sync_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a NUL-terminated interchange document.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sync_automaton_parse(
    json: *const c_char,
    out_automaton: *mut *mut SyncAutomaton,
) -> SyncStatus {
    guard(|| {
        let slot = out(out_automaton, "out_automaton")?;
        let doc = text(json, "json")?;
        let a = parse_automaton(doc.as_bytes()).map_err(Error::from)?;
        *slot = into_handle(a);
        Ok(())
    })
}

/// # Safety
/// `a` must come from this library and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sync_automaton_free(a: *mut SyncAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Canonical interchange text; release with [`sync_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_automaton_serialize(
    a: *const SyncAutomaton,
    out_json: *mut *mut c_char,
) -> SyncStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = c_string(serialize_automaton(automaton(a)?));
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_automaton_info(
    a: *const SyncAutomaton,
    out_kind: *mut SyncKind,
    out_states: *mut usize,
    out_letters: *mut usize,
) -> SyncStatus {
    guard(|| {
        let a = automaton(a)?;
        *out(out_kind, "out_kind")? = match a {
            Automaton::Dfa(_) => SyncKind::Dfa,
            Automaton::Pfa(_) => SyncKind::Pfa,
            Automaton::Dwa(_) => SyncKind::Dwa,
        };
        *out(out_states, "out_states")? = a.n();
        *out(out_letters, "out_letters")? = a.alphabet().len();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sync_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out_automaton` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_cerny(
    n: usize,
    out_automaton: *mut *mut SyncAutomaton,
) -> SyncStatus {
    guard(|| {
        let slot = out(out_automaton, "out_automaton")?;
        *slot = into_handle(cerny(n)?);
        Ok(())
    })
}

/// Duplication of `a` with respect to letter index `letter` and state
/// `state`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_duplication(
    a: *const SyncAutomaton,
    letter: usize,
    state: usize,
    pad_odd: bool,
    out_automaton: *mut *mut SyncAutomaton,
) -> SyncStatus {
    guard(|| {
        let slot = out(out_automaton, "out_automaton")?;
        *slot = into_handle(duplication(&total(a)?, Letter(letter), state, pad_odd)?);
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_is_synchronizing(
    a: *const SyncAutomaton,
    out_result: *mut bool,
) -> SyncStatus {
    guard(|| {
        let d = total(a)?;
        *out(out_result, "out_result")? = is_synchronizing(&d);
        Ok(())
    })
}

/// Length of a shortest reset word, or [`SYNC_INFINITE`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_shortest_reset_length(
    a: *const SyncAutomaton,
    out_length: *mut u64,
) -> SyncStatus {
    guard(|| {
        let d = total(a)?;
        let len = shortest_reset_word(&d)?.min_length();
        *out(out_length, "out_length")? = len.map_or(SYNC_INFINITE, |l| l as u64);
        Ok(())
    })
}

/// A shortest reset word as text, or null when there is none. Release
/// with [`sync_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_shortest_reset_word(
    a: *const SyncAutomaton,
    out_word: *mut *mut c_char,
) -> SyncStatus {
    guard(|| {
        let d = total(a)?;
        let slot = out(out_word, "out_word")?;
        *slot = match shortest_reset_word(&d)?.shortest_word {
            Some(w) => c_string(w.display(d.alphabet())),
            None => ptr::null_mut(),
        };
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_decide_winner(
    a: *const SyncAutomaton,
    out_winner: *mut SyncPlayer,
) -> SyncStatus {
    guard(|| {
        let d = total(a)?;
        *out(out_winner, "out_winner")? = decide_winner(&d).0.into();
        Ok(())
    })
}

/// Alice moves needed from the start, or [`SYNC_INFINITE`] if Bob wins.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_optimal_moves(
    a: *const SyncAutomaton,
    out_moves: *mut u64,
) -> SyncStatus {
    guard(|| {
        let d = total(a)?;
        let v = optimal_moves(&d)?.start_value();
        *out(out_moves, "out_moves")? = v.map_or(SYNC_INFINITE, u64::from);
        Ok(())
    })
}

/// Does Alice win within `moves`? With `count_half_moves` every letter
/// counts, otherwise only Alice's.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_short_game_decide(
    a: *const SyncAutomaton,
    moves: u64,
    count_half_moves: bool,
    out_result: *mut bool,
) -> SyncStatus {
    guard(|| {
        let d = total(a)?;
        let counting = if count_half_moves {
            MoveCounting::HalfMoves
        } else {
            MoveCounting::AliceMoves
        };
        *out(out_result, "out_result")? = short_game_decide_with(&d, moves, counting)?;
        Ok(())
    })
}

fn weighted(a: &Automaton) -> Result<&syncplay::Dwa, Failure> {
    match a {
        Automaton::Dwa(w) => Ok(w),
        _ => Err(Failure(
            SyncStatus::InputDomain,
            "operation needs a weighted automaton".into(),
        )),
    }
}

/// Is there a reset word of cost at most `budget`? `out_cost` receives the
/// least cost when it fits, [`SYNC_INFINITE`] otherwise; it may be null.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_budget_decide(
    a: *const SyncAutomaton,
    budget: u64,
    out_feasible: *mut bool,
    out_cost: *mut u64,
) -> SyncStatus {
    guard(|| {
        let dwa = weighted(automaton(a)?)?;
        let r = budget_decide(&BudgetInstance::new(dwa.clone(), budget)?)?;
        *out(out_feasible, "out_feasible")? = r.feasible;
        if let Some(c) = out_cost.as_mut() {
            *c = r.cost.unwrap_or(SYNC_INFINITE);
        }
        Ok(())
    })
}

/// Least cost of a reset word, or [`SYNC_INFINITE`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_min_sync_cost(
    a: *const SyncAutomaton,
    out_cost: *mut u64,
) -> SyncStatus {
    guard(|| {
        let dwa = weighted(automaton(a)?)?;
        *out(out_cost, "out_cost")? = min_sync_cost(dwa)?.unwrap_or(SYNC_INFINITE);
        Ok(())
    })
}

/// Cost of the reset word `word` (letters juxtaposed or space separated).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_sync_cost(
    a: *const SyncAutomaton,
    word: *const c_char,
    out_cost: *mut u64,
) -> SyncStatus {
    guard(|| {
        let dwa = weighted(automaton(a)?)?;
        let w = Word::parse(text(word, "word")?, dwa.dfa().alphabet())?;
        *out(out_cost, "out_cost")? = sync_cost(dwa, &w)?;
        Ok(())
    })
}

/// Build strategy tables. `exact` selects optimal play from the full game
/// (limited state count); otherwise play works on pairs of coins.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_engine_new(
    a: *const SyncAutomaton,
    exact: bool,
    out_engine: *mut *mut SyncEngine,
) -> SyncStatus {
    guard(|| {
        let slot = out(out_engine, "out_engine")?;
        let mode = if exact {
            StrategyMode::Exact
        } else {
            StrategyMode::Pair
        };
        let engine = Engine::new(&total(a)?, mode)?;
        *slot = Box::into_raw(Box::new(SyncEngine { inner: engine }));
        Ok(())
    })
}

/// # Safety
/// `e` must come from this library and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn sync_engine_free(e: *mut SyncEngine) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

unsafe fn engine_move(
    e: *const SyncEngine,
    coins: u64,
    mover: Player,
    out_letter: *mut usize,
) -> SyncStatus {
    guard(|| {
        let e = &e.as_ref().ok_or_else(|| null("engine"))?.inner;
        let slot = out(out_letter, "out_letter")?;
        let n = e.dfa().n();
        if coins == 0 || (n < 64 && coins >> n != 0) {
            return Err(Failure(
                SyncStatus::InputDomain,
                format!("coin mask {coins:#x} does not fit {n} states"),
            ));
        }
        let pos = GamePosition::new(StateSet::from_bits(coins), mover);
        let Letter(a) = match mover {
            Player::Alice => e.alice_move(pos)?,
            Player::Bob => e.bob_move(pos)?,
        };
        *slot = a;
        Ok(())
    })
}

/// Alice's move from the coin set `coins`. Fails with
/// [`SyncStatus::Strategy`] when Bob wins from there.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_engine_alice_move(
    e: *const SyncEngine,
    coins: u64,
    out_letter: *mut usize,
) -> SyncStatus {
    engine_move(e, coins, Player::Alice, out_letter)
}

/// Bob's reply from the coin set `coins`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sync_engine_bob_move(
    e: *const SyncEngine,
    coins: u64,
    out_letter: *mut usize,
) -> SyncStatus {
    engine_move(e, coins, Player::Bob, out_letter)
}
