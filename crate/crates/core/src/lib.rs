//! Reset words, synchronization games and budget-constrained
//! synchronization for finite automata.
//!
//! The modules build on each other: [`automaton`] and [`format`] hold the
//! data model, [`sync`] answers classic reset-word questions, [`game`]
//! solves the two-player synchronization game, [`weighted`] handles
//! transition costs, [`constructions`] generates the standard families and
//! reductions, and [`service`] exposes interactive play over HTTP.

pub mod automaton;
pub mod constructions;
pub mod error;
pub mod format;
pub mod game;
pub mod oracle;
pub mod random;
pub mod service;
pub mod stateset;
pub mod sync;
pub mod weighted;

pub use automaton::{Automaton, Dfa, Dwa, Kind, Letter, Pfa, Word};
pub use error::{Error, ParseError, Result};
pub use game::{GamePosition, Player};
pub use stateset::StateSet;
