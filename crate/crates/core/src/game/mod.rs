//! The two-player synchronization game.
//!
//! Every state starts with a coin. Alice and Bob alternately pick a letter
//! (Alice first); all coins slide along that letter and coins landing on the
//! same state merge. Alice wins once a single coin is left, whoever made the
//! merging move. Positions are therefore state sets plus the side to move,
//! and move counts always count Alice's moves only.

mod cerny_bob;
mod full;
mod pair;
pub(crate) mod retrograde;
mod short;
mod strategy;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::stateset::StateSet;

pub use cerny_bob::verify_bob_cerny_strategy;
pub use full::{optimal_moves, GameValueTable, FULL_GAME_CAP};
pub use pair::{decide_winner, PairGameTable};
pub use short::{
    short_game_decide, short_game_decide_lowmem, short_game_decide_lowmem_with,
    short_game_decide_with, MoveCounting,
};
pub use strategy::{alice_move, bob_move, Engine, StrategyMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "ALICE",
            Player::Bob => "BOB",
        })
    }
}

/// Coin-holding states and the side to move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GamePosition {
    pub coins: StateSet,
    pub mover: Player,
}

impl GamePosition {
    pub fn new(coins: StateSet, mover: Player) -> Self {
        GamePosition { coins, mover }
    }

    /// All states covered, Alice to move.
    pub fn start(n: usize) -> Self {
        GamePosition {
            coins: StateSet::full(n),
            mover: Player::Alice,
        }
    }

    /// A single coin left: Alice has won, regardless of the mover.
    pub fn is_terminal(&self) -> bool {
        self.coins.is_singleton()
    }
}

/// `C(n,2)·(n−2) + 1`: no game Alice can win takes her more moves than this.
pub fn cubic_move_bound(n: usize) -> u64 {
    if n < 2 {
        return 0;
    }
    let n = n as u64;
    n * (n - 1) / 2 * (n - 2) + 1
}
