use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automaton::{Dfa, Letter};
use crate::error::{Error, Result};
use crate::stateset::StateSet;

use super::{GamePosition, GameValueTable, PairGameTable, Player, FULL_GAME_CAP};

/// How the engine picks its moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StrategyMode {
    /// Optimal play from the solved power-set game.
    Exact,
    /// Play on pairs of coins only; always sound, not always fastest.
    Pair,
}

/// Precomputed tables for one automaton. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Engine {
    mode: StrategyMode,
    pair: Arc<PairGameTable>,
    full: Option<Arc<GameValueTable>>,
}

impl Engine {
    pub fn new(dfa: &Dfa, mode: StrategyMode) -> Result<Self> {
        let full = match mode {
            StrategyMode::Exact => Some(Arc::new(GameValueTable::build(dfa, FULL_GAME_CAP)?)),
            StrategyMode::Pair => None,
        };
        Ok(Engine {
            mode,
            pair: Arc::new(PairGameTable::build(dfa)),
            full,
        })
    }

    /// Exact play when the automaton fits the full solver, pair play
    /// otherwise.
    pub fn auto(dfa: &Dfa) -> Self {
        let mode = if dfa.n() <= FULL_GAME_CAP {
            StrategyMode::Exact
        } else {
            StrategyMode::Pair
        };
        Engine::new(dfa, mode).expect("mode chosen within cap")
    }

    pub fn dfa(&self) -> &Dfa {
        self.pair.dfa()
    }

    pub fn mode(&self) -> StrategyMode {
        self.mode
    }

    pub fn winner(&self) -> Player {
        self.pair.winner()
    }

    pub fn pair_table(&self) -> &PairGameTable {
        &self.pair
    }

    pub fn value_table(&self) -> Option<&GameValueTable> {
        self.full.as_deref()
    }

    fn check(&self, pos: GamePosition, mover: Player) -> Result<()> {
        if pos.mover != mover {
            return Err(Error::InputDomain(format!(
                "it is {}'s turn, not {mover}'s",
                pos.mover
            )));
        }
        if pos.coins.len() < 2 {
            return Err(Error::InputDomain("the game is already over".into()));
        }
        Ok(())
    }

    /// A winning move for Alice. Fails if Bob wins from `pos`.
    pub fn alice_move(&self, pos: GamePosition) -> Result<Letter> {
        self.check(pos, Player::Alice)?;
        if let Some(full) = &self.full {
            if full.value(pos).is_none() {
                return Err(Error::Strategy("Bob wins from this position".into()));
            }
            return Ok(full.best_move(pos).expect("non-terminal position"));
        }
        // Work on the pair that is closest to merging. Its value drops by
        // one on each of Alice's moves, so some pair eventually merges.
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, j) in pairs(pos.coins) {
            let v = self
                .pair
                .value(i, j, Player::Alice)
                .ok_or_else(|| Error::Strategy("Bob wins from this position".into()))?;
            if best.is_none_or(|(bv, _, _)| v < bv) {
                best = Some((v, i, j));
            }
        }
        let (_, i, j) = best.expect("at least two coins");
        Ok(self
            .pair
            .strategy(i, j)
            .expect("marked pair has a strategy"))
    }

    /// Bob's reply: keep the game alive if he can, otherwise delay Alice as
    /// long as possible. Least letter on ties.
    pub fn bob_move(&self, pos: GamePosition) -> Result<Letter> {
        self.check(pos, Player::Bob)?;
        if let Some(full) = &self.full {
            return Ok(full.best_move(pos).expect("non-terminal position"));
        }
        let dfa = self.pair.dfa();
        let score = |a: usize| -> u64 {
            let next = dfa.image_letter(pos.coins, a);
            if next.is_singleton() {
                return 0;
            }
            pairs(next)
                .map(|(i, j)| match self.pair.value(i, j, Player::Alice) {
                    None => u64::MAX,
                    Some(v) => v as u64,
                })
                .max()
                .unwrap_or(0)
        };
        let best = (0..dfa.k())
            .max_by_key(|&a| (score(a), std::cmp::Reverse(a)))
            .expect("alphabet is non-empty");
        Ok(Letter(best))
    }
}

fn pairs(s: StateSet) -> impl Iterator<Item = (usize, usize)> {
    s.iter()
        .flat_map(move |i| s.iter().filter(move |&j| j > i).map(move |j| (i, j)))
}

/// Optimal (or, beyond the full-solver cap, pair-based) winning move for
/// Alice.
pub fn alice_move(dfa: &Dfa, pos: GamePosition) -> Result<Letter> {
    Engine::auto(dfa).alice_move(pos)
}

pub fn bob_move(dfa: &Dfa, pos: GamePosition) -> Result<Letter> {
    Engine::auto(dfa).bob_move(pos)
}
