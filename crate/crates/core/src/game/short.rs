//! Can Alice win within a given number of moves?
//!
//! With [`MoveCounting::AliceMoves`] the budget is decremented only on
//! Alice's moves:
//!
//! ```text
//! A(P, m) = OR_a  B(P·a, m−1)   (m > 0)
//! B(P, m) = AND_a A(P·a, m)
//! A(P, 0) = [P is a singleton]
//! ```
//!
//! With [`MoveCounting::HalfMoves`] every letter played by either side
//! costs one unit. This is the reading under which the QSAT gadget with `n`
//! variables is won within `n` moves exactly when the formula is won.

use std::collections::HashMap;

use crate::automaton::Dfa;
use crate::error::{check_cap, Result};
use crate::stateset::StateSet;

use super::{cubic_move_bound, decide_winner, Player, FULL_GAME_CAP};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MoveCounting {
    #[default]
    AliceMoves,
    HalfMoves,
}

impl MoveCounting {
    /// Budget beyond which the question reduces to who wins at all.
    fn saturation(self, n: usize) -> u64 {
        match self {
            MoveCounting::AliceMoves => cubic_move_bound(n),
            MoveCounting::HalfMoves => 2 * cubic_move_bound(n),
        }
    }

    fn child_budget(self, budget: usize, mover: Player) -> usize {
        match (self, mover) {
            (MoveCounting::AliceMoves, Player::Bob) => budget,
            _ => budget - 1,
        }
    }

    /// A non-singleton position with this budget is lost outright.
    fn exhausted(self, budget: usize, mover: Player) -> bool {
        budget == 0 && (self == MoveCounting::HalfMoves || mover == Player::Alice)
    }
}

/// Alice wins within `moves` of her own moves.
pub fn short_game_decide(dfa: &Dfa, moves: u64) -> Result<bool> {
    short_game_decide_with(dfa, moves, MoveCounting::AliceMoves)
}

/// Memoized evaluation over the positions reachable from the full set,
/// one layer per budget value.
pub fn short_game_decide_with(dfa: &Dfa, budget: u64, counting: MoveCounting) -> Result<bool> {
    check_cap("state count", dfa.n(), FULL_GAME_CAP)?;
    let n = dfa.n();
    if n == 1 {
        return Ok(true);
    }
    if budget >= counting.saturation(n) {
        return Ok(decide_winner(dfa).0 == Player::Alice);
    }
    let budget = budget as usize;
    let k = dfa.k();

    // reachable positions and their successor table
    let start = StateSet::full(n);
    let mut index: HashMap<StateSet, u32> = HashMap::from([(start, 0)]);
    let mut sets = vec![start];
    let mut succ: Vec<u32> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let p = sets[i];
        for a in 0..k {
            let t = dfa.image_letter(p, a);
            let next = index.len() as u32;
            let id = *index.entry(t).or_insert_with(|| {
                sets.push(t);
                next
            });
            succ.push(id);
        }
        i += 1;
    }
    drop(index);
    let size = sets.len();
    let single: Vec<bool> = sets.iter().map(|s| s.is_singleton()).collect();

    // alice[i] / bob[i]: win from sets[i] with the current budget layer
    let mut alice: Vec<bool> = single.clone();
    let mut bob: Vec<bool>;
    match counting {
        MoveCounting::AliceMoves => {
            // B(·, m) from A(·, m); A(·, m+1) from B(·, m)
            for _ in 0..budget {
                bob = (0..size)
                    .map(|i| {
                        single[i] || succ[i * k..(i + 1) * k].iter().all(|&t| alice[t as usize])
                    })
                    .collect();
                let next: Vec<bool> = (0..size)
                    .map(|i| single[i] || succ[i * k..(i + 1) * k].iter().any(|&t| bob[t as usize]))
                    .collect();
                if next[0] {
                    return Ok(true);
                }
                if next == alice {
                    break;
                }
                alice = next;
            }
        }
        MoveCounting::HalfMoves => {
            bob = single.clone();
            for _ in 0..budget {
                let next_alice: Vec<bool> = (0..size)
                    .map(|i| single[i] || succ[i * k..(i + 1) * k].iter().any(|&t| bob[t as usize]))
                    .collect();
                let next_bob: Vec<bool> = (0..size)
                    .map(|i| {
                        single[i] || succ[i * k..(i + 1) * k].iter().all(|&t| alice[t as usize])
                    })
                    .collect();
                if next_alice[0] {
                    return Ok(true);
                }
                if next_alice == alice && next_bob == bob {
                    break;
                }
                alice = next_alice;
                bob = next_bob;
            }
        }
    }
    Ok(alice[0])
}

/// Same question as [`short_game_decide`], answered by depth-first
/// unfolding of the recursion. Only the sets on the current path are kept,
/// so memory is proportional to the depth; time is exponential in it.
pub fn short_game_decide_lowmem(dfa: &Dfa, moves: u64) -> Result<bool> {
    short_game_decide_lowmem_with(dfa, moves, MoveCounting::AliceMoves)
}

struct Frame {
    set: StateSet,
    budget: usize,
    mover: Player,
    next_letter: usize,
}

pub fn short_game_decide_lowmem_with(
    dfa: &Dfa,
    budget: u64,
    counting: MoveCounting,
) -> Result<bool> {
    check_cap("state count", dfa.n(), FULL_GAME_CAP)?;
    let n = dfa.n();
    if n == 1 {
        return Ok(true);
    }
    if budget >= counting.saturation(n) {
        return Ok(decide_winner(dfa).0 == Player::Alice);
    }
    let k = dfa.k();
    let mut stack = vec![Frame {
        set: StateSet::full(n),
        budget: budget as usize,
        mover: Player::Alice,
        next_letter: 0,
    }];
    // value of the frame popped last, handed to its parent
    let mut returned: Option<bool> = None;
    loop {
        let Some(top) = stack.last_mut() else {
            return Ok(returned.expect("root frame returns a value"));
        };
        match returned.take() {
            Some(r) => {
                // Alice needs one winning letter, Bob one refuting letter
                let decisive = match top.mover {
                    Player::Alice => r,
                    Player::Bob => !r,
                };
                if decisive {
                    stack.pop();
                    returned = Some(r);
                    continue;
                }
                top.next_letter += 1;
            }
            None if top.set.is_singleton() => {
                stack.pop();
                returned = Some(true);
                continue;
            }
            None if counting.exhausted(top.budget, top.mover) => {
                stack.pop();
                returned = Some(false);
                continue;
            }
            None => {}
        }
        if top.next_letter == k {
            let v = top.mover == Player::Bob;
            stack.pop();
            returned = Some(v);
            continue;
        }
        let child = Frame {
            set: dfa.image_letter(top.set, top.next_letter),
            budget: counting.child_budget(top.budget, top.mover),
            mover: top.mover.other(),
            next_letter: 0,
        };
        stack.push(child);
    }
}
