use crate::automaton::{Dfa, Letter};
use crate::error::{check_cap, Result};
use crate::stateset::StateSet;

use super::retrograde::{self, INF};
use super::{GamePosition, Player};

/// Default state cap for solving the whole power-set game.
pub const FULL_GAME_CAP: usize = 20;

/// Exact values of every position of the power-set game.
///
/// `value` is indexed by the coin mask for Alice-to-move positions and by
/// `2ⁿ + mask` for Bob-to-move ones.
#[derive(Clone, Debug)]
pub struct GameValueTable {
    dfa: Dfa,
    value: Vec<u32>,
}

/// Solve the full game on `dfa`, allowing at most [`FULL_GAME_CAP`] states.
pub fn optimal_moves(dfa: &Dfa) -> Result<GameValueTable> {
    GameValueTable::build(dfa, FULL_GAME_CAP)
}

/// `images[a][mask]` for every mask, built incrementally from the mask with
/// its lowest member removed.
fn all_images(dfa: &Dfa) -> Vec<Vec<u32>> {
    let size = 1usize << dfa.n();
    (0..dfa.k())
        .map(|a| {
            let row = dfa.row(a);
            let mut img = vec![0u32; size];
            for m in 1..size {
                let low = m.trailing_zeros() as usize;
                img[m] = img[m & (m - 1)] | 1 << row[low];
            }
            img
        })
        .collect()
}

impl GameValueTable {
    /// Solve with an explicit state cap (at most 30).
    pub fn build(dfa: &Dfa, cap: usize) -> Result<Self> {
        check_cap("state count", dfa.n(), cap.min(30))?;
        let n = dfa.n();
        let k = dfa.k();
        let half = 1usize << n;
        let images = all_images(dfa);
        let nodes = 2 * half;
        let mut succ = vec![0u32; nodes * k];
        for m in 0..half {
            for (a, img) in images.iter().enumerate() {
                succ[m * k + a] = (half as u32) + img[m];
                succ[(half + m) * k + a] = img[m];
            }
        }
        drop(images);
        let is_single = |v: usize| {
            let m = v & (half - 1);
            m != 0 && m & (m - 1) == 0
        };
        let value = retrograde::solve(nodes, k, &succ, |v| v < half, is_single);
        Ok(GameValueTable {
            dfa: dfa.clone(),
            value,
        })
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    fn index(&self, pos: GamePosition) -> usize {
        let half = 1usize << self.dfa.n();
        let m = pos.coins.bits() as usize;
        assert!(m < half && m != 0, "position outside the automaton");
        match pos.mover {
            Player::Alice => m,
            Player::Bob => half + m,
        }
    }

    /// Alice moves needed from `pos` against best defence; `None` when Bob
    /// wins from there.
    pub fn value(&self, pos: GamePosition) -> Option<u32> {
        let v = self.value[self.index(pos)];
        (v != INF).then_some(v)
    }

    /// Value of the opening position.
    pub fn start_value(&self) -> Option<u32> {
        self.value(GamePosition::start(self.dfa.n()))
    }

    fn raw(&self, pos: GamePosition) -> u32 {
        self.value[self.index(pos)]
    }

    /// Optimal letter for the side to move, least index on ties. Alice
    /// minimizes and Bob maximizes the successor's value. `None` on
    /// terminal positions.
    pub fn best_move(&self, pos: GamePosition) -> Option<Letter> {
        if pos.is_terminal() {
            return None;
        }
        let succ = |a: usize| {
            self.raw(GamePosition::new(
                self.dfa.image_letter(pos.coins, a),
                pos.mover.other(),
            ))
        };
        let letters = 0..self.dfa.k();
        let best = match pos.mover {
            Player::Alice => letters.min_by_key(|&a| (succ(a), a)),
            Player::Bob => letters.max_by_key(|&a| (succ(a), std::cmp::Reverse(a))),
        };
        best.map(Letter)
    }

    /// Every non-empty position with its value.
    pub fn positions(&self) -> impl Iterator<Item = (GamePosition, Option<u32>)> + '_ {
        let half = 1u64 << self.dfa.n();
        (1..half).flat_map(move |m| {
            [Player::Alice, Player::Bob].into_iter().map(move |p| {
                let pos = GamePosition::new(StateSet::from_bits(m), p);
                (pos, self.value(pos))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cerny, duplication};
    use crate::game::cubic_move_bound;

    #[test]
    fn c2_takes_one_move() {
        let t = optimal_moves(&cerny(2).unwrap()).unwrap();
        assert_eq!(t.start_value(), Some(1));
        assert_eq!(t.best_move(GamePosition::start(2)), Some(Letter(0)));
    }

    #[test]
    fn duplication_of_c3() {
        let d = duplication(&cerny(3).unwrap(), Letter(1), 0, false).unwrap();
        let t = optimal_moves(&d).unwrap();
        assert_eq!(t.start_value(), Some(5));
    }

    #[test]
    fn recurrence_holds_everywhere() {
        let d = cerny(4).unwrap();
        let t = optimal_moves(&d).unwrap();
        for (pos, v) in t.positions() {
            if pos.is_terminal() {
                assert_eq!(v, Some(0));
                continue;
            }
            let succ: Vec<Option<u32>> = (0..2)
                .map(|a| {
                    t.value(GamePosition::new(
                        d.image_letter(pos.coins, a),
                        pos.mover.other(),
                    ))
                })
                .collect();
            let expect = match pos.mover {
                Player::Alice => succ.iter().flatten().min().map(|v| v + 1),
                Player::Bob if succ.iter().all(Option::is_some) => {
                    succ.iter().flatten().max().copied()
                }
                Player::Bob => None,
            };
            assert_eq!(v, expect, "{pos:?}");
            if let Some(v) = v {
                assert!(v as u64 <= cubic_move_bound(4));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let d = Dfa::from_fn(21, 1, |_, _| 0).unwrap();
        assert!(matches!(
            optimal_moves(&d),
            Err(crate::Error::Capacity { .. })
        ));
        assert!(GameValueTable::build(&Dfa::from_fn(5, 1, |_, _| 0).unwrap(), 4).is_err());
    }
}
