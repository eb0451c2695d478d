use crate::automaton::{Dfa, Letter};
use crate::sync::{pair_count, pair_index};

use super::retrograde::{self, INF};
use super::Player;

/// Solution of the game restricted to two coins.
///
/// Nodes are the unordered pairs of distinct states, once with Alice to
/// move and once with Bob to move, plus a sink standing for "the two coins
/// merged". A node is marked (Alice wins from it) iff its value is finite;
/// the value is the number of Alice moves she needs against best defence.
#[derive(Clone, Debug)]
pub struct PairGameTable {
    dfa: Dfa,
    pairs: usize,
    // [alice nodes | bob nodes | sink]
    value: Vec<u32>,
}

/// Decide the winner of the full game from the two-coin game alone: Alice
/// wins iff she wins from every pair with her to move.
pub fn decide_winner(dfa: &Dfa) -> (Player, PairGameTable) {
    let table = PairGameTable::build(dfa);
    (table.winner(), table)
}

impl PairGameTable {
    pub fn build(dfa: &Dfa) -> Self {
        let n = dfa.n();
        let k = dfa.k();
        let pairs = pair_count(n);
        let sink = 2 * pairs;
        let nodes = sink + 1;
        let mut succ = vec![sink as u32; nodes * k];
        for j in 1..n {
            for i in 0..j {
                let p = pair_index(i, j);
                for a in 0..k {
                    let (x, y) = (dfa.next(i, a), dfa.next(j, a));
                    if x != y {
                        let t = pair_index(x, y);
                        // Alice node p moves to Bob node, and vice versa
                        succ[p * k + a] = (pairs + t) as u32;
                        succ[(pairs + p) * k + a] = t as u32;
                    }
                }
            }
        }
        let value = retrograde::solve(nodes, k, &succ, |v| v < pairs, |v| v == sink);
        PairGameTable {
            dfa: dfa.clone(),
            pairs,
            value,
        }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    /// Number of game nodes, sink included.
    pub fn node_count(&self) -> usize {
        self.value.len()
    }

    pub fn winner(&self) -> Player {
        if self.value[..self.pairs].iter().all(|&v| v != INF) {
            Player::Alice
        } else {
            Player::Bob
        }
    }

    fn node(&self, i: usize, j: usize, mover: Player) -> usize {
        assert!(i != j, "a pair needs two distinct states");
        let p = pair_index(i, j);
        match mover {
            Player::Alice => p,
            Player::Bob => self.pairs + p,
        }
    }

    /// Alice moves needed from coins on `i` and `j`; `None` if Bob wins.
    pub fn value(&self, i: usize, j: usize, mover: Player) -> Option<u32> {
        let v = self.value[self.node(i, j, mover)];
        (v != INF).then_some(v)
    }

    pub fn is_marked(&self, i: usize, j: usize, mover: Player) -> bool {
        self.value(i, j, mover).is_some()
    }

    fn succ_value(&self, i: usize, j: usize, a: usize, mover: Player) -> u32 {
        let (x, y) = (self.dfa.next(i, a), self.dfa.next(j, a));
        if x == y {
            0
        } else {
            self.value[self.node(x, y, mover.other())]
        }
    }

    /// Alice's rank-decreasing letter for a marked pair: the least letter
    /// whose successor realizes the pair's value.
    pub fn strategy(&self, i: usize, j: usize) -> Option<Letter> {
        let v = self.value(i, j, Player::Alice)?;
        (0..self.dfa.k())
            .find(|&a| self.succ_value(i, j, a, Player::Alice) == v - 1)
            .map(Letter)
    }

    /// For a pair Bob wins with him to move: the least letter keeping the
    /// pair out of Alice's reach.
    pub fn escape(&self, i: usize, j: usize) -> Option<Letter> {
        if self.is_marked(i, j, Player::Bob) {
            return None;
        }
        (0..self.dfa.k())
            .find(|&a| self.succ_value(i, j, a, Player::Bob) == INF)
            .map(Letter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::cerny;

    #[test]
    fn cerny_winners() {
        assert_eq!(decide_winner(&cerny(2).unwrap()).0, Player::Alice);
        for n in 4..=7 {
            assert_eq!(decide_winner(&cerny(n).unwrap()).0, Player::Bob, "n = {n}");
        }
    }

    #[test]
    fn non_synchronizing_is_bob() {
        let d = Dfa::from_fn(3, 2, |q, a| (q + a + 1) % 3).unwrap();
        assert_eq!(decide_winner(&d).0, Player::Bob);
    }

    #[test]
    fn definite_is_alice() {
        let d = Dfa::from_fn(6, 3, |_, a| a * 2).unwrap();
        let (w, t) = decide_winner(&d);
        assert_eq!(w, Player::Alice);
        assert_eq!(t.value(0, 5, Player::Alice), Some(1));
        assert_eq!(t.strategy(0, 5), Some(Letter(0)));
    }

    #[test]
    fn single_state_alice_wins() {
        let d = Dfa::from_fn(1, 1, |_, _| 0).unwrap();
        let (w, t) = decide_winner(&d);
        assert_eq!(w, Player::Alice);
        assert_eq!(t.node_count(), 1);
    }

    #[test]
    fn marking_rules_hold() {
        let d = cerny(5).unwrap();
        let t = PairGameTable::build(&d);
        for j in 1..5 {
            for i in 0..j {
                let alice_any = (0..2).any(|a| t.succ_value(i, j, a, Player::Alice) != INF);
                let bob_all = (0..2).all(|a| t.succ_value(i, j, a, Player::Bob) != INF);
                assert_eq!(t.is_marked(i, j, Player::Alice), alice_any);
                assert_eq!(t.is_marked(i, j, Player::Bob), bob_all);
            }
        }
    }
}
