//! Synchronizability, shortest reset words and careful reset words.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::automaton::{Dfa, Letter, Pfa, Word};
use crate::error::{check_cap, Result};
use crate::stateset::{StateSet, MAX_SET_STATES};

/// Outcome of a reset-word search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisResult {
    /// Present iff the automaton is (carefully) synchronizing.
    pub shortest_word: Option<Word>,
}

impl AnalysisResult {
    pub fn synchronizing(&self) -> bool {
        self.shortest_word.is_some()
    }

    pub fn min_length(&self) -> Option<usize> {
        self.shortest_word.as_ref().map(Word::len)
    }
}

/// Index of the unordered pair `{i, j}`, `i != j`.
#[inline]
pub(crate) fn pair_index(i: usize, j: usize) -> usize {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    hi * (hi - 1) / 2 + lo
}

pub(crate) fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Every pair of states can be driven to a common state.
///
/// Works on the pair graph only, so it runs in `O(n²k)` and has no state
/// count cap.
pub fn is_synchronizing(dfa: &Dfa) -> bool {
    let n = dfa.n();
    let pairs = pair_count(n);
    if pairs == 0 {
        return true;
    }
    let k = dfa.k();
    // reverse pair graph in CSR form
    let mut indeg = vec![0u32; pairs + 1];
    let mut good = vec![false; pairs];
    let mut queue = VecDeque::new();
    let mut edges = Vec::with_capacity(pairs * k);
    for j in 1..n {
        for i in 0..j {
            let p = pair_index(i, j);
            for a in 0..k {
                let (x, y) = (dfa.next(i, a), dfa.next(j, a));
                if x == y {
                    if !good[p] {
                        good[p] = true;
                        queue.push_back(p);
                    }
                } else {
                    let t = pair_index(x, y);
                    indeg[t] += 1;
                    edges.push((t as u32, p as u32));
                }
            }
        }
    }
    let mut start = vec![0usize; pairs + 1];
    for t in 0..pairs {
        start[t + 1] = start[t] + indeg[t] as usize;
    }
    let mut fill = start.clone();
    let mut preds = vec![0u32; edges.len()];
    for (t, p) in edges {
        preds[fill[t as usize]] = p;
        fill[t as usize] += 1;
    }
    let mut reached = queue.len();
    while let Some(t) = queue.pop_front() {
        for &p in &preds[start[t]..start[t + 1]] {
            let p = p as usize;
            if !good[p] {
                good[p] = true;
                reached += 1;
                queue.push_back(p);
            }
        }
    }
    reached == pairs
}

/// Breadth-first search from `start` to any singleton. Letters are tried in
/// alphabet order, so the word returned is the lexicographically least among
/// the shortest ones.
fn bfs_to_singleton(
    start: StateSet,
    k: usize,
    succ: impl Fn(StateSet, usize) -> Option<StateSet>,
) -> Option<Word> {
    if start.is_singleton() {
        return Some(Word::empty());
    }
    let mut parent: HashMap<StateSet, (StateSet, u32)> = HashMap::new();
    parent.insert(start, (start, u32::MAX));
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for a in 0..k {
            let Some(t) = succ(p, a) else { continue };
            let Entry::Vacant(slot) = parent.entry(t) else {
                continue;
            };
            slot.insert((p, a as u32));
            if t.is_singleton() {
                let mut letters = Vec::new();
                let mut cur = t;
                while cur != start {
                    let (prev, l) = parent[&cur];
                    letters.push(Letter(l as usize));
                    cur = prev;
                }
                letters.reverse();
                return Some(letters.into_iter().collect());
            }
            queue.push_back(t);
        }
    }
    None
}

/// Shortest reset word via the power automaton. Requires `n ≤ 64`.
pub fn shortest_reset_word(dfa: &Dfa) -> Result<AnalysisResult> {
    check_cap("state count", dfa.n(), MAX_SET_STATES)?;
    let word = bfs_to_singleton(StateSet::full(dfa.n()), dfa.k(), |p, a| {
        Some(dfa.image_letter(p, a))
    });
    Ok(AnalysisResult {
        shortest_word: word,
    })
}

/// `2ⁿ − n − 1`: number of subsets with at least two members.
pub fn careful_length_bound(n: usize) -> u128 {
    (1u128 << n) - n as u128 - 1
}

/// Shortest careful reset word: every prefix must be defined on every state
/// still holding a coin. Requires `n ≤ 64`.
pub fn careful_shortest_word(pfa: &Pfa) -> Result<AnalysisResult> {
    check_cap("state count", pfa.n(), MAX_SET_STATES)?;
    let word = bfs_to_singleton(StateSet::full(pfa.n()), pfa.k(), |p, a| {
        pfa.image_letter(p, a)
    });
    if let Some(w) = &word {
        assert!(
            w.len() as u128 <= careful_length_bound(pfa.n()),
            "careful reset word longer than the subset count"
        );
    }
    Ok(AnalysisResult {
        shortest_word: word,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cerny, duplication};

    #[test]
    fn pair_indexing_is_dense() {
        let n = 7;
        let mut seen = vec![false; pair_count(n)];
        for j in 1..n {
            for i in 0..j {
                let p = pair_index(i, j);
                assert_eq!(p, pair_index(j, i));
                assert!(!seen[p]);
                seen[p] = true;
            }
        }
        assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn cerny_is_synchronizing() {
        assert!(is_synchronizing(&cerny(5).unwrap()));
        assert!(is_synchronizing(
            &duplication(&cerny(4).unwrap(), Letter(1), 0, false).unwrap()
        ));
    }

    #[test]
    fn permutations_do_not_synchronize() {
        let d = Dfa::from_fn(2, 2, |q, a| if a == 0 { q } else { 1 - q }).unwrap();
        assert!(!is_synchronizing(&d));
        assert!(!shortest_reset_word(&d).unwrap().synchronizing());
    }

    #[test]
    fn cerny_shortest_lengths() {
        assert_eq!(
            shortest_reset_word(&cerny(4).unwrap())
                .unwrap()
                .min_length(),
            Some(9)
        );
        assert_eq!(
            shortest_reset_word(&cerny(5).unwrap())
                .unwrap()
                .min_length(),
            Some(16)
        );
    }

    #[test]
    fn single_state_needs_empty_word() {
        let d = Dfa::from_fn(1, 2, |_, _| 0).unwrap();
        let r = shortest_reset_word(&d).unwrap();
        assert_eq!(r.shortest_word, Some(Word::empty()));
        assert!(is_synchronizing(&d));
        let p = Pfa::from_fn(1, 1, |_, _| None).unwrap();
        assert_eq!(careful_shortest_word(&p).unwrap().min_length(), Some(0));
    }

    #[test]
    fn lexicographic_tie_break() {
        // both letters are constant maps, so "a" and "b" are both length-1
        // reset words
        let d = Dfa::from_fn(3, 2, |_, a| a).unwrap();
        let w = shortest_reset_word(&d).unwrap().shortest_word.unwrap();
        assert_eq!(w, Word::from_indices([0]));
    }

    #[test]
    fn careful_two_state() {
        // a: 0→0, 1→0; b undefined at 1
        let p = Pfa::from_fn(2, 2, |q, a| match (q, a) {
            (_, 0) => Some(0),
            (0, 1) => Some(1),
            _ => None,
        })
        .unwrap();
        let r = careful_shortest_word(&p).unwrap();
        assert_eq!(r.shortest_word, Some(Word::from_indices([0])));
    }

    #[test]
    fn careful_blocked_everywhere() {
        // the only merging letter is undefined at state 2
        let p = Pfa::from_fn(3, 2, |q, a| match a {
            0 if q == 2 => None,
            0 => Some(0),
            _ => Some((q + 1) % 3),
        })
        .unwrap();
        // b rotates; a merges 0 and 1 into 0 but is undefined at 2, so the
        // full set can never take a, and b alone is a permutation
        assert!(!careful_shortest_word(&p).unwrap().synchronizing());
    }

    #[test]
    fn capacity_error_beyond_64() {
        let d = Dfa::from_fn(65, 1, |_, _| 0).unwrap();
        assert!(matches!(
            shortest_reset_word(&d),
            Err(crate::Error::Capacity { .. })
        ));
        assert!(is_synchronizing(&d));
    }
}
