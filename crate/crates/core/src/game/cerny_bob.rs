use std::collections::{HashSet, VecDeque};

use crate::constructions::cerny;
use crate::error::{Error, Result};

use super::Player;

/// Check Bob's scripted defence on `Cₙ` against every line of Alice play.
///
/// Bob follows two coins, those starting on `n−1` and `1`. He plays `b`
/// when they sit on `{n−2, 0}` or `{0, 2}` and `a` otherwise. The search
/// explores every reachable (tracked pair, mover) configuration with Alice
/// branching over both letters and reports whether the two coins ever land
/// on the same state. While they stay apart at least two coins remain, so
/// `true` means Bob never loses.
pub fn verify_bob_cerny_strategy(n: usize) -> Result<bool> {
    if n <= 3 {
        return Err(Error::InputDomain(format!(
            "the scripted defence needs n > 3, got {n}"
        )));
    }
    let dfa = cerny(n)?;
    let norm = |x: usize, y: usize| (x.min(y), x.max(y));
    let bob_letter = |pair: (usize, usize)| {
        if pair == norm(n - 2, 0) || pair == (0, 2) {
            1
        } else {
            0
        }
    };
    let start = (norm(n - 1, 1), Player::Alice);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(((x, y), mover)) = queue.pop_front() {
        let letters = match mover {
            Player::Alice => vec![0, 1],
            Player::Bob => vec![bob_letter((x, y))],
        };
        for a in letters {
            let (u, v) = (dfa.next(x, a), dfa.next(y, a));
            if u == v {
                return Ok(false);
            }
            let node = (norm(u, v), mover.other());
            if seen.insert(node) {
                queue.push_back(node);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_beyond_three() {
        for n in 4..=12 {
            assert!(verify_bob_cerny_strategy(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn small_n_rejected() {
        assert!(verify_bob_cerny_strategy(3).is_err());
        assert!(verify_bob_cerny_strategy(2).is_err());
    }
}
