//! Seeded random instances for the oracle harness and tests.

use rand::Rng;

use crate::automaton::{Dfa, Dwa, Pfa};

/// Uniform transitions over `n` states and `k` letters.
pub fn random_dfa<R: Rng>(rng: &mut R, n: usize, k: usize) -> Dfa {
    let rows: Vec<Vec<u32>> = (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(0..n as u32)).collect())
        .collect();
    Dfa::from_fn(n, k, |q, a| rows[a][q] as usize).expect("dimensions are valid")
}

/// Each transition is undefined with probability `undefined`.
pub fn random_pfa<R: Rng>(rng: &mut R, n: usize, k: usize, undefined: f64) -> Pfa {
    let rows: Vec<Vec<Option<usize>>> = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| (!rng.gen_bool(undefined)).then(|| rng.gen_range(0..n)))
                .collect()
        })
        .collect();
    Pfa::from_fn(n, k, |q, a| rows[a][q]).expect("dimensions are valid")
}

/// Costs drawn uniformly from `1..=max_cost`.
pub fn random_dwa<R: Rng>(rng: &mut R, n: usize, k: usize, max_cost: u64) -> Dwa {
    let dfa = random_dfa(rng, n, k);
    let costs = (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(1..=max_cost)).collect())
        .collect();
    Dwa::new(dfa, costs).expect("costs are positive")
}
