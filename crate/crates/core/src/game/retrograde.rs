//! Backward induction on an explicit two-player game graph.
//!
//! Every node has exactly `k` successors (one per letter) stored row-major
//! in `succ`. Terminal nodes are worth 0. An Alice node is worth
//! `1 + min` over its successors and a Bob node `max` over its successors,
//! so values count Alice's moves only. Nodes from which Alice cannot force
//! a terminal stay at [`INF`].
//!
//! The solver is the usual attractor computation run with a 0-1 deque:
//! values are settled in nondecreasing order, an Alice node settles the
//! first time one of its successors does, a Bob node once its last
//! successor does.

use std::collections::VecDeque;

pub const INF: u32 = u32::MAX;

pub(crate) fn solve(
    num_nodes: usize,
    k: usize,
    succ: &[u32],
    is_alice: impl Fn(usize) -> bool,
    is_terminal: impl Fn(usize) -> bool,
) -> Vec<u32> {
    debug_assert_eq!(succ.len(), num_nodes * k);

    // predecessor lists in CSR form, terminal sources skipped
    let mut start = vec![0u32; num_nodes + 1];
    for v in 0..num_nodes {
        if is_terminal(v) {
            continue;
        }
        for &t in &succ[v * k..(v + 1) * k] {
            start[t as usize + 1] += 1;
        }
    }
    for i in 0..num_nodes {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut preds = vec![0u32; start[num_nodes] as usize];
    for v in 0..num_nodes {
        if is_terminal(v) {
            continue;
        }
        for &t in &succ[v * k..(v + 1) * k] {
            let slot = &mut fill[t as usize];
            preds[*slot as usize] = v as u32;
            *slot += 1;
        }
    }
    drop(fill);

    let mut value = vec![INF; num_nodes];
    let mut remaining = vec![k as u32; num_nodes];
    let mut deque = VecDeque::new();
    for (v, val) in value.iter_mut().enumerate() {
        if is_terminal(v) {
            *val = 0;
            deque.push_back(v as u32);
        }
    }

    while let Some(u) = deque.pop_front() {
        let u = u as usize;
        let du = value[u];
        for &p in &preds[start[u] as usize..start[u + 1] as usize] {
            let p = p as usize;
            if value[p] != INF {
                continue;
            }
            if is_alice(p) {
                value[p] = du + 1;
                deque.push_back(p as u32);
            } else {
                remaining[p] -= 1;
                if remaining[p] == 0 {
                    value[p] = du;
                    deque.push_front(p as u32);
                }
            }
        }
    }
    value
}
