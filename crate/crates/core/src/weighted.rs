//! Synchronization under transition costs.
//!
//! The cost of a word from a state is the sum of the transition costs along
//! its path; the cost of a reset word is the maximum of that over all start
//! states. Searches work on cost profiles: the current position and the
//! accumulated cost of every start state.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::automaton::{Dwa, Letter, Word};
use crate::constructions::BudgetInstance;
use crate::error::{check_cap, Error, Result};
use crate::game::{decide_winner, Player};
use crate::sync::shortest_reset_word;

/// State cap for profile searches (positions are packed four bits each).
pub const PROFILE_CAP: usize = 16;
/// State cap for the budgeted game.
pub const GAME_BUDGET_CAP: usize = 10;

/// Cooperative cancellation flag shared with a running search.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Limits for [`budget_decide_with`] and [`game_on_budget_with`].
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Longest witness word that is reconstructed.
    pub witness_limit: usize,
    /// Stored search nodes before giving up with a capacity error.
    pub max_nodes: usize,
    pub cancel: Option<CancelToken>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            witness_limit: 1 << 16,
            max_nodes: 20_000_000,
            cancel: None,
        }
    }
}

impl SearchOptions {
    fn check_cancel(&self) -> Result<()> {
        match &self.cancel {
            Some(t) if t.is_cancelled() => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }
}

/// Position and accumulated cost of every start state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CostProfile {
    pub positions: Vec<usize>,
    pub costs: Vec<u64>,
}

impl CostProfile {
    pub fn initial(n: usize) -> Self {
        CostProfile {
            positions: (0..n).collect(),
            costs: vec![0; n],
        }
    }

    /// Extend by one letter.
    pub fn step(&self, dwa: &Dwa, a: usize) -> CostProfile {
        let positions = self
            .positions
            .iter()
            .map(|&p| dwa.dfa().next(p, a))
            .collect();
        let costs = self
            .positions
            .iter()
            .zip(&self.costs)
            .map(|(&p, &c)| c.saturating_add(dwa.cost(p, a)))
            .collect();
        CostProfile { positions, costs }
    }

    pub fn max_cost(&self) -> u64 {
        self.costs.iter().copied().max().unwrap_or(0)
    }

    /// All start states have reached the same state.
    pub fn is_synchronized(&self) -> bool {
        self.positions.windows(2).all(|w| w[0] == w[1])
    }
}

/// Cost of reading `w` from `q`. Sums saturate at `u64::MAX`.
pub fn word_cost(dwa: &Dwa, q: usize, w: &Word) -> Result<u64> {
    dwa.dfa().check_state(q)?;
    dwa.dfa().check_word(w)?;
    let mut p = q;
    let mut total = 0u64;
    for &Letter(a) in w.letters() {
        total = total.saturating_add(dwa.cost(p, a));
        p = dwa.dfa().next(p, a);
    }
    Ok(total)
}

/// Maximum over start states of [`word_cost`]; `w` must be a reset word.
pub fn sync_cost(dwa: &Dwa, w: &Word) -> Result<u64> {
    dwa.dfa().check_word(w)?;
    let dfa = dwa.dfa();
    let ends: Vec<usize> = (0..dfa.n())
        .map(|q| dfa.apply_word(q, w))
        .collect::<Result<_>>()?;
    if let Some(q) = (1..dfa.n()).find(|&q| ends[q] != ends[0]) {
        return Err(Error::Contract(format!(
            "not a reset word: state 0 ends in {} but state {q} ends in {}",
            ends[0], ends[q]
        )));
    }
    (0..dfa.n()).try_fold(0, |m, q| Ok(m.max(word_cost(dwa, q, w)?)))
}

/// Outcome of a budget search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetResult {
    pub feasible: bool,
    /// Least cost of a reset word, when it is within the budget.
    pub cost: Option<u64>,
    /// A reset word of that cost, unless longer than the witness limit.
    pub witness: Option<Word>,
}

fn pack(positions: impl Iterator<Item = usize>) -> u64 {
    positions
        .enumerate()
        .fold(0, |acc, (i, p)| acc | (p as u64) << (4 * i))
}

fn unpack(packed: u64, i: usize) -> usize {
    (packed >> (4 * i) & 0xF) as usize
}

fn dominates(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Is there a reset word of cost at most the instance's budget?
pub fn budget_decide(inst: &BudgetInstance) -> Result<BudgetResult> {
    budget_decide_with(inst, &SearchOptions::default())
}

struct Node {
    positions: u64,
    parent: u32,
    letter: u32,
    alive: bool,
}

/// Best-first search over cost profiles ordered by maximum cost. A profile
/// is dropped when another one with the same positions is componentwise no
/// more expensive. The first synchronized profile popped has the least
/// possible cost.
pub fn budget_decide_with(inst: &BudgetInstance, opts: &SearchOptions) -> Result<BudgetResult> {
    let dwa = &inst.dwa;
    let budget = inst.budget;
    let n = dwa.n();
    let k = dwa.k();
    check_cap("state count", n, PROFILE_CAP)?;

    let mut nodes: Vec<Node> = Vec::new();
    let mut costs: Vec<u64> = Vec::new();
    let mut front: HashMap<u64, Vec<u32>> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();

    let root = pack(0..n);
    nodes.push(Node {
        positions: root,
        parent: u32::MAX,
        letter: 0,
        alive: true,
    });
    costs.extend(std::iter::repeat_n(0, n));
    front.insert(root, vec![0]);
    heap.push(Reverse((0, 0)));

    let mut expanded = 0usize;
    let mut child = vec![0u64; n];
    while let Some(Reverse((key, id))) = heap.pop() {
        let node = &nodes[id as usize];
        if !node.alive {
            continue;
        }
        let pos = node.positions;
        if (0..n).all(|i| unpack(pos, i) == unpack(pos, 0)) {
            return Ok(BudgetResult {
                feasible: true,
                cost: Some(key),
                witness: witness(&nodes, id, opts.witness_limit),
            });
        }
        expanded += 1;
        if expanded.is_multiple_of(1024) {
            opts.check_cancel()?;
        }
        let base = id as usize * n;
        'letters: for a in 0..k {
            let mut next = 0u64;
            for i in 0..n {
                let p = unpack(pos, i);
                let c = costs[base + i].saturating_add(dwa.cost(p, a));
                if c > budget {
                    continue 'letters;
                }
                child[i] = c;
                next |= (dwa.dfa().next(p, a) as u64) << (4 * i);
            }
            let peers = front.entry(next).or_default();
            if peers
                .iter()
                .any(|&o| dominates(&costs[o as usize * n..(o as usize + 1) * n], &child))
            {
                continue;
            }
            peers.retain(|&o| {
                let beaten = dominates(&child, &costs[o as usize * n..(o as usize + 1) * n]);
                if beaten {
                    nodes[o as usize].alive = false;
                }
                !beaten
            });
            let cid = nodes.len();
            check_cap("search nodes", cid + 1, opts.max_nodes)?;
            peers.push(cid as u32);
            nodes.push(Node {
                positions: next,
                parent: id,
                letter: a as u32,
                alive: true,
            });
            costs.extend_from_slice(&child);
            heap.push(Reverse((
                child.iter().copied().max().unwrap_or(0),
                cid as u32,
            )));
        }
    }
    Ok(BudgetResult {
        feasible: false,
        cost: None,
        witness: None,
    })
}

fn witness(nodes: &[Node], mut id: u32, limit: usize) -> Option<Word> {
    let mut letters = Vec::new();
    while nodes[id as usize].parent != u32::MAX {
        if letters.len() == limit {
            return None;
        }
        letters.push(nodes[id as usize].letter as usize);
        id = nodes[id as usize].parent;
    }
    letters.reverse();
    Some(Word::from_indices(letters))
}

/// Least cost of a reset word; `None` when the automaton does not
/// synchronize.
pub fn min_sync_cost(dwa: &Dwa) -> Result<Option<u64>> {
    min_sync_cost_with(dwa, &SearchOptions::default())
}

pub fn min_sync_cost_with(dwa: &Dwa, opts: &SearchOptions) -> Result<Option<u64>> {
    check_cap("state count", dwa.n(), PROFILE_CAP)?;
    let Some(word) = shortest_reset_word(dwa.dfa())?.shortest_word else {
        return Ok(None);
    };
    let seed = sync_cost(dwa, &word)?;
    if seed == 0 {
        return Ok(Some(0));
    }
    let inst = BudgetInstance::new(dwa.clone(), seed)?;
    let found = budget_decide_with(&inst, opts)?;
    Ok(Some(found.cost.expect("the seed word fits its own cost")))
}

/// Can Alice force synchronization with a joint move sequence (letters of
/// both players) whose cost stays within `budget`?
pub fn game_on_budget(dwa: &Dwa, budget: u64) -> Result<bool> {
    game_on_budget_with(dwa, budget, &SearchOptions::default())
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct GameKey {
    positions: u64,
    costs: Box<[u64]>,
    mover: Player,
}

struct Frame {
    key: GameKey,
    next_letter: usize,
}

enum Child {
    Won,
    Busted,
    Open(GameKey),
}

/// Depth-first minimax with memoization. Every move raises every cost by at
/// least one, so play ends within `budget + 1` half-moves and no position
/// repeats along a line of play.
pub fn game_on_budget_with(dwa: &Dwa, budget: u64, opts: &SearchOptions) -> Result<bool> {
    let n = dwa.n();
    check_cap("state count", n, GAME_BUDGET_CAP)?;
    if n == 1 {
        return Ok(true);
    }
    if decide_winner(dwa.dfa()).0 == Player::Bob {
        return Ok(false);
    }
    let k = dwa.k();
    let step = |key: &GameKey, a: usize| -> Child {
        let mut costs = Vec::with_capacity(n);
        let mut next = 0u64;
        for i in 0..n {
            let p = unpack(key.positions, i);
            let c = key.costs[i].saturating_add(dwa.cost(p, a));
            if c > budget {
                return Child::Busted;
            }
            costs.push(c);
            next |= (dwa.dfa().next(p, a) as u64) << (4 * i);
        }
        if (0..n).all(|i| unpack(next, i) == unpack(next, 0)) {
            return Child::Won;
        }
        Child::Open(GameKey {
            positions: next,
            costs: costs.into(),
            mover: key.mover.other(),
        })
    };

    let mut memo: HashMap<GameKey, bool> = HashMap::new();
    let mut stack = vec![Frame {
        key: GameKey {
            positions: pack(0..n),
            costs: vec![0; n].into(),
            mover: Player::Alice,
        },
        next_letter: 0,
    }];
    let mut returned: Option<bool> = None;
    loop {
        let Some(top) = stack.last_mut() else {
            return Ok(returned.expect("root frame returns a value"));
        };
        if let Some(r) = returned.take() {
            let decisive = match top.key.mover {
                Player::Alice => r,
                Player::Bob => !r,
            };
            if decisive {
                let done = stack.pop().expect("frame present");
                memo.insert(done.key, r);
                returned = Some(r);
                continue;
            }
            top.next_letter += 1;
        }
        if top.next_letter == k {
            let v = top.key.mover == Player::Bob;
            let done = stack.pop().expect("frame present");
            memo.insert(done.key, v);
            returned = Some(v);
            continue;
        }
        let result = match step(&top.key, top.next_letter) {
            Child::Won => Some(true),
            Child::Busted => Some(false),
            Child::Open(key) => match memo.get(&key) {
                Some(&v) => Some(v),
                None => {
                    check_cap("search nodes", memo.len() + stack.len(), opts.max_nodes)?;
                    if memo.len().is_multiple_of(1024) {
                        opts.check_cancel()?;
                    }
                    stack.push(Frame {
                        key,
                        next_letter: 0,
                    });
                    None
                }
            },
        };
        returned = result;
    }
}
