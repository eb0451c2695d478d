//! Exhaustive reference solvers, exponential by design. They check the
//! real solvers on small instances.

use crate::automaton::Dwa;
use crate::constructions::CnfFormula;

/// Is there a reset word of cost at most `budget`? Enumerates every word
/// whose running cost stays within the budget.
pub fn budget_by_enumeration(dwa: &Dwa, budget: u64) -> bool {
    fn go(dwa: &Dwa, pos: &[usize], cost: &[u64], budget: u64) -> bool {
        if pos.windows(2).all(|w| w[0] == w[1]) {
            return true;
        }
        (0..dwa.k()).any(|a| {
            let next_cost: Vec<u64> = pos
                .iter()
                .zip(cost)
                .map(|(&p, &c)| c + dwa.cost(p, a))
                .collect();
            if next_cost.iter().any(|&c| c > budget) {
                return false;
            }
            let next: Vec<usize> = pos.iter().map(|&p| dwa.dfa().next(p, a)).collect();
            go(dwa, &next, &next_cost, budget)
        })
    }
    let n = dwa.n();
    go(dwa, &(0..n).collect::<Vec<_>>(), &vec![0; n], budget)
}

/// Outcome of the formula game: Alice sets `x1`, Bob `x2`, Alice `x3`, and
/// so on; Alice wins iff the formula ends up true.
pub fn qsat_alice_wins(psi: &CnfFormula) -> bool {
    fn go(psi: &CnfFormula, assignment: &mut Vec<bool>) -> bool {
        let j = assignment.len();
        if j == psi.num_vars() {
            return psi.eval(assignment);
        }
        let mut outcome = |v: bool| {
            assignment.push(v);
            let r = go(psi, assignment);
            assignment.pop();
            r
        };
        if j.is_multiple_of(2) {
            outcome(true) || outcome(false)
        } else {
            outcome(true) && outcome(false)
        }
    }
    go(psi, &mut Vec::new())
}
