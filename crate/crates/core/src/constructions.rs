//! Automaton families and reductions: Černý series, duplication, the QSAT
//! gadget, and the partial-to-weighted budget reduction.

use std::fmt;

use crate::automaton::{Dfa, Dwa, Letter, Pfa};
use crate::error::{check_cap, Error, Result};

/// `Cₙ`: `a` fixes everything except `0·a = 1`; `b` is `m ↦ m+1 mod n`.
/// Letter `a` has index 0 and `b` index 1.
pub fn cerny(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::InputDomain(format!(
            "Černý automaton needs n ≥ 2, got {n}"
        )));
    }
    Dfa::from_fn(n, 2, |m, l| match l {
        0 if m == 0 => 1,
        0 => m,
        _ => (m + 1) % n,
    })
}

/// Duplication of `dfa` with respect to letter `b` and state `q0`.
///
/// State `(q, 0)` is index `q`, `(q, 1)` is index `n + q`:
/// `(q,0)·x = (q·x, 1)`, `(q,1)·b = (q,0)`, `(q,1)·x = (q0,1)` for `x ≠ b`.
/// With `pad_odd` an extra state `2n` is appended and every letter sends it
/// to `(q0, 1)`.
pub fn duplication(dfa: &Dfa, b: Letter, q0: usize, pad_odd: bool) -> Result<Dfa> {
    let n = dfa.n();
    let k = dfa.k();
    if k < 2 {
        return Err(Error::InputDomain(
            "duplication needs at least two letters".into(),
        ));
    }
    dfa.check_letter(b)?;
    dfa.check_state(q0)?;
    let size = 2 * n + usize::from(pad_odd);
    let rows = (0..k)
        .map(|x| {
            (0..size)
                .map(|s| {
                    if s < n {
                        n + dfa.next(s, x)
                    } else if s < 2 * n {
                        if x == b.0 {
                            s - n
                        } else {
                            n + q0
                        }
                    } else {
                        n + q0
                    }
                })
                .collect()
        })
        .collect();
    Dfa::new(size, dfa.alphabet().to_vec(), rows)
}

/// Largest parameter accepted by [`named`].
pub const NAMED_PARAM_CAP: usize = 64;

/// Resolve a builtin name: `cerny:N`, `duplication:N` (duplication of
/// `C_N` with respect to `b` and state 0) or `qsat:psi0`.
pub fn named(name: &str) -> Result<Dfa> {
    let (family, param) = name.split_once(':').ok_or_else(|| {
        Error::InputDomain(format!("builtin name {name:?} lacks a ':' parameter"))
    })?;
    let size = || -> Result<usize> {
        let v: usize = param
            .parse()
            .map_err(|_| Error::InputDomain(format!("{param:?} is not a state count")))?;
        check_cap("builtin parameter", v, NAMED_PARAM_CAP)?;
        Ok(v)
    };
    match family {
        "cerny" => cerny(size()?),
        "duplication" => {
            let v = size()?;
            check_cap("builtin parameter", v, NAMED_PARAM_CAP / 2)?;
            duplication(&cerny(v)?, Letter(1), 0, false)
        }
        "qsat" if param == "psi0" || param == "ψ₀" => eppstein_qsat(&psi0()),
        _ => Err(Error::InputDomain(format!("unknown builtin {name:?}"))),
    }
}

/// A literal `x_var` or `¬x_var`, variables counted from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }
}

/// A CNF formula. Clauses never contain complementary literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            for l in c {
                if l.var >= num_vars {
                    return Err(Error::InputDomain(format!(
                        "clause {}: variable {} out of range ({} variables)",
                        i + 1,
                        l.var + 1,
                        num_vars
                    )));
                }
                if c.contains(&Literal {
                    var: l.var,
                    positive: !l.positive,
                }) {
                    return Err(Error::InputDomain(format!(
                        "clause {} contains both polarities of x{}",
                        i + 1,
                        l.var + 1
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    fn occurs(&self, clause: usize, lit: Literal) -> bool {
        self.clauses[clause].contains(&lit)
    }

    /// Truth value under `assignment[var]`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| assignment[l.var] == l.positive))
    }

    /// DIMACS CNF: `p cnf <vars> <clauses>` then zero-terminated clauses.
    /// Lines starting with `c` are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let bad = |msg: &str| Error::InputDomain(format!("DIMACS line {}: {msg}", lineno + 1));
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                    return Err(bad("malformed header, expected `p cnf <vars> <clauses>`"));
                }
                let v = parts[2].parse().map_err(|_| bad("bad variable count"))?;
                let c = parts[3].parse().map_err(|_| bad("bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            let Some((vars, _)) = header else {
                return Err(bad("clause before header"));
            };
            for tok in line.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| bad("expected a signed integer"))?;
                if x == 0 {
                    clauses.push(std::mem::take(&mut current));
                    continue;
                }
                let var = x.unsigned_abs() as usize;
                if var > vars {
                    return Err(bad("variable exceeds header count"));
                }
                current.push(Literal {
                    var: var - 1,
                    positive: x > 0,
                });
            }
        }
        let Some((vars, count)) = header else {
            return Err(Error::InputDomain("DIMACS: missing `p cnf` header".into()));
        };
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != count {
            return Err(Error::InputDomain(format!(
                "DIMACS: header announces {count} clauses, found {}",
                clauses.len()
            )));
        }
        CnfFormula::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64 + 1;
                s.push_str(&format!("{} ", if l.positive { v } else { -v }));
            }
            s.push_str("0\n");
        }
        s
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|l| format!("{}x{}", if l.positive { "" } else { "¬" }, l.var + 1))
                    .collect();
                format!("({})", lits.join(" ∨ "))
            })
            .collect();
        f.write_str(&clauses.join(" ∧ "))
    }
}

/// `(x1 ∨ x2 ∨ x3) ∧ (¬x1 ∨ x2 ∨ x3) ∧ (x1 ∨ ¬x2 ∨ x3) ∧ (¬x2 ∨ ¬x3)`.
pub fn psi0() -> CnfFormula {
    use Literal as L;
    CnfFormula::new(
        3,
        vec![
            vec![L::pos(0), L::pos(1), L::pos(2)],
            vec![L::neg(0), L::pos(1), L::pos(2)],
            vec![L::pos(0), L::neg(1), L::pos(2)],
            vec![L::neg(1), L::neg(2)],
        ],
    )
    .expect("ψ₀ is well formed")
}

/// Index of gadget state `q_{i,j}` (1-based `i`, `j` as in the usual
/// presentation) for a formula with `n` variables.
pub fn qsat_state(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * (n + 1) + (j - 1)
}

/// The two-letter QSAT gadget.
///
/// Row `i` holds states `q_{i,1} .. q_{i,n+1}`; the sink `z` is the last
/// state. Reading `a` (true) or `b` (false) at `q_{i,j}` jumps to `z` if the
/// clause contains the matching literal of `x_j` and advances to `q_{i,j+1}`
/// otherwise. `q_{i,n+1}` and `z` go to `z` on both letters.
pub fn eppstein_qsat(psi: &CnfFormula) -> Result<Dfa> {
    let n = psi.num_vars();
    let m = psi.clauses().len();
    if m == 0 {
        return Err(Error::InputDomain(
            "formula needs at least one clause".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InputDomain(
            "formula needs at least one variable".into(),
        ));
    }
    let z = (n + 1) * m;
    let mut rows = vec![vec![z; z + 1]; 2];
    for i in 1..=m {
        for j in 1..=n {
            let s = qsat_state(n, i, j);
            let advance = qsat_state(n, i, j + 1);
            rows[0][s] = if psi.occurs(i - 1, Literal::pos(j - 1)) {
                z
            } else {
                advance
            };
            rows[1][s] = if psi.occurs(i - 1, Literal::neg(j - 1)) {
                z
            } else {
                advance
            };
        }
    }
    Dfa::new(z + 1, vec!["a".into(), "b".into()], rows)
}

/// Largest PFA accepted by [`pfa_to_dwa`]; `2ⁿ` must fit comfortably in a
/// 64-bit cost.
pub const PFA_TO_DWA_CAP: usize = 62;

/// A weighted automaton together with a budget `B ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetInstance {
    pub dwa: Dwa,
    pub budget: u64,
}

impl BudgetInstance {
    pub fn new(dwa: Dwa, budget: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::InputDomain("budget must be positive".into()));
        }
        Ok(BudgetInstance { dwa, budget })
    }
}

/// Undefined transitions become self-loops of cost `2ⁿ`, defined ones cost
/// 1, and the budget is `2ⁿ − 1`.
pub fn pfa_to_dwa(pfa: &Pfa) -> Result<BudgetInstance> {
    let n = pfa.n();
    check_cap("state count", n, PFA_TO_DWA_CAP)?;
    let penalty = 1u64 << n;
    let k = pfa.k();
    let rows = (0..k)
        .map(|a| (0..n).map(|q| pfa.next(q, a).unwrap_or(q)).collect())
        .collect();
    let costs = (0..k)
        .map(|a| {
            (0..n)
                .map(|q| if pfa.next(q, a).is_some() { 1 } else { penalty })
                .collect()
        })
        .collect();
    let dfa = Dfa::new(n, pfa.alphabet().to_vec(), rows)?;
    BudgetInstance::new(Dwa::new(dfa, costs)?, penalty - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_automaton, serialize_automaton};
    use crate::sync::{is_synchronizing, shortest_reset_word};
    use crate::Automaton;

    #[test]
    fn builtin_names() {
        assert_eq!(named("cerny:5").unwrap(), cerny(5).unwrap());
        assert_eq!(named("duplication:3").unwrap().n(), 6);
        assert_eq!(named("qsat:psi0").unwrap().n(), 17);
        for bad in [
            "cerny",
            "cerny:x",
            "cerny:1",
            "cerny:65",
            "duplication:33",
            "qsat:other",
            "foo:3",
        ] {
            assert!(named(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cerny_small() {
        let c2 = cerny(2).unwrap();
        assert_eq!(c2.row(0), &[1, 1]);
        assert!(cerny(1).is_err());
    }

    #[test]
    fn cerny_round_trip() {
        let a = Automaton::Dfa(cerny(4).unwrap());
        assert_eq!(
            parse_automaton(serialize_automaton(&a).as_bytes()).unwrap(),
            a
        );
    }

    #[test]
    fn duplication_shape() {
        let c4 = cerny(4).unwrap();
        let d = duplication(&c4, Letter(1), 0, false).unwrap();
        assert_eq!(d.n(), 8);
        // (0,0)·a = (1,1), (2,1)·b = (2,0), (2,1)·a = (0,1)
        assert_eq!(d.next(0, 0), 5);
        assert_eq!(d.next(6, 1), 2);
        assert_eq!(d.next(6, 0), 4);
        let padded = duplication(&c4, Letter(1), 0, true).unwrap();
        assert_eq!(padded.n(), 9);
        assert_eq!(padded.next(8, 0), 4);
        assert_eq!(padded.next(8, 1), 4);
        let one_letter = Dfa::from_fn(2, 1, |_, _| 0).unwrap();
        assert!(duplication(&one_letter, Letter(0), 0, false).is_err());
    }

    #[test]
    fn duplication_resets_in_two() {
        for n in 2..=5 {
            let d = duplication(&cerny(n).unwrap(), Letter(1), 0, false).unwrap();
            assert!(is_synchronizing(&d));
            assert_eq!(shortest_reset_word(&d).unwrap().min_length(), Some(2));
        }
    }

    #[test]
    fn psi0_gadget_size() {
        let d = eppstein_qsat(&psi0()).unwrap();
        assert_eq!(d.n(), 17);
        let z = 16;
        // c1 = x1 ∨ x2 ∨ x3: q_{1,1}·a = z, q_{1,1}·b = q_{1,2}
        assert_eq!(d.next(qsat_state(3, 1, 1), 0), z);
        assert_eq!(d.next(qsat_state(3, 1, 1), 1), qsat_state(3, 1, 2));
        // row terminators and sink
        assert_eq!(d.next(qsat_state(3, 4, 4), 0), z);
        assert_eq!(d.next(z, 1), z);
    }

    #[test]
    fn assignment_word_kills_satisfied_rows() {
        let psi = psi0();
        let d = eppstein_qsat(&psi).unwrap();
        let z = d.n() - 1;
        for bits in 0..8u32 {
            let tau: Vec<bool> = (0..3).map(|v| bits >> v & 1 == 1).collect();
            for (i, clause) in psi.clauses().iter().enumerate() {
                let sat = clause.iter().any(|l| tau[l.var] == l.positive);
                let row_dead = (1..=4).all(|j| {
                    let mut s = qsat_state(3, i + 1, j);
                    for &t in &tau {
                        s = d.next(s, if t { 0 } else { 1 });
                    }
                    s == z
                });
                assert_eq!(sat, row_dead, "clause {i} under {tau:?}");
            }
        }
    }

    #[test]
    fn degenerate_formulas_rejected() {
        assert!(CnfFormula::new(1, vec![vec![Literal::pos(0), Literal::neg(0)]]).is_err());
        assert!(CnfFormula::new(1, vec![vec![Literal::pos(1)]]).is_err());
        assert!(eppstein_qsat(&CnfFormula::new(2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let psi = psi0();
        let text = psi.to_dimacs();
        assert_eq!(CnfFormula::parse_dimacs(&text).unwrap(), psi);
        let with_comments = "c psi0\np cnf 3 4\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n-2 -3 0\n";
        assert_eq!(CnfFormula::parse_dimacs(with_comments).unwrap(), psi);
        assert!(CnfFormula::parse_dimacs("p cnf 1 1\n1 -1 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("1 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    fn partial4() -> Pfa {
        Pfa::from_fn(4, 2, |q, a| match (q, a) {
            (0, _) => Some(1),
            (1, 0) => Some(1),
            (1, 1) => Some(2),
            (2, 0) => Some(2),
            (2, 1) => Some(3),
            (3, 0) => Some(0),
            _ => None,
        })
        .unwrap()
    }

    #[test]
    fn pfa_to_dwa_reproduces_weighted4() {
        let inst = pfa_to_dwa(&partial4()).unwrap();
        assert_eq!(inst.budget, 15);
        let weighted4 = parse_automaton(
            br#"{"n": 4, "alphabet": ["a", "b"],
                "delta": {"a": [1, 1, 2, 0], "b": [1, 2, 3, 3]},
                "gamma": {"a": [1, 1, 1, 1], "b": [1, 1, 1, 16]}}"#,
        )
        .unwrap();
        assert_eq!(Automaton::Dwa(inst.dwa), weighted4);
    }

    #[test]
    fn pfa_to_dwa_total_has_unit_costs() {
        let p = Pfa::from(&cerny(3).unwrap());
        let inst = pfa_to_dwa(&p).unwrap();
        assert_eq!(inst.budget, 7);
        assert!((0..2).all(|a| inst.dwa.cost_row(a).iter().all(|&c| c == 1)));
        let big = Pfa::from_fn(63, 1, |q, _| Some(q)).unwrap();
        assert!(matches!(pfa_to_dwa(&big), Err(Error::Capacity { .. })));
    }
}
