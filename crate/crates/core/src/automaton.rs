//! Transition systems over dense state indices `0..n`.
//!
//! A [`Dfa`] is total, a [`Pfa`] may leave transitions undefined, and a
//! [`Dwa`] is a [`Dfa`] with a positive cost on every transition. All three
//! are immutable once built.

use std::fmt;

use crate::error::{Error, Result};
use crate::stateset::{StateSet, MAX_SET_STATES};

/// Index of a letter in the owning automaton's alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub usize);

impl Letter {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite sequence of letters. The empty word is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Word(it.into_iter().map(Letter).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Render with the given alphabet. Single-character names are
    /// juxtaposed (`aab`), longer names are space separated.
    pub fn display(&self, alphabet: &[String]) -> String {
        let short = alphabet.iter().all(|s| s.chars().count() == 1);
        let names = self.0.iter().map(|a| {
            alphabet
                .get(a.0)
                .cloned()
                .unwrap_or_else(|| format!("#{}", a.0))
        });
        if short {
            names.collect()
        } else {
            names.collect::<Vec<_>>().join(" ")
        }
    }

    /// Inverse of [`Word::display`]. Whitespace or commas separate letters
    /// when present; otherwise each character is one letter.
    pub fn parse(text: &str, alphabet: &[String]) -> Result<Word> {
        let text = text.trim();
        let tokens: Vec<String> = if text.contains(|c: char| c.is_whitespace() || c == ',') {
            text.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(str::to_owned)
                .collect()
        } else {
            text.chars().map(|c| c.to_string()).collect()
        };
        tokens
            .iter()
            .map(|t| {
                alphabet
                    .iter()
                    .position(|name| name == t)
                    .map(Letter)
                    .ok_or_else(|| Error::InputDomain(format!("unknown letter {t:?} in word")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// `a`, `b`, ..., `z`, then `l26`, `l27`, ...
pub fn default_alphabet(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("l{i}")
            }
        })
        .collect()
}

fn check_alphabet(alphabet: &[String]) -> Result<()> {
    if alphabet.is_empty() {
        return Err(Error::InputDomain("alphabet must not be empty".into()));
    }
    for (i, name) in alphabet.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::InputDomain("letter names must be non-empty".into()));
        }
        if alphabet[..i].contains(name) {
            return Err(Error::InputDomain(format!("duplicate letter {name:?}")));
        }
    }
    Ok(())
}

/// Complete deterministic automaton.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    n: usize,
    alphabet: Vec<String>,
    // delta[a * n + q]
    delta: Vec<u32>,
}

impl Dfa {
    /// Build from one row per letter: `rows[a][q] = q·a`.
    pub fn new(n: usize, alphabet: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InputDomain(
                "automaton needs at least one state".into(),
            ));
        }
        check_alphabet(&alphabet)?;
        if rows.len() != alphabet.len() {
            return Err(Error::InputDomain(format!(
                "{} transition rows for {} letters",
                rows.len(),
                alphabet.len()
            )));
        }
        let mut delta = Vec::with_capacity(n * rows.len());
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InputDomain(format!(
                    "row for letter {} has {} entries, expected {n}",
                    alphabet[a],
                    row.len()
                )));
            }
            for &t in row {
                if t >= n {
                    return Err(Error::InputDomain(format!("target state {t} out of range")));
                }
                delta.push(t as u32);
            }
        }
        Ok(Dfa { n, alphabet, delta })
    }

    /// Build from a transition function over the default alphabet.
    pub fn from_fn(n: usize, k: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows = (0..k).map(|a| (0..n).map(|q| f(q, a)).collect()).collect();
        Dfa::new(n, default_alphabet(k), rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// `q·a` without range checks beyond the slice bound.
    #[inline]
    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[a * self.n + q] as usize
    }

    /// Transition row of letter `a`.
    pub fn row(&self, a: usize) -> &[u32] {
        &self.delta[a * self.n..(a + 1) * self.n]
    }

    pub fn apply_letter(&self, q: usize, a: Letter) -> Result<usize> {
        self.check_state(q)?;
        self.check_letter(a)?;
        Ok(self.next(q, a.0))
    }

    pub fn apply_word(&self, q: usize, w: &Word) -> Result<usize> {
        self.check_state(q)?;
        self.check_word(w)?;
        Ok(w.letters().iter().fold(q, |q, a| self.next(q, a.0)))
    }

    /// `{q·a : q ∈ p}`. Requires `n ≤ 64`.
    #[inline]
    pub fn image_letter(&self, p: StateSet, a: usize) -> StateSet {
        let row = self.row(a);
        let mut out = 0u64;
        for q in p {
            out |= 1u64 << row[q];
        }
        StateSet::from_bits(out)
    }

    /// `{q·w : q ∈ p}`.
    pub fn image(&self, p: StateSet, w: &Word) -> Result<StateSet> {
        self.check_set(p)?;
        self.check_word(w)?;
        Ok(w.letters().iter().fold(p, |s, a| self.image_letter(s, a.0)))
    }

    pub fn full_set(&self) -> Result<StateSet> {
        crate::error::check_cap("state count", self.n, MAX_SET_STATES)?;
        Ok(StateSet::full(self.n))
    }

    pub(crate) fn check_state(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::InputDomain(format!(
                "state {q} out of range (n = {})",
                self.n
            )))
        }
    }

    pub(crate) fn check_letter(&self, a: Letter) -> Result<()> {
        if a.0 < self.k() {
            Ok(())
        } else {
            Err(Error::InputDomain(format!(
                "letter index {} out of range (k = {})",
                a.0,
                self.k()
            )))
        }
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        w.letters().iter().try_for_each(|&a| self.check_letter(a))
    }

    pub(crate) fn check_set(&self, p: StateSet) -> Result<()> {
        if p.is_empty() {
            return Err(Error::InputDomain("state set must be non-empty".into()));
        }
        if self.n < MAX_SET_STATES && p.bits() >> self.n != 0 {
            return Err(Error::InputDomain(
                "state set has members outside 0..n".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_struct("Dfa");
        m.field("n", &self.n);
        for (a, name) in self.alphabet.iter().enumerate() {
            m.field(name, &self.row(a));
        }
        m.finish()
    }
}

const UNDEFINED: u32 = u32::MAX;

/// Partial automaton: a transition may be undefined.
#[derive(Clone, PartialEq, Eq)]
pub struct Pfa {
    n: usize,
    alphabet: Vec<String>,
    delta: Vec<u32>,
}

impl Pfa {
    pub fn new(n: usize, alphabet: Vec<String>, rows: Vec<Vec<Option<usize>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InputDomain(
                "automaton needs at least one state".into(),
            ));
        }
        check_alphabet(&alphabet)?;
        if rows.len() != alphabet.len() {
            return Err(Error::InputDomain(
                "one transition row per letter required".into(),
            ));
        }
        let mut delta = Vec::with_capacity(n * rows.len());
        for row in &rows {
            if row.len() != n {
                return Err(Error::InputDomain(format!(
                    "row has {} entries, expected {n}",
                    row.len()
                )));
            }
            for t in row {
                match *t {
                    Some(t) if t >= n => {
                        return Err(Error::InputDomain(format!("target state {t} out of range")))
                    }
                    Some(t) => delta.push(t as u32),
                    None => delta.push(UNDEFINED),
                }
            }
        }
        Ok(Pfa { n, alphabet, delta })
    }

    pub fn from_fn(n: usize, k: usize, f: impl Fn(usize, usize) -> Option<usize>) -> Result<Self> {
        let rows = (0..k).map(|a| (0..n).map(|q| f(q, a)).collect()).collect();
        Pfa::new(n, default_alphabet(k), rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    #[inline]
    pub fn next(&self, q: usize, a: usize) -> Option<usize> {
        match self.delta[a * self.n + q] {
            UNDEFINED => None,
            t => Some(t as usize),
        }
    }

    /// `P·a`, undefined as soon as one member has no `a`-transition.
    pub fn image_letter(&self, p: StateSet, a: usize) -> Option<StateSet> {
        let mut out = 0u64;
        for q in p {
            out |= 1u64 << self.next(q, a)?;
        }
        Some(StateSet::from_bits(out))
    }

    pub fn is_total(&self) -> bool {
        !self.delta.contains(&UNDEFINED)
    }

    /// The same automaton as a [`Dfa`] when no transition is undefined.
    pub fn to_dfa(&self) -> Option<Dfa> {
        self.is_total().then(|| Dfa {
            n: self.n,
            alphabet: self.alphabet.clone(),
            delta: self.delta.clone(),
        })
    }
}

impl From<&Dfa> for Pfa {
    fn from(d: &Dfa) -> Pfa {
        Pfa {
            n: d.n,
            alphabet: d.alphabet.clone(),
            delta: d.delta.clone(),
        }
    }
}

impl fmt::Debug for Pfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_struct("Pfa");
        m.field("n", &self.n);
        for (a, name) in self.alphabet.iter().enumerate() {
            let row: Vec<_> = (0..self.n).map(|q| self.next(q, a)).collect();
            m.field(name, &row);
        }
        m.finish()
    }
}

/// Deterministic weighted automaton: a [`Dfa`] with a cost `≥ 1` per
/// transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dwa {
    dfa: Dfa,
    gamma: Vec<u64>,
}

impl Dwa {
    /// `costs[a][q]` is the price of `q --a-->`.
    pub fn new(dfa: Dfa, costs: Vec<Vec<u64>>) -> Result<Self> {
        if costs.len() != dfa.k() {
            return Err(Error::InputDomain(
                "one cost row per letter required".into(),
            ));
        }
        let mut gamma = Vec::with_capacity(dfa.n() * dfa.k());
        for row in &costs {
            if row.len() != dfa.n() {
                return Err(Error::InputDomain(format!(
                    "cost row has {} entries, expected {}",
                    row.len(),
                    dfa.n()
                )));
            }
            if row.contains(&0) {
                return Err(Error::InputDomain("costs must be positive".into()));
            }
            gamma.extend_from_slice(row);
        }
        Ok(Dwa { dfa, gamma })
    }

    /// Every transition costs 1.
    pub fn unit(dfa: Dfa) -> Self {
        let gamma = vec![1; dfa.n() * dfa.k()];
        Dwa { dfa, gamma }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn n(&self) -> usize {
        self.dfa.n()
    }

    pub fn k(&self) -> usize {
        self.dfa.k()
    }

    #[inline]
    pub fn cost(&self, q: usize, a: usize) -> u64 {
        self.gamma[a * self.dfa.n() + q]
    }

    pub fn cost_row(&self, a: usize) -> &[u64] {
        let n = self.dfa.n();
        &self.gamma[a * n..(a + 1) * n]
    }
}

/// Which of the three automaton kinds a document describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Dfa,
    Pfa,
    Dwa,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Dfa => "DFA",
            Kind::Pfa => "PFA",
            Kind::Dwa => "DWA",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Dfa(Dfa),
    Pfa(Pfa),
    Dwa(Dwa),
}

impl Automaton {
    pub fn kind(&self) -> Kind {
        match self {
            Automaton::Dfa(_) => Kind::Dfa,
            Automaton::Pfa(_) => Kind::Pfa,
            Automaton::Dwa(_) => Kind::Dwa,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Automaton::Dfa(d) => d.n(),
            Automaton::Pfa(p) => p.n(),
            Automaton::Dwa(w) => w.n(),
        }
    }

    pub fn alphabet(&self) -> &[String] {
        match self {
            Automaton::Dfa(d) => d.alphabet(),
            Automaton::Pfa(p) => p.alphabet(),
            Automaton::Dwa(w) => w.dfa().alphabet(),
        }
    }

    /// The total transition structure, when there is one. A DWA yields its
    /// underlying DFA.
    pub fn as_dfa(&self) -> Option<&Dfa> {
        match self {
            Automaton::Dfa(d) => Some(d),
            Automaton::Dwa(w) => Some(w.dfa()),
            Automaton::Pfa(_) => None,
        }
    }

    /// Like [`Automaton::as_dfa`], but also accepts a PFA with no undefined
    /// transitions.
    pub fn to_dfa(&self) -> Option<Dfa> {
        match self {
            Automaton::Pfa(p) => p.to_dfa(),
            other => other.as_dfa().cloned(),
        }
    }
}

impl From<Dfa> for Automaton {
    fn from(d: Dfa) -> Self {
        Automaton::Dfa(d)
    }
}

impl From<Pfa> for Automaton {
    fn from(p: Pfa) -> Self {
        Automaton::Pfa(p)
    }
}

impl From<Dwa> for Automaton {
    fn from(w: Dwa) -> Self {
        Automaton::Dwa(w)
    }
}
