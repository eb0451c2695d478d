//! The JSON interchange document shared by all automaton kinds.
//!
//! ```text
//! {"n": 4, "alphabet": ["a","b"],
//!  "delta": {"a": [1,1,2,0], "b": [1,2,3,3]},
//!  "gamma": {"a": [1,1,1,1], "b": [1,1,1,16]}}
//! ```
//!
//! A `null` entry in `delta` makes the document a PFA. A `gamma` table makes
//! it a DWA, in which case nulls are rejected. Costs are unsigned 64-bit.

use serde_json::{Map, Value};

use crate::automaton::{Automaton, Dfa, Dwa, Pfa};
use crate::error::ParseError;

const FIELDS: [&str; 4] = ["n", "alphabet", "delta", "gamma"];

pub fn parse_automaton(text: &[u8]) -> Result<Automaton, ParseError> {
    let root: Value = serde_json::from_slice(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    parse_value(&root)
}

/// Same as [`parse_automaton`] for an already decoded JSON value.
pub fn parse_value(root: &Value) -> Result<Automaton, ParseError> {
    let obj = root.as_object().ok_or_else(|| ParseError::WrongType {
        at: "$".into(),
        expected: "an object",
    })?;
    if let Some(key) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(ParseError::UnknownField { at: key.clone() });
    }

    let n = match obj.get("n") {
        None => return Err(ParseError::MissingField { at: "n".into() }),
        Some(v) => v.as_u64().ok_or_else(|| ParseError::WrongType {
            at: "n".into(),
            expected: "a non-negative integer",
        })?,
    };
    if n == 0 {
        return Err(ParseError::Invalid {
            at: "n".into(),
            message: "an automaton needs at least one state".into(),
        });
    }
    if n > u32::MAX as u64 - 1 {
        return Err(ParseError::Invalid {
            at: "n".into(),
            message: "too many states".into(),
        });
    }
    let n = n as usize;

    let alphabet = parse_alphabet(obj)?;
    let delta = letter_table(obj, "delta", &alphabet, n)?
        .ok_or_else(|| ParseError::MissingField { at: "delta".into() })?;

    let mut rows: Vec<Vec<Option<usize>>> = Vec::with_capacity(alphabet.len());
    let mut partial = None;
    for (name, entries) in alphabet.iter().zip(&delta) {
        let mut row = Vec::with_capacity(n);
        for (q, v) in entries.iter().enumerate() {
            let at = format!("delta.{name}[{q}]");
            if v.is_null() {
                partial.get_or_insert(at);
                row.push(None);
                continue;
            }
            let t = v.as_u64().ok_or_else(|| ParseError::WrongType {
                at: at.clone(),
                expected: "a state index or null",
            })?;
            if t >= n as u64 {
                return Err(ParseError::StateOutOfRange { at, state: t, n });
            }
            row.push(Some(t as usize));
        }
        rows.push(row);
    }

    let gamma = letter_table(obj, "gamma", &alphabet, n)?;
    let internal = |e: crate::Error| ParseError::Invalid {
        at: "$".into(),
        message: e.to_string(),
    };

    match (gamma, partial) {
        (Some(_), Some(at)) => Err(ParseError::NullInWeighted { at }),
        (None, Some(_)) => Ok(Automaton::Pfa(
            Pfa::new(n, alphabet, rows).map_err(internal)?,
        )),
        (gamma, None) => {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|t| t.expect("checked total")).collect())
                .collect();
            let dfa = Dfa::new(n, alphabet.clone(), rows).map_err(internal)?;
            let Some(gamma) = gamma else {
                return Ok(Automaton::Dfa(dfa));
            };
            let mut costs = Vec::with_capacity(alphabet.len());
            for (name, entries) in alphabet.iter().zip(&gamma) {
                let mut row = Vec::with_capacity(n);
                for (q, v) in entries.iter().enumerate() {
                    let at = format!("gamma.{name}[{q}]");
                    match v.as_u64() {
                        Some(c) if c >= 1 => row.push(c),
                        Some(_) => return Err(ParseError::NonPositiveCost { at }),
                        None if v.as_i64().is_some() => {
                            return Err(ParseError::NonPositiveCost { at })
                        }
                        None => {
                            return Err(ParseError::WrongType {
                                at,
                                expected: "a positive integer",
                            })
                        }
                    }
                }
                costs.push(row);
            }
            Ok(Automaton::Dwa(Dwa::new(dfa, costs).map_err(internal)?))
        }
    }
}

fn parse_alphabet(obj: &Map<String, Value>) -> Result<Vec<String>, ParseError> {
    let arr = obj
        .get("alphabet")
        .ok_or_else(|| ParseError::MissingField {
            at: "alphabet".into(),
        })?
        .as_array()
        .ok_or_else(|| ParseError::WrongType {
            at: "alphabet".into(),
            expected: "an array of strings",
        })?;
    if arr.is_empty() {
        return Err(ParseError::Invalid {
            at: "alphabet".into(),
            message: "at least one letter is required".into(),
        });
    }
    let mut out: Vec<String> = Vec::with_capacity(arr.len());
    for (i, v) in arr.iter().enumerate() {
        let at = format!("alphabet[{i}]");
        let name = v.as_str().ok_or_else(|| ParseError::WrongType {
            at: at.clone(),
            expected: "a string",
        })?;
        if name.is_empty() {
            return Err(ParseError::Invalid {
                at,
                message: "letter names must be non-empty".into(),
            });
        }
        if out.iter().any(|x| x == name) {
            return Err(ParseError::DuplicateLetter {
                at,
                letter: name.into(),
            });
        }
        out.push(name.to_owned());
    }
    Ok(out)
}

/// Reads `{"letter": [n entries], ...}` in alphabet order.
fn letter_table<'a>(
    obj: &'a Map<String, Value>,
    field: &str,
    alphabet: &[String],
    n: usize,
) -> Result<Option<Vec<&'a Vec<Value>>>, ParseError> {
    let Some(v) = obj.get(field) else {
        return Ok(None);
    };
    let table = v.as_object().ok_or_else(|| ParseError::WrongType {
        at: field.into(),
        expected: "an object keyed by letter",
    })?;
    if let Some(key) = table.keys().find(|k| !alphabet.contains(k)) {
        return Err(ParseError::UnknownLetter {
            at: field.into(),
            letter: key.clone(),
        });
    }
    let mut rows = Vec::with_capacity(alphabet.len());
    for name in alphabet {
        let at = format!("{field}.{name}");
        let row = table
            .get(name)
            .ok_or_else(|| ParseError::MissingField { at: at.clone() })?
            .as_array()
            .ok_or_else(|| ParseError::WrongType {
                at: at.clone(),
                expected: "an array",
            })?;
        if row.len() != n {
            return Err(ParseError::Arity {
                at,
                expected: n,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    Ok(Some(rows))
}

/// Canonical text: fields in fixed order, letters in alphabet order.
pub fn serialize_automaton(a: &Automaton) -> String {
    let alphabet = a.alphabet();
    let n = a.n();
    let quote = |s: &str| serde_json::to_string(s).expect("string serializes");
    let mut out = String::new();
    out.push_str(&format!("{{\n  \"n\": {n},\n  \"alphabet\": ["));
    out.push_str(
        &alphabet
            .iter()
            .map(|s| quote(s))
            .collect::<Vec<_>>()
            .join(", "),
    );
    out.push_str("],\n  \"delta\": {\n");

    let table = |out: &mut String, cell: &dyn Fn(usize, usize) -> String| {
        let lines: Vec<String> = alphabet
            .iter()
            .enumerate()
            .map(|(l, name)| {
                let cells: Vec<String> = (0..n).map(|q| cell(q, l)).collect();
                format!("    {}: [{}]", quote(name), cells.join(", "))
            })
            .collect();
        out.push_str(&lines.join(",\n"));
        out.push_str("\n  }");
    };

    match a {
        Automaton::Dfa(d) => table(&mut out, &|q, l| d.next(q, l).to_string()),
        Automaton::Dwa(w) => {
            table(&mut out, &|q, l| w.dfa().next(q, l).to_string());
            out.push_str(",\n  \"gamma\": {\n");
            table(&mut out, &|q, l| w.cost(q, l).to_string());
        }
        Automaton::Pfa(p) => table(&mut out, &|q, l| match p.next(q, l) {
            Some(t) => t.to_string(),
            None => "null".into(),
        }),
    }
    out.push_str("\n}\n");
    out
}
