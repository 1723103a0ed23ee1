use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use thiserror::Error;

use crate::decide::{decide, QuasiQuery};
use crate::element::Element;
use crate::eval::{evaluate, Assignment};
use crate::formula::{parse, Formula, ParseError};

use super::ExprError;

/// A named member of a system Σ. Its arguments are its free variables in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SignatureEntry {
    pub name: String,
    pub formula: Formula,
    pub params: Vec<String>,
}

impl SignatureEntry {
    pub fn new(name: impl Into<String>, formula: Formula) -> Self {
        let params = formula.free_vars().into_iter().collect();
        SignatureEntry {
            name: name.into(),
            formula,
            params,
        }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Superposition: substitutes `args` for the parameters.
    pub fn apply(&self, args: &[&Formula]) -> Formula {
        assert_eq!(args.len(), self.arity(), "arity of `{}`", self.name);
        let bindings: BTreeMap<String, Formula> = self
            .params
            .iter()
            .cloned()
            .zip(args.iter().map(|&a| a.clone()))
            .collect();
        self.formula.substitute(&bindings)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Signature {
    pub entries: Vec<SignatureEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("line {line}: expected `name := formula`")]
    Shape { line: usize },
    #[error("line {line}: invalid name `{name}`")]
    Name { line: usize, name: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
}

impl Signature {
    pub fn new(entries: Vec<SignatureEntry>) -> Self {
        Signature { entries }
    }

    /// Parses one `name := formula` per line; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, SignatureError> {
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let (name, body) = raw.split_once(":=").ok_or(SignatureError::Shape { line })?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(SignatureError::Name {
                    line,
                    name: name.to_string(),
                });
            }
            let formula = parse(body).map_err(|source| SignatureError::Formula { line, source })?;
            entries.push(SignatureEntry::new(name, formula));
        }
        Ok(Signature { entries })
    }
}

/// Semantic classes reached by bounded superposition, one representative
/// each (the first found, hence of minimal depth).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Closure {
    pub classes: Vec<Formula>,
    pub truncated: bool,
}

/// Name of the `i`-th (0-based) closure variable: `p, q, r, s, t, x5, x6, ...`.
pub fn closure_var(i: usize) -> String {
    const NAMES: [&str; 5] = ["p", "q", "r", "s", "t"];
    NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("x{i}"))
}

// Buckets formulas by their values on a fixed sample of assignments; only
// formulas in the same bucket are compared by the decision procedure.
struct SemanticIndex {
    samples: Vec<Assignment>,
    buckets: HashMap<Vec<Element>, Vec<usize>>,
}

impl SemanticIndex {
    fn new(vars: usize) -> Self {
        let pool: Vec<Element> = Element::enumerate(3).collect();
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = move || {
            // splitmix64
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        };
        let samples = (0..48)
            .map(|_| {
                (0..vars)
                    .map(|v| (closure_var(v), pool[(next() % pool.len() as u64) as usize].clone()))
                    .collect()
            })
            .collect();
        SemanticIndex {
            samples,
            buckets: HashMap::new(),
        }
    }

    fn fingerprint(&self, f: &Formula) -> Vec<Element> {
        self.samples
            .iter()
            .map(|a| evaluate(f, a).expect("closure terms only use closure variables"))
            .collect()
    }

    /// Adds `f` as class `id` unless an equivalent class exists.
    fn insert(&mut self, f: &Formula, id: usize, classes: &[Formula]) -> bool {
        let bucket = self.buckets.entry(self.fingerprint(f)).or_default();
        if bucket
            .iter()
            .any(|&c| decide(&QuasiQuery::identity(classes[c].clone(), f.clone())).is_valid())
        {
            return false;
        }
        bucket.push(id);
        true
    }
}

/// Breadth-first superposition of `sigma` over `vars` variables.
///
/// Variables and 0-ary members have depth 0; applying a member of positive
/// arity adds one level. Formulas are identified up to validity of `f = g`.
/// Stops with `truncated` set once `cap` classes exist and more would be
/// added.
pub fn enumerate_closure(
    sigma: &Signature,
    vars: usize,
    depth: usize,
    cap: usize,
) -> Result<Closure, ExprError> {
    if cap == 0 {
        return Err(ExprError::ZeroCap);
    }
    let mut index = SemanticIndex::new(vars);
    let mut classes: Vec<Formula> = Vec::new();
    let mut truncated = false;
    let atoms = (0..vars)
        .map(|v| Formula::var(closure_var(v)))
        .chain(
            sigma
                .entries
                .iter()
                .filter(|e| e.arity() == 0)
                .map(|e| e.formula.clone()),
        );
    for atom in atoms {
        if index.insert(&atom, classes.len(), &classes) {
            if classes.len() == cap {
                truncated = true;
                break;
            }
            classes.push(atom);
        }
    }

    let mut fresh_from = 0;
    'rounds: for _ in 0..depth {
        if truncated {
            break;
        }
        let known = classes.len();
        for entry in sigma.entries.iter().filter(|e| e.arity() > 0) {
            let tuples = itertools::repeat_n(0..known, entry.arity()).multi_cartesian_product();
            // only tuples touching last round's classes are new
            for tuple in tuples.filter(|t| t.iter().any(|&i| i >= fresh_from)) {
                let args: Vec<&Formula> = tuple.iter().map(|&t| &classes[t]).collect();
                let term = entry.apply(&args);
                if index.insert(&term, classes.len(), &classes) {
                    if classes.len() == cap {
                        truncated = true;
                        break 'rounds;
                    }
                    classes.push(term);
                }
            }
        }
        if classes.len() == known {
            break;
        }
        fresh_from = known;
    }
    Ok(Closure { classes, truncated })
}
