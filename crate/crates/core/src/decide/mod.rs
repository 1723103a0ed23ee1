//! Deciding identities and quasi-identities of the algebra.
//!
//! Formulas are compiled into a [`Transducer`] that reads the assignment one
//! coordinate at a time. Because every element is ultimately constant, a
//! counterexample is a lasso: a finite prefix of letters followed by one
//! letter repeated forever. The search has two parts:
//!
//! 1. breadth-first exploration of states reachable through steps on which
//!    every hypothesis equation holds;
//! 2. a fixpoint marking states with an admissible continuation, i.e. a
//!    hypothesis-respecting path to a state where some constant letter keeps
//!    the hypotheses true forever.
//!
//! Memory bits only ever fall from 1 to 0 and the position counter
//! saturates, so a constant letter reaches a fixpoint after at most
//! `width + horizon + 1` steps. Checking the hypotheses along that run and at
//! its fixpoint decides whether the constant tail is admissible.

mod oracle;
mod transducer;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use oracle::brute_force;
pub use transducer::{Letter, State, Transducer};

use crate::element::Element;
use crate::eval::{evaluate, holds_equation, Assignment};
use crate::formula::{parse, Formula, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Equation {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Equation {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Equation { lhs, rhs }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut vars = self.lhs.free_vars();
        vars.extend(self.rhs.free_vars());
        vars
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationParseError {
    #[error("equation `{0}` must contain exactly one `=`")]
    Shape(String),
    #[error(transparent)]
    Formula(#[from] ParseError),
}

impl FromStr for Equation {
    type Err = EquationParseError;

    /// Parses `lhs = rhs`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('=');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(l), Some(r), None) => Ok(Equation::new(parse(l)?, parse(r)?)),
            _ => Err(EquationParseError::Shape(s.to_string())),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `hypotheses ⟹ conclusions`, universally quantified over all free
/// variables. With no hypotheses this is a set of identities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
pub struct QuasiQuery {
    pub hypotheses: Vec<Equation>,
    pub conclusions: Vec<Equation>,
}

impl QuasiQuery {
    pub fn new(hypotheses: Vec<Equation>, conclusions: Vec<Equation>) -> Self {
        QuasiQuery {
            hypotheses,
            conclusions,
        }
    }

    pub fn identity(lhs: Formula, rhs: Formula) -> Self {
        QuasiQuery::new(vec![], vec![Equation::new(lhs, rhs)])
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.hypotheses
            .iter()
            .chain(&self.conclusions)
            .flat_map(Equation::free_vars)
            .collect()
    }
}

impl fmt::Display for QuasiQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |eqs: &[Equation]| {
            eqs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        if !self.hypotheses.is_empty() {
            write!(f, "{} => ", join(&self.hypotheses))?;
        }
        f.write_str(&join(&self.conclusions))
    }
}

/// An ultimately-constant counterexample: `prefix` letters followed by
/// `loop_letter` forever. Each letter lists one bit per entry of `vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Lasso {
    pub vars: Vec<String>,
    pub prefix: Vec<Vec<bool>>,
    pub loop_letter: Vec<bool>,
    /// 0-based index of the coordinate where a conclusion fails.
    pub violation_step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("malformed lasso: {0}")]
    Malformed(String),
}

impl Lasso {
    /// Per-variable elements: prefix bits from the prefix letters, tail from
    /// the loop letter.
    pub fn to_assignment(&self) -> Result<Assignment, ReplayError> {
        let n = self.vars.len();
        if self.loop_letter.len() != n || self.prefix.iter().any(|l| l.len() != n) {
            return Err(ReplayError::Malformed(format!(
                "every letter must have {n} bits"
            )));
        }
        Ok(self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let bits: Vec<bool> = self.prefix.iter().map(|l| l[i]).collect();
                (v.clone(), Element::canonicalize(&bits, self.loop_letter[i]))
            })
            .collect())
    }
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_assignment() {
            Ok(a) => write!(f, "{a} (violation at coordinate {})", self.violation_step + 1),
            Err(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(tag = "verdict", content = "lasso")]
pub enum Verdict {
    Valid,
    Counterexample(Lasso),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn lasso(&self) -> Option<&Lasso> {
        match self {
            Verdict::Valid => None,
            Verdict::Counterexample(l) => Some(l),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("Valid"),
            Verdict::Counterexample(l) => write!(f, "Counterexample: {l}"),
        }
    }
}

struct Step {
    hyp_ok: bool,
    concl_ok: bool,
    next: State,
}

struct Machine {
    transducer: Transducer,
    hyps: usize,
    values: Vec<bool>,
}

impl Machine {
    fn new(q: &QuasiQuery) -> Self {
        let roots: Vec<Formula> = q
            .hypotheses
            .iter()
            .chain(&q.conclusions)
            .flat_map(|e| [e.lhs.clone(), e.rhs.clone()])
            .collect();
        Machine {
            transducer: Transducer::compile(&roots),
            hyps: q.hypotheses.len(),
            values: Vec::new(),
        }
    }

    fn step(&mut self, state: &State, letter: Letter) -> Step {
        let next = self.transducer.step_into(state, letter, &mut self.values);
        let outs: Vec<bool> = self.transducer.root_values(&self.values).collect();
        let equal = |k: usize| outs[2 * k] == outs[2 * k + 1];
        Step {
            hyp_ok: (0..self.hyps).all(equal),
            concl_ok: (self.hyps..outs.len() / 2).all(equal),
            next,
        }
    }

    // The smallest letter whose constant repetition from `state` keeps the
    // hypotheses true forever.
    fn safe_letter(&mut self, state: &State) -> Option<Letter> {
        'letters: for letter in 0..self.transducer.letter_count() {
            let mut cur = state.clone();
            loop {
                let step = self.step(&cur, letter);
                if !step.hyp_ok {
                    continue 'letters;
                }
                if step.next == cur {
                    return Some(letter);
                }
                cur = step.next;
            }
        }
        None
    }
}

/// Decides `q` over all ultimately-constant assignments.
///
/// Returns `Valid` iff no assignment satisfies every hypothesis while
/// violating some conclusion. Counterexamples are deterministic: the
/// violation is reached by a shortest prefix, ties broken by the
/// lexicographically smallest letter.
pub fn decide(q: &QuasiQuery) -> Verdict {
    let mut m = Machine::new(q);
    let letters = m.transducer.letter_count();

    // 1. reachable states under hypothesis-true steps
    let init = m.transducer.initial_state();
    let mut ids: HashMap<State, usize> = HashMap::from([(init.clone(), 0)]);
    let mut states = vec![init];
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None];
    let mut edges: Vec<Vec<(Letter, bool, usize)>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let mut out = Vec::new();
        for letter in 0..letters {
            let step = m.step(&states[id].clone(), letter);
            if !step.hyp_ok {
                continue;
            }
            let succ = *ids.entry(step.next.clone()).or_insert_with(|| {
                states.push(step.next);
                parent.push(Some((id, letter)));
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            out.push((letter, step.concl_ok, succ));
        }
        if edges.len() <= id {
            edges.resize_with(id + 1, Vec::new);
        }
        edges[id] = out;
    }
    edges.resize_with(states.len(), Vec::new);

    // 2. states with an admissible ultimately-constant continuation
    let safe: Vec<Option<Letter>> = states.iter().map(|s| m.safe_letter(s)).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
    for (id, out) in edges.iter().enumerate() {
        for &(_, _, succ) in out {
            preds[succ].push(id);
        }
    }
    let mut good: Vec<bool> = safe.iter().map(Option::is_some).collect();
    let mut work: Vec<usize> = (0..states.len()).filter(|&s| good[s]).collect();
    while let Some(s) = work.pop() {
        for &p in &preds[s] {
            if !good[p] {
                good[p] = true;
                work.push(p);
            }
        }
    }

    // 3. first violating step (in BFS order) whose successor can continue
    let violation = (0..states.len()).find_map(|id| {
        edges[id]
            .iter()
            .find(|&&(_, concl_ok, succ)| !concl_ok && good[succ])
            .map(|&(letter, _, succ)| (id, letter, succ))
    });
    let Some((from, letter, to)) = violation else {
        return Verdict::Valid;
    };

    let mut prefix = Vec::new();
    let mut cur = from;
    while let Some((p, l)) = parent[cur] {
        prefix.push(l);
        cur = p;
    }
    prefix.reverse();
    let violation_step = prefix.len();
    prefix.push(letter);

    // shortest hypothesis-true path from the successor to a safe state
    let mut back: HashMap<usize, (usize, Letter)> = HashMap::new();
    let mut queue = VecDeque::from([to]);
    let mut seen = vec![false; states.len()];
    seen[to] = true;
    let target = loop {
        let s = queue.pop_front().expect("successor has an admissible continuation");
        if safe[s].is_some() {
            break s;
        }
        for &(l, _, succ) in &edges[s] {
            if good[succ] && !seen[succ] {
                seen[succ] = true;
                back.insert(succ, (s, l));
                queue.push_back(succ);
            }
        }
    };
    let mut tail = Vec::new();
    let mut cur = target;
    while let Some(&(p, l)) = back.get(&cur) {
        tail.push(l);
        cur = p;
    }
    prefix.extend(tail.into_iter().rev());

    let t = &m.transducer;
    Verdict::Counterexample(Lasso {
        vars: t.vars().to_vec(),
        prefix: prefix.into_iter().map(|l| t.letter_bits(l)).collect(),
        loop_letter: t.letter_bits(safe[target].expect("target is safe")),
        violation_step,
    })
}

/// Confirms a counterexample by exact evaluation: every hypothesis holds as
/// an element equation, and some conclusion differs at the recorded
/// coordinate.
pub fn replay(lasso: &Lasso, q: &QuasiQuery) -> Result<bool, ReplayError> {
    let a = lasso.to_assignment()?;
    if let Some(v) = q.free_vars().into_iter().find(|v| a.get(v).is_none()) {
        return Err(ReplayError::Malformed(format!("variable `{v}` is missing")));
    }
    let eval = |f: &Formula| evaluate(f, &a).expect("variables checked above");
    let hyps_hold = q
        .hypotheses
        .iter()
        .all(|h| holds_equation(&h.lhs, &h.rhs, &a).expect("variables checked above"));
    let coordinate = lasso.violation_step + 1;
    let violated = q
        .conclusions
        .iter()
        .any(|c| eval(&c.lhs).coordinate(coordinate) != eval(&c.rhs).coordinate(coordinate));
    Ok(hyps_hold && violated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> Equation {
        s.parse().unwrap()
    }

    fn query(hyps: &[&str], concls: &[&str]) -> QuasiQuery {
        QuasiQuery::new(
            hyps.iter().map(|h| eq(h)).collect(),
            concls.iter().map(|c| eq(c)).collect(),
        )
    }

    #[test]
    fn lob_identity_is_valid() {
        assert_eq!(decide(&query(&[], &["D(Dp->p) = Dp"])), Verdict::Valid);
    }

    #[test]
    fn delta_is_not_identity() {
        let q = query(&[], &["Dp = p"]);
        let Verdict::Counterexample(l) = decide(&q) else {
            panic!("expected counterexample")
        };
        assert!(replay(&l, &q).unwrap());
        assert_eq!(l.to_assignment().unwrap().get("p"), Some(&Element::zero()));
        assert_eq!(l.violation_step, 0);
    }

    #[test]
    fn congruence_instance() {
        assert_eq!(decide(&query(&["p = 0"], &["Dp = D0"])), Verdict::Valid);
    }

    #[test]
    fn unsatisfiable_hypotheses_make_everything_valid() {
        assert_eq!(decide(&query(&["p = !p"], &["p = 1"])), Verdict::Valid);
        // Dp = 0 has no solution: Δ always starts with 1
        assert_eq!(decide(&query(&["Dp = 0"], &["p = 1"])), Verdict::Valid);
    }

    #[test]
    fn hypothesis_must_hold_in_the_tail() {
        // p = Δp forces p = 1; a finite-prefix search alone would be fooled
        assert_eq!(decide(&query(&["p = Dp"], &["p = 1"])), Verdict::Valid);
        // ∇p = 1 iff p starts with 1
        let q = query(&["@p = 1"], &["p = 1"]);
        let l = decide(&q);
        assert!(replay(l.lasso().unwrap(), &q).unwrap());
    }

    #[test]
    fn counterexample_needs_a_tail_that_keeps_hypotheses() {
        // q = Δp and p = ¬q: violation found only with tails that satisfy both
        let q = query(&["q = Dp", "p = !Dp"], &["p = 0"]);
        match decide(&q) {
            Verdict::Valid => assert!(brute_force(&q, 5).is_none()),
            Verdict::Counterexample(l) => assert!(replay(&l, &q).unwrap()),
        }
    }

    #[test]
    fn literals_drive_position() {
        assert_eq!(decide(&query(&[], &["DDD0 = !!DDD0"])), Verdict::Valid);
        let q = query(&["p = DD0"], &["Dp = DD0"]);
        let Verdict::Counterexample(l) = decide(&q) else {
            panic!()
        };
        assert!(replay(&l, &q).unwrap());
        assert_eq!(l.violation_step, 2);
    }

    #[test]
    fn corrupted_lasso_fails_replay() {
        let q = query(&["p = !D0"], &["Dp = p"]);
        let Verdict::Counterexample(mut l) = decide(&q) else {
            panic!()
        };
        assert!(replay(&l, &q).unwrap());
        for b in l.loop_letter.iter_mut() {
            *b = !*b;
        }
        assert!(!replay(&l, &q).unwrap());
        l.loop_letter.push(true);
        assert!(replay(&l, &q).is_err());
    }

    #[test]
    fn equation_parsing() {
        assert_eq!(eq("Dp = p").to_string(), "Dp = p");
        assert!("p".parse::<Equation>().is_err());
        assert!("p = q = r".parse::<Equation>().is_err());
        assert!("p <-> q = 1".parse::<Equation>().is_ok());
    }
}
