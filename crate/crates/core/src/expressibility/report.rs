use std::fmt;

use crate::decide::{brute_force, replay, QuasiQuery, Verdict};
use crate::element::Element;
use crate::eval::Assignment;
use crate::formula::Formula;

use super::{
    build_c, build_f_delta, build_f_neg, constant_term, member_k, ClassId, ParametricWitness,
};

/// One implication of the two bi-implications `(¬p = q) ⟺ (F_¬ = c)` and
/// `(Δp = q) ⟺ (F_Δ = c)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Direction {
    pub name: &'static str,
    pub query: QuasiQuery,
    pub verdict: Verdict,
    /// Replay outcome for a counterexample verdict.
    pub replayed: Option<bool>,
    /// Violation found by the brute-force oracle, when it ran.
    pub oracle_counterexample: Option<Assignment>,
}

impl Direction {
    pub fn passed(&self) -> bool {
        self.verdict.is_valid() && self.oracle_counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", content = "reason")]
pub enum Outcome {
    Pass,
    Fail,
    Rejected(String),
}

/// Outcome of checking that `¬` and `Δ` are parametrically expressible over
/// `K_i ∪ {F}`. A `Pass` certifies the displayed relations and memberships;
/// the completeness criterion that turns them into precompleteness is not
/// re-proved here.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PrecompletenessReport {
    pub class: usize,
    pub input: Formula,
    pub preserved: Option<Element>,
    pub outside_class: bool,
    pub constant: Option<Element>,
    pub constant_differs: bool,
    pub f_neg: Option<Formula>,
    pub f_delta: Option<Formula>,
    pub f_neg_in_class: bool,
    pub f_delta_in_class: bool,
    pub oracle_bound: Option<usize>,
    pub directions: Vec<Direction>,
    pub outcome: Outcome,
}

impl PrecompletenessReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// Every counterexample in the report replays to a genuine violation.
    pub fn counterexamples_replay(&self) -> bool {
        self.directions.iter().all(|d| d.replayed != Some(false))
    }

    fn rejected(class: usize, input: &Formula, reason: String) -> Self {
        PrecompletenessReport {
            class,
            input: input.clone(),
            preserved: None,
            outside_class: false,
            constant: None,
            constant_differs: false,
            f_neg: None,
            f_delta: None,
            f_neg_in_class: false,
            f_delta_in_class: false,
            oracle_bound: None,
            directions: Vec::new(),
            outcome: Outcome::Rejected(reason),
        }
    }
}

pub fn verify_precompleteness(i: usize, f: &Formula) -> PrecompletenessReport {
    verify(i, f, None)
}

/// As [`verify_precompleteness`], additionally running the brute-force
/// oracle on every implication; an oracle refutation fails the report.
pub fn verify_precompleteness_with_oracle(
    i: usize,
    f: &Formula,
    bound: usize,
) -> PrecompletenessReport {
    verify(i, f, Some(bound))
}

fn verify(i: usize, f: &Formula, oracle_bound: Option<usize>) -> PrecompletenessReport {
    let class = match ClassId::new(i) {
        Ok(c) => c,
        Err(e) => return PrecompletenessReport::rejected(i, f, e.to_string()),
    };
    let c = match build_c(class, f) {
        Ok(c) => c,
        Err(e) => return PrecompletenessReport::rejected(i, f, e.to_string()),
    };
    let f_neg = build_f_neg(class, f).expect("outside class");
    let f_delta = build_f_delta(class, f).expect("outside class");
    let c_term = constant_term(class, f);

    let witness = |target: Formula, builder: &Formula| ParametricWitness {
        target,
        output: "q".into(),
        aux: vec![],
        pairs: vec![(builder.clone(), c_term.clone())],
        substitutions: vec![],
    };
    let neg = witness(Formula::not(Formula::var("p")), &f_neg);
    let delta = witness(Formula::delta(Formula::var("p")), &f_delta);
    let queries = [
        ("neg forward", neg.forward_query()),
        ("neg backward", neg.backward_query()),
        ("delta forward", delta.forward_query()),
        ("delta backward", delta.backward_query()),
    ];
    let directions: Vec<Direction> = queries
        .into_iter()
        .map(|(name, query)| {
            let query = query.expect("p and q are fresh for the targets");
            let verdict = crate::decide::decide(&query);
            let replayed = verdict
                .lasso()
                .map(|l| replay(l, &query).unwrap_or(false));
            let oracle_counterexample = oracle_bound.and_then(|b| brute_force(&query, b));
            Direction {
                name,
                query,
                verdict,
                replayed,
                oracle_counterexample,
            }
        })
        .collect();

    let preserved = class.preserved();
    let f_neg_in_class = member_k(class, &f_neg);
    let f_delta_in_class = member_k(class, &f_delta);
    let constant_differs = c != preserved;
    let pass = constant_differs
        && f_neg_in_class
        && f_delta_in_class
        && directions.iter().all(Direction::passed);
    PrecompletenessReport {
        class: i,
        input: f.clone(),
        preserved: Some(preserved),
        outside_class: true,
        constant: Some(c),
        constant_differs,
        f_neg: Some(f_neg),
        f_delta: Some(f_delta),
        f_neg_in_class,
        f_delta_in_class,
        oracle_bound,
        directions,
        outcome: if pass { Outcome::Pass } else { Outcome::Fail },
    }
}

impl fmt::Display for PrecompletenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match &self.outcome {
            Outcome::Pass => "PASS".to_string(),
            Outcome::Fail => "FAIL".to_string(),
            Outcome::Rejected(r) => format!("REJECTED ({r})"),
        };
        writeln!(f, "K_{} with F = {}: {status}", self.class, self.input)?;
        if let (Some(a), Some(c)) = (&self.preserved, &self.constant) {
            writeln!(f, "  a = {a}, c = F(a, ..., a) = {c}")?;
            writeln!(
                f,
                "  F outside class: {}, c != a: {}, F_neg in class: {}, F_delta in class: {}",
                self.outside_class, self.constant_differs, self.f_neg_in_class, self.f_delta_in_class
            )?;
        }
        for d in &self.directions {
            write!(f, "  {}: {}", d.name, d.verdict)?;
            if let Some(r) = d.replayed {
                write!(f, " [replay {}]", if r { "confirmed" } else { "FAILED" })?;
            }
            if let Some(b) = self.oracle_bound {
                match &d.oracle_counterexample {
                    None => write!(f, " [oracle bound {b}: none]")?,
                    Some(a) => write!(f, " [oracle bound {b}: {a}]")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
