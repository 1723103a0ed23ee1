use std::fmt;
use std::time::Duration;

use magari::decide::{QuasiQuery, Verdict};
use magari::expressibility::{PrecompletenessReport, SeparationMatrix};
use magari::{Assignment, Element, Formula};
use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub version: &'static str,
    pub duration_ms: u128,
    pub results: Results,
}

impl Report {
    pub fn new(command: Vec<String>, results: Results, elapsed: Duration) -> Self {
        Report {
            command,
            version: env!("CARGO_PKG_VERSION"),
            duration_ms: elapsed.as_millis(),
            results,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Results {
    Eval(EvalResult),
    Check(CheckResult),
    Member(MemberResult),
    Closure(ClosureResult),
    Synthesize(SynthesizeResult),
    VerifyPaper(VerifyResult),
}

#[derive(Serialize)]
pub struct EvalResult {
    pub formula: Formula,
    pub assignment: Assignment,
    pub value: Element,
}

#[derive(Serialize)]
pub struct CheckResult {
    pub query: QuasiQuery,
    pub verdict: Verdict,
    pub replayed: Option<bool>,
    pub oracle_bound: Option<usize>,
    pub oracle_counterexample: Option<Assignment>,
}

#[derive(Serialize)]
pub struct MemberResult {
    pub class: usize,
    pub formula: Formula,
    pub member: bool,
}

#[derive(Serialize)]
pub struct ClosureResult {
    pub vars: usize,
    pub depth: usize,
    pub cap: usize,
    pub classes: Vec<Formula>,
    pub truncated: bool,
}

#[derive(Serialize)]
pub struct SynthesizeResult {
    pub element: Element,
    pub term: Formula,
    pub round_trip: bool,
}

#[derive(Serialize)]
pub struct VerifyResult {
    pub i_max: usize,
    pub oracle_bound: usize,
    pub reports: Vec<PrecompletenessReport>,
    pub separations: Option<SeparationMatrix>,
    pub pass: bool,
}

impl fmt::Display for Results {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Results::Eval(r) => writeln!(f, "{}", r.value),
            Results::Check(r) => {
                writeln!(f, "query: {}", r.query)?;
                match &r.verdict {
                    Verdict::Valid => writeln!(f, "verdict: Valid")?,
                    Verdict::Counterexample(l) => {
                        writeln!(f, "verdict: Counterexample")?;
                        writeln!(f, "lasso: {l}")?;
                    }
                }
                if let Some(ok) = r.replayed {
                    writeln!(f, "replay: {}", if ok { "confirmed" } else { "failed" })?;
                }
                if let Some(b) = r.oracle_bound {
                    match &r.oracle_counterexample {
                        None => writeln!(f, "oracle (bound {b}): no counterexample")?,
                        Some(a) => writeln!(f, "oracle (bound {b}): {a}")?,
                    }
                }
                Ok(())
            }
            Results::Member(r) => writeln!(f, "K_{} contains {}: {}", r.class, r.formula, r.member),
            Results::Closure(r) => {
                for c in &r.classes {
                    writeln!(f, "{c}")?;
                }
                writeln!(
                    f,
                    "{} classes (vars {}, depth {}, cap {}){}",
                    r.classes.len(),
                    r.vars,
                    r.depth,
                    r.cap,
                    if r.truncated { ", truncated at cap" } else { "" }
                )
            }
            Results::Synthesize(r) => {
                writeln!(f, "{}", r.term)?;
                writeln!(f, "round-trip: {} = {}", r.term, r.element)
            }
            Results::VerifyPaper(r) => {
                for report in &r.reports {
                    write!(f, "{report}")?;
                }
                if let Some(m) = &r.separations {
                    let confirmed = m.separations().filter(|s| s.confirmed()).count();
                    writeln!(
                        f,
                        "pairwise distinct: {confirmed} of {} separations confirmed",
                        m.separations().count()
                    )?;
                }
                writeln!(
                    f,
                    "aggregate: {} (displayed relations verified; completeness criterion not re-proved)",
                    if r.pass { "PASS" } else { "FAIL" }
                )
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.results)?;
        writeln!(
            f,
            "# magari {} {} ({} ms)",
            self.version,
            self.command.join(" "),
            self.duration_ms
        )
    }
}
