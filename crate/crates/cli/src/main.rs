//! `magari`: command-line front end.
//!
//! Exit codes: 0 success, 1 negative result, 2 usage or parse error,
//! 3 internal inconsistency (decider/oracle disagreement or failed replay).

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use magari::decide::{brute_force, decide, replay, Equation, QuasiQuery, Verdict};
use magari::expressibility::{
    enumerate_closure, pairwise_distinct, synthesize_term, verify_precompleteness_with_oracle,
    ClassId, Signature,
};
use magari::formula::is_identifier;
use magari::{evaluate, evaluate_closed, member_k, Assignment, Element, Formula};

use report::{
    CheckResult, ClosureResult, EvalResult, MemberResult, Report, Results, SynthesizeResult,
    VerifyResult,
};

#[derive(Parser, Debug)]
#[command(name = "magari", version, about = "Exact computation in the free diagonalizable algebra")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula.
    Eval {
        formula: String,
        /// Variable binding, e.g. `p=0(1)`.
        #[arg(long = "assign", value_name = "VAR=ELEMENT")]
        assign: Vec<String>,
    },
    /// Decide a quasi-identity `hyps => concls`.
    Check {
        #[arg(long = "hyp", value_name = "L=R")]
        hyp: Vec<String>,
        #[arg(long = "concl", value_name = "L=R", required = true)]
        concl: Vec<String>,
        /// Also run the brute-force oracle with this prefix bound.
        #[arg(long, env = "MAGARI_ORACLE_BOUND")]
        oracle_bound: Option<usize>,
    },
    /// Test membership of a formula in K_i.
    Member {
        #[arg(long = "class")]
        class: usize,
        formula: String,
    },
    /// Enumerate the superposition closure of a system of formulas.
    Closure {
        /// File with one `name := formula` per line.
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 1000)]
        cap: usize,
    },
    /// Produce a closed term denoting an element.
    Synthesize { element: String },
    /// Check the precompleteness certificate for K_1..K_N.
    VerifyPaper {
        #[arg(long, default_value_t = 5)]
        i_max: usize,
        /// Formulas outside K_i; `next` stands for ¬Δ^(i+1) 0.
        #[arg(long, value_delimiter = ',', default_value = "!p,Dp,next")]
        witnesses: Vec<String>,
        #[arg(long, env = "MAGARI_ORACLE_BOUND", default_value_t = 5)]
        oracle_bound: usize,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    text.parse().map_err(|e| usage(format!("`{text}`: {e}")))
}

fn parse_element(text: &str) -> Result<Element, Failure> {
    text.parse().map_err(usage)
}

fn parse_assignment(items: &[String]) -> Result<Assignment, Failure> {
    let mut a = Assignment::new();
    for item in items {
        let (var, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("binding `{item}` must look like var=element")))?;
        let var = var.trim();
        if !is_identifier(var) {
            return Err(usage(format!("`{var}` is reserved or not a variable name")));
        }
        a.insert(var, parse_element(value)?);
    }
    Ok(a)
}

fn parse_equations(items: &[String]) -> Result<Vec<Equation>, Failure> {
    items
        .iter()
        .map(|s| s.parse().map_err(|e| usage(format!("`{s}`: {e}"))))
        .collect()
}

/// Runs a command; `Ok(true)` is a positive result.
fn run(command: &Command) -> Result<(Results, bool), Failure> {
    match command {
        Command::Eval { formula, assign } => {
            let f = parse_formula(formula)?;
            let a = parse_assignment(assign)?;
            let value = evaluate(&f, &a).map_err(usage)?;
            Ok((Results::Eval(EvalResult { formula: f, assignment: a, value }), true))
        }
        Command::Check {
            hyp,
            concl,
            oracle_bound,
        } => {
            let query = QuasiQuery::new(parse_equations(hyp)?, parse_equations(concl)?);
            let verdict = decide(&query);
            let replayed = verdict
                .lasso()
                .map(|l| replay(l, &query).unwrap_or(false));
            let oracle = oracle_bound.map(|b| brute_force(&query, b));
            if replayed == Some(false) {
                return Err(Failure::Internal(format!("counterexample for {query} does not replay")));
            }
            if let (Verdict::Valid, Some(Some(a))) = (&verdict, &oracle) {
                return Err(Failure::Internal(format!(
                    "decider says Valid but the oracle refutes {query} at {a}"
                )));
            }
            let valid = verdict.is_valid();
            Ok((
                Results::Check(CheckResult {
                    query,
                    verdict,
                    replayed,
                    oracle_bound: *oracle_bound,
                    oracle_counterexample: oracle.flatten(),
                }),
                valid,
            ))
        }
        Command::Member { class, formula } => {
            let k = ClassId::new(*class).map_err(usage)?;
            let f = parse_formula(formula)?;
            let member = member_k(k, &f);
            Ok((
                Results::Member(MemberResult {
                    class: *class,
                    formula: f,
                    member,
                }),
                member,
            ))
        }
        Command::Closure {
            sigma,
            vars,
            depth,
            cap,
        } => {
            let text = std::fs::read_to_string(sigma)
                .map_err(|e| usage(format!("{}: {e}", sigma.display())))?;
            let signature = Signature::parse(&text).map_err(usage)?;
            let closure = enumerate_closure(&signature, *vars, *depth, *cap).map_err(usage)?;
            Ok((
                Results::Closure(ClosureResult {
                    vars: *vars,
                    depth: *depth,
                    cap: *cap,
                    classes: closure.classes,
                    truncated: closure.truncated,
                }),
                true,
            ))
        }
        Command::Synthesize { element } => {
            let e = parse_element(element)?;
            let term = synthesize_term(&e);
            let value = evaluate_closed(&term).map_err(|e| Failure::Internal(e.to_string()))?;
            if value != e {
                return Err(Failure::Internal(format!("{term} denotes {value}, not {e}")));
            }
            Ok((
                Results::Synthesize(SynthesizeResult {
                    element: e,
                    term,
                    round_trip: true,
                }),
                true,
            ))
        }
        Command::VerifyPaper {
            i_max,
            witnesses,
            oracle_bound,
        } => verify_paper(*i_max, witnesses, *oracle_bound),
    }
}

fn verify_paper(
    i_max: usize,
    witnesses: &[String],
    oracle_bound: usize,
) -> Result<(Results, bool), Failure> {
    if i_max == 0 {
        return Err(usage("--i-max must be at least 1"));
    }
    let mut cells = Vec::new();
    for i in 1..=i_max {
        for w in witnesses {
            let f = match w.trim() {
                "next" => Formula::neg_delta_power(i + 1),
                text => parse_formula(text)?,
            };
            cells.push((i, f));
        }
    }
    // cells are independent; results keep (i, witness) order
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = cells
            .iter()
            .map(|(i, f)| s.spawn(move || verify_precompleteness_with_oracle(*i, f, oracle_bound)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread"))
            .collect::<Vec<_>>()
    });
    if let Some(r) = reports.iter().find(|r| !r.counterexamples_replay()) {
        return Err(Failure::Internal(format!(
            "a counterexample for K_{} with {} does not replay",
            r.class, r.input
        )));
    }
    let separations = (i_max >= 2).then(|| pairwise_distinct(i_max).expect("i_max >= 2"));
    let pass = reports.iter().all(|r| r.passed())
        && separations.as_ref().is_none_or(|m| m.all_confirmed());
    Ok((
        Results::VerifyPaper(VerifyResult {
            i_max,
            oracle_bound,
            reports,
            separations,
            pass,
        }),
        pass,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli.command) {
        Ok((results, positive)) => {
            let report = Report::new(echo, results, start.elapsed());
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Internal(msg) => eprintln!("internal consistency violation: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
