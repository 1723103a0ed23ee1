//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use magari::decide::{brute_force, decide, replay, Verdict};
use magari::expressibility::{
    build_c, build_f_delta, check_parametric_witness, enumerate_closure, member_k,
    pairwise_distinct, synthesize_term, verify_precompleteness_with_oracle, ClassId,
    ParametricWitness, Signature,
};
use magari::{evaluate_closed, Element, Formula};

use common::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

fn algebra_laws() -> Outcome {
    let start = Instant::now();
    let one = Element::one();
    let unary = |a: &Element| {
        a.delta().leq(&a.delta().delta()) && a.delta().implies(a).delta() == a.delta()
    };
    let binary = |a: &Element, b: &Element| a.implies(b).delta().leq(&a.delta().implies(&b.delta()));
    let all: Vec<Element> = Element::enumerate(6).collect();
    let mut failures = 0;
    for a in &all {
        failures += !unary(a) as usize;
        for b in &all {
            failures += !binary(a, b) as usize;
        }
    }
    let mut rng = rng(1);
    for _ in 0..1000 {
        let a = random_element(&mut rng, 40);
        let b = random_element(&mut rng, 40);
        failures += !unary(&a) as usize + !binary(&a, &b) as usize;
    }
    let unit = one.delta() == one;
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && unit && within(elapsed, 5),
        format!(
            "{} exhaustive elements, {} pairs, 1000 random; {failures} failures; Δ1 = 1: {unit}; {elapsed:.2?}",
            all.len(),
            all.len() * all.len()
        ),
    )
}

fn delta_oracle() -> Outcome {
    let mut rng = rng(2);
    let mut mismatches = 0;
    for _ in 0..500 {
        let a = random_element(&mut rng, 40);
        let n = rand::Rng::gen_range(&mut rng, 1..=32);
        if a.delta().project(n) != a.project(n).delta_reference() {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("500 samples, {mismatches} mismatches"))
}

fn decider_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(3);
    let queries: Vec<_> = (0..500).map(|_| random_query(&mut rng)).collect();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = queries.len().div_ceil(threads);
    // (valid, counterexamples, disagreements, replay failures)
    let totals = std::thread::scope(|s| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|qs| {
                s.spawn(move || {
                    let mut t = (0, 0, 0, 0);
                    for q in qs {
                        let verdict = decide(q);
                        let oracle = brute_force(q, 5);
                        match &verdict {
                            Verdict::Valid => {
                                t.0 += 1;
                                if oracle.is_some() {
                                    t.2 += 1;
                                    eprintln!("disagreement on {q}: oracle {:?}", oracle);
                                }
                            }
                            Verdict::Counterexample(l) => {
                                t.1 += 1;
                                if !replay(l, q).unwrap_or(false) {
                                    t.3 += 1;
                                    eprintln!("replay failed on {q}: {l}");
                                }
                            }
                        }
                    }
                    t
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap())
            .fold((0, 0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3))
    });
    let elapsed = start.elapsed();
    outcome(
        totals.2 == 0 && totals.3 == 0 && within(elapsed, 60),
        format!(
            "500 queries: {} valid, {} counterexamples, {} disagreements, {} replay failures; {elapsed:.2?}",
            totals.0, totals.1, totals.2, totals.3
        ),
    )
}

fn class_facts() -> Outcome {
    let f = |s: &str| s.parse::<Formula>().unwrap();
    let mut bad = Vec::new();
    for i in 1..=5 {
        let k = ClassId::new(i).unwrap();
        let checks = [
            ("¬Δ^i 0 ∈ K_i", member_k(k, &Formula::neg_delta_power(i))),
            ("p&q ∈ K_i", member_k(k, &f("p & q"))),
            ("p|q ∈ K_i", member_k(k, &f("p | q"))),
            ("¬p ∉ K_i", !member_k(k, &f("!p"))),
            ("Δp ∉ K_i", !member_k(k, &f("Dp"))),
        ];
        bad.extend(checks.iter().filter(|c| !c.1).map(|c| format!("i={i}: {}", c.0)));
    }
    let m = pairwise_distinct(5).unwrap();
    let count = m.separations().count();
    outcome(
        bad.is_empty() && count == 20 && m.all_confirmed(),
        format!("memberships for i = 1..5 ({} failed), {count} separations confirmed: {}", bad.len(), m.all_confirmed()),
    )
}

fn paper_example() -> Outcome {
    let start = Instant::now();
    let mut cells = Vec::new();
    for i in 1..=5 {
        for fi in ["!p".parse().unwrap(), "Dp".parse().unwrap(), Formula::neg_delta_power(i + 1)] {
            cells.push((i, fi));
        }
    }
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = cells
            .iter()
            .map(|(i, fi)| s.spawn(move || verify_precompleteness_with_oracle(*i, fi, 6)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect::<Vec<_>>()
    });
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("(K_{}, {})", r.class, r.input))
        .collect();
    for r in reports.iter().filter(|r| !r.passed()) {
        eprint!("{r}");
    }
    let elapsed = start.elapsed();
    outcome(
        failed.is_empty() && within(elapsed, 120),
        format!(
            "{} cells, 4 directions each, oracle bound 6; failed: [{}]; {elapsed:.2?}",
            reports.len(),
            failed.join(", ")
        ),
    )
}

fn negative_control() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for i in 1..=5 {
        let k = ClassId::new(i).unwrap();
        let fi: Formula = "!p".parse().unwrap();
        let c = build_c(k, &fi).unwrap();
        // F_Δ with the constant c replaced by a_i in both places
        let fd = build_f_delta(k, &fi).unwrap();
        let a_term = k.preserved_term();
        let c_term = magari::expressibility::constant_term(k, &fi);
        let corrupted = replace(&fd, &c_term, &a_term);
        let w = ParametricWitness {
            target: "Dp".parse().unwrap(),
            output: "q".into(),
            aux: vec![],
            pairs: vec![(corrupted, a_term.clone())],
            substitutions: vec![],
        };
        let (_, backward) = check_parametric_witness(&w).unwrap();
        let replayed = backward
            .lasso()
            .map(|l| replay(l, &w.backward_query().unwrap()).unwrap_or(false));
        ok &= replayed == Some(true) && c != k.preserved();
        notes.push(format!("i={i}: {}", match replayed {
            Some(true) => "counterexample replayed",
            Some(false) => "REPLAY FAILED",
            None => "NO COUNTEREXAMPLE",
        }));
    }
    outcome(ok, notes.join(", "))
}

fn replace(f: &Formula, from: &Formula, to: &Formula) -> Formula {
    if f == from {
        return to.clone();
    }
    let r = |g: &Formula| replace(g, from, to);
    match f {
        Formula::Not(g) => Formula::not(r(g)),
        Formula::Delta(g) => Formula::delta(r(g)),
        Formula::Square(g) => Formula::square(r(g)),
        Formula::Nabla(g) => Formula::nabla(r(g)),
        Formula::And(a, b) => Formula::and(r(a), r(b)),
        Formula::Or(a, b) => Formula::or(r(a), r(b)),
        Formula::Implies(a, b) => Formula::implies(r(a), r(b)),
        Formula::Iff(a, b) => Formula::iff(r(a), r(b)),
        _ => f.clone(),
    }
}

fn generated_subalgebra() -> Outcome {
    let mut rng = rng(7);
    let mut mismatches = 0;
    for _ in 0..500 {
        let e = random_element(&mut rng, 8);
        let t = synthesize_term(&e);
        if !t.is_closed() || evaluate_closed(&t).unwrap() != e {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("500 elements, {mismatches} mismatches"))
}

fn closure_sanity() -> Outcome {
    let sigma = Signature::parse("delta := Dp\nzero := 0").unwrap();
    let closure = enumerate_closure(&sigma, 0, 6, 1000).unwrap();
    let expected: Vec<Formula> = (0..=6).map(Formula::delta_power).collect();
    let values: std::collections::HashSet<Element> = closure
        .classes
        .iter()
        .map(|f| evaluate_closed(f).unwrap())
        .collect();
    outcome(
        closure.classes == expected && values.len() == 7 && !closure.truncated,
        format!(
            "classes: [{}]",
            closure.classes.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 algebra laws", algebra_laws),
        ("2 delta oracle", delta_oracle),
        ("3 decider vs brute force", decider_vs_oracle),
        ("4 class facts", class_facts),
        ("5 example reproduction", paper_example),
        ("6 negative control", negative_control),
        ("7 generated subalgebra", generated_subalgebra),
        ("8 closure sanity", closure_sanity),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let o = run();
        failures += !o.passed as usize;
        println!(
            "criterion {name}: {} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
