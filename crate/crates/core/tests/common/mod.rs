#![allow(dead_code)]

use std::collections::BTreeMap;

use magari::{Assignment, Element, Equation, Formula, QuasiQuery};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_element(rng: &mut TestRng, max_prefix: usize) -> Element {
    let len = rng.gen_range(0..=max_prefix);
    let prefix: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
    Element::canonicalize(&prefix, rng.gen())
}

pub fn random_assignment(rng: &mut TestRng, vars: &[&str], max_prefix: usize) -> Assignment {
    vars.iter()
        .map(|v| (v.to_string(), random_element(rng, max_prefix)))
        .collect()
}

/// Random formula of roughly `budget` nodes over `vars`.
pub fn random_formula(rng: &mut TestRng, vars: &[&str], budget: usize) -> Formula {
    if budget <= 1 || rng.gen_bool(0.15) {
        return match rng.gen_range(0..10) {
            0 => Formula::Zero,
            1 => Formula::One,
            _ if vars.is_empty() => Formula::delta_power(rng.gen_range(0..3)),
            _ => Formula::var(*vars.choose(rng).unwrap()),
        };
    }
    let sub = budget - 1;
    match rng.gen_range(0..11) {
        0 | 1 => Formula::not(random_formula(rng, vars, sub)),
        2 | 3 => Formula::delta(random_formula(rng, vars, sub)),
        4 => Formula::square(random_formula(rng, vars, sub)),
        5 => Formula::nabla(random_formula(rng, vars, sub)),
        op => {
            let left = rng.gen_range(1..=sub.max(1));
            let a = random_formula(rng, vars, left);
            let b = random_formula(rng, vars, sub.saturating_sub(left).max(1));
            match op {
                6 | 7 => Formula::and(a, b),
                8 => Formula::or(a, b),
                9 => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
    }
}

/// Random formula with modal depth at most `max_depth`.
pub fn bounded_formula(rng: &mut TestRng, vars: &[&str], budget: usize, max_depth: usize) -> Formula {
    loop {
        let f = random_formula(rng, vars, budget);
        if f.modal_depth() <= max_depth {
            return f;
        }
    }
}

const VARS: [&str; 3] = ["p", "q", "r"];

// Valid identities of the algebra, instantiated with random formulas.
const TEMPLATES: [(&str, &str); 8] = [
    ("D(Dx -> x)", "Dx"),
    ("D(x -> y) -> (Dx -> Dy)", "1"),
    ("Dx -> DDx", "1"),
    ("#x", "x & Dx"),
    ("@x", "#!#!#x"),
    ("D1", "1"),
    ("D(x & y)", "Dx & Dy"),
    ("!!x | (y & !y)", "x"),
];

fn instantiate(template: &str, x: &Formula, y: &Formula) -> Formula {
    let mut b = BTreeMap::new();
    b.insert("x".to_string(), x.clone());
    b.insert("y".to_string(), y.clone());
    template.parse::<Formula>().unwrap().substitute(&b)
}

/// Random quasi-identity over at most three variables with modal depth at
/// most four on every side. Mixes plain random equations with identities
/// and quasi-identities that hold by construction.
pub fn random_query(rng: &mut TestRng) -> QuasiQuery {
    let nvars = rng.gen_range(1..=3);
    let vars = &VARS[..nvars];
    let depth = 4;
    let small = |rng: &mut TestRng, d: usize| {
        let budget = rng.gen_range(1..=5);
        bounded_formula(rng, vars, budget, d)
    };
    loop {
        let q = match rng.gen_range(0..10) {
            0..=3 => QuasiQuery::identity(small(rng, depth), small(rng, depth)),
            4 | 5 => {
                let (tl, tr) = *TEMPLATES.choose(rng).unwrap();
                let (x, y) = (small(rng, 1), small(rng, 1));
                QuasiQuery::identity(instantiate(tl, &x, &y), instantiate(tr, &x, &y))
            }
            6 | 7 => {
                // congruence: x = y implies f[x] = f[y]
                let x = small(rng, 1);
                let y = small(rng, 1);
                let ctx = small(rng, 2);
                let v = vars[0];
                let mut bx = BTreeMap::new();
                bx.insert(v.to_string(), x.clone());
                let mut by = BTreeMap::new();
                by.insert(v.to_string(), y.clone());
                QuasiQuery::new(
                    vec![Equation::new(x, y)],
                    vec![Equation::new(ctx.substitute(&bx), ctx.substitute(&by))],
                )
            }
            _ => {
                let hyps = (0..rng.gen_range(1..=2))
                    .map(|_| Equation::new(Formula::var(*vars.choose(rng).unwrap()), small(rng, depth)))
                    .collect();
                QuasiQuery::new(hyps, vec![Equation::new(small(rng, depth), small(rng, depth))])
            }
        };
        let ok = q
            .hypotheses
            .iter()
            .chain(&q.conclusions)
            .all(|e| e.lhs.modal_depth() <= depth && e.rhs.modal_depth() <= depth);
        if ok {
            return q;
        }
    }
}
