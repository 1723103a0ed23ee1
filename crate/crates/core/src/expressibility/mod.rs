//! The classes `K_i` of formulas preserving `x = ¬Δ^i 0`, the constructions
//! that make `¬` and `Δ` parametrically expressible over `K_i ∪ {F}` for any
//! `F ∉ K_i`, and supporting tools (bounded superposition closure, closed
//! terms for elements).

mod closure;
mod report;
mod witness;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use closure::{closure_var, enumerate_closure, Closure, Signature, SignatureEntry, SignatureError};
pub use report::{
    verify_precompleteness, verify_precompleteness_with_oracle, Direction, Outcome,
    PrecompletenessReport,
};
pub use witness::{check_parametric_witness, ParametricWitness};

use crate::element::Element;
use crate::eval::{evaluate, evaluate_closed, Assignment};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("class index must be at least 1")]
    ZeroClass,
    #[error("`{formula}` belongs to K_{class}; a formula outside the class is required")]
    InClass { class: usize, formula: Formula },
    #[error("parameter `{0}` occurs in the target formula")]
    NotFresh(String),
    #[error("{vars} auxiliary variables but {terms} substitution terms")]
    AuxMismatch { vars: usize, terms: usize },
    #[error("at least two classes are needed, got {0}")]
    TooFewClasses(usize),
    #[error("closure cap must be positive")]
    ZeroCap,
}

/// Index `i ≥ 1` of the class `K_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct ClassId(usize);

impl ClassId {
    pub fn new(i: usize) -> Result<Self, ExprError> {
        if i == 0 {
            Err(ExprError::ZeroClass)
        } else {
            Ok(ClassId(i))
        }
    }

    pub fn index(self) -> usize {
        self.0
    }

    /// The preserved element `a_i = ¬Δ^i 0`.
    pub fn preserved(self) -> Element {
        Element::neg_delta_power(self.0)
    }

    /// The closed term `¬Δ^i 0`.
    pub fn preserved_term(self) -> Formula {
        Formula::neg_delta_power(self.0)
    }

    pub fn contains(self, f: &Formula) -> bool {
        member_k(self, f)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K_{}", self.0)
    }
}

/// `f ∈ K_i`: binding every variable to `a_i` yields `a_i`. For closed
/// formulas this says the value is `a_i`.
pub fn member_k(class: ClassId, f: &Formula) -> bool {
    let a = class.preserved();
    let assignment: Assignment = f.free_vars().into_iter().map(|v| (v, a.clone())).collect();
    evaluate(f, &assignment).expect("every variable is bound") == a
}

fn require_outside(class: ClassId, f: &Formula) -> Result<(), ExprError> {
    if member_k(class, f) {
        Err(ExprError::InClass {
            class: class.index(),
            formula: f.clone(),
        })
    } else {
        Ok(())
    }
}

/// The closed term `F(¬Δ^i 0, ..., ¬Δ^i 0)`.
pub fn constant_term(class: ClassId, f: &Formula) -> Formula {
    let bindings: BTreeMap<String, Formula> = f
        .free_vars()
        .into_iter()
        .map(|v| (v, class.preserved_term()))
        .collect();
    f.substitute(&bindings)
}

/// The value `c = F(a_i, ..., a_i)`, which differs from `a_i` exactly when
/// `F ∉ K_i`.
pub fn build_c(class: ClassId, f: &Formula) -> Result<Element, ExprError> {
    require_outside(class, f)?;
    let c = evaluate_closed(&constant_term(class, f)).expect("closed term");
    assert_ne!(c, class.preserved(), "F outside K_i must move a_i");
    Ok(c)
}

fn p() -> Formula {
    Formula::var("p")
}

fn q() -> Formula {
    Formula::var("q")
}

/// `(∇¬(p↔q) & ((¬p↔q) ↔ C)) ∨ (∇(p↔q) & A)` with `A = ¬Δ^i 0` and
/// `C = F(A, ..., A)`. Equals `C` exactly when `q = ¬p`.
pub fn build_f_neg(class: ClassId, f: &Formula) -> Result<Formula, ExprError> {
    require_outside(class, f)?;
    let c = constant_term(class, f);
    let a = class.preserved_term();
    let same = Formula::iff(p(), q());
    Ok(Formula::or(
        Formula::and(
            Formula::nabla(Formula::not(same.clone())),
            Formula::iff(Formula::iff(Formula::not(p()), q()), c),
        ),
        Formula::and(Formula::nabla(same), a),
    ))
}

/// `(∇q & ((Δp↔q) ↔ C)) ∨ (¬∇q & A)`. Equals `C` exactly when `q = Δp`.
pub fn build_f_delta(class: ClassId, f: &Formula) -> Result<Formula, ExprError> {
    require_outside(class, f)?;
    let c = constant_term(class, f);
    let a = class.preserved_term();
    Ok(Formula::or(
        Formula::and(
            Formula::nabla(q()),
            Formula::iff(Formula::iff(Formula::delta(p()), q()), c),
        ),
        Formula::and(Formula::not(Formula::nabla(q())), a),
    ))
}

/// Witness that `K_j` and `K_i` differ: `¬Δ^j 0` lies in `K_j` but not `K_i`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Separation {
    pub outside: usize,
    pub inside: usize,
    pub witness: Formula,
    pub in_inside_class: bool,
    pub in_outside_class: bool,
}

impl Separation {
    pub fn confirmed(&self) -> bool {
        self.in_inside_class && !self.in_outside_class
    }
}

/// Entry `(i, j)` (1-based, `i ≠ j`) holds the separation of `K_j` from
/// `K_i`; diagonal entries are empty.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SeparationMatrix {
    pub size: usize,
    pub cells: Vec<Vec<Option<Separation>>>,
}

impl SeparationMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<&Separation> {
        self.cells.get(i - 1)?.get(j - 1)?.as_ref()
    }

    pub fn separations(&self) -> impl Iterator<Item = &Separation> {
        self.cells.iter().flatten().flatten()
    }

    pub fn all_confirmed(&self) -> bool {
        self.separations().all(Separation::confirmed)
    }
}

pub fn pairwise_distinct(i_max: usize) -> Result<SeparationMatrix, ExprError> {
    if i_max < 2 {
        return Err(ExprError::TooFewClasses(i_max));
    }
    let cells = (1..=i_max)
        .map(|i| {
            (1..=i_max)
                .map(|j| {
                    (i != j).then(|| {
                        let witness = Formula::neg_delta_power(j);
                        Separation {
                            outside: i,
                            inside: j,
                            in_inside_class: member_k(ClassId(j), &witness),
                            in_outside_class: member_k(ClassId(i), &witness),
                            witness,
                        }
                    })
                })
                .collect()
        })
        .collect();
    Ok(SeparationMatrix {
        size: i_max,
        cells,
    })
}

/// A closed term over `{0, Δ, ¬, &, ∨}` denoting `e`, built from the
/// position indicators `Δ^k 0 & ¬Δ^{k-1} 0`.
pub fn synthesize_term(e: &Element) -> Formula {
    let indicator = |k: usize| {
        Formula::and(Formula::delta_power(k), Formula::neg_delta_power(k - 1))
    };
    // positions whose bit differs from the tail
    let marked: Vec<usize> = (1..=e.prefix_len())
        .filter(|&k| e.coordinate(k) != e.tail())
        .collect();
    let body = marked
        .into_iter()
        .map(indicator)
        .reduce(Formula::or)
        .unwrap_or(Formula::Zero);
    if e.tail() {
        Formula::not(body)
    } else {
        body
    }
}
