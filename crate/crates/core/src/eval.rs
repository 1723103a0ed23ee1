//! Exact evaluation of formulas on canonical elements.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::element::Element;
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound")]
    Unbound(String),
}

/// Values for the free variables of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct Assignment(BTreeMap<String, Element>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, var: impl Into<String>, value: Element) -> Option<Element> {
        self.0.insert(var.into(), value)
    }

    pub fn get(&self, var: &str) -> Option<&Element> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Element)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, Element)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, Element)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

pub fn evaluate(f: &Formula, a: &Assignment) -> Result<Element, EvalError> {
    Ok(match f {
        Formula::Var(name) => a
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(name.clone()))?,
        Formula::Zero => Element::zero(),
        Formula::One => Element::one(),
        Formula::Lit(e) => e.clone(),
        Formula::Not(g) => evaluate(g, a)?.not(),
        Formula::Delta(g) => evaluate(g, a)?.delta(),
        Formula::Square(g) => evaluate(g, a)?.boxed(),
        Formula::Nabla(g) => evaluate(g, a)?.nabla(),
        Formula::And(x, y) => evaluate(x, a)?.meet(&evaluate(y, a)?),
        Formula::Or(x, y) => evaluate(x, a)?.join(&evaluate(y, a)?),
        Formula::Implies(x, y) => evaluate(x, a)?.implies(&evaluate(y, a)?),
        Formula::Iff(x, y) => evaluate(x, a)?.iff(&evaluate(y, a)?),
    })
}

pub fn evaluate_closed(f: &Formula) -> Result<Element, EvalError> {
    evaluate(f, &Assignment::new())
}

/// True iff both sides evaluate to the same element under `a`.
pub fn holds_equation(lhs: &Formula, rhs: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    Ok(evaluate(lhs, a)? == evaluate(rhs, a)?)
}
