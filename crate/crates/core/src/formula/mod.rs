//! Formulas over the signature `{0, 1, ¬, &, ∨, ⊃, ↔, Δ, □, ∇}`.

mod dag;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use dag::{Node, NodeId, TermDag};
pub use parse::{is_identifier, parse, ParseError};

use crate::element::Element;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Zero,
    One,
    /// Produced only by [`Formula::constant_fold`].
    Lit(Element),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Delta(Box<Formula>),
    /// `□f = f & Δf`
    Square(Box<Formula>),
    /// `∇f = □¬□¬□f`
    Nabla(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn delta(f: Formula) -> Self {
        Formula::Delta(Box::new(f))
    }

    pub fn square(f: Formula) -> Self {
        Formula::Square(Box::new(f))
    }

    pub fn nabla(f: Formula) -> Self {
        Formula::Nabla(Box::new(f))
    }

    /// `Δ^i 0`.
    pub fn delta_power(i: usize) -> Self {
        (0..i).fold(Formula::Zero, |acc, _| Formula::delta(acc))
    }

    /// `¬Δ^i 0`.
    pub fn neg_delta_power(i: usize) -> Self {
        Formula::not(Formula::delta_power(i))
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Free variables in lexicographic order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(name) => {
                out.insert(name.clone());
            }
            Formula::Zero | Formula::One | Formula::Lit(_) => {}
            Formula::Not(f) | Formula::Delta(f) | Formula::Square(f) | Formula::Nabla(f) => {
                f.collect_vars(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Nesting depth of Δ once derived operators are expanded: `□` counts
    /// one level and `∇` three.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::Lit(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::Delta(f) | Formula::Square(f) => 1 + f.modal_depth(),
            Formula::Nabla(f) => 3 + f.modal_depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.modal_depth().max(b.modal_depth()),
        }
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::Lit(_) => 1,
            Formula::Not(f) | Formula::Delta(f) | Formula::Square(f) | Formula::Nabla(f) => {
                1 + f.size()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Number of distinct Δ-subterms after desugaring and hash-consing.
    pub fn delta_nodes(&self) -> usize {
        let mut dag = TermDag::new();
        dag.insert(self);
        dag.delta_count()
    }

    /// Simultaneous substitution. Variables without a binding are kept.
    pub fn substitute(&self, bindings: &BTreeMap<String, Formula>) -> Formula {
        self.map_vars(&|name| bindings.get(name).cloned())
    }

    fn map_vars(&self, f: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        self.rebuild(&|node| match node {
            Formula::Var(name) => f(name),
            _ => None,
        })
    }

    // Bottom-up rewrite: `leaf` may replace atomic nodes; everything else is
    // rebuilt with rewritten children.
    fn rebuild(&self, leaf: &dyn Fn(&Formula) -> Option<Formula>) -> Formula {
        let un = |g: &Formula| Box::new(g.rebuild(leaf));
        match self {
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::Lit(_) => {
                leaf(self).unwrap_or_else(|| self.clone())
            }
            Formula::Not(g) => Formula::Not(un(g)),
            Formula::Delta(g) => Formula::Delta(un(g)),
            Formula::Square(g) => Formula::Square(un(g)),
            Formula::Nabla(g) => Formula::Nabla(un(g)),
            Formula::And(a, b) => Formula::And(un(a), un(b)),
            Formula::Or(a, b) => Formula::Or(un(a), un(b)),
            Formula::Implies(a, b) => Formula::Implies(un(a), un(b)),
            Formula::Iff(a, b) => Formula::Iff(un(a), un(b)),
        }
    }

    /// Expands `□`, `∇` and `↔` into `{¬, &, ∨, ⊃, Δ}`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::Lit(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.desugar()),
            Formula::Delta(f) => Formula::delta(f.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Formula::Implies(a, b) => Formula::implies(a.desugar(), b.desugar()),
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::and(
                    Formula::implies(a.clone(), b.clone()),
                    Formula::implies(b, a),
                )
            }
            Formula::Square(f) => square_core(f.desugar()),
            Formula::Nabla(f) => {
                let inner = square_core(f.desugar());
                square_core(Formula::not(square_core(Formula::not(inner))))
            }
        }
    }

    /// True if only core connectives `{¬, &, ∨, ⊃, Δ}` and atoms occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::Lit(_) => true,
            Formula::Not(f) | Formula::Delta(f) => f.is_core(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_core() && b.is_core()
            }
            Formula::Iff(..) | Formula::Square(_) | Formula::Nabla(_) => false,
        }
    }

    /// Replaces every maximal closed subterm by the literal of its value.
    pub fn constant_fold(&self) -> Formula {
        fn lit(f: &Formula) -> Option<&Element> {
            match f {
                Formula::Lit(e) => Some(e),
                _ => None,
            }
        }
        let unary = |g: &Formula, op: fn(&Element) -> Element, wrap: fn(Formula) -> Formula| {
            let g = g.constant_fold();
            match lit(&g) {
                Some(e) => Formula::Lit(op(e)),
                None => wrap(g),
            }
        };
        let binary = |a: &Formula,
                      b: &Formula,
                      op: fn(&Element, &Element) -> Element,
                      wrap: fn(Formula, Formula) -> Formula| {
            let (a, b) = (a.constant_fold(), b.constant_fold());
            match (lit(&a), lit(&b)) {
                (Some(x), Some(y)) => Formula::Lit(op(x, y)),
                _ => wrap(a, b),
            }
        };
        match self {
            Formula::Var(_) | Formula::Lit(_) => self.clone(),
            Formula::Zero => Formula::Lit(Element::zero()),
            Formula::One => Formula::Lit(Element::one()),
            Formula::Not(g) => unary(g, Element::not, Formula::not),
            Formula::Delta(g) => unary(g, Element::delta, Formula::delta),
            Formula::Square(g) => unary(g, Element::boxed, Formula::square),
            Formula::Nabla(g) => unary(g, Element::nabla, Formula::nabla),
            Formula::And(a, b) => binary(a, b, Element::meet, Formula::and),
            Formula::Or(a, b) => binary(a, b, Element::join, Formula::or),
            Formula::Implies(a, b) => binary(a, b, Element::implies, Formula::implies),
            Formula::Iff(a, b) => binary(a, b, Element::iff, Formula::iff),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) | Formula::Delta(_) | Formula::Square(_) | Formula::Nabla(_) => 5,
            // Literals print as a synthesized term wrapped in parentheses.
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::Lit(_) => 6,
        }
    }
}

fn square_core(f: Formula) -> Formula {
    Formula::and(f.clone(), Formula::delta(f))
}

impl From<Element> for Formula {
    fn from(e: Element) -> Self {
        Formula::Lit(e)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl std::ops::Not for Formula {
    type Output = Formula;

    fn not(self) -> Formula {
        Formula::not(self)
    }
}

impl std::ops::BitAnd for Formula {
    type Output = Formula;

    fn bitand(self, rhs: Formula) -> Formula {
        Formula::and(self, rhs)
    }
}

impl std::ops::BitOr for Formula {
    type Output = Formula;

    fn bitor(self, rhs: Formula) -> Formula {
        Formula::or(self, rhs)
    }
}

/// Prints with minimal parentheses: unary operators attach without a
/// space, binary operators are surrounded by single spaces.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, g: &Formula, min: u8) -> fmt::Result {
            if g.precedence() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        }
        let mut bin = |a: &Formula, op: &str, b: &Formula, lmin: u8, rmin: u8| {
            child(f, a, lmin)?;
            write!(f, " {op} ")?;
            child(f, b, rmin)
        };
        match self {
            Formula::Var(name) => f.write_str(name),
            Formula::Zero => f.write_str("0"),
            Formula::One => f.write_str("1"),
            Formula::Lit(e) => write!(f, "({})", crate::expressibility::synthesize_term(e)),
            Formula::Not(g) => {
                f.write_str("!")?;
                child(f, g, 5)
            }
            Formula::Delta(g) => {
                f.write_str("D")?;
                child(f, g, 5)
            }
            Formula::Square(g) => {
                f.write_str("#")?;
                child(f, g, 5)
            }
            Formula::Nabla(g) => {
                f.write_str("@")?;
                child(f, g, 5)
            }
            // & | <-> chain to the left, -> to the right.
            Formula::And(a, b) => bin(a, "&", b, 4, 5),
            Formula::Or(a, b) => bin(a, "|", b, 3, 4),
            Formula::Implies(a, b) => bin(a, "->", b, 3, 2),
            Formula::Iff(a, b) => bin(a, "<->", b, 1, 2),
        }
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
