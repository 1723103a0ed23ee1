use std::collections::BTreeSet;

use smallvec::SmallVec;

use crate::element::Element;
use crate::eval::{Assignment, EvalError};
use crate::formula::{Formula, Node, NodeId, TermDag};

/// One input symbol: the bit of every variable at the current coordinate.
///
/// Variable `i` (in the transducer's sorted variable order) is stored at bit
/// `n - 1 - i`, so numeric order on letters is lexicographic order on the
/// variable tuple.
pub type Letter = u64;

#[derive(Clone, Debug)]
enum Gate {
    Var(usize),
    Lit(Element),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Implies(NodeId, NodeId),
    Delta { child: NodeId, bit: usize },
}

/// Run-time state: the saturating coordinate counter that drives literal
/// streams, and one memory bit per Δ-node (initially 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    position: usize,
    memory: SmallVec<[u64; 1]>,
}

impl State {
    /// Number of coordinates consumed so far, capped at the literal horizon.
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn memory_bit(&self, bit: usize) -> bool {
        (self.memory[bit / 64] >> (bit % 64)) & 1 == 1
    }

    /// Number of Δ-memory bits still set.
    pub fn memory_ones(&self) -> u32 {
        self.memory.iter().map(|w| w.count_ones()).sum()
    }
}

/// Deterministic Mealy machine computing, coordinate by coordinate, the
/// values of a set of root formulas.
///
/// A Δ-node emits its memory bit and then updates it to
/// `memory & child`, which realizes `Δa(n) = a(1) & ... & a(n-1)`.
/// Closed subterms are folded to literals whose bits are read off by
/// position, so only open Δ-subterms occupy state.
#[derive(Clone, Debug)]
pub struct Transducer {
    vars: Vec<String>,
    gates: Vec<Gate>,
    roots: Vec<NodeId>,
    width: usize,
    horizon: usize,
}

impl Transducer {
    /// Desugars, constant-folds and jointly hash-conses `roots`.
    pub fn compile(roots: &[Formula]) -> Self {
        let mut dag = TermDag::new();
        let root_ids: Vec<NodeId> = roots
            .iter()
            .map(|f| dag.insert(&f.desugar().constant_fold()))
            .collect();
        let vars: Vec<String> = roots
            .iter()
            .flat_map(|f| f.free_vars())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut width = 0;
        let mut horizon = 0;
        let gates = dag
            .nodes()
            .iter()
            .map(|node| match node {
                Node::Var(name) => Gate::Var(vars.binary_search(name).expect("free variable")),
                Node::Lit(e) => {
                    horizon = horizon.max(e.prefix_len());
                    Gate::Lit(e.clone())
                }
                Node::Not(a) => Gate::Not(*a),
                Node::And(a, b) => Gate::And(*a, *b),
                Node::Or(a, b) => Gate::Or(*a, *b),
                Node::Implies(a, b) => Gate::Implies(*a, *b),
                Node::Delta(a) => {
                    width += 1;
                    Gate::Delta {
                        child: *a,
                        bit: width - 1,
                    }
                }
            })
            .collect();
        Transducer {
            vars,
            gates,
            roots: root_ids,
            width,
            horizon,
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of Δ-memory bits.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Longest literal prefix; the position counter saturates here.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn letter_count(&self) -> u64 {
        1u64 << self.vars.len()
    }

    pub fn initial_state(&self) -> State {
        let words = self.width.div_ceil(64);
        let mut memory: SmallVec<[u64; 1]> = SmallVec::from_elem(u64::MAX, words);
        if !self.width.is_multiple_of(64) {
            memory[words - 1] = (1u64 << (self.width % 64)) - 1;
        }
        State {
            position: 0,
            memory,
        }
    }

    fn var_bit(&self, letter: Letter, var: usize) -> bool {
        (letter >> (self.vars.len() - 1 - var)) & 1 == 1
    }

    /// Builds a letter from per-variable bits in sorted variable order.
    pub fn letter_from_bits(&self, bits: &[bool]) -> Letter {
        bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn letter_bits(&self, letter: Letter) -> Vec<bool> {
        (0..self.vars.len()).map(|i| self.var_bit(letter, i)).collect()
    }

    /// Evaluates every gate for one coordinate into `values` and returns the
    /// successor state.
    pub fn step_into(&self, state: &State, letter: Letter, values: &mut Vec<bool>) -> State {
        values.clear();
        let mut next = state.clone();
        let coordinate = state.position + 1;
        for gate in &self.gates {
            let v = match gate {
                Gate::Var(i) => self.var_bit(letter, *i),
                Gate::Lit(e) => e.coordinate(coordinate),
                Gate::Not(a) => !values[*a],
                Gate::And(a, b) => values[*a] && values[*b],
                Gate::Or(a, b) => values[*a] || values[*b],
                Gate::Implies(a, b) => !values[*a] || values[*b],
                Gate::Delta { child, bit } => {
                    let old = state.memory_bit(*bit);
                    if old && !values[*child] {
                        next.memory[bit / 64] &= !(1u64 << (bit % 64));
                    }
                    old
                }
            };
            values.push(v);
        }
        next.position = (state.position + 1).min(self.horizon);
        next
    }

    /// Values of the root formulas after [`Transducer::step_into`].
    pub fn root_values<'a>(&'a self, values: &'a [bool]) -> impl Iterator<Item = bool> + 'a {
        self.roots.iter().map(move |&r| values[r])
    }

    pub fn step(&self, state: &State, letter: Letter) -> (Vec<bool>, State) {
        let mut values = Vec::with_capacity(self.gates.len());
        let next = self.step_into(state, letter, &mut values);
        (self.root_values(&values).collect(), next)
    }

    /// The letter read at coordinate `k` (1-based) under `a`.
    pub fn letter_at(&self, a: &Assignment, k: usize) -> Result<Letter, EvalError> {
        let bits = self
            .vars
            .iter()
            .map(|v| {
                a.get(v)
                    .map(|e| e.coordinate(k))
                    .ok_or_else(|| EvalError::Unbound(v.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.letter_from_bits(&bits))
    }

    /// Root outputs for coordinates `1..=steps` under `a`; row `k - 1` holds
    /// coordinate `k`.
    pub fn run(&self, a: &Assignment, steps: usize) -> Result<Vec<Vec<bool>>, EvalError> {
        let mut state = self.initial_state();
        let mut rows = Vec::with_capacity(steps);
        for k in 1..=steps {
            let (out, next) = self.step(&state, self.letter_at(a, k)?);
            rows.push(out);
            state = next;
        }
        Ok(rows)
    }
}
