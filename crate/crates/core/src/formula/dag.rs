use std::collections::HashMap;

use super::Formula;
use crate::element::Element;

pub type NodeId = usize;

/// A hash-consed node over the core connectives. Children always have
/// smaller ids than their parents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(String),
    Lit(Element),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Implies(NodeId, NodeId),
    Delta(NodeId),
}

/// Shared term DAG. Structurally identical subterms map to one node, so
/// repeated Δ-subterms are counted (and later tracked) once.
#[derive(Clone, Debug, Default)]
pub struct TermDag {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
}

impl TermDag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn delta_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Delta(_)))
            .count()
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    /// Inserts `f`, expanding derived operators on the fly.
    pub fn insert(&mut self, f: &Formula) -> NodeId {
        match f {
            Formula::Var(name) => self.intern(Node::Var(name.clone())),
            Formula::Zero => self.intern(Node::Lit(Element::zero())),
            Formula::One => self.intern(Node::Lit(Element::one())),
            Formula::Lit(e) => self.intern(Node::Lit(e.clone())),
            Formula::Not(g) => {
                let g = self.insert(g);
                self.intern(Node::Not(g))
            }
            Formula::Delta(g) => {
                let g = self.insert(g);
                self.intern(Node::Delta(g))
            }
            Formula::And(a, b) => {
                let (a, b) = (self.insert(a), self.insert(b));
                self.intern(Node::And(a, b))
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.insert(a), self.insert(b));
                self.intern(Node::Or(a, b))
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.insert(a), self.insert(b));
                self.intern(Node::Implies(a, b))
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.insert(a), self.insert(b));
                let ab = self.intern(Node::Implies(a, b));
                let ba = self.intern(Node::Implies(b, a));
                self.intern(Node::And(ab, ba))
            }
            Formula::Square(g) => {
                let g = self.insert(g);
                self.square(g)
            }
            Formula::Nabla(g) => {
                let g = self.insert(g);
                let s1 = self.square(g);
                let n1 = self.intern(Node::Not(s1));
                let s2 = self.square(n1);
                let n2 = self.intern(Node::Not(s2));
                self.square(n2)
            }
        }
    }

    fn square(&mut self, g: NodeId) -> NodeId {
        let d = self.intern(Node::Delta(g));
        self.intern(Node::And(g, d))
    }
}
