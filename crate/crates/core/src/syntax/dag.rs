//! Hash-consed formula graphs.
//!
//! A [`Dag`] holds every subformula of its inputs exactly once, children before
//! parents, so a single forward pass over `nodes` evaluates all of them. The
//! node set of a `Dag` built from `f` is the subformula closure of `f`.

use std::collections::HashMap;

use super::{Formula, ModalFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    /// Index into [`Dag::vars`].
    Var(usize),
    Top,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Neg(usize),
}

#[derive(Clone, Debug, Default)]
pub struct Dag {
    pub nodes: Vec<Node>,
    pub formulas: Vec<Formula>,
    /// Variable names in order of first occurrence.
    pub vars: Vec<String>,
    index: HashMap<Formula, usize>,
}

impl Dag {
    pub fn new(f: &Formula) -> Dag {
        Dag::from_formulas([f])
    }

    pub fn from_formulas<'a, I: IntoIterator<Item = &'a Formula>>(fs: I) -> Dag {
        let mut d = Dag::default();
        for f in fs {
            d.insert(f);
        }
        d
    }

    /// Adds `f` and its subformulas; returns the node index of `f`.
    pub fn insert(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let node = match f {
            Formula::Var(v) => {
                let k = match self.vars.iter().position(|x| x == v) {
                    Some(k) => k,
                    None => {
                        self.vars.push(v.clone());
                        self.vars.len() - 1
                    }
                };
                Node::Var(k)
            }
            Formula::Top => Node::Top,
            Formula::And(a, b) => Node::And(self.insert(a), self.insert(b)),
            Formula::Or(a, b) => Node::Or(self.insert(a), self.insert(b)),
            Formula::Imp(a, b) => Node::Imp(self.insert(a), self.insert(b)),
            Formula::Neg(a) => Node::Neg(self.insert(a)),
        };
        let i = self.nodes.len();
        self.nodes.push(node);
        self.formulas.push(f.clone());
        self.index.insert(f.clone(), i);
        i
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModalNode {
    Var(usize),
    Bot,
    Top,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Nec(usize),
    NegBox(usize),
}

#[derive(Clone, Debug, Default)]
pub struct ModalDag {
    pub nodes: Vec<ModalNode>,
    pub formulas: Vec<ModalFormula>,
    pub vars: Vec<String>,
    index: HashMap<ModalFormula, usize>,
}

impl ModalDag {
    pub fn new(f: &ModalFormula) -> ModalDag {
        let mut d = ModalDag::default();
        d.insert(f);
        d
    }

    pub fn insert(&mut self, f: &ModalFormula) -> usize {
        use ModalFormula as M;
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let node = match f {
            M::Var(v) => {
                let k = match self.vars.iter().position(|x| x == v) {
                    Some(k) => k,
                    None => {
                        self.vars.push(v.clone());
                        self.vars.len() - 1
                    }
                };
                ModalNode::Var(k)
            }
            M::Bot => ModalNode::Bot,
            M::Top => ModalNode::Top,
            M::And(a, b) => ModalNode::And(self.insert(a), self.insert(b)),
            M::Or(a, b) => ModalNode::Or(self.insert(a), self.insert(b)),
            M::Imp(a, b) => ModalNode::Imp(self.insert(a), self.insert(b)),
            M::Nec(a) => ModalNode::Nec(self.insert(a)),
            M::NegBox(a) => ModalNode::NegBox(self.insert(a)),
        };
        let i = self.nodes.len();
        self.nodes.push(node);
        self.formulas.push(f.clone());
        self.index.insert(f.clone(), i);
        i
    }

    pub fn index_of(&self, f: &ModalFormula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_prop, subformula_closure};

    #[test]
    fn nodes_are_the_closure_in_post_order() {
        let f = parse_prop("(p <-> q) -> (~p <-> ~q)").unwrap();
        let d = Dag::new(&f);
        let closure = subformula_closure(&f);
        assert_eq!(d.len(), closure.len());
        for (i, node) in d.nodes.iter().enumerate() {
            assert!(closure.contains(&d.formulas[i]));
            match *node {
                Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => assert!(a < i && b < i),
                Node::Neg(a) => assert!(a < i),
                _ => {}
            }
        }
        assert_eq!(d.vars, vec!["p", "q"]);
        assert_eq!(d.index_of(&f), Some(d.len() - 1));
    }
}
