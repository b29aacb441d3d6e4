//! Formula syntax for the propositional language (with a primitive, unconstrained
//! negation and no falsum) and for the bi-modal language with `[]` and `[n]`.

mod dag;
mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use dag::{Dag, ModalDag, ModalNode, Node};
pub use parse::{parse, parse_modal, parse_prop, Language, ParseError, Parsed};

/// Formula of the propositional language: `p | T | f & f | f | f | f -> f | ~f`.
///
/// There is no falsum; `~` is a primitive unary connective.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Var(String),
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
}

/// Formula of the bi-modal language. `Nec` is the S4 box `[]`, `NegBox` is the
/// non-normal box `[n]` that interprets negation. `~f` abbreviates `f -> F`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModalFormula {
    Var(String),
    Bot,
    Top,
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Imp(Box<ModalFormula>, Box<ModalFormula>),
    Nec(Box<ModalFormula>),
    NegBox(Box<ModalFormula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_owned())
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    /// `(l -> r) & (r -> l)`; the biconditional is not primitive.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Top => vec![],
            Formula::Neg(a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => vec![a, b],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Nesting depth; atoms and `T` have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            _ => self.children().into_iter().for_each(|c| c.collect_vars(out)),
        }
    }

    pub fn has_negation(&self) -> bool {
        match self {
            Formula::Neg(_) => true,
            _ => self.children().into_iter().any(Formula::has_negation),
        }
    }

    /// Simultaneous substitution of formulas for variables.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::Top => Formula::Top,
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(map), b.substitute(map)),
            Formula::Neg(a) => Formula::neg(a.substitute(map)),
        }
    }

    /// Rewrites every `~f` as `f -> q` for the given variable `q`.
    pub fn negation_as_implication(&self, target: &str) -> Formula {
        match self {
            Formula::Var(_) | Formula::Top => self.clone(),
            Formula::And(a, b) => Formula::and(
                a.negation_as_implication(target),
                b.negation_as_implication(target),
            ),
            Formula::Or(a, b) => Formula::or(
                a.negation_as_implication(target),
                b.negation_as_implication(target),
            ),
            Formula::Imp(a, b) => Formula::imp(
                a.negation_as_implication(target),
                b.negation_as_implication(target),
            ),
            Formula::Neg(a) => Formula::imp(a.negation_as_implication(target), Formula::var(target)),
        }
    }
}

/// The least set containing `f` and closed under immediate subformulas.
pub fn subformula_closure(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        if out.insert(g.clone()) {
            stack.extend(g.children());
        }
    }
    out
}

/// Union of the closures of every member of `set`.
pub fn close_set<'a, I: IntoIterator<Item = &'a Formula>>(set: I) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in set {
        out.extend(subformula_closure(f));
    }
    out
}

pub fn is_subformula_closed(set: &BTreeSet<Formula>) -> bool {
    set.iter()
        .all(|f| f.children().into_iter().all(|c| set.contains(c)))
}

/// A variable name not occurring in `f`, derived from `stem`.
pub fn fresh_var(f: &Formula, stem: &str) -> String {
    let used = f.vars();
    if !used.contains(stem) {
        return stem.to_owned();
    }
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|v| !used.contains(v))
        .expect("unbounded supply of names")
}

impl ModalFormula {
    pub fn var(name: &str) -> ModalFormula {
        ModalFormula::Var(name.to_owned())
    }

    pub fn and(l: ModalFormula, r: ModalFormula) -> ModalFormula {
        ModalFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: ModalFormula, r: ModalFormula) -> ModalFormula {
        ModalFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: ModalFormula, r: ModalFormula) -> ModalFormula {
        ModalFormula::Imp(Box::new(l), Box::new(r))
    }

    pub fn iff(l: ModalFormula, r: ModalFormula) -> ModalFormula {
        ModalFormula::and(ModalFormula::imp(l.clone(), r.clone()), ModalFormula::imp(r, l))
    }

    /// Classical negation `f -> F`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: ModalFormula) -> ModalFormula {
        ModalFormula::imp(f, ModalFormula::Bot)
    }

    pub fn nec(f: ModalFormula) -> ModalFormula {
        ModalFormula::Nec(Box::new(f))
    }

    pub fn neg_box(f: ModalFormula) -> ModalFormula {
        ModalFormula::NegBox(Box::new(f))
    }

    pub fn children(&self) -> Vec<&ModalFormula> {
        match self {
            ModalFormula::Var(_) | ModalFormula::Bot | ModalFormula::Top => vec![],
            ModalFormula::Nec(a) | ModalFormula::NegBox(a) => vec![a],
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) | ModalFormula::Imp(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(ModalFormula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(g) = stack.pop() {
            match g {
                ModalFormula::Var(v) => {
                    out.insert(v.clone());
                }
                _ => stack.extend(g.children()),
            }
        }
        out
    }

    pub fn contains_bot(&self) -> bool {
        matches!(self, ModalFormula::Bot) || self.children().into_iter().any(|c| c.contains_bot())
    }

    pub fn contains_nec(&self) -> bool {
        matches!(self, ModalFormula::Nec(_)) || self.children().into_iter().any(|c| c.contains_nec())
    }

    pub fn substitute(&self, map: &BTreeMap<String, ModalFormula>) -> ModalFormula {
        use ModalFormula as M;
        match self {
            M::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            M::Bot | M::Top => self.clone(),
            M::And(a, b) => M::and(a.substitute(map), b.substitute(map)),
            M::Or(a, b) => M::or(a.substitute(map), b.substitute(map)),
            M::Imp(a, b) => M::imp(a.substitute(map), b.substitute(map)),
            M::Nec(a) => M::nec(a.substitute(map)),
            M::NegBox(a) => M::neg_box(a.substitute(map)),
        }
    }

    /// Normal form under the identification of `[](a & b)` with `[]a & []b`:
    /// every box over a conjunction is distributed, bottom-up.
    pub fn distribute_nec(&self) -> ModalFormula {
        use ModalFormula as M;
        match self {
            M::Var(_) | M::Bot | M::Top => self.clone(),
            M::And(a, b) => M::and(a.distribute_nec(), b.distribute_nec()),
            M::Or(a, b) => M::or(a.distribute_nec(), b.distribute_nec()),
            M::Imp(a, b) => M::imp(a.distribute_nec(), b.distribute_nec()),
            M::NegBox(a) => M::neg_box(a.distribute_nec()),
            M::Nec(a) => box_distributed(a.distribute_nec()),
        }
    }
}

fn box_distributed(inner: ModalFormula) -> ModalFormula {
    match inner {
        ModalFormula::And(a, b) => ModalFormula::and(box_distributed(*a), box_distributed(*b)),
        other => ModalFormula::nec(other),
    }
}

/// Goedel translation extended with `(~f)' = [n] f'`; there is no falsum clause.
pub fn godel_translate(f: &Formula) -> ModalFormula {
    use ModalFormula as M;
    match f {
        Formula::Var(v) => M::nec(M::Var(v.clone())),
        Formula::Top => M::Top,
        Formula::And(a, b) => M::and(godel_translate(a), godel_translate(b)),
        Formula::Or(a, b) => M::or(godel_translate(a), godel_translate(b)),
        Formula::Imp(a, b) => M::nec(M::imp(godel_translate(a), godel_translate(b))),
        Formula::Neg(a) => M::neg_box(godel_translate(a)),
    }
}
