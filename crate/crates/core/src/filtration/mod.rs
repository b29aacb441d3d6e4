//! Filtrations of N-models through a finite subformula-closed set `Σ`, and the
//! decision procedures that rest on the finite model property.

mod decide;

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use thiserror::Error;

use crate::bits::Bits;
use crate::frames::json::model_to_json;
use crate::frames::{eval_all, labeled_posets, ntables, NFrame, NModel, Poset};
use crate::syntax::{is_subformula_closed, Dag, Formula, Node};

pub use decide::{decide, decide_with, DecideConfig, DecideError, Verdict};

/// A quotient of a model by agreement on `Σ`, with its projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationResult {
    pub quotient: NModel,
    /// `pi[w]` is the class of world `w`.
    pub pi: Vec<usize>,
    pub sigma: BTreeSet<Formula>,
}

impl FiltrationResult {
    /// `π⁻¹(X)` for a set of classes `X`.
    pub fn preimage(&self, x: Bits) -> Bits {
        (0..self.pi.len()).filter(|&w| x.contains(self.pi[w])).collect()
    }

    /// `π[Y]` for a set of worlds `Y`.
    pub fn image(&self, y: Bits) -> Bits {
        y.iter().map(|w| self.pi[w]).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = model_to_json(&self.quotient);
        v["pi"] = json!(self.pi);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("Σ is not closed under subformulas: '{0}' is missing")]
    NotClosed(Formula),
    #[error("{0} classes is too many to enumerate filtrations")]
    TooManyClasses(usize),
    #[error("the given structure is not a filtration: {0}")]
    NotAFiltration(ConditionViolation),
}

/// Which filtration condition fails, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConditionViolation {
    #[error("projection does not match Σ-agreement at worlds {w}, {v}")]
    Projection { w: usize, v: usize },
    #[error("(a) fails: {w} <= {v} but [{w}] is not below [{v}]")]
    A { w: usize, v: usize },
    #[error("(b) fails: [{w}] <= [{v}] and '{formula}' holds at {w} but not at {v}")]
    B {
        w: usize,
        v: usize,
        formula: Formula,
    },
    #[error("(c) fails: [{w}] ∈ N*({x}) but {w} ∉ N(π⁻¹({x}))")]
    C { x: Bits, w: usize },
    #[error("(d) fails: {w} ∈ N(V({formula})) but [{w}] ∉ N*(π[V({formula})])")]
    D { formula: Formula, w: usize },
    #[error("V*({var}) differs from π[V({var})]")]
    Valuation { var: String },
}

/// The `∼`-classes of a model with respect to `Σ`.
struct Classes {
    dag: Dag,
    /// Truth set of each node of `dag` (the members of `Σ`).
    truth: Vec<Bits>,
    pi: Vec<usize>,
    members: Vec<Bits>,
}

impl Classes {
    fn new(m: &NModel, sigma: &BTreeSet<Formula>) -> Result<Classes, FiltrationError> {
        if let Some(f) = sigma
            .iter()
            .flat_map(|f| f.children())
            .find(|c| !sigma.contains(*c))
        {
            return Err(FiltrationError::NotClosed(f.clone()));
        }
        debug_assert!(is_subformula_closed(sigma));
        let dag = Dag::from_formulas(sigma);
        let truth = eval_all(m, &dag);
        let n = m.frame.size();
        let sig = |w: usize| -> Vec<bool> { truth.iter().map(|t| t.contains(w)).collect() };
        let mut keys: Vec<Vec<bool>> = Vec::new();
        let mut pi = vec![0; n];
        let mut members: Vec<Bits> = Vec::new();
        for (w, slot) in pi.iter_mut().enumerate() {
            let s = sig(w);
            let c = match keys.iter().position(|k| *k == s) {
                Some(c) => c,
                None => {
                    keys.push(s);
                    members.push(Bits::EMPTY);
                    keys.len() - 1
                }
            };
            *slot = c;
            members[c] = members[c].with(w);
        }
        Ok(Classes {
            dag,
            truth,
            pi,
            members,
        })
    }

    fn count(&self) -> usize {
        self.members.len()
    }

    fn rep(&self, c: usize) -> usize {
        self.members[c].first().expect("classes are nonempty")
    }

    /// `[c] <=g [d]`: every member of `Σ` true at `c` is true at `d`.
    fn below(&self, c: usize, d: usize) -> bool {
        let (a, b) = (self.rep(c), self.rep(d));
        self.truth.iter().all(|t| !t.contains(a) || t.contains(b))
    }

    fn preimage(&self, x: Bits) -> Bits {
        x.iter().fold(Bits::EMPTY, |acc, c| acc | self.members[c])
    }

    fn image(&self, y: Bits) -> Bits {
        y.iter().map(|w| self.pi[w]).collect()
    }

    fn greatest_order(&self) -> Poset {
        let k = self.count();
        let up = (0..k)
            .map(|c| (0..k).filter(|&d| self.below(c, d)).collect())
            .collect();
        Poset::from_up(up).expect("Σ-inclusion on distinct classes is a partial order")
    }

    /// `{c : every w ∈ c lies in N(π⁻¹(X))}`.
    fn raw_n(&self, m: &NModel, x: Bits) -> Bits {
        let nx = m.frame.n(self.preimage(x));
        (0..self.count()).filter(|&c| self.members[c].is_subset(nx)).collect()
    }

    fn valuation(&self) -> BTreeMap<String, Bits> {
        self.dag
            .nodes
            .iter()
            .zip(&self.truth)
            .filter_map(|(node, &t)| match node {
                Node::Var(k) => Some((self.dag.vars[*k].clone(), self.image(t))),
                _ => None,
            })
            .collect()
    }
}

/// The greatest filtration: classes ordered by `Σ`-inclusion, with `N*(X)`
/// the largest upset of classes all of whose members lie in `N(π⁻¹(X))`.
///
/// Classes are numbered by their least world.
pub fn greatest_filtration(
    m: &NModel,
    sigma: &BTreeSet<Formula>,
) -> Result<FiltrationResult, FiltrationError> {
    let cl = Classes::new(m, sigma)?;
    let order = cl.greatest_order();
    let frame = NFrame::from_fn(order.clone(), |x| order.interior(cl.raw_n(m, x)))
        .expect("greatest filtration is an N-frame");
    let quotient = NModel::new(frame, cl.valuation()).expect("images of upsets are upsets");
    Ok(FiltrationResult {
        quotient,
        pi: cl.pi,
        sigma: sigma.clone(),
    })
}

/// Checks the projection, conditions (a)-(d) and the valuation clause.
pub fn check_conditions(m: &NModel, r: &FiltrationResult) -> Result<(), ConditionViolation> {
    let cl = Classes::new(m, &r.sigma).map_err(|_| ConditionViolation::Projection { w: 0, v: 0 })?;
    let p = m.frame.poset();
    let q = r.quotient.frame.poset();
    let n = p.size();
    if r.pi.len() != n || q.size() != cl.count() {
        return Err(ConditionViolation::Projection { w: 0, v: 0 });
    }
    for w in 0..n {
        for v in 0..n {
            if (cl.pi[w] == cl.pi[v]) != (r.pi[w] == r.pi[v]) {
                return Err(ConditionViolation::Projection { w, v });
            }
        }
        if r.pi[w] >= q.size() {
            return Err(ConditionViolation::Projection { w, v: w });
        }
    }
    for w in 0..n {
        for v in p.up(w) {
            if !q.leq(r.pi[w], r.pi[v]) {
                return Err(ConditionViolation::A { w, v });
            }
        }
    }
    for w in 0..n {
        for v in 0..n {
            if !q.leq(r.pi[w], r.pi[v]) {
                continue;
            }
            for (f, t) in cl.dag.formulas.iter().zip(&cl.truth) {
                if t.contains(w) && !t.contains(v) {
                    return Err(ConditionViolation::B {
                        w,
                        v,
                        formula: f.clone(),
                    });
                }
            }
        }
    }
    let qf = &r.quotient.frame;
    for &x in qf.upsets() {
        let pre = r.preimage(x);
        let npre = m.frame.n(pre);
        let nx = qf.n(x);
        for w in 0..n {
            if nx.contains(r.pi[w]) && !npre.contains(w) {
                return Err(ConditionViolation::C { x, w });
            }
        }
    }
    for (node, f) in cl.dag.nodes.iter().zip(&cl.dag.formulas) {
        let Node::Neg(a) = *node else { continue };
        let arg = cl.truth[a];
        let target = qf.n(r.image(arg));
        for w in m.frame.n(arg) {
            if !target.contains(r.pi[w]) {
                let Formula::Neg(psi) = f else { unreachable!() };
                return Err(ConditionViolation::D {
                    formula: (**psi).clone(),
                    w,
                });
            }
        }
    }
    for (node, &t) in cl.dag.nodes.iter().zip(&cl.truth) {
        if let Node::Var(k) = *node {
            let var = &cl.dag.vars[k];
            if r.quotient.value(var) != r.image(t) {
                return Err(ConditionViolation::Valuation { var: var.clone() });
            }
        }
    }
    Ok(())
}

/// The first `φ ∈ Σ` and world `w` where `w ∈ V(φ)` and `[w] ∈ V*(φ)` differ.
pub fn filtration_theorem_check(m: &NModel, r: &FiltrationResult) -> Result<(), (Formula, usize)> {
    let dag = Dag::from_formulas(&r.sigma);
    let orig = eval_all(m, &dag);
    let quot = eval_all(&r.quotient, &dag);
    for (i, f) in dag.formulas.iter().enumerate() {
        for w in 0..m.frame.size() {
            if orig[i].contains(w) != quot[i].contains(r.pi[w]) {
                return Err((f.clone(), w));
            }
        }
    }
    Ok(())
}

/// Whether the greatest filtration dominates `other`: `<=*` is contained in
/// `<=g`, and `N*(X) ⊆ Ng(X)` for every `<=g`-upset `X`, where `Ng(X)` is the
/// set of classes all of whose members lie in `N(π⁻¹(X))`.
pub fn greatest_among(
    m: &NModel,
    sigma: &BTreeSet<Formula>,
    other: &FiltrationResult,
) -> Result<bool, FiltrationError> {
    if other.sigma != *sigma {
        return Err(FiltrationError::NotAFiltration(ConditionViolation::Projection { w: 0, v: 0 }));
    }
    check_conditions(m, other).map_err(FiltrationError::NotAFiltration)?;
    let cl = Classes::new(m, sigma)?;
    let g = cl.greatest_order();
    // Relate other's class numbering to ours through representatives.
    let to_ours: Vec<usize> = (0..cl.count())
        .map(|c| {
            let w = other.preimage(Bits::singleton(c)).first().expect("surjective");
            cl.pi[w]
        })
        .collect();
    let q = other.quotient.frame.poset();
    for c in 0..q.size() {
        for d in q.up(c) {
            if !g.leq(to_ours[c], to_ours[d]) {
                return Ok(false);
            }
        }
    }
    for x in g.upsets() {
        let theirs: Bits = x
            .iter()
            .map(|c| (0..q.size()).find(|&k| to_ours[k] == c).expect("bijective"))
            .collect();
        if !q.is_upset(theirs) {
            return Ok(false);
        }
        let nstar: Bits = other.quotient.frame.n(theirs).iter().map(|k| to_ours[k]).collect();
        if !nstar.is_subset(cl.raw_n(m, x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every filtration of `m` through `Σ` (all orders and N-tables on the
/// classes meeting (a)-(d)); limited to 4 classes.
pub fn all_filtrations(
    m: &NModel,
    sigma: &BTreeSet<Formula>,
) -> Result<Vec<FiltrationResult>, FiltrationError> {
    let cl = Classes::new(m, sigma)?;
    let k = cl.count();
    if k > 4 {
        return Err(FiltrationError::TooManyClasses(k));
    }
    let valuation = cl.valuation();
    let mut out = Vec::new();
    for order in labeled_posets(k) {
        let ok_a = (0..m.frame.size())
            .all(|w| m.frame.poset().up(w).iter().all(|v| order.leq(cl.pi[w], cl.pi[v])));
        let ok_b = (0..k).all(|c| order.up(c).iter().all(|d| cl.below(c, d)));
        if !(ok_a && ok_b) {
            continue;
        }
        for frame in ntables(&order) {
            let r = FiltrationResult {
                quotient: NModel {
                    frame,
                    valuation: valuation.clone(),
                },
                pi: cl.pi.clone(),
                sigma: sigma.clone(),
            };
            if check_conditions(m, &r).is_ok() {
                out.push(r);
            }
        }
    }
    Ok(out)
}
