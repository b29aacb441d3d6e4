use std::collections::BTreeMap;

use serde::Serialize;

use crate::bits::Bits;
use crate::par::{self, Exec};
use crate::syntax::{Dag, Formula, Node};

use super::{FrameError, LogicId, NFrame};

/// An N-frame with a valuation of variables into upsets. Variables without an
/// entry denote `∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NModel {
    pub frame: NFrame,
    pub valuation: BTreeMap<String, Bits>,
}

impl NModel {
    pub fn new(frame: NFrame, valuation: BTreeMap<String, Bits>) -> Result<NModel, FrameError> {
        for (var, &value) in &valuation {
            if !frame.poset().is_upset(value) {
                return Err(FrameError::ValuationNotUpset {
                    var: var.clone(),
                    value,
                });
            }
        }
        Ok(NModel { frame, valuation })
    }

    pub fn value(&self, var: &str) -> Bits {
        self.valuation.get(var).copied().unwrap_or_default()
    }
}

/// A valuation (over the formula's variables) and a world where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub valuation: BTreeMap<String, Bits>,
    pub world: usize,
}

/// Truth sets of every node of `dag`; `vals[i]` interprets `dag.vars[i]`.
pub(crate) fn eval_dag(fr: &NFrame, dag: &Dag, vals: &[Bits]) -> Vec<Bits> {
    let p = fr.poset();
    let full = p.worlds();
    let mut out: Vec<Bits> = Vec::with_capacity(dag.len());
    for node in &dag.nodes {
        let v = match *node {
            Node::Var(k) => vals[k],
            Node::Top => full,
            Node::And(a, b) => out[a] & out[b],
            Node::Or(a, b) => out[a] | out[b],
            Node::Imp(a, b) => p.imp(out[a], out[b]),
            Node::Neg(a) => fr.n(out[a]),
        };
        out.push(v);
    }
    out
}

/// Truth set of every node of `dag` in `m`.
pub fn eval_all(m: &NModel, dag: &Dag) -> Vec<Bits> {
    let vals: Vec<Bits> = dag.vars.iter().map(|v| m.value(v)).collect();
    eval_dag(&m.frame, dag, &vals)
}

/// `V(f)`, the set of worlds where `f` holds.
pub fn eval(m: &NModel, f: &Formula) -> Bits {
    let dag = Dag::new(f);
    *eval_all(m, &dag).last().expect("dag of a formula is nonempty")
}

/// Valuations of the variables of `f` into the frame's upsets, in a fixed
/// order: variables sorted by name, the first most significant, each ranging
/// over upsets in bitmask order.
pub(crate) struct ValuationSpace<'a> {
    upsets: &'a [Bits],
    /// `slot[i]`: position of `dag.vars[i]` in the sorted variable list.
    slot: Vec<usize>,
    names: Vec<String>,
    pub count: usize,
}

impl<'a> ValuationSpace<'a> {
    pub fn new(fr: &'a NFrame, dag: &Dag) -> ValuationSpace<'a> {
        let mut names = dag.vars.clone();
        names.sort();
        let slot = dag
            .vars
            .iter()
            .map(|v| names.iter().position(|x| x == v).expect("present"))
            .collect();
        let upsets = fr.upsets();
        let count = upsets
            .len()
            .checked_pow(names.len() as u32)
            .expect("valuation space fits in usize");
        ValuationSpace {
            upsets,
            slot,
            names,
            count,
        }
    }

    /// Values for `dag.vars` under the `index`-th valuation.
    pub fn decode(&self, mut index: usize) -> Vec<Bits> {
        let k = self.names.len();
        let mut sorted = vec![Bits::EMPTY; k];
        for i in (0..k).rev() {
            sorted[i] = self.upsets[index % self.upsets.len()];
            index /= self.upsets.len();
        }
        self.slot.iter().map(|&s| sorted[s]).collect()
    }

    pub fn named(&self, vals: &[Bits]) -> BTreeMap<String, Bits> {
        self.slot
            .iter()
            .zip(vals)
            .map(|(&s, &v)| (self.names[s].clone(), v))
            .collect()
    }
}

/// The least refuting valuation of the root of `dag` on `fr`, with the least
/// world where the root fails.
pub(crate) fn refute_dag(fr: &NFrame, dag: &Dag, exec: Exec) -> Option<Refutation> {
    let space = ValuationSpace::new(fr, dag);
    let full = fr.poset().worlds();
    par::find_first(exec, space.count, |i| {
        let vals = space.decode(i);
        let truth = eval_dag(fr, dag, &vals);
        let failing = full - *truth.last().expect("nonempty");
        failing.first().map(|world| Refutation {
            valuation: space.named(&vals),
            world,
        })
    })
}

pub fn refuting_valuation(fr: &NFrame, f: &Formula) -> Option<Refutation> {
    refute_dag(fr, &Dag::new(f), Exec::default())
}

/// True iff `f` holds at every world under every valuation.
pub fn frame_validates(fr: &NFrame, f: &Formula) -> bool {
    refuting_valuation(fr, f).is_none()
}

/// `X ∩ N(X) ⊆ N(Y)` for all upsets `X`, `Y`.
pub(crate) fn is_nef(fr: &NFrame) -> bool {
    let meet = fr
        .table_values()
        .iter()
        .fold(fr.poset().worlds(), |acc, &v| acc & v);
    fr.upsets()
        .iter()
        .zip(fr.table_values())
        .all(|(&x, &nx)| (x & nx).is_subset(meet))
}

/// `X ⊆ Y` implies `N(Y) ⊆ N(X)`.
pub(crate) fn is_antitone(fr: &NFrame) -> bool {
    let ups = fr.upsets();
    let t = fr.table_values();
    (0..ups.len()).all(|i| {
        (0..ups.len()).all(|j| !ups[i].is_subset(ups[j]) || t[j].is_subset(t[i]))
    })
}

/// Membership in the frame class of `l`: the set condition for NeF and CoPC,
/// validity of the axiom for MPC.
pub fn frame_class(fr: &NFrame, l: LogicId) -> bool {
    match l {
        LogicId::N => true,
        LogicId::NeF => is_nef(fr),
        LogicId::CoPC => is_antitone(fr),
        LogicId::Mpc => frame_class_by_axiom(fr, l, Exec::default()),
    }
}

pub(crate) fn frame_class_by_axiom(fr: &NFrame, l: LogicId, exec: Exec) -> bool {
    refute_dag(fr, &Dag::new(&l.axiom()), exec).is_none()
}
