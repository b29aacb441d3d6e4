//! Bi-modal companions: the S4 box `[]` plus a non-normal box `[n]` read
//! through a neighbourhood function on all subsets.
//!
//! An NS4 frame is a preorder with `N : P(W) → U(W)` such that
//! `w ∈ N(X) ⟺ w ∈ N(X ∩ R(w))`. A CoS4 frame is an NS4 frame on a partial
//! order whose `N` is antitone. A modal N-frame has no order at all.

mod proof;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bits::{submasks, Bits};
use crate::frames::json::{as_usize, mask_map, pairs};
use crate::frames::{eval as n_eval, NFrame, NModel};
use crate::par::{self, Exec};
use crate::syntax::{godel_translate, Formula, ModalDag, ModalFormula, ModalNode};

pub use proof::{
    check_proof, check_proof_of, fixtures, BadLine, HilbertProof, ProofLine, Rule, System,
};

/// Largest world count for subset-indexed tables.
pub const MAX_MODAL_WORLDS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error("too many worlds: {0} (at most {MAX_MODAL_WORLDS})")]
    TooManyWorlds(usize),
    #[error("world {0} out of range")]
    WorldOutOfRange(usize),
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not transitive: {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("relation is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("N({x}) = {value} is not upward closed")]
    NotUpset { x: Bits, value: Bits },
    #[error("locality fails at world {w} for X = {x}")]
    Locality { w: usize, x: Bits },
    #[error("N is not antitone: {x} ⊆ {y} but N({y}) ⊄ N({x})")]
    NotAntitone { x: Bits, y: Bits },
    #[error("N-table has {0} entries; expected one per subset")]
    TableSize(usize),
    #[error("malformed JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NS4Frame {
    /// `up[w] = R(w)`.
    up: Vec<Bits>,
    /// `table[x]` is `N(X)` for the subset with mask `x`.
    table: Vec<Bits>,
}

impl NS4Frame {
    /// A frame from successor sets and a full table, checked.
    pub fn new(up: Vec<Bits>, table: Vec<Bits>) -> Result<NS4Frame, ModalError> {
        let f = NS4Frame { up, table };
        ns4_check_frame(&f)?;
        Ok(f)
    }

    pub fn from_fn<F: Fn(Bits) -> Bits>(up: Vec<Bits>, n: F) -> Result<NS4Frame, ModalError> {
        let size = up.len();
        if size > MAX_MODAL_WORLDS {
            return Err(ModalError::TooManyWorlds(size));
        }
        let table = (0..1u64 << size).map(|x| n(Bits(x))).collect();
        NS4Frame::new(up, table)
    }

    /// Reflexive-transitive relation from `pairs` (`(i, j)` means `i <= j`).
    pub fn preorder(size: usize, pairs: &[(usize, usize)]) -> Result<Vec<Bits>, ModalError> {
        if size > MAX_MODAL_WORLDS {
            return Err(ModalError::TooManyWorlds(size));
        }
        let mut up: Vec<Bits> = (0..size).map(Bits::singleton).collect();
        for &(i, j) in pairs {
            if i >= size || j >= size {
                return Err(ModalError::WorldOutOfRange(i.max(j)));
            }
            up[i] = up[i].with(j);
        }
        loop {
            let next: Vec<Bits> = up
                .iter()
                .map(|&r| r.iter().fold(r, |acc, v| acc | up[v]))
                .collect();
            if next == up {
                return Ok(up);
            }
            up = next;
        }
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn worlds(&self) -> Bits {
        Bits::full(self.size())
    }

    pub fn up(&self, w: usize) -> Bits {
        self.up[w]
    }

    pub fn up_sets(&self) -> &[Bits] {
        &self.up
    }

    pub fn n(&self, x: Bits) -> Bits {
        self.table[x.0 as usize]
    }

    pub fn table(&self) -> &[Bits] {
        &self.table
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }
}

/// Checks the preorder, upward closure of every `N(X)`, and locality.
pub fn ns4_check_frame(f: &NS4Frame) -> Result<(), ModalError> {
    let n = f.up.len();
    if n > MAX_MODAL_WORLDS {
        return Err(ModalError::TooManyWorlds(n));
    }
    if f.table.len() != 1 << n {
        return Err(ModalError::TableSize(f.table.len()));
    }
    let all = Bits::full(n);
    for w in 0..n {
        if !f.up[w].is_subset(all) {
            return Err(ModalError::WorldOutOfRange(w));
        }
        if !f.up[w].contains(w) {
            return Err(ModalError::NotReflexive(w));
        }
        for v in f.up[w].iter() {
            if let Some(u) = (f.up[v] - f.up[w]).first() {
                return Err(ModalError::NotTransitive(w, v, u));
            }
        }
    }
    for x in 0..1u64 << n {
        let value = f.table[x as usize];
        let x = Bits(x);
        if !value.is_subset(all) || value.iter().any(|w| !f.up[w].is_subset(value)) {
            return Err(ModalError::NotUpset { x, value });
        }
        if let Some(w) = (0..n).find(|&w| value.contains(w) != f.n(x & f.up[w]).contains(w)) {
            return Err(ModalError::Locality { w, x });
        }
    }
    Ok(())
}

/// Truth sets of every node of `dag`, reading `[]` over `up` and `[n]` by `table`.
fn eval_nodes(up: &[Bits], table: &[Bits], dag: &ModalDag, vals: &[Bits]) -> Vec<Bits> {
    let all = Bits::full(up.len());
    let mut out: Vec<Bits> = Vec::with_capacity(dag.len());
    for node in &dag.nodes {
        let v = match *node {
            ModalNode::Var(k) => vals[k],
            ModalNode::Bot => Bits::EMPTY,
            ModalNode::Top => all,
            ModalNode::And(a, b) => out[a] & out[b],
            ModalNode::Or(a, b) => out[a] | out[b],
            ModalNode::Imp(a, b) => (!out[a] | out[b]) & all,
            ModalNode::Nec(a) => (0..up.len()).filter(|&w| up[w].is_subset(out[a])).collect(),
            ModalNode::NegBox(a) => table[out[a].0 as usize],
        };
        out.push(v);
    }
    out
}

fn vals_of(dag: &ModalDag, valuation: &BTreeMap<String, Bits>) -> Vec<Bits> {
    dag.vars
        .iter()
        .map(|v| valuation.get(v).copied().unwrap_or(Bits::EMPTY))
        .collect()
}

/// An NS4 frame with a valuation into arbitrary subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NS4Model {
    pub frame: NS4Frame,
    pub valuation: BTreeMap<String, Bits>,
}

/// Truth set of `f`; variables missing from the valuation denote `∅`.
pub fn ns4_eval(m: &NS4Model, f: &ModalFormula) -> Bits {
    let dag = ModalDag::new(f);
    let vals = vals_of(&dag, &m.valuation);
    *eval_nodes(&m.frame.up, &m.frame.table, &dag, &vals)
        .last()
        .expect("nonempty dag")
}

/// Runs `check` on every assignment of subsets of `size` worlds to `k` variables.
fn all_valuations<F>(exec: Exec, size: usize, k: usize, check: F) -> bool
where
    F: Fn(&[Bits]) -> bool + Sync + Send,
{
    let per = 1u64 << size;
    let total = per.checked_pow(k as u32).expect("valuation space fits in u64");
    let decode = |mut i: u64| -> Vec<Bits> {
        let mut v = vec![Bits::EMPTY; k];
        for slot in v.iter_mut().rev() {
            *slot = Bits(i % per);
            i /= per;
        }
        v
    };
    par::all(exec, total as usize, |i| check(&decode(i as u64)))
}

/// Whether `f` holds at every world under every valuation.
pub fn ns4_frame_validates(frame: &NS4Frame, f: &ModalFormula) -> bool {
    let dag = ModalDag::new(f);
    let all = frame.worlds();
    all_valuations(Exec::default(), frame.size(), dag.vars.len(), |vals| {
        *eval_nodes(&frame.up, &frame.table, &dag, vals).last().expect("nonempty") == all
    })
}

/// A valuation and the least world where `f` fails, searching valuations in
/// increasing order with the first variable most significant.
pub fn ns4_refutation(frame: &NS4Frame, f: &ModalFormula) -> Option<(BTreeMap<String, Bits>, usize)> {
    let dag = ModalDag::new(f);
    let per = 1u64 << frame.size();
    let k = dag.vars.len();
    let total = per.checked_pow(k as u32).expect("valuation space fits in u64");
    par::find_first(Exec::default(), total as usize, |i| {
        let mut i = i as u64;
        let mut vals = vec![Bits::EMPTY; k];
        for slot in vals.iter_mut().rev() {
            *slot = Bits(i % per);
            i /= per;
        }
        let t = *eval_nodes(&frame.up, &frame.table, &dag, &vals).last().expect("nonempty");
        (!t & frame.worlds()).first().map(|w| {
            let named = dag.vars.iter().cloned().zip(vals.iter().copied()).collect();
            (named, w)
        })
    })
}

/// `N*(X) = {w : some upset Y has X ∩ R(w) = Y ∩ R(w) and w ∈ N(Y)}`.
pub fn lift_nstar(fr: &NFrame) -> NS4Frame {
    let p = fr.poset();
    let up: Vec<Bits> = (0..p.size()).map(|w| p.up(w)).collect();
    let pairs: Vec<(Bits, Bits)> = fr
        .upsets()
        .iter()
        .copied()
        .zip(fr.table_values().iter().copied())
        .collect();
    NS4Frame::from_fn(up.clone(), |x| {
        (0..up.len())
            .filter(|&w| {
                pairs
                    .iter()
                    .any(|&(y, ny)| ny.contains(w) && x & up[w] == y & up[w])
            })
            .collect()
    })
    .expect("lift of an N-frame is an NS4 frame")
}

/// The lifted model `⟨W, ≤, N*, V⟩` of an N-model.
pub fn lift_model(m: &NModel) -> NS4Model {
    NS4Model {
        frame: lift_nstar(&m.frame),
        valuation: m.valuation.clone(),
    }
}

/// `Err(w)` for the least world where `f` and its translation disagree.
pub fn translation_preservation(m: &NModel, f: &Formula) -> Result<(), usize> {
    let lifted = lift_model(m);
    let a = n_eval(m, f);
    let b = ns4_eval(&lifted, &godel_translate(f));
    match (a.0 ^ b.0).trailing_zeros() {
        64 => Ok(()),
        w => Err(w as usize),
    }
}

/// A set with a function `N : P(W) → P(W)` and no order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalNFrame {
    size: usize,
    table: Vec<Bits>,
}

impl ModalNFrame {
    pub fn new(size: usize, table: Vec<Bits>) -> Result<ModalNFrame, ModalError> {
        if size > MAX_MODAL_WORLDS {
            return Err(ModalError::TooManyWorlds(size));
        }
        if table.len() != 1 << size {
            return Err(ModalError::TableSize(table.len()));
        }
        if let Some(x) = table.iter().find(|x| !x.is_subset(Bits::full(size))) {
            return Err(ModalError::Json(format!("N value {x} mentions a world out of range")));
        }
        Ok(ModalNFrame { size, table })
    }

    pub fn from_fn<F: Fn(Bits) -> Bits>(size: usize, n: F) -> Result<ModalNFrame, ModalError> {
        if size > MAX_MODAL_WORLDS {
            return Err(ModalError::TooManyWorlds(size));
        }
        ModalNFrame::new(size, (0..1u64 << size).map(|x| n(Bits(x))).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn n(&self, x: Bits) -> Bits {
        self.table[x.0 as usize]
    }

    pub fn table(&self) -> &[Bits] {
        &self.table
    }

    /// Whether `f` holds everywhere under `valuation`; `[]` is read over the
    /// identity relation.
    pub fn model_validates(&self, valuation: &BTreeMap<String, Bits>, f: &ModalFormula) -> bool {
        let dag = ModalDag::new(f);
        let up: Vec<Bits> = (0..self.size).map(Bits::singleton).collect();
        *eval_nodes(&up, &self.table, &dag, &vals_of(&dag, valuation))
            .last()
            .expect("nonempty")
            == Bits::full(self.size)
    }
}

/// All sets `N(Z_1) ∩ … ∩ N(Z_n)`; for `n = 0` just `W`.
fn meets_of_n(f: &ModalNFrame, n: usize) -> Vec<Bits> {
    let mut cur = vec![Bits::full(f.size)];
    for _ in 0..n {
        let mut next: Vec<Bits> = cur
            .iter()
            .flat_map(|&m| f.table.iter().map(move |&z| m & z))
            .collect();
        next.sort_unstable();
        next.dedup();
        cur = next;
    }
    cur
}

/// `(E_n)`: `N(X) ∩ M = N(X ∩ M) ∩ M` for `M = N(Z_1) ∩ … ∩ N(Z_n)`.
pub fn en_check(f: &ModalNFrame, n: usize) -> bool {
    let ms = meets_of_n(f, n);
    ms.iter().all(|&m| {
        (0..1u64 << f.size).all(|x| f.n(Bits(x)) & m == f.n(Bits(x) & m) & m)
    })
}

/// Premise and conclusion of `R_n` over `p1..pn, q, r`.
pub fn rn_rule(n: usize) -> (ModalFormula, ModalFormula) {
    use ModalFormula as M;
    let guard = (1..=n)
        .map(|i| M::neg_box(M::var(&format!("p{i}"))))
        .reduce(M::and)
        .unwrap_or(M::Top);
    let (q, r) = (M::var("q"), M::var("r"));
    let premise = M::imp(guard.clone(), M::iff(q.clone(), r.clone()));
    let conclusion = M::imp(guard, M::iff(M::neg_box(q), M::neg_box(r)));
    (premise, conclusion)
}

/// Whether `R_n` preserves validity on `f`: every valuation making the premise
/// true everywhere makes the conclusion true everywhere.
pub fn rn_validity(f: &ModalNFrame, n: usize) -> bool {
    rn_validity_with(f, n, Exec::default())
}

pub fn rn_validity_with(f: &ModalNFrame, n: usize, exec: Exec) -> bool {
    let (premise, conclusion) = rn_rule(n);
    let mut dag = ModalDag::new(&premise);
    let p = dag.index_of(&premise).expect("root is indexed");
    let c = dag.insert(&conclusion);
    let up: Vec<Bits> = (0..f.size).map(Bits::singleton).collect();
    let all = Bits::full(f.size);
    all_valuations(exec, f.size, dag.vars.len(), |vals| {
        let t = eval_nodes(&up, &f.table, &dag, vals);
        t[p] != all || t[c] == all
    })
}

/// A CoS4 frame: an NS4 frame on a partial order with antitone `N`.
pub fn cos4_check_frame(f: &NS4Frame) -> Result<(), ModalError> {
    ns4_check_frame(f)?;
    for w in 0..f.size() {
        for v in f.up[w].iter() {
            if v != w && f.up[v].contains(w) {
                return Err(ModalError::NotAntisymmetric(w, v));
            }
        }
    }
    for y in 0..1u64 << f.size() {
        for x in submasks(y) {
            if !f.n(Bits(y)).is_subset(f.n(Bits(x))) {
                return Err(ModalError::NotAntitone { x: Bits(x), y: Bits(y) });
            }
        }
    }
    Ok(())
}

/// All reflexive-transitive relations on `size` worlds.
pub fn preorders(size: usize) -> Vec<Vec<Bits>> {
    let off: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    (0..1u64 << off.len())
        .filter_map(|code| {
            let up: Vec<Bits> = (0..size)
                .map(|i| {
                    off.iter()
                        .enumerate()
                        .filter(|&(k, &(a, _))| a == i && code >> k & 1 == 1)
                        .fold(Bits::singleton(i), |acc, (_, &(_, b))| acc.with(b))
                })
                .collect();
            let transitive = (0..size).all(|w| up[w].iter().all(|v| up[v].is_subset(up[w])));
            transitive.then_some(up)
        })
        .collect()
}

/// Clusters of a preorder ordered so that every cluster comes after all
/// clusters strictly above it, each with the subsets of `R(w)` that may make
/// its worlds belong to `N`, given the choices already made above.
struct LocalChoice<'a> {
    up: &'a [Bits],
    clusters: Vec<Bits>,
}

impl<'a> LocalChoice<'a> {
    fn new(up: &'a [Bits]) -> LocalChoice<'a> {
        let mut clusters: Vec<Bits> = Vec::new();
        for w in 0..up.len() {
            let c: Bits = (0..up.len()).filter(|&v| up[v] == up[w]).collect();
            if !clusters.contains(&c) {
                clusters.push(c);
            }
        }
        clusters.sort_by_key(|c| up[c.first().expect("nonempty")].len());
        LocalChoice { up, clusters }
    }

    /// Admissible local families for cluster `k` given families `chosen`
    /// (indexed by world) for the clusters before it.
    fn allowed(&self, k: usize, chosen: &[Vec<Bits>]) -> Vec<Bits> {
        let w = self.clusters[k].first().expect("nonempty");
        let r = self.up[w];
        let above = r - self.clusters[k];
        submasks(r.0)
            .map(Bits)
            .filter(|&s| above.iter().all(|v| chosen[v].contains(&(s & self.up[v]))))
            .collect()
    }

    fn build(&self, chosen: &[Vec<Bits>]) -> NS4Frame {
        let up = self.up.to_vec();
        NS4Frame::from_fn(up.clone(), |x| {
            (0..up.len()).filter(|&w| chosen[w].contains(&(x & up[w]))).collect()
        })
        .expect("local choices give an NS4 frame")
    }
}

/// Streams every NS4 frame on the preorder `up` to `f` until it returns `false`.
pub fn for_each_ns4_frame<F: FnMut(NS4Frame) -> bool>(up: &[Bits], mut f: F) -> bool {
    let lc = LocalChoice::new(up);
    let mut chosen: Vec<Vec<Bits>> = vec![Vec::new(); up.len()];
    fn go<F: FnMut(NS4Frame) -> bool>(
        lc: &LocalChoice,
        k: usize,
        chosen: &mut Vec<Vec<Bits>>,
        f: &mut F,
    ) -> bool {
        if k == lc.clusters.len() {
            return f(lc.build(chosen));
        }
        let allowed = lc.allowed(k, chosen);
        assert!(allowed.len() < 32, "local family space too large to enumerate");
        for pick in 0..1u32 << allowed.len() {
            let family: Vec<Bits> = (0..allowed.len())
                .filter(|&i| pick >> i & 1 == 1)
                .map(|i| allowed[i])
                .collect();
            for w in lc.clusters[k].iter() {
                chosen[w] = family.clone();
            }
            if !go(lc, k + 1, chosen, f) {
                return false;
            }
        }
        true
    }
    go(&lc, 0, &mut chosen, &mut f)
}

/// An NS4 frame on `up` whose local families are picked by `pick`, which
/// receives the admissible subsets of `R(w)` for one cluster at a time and
/// returns those that put the cluster into `N`.
pub fn ns4_frame_by_choice<F: FnMut(&[Bits]) -> Vec<Bits>>(up: &[Bits], mut pick: F) -> NS4Frame {
    let lc = LocalChoice::new(up);
    let mut chosen: Vec<Vec<Bits>> = vec![Vec::new(); up.len()];
    for k in 0..lc.clusters.len() {
        let allowed = lc.allowed(k, &chosen);
        let family: Vec<Bits> = pick(&allowed).into_iter().filter(|s| allowed.contains(s)).collect();
        for w in lc.clusters[k].iter() {
            chosen[w] = family.clone();
        }
    }
    lc.build(&chosen)
}

pub fn ns4_frame_to_json(f: &NS4Frame) -> Value {
    let rel: Vec<Value> = (0..f.size())
        .flat_map(|w| f.up[w].iter().filter(move |&v| v != w).map(move |v| json!([w, v])))
        .collect();
    let n: Map<String, Value> = f
        .table
        .iter()
        .enumerate()
        .map(|(x, y)| (x.to_string(), json!(y.0)))
        .collect();
    json!({ "worlds": f.size(), "rel": rel, "N": n })
}

fn json_err(e: crate::frames::FrameError) -> ModalError {
    ModalError::Json(e.to_string())
}

fn table_from_json(v: &Value, size: usize) -> Result<Vec<Bits>, ModalError> {
    if size > MAX_MODAL_WORLDS {
        return Err(ModalError::TooManyWorlds(size));
    }
    let map = mask_map(v.get("N").ok_or_else(|| ModalError::Json("missing \"N\"".into()))?, "N")
        .map_err(json_err)?;
    (0..1u64 << size)
        .map(|x| {
            map.get(&Bits(x))
                .copied()
                .ok_or_else(|| ModalError::Json(format!("N has no entry for subset {x}")))
        })
        .collect()
}

pub fn ns4_frame_from_json(v: &Value) -> Result<NS4Frame, ModalError> {
    let size = as_usize(v.get("worlds").ok_or_else(|| ModalError::Json("missing \"worlds\"".into()))?, "worlds")
        .map_err(json_err)?;
    let rel = match v.get("rel") {
        Some(r) => pairs(r, "rel").map_err(json_err)?,
        None => Vec::new(),
    };
    let up = NS4Frame::preorder(size, &rel)?;
    NS4Frame::new(up, table_from_json(v, size)?)
}

pub fn modal_nframe_from_json(v: &Value) -> Result<ModalNFrame, ModalError> {
    let size = as_usize(v.get("worlds").ok_or_else(|| ModalError::Json("missing \"worlds\"".into()))?, "worlds")
        .map_err(json_err)?;
    ModalNFrame::new(size, table_from_json(v, size)?)
}

pub fn modal_nframe_to_json(f: &ModalNFrame) -> Value {
    let n: Map<String, Value> = f
        .table
        .iter()
        .enumerate()
        .map(|(x, y)| (x.to_string(), json!(y.0)))
        .collect();
    json!({ "worlds": f.size, "N": n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::nframe::tests::two_point;
    use crate::frames::{ntables, unlabeled_posets, Poset};
    use crate::syntax::parse_modal;

    fn m(s: &str) -> ModalFormula {
        parse_modal(s).unwrap()
    }

    fn all_ns4_frames(size: usize) -> Vec<NS4Frame> {
        let mut out = Vec::new();
        for up in preorders(size) {
            for_each_ns4_frame(&up, |f| {
                out.push(f);
                true
            });
        }
        out
    }

    /// Brute force: every map `P(W) → U(W)` checked against the definition.
    fn brute_ns4_count(up: &[Bits]) -> usize {
        let n = up.len();
        let upsets: Vec<Bits> = (0..1u64 << n)
            .map(Bits)
            .filter(|&x| x.iter().all(|w| up[w].is_subset(x)))
            .collect();
        let subsets = 1usize << n;
        let mut count = 0;
        let mut idx = vec![0usize; subsets];
        loop {
            let table: Vec<Bits> = idx.iter().map(|&i| upsets[i]).collect();
            if ns4_check_frame(&NS4Frame { up: up.to_vec(), table }).is_ok() {
                count += 1;
            }
            let mut k = 0;
            while k < subsets {
                idx[k] += 1;
                if idx[k] < upsets.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == subsets {
                return count;
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force_on_two_worlds() {
        for up in preorders(2) {
            let mut count = 0;
            for_each_ns4_frame(&up, |f| {
                assert_eq!(ns4_check_frame(&f), Ok(()));
                count += 1;
                true
            });
            assert_eq!(count, brute_ns4_count(&up), "{up:?}");
        }
        assert_eq!(preorders(3).len(), 29);
    }

    #[test]
    fn frame_checks() {
        let up = NS4Frame::preorder(2, &[(0, 1)]).unwrap();
        assert!(NS4Frame::from_fn(up.clone(), |_| Bits(0b11)).is_ok());
        // {0} is not upward closed.
        assert!(matches!(
            NS4Frame::from_fn(up.clone(), |_| Bits(0b01)),
            Err(ModalError::NotUpset { .. })
        ));
        // World 1 sees only itself, so it cannot tell {0, 1} from {1}.
        assert!(matches!(
            NS4Frame::from_fn(up, |x| if x == Bits(0b11) { Bits(0b10) } else { Bits(0) }),
            Err(ModalError::Locality { .. })
        ));
    }

    #[test]
    fn evaluation() {
        let up = NS4Frame::preorder(2, &[]).unwrap();
        let fr = NS4Frame::from_fn(up, |x| if x.contains(1) { Bits(0) } else { Bits(0b10) }).unwrap();
        let model = NS4Model {
            frame: fr.clone(),
            valuation: BTreeMap::from([("p".to_owned(), Bits(0b01))]),
        };
        assert_eq!(ns4_eval(&model, &m("[]T")), Bits(0b11));
        assert_eq!(ns4_eval(&model, &m("[n]p")), Bits(0b10));
        assert_eq!(ns4_eval(&model, &m("~p")), Bits(0b10));
        assert!(!ns4_frame_validates(&fr, &m("[n]p -> p")));
        let (val, w) = ns4_refutation(&fr, &m("[n]p -> p")).unwrap();
        let model = NS4Model { frame: fr.clone(), valuation: val };
        assert!(!ns4_eval(&model, &m("[n]p -> p")).contains(w));
        assert_eq!(ns4_refutation(&fr, &m("[]p -> p")), None);
    }

    #[test]
    fn axioms_are_valid_on_small_frames() {
        let axioms = [
            "[](p -> q) -> []p -> []q",
            "[]p -> p",
            "[]p -> [][]p",
            "[](p <-> q) -> ([n]p <-> [n]q)",
            "[n]p -> [][n]p",
        ]
        .map(m);
        for f in all_ns4_frames(2) {
            for a in &axioms {
                assert!(ns4_frame_validates(&f, a), "{a}");
            }
        }
        let refuted = all_ns4_frames(2).iter().any(|f| !ns4_frame_validates(f, &m("[n]p -> p")));
        assert!(refuted);
    }

    #[test]
    fn lift_extends_n() {
        for n in 1..=3 {
            for p in unlabeled_posets(n) {
                for fr in ntables(&p) {
                    let l = lift_nstar(&fr);
                    for &x in fr.upsets() {
                        assert_eq!(l.n(x), fr.n(x));
                    }
                }
            }
        }
        // No upset agrees with {0} on the whole chain, so only the top qualifies.
        let full = NFrame::constant(Poset::chain(2), Bits(0b11)).unwrap();
        assert_eq!(lift_nstar(&full).n(Bits(0b01)), Bits(0b10));
    }

    #[test]
    fn lift_of_two_point_frame() {
        // w = 0 < v = 1; N(∅) = {v}, N({v}) = W, N(W) = {v}.
        let l = lift_nstar(&two_point());
        // {w} agrees with ∅ above v but with no upset at w.
        assert_eq!(l.n(Bits(0b01)), Bits(0b10));
        assert_eq!(l.n(Bits(0)), Bits(0b10));
    }

    #[test]
    fn translation_on_two_point_model() {
        let fr = two_point();
        for q in fr.upsets().to_vec() {
            let model = NModel::new(fr.clone(), BTreeMap::from([("p".to_owned(), q)])).unwrap();
            for s in ["~p", "~~p -> p", "(p -> ~p) -> ~p", "p | ~p", "T"] {
                assert_eq!(translation_preservation(&model, &crate::syntax::parse_prop(s).unwrap()), Ok(()));
            }
        }
    }

    fn brute_en(f: &ModalNFrame, n: usize) -> bool {
        let subsets = 1usize << f.size;
        let tuples = subsets.pow(n as u32);
        (0..tuples).all(|t| {
            let mut m = Bits::full(f.size);
            let mut t = t;
            for _ in 0..n {
                m = m & f.n(Bits((t % subsets) as u64));
                t /= subsets;
            }
            (0..subsets as u64).all(|x| f.n(Bits(x)) & m == f.n(Bits(x) & m) & m)
        })
    }

    #[test]
    fn en_matches_definition_and_rules() {
        for code in 0..256u64 {
            let f = ModalNFrame::from_fn(2, |x| Bits(code >> (2 * x.0) & 3)).unwrap();
            for n in 0..=2 {
                let e = en_check(&f, n);
                assert_eq!(e, brute_en(&f, n));
                assert_eq!(e, rn_validity(&f, n), "table {code} n {n}");
            }
        }
        let constant = ModalNFrame::from_fn(3, |_| Bits(0b101)).unwrap();
        assert!(en_check(&constant, 2) && rn_validity(&constant, 2));
    }

    #[test]
    fn e1_failure_has_the_expected_witness() {
        // N(∅) = N(W) = {0}, otherwise ∅; take Z = ∅, X = W.
        let f = ModalNFrame::from_fn(2, |x| if x == Bits(0) || x == Bits(0b11) { Bits(0b01) } else { Bits(0) }).unwrap();
        assert!(!en_check(&f, 1));
        let (z, x) = (Bits(0), Bits(0b11));
        let nz = f.n(z);
        let val = BTreeMap::from([
            ("p1".to_owned(), z),
            ("q".to_owned(), x),
            ("r".to_owned(), x & nz),
        ]);
        let (premise, conclusion) = rn_rule(1);
        assert!(f.model_validates(&val, &premise));
        assert!(!f.model_validates(&val, &conclusion));
        assert!(!rn_validity(&f, 1));
    }

    #[test]
    fn cos4_frames() {
        let up = NS4Frame::preorder(2, &[(0, 1)]).unwrap();
        let constant = NS4Frame::from_fn(up.clone(), |_| Bits(0b10)).unwrap();
        assert_eq!(cos4_check_frame(&constant), Ok(()));
        let anti = m("[](p -> q) -> [n]q -> [n]p");
        let mut antitone = 0;
        for up in preorders(2) {
            for_each_ns4_frame(&up, |f| {
                let ok = cos4_check_frame(&f).is_ok();
                let brute = (0..4u64).all(|y| (0..4u64).all(|x| x & y != x || f.n(Bits(y)).is_subset(f.n(Bits(x)))))
                    && (0..2).all(|w| (0..2).all(|v| w == v || !(f.leq(w, v) && f.leq(v, w))));
                assert_eq!(ok, brute);
                if ok {
                    antitone += 1;
                    assert!(ns4_frame_validates(&f, &anti));
                }
                true
            });
        }
        assert!(antitone > 0);
        let cluster = NS4Frame::preorder(2, &[(0, 1), (1, 0)]).unwrap();
        let f = NS4Frame::from_fn(cluster, |_| Bits(0)).unwrap();
        assert!(matches!(cos4_check_frame(&f), Err(ModalError::NotAntisymmetric(..))));
    }

    #[test]
    fn json_round_trip() {
        let up = NS4Frame::preorder(2, &[(0, 1)]).unwrap();
        let f = NS4Frame::from_fn(up, |x| if x.contains(1) { Bits(0b11) } else { Bits(0b10) }).unwrap();
        let v = ns4_frame_to_json(&f);
        assert_eq!(v["rel"], json!([[0, 1]]));
        assert_eq!(ns4_frame_from_json(&v).unwrap(), f);
        let g = ModalNFrame::from_fn(1, |x| x).unwrap();
        assert_eq!(modal_nframe_from_json(&modal_nframe_to_json(&g)).unwrap(), g);
    }
}
