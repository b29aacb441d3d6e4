//! Decision procedures.
//!
//! N: a formula fails in some N-model iff it fails in the filtration of that
//! model through its subformulas, whose worlds are sets of subformulas
//! ("types") ordered by inclusion. Rather than enumerating frames up to
//! `2^|Σ|` worlds, we decide which types can occur in such a quotient. A type
//! is fixed by its implications, negations and variables; it is realizable
//! when it is locally consistent and each of its demands is met by a
//! realizable type above it:
//!
//! * `a -> b` absent: some type above contains `a` but not `b`;
//! * `~a` present, `~b` absent: some type above separates `a` from `b`
//!   (otherwise locality would force `~b`).
//!
//! Realizable types are computed by dynamic programming over supersets, and a
//! countermodel is extracted from them and re-checked by evaluation.
//!
//! MPC: `~φ` is read as `φ -> f` for a fresh variable `f`, which reduces the
//! question to the positive fragment decided as above.
//!
//! NeF and CoPC: theoremhood is certified by deriving the formula in N from
//! instances of the axiom; otherwise a bounded countermodel search runs and a
//! negative result is reported as such, never as a theorem.

use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use thiserror::Error;

use crate::bits::Bits;
use crate::frames::{
    countermodel_search_with, eval, Countermodel, LogicId, NFrame, NModel, Poset, SearchConfig,
    SearchError,
};
use crate::syntax::{fresh_var, subformula_closure, Dag, Formula, Node};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A theorem; for NeF and CoPC `instances` lists the axiom instances
    /// from which the formula follows in N.
    Theorem { instances: Vec<Formula> },
    Refuted(Countermodel),
    /// No countermodel with at most `max_worlds` worlds; not a theoremhood claim.
    NoCountermodelUpToBound { max_worlds: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("formula has {size} implications, negations and variables; the limit is {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("extracted countermodel has {0} worlds, more than can be represented")]
    CountermodelTooLarge(usize),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Clone, Debug)]
pub struct DecideConfig {
    /// Limit on the number of implication, negation and variable subformulas;
    /// the type space has `2^max_base` elements.
    pub max_base: usize,
    pub search: SearchConfig,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            max_base: 20,
            search: SearchConfig::new(4),
        }
    }
}

pub fn decide(l: LogicId, f: &Formula) -> Result<Verdict, DecideError> {
    decide_with(l, f, &DecideConfig::default())
}

pub fn decide_with(l: LogicId, f: &Formula, cfg: &DecideConfig) -> Result<Verdict, DecideError> {
    match l {
        LogicId::N => Ok(match refute_in_n(f, cfg)? {
            Some(c) => Verdict::Refuted(c),
            None => Verdict::Theorem { instances: vec![] },
        }),
        LogicId::Mpc => decide_mpc(f, cfg),
        LogicId::NeF | LogicId::CoPC => decide_by_instances(l, f, cfg),
    }
}

fn decide_mpc(f: &Formula, cfg: &DecideConfig) -> Result<Verdict, DecideError> {
    let bot = fresh_var(f, "f");
    let positive = f.negation_as_implication(&bot);
    let Some(c) = refute_in_n(&positive, cfg)? else {
        return Ok(Verdict::Theorem { instances: vec![] });
    };
    let p = c.model.frame.poset().clone();
    let fv = c.model.value(&bot);
    let frame = NFrame::from_fn(p.clone(), |x| p.imp(x, fv)).expect("X -> F is local");
    let mut valuation = c.model.valuation;
    valuation.remove(&bot);
    let model = NModel::new(frame, valuation).expect("valuation unchanged");
    assert!(!eval(&model, f).contains(c.world), "MPC countermodel re-check");
    Ok(Verdict::Refuted(Countermodel {
        model,
        world: c.world,
    }))
}

/// Instances of the axiom of `l` over the arguments of negations in `f`.
fn axiom_instances(l: LogicId, f: &Formula) -> Vec<Formula> {
    let args: Vec<Formula> = subformula_closure(f)
        .into_iter()
        .filter_map(|g| match g {
            Formula::Neg(a) => Some(*a),
            _ => None,
        })
        .collect();
    let mut out = Vec::new();
    for a in &args {
        for b in &args {
            if a == b {
                continue;
            }
            let map = BTreeMap::from([("p".to_owned(), a.clone()), ("q".to_owned(), b.clone())]);
            out.push(l.axiom().substitute(&map));
        }
    }
    out
}

fn decide_by_instances(l: LogicId, f: &Formula, cfg: &DecideConfig) -> Result<Verdict, DecideError> {
    if refute_in_n(f, cfg)?.is_none() {
        return Ok(Verdict::Theorem { instances: vec![] });
    }
    let instances = axiom_instances(l, f);
    let mut attempts: Vec<Vec<Formula>> = instances.iter().map(|i| vec![i.clone()]).collect();
    if instances.len() > 1 {
        attempts.push(instances.clone());
    }
    for hyps in attempts {
        let conj = hyps
            .iter()
            .cloned()
            .reduce(Formula::and)
            .expect("nonempty");
        match refute_in_n(&Formula::imp(conj, f.clone()), cfg) {
            Ok(None) => return Ok(Verdict::Theorem { instances: hyps }),
            Ok(Some(_)) | Err(DecideError::TooLarge { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    match countermodel_search_with(l, f, &cfg.search)? {
        Some(c) => Ok(Verdict::Refuted(c)),
        None => Ok(Verdict::NoCountermodelUpToBound {
            max_worlds: cfg.search.max_worlds,
        }),
    }
}

/// Membership of every closure node in the type with base bits `t`.
struct TypeSpace {
    dag: Dag,
    /// `slot[k]`: base bit of node `k` if it is a variable, implication or negation.
    slot: Vec<Option<usize>>,
    base: usize,
    imps: Vec<(usize, usize, usize)>,
    /// Pairs of negation nodes `(i, a, j, b)` with `i = ~a`, `j = ~b`, `i < j`.
    neg_pairs: Vec<(usize, usize, usize, usize)>,
}

#[derive(Clone, Copy)]
enum Demand {
    /// Some type above has `a` but not `b`.
    Imp(usize, usize),
    /// Some type above has exactly one of `a`, `b`.
    Sep(usize, usize),
}

impl Demand {
    #[inline]
    fn holds(self, full: u128) -> bool {
        match self {
            Demand::Imp(a, b) => full >> a & 1 == 1 && full >> b & 1 == 0,
            Demand::Sep(a, b) => (full >> a ^ full >> b) & 1 == 1,
        }
    }
}

impl TypeSpace {
    fn new(f: &Formula) -> TypeSpace {
        let dag = Dag::new(f);
        let mut slot = vec![None; dag.len()];
        let mut base = 0;
        let mut imps = Vec::new();
        let mut negs = Vec::new();
        for (k, node) in dag.nodes.iter().enumerate() {
            match *node {
                Node::Var(_) => {}
                Node::Imp(a, b) => imps.push((k, a, b)),
                Node::Neg(a) => negs.push((k, a)),
                _ => continue,
            }
            slot[k] = Some(base);
            base += 1;
        }
        let mut neg_pairs = Vec::new();
        for (x, &(i, a)) in negs.iter().enumerate() {
            for &(j, b) in &negs[x + 1..] {
                neg_pairs.push((i, a, j, b));
            }
        }
        TypeSpace {
            dag,
            slot,
            base,
            imps,
            neg_pairs,
        }
    }

    fn demands(&self) -> Vec<Demand> {
        let mut out: Vec<Demand> = self.imps.iter().map(|&(_, a, b)| Demand::Imp(a, b)).collect();
        out.extend(self.neg_pairs.iter().map(|&(_, a, _, b)| Demand::Sep(a, b)));
        out
    }

    fn full(&self, t: u64) -> u128 {
        let mut m: u128 = 0;
        for (k, node) in self.dag.nodes.iter().enumerate() {
            let v = match (*node, self.slot[k]) {
                (_, Some(s)) => t >> s & 1 == 1,
                (Node::Top, _) => true,
                (Node::And(a, b), _) => m >> a & m >> b & 1 == 1,
                (Node::Or(a, b), _) => (m >> a | m >> b) & 1 == 1,
                _ => unreachable!("base nodes have slots"),
            };
            if v {
                m |= 1 << k;
            }
        }
        m
    }

    fn consistent(&self, full: u128) -> bool {
        self.imps
            .iter()
            .all(|&(k, a, b)| full >> k & 1 == 0 || full >> a & 1 == 0 || full >> b & 1 == 1)
    }

    /// Indices into `demands()` that type `full` must meet.
    fn open_demands(&self, full: u128) -> impl Iterator<Item = usize> + '_ {
        let ni = self.imps.len();
        let imp = self
            .imps
            .iter()
            .enumerate()
            .filter(move |(_, &(k, _, _))| full >> k & 1 == 0)
            .map(|(d, _)| d);
        let neg = self
            .neg_pairs
            .iter()
            .enumerate()
            .filter(move |(_, &(i, _, j, _))| (full >> i ^ full >> j) & 1 == 1)
            .map(move |(d, _)| ni + d);
        imp.chain(neg)
    }
}

struct BitTable(Vec<u64>);

impl BitTable {
    fn new(len: usize) -> BitTable {
        BitTable(vec![0; len.div_ceil(64)])
    }
    #[inline]
    fn get(&self, i: u64) -> bool {
        self.0[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: u64) {
        self.0[(i >> 6) as usize] |= 1 << (i & 63);
    }
}

/// A countermodel to `f` in N, or `None` if `f` is a theorem of N.
pub(crate) fn refute_in_n(f: &Formula, cfg: &DecideConfig) -> Result<Option<Countermodel>, DecideError> {
    let ts = TypeSpace::new(f);
    if ts.base > cfg.max_base || ts.base > 30 || ts.dag.len() > 128 {
        return Err(DecideError::TooLarge {
            size: ts.base,
            limit: cfg.max_base.min(30),
        });
    }
    let demands = ts.demands();
    let size = 1usize << ts.base;
    let mut sat = BitTable::new(size);
    // reach[d][t]: some realizable type containing t meets demand d.
    let mut reach: Vec<BitTable> = demands.iter().map(|_| BitTable::new(size)).collect();
    let above = |reach: &BitTable, t: u64| -> bool {
        (0..ts.base).any(|i| t >> i & 1 == 0 && reach.get(t | 1 << i))
    };
    let root = ts.dag.len() - 1;
    let mut refuted_at = None;
    for t in (0..size as u64).rev() {
        if t & 0xfff == 0 && cfg.search.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SearchError::Timeout.into());
        }
        let full = ts.full(t);
        let ok = ts.consistent(full)
            && ts
                .open_demands(full)
                .all(|d| demands[d].holds(full) || above(&reach[d], t));
        if ok {
            sat.set(t);
            if full >> root & 1 == 0 {
                refuted_at = Some(t);
            }
        }
        for (d, dem) in demands.iter().enumerate() {
            if (ok && dem.holds(full)) || above(&reach[d], t) {
                reach[d].set(t);
            }
        }
    }
    let Some(t0) = refuted_at else {
        return Ok(None);
    };

    let mut worlds: Vec<u64> = vec![t0];
    let mut queue = VecDeque::from([t0]);
    while let Some(t) = queue.pop_front() {
        let full = ts.full(t);
        for d in ts.open_demands(full) {
            let dem = demands[d];
            if worlds.iter().any(|&u| u & t == t && dem.holds(ts.full(u))) {
                continue;
            }
            let mut cur = t;
            while !(sat.get(cur) && dem.holds(ts.full(cur))) {
                let i = (0..ts.base)
                    .find(|&i| cur >> i & 1 == 0 && reach[d].get(cur | 1 << i))
                    .expect("demand is met above");
                cur |= 1 << i;
            }
            worlds.push(cur);
            queue.push_back(cur);
            if worlds.len() > 20 {
                return Err(DecideError::CountermodelTooLarge(worlds.len()));
            }
        }
    }
    worlds.sort_unstable();
    let fulls: Vec<u128> = worlds.iter().map(|&t| ts.full(t)).collect();
    let n = worlds.len();
    let up = (0..n)
        .map(|i| (0..n).filter(|&j| worlds[i] & worlds[j] == worlds[i]).collect())
        .collect();
    let poset = Poset::from_up(up).expect("inclusion of distinct types is a partial order");
    let truth = |k: usize| -> Bits { (0..n).filter(|&i| fulls[i] >> k & 1 == 1).collect() };
    let negs: Vec<(usize, Bits)> = ts
        .dag
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(k, node)| match *node {
            Node::Neg(a) => Some((k, truth(a))),
            _ => None,
        })
        .collect();
    let frame = NFrame::from_fn(poset.clone(), |x| {
        (0..n)
            .filter(|&i| {
                let r = poset.up(i);
                negs.iter()
                    .any(|&(k, va)| fulls[i] >> k & 1 == 1 && x & r == va & r)
            })
            .collect()
    })
    .expect("type model is an N-frame");
    let valuation: BTreeMap<String, Bits> = ts
        .dag
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(k, node)| match *node {
            Node::Var(v) => Some((ts.dag.vars[v].clone(), truth(k))),
            _ => None,
        })
        .collect();
    let model = NModel::new(frame, valuation).expect("truth sets of types are upsets");
    let world = worlds.binary_search(&t0).expect("root type collected");
    assert!(!eval(&model, f).contains(world), "N countermodel re-check");
    Ok(Some(Countermodel { model, world }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{countermodel_search, frame_class};
    use crate::syntax::parse_prop;

    fn n_decide(s: &str) -> Verdict {
        decide(LogicId::N, &parse_prop(s).unwrap()).unwrap()
    }

    #[test]
    fn n_axiom_is_a_theorem() {
        assert_eq!(n_decide("(p <-> q) -> (~p <-> ~q)"), Verdict::Theorem { instances: vec![] });
        assert!(matches!(n_decide("p -> p"), Verdict::Theorem { .. }));
        assert!(matches!(n_decide("p & (p -> q) -> q"), Verdict::Theorem { .. }));
    }

    #[test]
    fn n_non_theorems_are_refuted() {
        for s in ["p | (p -> q)", "~p -> ~~~p", "p & ~p -> ~q", "((p -> q) -> p) -> p", "~(p & q) -> ~p"] {
            let f = parse_prop(s).unwrap();
            match decide(LogicId::N, &f).unwrap() {
                Verdict::Refuted(c) => assert!(!eval(&c.model, &f).contains(c.world), "{s}"),
                v => panic!("{s}: {v:?}"),
            }
        }
    }

    #[test]
    fn mpc_axiom_and_friends() {
        let mpc = |s: &str| decide(LogicId::Mpc, &parse_prop(s).unwrap()).unwrap();
        assert!(matches!(mpc("(p -> ~p) -> ~p"), Verdict::Theorem { .. }));
        assert!(matches!(mpc("(p -> q) -> ~q -> ~p"), Verdict::Theorem { .. }));
        assert!(matches!(mpc("p & ~p -> ~q"), Verdict::Theorem { .. }));
        match mpc("~~p -> p") {
            Verdict::Refuted(c) => {
                assert!(frame_class(&c.model.frame, LogicId::Mpc));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn class_axioms_are_certified() {
        let copc = LogicId::CoPC.axiom();
        match decide(LogicId::CoPC, &copc).unwrap() {
            Verdict::Theorem { instances } => assert_eq!(instances.len(), 1),
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            decide(LogicId::NeF, &LogicId::NeF.axiom()).unwrap(),
            Verdict::Theorem { .. }
        ));
        // Contraposition yields negative ex falso.
        assert!(matches!(
            decide(LogicId::CoPC, &LogicId::NeF.axiom()).unwrap(),
            Verdict::Theorem { .. }
        ));
    }

    #[test]
    fn nef_refutes_contraposition_on_two_worlds() {
        match decide(LogicId::NeF, &LogicId::CoPC.axiom()).unwrap() {
            Verdict::Refuted(c) => {
                assert_eq!(c.model.frame.size(), 2);
                assert!(frame_class(&c.model.frame, LogicId::NeF));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn copc_is_honest_about_bounds() {
        let mut cfg = DecideConfig::default();
        cfg.search.max_worlds = 2;
        // Peirce-like positive non-theorem with negation: refuted.
        let f = parse_prop("~~p -> p").unwrap();
        assert!(matches!(decide_with(LogicId::CoPC, &f, &cfg).unwrap(), Verdict::Refuted(_)));
    }

    #[test]
    fn agrees_with_bounded_search() {
        let fs = [
            "~p -> ~~~p",
            "~~~p -> ~p",
            "(p -> ~p) -> ~p",
            "~(p | q) -> ~p",
            "~p & ~q -> ~(p | q)",
            "p -> ~~p",
            "~T -> ~p",
        ];
        for s in fs {
            let f = parse_prop(s).unwrap();
            let search = countermodel_search(LogicId::N, &f, 3).unwrap();
            let verdict = decide(LogicId::N, &f).unwrap();
            match (&search, &verdict) {
                (Some(_), Verdict::Refuted(_)) | (None, Verdict::Theorem { .. }) => {}
                (None, Verdict::Refuted(c)) => assert!(c.model.frame.size() > 3, "{s}"),
                _ => panic!("{s}: search {search:?} vs {verdict:?}"),
            }
        }
    }

    #[test]
    fn size_limit_is_an_error() {
        let mut f = parse_prop("p0").unwrap();
        for i in 1..30 {
            f = Formula::imp(f, Formula::var(&format!("p{i}")));
        }
        assert!(matches!(decide(LogicId::N, &f), Err(DecideError::TooLarge { .. })));
    }
}
