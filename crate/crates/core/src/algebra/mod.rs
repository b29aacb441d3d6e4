//! Finite N-algebras: Heyting-residuated lattices with a compatible negation,
//! their prime-filter duals, and algebraic filtrations.

mod duality;
mod filtration;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::frames::{ntables, unlabeled_posets, NFrame};
use crate::syntax::Formula;

pub use duality::{
    algebra_duality_check, dual_frame, frame_duality_check, prime_filters, subdirectly_irreducible,
    top_frames, DualFrame, TopFrame,
};
pub use filtration::{
    general_algebraic_filtration, least_filtration_correspondence, sublattice_filtration,
    AlgebraicFiltration,
};

/// Elements are `0..size`; all operations are total tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NAlgebra {
    pub size: usize,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
    pub one: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("table '{0}' has the wrong shape or an entry out of range")]
    Shape(&'static str),
    #[error("lattice law fails at ({0}, {1}, {2})")]
    Lattice(usize, usize, usize),
    #[error("{0} is not the top element")]
    Top(usize),
    #[error("residuation fails: {a} & {b} <= {c} is not equivalent to {a} <= {b} -> {c}")]
    Residuation { a: usize, b: usize, c: usize },
    #[error("compatibility fails: {x} & ~{y} != {x} & ~({x} & {y})")]
    Compatibility { x: usize, y: usize },
    #[error("more than 64 elements")]
    TooLarge,
    #[error("{0} is not a top frame")]
    NotTopFrame(String),
    #[error("valuation sends '{0}' out of the sublattice")]
    OutsideSublattice(String),
    #[error("set is not a sublattice containing the unit")]
    NotSublattice,
    #[error("formula set is not closed under subformulas")]
    NotClosed,
}

impl NAlgebra {
    /// The algebra on `carrier` (distinct elements of a lattice of sets) with
    /// the given Heyting implication and negation.
    pub(crate) fn from_sets<I, N>(carrier: &[u64], imp: I, neg: N) -> NAlgebra
    where
        I: Fn(u64, u64) -> u64,
        N: Fn(u64) -> u64,
    {
        let index = |x: u64| {
            carrier
                .iter()
                .position(|&c| c == x)
                .expect("carrier closed under the operations")
        };
        let size = carrier.len();
        let table = |op: &dyn Fn(u64, u64) -> u64| -> Vec<Vec<usize>> {
            carrier
                .iter()
                .map(|&a| carrier.iter().map(|&b| index(op(a, b))).collect())
                .collect()
        };
        let full = carrier.iter().fold(0, |acc, &c| acc | c);
        NAlgebra {
            size,
            meet: table(&|a, b| a & b),
            join: table(&|a, b| a | b),
            imp: table(&imp),
            neg: carrier.iter().map(|&a| index(neg(a))).collect(),
            one: index(full),
        }
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    pub fn bottom(&self) -> usize {
        (0..self.size).fold(self.one, |acc, a| self.meet[acc][a])
    }

    /// Value of `f` under `mu`; variables missing from `mu` denote the bottom.
    pub fn eval(&self, f: &Formula, mu: &BTreeMap<String, usize>) -> usize {
        match f {
            Formula::Var(v) => mu.get(v).copied().unwrap_or_else(|| self.bottom()),
            Formula::Top => self.one,
            Formula::And(a, b) => self.meet[self.eval(a, mu)][self.eval(b, mu)],
            Formula::Or(a, b) => self.join[self.eval(a, mu)][self.eval(b, mu)],
            Formula::Imp(a, b) => self.imp[self.eval(a, mu)][self.eval(b, mu)],
            Formula::Neg(a) => self.neg[self.eval(a, mu)],
        }
    }

    /// An isomorphism onto `other` (`map[a]` is the image of `a`).
    pub fn isomorphism(&self, other: &NAlgebra) -> Option<Vec<usize>> {
        if self.size != other.size {
            return None;
        }
        let n = self.size;
        let below = |alg: &NAlgebra, a: usize| (0..alg.size).filter(|&b| alg.leq(b, a)).count();
        let sig_a: Vec<usize> = (0..n).map(|a| below(self, a)).collect();
        let sig_b: Vec<usize> = (0..n).map(|a| below(other, a)).collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            s: &NAlgebra,
            o: &NAlgebra,
            sa: &[usize],
            sb: &[usize],
            a: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if a == s.size {
                return (0..s.size).all(|x| {
                    o.neg[map[x]] == map[s.neg[x]]
                        && (0..s.size).all(|y| {
                            o.meet[map[x]][map[y]] == map[s.meet[x][y]]
                                && o.join[map[x]][map[y]] == map[s.join[x][y]]
                                && o.imp[map[x]][map[y]] == map[s.imp[x][y]]
                        })
                });
            }
            for b in 0..o.size {
                if used[b] || sa[a] != sb[b] || (a == s.one) != (b == o.one) {
                    continue;
                }
                let consistent = (0..a).all(|x| {
                    s.leq(x, a) == o.leq(map[x], b)
                        && s.leq(a, x) == o.leq(b, map[x])
                        && (s.neg[x] != a || o.neg[map[x]] == b)
                        && (s.neg[a] != x || o.neg[b] == map[x])
                });
                if !consistent || (s.neg[a] == a) != (o.neg[b] == b) {
                    continue;
                }
                map[a] = b;
                used[b] = true;
                if go(s, o, sa, sb, a + 1, map, used) {
                    return true;
                }
                used[b] = false;
            }
            map[a] = usize::MAX;
            false
        }
        go(self, other, &sig_a, &sig_b, 0, &mut map, &mut used).then_some(map)
    }
}

/// Verifies the lattice laws, that `one` is the top, residuation, and the
/// compatibility identity `x & ~y = x & ~(x & y)`.
pub fn check_nalgebra(a: &NAlgebra) -> Result<(), AlgebraError> {
    let n = a.size;
    if n == 0 || n > 64 {
        return Err(if n == 0 { AlgebraError::Shape("size") } else { AlgebraError::TooLarge });
    }
    let square = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|&x| x < n));
    for (name, t) in [("meet", &a.meet), ("join", &a.join), ("imp", &a.imp)] {
        if !square(t) {
            return Err(AlgebraError::Shape(name));
        }
    }
    if a.neg.len() != n || a.neg.iter().any(|&x| x >= n) {
        return Err(AlgebraError::Shape("neg"));
    }
    if a.one >= n {
        return Err(AlgebraError::Shape("one"));
    }
    let (m, j) = (&a.meet, &a.join);
    for x in 0..n {
        if m[x][x] != x || j[x][x] != x {
            return Err(AlgebraError::Lattice(x, x, x));
        }
        for y in 0..n {
            if m[x][y] != m[y][x] || j[x][y] != j[y][x] || m[x][j[x][y]] != x || j[x][m[x][y]] != x {
                return Err(AlgebraError::Lattice(x, y, y));
            }
            for z in 0..n {
                if m[m[x][y]][z] != m[x][m[y][z]] || j[j[x][y]][z] != j[x][j[y][z]] {
                    return Err(AlgebraError::Lattice(x, y, z));
                }
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| m[x][a.one] != x) {
        return Err(AlgebraError::Top(x));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if a.leq(m[x][y], z) != a.leq(x, a.imp[y][z]) {
                    return Err(AlgebraError::Residuation { a: x, b: y, c: z });
                }
            }
            if m[x][a.neg[y]] != m[x][a.neg[m[x][y]]] {
                return Err(AlgebraError::Compatibility { x, y });
            }
        }
    }
    Ok(())
}

/// The algebra of all upsets of `fr` (including the empty one), with elements
/// indexed as in [`NFrame::upsets`].
pub fn upset_algebra(fr: &NFrame) -> NAlgebra {
    let carrier: Vec<u64> = fr.upsets().iter().map(|x| x.0).collect();
    let p = fr.poset();
    NAlgebra::from_sets(
        &carrier,
        |x, y| p.imp(Bits(x), Bits(y)).0,
        |x| fr.n(Bits(x)).0,
    )
}

/// Upset algebras of all N-frames on posets with at most `max_worlds`
/// worlds, one per isomorphism class.
pub fn upset_algebra_corpus(max_worlds: usize) -> Vec<NAlgebra> {
    let mut out: Vec<NAlgebra> = Vec::new();
    for n in 1..=max_worlds {
        for p in unlabeled_posets(n) {
            for fr in ntables(&p) {
                let a = upset_algebra(&fr);
                if !out.iter().any(|b| b.isomorphism(&a).is_some()) {
                    out.push(a);
                }
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::frames::nframe::tests::two_point;
    use crate::frames::Poset;

    pub(crate) fn chain_algebra(neg: Vec<usize>) -> NAlgebra {
        let n = neg.len();
        NAlgebra {
            size: n,
            meet: (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect(),
            join: (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect(),
            imp: (0..n).map(|a| (0..n).map(|b| if a <= b { n - 1 } else { b }).collect()).collect(),
            neg,
            one: n - 1,
        }
    }

    #[test]
    fn every_negation_on_the_two_chain_is_compatible() {
        for n0 in 0..2 {
            for n1 in 0..2 {
                assert_eq!(check_nalgebra(&chain_algebra(vec![n0, n1])), Ok(()));
            }
        }
    }

    #[test]
    fn compatible_negations_on_three_chain_match_two_chain_frames() {
        // Upset algebras of the 2-chain frame are exactly the 3-chain algebras.
        let count = (0..27)
            .filter(|&c| check_nalgebra(&chain_algebra(vec![c % 3, c / 3 % 3, c / 9])).is_ok())
            .count();
        assert_eq!(count, ntables(&Poset::chain(2)).len());
    }

    #[test]
    fn two_point_algebra() {
        let a = upset_algebra(&two_point());
        assert_eq!(check_nalgebra(&a), Ok(()));
        // Upsets ∅, {v}, W as 0, 1, 2: a chain with ~0 = 1, ~1 = 2, ~2 = 1.
        assert_eq!(a.size, 3);
        assert_eq!(a.neg, vec![1, 2, 1]);
        assert!(a.leq(0, 1) && a.leq(1, 2));
        assert!(a.isomorphism(&chain_algebra(vec![1, 2, 1])).is_some());
        let single = upset_algebra(&NFrame::constant(Poset::chain(1), Bits(0)).unwrap());
        assert_eq!(single.size, 2);
    }

    #[test]
    fn upset_algebras_of_small_frames_are_n_algebras() {
        for n in 1..=3 {
            for p in unlabeled_posets(n) {
                for fr in ntables(&p) {
                    assert_eq!(check_nalgebra(&upset_algebra(&fr)), Ok(()));
                }
            }
        }
    }

    #[test]
    fn mutations_are_caught() {
        let good = upset_algebra(&two_point());
        let mut bad = good.clone();
        bad.imp[1][0] = 2;
        assert!(matches!(check_nalgebra(&bad), Err(AlgebraError::Residuation { .. })));
        let mut bad = chain_algebra(vec![0, 2, 0]);
        assert!(matches!(check_nalgebra(&bad), Err(AlgebraError::Compatibility { .. })));
        bad.meet[0][1] = 1;
        assert!(matches!(check_nalgebra(&bad), Err(AlgebraError::Lattice(..))));
        let mut bad = good;
        bad.neg.pop();
        assert_eq!(check_nalgebra(&bad), Err(AlgebraError::Shape("neg")));
    }

    #[test]
    fn json_round_trip() {
        let a = upset_algebra(&two_point());
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.starts_with(r#"{"size":3,"meet":"#));
        assert_eq!(serde_json::from_str::<NAlgebra>(&text).unwrap(), a);
    }

    #[test]
    fn corpus_is_deduplicated() {
        let corpus = upset_algebra_corpus(2);
        for (i, a) in corpus.iter().enumerate() {
            for b in &corpus[..i] {
                assert!(a.isomorphism(b).is_none());
            }
        }
        // The four negations on the 2-chain give pairwise distinct algebras.
        assert_eq!(corpus.iter().filter(|a| a.size == 2).count(), 4);
    }
}
