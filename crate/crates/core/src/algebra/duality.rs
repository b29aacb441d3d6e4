//! Prime-filter duality between finite N-algebras and finite topped frames.
//!
//! Prime filters need not be proper, so the whole algebra is always a world
//! and is the top of the dual frame. A finite frame with a top `t` is read as
//! a general frame whose admissible sets are its nonempty upsets; `N` must
//! send these to nonempty upsets, and its value on `∅` plays no role.

use crate::bits::Bits;
use crate::frames::{ntables, unlabeled_posets, NFrame, Poset};

use super::{check_nalgebra, AlgebraError, NAlgebra};

/// A finite frame with a greatest world contained in every `N(X)`, `X ≠ ∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopFrame {
    frame: NFrame,
    top: usize,
}

impl TopFrame {
    pub fn new(frame: NFrame) -> Result<TopFrame, AlgebraError> {
        let top = frame
            .poset()
            .top()
            .ok_or_else(|| AlgebraError::NotTopFrame("no greatest world".into()))?;
        for (x, y) in frame.upsets().iter().zip(frame.table_values()) {
            if !x.is_empty() && !y.contains(top) {
                return Err(AlgebraError::NotTopFrame(format!("N({x}) = {y} misses the top")));
            }
        }
        Ok(TopFrame { frame, top })
    }

    pub fn frame(&self) -> &NFrame {
        &self.frame
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Nonempty upsets, in the order of [`NFrame::upsets`].
    pub fn admissible(&self) -> Vec<Bits> {
        self.frame.upsets().iter().copied().filter(|x| !x.is_empty()).collect()
    }

    /// The algebra of admissible sets, indexed as in [`TopFrame::admissible`].
    pub fn algebra(&self) -> NAlgebra {
        let carrier: Vec<u64> = self.admissible().iter().map(|x| x.0).collect();
        let p = self.frame.poset();
        NAlgebra::from_sets(
            &carrier,
            |x, y| p.imp(Bits(x), Bits(y)).0,
            |x| self.frame.n(Bits(x)).0,
        )
    }

    /// An order isomorphism onto `other` preserving `N` on admissible sets.
    pub fn isomorphism(&self, other: &TopFrame) -> Option<Vec<usize>> {
        let adm = self.admissible();
        self.frame.poset().find_isomorphism(other.frame.poset(), |map| {
            let img = |x: Bits| -> Bits { x.iter().map(|w| map[w]).collect() };
            adm.iter()
                .all(|&x| other.frame.n(img(x)) == img(self.frame.n(x)))
        })
    }
}

/// All prime filters of `a` as element bitmasks: `↑j` for each
/// join-irreducible `j`, then the improper filter.
pub fn prime_filters(a: &NAlgebra) -> Vec<u64> {
    let n = a.size;
    let up = |j: usize| -> u64 { (0..n).filter(|&x| a.leq(j, x)).fold(0, |m, x| m | 1 << x) };
    let bottom = a.bottom();
    let mut out: Vec<u64> = (0..n)
        .filter(|&j| {
            j != bottom && {
                let below = (0..n)
                    .filter(|&x| x != j && a.leq(x, j))
                    .fold(bottom, |acc, x| a.join[acc][x]);
                below != j
            }
        })
        .map(up)
        .collect();
    out.push(if n == 64 { u64::MAX } else { (1 << n) - 1 });
    out
}

/// The dual frame of an algebra, together with its worlds as filters.
#[derive(Clone, Debug)]
pub struct DualFrame {
    pub top_frame: TopFrame,
    /// `filters[w]`: the elements belonging to world `w`.
    pub filters: Vec<u64>,
}

impl DualFrame {
    /// `â`: the worlds containing `a`.
    pub fn hat(&self, a: usize) -> Bits {
        self.filters
            .iter()
            .enumerate()
            .filter(|(_, f)| *f >> a & 1 == 1)
            .map(|(w, _)| w)
            .collect()
    }
}

/// Prime filters ordered by inclusion, with
/// `N(X) = {w : some ~a ∈ w has R(w) ∩ â = R(w) ∩ X}`.
pub fn dual_frame(a: &NAlgebra) -> Result<DualFrame, AlgebraError> {
    check_nalgebra(a)?;
    let filters = prime_filters(a);
    let k = filters.len();
    let up: Vec<Bits> = (0..k)
        .map(|w| (0..k).filter(|&v| filters[w] & filters[v] == filters[w]).collect())
        .collect();
    let poset = Poset::from_up(up).expect("inclusion of distinct filters is a partial order");
    let mut dual = DualFrame {
        top_frame: TopFrame {
            frame: NFrame::constant(poset.clone(), Bits::EMPTY).expect("constant empty table"),
            top: k - 1,
        },
        filters,
    };
    let hats: Vec<Bits> = (0..a.size).map(|x| dual.hat(x)).collect();
    let frame = NFrame::from_fn(poset.clone(), |x| {
        (0..k)
            .filter(|&w| {
                let r = poset.up(w);
                (0..a.size).any(|b| dual.filters[w] >> a.neg[b] & 1 == 1 && hats[b] & r == x & r)
            })
            .collect()
    })
    .expect("dual neighbourhood function is local");
    dual.top_frame = TopFrame::new(frame).expect("improper filter is the top");
    Ok(dual)
}

/// `F ≅ F_{A_F}`, and `N_A(â) = (~a)^` in the dual of `A_F`.
pub fn frame_duality_check(tf: &TopFrame) -> bool {
    let alg = tf.algebra();
    let Ok(dual) = dual_frame(&alg) else {
        return false;
    };
    negation_commutes_with_hat(&alg, &dual) && dual.top_frame.isomorphism(tf).is_some()
}

/// `A ≅ A_{F_A}`: `a ↦ â` is an isomorphism and a brute-force search finds one.
pub fn algebra_duality_check(a: &NAlgebra) -> bool {
    let Ok(dual) = dual_frame(a) else {
        return false;
    };
    if !negation_commutes_with_hat(a, &dual) {
        return false;
    }
    let b = dual.top_frame.algebra();
    let carrier = dual.top_frame.admissible();
    let alpha: Option<Vec<usize>> = (0..a.size)
        .map(|x| carrier.iter().position(|&y| y == dual.hat(x)))
        .collect();
    let Some(alpha) = alpha else {
        return false;
    };
    let mut seen = alpha.clone();
    seen.sort_unstable();
    seen.dedup();
    let homomorphism = seen.len() == b.size
        && alpha[a.one] == b.one
        && (0..a.size).all(|x| {
            b.neg[alpha[x]] == alpha[a.neg[x]]
                && (0..a.size).all(|y| {
                    b.meet[alpha[x]][alpha[y]] == alpha[a.meet[x][y]]
                        && b.join[alpha[x]][alpha[y]] == alpha[a.join[x][y]]
                        && b.imp[alpha[x]][alpha[y]] == alpha[a.imp[x][y]]
                })
        });
    homomorphism && a.isomorphism(&b).is_some()
}

fn negation_commutes_with_hat(a: &NAlgebra, dual: &DualFrame) -> bool {
    (0..a.size).all(|x| dual.top_frame.frame.n(dual.hat(x)) == dual.hat(a.neg[x]))
}

/// Whether `a` has a second greatest element: some `s ≠ 1` above every `x ≠ 1`.
pub fn subdirectly_irreducible(a: &NAlgebra) -> bool {
    (0..a.size).any(|s| s != a.one && (0..a.size).all(|x| x == a.one || a.leq(x, s)))
}

/// Top frames on posets with at most `max_worlds` worlds, one per poset
/// isomorphism class and admissible table; `N(∅)` is taken to be `∅`.
pub fn top_frames(max_worlds: usize) -> Vec<TopFrame> {
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        for p in unlabeled_posets(n).into_iter().filter(|p| p.top().is_some()) {
            out.extend(
                ntables(&p)
                    .into_iter()
                    .filter(|fr| fr.n(Bits::EMPTY).is_empty())
                    .filter_map(|fr| TopFrame::new(fr).ok()),
            );
        }
    }
    out
}
