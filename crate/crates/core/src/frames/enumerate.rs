//! Exhaustive enumeration of small posets and of all N-tables on a poset.

use std::collections::HashMap;

use crate::bits::Bits;

use super::{NFrame, Poset};

/// Index of the bit recording `i <= j` in a poset's order code.
#[cfg(test)]
fn code_bit(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// The order code: bit `i*n + j` set iff `i < j` (strictly).
#[cfg(test)]
fn leq_code(p: &Poset) -> u64 {
    let n = p.size();
    assert!(n <= 8, "order codes are only defined up to 8 worlds");
    p.leq_pairs()
        .into_iter()
        .fold(0u64, |acc, (i, j)| acc | 1 << code_bit(n, i, j))
}

/// Every partial order on `0..n`, in increasing order of the order code
/// (bit `i*n + j` set iff `i < j`).
///
/// Filters all `2^(n(n-1))` off-diagonal relations, so intended for `n <= 5`.
pub fn labeled_posets(n: usize) -> Vec<Poset> {
    assert!(n <= 5, "labeled poset enumeration is limited to 5 worlds");
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for m in 0u64..(1u64 << slots.len()) {
        let mut up: Vec<Bits> = (0..n).map(Bits::singleton).collect();
        for (k, &(i, j)) in slots.iter().enumerate() {
            if m >> k & 1 == 1 {
                up[i] = up[i].with(j);
            }
        }
        if let Ok(p) = Poset::from_up(up) {
            out.push(p);
        }
    }
    out
}

/// One representative of every isomorphism class of posets with `n` elements,
/// each naturally labelled (`i <= j` implies `i <= j` as integers).
pub fn unlabeled_posets(n: usize) -> Vec<Poset> {
    let mut reps: Vec<Poset> = Vec::new();
    let mut buckets: HashMap<Vec<(usize, usize)>, Vec<usize>> = HashMap::new();
    let mut grow = |p: Poset| {
        let mut sig: Vec<(usize, usize)> = (0..p.size())
            .map(|w| (p.up(w).len(), p.down(w).len()))
            .collect();
        sig.sort_unstable();
        let bucket = buckets.entry(sig).or_default();
        if bucket.iter().all(|&k| reps[k].isomorphism(&p).is_none()) {
            bucket.push(reps.len());
            reps.push(p);
        }
    };
    natural_rec(n, Vec::new(), &mut grow);
    reps
}

/// Adds elements one at a time as new maximal points above a downset.
fn natural_rec<F: FnMut(Poset)>(n: usize, downs: Vec<Bits>, emit: &mut F) {
    let k = downs.len();
    if k == n {
        let mut up = vec![Bits::EMPTY; n];
        for (v, &d) in downs.iter().enumerate() {
            for u in d {
                up[u] = up[u].with(v);
            }
        }
        emit(Poset::from_up_unchecked(up));
        return;
    }
    let prev = Poset::from_up_unchecked({
        let mut up = vec![Bits::EMPTY; k];
        for (v, &d) in downs.iter().enumerate() {
            for u in d {
                up[u] = up[u].with(v);
            }
        }
        up
    });
    for d in prev.downsets() {
        let mut next = downs.clone();
        next.push(d.with(k));
        natural_rec(n, next, emit);
    }
}

/// Every N-frame on `p`, in the order of [`for_each_ntable`].
pub fn ntables(p: &Poset) -> Vec<NFrame> {
    let mut out = Vec::new();
    for_each_ntable(p, |fr| {
        out.push(fr);
        true
    });
    out
}

/// Calls `emit` on every N-frame on `p` until it returns `false`; returns
/// whether the enumeration ran to completion.
///
/// A table is determined by local choices: for each world `w`, which upsets
/// `Z ⊆ R(w)` have `w ∈ N(Z)`; then `N(X) = {w : X ∩ R(w) chosen at w}`.
/// Upward closure of `N(X)` requires a choice at `w` to persist at every
/// `v >= w`, which is enforced by deciding maximal worlds first. Choices at a
/// world run through the subsets of its admissible upsets in increasing
/// bitmask order (over the admissible list), earlier worlds varying slowest;
/// the order is fixed for a given poset.
pub fn for_each_ntable<F: FnMut(NFrame) -> bool>(p: &Poset, mut emit: F) -> bool {
    let n = p.size();
    let upsets = p.upsets();
    let local: Vec<Vec<Bits>> = (0..n)
        .map(|w| upsets.iter().copied().filter(|x| x.is_subset(p.up(w))).collect())
        .collect();
    let mut order = p.linear_extension();
    order.reverse();
    let mut st = TableSearch {
        p,
        upsets: &upsets,
        local: &local,
        order: &order,
        chosen: vec![Vec::new(); n],
    };
    st.run(0, &mut emit)
}

struct TableSearch<'a> {
    p: &'a Poset,
    upsets: &'a [Bits],
    local: &'a [Vec<Bits>],
    order: &'a [usize],
    chosen: Vec<Vec<Bits>>,
}

impl TableSearch<'_> {
    fn run<F: FnMut(NFrame) -> bool>(&mut self, k: usize, emit: &mut F) -> bool {
        let p = self.p;
        if k == self.order.len() {
            let table = self
                .upsets
                .iter()
                .map(|&x| {
                    (0..p.size())
                        .filter(|&w| self.chosen[w].binary_search(&(x & p.up(w))).is_ok())
                        .collect()
                })
                .collect();
            return emit(NFrame::from_parts(p.clone(), self.upsets.to_vec(), table));
        }
        let w = self.order[k];
        let allowed: Vec<Bits> = self.local[w]
            .iter()
            .copied()
            .filter(|&z| {
                p.up(w)
                    .without(w)
                    .iter()
                    .all(|v| self.chosen[v].binary_search(&(z & p.up(v))).is_ok())
            })
            .collect();
        assert!(allowed.len() < 64, "too many local choices at world {w}");
        for m in 0u64..(1u64 << allowed.len()) {
            self.chosen[w] = Bits(m).iter().map(|i| allowed[i]).collect();
            if !self.run(k + 1, emit) {
                return false;
            }
        }
        self.chosen[w].clear();
        true
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::frames::check_nframe;

    #[test]
    fn poset_counts() {
        let labeled: Vec<usize> = (0..=4).map(|n| labeled_posets(n).len()).collect();
        assert_eq!(labeled, vec![1, 1, 3, 19, 219]);
        let unlabeled: Vec<usize> = (1..=5).map(|n| unlabeled_posets(n).len()).collect();
        assert_eq!(unlabeled, vec![1, 2, 5, 16, 63]);
    }

    #[test]
    fn labeled_posets_are_in_code_order() {
        let ps = labeled_posets(3);
        let codes: Vec<u64> = ps.iter().map(leq_code).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(codes[0], 0);
    }

    /// Oracle: every map from upsets to upsets, filtered by `check_nframe`.
    fn brute_tables(p: &Poset) -> Vec<Vec<Bits>> {
        let ups = p.upsets();
        let k = ups.len();
        let mut out = Vec::new();
        let total = k.pow(k as u32);
        for mut i in 0..total {
            let mut vals = vec![Bits::EMPTY; k];
            for v in vals.iter_mut().rev() {
                *v = ups[i % k];
                i /= k;
            }
            let table: BTreeMap<Bits, Bits> = ups.iter().copied().zip(vals.iter().copied()).collect();
            if check_nframe(p, &table).is_ok() {
                out.push(vals);
            }
        }
        out
    }

    #[test]
    fn ntable_counts_on_antichains() {
        // On an antichain each world independently picks membership in N(∅_w), N({w}).
        for n in 1..=3 {
            assert_eq!(ntables(&Poset::antichain(n)).len(), 4usize.pow(n as u32));
        }
    }

    #[test]
    fn ntables_match_brute_force() {
        for n in 1..=3 {
            for p in labeled_posets(n) {
                if p.upsets().len() > 6 {
                    continue;
                }
                let mut got: Vec<Vec<Bits>> =
                    ntables(&p).iter().map(|f| f.table_values().to_vec()).collect();
                got.sort();
                assert_eq!(got, brute_tables(&p), "{p:?}");
            }
        }
    }
}
