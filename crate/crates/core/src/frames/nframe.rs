use std::collections::BTreeMap;
use std::fmt;

use crate::bits::Bits;

use super::{FrameError, Poset};

/// A poset with a negation function `N` on its upsets satisfying locality:
/// `N(X) ∩ Y = N(X ∩ Y) ∩ Y` for all upsets `X`, `Y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NFrame {
    poset: Poset,
    upsets: Vec<Bits>,
    table: Vec<Bits>,
}

/// `n(w)` for each world `w`: the upsets `X` with `w ∈ N(X)`, in bitmask order.
pub type Neighbourhood = Vec<Vec<Bits>>;

impl NFrame {
    /// Validates `table` (total on upsets, upset-valued, local).
    pub fn new(poset: Poset, table: &BTreeMap<Bits, Bits>) -> Result<NFrame, FrameError> {
        check_nframe(&poset, table)?;
        let upsets = poset.upsets();
        let table = upsets.iter().map(|x| table[x]).collect();
        Ok(NFrame {
            poset,
            upsets,
            table,
        })
    }

    /// `N(X) := n(X)` for every upset `X`, validated.
    pub fn from_fn<F: Fn(Bits) -> Bits>(poset: Poset, n: F) -> Result<NFrame, FrameError> {
        let upsets = poset.upsets();
        let table: BTreeMap<Bits, Bits> = upsets.iter().map(|&x| (x, n(x))).collect();
        NFrame::new(poset, &table)
    }

    /// Table given in upset order, not validated.
    pub(crate) fn from_parts(poset: Poset, upsets: Vec<Bits>, table: Vec<Bits>) -> NFrame {
        debug_assert_eq!(upsets.len(), table.len());
        NFrame {
            poset,
            upsets,
            table,
        }
    }

    /// `N(X) = value` for every `X`; `value` must be an upset.
    pub fn constant(poset: Poset, value: Bits) -> Result<NFrame, FrameError> {
        NFrame::from_fn(poset, |_| value)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    /// All upsets, in bitmask order.
    pub fn upsets(&self) -> &[Bits] {
        &self.upsets
    }

    /// `N(X)` for each upset in [`NFrame::upsets`] order.
    pub fn table_values(&self) -> &[Bits] {
        &self.table
    }

    pub fn table(&self) -> BTreeMap<Bits, Bits> {
        self.upsets.iter().copied().zip(self.table.iter().copied()).collect()
    }

    /// `N(x)`. Panics if `x` is not an upset.
    #[inline]
    pub fn n(&self, x: Bits) -> Bits {
        match self.upsets.binary_search(&x) {
            Ok(i) => self.table[i],
            Err(_) => panic!("N applied to non-upset {x}"),
        }
    }

    pub fn upset_index(&self, x: Bits) -> Option<usize> {
        self.upsets.binary_search(&x).ok()
    }

    /// A poset isomorphism onto `other` that also carries `N` to `N'`.
    pub fn isomorphism(&self, other: &NFrame) -> Option<Vec<usize>> {
        self.poset.find_isomorphism(&other.poset, |map| {
            let img = |x: Bits| -> Bits { x.iter().map(|w| map[w]).collect() };
            self.upsets
                .iter()
                .zip(&self.table)
                .all(|(&x, &nx)| other.n(img(x)) == img(nx))
        })
    }
}

impl fmt::Debug for NFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NFrame")
            .field("poset", &self.poset)
            .field("N", &self.table())
            .finish()
    }
}

/// Validates a candidate N-table on `poset`.
pub fn check_nframe(poset: &Poset, table: &BTreeMap<Bits, Bits>) -> Result<(), FrameError> {
    for (&key, &value) in table {
        if !poset.is_upset(key) {
            return Err(FrameError::NotUpset(key));
        }
        if !poset.is_upset(value) {
            return Err(FrameError::ValueNotUpset { key, value });
        }
    }
    let upsets = poset.upsets();
    if let Some(x) = upsets.iter().find(|x| !table.contains_key(x)) {
        return Err(FrameError::MissingEntry(*x));
    }
    match locality_violation(&upsets, |x| table[&x]) {
        Some((x, y)) => Err(FrameError::Locality { x, y }),
        None => Ok(()),
    }
}

/// First pair `(X, Y)` of upsets (in bitmask order) with
/// `N(X) ∩ Y != N(X ∩ Y) ∩ Y`.
pub fn locality_violation<F: Fn(Bits) -> Bits>(upsets: &[Bits], n: F) -> Option<(Bits, Bits)> {
    for &x in upsets {
        let nx = n(x);
        for &y in upsets {
            if nx & y != n(x & y) & y {
                return Some((x, y));
            }
        }
    }
    None
}

/// First `(X, w)` with `w ∈ N(X)` differing from `w ∈ N(X ∩ R(w))`: the
/// pointwise form of locality.
pub fn footnote_violation<F: Fn(Bits) -> Bits>(
    poset: &Poset,
    upsets: &[Bits],
    n: F,
) -> Option<(Bits, usize)> {
    for &x in upsets {
        let nx = n(x);
        for w in 0..poset.size() {
            if nx.contains(w) != n(x & poset.up(w)).contains(w) {
                return Some((x, w));
            }
        }
    }
    None
}

pub fn to_neighbourhood(fr: &NFrame) -> Neighbourhood {
    (0..fr.size())
        .map(|w| {
            fr.upsets()
                .iter()
                .zip(fr.table_values())
                .filter(|(_, nx)| nx.contains(w))
                .map(|(&x, _)| x)
                .collect()
        })
        .collect()
}

/// Inverse of [`to_neighbourhood`]; requires each `n(w)` to consist of upsets,
/// `w <= v` to imply `n(w) ⊆ n(v)`, and `X ∈ n(w)` iff `X ∩ R(w) ∈ n(w)`.
pub fn from_neighbourhood(poset: Poset, nb: &Neighbourhood) -> Result<NFrame, FrameError> {
    let n = poset.size();
    if nb.len() != n {
        return Err(FrameError::WorldOutOfRange(nb.len()));
    }
    let upsets = poset.upsets();
    let mut member = vec![vec![false; upsets.len()]; n];
    for (w, family) in nb.iter().enumerate() {
        for &x in family {
            let i = upsets
                .binary_search(&x)
                .map_err(|_| FrameError::NotUpset(x))?;
            member[w][i] = true;
        }
    }
    for w in 0..n {
        for v in poset.up(w).without(w) {
            if (0..upsets.len()).any(|i| member[w][i] && !member[v][i]) {
                return Err(FrameError::Monotonicity { w, v });
            }
        }
        for (i, &x) in upsets.iter().enumerate() {
            let j = upsets.binary_search(&(x & poset.up(w))).expect("upsets closed under ∩");
            if member[w][i] != member[w][j] {
                return Err(FrameError::NeighbourhoodLocality { w, x });
            }
        }
    }
    let table = (0..upsets.len())
        .map(|i| (0..n).filter(|&w| member[w][i]).collect())
        .collect();
    Ok(NFrame::from_parts(poset, upsets, table))
}
