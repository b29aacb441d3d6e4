use std::fmt;

use crate::bits::{Bits, MAX_BITS};

use super::FrameError;

/// A finite partial order on worlds `0..n`.
///
/// `up[w]` is `R(w) = {v : w <= v}` and `down[w]` is `{v : v <= w}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    up: Vec<Bits>,
    down: Vec<Bits>,
}

impl Poset {
    /// The order generated by `pairs` under reflexive closure only; the pairs
    /// must already be transitive and antisymmetric.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Poset, FrameError> {
        if n > MAX_BITS {
            return Err(FrameError::TooManyWorlds(n));
        }
        let mut up: Vec<Bits> = (0..n).map(Bits::singleton).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(FrameError::WorldOutOfRange(a.max(b)));
            }
            up[a] = up[a].with(b);
        }
        Poset::from_up(up)
    }

    /// The reflexive-transitive closure of `covers`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset, FrameError> {
        if n > MAX_BITS {
            return Err(FrameError::TooManyWorlds(n));
        }
        let mut up: Vec<Bits> = (0..n).map(Bits::singleton).collect();
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(FrameError::WorldOutOfRange(a.max(b)));
            }
            up[a] = up[a].with(b);
        }
        loop {
            let mut changed = false;
            for w in 0..n {
                let mut acc = up[w];
                for v in up[w] {
                    acc = acc | up[v];
                }
                if acc != up[w] {
                    up[w] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Poset::from_up(up)
    }

    /// From the principal upsets `R(w)`; checks all partial-order laws.
    pub fn from_up(up: Vec<Bits>) -> Result<Poset, FrameError> {
        let n = up.len();
        if n > MAX_BITS {
            return Err(FrameError::TooManyWorlds(n));
        }
        for (w, &r) in up.iter().enumerate() {
            if !r.is_subset(Bits::full(n)) {
                return Err(FrameError::WorldOutOfRange(r.iter().last().unwrap_or(0)));
            }
            if !r.contains(w) {
                return Err(FrameError::NotReflexive(w));
            }
            for v in r {
                if v != w && up[v].contains(w) {
                    return Err(FrameError::NotAntisymmetric(w, v));
                }
                if let Some(u) = (up[v] - r).first() {
                    return Err(FrameError::NotTransitive(w, v, u));
                }
            }
        }
        Ok(Poset::from_up_unchecked(up))
    }

    pub(crate) fn from_up_unchecked(up: Vec<Bits>) -> Poset {
        let n = up.len();
        let mut down = vec![Bits::EMPTY; n];
        for (w, &r) in up.iter().enumerate() {
            for v in r {
                down[v] = down[v].with(w);
            }
        }
        Poset { up, down }
    }

    /// `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Poset {
        Poset::from_up_unchecked((0..n).map(|w| Bits::full(n) - Bits::full(w)).collect())
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_up_unchecked((0..n).map(Bits::singleton).collect())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.up.len()
    }

    #[inline]
    pub fn worlds(&self) -> Bits {
        Bits::full(self.size())
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `R(w)`.
    #[inline]
    pub fn up(&self, w: usize) -> Bits {
        self.up[w]
    }

    #[inline]
    pub fn down(&self, w: usize) -> Bits {
        self.down[w]
    }

    pub fn up_sets(&self) -> &[Bits] {
        &self.up
    }

    pub fn is_upset(&self, x: Bits) -> bool {
        x.iter().all(|w| self.up[w].is_subset(x))
    }

    pub fn is_downset(&self, x: Bits) -> bool {
        x.iter().all(|w| self.down[w].is_subset(x))
    }

    pub fn upclose(&self, x: Bits) -> Bits {
        x.iter().fold(Bits::EMPTY, |acc, w| acc | self.up[w])
    }

    pub fn downclose(&self, x: Bits) -> Bits {
        x.iter().fold(Bits::EMPTY, |acc, w| acc | self.down[w])
    }

    /// The largest upset contained in `x`.
    pub fn interior(&self, x: Bits) -> Bits {
        (0..self.size())
            .filter(|&w| self.up[w].is_subset(x))
            .collect()
    }

    /// Heyting implication on upsets: `{w : R(w) ∩ x ⊆ y}`.
    pub fn imp(&self, x: Bits, y: Bits) -> Bits {
        let mut out = Bits::EMPTY;
        for (w, &r) in self.up.iter().enumerate() {
            if (r & x).is_subset(y) {
                out = out.with(w);
            }
        }
        out
    }

    /// All upsets in increasing bitmask order, `∅` and `W` included.
    pub fn upsets(&self) -> Vec<Bits> {
        let mut order = self.linear_extension();
        order.reverse();
        let mut out = Vec::new();
        self.upsets_rec(&order, 0, Bits::EMPTY, &mut out);
        out.sort_unstable();
        out
    }

    fn upsets_rec(&self, order: &[usize], k: usize, cur: Bits, out: &mut Vec<Bits>) {
        if k == order.len() {
            out.push(cur);
            return;
        }
        let w = order[k];
        self.upsets_rec(order, k + 1, cur, out);
        if self.up[w].without(w).is_subset(cur) {
            self.upsets_rec(order, k + 1, cur.with(w), out);
        }
    }

    /// All downsets in increasing bitmask order.
    pub fn downsets(&self) -> Vec<Bits> {
        let full = self.worlds();
        let mut out: Vec<Bits> = self.upsets().into_iter().map(|u| full - u).collect();
        out.sort_unstable();
        out
    }

    /// Worlds ordered so that `a < b` implies `a` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by_key(|&w| (self.down[w].len(), w));
        order
    }

    /// Strict order pairs `(a, b)`, `a < b`, in lexicographic order.
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, &r) in self.up.iter().enumerate() {
            for b in r.without(a) {
                out.push((a, b));
            }
        }
        out
    }

    /// Cover pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.leq_pairs()
            .into_iter()
            .filter(|&(a, b)| (self.up[a] & self.down[b]).len() == 2)
            .collect()
    }

    pub fn maximal(&self) -> Bits {
        (0..self.size()).filter(|&w| self.up[w].len() == 1).collect()
    }

    pub fn minimal(&self) -> Bits {
        (0..self.size()).filter(|&w| self.down[w].len() == 1).collect()
    }

    /// The greatest world, if there is one.
    pub fn top(&self) -> Option<usize> {
        (0..self.size()).find(|&w| self.down[w] == self.worlds())
    }

    /// The least world, if there is one.
    pub fn root(&self) -> Option<usize> {
        (0..self.size()).find(|&w| self.up[w] == self.worlds())
    }

    /// The poset with worlds renamed along `perm` (`w` becomes `perm[w]`).
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let n = self.size();
        let mut up = vec![Bits::EMPTY; n];
        for w in 0..n {
            up[perm[w]] = self.up[w].iter().map(|v| perm[v]).collect();
        }
        Poset::from_up_unchecked(up)
    }

    /// An order isomorphism onto `other`, found by backtracking.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        self.find_isomorphism(other, |_| true)
    }

    /// The first order isomorphism onto `other` (as `map[w]`) accepted by `accept`.
    pub fn find_isomorphism<F>(&self, other: &Poset, mut accept: F) -> Option<Vec<usize>>
    where
        F: FnMut(&[usize]) -> bool,
    {
        let n = self.size();
        if n != other.size() {
            return None;
        }
        let sig = |p: &Poset, w: usize| p.up[w].len() * 65 + p.down[w].len();
        let a: Vec<usize> = (0..n).map(|w| sig(self, w)).collect();
        let b: Vec<usize> = (0..n).map(|w| sig(other, w)).collect();
        let (mut sa, mut sb) = (a.clone(), b.clone());
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let mut search = IsoSearch {
            s: self,
            o: other,
            a: &a,
            b: &b,
            map: vec![usize::MAX; n],
            used: Bits::EMPTY,
        };
        search.go(0, &mut accept).then_some(search.map)
    }
}

struct IsoSearch<'a> {
    s: &'a Poset,
    o: &'a Poset,
    a: &'a [usize],
    b: &'a [usize],
    map: Vec<usize>,
    used: Bits,
}

impl IsoSearch<'_> {
    fn go<F: FnMut(&[usize]) -> bool>(&mut self, w: usize, accept: &mut F) -> bool {
        if w == self.s.size() {
            return accept(&self.map);
        }
        for c in 0..self.o.size() {
            if self.used.contains(c) || self.a[w] != self.b[c] {
                continue;
            }
            let ok = (0..w).all(|u| {
                self.s.leq(u, w) == self.o.leq(self.map[u], c)
                    && self.s.leq(w, u) == self.o.leq(c, self.map[u])
            });
            if ok {
                self.map[w] = c;
                self.used = self.used.with(c);
                if self.go(w + 1, accept) {
                    return true;
                }
                self.used = self.used.without(c);
            }
        }
        false
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("worlds", &self.size())
            .field("lt", &self.leq_pairs())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upset_counts() {
        assert_eq!(Poset::chain(2).upsets(), vec![Bits(0), Bits(0b10), Bits(0b11)]);
        assert_eq!(Poset::antichain(2).upsets().len(), 4);
        assert_eq!(Poset::chain(1).upsets(), vec![Bits(0), Bits(1)]);
        // Brute-force oracle over all subsets.
        let p = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let brute: Vec<Bits> = (0..16u64).map(Bits).filter(|&x| p.is_upset(x)).collect();
        assert_eq!(p.upsets(), brute);
        assert_eq!(p.downsets().len(), brute.len());
    }

    #[test]
    fn construction_checks_laws() {
        assert!(Poset::new(2, &[(0, 1)]).is_ok());
        assert!(matches!(
            Poset::new(2, &[(0, 1), (1, 0)]),
            Err(FrameError::NotAntisymmetric(0, 1))
        ));
        assert!(matches!(
            Poset::new(3, &[(0, 1), (1, 2)]),
            Err(FrameError::NotTransitive(0, 1, 2))
        ));
        assert!(Poset::new(2, &[(0, 2)]).is_err());
        assert!(Poset::from_covers(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn implication_is_relative_pseudocomplement() {
        let p = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let ups = p.upsets();
        for &x in &ups {
            for &y in &ups {
                let z = p.imp(x, y);
                assert!(p.is_upset(z));
                for &c in &ups {
                    assert_eq!((c & x).is_subset(y), c.is_subset(z));
                }
            }
        }
    }

    #[test]
    fn covers_and_extremes() {
        let p = Poset::chain(3);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(p.leq_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(p.top(), Some(2));
        assert_eq!(p.root(), Some(0));
        assert_eq!(Poset::antichain(2).top(), None);
    }

    #[test]
    fn isomorphism_search() {
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let w = Poset::from_covers(3, &[(2, 0), (2, 1)]).unwrap();
        let m = v.isomorphism(&w).unwrap();
        assert_eq!(v.relabel(&m), w);
        assert!(v.isomorphism(&Poset::chain(3)).is_none());
    }
}
