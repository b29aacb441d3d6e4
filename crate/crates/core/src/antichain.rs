//! The posets `Δ_n`, order-preserving and positive morphisms between finite
//! posets, and the N-functions that turn `Δ_n` into frames refuting their
//! own characteristic formulas.
//!
//! `Δ_n` has a root `w`, two chains `x_{n+2} < … < x_0` and
//! `y_{n+1} < … < y_0` above it, a top `t` above `x_0` and `y_0`, and cross
//! covers `y_{i+1} < x_i` (`0 ≤ i ≤ n`) and `x_{i+1} < y_i` (`1 ≤ i ≤ n`).

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::frames::{eval, NFrame, NModel, Poset};
use crate::par::{self, Exec};
use crate::syntax::parse_prop;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPoset {
    pub n: usize,
    pub poset: Poset,
    pub root: usize,
    pub top: usize,
    /// `xs[i]` is `x_i`.
    pub xs: Vec<usize>,
    /// `ys[j]` is `y_j`.
    pub ys: Vec<usize>,
}

impl DeltaPoset {
    /// Name of world `v`: `w`, `t`, `x3`, `y0`, ...
    pub fn label(&self, v: usize) -> String {
        if v == self.root {
            return "w".into();
        }
        if v == self.top {
            return "t".into();
        }
        if let Some(i) = self.xs.iter().position(|&x| x == v) {
            return format!("x{i}");
        }
        let j = self.ys.iter().position(|&y| y == v).expect("every world is labelled");
        format!("y{j}")
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        match label {
            "w" => Some(self.root),
            "t" => Some(self.top),
            _ => {
                let (chain, i) = label.split_at(1);
                let i: usize = i.parse().ok()?;
                match chain {
                    "x" => self.xs.get(i).copied(),
                    "y" => self.ys.get(i).copied(),
                    _ => None,
                }
            }
        }
    }

    /// The same poset with world `v` renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> DeltaPoset {
        DeltaPoset {
            n: self.n,
            poset: self.poset.relabel(perm),
            root: perm[self.root],
            top: perm[self.top],
            xs: self.xs.iter().map(|&v| perm[v]).collect(),
            ys: self.ys.iter().map(|&v| perm[v]).collect(),
        }
    }

    /// Every world except the root.
    pub fn above_root(&self) -> Bits {
        self.poset.worlds().without(self.root)
    }
}

/// `Δ_n` on `2n + 7` worlds: `w = 0`, `x_i = 1 + i`, `y_j = n + 4 + j`, `t = 2n + 6`.
pub fn build_delta(n: usize) -> DeltaPoset {
    let size = 2 * n + 7;
    let root = 0;
    let xs: Vec<usize> = (0..=n + 2).map(|i| 1 + i).collect();
    let ys: Vec<usize> = (0..=n + 1).map(|j| n + 4 + j).collect();
    let top = size - 1;
    let mut covers = vec![(root, xs[n + 2]), (root, ys[n + 1]), (xs[0], top), (ys[0], top)];
    covers.extend((0..=n + 1).map(|i| (xs[i + 1], xs[i])));
    covers.extend((0..=n).map(|j| (ys[j + 1], ys[j])));
    covers.extend((0..=n).map(|i| (ys[i + 1], xs[i])));
    covers.extend((1..=n).map(|i| (xs[i + 1], ys[i])));
    let poset = Poset::from_covers(size, &covers).expect("Δ_n is a partial order");
    DeltaPoset {
        n,
        poset,
        root,
        top,
        xs,
        ys,
    }
}

/// Backtracking over maps `source → target`, assigning worlds of `source`
/// from the top down so that everything above a world is fixed before it.
struct MapSearch<'a> {
    target: &'a Poset,
    source: &'a Poset,
    /// Worlds of the domain, maximal ones first.
    order: Vec<usize>,
    domain: Bits,
    back: bool,
    map: Vec<usize>,
    hits: Vec<usize>,
    missing: usize,
}

impl<'a> MapSearch<'a> {
    fn new(target: &'a Poset, source: &'a Poset, domain: Bits, back: bool) -> MapSearch<'a> {
        let mut order: Vec<usize> = source
            .linear_extension()
            .into_iter()
            .filter(|&v| domain.contains(v))
            .collect();
        order.reverse();
        MapSearch {
            target,
            source,
            order,
            domain,
            back,
            map: vec![usize::MAX; source.size()],
            hits: vec![0; target.size()],
            missing: target.size(),
        }
    }

    fn fits(&self, v: usize, img: usize) -> bool {
        let above = self.source.up(v).without(v) & self.domain;
        if !above.iter().all(|u| self.target.leq(img, self.map[u])) {
            return false;
        }
        if !self.back {
            return true;
        }
        // Everything above `img` is the image of something above `v`.
        let reached: Bits = above.iter().map(|u| self.map[u]).collect::<Bits>().with(img);
        self.target.up(img).is_subset(reached)
    }

    fn assign(&mut self, v: usize, img: usize) {
        self.map[v] = img;
        if self.hits[img] == 0 {
            self.missing -= 1;
        }
        self.hits[img] += 1;
    }

    fn unassign(&mut self, v: usize, img: usize) {
        self.hits[img] -= 1;
        if self.hits[img] == 0 {
            self.missing += 1;
        }
        self.map[v] = usize::MAX;
    }

    fn go(&mut self, k: usize) -> bool {
        if self.missing > self.order.len() - k {
            return false;
        }
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        for img in 0..self.target.size() {
            if self.fits(v, img) {
                self.assign(v, img);
                if self.go(k + 1) {
                    return true;
                }
                self.unassign(v, img);
            }
        }
        false
    }

    /// The first solution whose first assigned world goes to `first`.
    fn solve_from(mut self, first: usize) -> Option<Vec<usize>> {
        let Some(&v) = self.order.first() else {
            return (self.missing == 0).then_some(self.map);
        };
        if !self.fits(v, first) {
            return None;
        }
        self.assign(v, first);
        self.go(1).then_some(self.map)
    }
}

fn search(exec: Exec, target: &Poset, source: &Poset, domain: Bits, back: bool) -> Option<Vec<usize>> {
    if domain.len() < target.size() {
        return None;
    }
    par::find_first(exec, target.size(), |first| {
        MapSearch::new(target, source, domain, back).solve_from(first)
    })
}

/// An order-preserving map from `source` onto `target` (`map[v]` is the image
/// of `v`), or `None` if `target` is not an order-preserving image of `source`.
pub fn order_onto(target: &Poset, source: &Poset) -> Option<Vec<usize>> {
    order_onto_with(target, source, Exec::default())
}

pub fn order_onto_with(target: &Poset, source: &Poset, exec: Exec) -> Option<Vec<usize>> {
    search(exec, target, source, source.worlds(), false)
}

/// A positive morphism from `source` onto `target`: an order-preserving map
/// with the back condition, defined on a downset of `source`. Worlds outside
/// the domain map to `None`.
pub fn positive_morphism(target: &Poset, source: &Poset) -> Option<Vec<Option<usize>>> {
    positive_morphism_with(target, source, Exec::default())
}

pub fn positive_morphism_with(
    target: &Poset,
    source: &Poset,
    exec: Exec,
) -> Option<Vec<Option<usize>>> {
    let mut downsets = source.downsets();
    downsets.sort_by_key(|d| std::cmp::Reverse(d.len()));
    downsets.into_iter().find_map(|d| {
        search(exec, target, source, d, true)
            .map(|map| (0..source.size()).map(|v| d.contains(v).then_some(map[v])).collect())
    })
}

/// Whether `pm` is a positive morphism from `source` onto `target`.
pub fn is_positive_morphism(target: &Poset, source: &Poset, pm: &[Option<usize>]) -> bool {
    let domain: Bits = (0..source.size()).filter(|&v| pm[v].is_some()).collect();
    if pm.len() != source.size() || !source.is_downset(domain) {
        return false;
    }
    let image: Bits = pm.iter().flatten().copied().collect();
    image == target.worlds()
        && domain.iter().all(|v| {
            let fv = pm[v].expect("in domain");
            let above = source.up(v) & domain;
            let reached: Bits = above.iter().map(|u| pm[u].expect("in domain")).collect();
            above.iter().all(|u| target.leq(fv, pm[u].expect("in domain")))
                && target.up(fv).is_subset(reached)
        })
}

/// Whether `map` is an order-preserving map from `source` onto `target`.
pub fn is_order_onto(target: &Poset, source: &Poset, map: &[usize]) -> bool {
    map.len() == source.size()
        && map.iter().all(|&x| x < target.size())
        && map.iter().copied().collect::<Bits>() == target.worlds()
        && source
            .leq_pairs()
            .into_iter()
            .all(|(u, v)| target.leq(map[u], map[v]))
}

/// Sends everything outside the domain of `pm` to the top of `target`.
pub fn extend_positive(pm: &[Option<usize>], target: &Poset) -> Option<Vec<usize>> {
    let top = target.top()?;
    Some(pm.iter().map(|x| x.unwrap_or(top)).collect())
}

/// Whether no poset in `ps` is an order-preserving image of another.
pub fn antichain_check(ps: &[Poset]) -> bool {
    (0..ps.len()).all(|i| (0..ps.len()).all(|j| i == j || order_onto(&ps[i], &ps[j]).is_none()))
}

/// The N-functions placed on `Δ_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `X ↦ {t}`.
    Base,
    /// `X ↦ W` if `X = W∖{w}`, else `W∖{w}`.
    Nef,
    /// `X ↦ W` if `X = W`, else `W∖{w}`.
    SubNef,
    /// `X ↦ {t}`.
    Copc,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Base, Variant::Nef, Variant::SubNef, Variant::Copc];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Base => "base",
            Variant::Nef => "nef",
            Variant::SubNef => "sub_nef",
            Variant::Copc => "copc",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Variant::Base),
            "nef" => Ok(Variant::Nef),
            "sub_nef" | "sub-nef" => Ok(Variant::SubNef),
            "copc" => Ok(Variant::Copc),
            _ => Err(format!("unknown variant '{s}'")),
        }
    }
}

pub fn n_variant(d: &DeltaPoset, v: Variant) -> NFrame {
    let all = d.poset.worlds();
    let rest = d.above_root();
    let top = Bits::singleton(d.top);
    let n = |x: Bits| match v {
        Variant::Base | Variant::Copc => top,
        Variant::Nef => {
            if x == rest {
                all
            } else {
                rest
            }
        }
        Variant::SubNef => {
            if x == all {
                all
            } else {
                rest
            }
        }
    };
    NFrame::from_fn(d.poset.clone(), n).expect("Δ_n variants are local")
}

/// The valuation used to refute the characteristic formula of `Δ_n`.
///
/// `Base` and `Copc`: `p = {t}`. `Nef`: `p = {t}`, `q = W∖{w}`.
/// `SubNef`: `p = W`, `q = {t}`.
pub fn refuting_valuation(d: &DeltaPoset, v: Variant) -> Vec<(String, Bits)> {
    let top = Bits::singleton(d.top);
    match v {
        Variant::Base | Variant::Copc => vec![("p".into(), top)],
        Variant::Nef => vec![("p".into(), top), ("q".into(), d.above_root())],
        Variant::SubNef => vec![("p".into(), d.poset.worlds()), ("q".into(), top)],
    }
}

/// Checks the negation part of the refutation at the root:
///
/// * `Base`, `Copc`: `p -> ~p` holds everywhere and `~p` fails at `w`;
/// * `Nef`: `p -> q` holds everywhere, `~q` holds at `w` and `~p` fails there;
/// * `SubNef`: `p & ~p` holds at `w` and `~q` fails there.
pub fn theta_refutation_check(d: &DeltaPoset, v: Variant) -> bool {
    theta_refutation_check_with(d, v, &refuting_valuation(d, v))
}

pub fn theta_refutation_check_with(d: &DeltaPoset, v: Variant, valuation: &[(String, Bits)]) -> bool {
    let Ok(m) = NModel::new(n_variant(d, v), valuation.iter().cloned().collect()) else {
        return false;
    };
    let all = d.poset.worlds();
    let val = |s: &str| eval(&m, &parse_prop(s).expect("fixed formula"));
    let w = d.root;
    match v {
        Variant::Base | Variant::Copc => val("p -> ~p") == all && !val("~p").contains(w),
        Variant::Nef => val("p -> q") == all && val("~q").contains(w) && !val("~p").contains(w),
        Variant::SubNef => val("p & ~p").contains(w) && !val("~q").contains(w),
    }
}
