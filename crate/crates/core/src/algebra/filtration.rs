//! Algebraic filtration: restrict an algebra with a valuation to a finite
//! sublattice containing the values of `Σ`, with
//! `a ->_L b = ⋁{s ∈ L : a ∧ s ≤ b}` and `~_L a = ⋁{s ∈ L : s ≤ ~a}`.
//!
//! Both joins range over a finite lattice. The implication join is never
//! empty (`b` qualifies); an empty negation join is read as the least
//! element of `L`.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::Bits;
use crate::filtration::greatest_filtration;
use crate::frames::NModel;
use crate::syntax::{is_subformula_closed, Formula};

use super::{check_nalgebra, dual_frame, AlgebraError, NAlgebra};

/// A filtration `(L, μ_L)` of `(A, μ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicFiltration {
    pub algebra: NAlgebra,
    /// `elements[i]` is the element of `A` that is element `i` of `L`.
    pub elements: Vec<usize>,
    /// `μ_L` on the variables of `Σ`, in `L`'s indexing.
    pub valuation: BTreeMap<String, usize>,
}

impl AlgebraicFiltration {
    pub fn local_index(&self, a: usize) -> Option<usize> {
        self.elements.iter().position(|&x| x == a)
    }
}

fn closed_sigma(sigma: &BTreeSet<Formula>) -> Result<(), AlgebraError> {
    if is_subformula_closed(sigma) {
        Ok(())
    } else {
        Err(AlgebraError::NotClosed)
    }
}

/// Filtration through the `(∧, ∨, 1)`-subreduct generated by `μ[Σ]`.
pub fn sublattice_filtration(
    a: &NAlgebra,
    mu: &BTreeMap<String, usize>,
    sigma: &BTreeSet<Formula>,
) -> Result<AlgebraicFiltration, AlgebraError> {
    closed_sigma(sigma)?;
    let mut s: BTreeSet<usize> = sigma.iter().map(|f| a.eval(f, mu)).collect();
    s.insert(a.one);
    loop {
        let next: BTreeSet<usize> = s
            .iter()
            .flat_map(|&x| s.iter().flat_map(move |&y| [a.meet[x][y], a.join[x][y]]))
            .chain(s.iter().copied())
            .collect();
        if next.len() == s.len() {
            break;
        }
        s = next;
    }
    restrict(a, mu, sigma, s.into_iter().collect())
}

/// Filtration through a given finite sublattice `l` containing `1` and `μ[Σ]`.
pub fn general_algebraic_filtration(
    a: &NAlgebra,
    mu: &BTreeMap<String, usize>,
    sigma: &BTreeSet<Formula>,
    l: &[usize],
) -> Result<AlgebraicFiltration, AlgebraError> {
    closed_sigma(sigma)?;
    let set: BTreeSet<usize> = l.iter().copied().collect();
    let closed = set.contains(&a.one)
        && set.iter().all(|&x| {
            x < a.size && set.iter().all(|&y| set.contains(&a.meet[x][y]) && set.contains(&a.join[x][y]))
        });
    if !closed {
        return Err(AlgebraError::NotSublattice);
    }
    for f in sigma {
        if !set.contains(&a.eval(f, mu)) {
            return Err(AlgebraError::OutsideSublattice(f.to_string()));
        }
    }
    restrict(a, mu, sigma, set.into_iter().collect())
}

fn restrict(
    a: &NAlgebra,
    mu: &BTreeMap<String, usize>,
    sigma: &BTreeSet<Formula>,
    elements: Vec<usize>,
) -> Result<AlgebraicFiltration, AlgebraError> {
    let k = elements.len();
    let local = |x: usize| elements.iter().position(|&e| e == x).expect("closed under meet and join");
    let bottom = elements.iter().fold(a.one, |acc, &x| a.meet[acc][x]);
    let join_of = |pred: &dyn Fn(usize) -> bool| -> usize {
        elements
            .iter()
            .copied()
            .filter(|&s| pred(s))
            .reduce(|x, y| a.join[x][y])
            .unwrap_or(bottom)
    };
    let table = |op: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        elements
            .iter()
            .map(|&x| elements.iter().map(|&y| local(op(x, y))).collect())
            .collect()
    };
    let algebra = NAlgebra {
        size: k,
        meet: table(&|x, y| a.meet[x][y]),
        join: table(&|x, y| a.join[x][y]),
        imp: table(&|x, y| join_of(&|s| a.leq(a.meet[x][s], y))),
        neg: elements
            .iter()
            .map(|&x| local(join_of(&|s| a.leq(s, a.neg[x]))))
            .collect(),
        one: local(a.one),
    };
    let vars: BTreeSet<String> = sigma.iter().flat_map(Formula::vars).collect();
    let valuation = vars
        .into_iter()
        .map(|v| {
            let x = mu.get(&v).copied().unwrap_or_else(|| a.bottom());
            (v, local(x))
        })
        .collect();
    Ok(AlgebraicFiltration {
        algebra,
        elements,
        valuation,
    })
}

/// Checks that the least algebraic filtration and the greatest filtration of
/// the dual model `⟨F_A, α∘μ⟩` agree:
///
/// * `(S, μ_S)` is an N-algebra and `μ_S(φ) = μ(φ)` on `Σ`;
/// * worlds `w, v` of `F_A` are identified iff `w ∩ S = v ∩ S`, and
///   `[w] ≤ᵍ [v]` iff `w ∩ S ⊆ v ∩ S`;
/// * `[w] ↦ w ∩ S` is an order isomorphism onto the dual frame of `S`,
///   carrying the quotient valuation to `α_S∘μ_S`.
pub fn least_filtration_correspondence(
    a: &NAlgebra,
    mu: &BTreeMap<String, usize>,
    sigma: &BTreeSet<Formula>,
) -> bool {
    let Ok(s) = sublattice_filtration(a, mu, sigma) else {
        return false;
    };
    if check_nalgebra(&s.algebra).is_err() {
        return false;
    }
    let theorem = sigma
        .iter()
        .all(|f| s.elements[s.algebra.eval(f, &s.valuation)] == a.eval(f, mu));
    if !theorem {
        return false;
    }

    let Ok(dual) = dual_frame(a) else {
        return false;
    };
    let valuation: BTreeMap<String, Bits> = s
        .valuation
        .keys()
        .map(|v| (v.clone(), dual.hat(a.eval(&Formula::var(v), mu))))
        .collect();
    let Ok(model) = NModel::new(dual.top_frame.frame().clone(), valuation) else {
        return false;
    };
    let Ok(g) = greatest_filtration(&model, sigma) else {
        return false;
    };
    // w ∩ S in S's indexing.
    let trace = |w: usize| -> u64 {
        (0..s.elements.len())
            .filter(|&i| dual.filters[w] >> s.elements[i] & 1 == 1)
            .fold(0, |m, i| m | 1 << i)
    };
    let worlds = dual.filters.len();
    let q = g.quotient.frame.poset();
    for w in 0..worlds {
        for v in 0..worlds {
            let (tw, tv) = (trace(w), trace(v));
            if (g.pi[w] == g.pi[v]) != (tw == tv) || q.leq(g.pi[w], g.pi[v]) != (tw & tv == tw) {
                return false;
            }
        }
    }

    let Ok(dual_s) = dual_frame(&s.algebra) else {
        return false;
    };
    let classes = q.size();
    let mut to_dual = vec![usize::MAX; classes];
    for w in 0..worlds {
        match dual_s.filters.iter().position(|&f| f == trace(w)) {
            Some(x) => to_dual[g.pi[w]] = x,
            None => return false,
        }
    }
    let mut seen = to_dual.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != dual_s.filters.len() || seen.len() != classes {
        return false;
    }
    let ps = dual_s.top_frame.frame().poset();
    let order = (0..classes)
        .all(|c| (0..classes).all(|d| q.leq(c, d) == ps.leq(to_dual[c], to_dual[d])));
    let values = s.valuation.iter().all(|(v, &x)| {
        let img: Bits = g.quotient.value(v).iter().map(|c| to_dual[c]).collect();
        img == dual_s.hat(x)
    });
    order && values
}
