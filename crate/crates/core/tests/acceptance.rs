//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p subminimal --test acceptance`; exits non-zero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subminimal::algebra::{
    algebra_duality_check, dual_frame, frame_duality_check, least_filtration_correspondence,
    top_frames, upset_algebra_corpus,
};
use subminimal::antichain::{
    build_delta, extend_positive, is_order_onto, n_variant, order_onto, positive_morphism,
    theta_refutation_check, Variant,
};
use subminimal::filtration::{filtration_theorem_check, greatest_filtration};
use subminimal::frames::{
    check_nframe, countermodel_search, eval, for_each_ntable, frame_class, frame_validates,
    labeled_posets, unlabeled_posets, Countermodel, NFrame, NModel, Poset,
};
use subminimal::modal::{
    check_proof_of, en_check, fixtures, for_each_ns4_frame, lift_nstar, ns4_frame_by_choice,
    ns4_frame_validates, preorders, rn_validity, translation_preservation, ModalNFrame, NS4Frame,
};
use subminimal::syntax::{parse_modal, parse_prop, subformula_closure, Formula};
use subminimal::{Bits, LogicId};

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, what: &str, detail: String, start: Instant) {
        if !ok {
            self.failures += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {what}: {detail} ({:.1}s)", start.elapsed().as_secs_f64());
    }
}

fn p(s: &str) -> Formula {
    parse_prop(s).expect("fixture formula")
}

fn refutes(c: &Countermodel, f: &Formula) -> bool {
    !eval(&c.model, f).contains(c.world)
}

fn ac1(r: &mut Report) {
    let start = Instant::now();
    let copc = LogicId::CoPC.axiom();
    let nef = LogicId::NeF.axiom();
    let mpc = LogicId::Mpc.axiom();
    // w < v with N(∅) = N(W) = {v}, N({v}) = W.
    let drawn = NFrame::new(
        Poset::new(2, &[(0, 1)]).unwrap(),
        &BTreeMap::from([(Bits(0), Bits(0b10)), (Bits(0b10), Bits(0b11)), (Bits(0b11), Bits(0b10))]),
    )
    .unwrap();
    let mut notes = Vec::new();
    let i = countermodel_search(LogicId::NeF, &copc, 4).unwrap().is_some_and(|c| {
        notes.push(format!("NeF/CoPC {} worlds", c.model.frame.size()));
        refutes(&c, &copc)
            && frame_class(&c.model.frame, LogicId::NeF)
            && c.model.frame.isomorphism(&drawn).is_some()
    }) && frame_class(&drawn, LogicId::NeF)
        && !frame_validates(&drawn, &copc);
    let ii = countermodel_search(LogicId::N, &nef, 4).unwrap().is_some_and(|c| {
        notes.push(format!("N/NeF {} worlds", c.model.frame.size()));
        refutes(&c, &nef)
    });
    let iii = countermodel_search(LogicId::CoPC, &mpc, 4).unwrap().is_some_and(|c| {
        notes.push(format!("CoPC/MPC {} worlds", c.model.frame.size()));
        refutes(&c, &mpc) && frame_class(&c.model.frame, LogicId::CoPC)
    });
    let ok = i && ii && iii && start.elapsed().as_secs() < 60;
    r.line("AC1", ok, "separation chain", notes.join(", "), start);
}

fn random_formula(rng: &mut impl Rng, depth: usize, vars: &[&str]) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..=vars.len()) {
            0 => Formula::Top,
            k => Formula::var(vars[k - 1]),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, depth - 1, vars);
    match rng.gen_range(0..4) {
        0 => Formula::and(sub(rng), sub(rng)),
        1 => Formula::or(sub(rng), sub(rng)),
        2 => Formula::imp(sub(rng), sub(rng)),
        _ => Formula::neg(sub(rng)),
    }
}

/// A uniformly chosen family of local choices gives a random N-table on `p`.
fn random_nframe(rng: &mut impl Rng, p: &Poset) -> NFrame {
    let up: Vec<Bits> = (0..p.size()).map(|w| p.up(w)).collect();
    let ns4 = ns4_frame_by_choice(&up, |allowed| allowed.iter().copied().filter(|_| rng.gen_bool(0.5)).collect());
    NFrame::from_fn(p.clone(), |x| ns4.n(x)).expect("restriction to upsets is an N-frame")
}

fn random_model(rng: &mut impl Rng, posets: &[Vec<Poset>], vars: &[&str]) -> NModel {
    let k = rng.gen_range(1..posets.len());
    let p = &posets[k][rng.gen_range(0..posets[k].len())];
    let fr = random_nframe(rng, p);
    let ups = p.upsets();
    let valuation = vars
        .iter()
        .map(|v| (v.to_string(), ups[rng.gen_range(0..ups.len())]))
        .collect();
    NModel::new(fr, valuation).expect("upset valuation")
}

fn ac2(r: &mut Report, posets: &[Vec<Poset>]) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases = 10_000;
    let (mut failures, mut bound) = (0, 0);
    for _ in 0..cases {
        let m = random_model(&mut rng, posets, &["p", "q"]);
        let f = random_formula(&mut rng, 3, &["p", "q"]);
        let sigma = subformula_closure(&f);
        let res = greatest_filtration(&m, &sigma).expect("closed Σ");
        if filtration_theorem_check(&m, &res).is_err() {
            failures += 1;
        }
        if sigma.len() < 64 && res.quotient.frame.size() > 1 << sigma.len() {
            bound += 1;
        }
    }
    let ok = failures == 0 && bound == 0 && start.elapsed().as_secs() < 120;
    r.line(
        "AC2",
        ok,
        "filtration theorem",
        format!("{cases} random models ≤5 worlds, depth ≤3: {failures} failures, {bound} size-bound violations"),
        start,
    );
}

/// Subformula-closed sets with at most three formulas over `p`, `q`.
fn small_sigmas() -> Vec<BTreeSet<Formula>> {
    let atoms = [Formula::var("p"), Formula::var("q"), Formula::Top];
    let mut fs: Vec<Formula> = atoms.to_vec();
    for _ in 0..2 {
        let cur = fs.clone();
        for a in &cur {
            fs.push(Formula::neg(a.clone()));
            for b in &cur {
                fs.push(Formula::and(a.clone(), b.clone()));
                fs.push(Formula::or(a.clone(), b.clone()));
                fs.push(Formula::imp(a.clone(), b.clone()));
            }
        }
    }
    let mut out: BTreeSet<BTreeSet<Formula>> = BTreeSet::new();
    for f in &fs {
        let c = subformula_closure(f);
        if c.len() <= 3 {
            out.insert(c);
        }
    }
    // Unions of two small closures, e.g. {p, q}.
    let singles: Vec<_> = out.iter().cloned().collect();
    for a in &singles {
        for b in &singles {
            let u: BTreeSet<Formula> = a.union(b).cloned().collect();
            if u.len() <= 3 {
                out.insert(u);
            }
        }
    }
    out.into_iter().collect()
}

fn ac3(r: &mut Report) {
    let start = Instant::now();
    let corpus = upset_algebra_corpus(3);
    let sigmas = small_sigmas();
    let (mut cases, mut failures) = (0usize, 0usize);
    for a in &corpus {
        for sigma in &sigmas {
            let vars: Vec<String> = sigma.iter().flat_map(|f| f.vars()).collect::<BTreeSet<_>>().into_iter().collect();
            let total = a.size.pow(vars.len() as u32);
            for code in 0..total {
                let mut c = code;
                let mu: BTreeMap<String, usize> = vars
                    .iter()
                    .map(|v| {
                        let x = c % a.size;
                        c /= a.size;
                        (v.clone(), x)
                    })
                    .collect();
                cases += 1;
                if !least_filtration_correspondence(a, &mu, sigma) {
                    failures += 1;
                }
            }
        }
    }
    r.line(
        "AC3",
        failures == 0,
        "algebraic and model-theoretic filtrations",
        format!(
            "{} algebras × {} sets Σ (|Σ| ≤ 3) × all valuations = {cases} cases, {failures} failures",
            corpus.len(),
            sigmas.len()
        ),
        start,
    );
}

fn ac4(r: &mut Report) {
    let start = Instant::now();
    let frames = top_frames(3);
    let frame_fail = frames.iter().filter(|tf| !frame_duality_check(tf)).count();
    let algebras: Vec<_> = upset_algebra_corpus(3).into_iter().filter(|a| a.size <= 8).collect();
    let alg_fail = algebras.iter().filter(|a| !algebra_duality_check(a)).count();
    let hat_fail = algebras
        .iter()
        .filter(|a| {
            let d = dual_frame(a).expect("corpus algebra");
            (0..a.size).any(|x| d.top_frame.frame().n(d.hat(x)) != d.hat(a.neg[x]))
        })
        .count();
    let ok = frame_fail + alg_fail + hat_fail == 0;
    r.line(
        "AC4",
        ok,
        "duality",
        format!(
            "{} top frames ≤3 worlds ({frame_fail} failures), {} algebras ≤8 elements ({alg_fail} failures), N(â) = (~a)^ ({hat_fail} failures)",
            frames.len(),
            algebras.len()
        ),
        start,
    );
}

fn ac5(r: &mut Report) {
    let start = Instant::now();
    let ds: Vec<_> = (0..=3).map(build_delta).collect();
    let onto_ok = (0..4).all(|n| (0..4).all(|m| order_onto(&ds[n].poset, &ds[m].poset).is_some() == (n == m)));
    let pos_ok = (0..3).all(|n| (0..3).all(|m| positive_morphism(&ds[n].poset, &ds[m].poset).is_some() == (n == m)));
    let posets: Vec<Poset> = (1..=6).flat_map(unlabeled_posets).collect();
    let topped: Vec<&Poset> = posets.iter().filter(|p| p.top().is_some()).collect();
    let (mut pairs, mut found, mut lemma_fail) = (0usize, 0usize, 0usize);
    for t in &topped {
        for s in &posets {
            pairs += 1;
            if let Some(pm) = positive_morphism(t, s) {
                found += 1;
                let ok = extend_positive(&pm, t).is_some_and(|m| is_order_onto(t, s, &m))
                    && order_onto(t, s).is_some();
                if !ok {
                    lemma_fail += 1;
                }
            }
        }
    }
    let ok = onto_ok && pos_ok && lemma_fail == 0 && start.elapsed().as_secs() < 600;
    r.line(
        "AC5",
        ok,
        "antichain",
        format!(
            "≤ on indices 0..3 {}, ⪯ on 0..2 {}, extension on {pairs} topped pairs ≤6 nodes ({found} positive morphisms, {lemma_fail} failures)",
            if onto_ok { "diagonal" } else { "NOT diagonal" },
            if pos_ok { "diagonal" } else { "NOT diagonal" },
        ),
        start,
    );
}

fn antitone(fr: &NFrame) -> bool {
    let ups = fr.upsets();
    ups.iter().all(|&x| ups.iter().all(|&y| !x.is_subset(y) || fr.n(y).is_subset(fr.n(x))))
}

fn ac6(r: &mut Report) {
    let start = Instant::now();
    let mut fails = Vec::new();
    for n in 0..=3 {
        let d = build_delta(n);
        for v in Variant::ALL {
            let fr = n_variant(&d, v);
            if check_nframe(fr.poset(), &fr.table()).is_err() {
                fails.push(format!("{v}@{n} not an N-frame"));
            }
        }
        let nef = n_variant(&d, Variant::Nef);
        if !frame_class(&nef, LogicId::NeF) || !frame_validates(&nef, &LogicId::NeF.axiom()) {
            fails.push(format!("nef@{n} not NeF"));
        }
        let copc = n_variant(&d, Variant::Copc);
        if !frame_class(&copc, LogicId::CoPC) || !antitone(&copc) {
            fails.push(format!("copc@{n} not antitone"));
        }
        for v in [Variant::Base, Variant::Nef] {
            if !theta_refutation_check(&d, v) {
                fails.push(format!("refutation {v}@{n}"));
            }
        }
    }
    let detail = if fails.is_empty() {
        "four variants on n ≤ 3: locality, NeF, antitone and refuting valuations hold".to_owned()
    } else {
        fails.join(", ")
    };
    r.line("AC6", fails.is_empty(), "frame constructions", detail, start);
}

fn ns4_axioms() -> Vec<subminimal::ModalFormula> {
    [
        "[](p -> q) -> []p -> []q",
        "[]p -> p",
        "[]p -> [][]p",
        "[](p <-> q) -> ([n]p <-> [n]q)",
        "[n]p -> [][n]p",
    ]
    .iter()
    .map(|s| parse_modal(s).unwrap())
    .collect()
}

/// A random preorder on `n` worlds: random pairs, closed.
fn random_preorder(rng: &mut impl Rng, n: usize) -> Vec<Bits> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .filter(|_| rng.gen_ratio(1, 3))
        .collect();
    NS4Frame::preorder(n, &pairs).unwrap()
}

fn ac7(r: &mut Report) {
    let start = Instant::now();
    let axioms = ns4_axioms();
    let (mut two, mut fails) = (0usize, 0usize);
    for up in preorders(2) {
        for_each_ns4_frame(&up, |f| {
            two += 1;
            fails += axioms.iter().filter(|a| !ns4_frame_validates(&f, a)).count();
            true
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sampled = 1_000;
    for _ in 0..sampled {
        let up = random_preorder(&mut rng, 3);
        let f = ns4_frame_by_choice(&up, |allowed| allowed.iter().copied().filter(|_| rng.gen_bool(0.5)).collect());
        fails += axioms.iter().filter(|a| !ns4_frame_validates(&f, a)).count();
    }
    r.line(
        "AC7",
        fails == 0,
        "NS4 soundness",
        format!("K, T, 4, (3), (4) on all {two} frames with 2 worlds and {sampled} sampled with 3: {fails} failures"),
        start,
    );
}

fn ac8(r: &mut Report, posets: &[Vec<Poset>]) {
    let start = Instant::now();
    // Both evaluations are compositional, so agreement on every one-connective
    // formula under every upset valuation gives agreement on all formulas.
    let clauses: Vec<Formula> = ["p", "T", "p & q", "p | q", "p -> q", "~p"].iter().map(|s| p(s)).collect();
    let fixed: Vec<Formula> = [
        "~~p -> p",
        "(p -> ~p) -> ~p",
        "~(p & ~p)",
        "(p -> q) -> ~q -> ~p",
        "~p | ~~p",
        "((p -> q) -> p) -> p",
        "~(p | q) -> ~p & ~q",
        "(p <-> q) -> (~p <-> ~q)",
        "~~~p -> ~p",
        "p & ~p -> ~q",
    ]
    .iter()
    .map(|s| p(s))
    .collect();
    let (mut models, mut fails, mut fixed_cases) = (0usize, 0usize, 0usize);
    for (k, ps) in posets.iter().enumerate().take(5).skip(1) {
        for poset in ps {
            let ups = poset.upsets().to_vec();
            for_each_ntable(poset, |fr| {
                let lifted = lift_nstar(&fr);
                for &a in &ups {
                    for &b in &ups {
                        let m = NModel::new(fr.clone(), BTreeMap::from([("p".into(), a), ("q".into(), b)])).unwrap();
                        models += 1;
                        let ns4 = subminimal::modal::NS4Model { frame: lifted.clone(), valuation: m.valuation.clone() };
                        for f in &clauses {
                            let t = subminimal::syntax::godel_translate(f);
                            if eval(&m, f) != subminimal::modal::ns4_eval(&ns4, &t) {
                                fails += 1;
                            }
                        }
                        if k <= 3 {
                            for f in &fixed {
                                fixed_cases += 1;
                                fails += usize::from(translation_preservation(&m, f).is_err());
                            }
                        }
                    }
                }
                true
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fuzz = 10_000;
    for _ in 0..fuzz {
        let m = random_model(&mut rng, &posets[..5], &["p", "q"]);
        let f = random_formula(&mut rng, 3, &["p", "q"]);
        fails += usize::from(translation_preservation(&m, &f).is_err());
    }
    r.line(
        "AC8",
        fails == 0,
        "translation",
        format!(
            "{models} models ≤4 worlds × every connective clause, {fixed_cases} depth-≤3 fixture cases on ≤3 worlds, {fuzz} random: {fails} failures"
        ),
        start,
    );
}

fn ac9(r: &mut Report) {
    let start = Instant::now();
    let mut disagree = 0usize;
    let mut positive = [0usize; 3];
    for code in 0..256u64 {
        let f = ModalNFrame::from_fn(2, |x| Bits(code >> (2 * x.0) & 3)).unwrap();
        for (n, pos) in positive.iter_mut().enumerate() {
            let e = en_check(&f, n);
            *pos += usize::from(e);
            disagree += usize::from(e != rn_validity(&f, n));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sampled = 1_200;
    let mut positive3 = [0usize; 3];
    for i in 0..sampled {
        // Half uniform tables, half tables read off local families, which
        // satisfy the conditions more often.
        let f = if i % 2 == 0 {
            ModalNFrame::new(3, (0..8).map(|_| Bits(rng.gen_range(0..8))).collect()).unwrap()
        } else {
            let up = random_preorder(&mut rng, 3);
            let ns4 = ns4_frame_by_choice(&up, |allowed| allowed.iter().copied().filter(|_| rng.gen_bool(0.5)).collect());
            ModalNFrame::new(3, ns4.table().to_vec()).unwrap()
        };
        for (n, pos) in positive3.iter_mut().enumerate() {
            let e = en_check(&f, n);
            *pos += usize::from(e);
            disagree += usize::from(e != rn_validity(&f, n));
        }
    }
    r.line(
        "AC9",
        disagree == 0,
        "E_n and R_n",
        format!(
            "all 256 frames with 2 worlds (E_0/E_1/E_2 hold on {positive:?}) and {sampled} with 3 ({positive3:?}), n = 0, 1, 2: {disagree} disagreements"
        ),
        start,
    );
}

fn ac10(r: &mut Report) {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, proof, target) in fixtures::all() {
        let accepted = check_proof_of(&proof, &target).is_ok();
        let muts = fixtures::single_line_mutations(&proof);
        let rejected = muts.iter().filter(|m| check_proof_of(m, &target).is_err()).count();
        ok &= accepted && muts.len() >= 20 && rejected == muts.len();
        notes.push(format!(
            "{name} {} ({rejected}/{} mutations rejected)",
            if accepted { "accepted" } else { "REJECTED" },
            muts.len()
        ));
    }
    r.line("AC10", ok, "proof fixtures", notes.join(", "), start);
}

fn main() -> ExitCode {
    let posets: Vec<Vec<Poset>> = (0..=5).map(|k| if k == 0 { Vec::new() } else { labeled_posets(k) }).collect();
    let mut r = Report { failures: 0 };
    ac1(&mut r);
    ac2(&mut r, &posets);
    ac3(&mut r);
    ac4(&mut r);
    ac5(&mut r);
    ac6(&mut r);
    ac7(&mut r);
    ac8(&mut r, &posets);
    ac9(&mut r);
    ac10(&mut r);
    if r.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
