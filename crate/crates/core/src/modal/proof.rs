//! Line-by-line checking of Hilbert-style derivations in NS4 and CoS4.
//!
//! Formulas are compared modulo `[](a & b) = []a & []b`. Besides the axioms,
//! modus ponens and necessitation, a line may be justified by regularity
//! (`a -> b` gives `[]a -> []b`), by propositional consequence of earlier
//! lines (boxed subformulas treated as atoms), or as a premise. Necessitation
//! and regularity may be applied to premises: a derivation from premises shows
//! that the conclusion is valid on every frame validating them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_modal, ModalFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum System {
    NS4,
    CoS4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Propositional tautology.
    #[serde(rename = "taut")]
    Taut,
    /// `[](p -> q) -> []p -> []q`.
    K,
    /// `[]p -> p`.
    T,
    /// `[]p -> [][]p`.
    #[serde(rename = "4")]
    Four,
    /// `[](p <-> q) -> ([n]p <-> [n]q)`, NS4 only.
    #[serde(rename = "cong")]
    Cong,
    /// `[n]p -> [][n]p`.
    #[serde(rename = "up")]
    Up,
    /// `[](p -> q) -> [n]q -> [n]p`, CoS4 only.
    #[serde(rename = "anti")]
    Anti,
    #[serde(rename = "mp")]
    Mp,
    #[serde(rename = "nec")]
    Nec,
    #[serde(rename = "reg")]
    Reg,
    #[serde(rename = "pc")]
    Pc,
    #[serde(rename = "box-conj")]
    BoxConj,
    #[serde(rename = "prem")]
    Prem,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::Taut,
        Rule::K,
        Rule::T,
        Rule::Four,
        Rule::Cong,
        Rule::Up,
        Rule::Anti,
        Rule::Mp,
        Rule::Nec,
        Rule::Reg,
        Rule::Pc,
        Rule::BoxConj,
        Rule::Prem,
    ];

    fn schema(self) -> Option<&'static str> {
        Some(match self {
            Rule::K => "[](p -> q) -> []p -> []q",
            Rule::T => "[]p -> p",
            Rule::Four => "[]p -> [][]p",
            Rule::Cong => "[](p <-> q) -> ([n]p <-> [n]q)",
            Rule::Up => "[n]p -> [][n]p",
            Rule::Anti => "[](p -> q) -> [n]q -> [n]p",
            _ => return None,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

mod formula_string {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(f: &ModalFormula, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(f)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ModalFormula, D::Error> {
        let s = String::deserialize(d)?;
        parse_modal(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(fs: &[ModalFormula], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(fs.iter().map(|f| f.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ModalFormula>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_modal(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofLine {
    #[serde(with = "formula_string")]
    pub formula: ModalFormula,
    pub rule: Rule,
    /// Zero-based indices of earlier lines.
    #[serde(default)]
    pub refs: Vec<usize>,
}

impl ProofLine {
    pub fn new(formula: &str, rule: Rule, refs: &[usize]) -> ProofLine {
        ProofLine {
            formula: parse_modal(formula).expect("well-formed proof line"),
            rule,
            refs: refs.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertProof {
    pub system: System,
    #[serde(default, with = "formula_string::vec")]
    pub premises: Vec<ModalFormula>,
    pub lines: Vec<ProofLine>,
}

impl FromStr for HilbertProof {
    type Err = serde_json::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {index}: {reason}")]
pub struct BadLine {
    pub index: usize,
    pub reason: String,
}

fn norm(f: &ModalFormula) -> ModalFormula {
    f.distribute_nec()
}

/// Binds schema variables to subformulas of `f`.
fn matches(schema: &ModalFormula, f: &ModalFormula, sub: &mut BTreeMap<String, ModalFormula>) -> bool {
    use ModalFormula as M;
    match (schema, f) {
        (M::Var(v), _) => match sub.get(v) {
            Some(g) => g == f,
            None => {
                sub.insert(v.clone(), f.clone());
                true
            }
        },
        (M::Bot, M::Bot) | (M::Top, M::Top) => true,
        (M::And(a, b), M::And(c, d)) | (M::Or(a, b), M::Or(c, d)) | (M::Imp(a, b), M::Imp(c, d)) => {
            matches(a, c, sub) && matches(b, d, sub)
        }
        (M::Nec(a), M::Nec(c)) | (M::NegBox(a), M::NegBox(c)) => matches(a, c, sub),
        _ => false,
    }
}

fn is_instance(schema: &ModalFormula, f: &ModalFormula) -> bool {
    matches(schema, f, &mut BTreeMap::new()) || matches(&norm(schema), &norm(f), &mut BTreeMap::new())
}

const MAX_ATOMS: usize = 16;

/// Classical tautology, reading maximal modal subformulas and variables as atoms.
pub(crate) fn is_tautology(f: &ModalFormula) -> Result<bool, String> {
    use ModalFormula as M;
    fn atoms(f: &ModalFormula, out: &mut Vec<ModalFormula>) {
        match f {
            M::Bot | M::Top => {}
            M::And(a, b) | M::Or(a, b) | M::Imp(a, b) => {
                atoms(a, out);
                atoms(b, out);
            }
            M::Var(_) | M::Nec(_) | M::NegBox(_) => {
                if !out.contains(f) {
                    out.push(f.clone());
                }
            }
        }
    }
    fn value(f: &ModalFormula, atoms: &[ModalFormula], row: u32) -> bool {
        match f {
            M::Bot => false,
            M::Top => true,
            M::And(a, b) => value(a, atoms, row) && value(b, atoms, row),
            M::Or(a, b) => value(a, atoms, row) || value(b, atoms, row),
            M::Imp(a, b) => !value(a, atoms, row) || value(b, atoms, row),
            _ => {
                let i = atoms.iter().position(|a| a == f).expect("collected atom");
                row >> i & 1 == 1
            }
        }
    }
    let f = norm(f);
    let mut at = Vec::new();
    atoms(&f, &mut at);
    if at.len() > MAX_ATOMS {
        return Err(format!("{} atoms exceed the truth-table limit {MAX_ATOMS}", at.len()));
    }
    Ok((0..1u32 << at.len()).all(|row| value(&f, &at, row)))
}

fn check_line(p: &HilbertProof, index: usize) -> Result<(), String> {
    use ModalFormula as M;
    let line = &p.lines[index];
    let f = &line.formula;
    if let Some(&r) = line.refs.iter().find(|&&r| r >= index) {
        return Err(format!("reference {r} does not point to an earlier line"));
    }
    let refd: Vec<&ModalFormula> = line.refs.iter().map(|&r| &p.lines[r].formula).collect();
    let arity = |n: usize| -> Result<(), String> {
        if refd.len() == n {
            Ok(())
        } else {
            Err(format!("{} takes {n} reference(s), got {}", line.rule, refd.len()))
        }
    };
    match line.rule {
        Rule::Taut => {
            arity(0)?;
            if !is_tautology(f)? {
                return Err("not a tautology".into());
            }
        }
        Rule::K | Rule::T | Rule::Four | Rule::Cong | Rule::Up | Rule::Anti => {
            arity(0)?;
            match (line.rule, p.system) {
                (Rule::Cong, System::CoS4) => return Err("cong is not an axiom of CoS4".into()),
                (Rule::Anti, System::NS4) => return Err("anti is not an axiom of NS4".into()),
                _ => {}
            }
            let schema = parse_modal(line.rule.schema().expect("axiom")).expect("schema parses");
            if !is_instance(&schema, f) {
                return Err(format!("not an instance of {}", line.rule));
            }
        }
        Rule::Mp => {
            arity(2)?;
            let (a, b) = (norm(refd[0]), norm(refd[1]));
            let target = norm(f);
            let ok = b == M::imp(a.clone(), target.clone()) || a == M::imp(b, target);
            if !ok {
                return Err("modus ponens does not apply".into());
            }
        }
        Rule::Nec => {
            arity(1)?;
            if let M::NegBox(inner) = f {
                if norm(inner) == norm(refd[0]) {
                    return Err("necessitation does not apply to [n]".into());
                }
            }
            if norm(f) != norm(&M::nec(refd[0].clone())) {
                return Err("not the necessitation of the referenced line".into());
            }
        }
        Rule::Reg => {
            arity(1)?;
            let M::Imp(l, r) = f else {
                return Err("regularity concludes an implication".into());
            };
            let (M::Nec(a), M::Nec(b)) = (&**l, &**r) else {
                return Err("regularity concludes []a -> []b".into());
            };
            if norm(&M::imp((**a).clone(), (**b).clone())) != norm(refd[0]) {
                return Err("referenced line is not the unboxed implication".into());
            }
        }
        Rule::Pc => {
            if refd.is_empty() {
                return Err("pc needs at least one reference".into());
            }
            let hyp = refd.iter().map(|&g| g.clone()).reduce(M::and).expect("nonempty");
            if !is_tautology(&M::imp(hyp, f.clone()))? {
                return Err("not a propositional consequence of the referenced lines".into());
            }
        }
        Rule::BoxConj => {
            arity(1)?;
            if norm(f) != norm(refd[0]) {
                return Err("not equal to the referenced line up to boxed conjunctions".into());
            }
        }
        Rule::Prem => {
            arity(0)?;
            let nf = norm(f);
            if !p.premises.iter().any(|q| norm(q) == nf) {
                return Err("not a premise".into());
            }
        }
    }
    Ok(())
}

/// Checks every line; the first failing line is reported.
pub fn check_proof(p: &HilbertProof) -> Result<(), BadLine> {
    if p.lines.is_empty() {
        return Err(BadLine { index: 0, reason: "empty proof".into() });
    }
    (0..p.lines.len()).try_for_each(|index| {
        check_line(p, index).map_err(|reason| BadLine { index, reason })
    })
}

/// Checks `p` and that its last line is `target` up to boxed conjunctions.
pub fn check_proof_of(p: &HilbertProof, target: &ModalFormula) -> Result<(), BadLine> {
    check_proof(p)?;
    let last = p.lines.len() - 1;
    if norm(&p.lines[last].formula) != norm(target) {
        return Err(BadLine {
            index: last,
            reason: format!("proves {} rather than {target}", p.lines[last].formula),
        });
    }
    Ok(())
}

/// Worked derivations and their targets.
pub mod fixtures {
    use super::*;
    use crate::modal::rn_rule;
    use crate::syntax::{godel_translate, parse_prop};

    /// The translated congruence axiom `(p <-> q) -> (~p <-> ~q)` in NS4.
    pub fn n_axiom() -> (HilbertProof, ModalFormula) {
        let x = "[]([]p <-> []q)";
        let y = "([n][]p <-> [n][]q)";
        let lines = vec![
            ProofLine::new(&format!("{x} -> {y}"), Rule::Cong, &[]),
            ProofLine::new(&format!("[]{x} -> []{y}"), Rule::Reg, &[0]),
            ProofLine::new(&format!("{x} -> []{x}"), Rule::Four, &[]),
            ProofLine::new(&format!("{x} -> []{y}"), Rule::Pc, &[1, 2]),
            ProofLine::new(&format!("[]({x} -> []{y})"), Rule::Nec, &[3]),
        ];
        let target = godel_translate(&parse_prop("(p <-> q) -> (~p <-> ~q)").expect("axiom"));
        (HilbertProof { system: System::NS4, premises: vec![], lines }, target)
    }

    /// The translated contraposition axiom `(p -> q) -> (~q -> ~p)` in CoS4.
    pub fn copc_axiom() -> (HilbertProof, ModalFormula) {
        let x = "[]([]p -> []q)";
        let y = "([n][]q -> [n][]p)";
        let lines = vec![
            ProofLine::new(&format!("{x} -> {y}"), Rule::Anti, &[]),
            ProofLine::new(&format!("[]{x} -> []{y}"), Rule::Reg, &[0]),
            ProofLine::new(&format!("{x} -> []{x}"), Rule::Four, &[]),
            ProofLine::new(&format!("{x} -> []{y}"), Rule::Pc, &[1, 2]),
            ProofLine::new(&format!("[]({x} -> []{y})"), Rule::Nec, &[3]),
        ];
        let target = godel_translate(&parse_prop("(p -> q) -> (~q -> ~p)").expect("axiom"));
        (HilbertProof { system: System::CoS4, premises: vec![], lines }, target)
    }

    /// The conclusion of `R_n` from its premise in NS4, `n >= 1`.
    pub fn rn(n: usize) -> (HilbertProof, ModalFormula) {
        assert!(n >= 1, "the rule needs at least one guard");
        let (premise, conclusion) = rn_rule(n);
        let ps: Vec<String> = (1..=n).map(|i| format!("[n]p{i}")).collect();
        let guard = ps.join(" & ");
        let boxed = ps.iter().map(|p| format!("[]{p}")).collect::<Vec<_>>().join(" & ");
        let mut lines = vec![ProofLine {
            formula: premise.clone(),
            rule: Rule::Prem,
            refs: vec![],
        }];
        for p in &ps {
            lines.push(ProofLine::new(&format!("{p} -> []{p}"), Rule::Up, &[]));
        }
        let ups: Vec<usize> = (1..=n).collect();
        let a = n + 2;
        lines.extend([
            ProofLine::new(&format!("{guard} -> {boxed}"), Rule::Pc, &ups),
            ProofLine::new(&format!("{guard} -> []({guard})"), Rule::BoxConj, &[n + 1]),
            ProofLine::new(&format!("[]({guard}) -> [](q <-> r)"), Rule::Reg, &[0]),
            ProofLine::new("[](q <-> r) -> ([n]q <-> [n]r)", Rule::Cong, &[]),
            ProofLine::new(&format!("[]({guard}) -> ([n]q <-> [n]r)"), Rule::Pc, &[a + 1, a + 2]),
            ProofLine::new(&format!("{guard} -> ([n]q <-> [n]r)"), Rule::Pc, &[a, a + 3]),
        ]);
        (HilbertProof { system: System::NS4, premises: vec![premise], lines }, conclusion)
    }

    pub fn all() -> Vec<(&'static str, HilbertProof, ModalFormula)> {
        let (a, ta) = n_axiom();
        let (b, tb) = rn(1);
        let (c, tc) = copc_axiom();
        vec![("n-axiom-ns4", a, ta), ("rule-r1-ns4", b, tb), ("copc-axiom-cos4", c, tc)]
    }

    fn rename(f: &ModalFormula, from: &str, to: &str) -> ModalFormula {
        f.substitute(&BTreeMap::from([(from.to_owned(), ModalFormula::var(to))]))
    }

    /// Single-line edits of `p`: each changes one line's formula, rule or
    /// references. Edits that leave the line unchanged are skipped.
    pub fn single_line_mutations(p: &HilbertProof) -> Vec<HilbertProof> {
        use ModalFormula as M;
        let vars: Vec<String> = p
            .lines
            .iter()
            .flat_map(|l| l.formula.vars())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out = Vec::new();
        let mut push = |i: usize, line: ProofLine| {
            if line != p.lines[i] {
                let mut q = p.clone();
                q.lines[i] = line;
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        };
        for (i, line) in p.lines.iter().enumerate() {
            let with = |formula: ModalFormula| ProofLine { formula, ..line.clone() };
            if let Some(v) = vars.first() {
                push(i, with(rename(&line.formula, v, &format!("{v}_"))));
            }
            push(i, with(M::nec(line.formula.clone())));
            match &line.formula {
                M::Imp(a, b) => {
                    push(i, with(M::imp((**b).clone(), (**a).clone())));
                    push(i, with(M::imp(M::nec((**a).clone()), (**b).clone())));
                }
                M::Nec(a) => push(i, with(M::neg_box((**a).clone()))),
                _ => {}
            }
            push(i, ProofLine { rule: Rule::Taut, refs: vec![], ..line.clone() });
            if i > 0 {
                let mut refs = line.refs.clone();
                if let Some(r) = refs.first_mut() {
                    *r = (*r + 1) % i;
                    push(i, ProofLine { refs, ..line.clone() });
                }
            }
        }
        out
    }
}
