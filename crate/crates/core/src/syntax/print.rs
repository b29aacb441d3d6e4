//! Printing with the fewest parentheses that still parse back to the same tree.

use std::fmt::{self, Display, Formatter, Write};

use super::{Formula, ModalFormula};

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn paren(out: &mut Formatter<'_>, open: bool, c: char) -> fmt::Result {
    if open {
        out.write_char(c)?;
    }
    Ok(())
}

fn iff_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::And(l, r) = f {
        if let (Formula::Imp(a, b), Formula::Imp(c, d)) = (&**l, &**r) {
            if a == d && b == c {
                return Some((a, b));
            }
        }
    }
    None
}

fn level(f: &Formula) -> u8 {
    if iff_parts(f).is_some() {
        return IFF;
    }
    match f {
        Formula::Var(_) | Formula::Top | Formula::Neg(_) => UNARY,
        Formula::And(..) => AND,
        Formula::Or(..) => OR,
        Formula::Imp(..) => IMP,
    }
}

fn write_prop(out: &mut Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    let lv = level(f);
    paren(out, lv < min, '(')?;
    if let Some((a, b)) = iff_parts(f) {
        write_prop(out, a, IFF)?;
        out.write_str(" <-> ")?;
        write_prop(out, b, IFF + 1)?;
    } else {
        match f {
            Formula::Var(v) => out.write_str(v)?,
            Formula::Top => out.write_char('T')?,
            Formula::Neg(a) => {
                out.write_char('~')?;
                write_prop(out, a, UNARY)?;
            }
            Formula::And(a, b) => {
                write_prop(out, a, AND)?;
                out.write_str(" & ")?;
                write_prop(out, b, AND + 1)?;
            }
            Formula::Or(a, b) => {
                write_prop(out, a, OR)?;
                out.write_str(" | ")?;
                write_prop(out, b, OR + 1)?;
            }
            Formula::Imp(a, b) => {
                write_prop(out, a, IMP + 1)?;
                out.write_str(" -> ")?;
                write_prop(out, b, IMP)?;
            }
        }
    }
    paren(out, lv < min, ')')
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_prop(f, self, 0)
    }
}

fn modal_iff_parts(f: &ModalFormula) -> Option<(&ModalFormula, &ModalFormula)> {
    if let ModalFormula::And(l, r) = f {
        if let (ModalFormula::Imp(a, b), ModalFormula::Imp(c, d)) = (&**l, &**r) {
            if a == d && b == c {
                return Some((a, b));
            }
        }
    }
    None
}

fn modal_level(f: &ModalFormula) -> u8 {
    use ModalFormula as M;
    if modal_iff_parts(f).is_some() {
        return IFF;
    }
    match f {
        M::Imp(_, b) if **b == M::Bot => UNARY,
        M::Var(_) | M::Top | M::Bot | M::Nec(_) | M::NegBox(_) => UNARY,
        M::And(..) => AND,
        M::Or(..) => OR,
        M::Imp(..) => IMP,
    }
}

fn write_modal(out: &mut Formatter<'_>, f: &ModalFormula, min: u8) -> fmt::Result {
    use ModalFormula as M;
    let lv = modal_level(f);
    paren(out, lv < min, '(')?;
    if let Some((a, b)) = modal_iff_parts(f) {
        write_modal(out, a, IFF)?;
        out.write_str(" <-> ")?;
        write_modal(out, b, IFF + 1)?;
    } else {
        match f {
            M::Var(v) => out.write_str(v)?,
            M::Top => out.write_char('T')?,
            M::Bot => out.write_char('F')?,
            M::Imp(a, b) if **b == M::Bot => {
                out.write_char('~')?;
                write_modal(out, a, UNARY)?;
            }
            M::Nec(a) => {
                out.write_str("[]")?;
                write_modal(out, a, UNARY)?;
            }
            M::NegBox(a) => {
                out.write_str("[n]")?;
                write_modal(out, a, UNARY)?;
            }
            M::And(a, b) => {
                write_modal(out, a, AND)?;
                out.write_str(" & ")?;
                write_modal(out, b, AND + 1)?;
            }
            M::Or(a, b) => {
                write_modal(out, a, OR)?;
                out.write_str(" | ")?;
                write_modal(out, b, OR + 1)?;
            }
            M::Imp(a, b) => {
                write_modal(out, a, IMP + 1)?;
                out.write_str(" -> ")?;
                write_modal(out, b, IMP)?;
            }
        }
    }
    paren(out, lv < min, ')')
}

impl Display for ModalFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_modal(f, self, 0)
    }
}
