//! Recursive-descent parser.
//!
//! Precedence, tightest first: `~ [] [n]`, `&`, `|`, `->` (right-assoc),
//! `<->`. `&`, `|` and `<->` associate to the left. `<->` is desugared to a
//! conjunction of implications; in the modal language `~f` is desugared to
//! `f -> F`.

use std::str::FromStr;

use thiserror::Error;

use super::{Formula, ModalFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Language {
    Prop,
    Modal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Prop(Formula),
    Modal(ModalFormula),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Not,
    Nec,
    NegBox,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'T' => Tok::Top,
            b'F' => Tok::Bot,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Imp
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 1;
                Tok::Nec
            }
            b'[' if bytes.get(i + 1) == Some(&b'n') && bytes.get(i + 2) == Some(&b']') => {
                i += 2;
                Tok::NegBox
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let name = text[i..j].to_owned();
                i = j;
                out.push((Tok::Ident(name), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(i, format!("unexpected character '{ch}'")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    Ok(out)
}

/// Surface tree, before desugaring into either language.
enum Surface {
    Var(String),
    Top,
    Bot,
    Not(Box<Surface>),
    Nec(Box<Surface>),
    NegBox(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Imp(Box<Surface>, Box<Surface>),
    Iff(Box<Surface>, Box<Surface>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    lang: Language,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Surface::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Surface, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Surface::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Surface::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Surface, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Surface::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn modal_only(&self, what: &str) -> Result<(), ParseError> {
        match self.lang {
            Language::Modal => Ok(()),
            Language::Prop => Err(ParseError::new(
                self.pos(),
                format!("{what} is not part of the propositional language"),
            )),
        }
    }

    fn unary(&mut self) -> Result<Surface, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::new(pos, "unexpected end of input"));
        };
        match tok {
            Tok::Not => {
                self.at += 1;
                Ok(Surface::Not(Box::new(self.unary()?)))
            }
            Tok::Nec => {
                self.modal_only("'[]'")?;
                self.at += 1;
                Ok(Surface::Nec(Box::new(self.unary()?)))
            }
            Tok::NegBox => {
                self.modal_only("'[n]'")?;
                self.at += 1;
                Ok(Surface::NegBox(Box::new(self.unary()?)))
            }
            Tok::Ident(name) => {
                self.at += 1;
                Ok(Surface::Var(name))
            }
            Tok::Top => {
                self.at += 1;
                Ok(Surface::Top)
            }
            Tok::Bot => {
                self.modal_only("falsum 'F'")?;
                self.at += 1;
                Ok(Surface::Bot)
            }
            Tok::LParen => {
                self.at += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(ParseError::new(self.pos(), "expected ')'"));
                }
                Ok(inner)
            }
            other => Err(ParseError::new(pos, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::And => "'&'",
        Tok::Or => "'|'",
        Tok::Imp => "'->'",
        Tok::Iff => "'<->'",
        Tok::RParen => "')'",
        _ => "token",
    }
}

fn to_prop(s: Surface) -> Formula {
    match s {
        Surface::Var(v) => Formula::Var(v),
        Surface::Top => Formula::Top,
        Surface::Not(a) => Formula::neg(to_prop(*a)),
        Surface::And(a, b) => Formula::and(to_prop(*a), to_prop(*b)),
        Surface::Or(a, b) => Formula::or(to_prop(*a), to_prop(*b)),
        Surface::Imp(a, b) => Formula::imp(to_prop(*a), to_prop(*b)),
        Surface::Iff(a, b) => Formula::iff(to_prop(*a), to_prop(*b)),
        Surface::Bot | Surface::Nec(_) | Surface::NegBox(_) => {
            unreachable!("rejected while parsing the propositional language")
        }
    }
}

fn to_modal(s: Surface) -> ModalFormula {
    use ModalFormula as M;
    match s {
        Surface::Var(v) => M::Var(v),
        Surface::Top => M::Top,
        Surface::Bot => M::Bot,
        Surface::Not(a) => M::not(to_modal(*a)),
        Surface::Nec(a) => M::nec(to_modal(*a)),
        Surface::NegBox(a) => M::neg_box(to_modal(*a)),
        Surface::And(a, b) => M::and(to_modal(*a), to_modal(*b)),
        Surface::Or(a, b) => M::or(to_modal(*a), to_modal(*b)),
        Surface::Imp(a, b) => M::imp(to_modal(*a), to_modal(*b)),
        Surface::Iff(a, b) => M::iff(to_modal(*a), to_modal(*b)),
    }
}

fn parse_surface(text: &str, lang: Language) -> Result<Surface, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        lang,
    };
    let s = p.iff()?;
    if p.at != p.toks.len() {
        let (tok, pos) = &p.toks[p.at];
        return Err(ParseError::new(*pos, format!("unexpected {} after formula", describe(tok))));
    }
    Ok(s)
}

pub fn parse(text: &str, lang: Language) -> Result<Parsed, ParseError> {
    let s = parse_surface(text, lang)?;
    Ok(match lang {
        Language::Prop => Parsed::Prop(to_prop(s)),
        Language::Modal => Parsed::Modal(to_modal(s)),
    })
}

pub fn parse_prop(text: &str) -> Result<Formula, ParseError> {
    parse_surface(text, Language::Prop).map(to_prop)
}

pub fn parse_modal(text: &str) -> Result<ModalFormula, ParseError> {
    parse_surface(text, Language::Modal).map(to_modal)
}

impl FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_prop(s)
    }
}

impl FromStr for ModalFormula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_modal(s)
    }
}
