//! Finite posets, N-frames and N-models: the order-plus-negation semantics of
//! the logics between N and MPC.

mod enumerate;
pub mod json;
mod model;
pub(crate) mod nframe;
mod poset;
mod search;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::Bits;
use crate::syntax::{parse_prop, Formula};

pub use enumerate::{for_each_ntable, labeled_posets, ntables, unlabeled_posets};
pub use model::{
    eval, eval_all, frame_class, frame_validates, refuting_valuation, NModel, Refutation,
};
pub use nframe::{
    check_nframe, footnote_violation, from_neighbourhood, locality_violation, to_neighbourhood,
    NFrame, Neighbourhood,
};
pub use poset::Poset;
pub use search::{
    countermodel_search, countermodel_search_with, Countermodel, SearchConfig, SearchError,
    MAX_SEARCH_WORLDS,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("too many worlds: {0} (at most 64)")]
    TooManyWorlds(usize),
    #[error("world {0} out of range")]
    WorldOutOfRange(usize),
    #[error("order is not reflexive at world {0}")]
    NotReflexive(usize),
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(usize, usize),
    #[error("order is not transitive: {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("{0} is not an upset")]
    NotUpset(Bits),
    #[error("N-table has no entry for upset {0}")]
    MissingEntry(Bits),
    #[error("N({key}) = {value} is not an upset")]
    ValueNotUpset { key: Bits, value: Bits },
    #[error("locality fails: N({x}) ∩ {y} != N({x} ∩ {y}) ∩ {y}")]
    Locality { x: Bits, y: Bits },
    #[error("neighbourhoods not monotone: {w} <= {v} but n({w}) ⊄ n({v})")]
    Monotonicity { w: usize, v: usize },
    #[error("neighbourhood of {w} not local at {x}")]
    NeighbourhoodLocality { w: usize, x: Bits },
    #[error("valuation of '{var}' is {value}, not an upset")]
    ValuationNotUpset { var: String, value: Bits },
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// The four logics, each given by its axiom over N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogicId {
    N,
    NeF,
    CoPC,
    Mpc,
}

impl LogicId {
    pub const ALL: [LogicId; 4] = [LogicId::N, LogicId::NeF, LogicId::CoPC, LogicId::Mpc];

    pub fn axiom_text(self) -> &'static str {
        match self {
            LogicId::N => "(p <-> q) -> (~p <-> ~q)",
            LogicId::NeF => "p & ~p -> ~q",
            LogicId::CoPC => "(p -> q) -> ~q -> ~p",
            LogicId::Mpc => "(p -> ~p) -> ~p",
        }
    }

    pub fn axiom(self) -> Formula {
        parse_prop(self.axiom_text()).expect("built-in axiom parses")
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicId::N => "N",
            LogicId::NeF => "NeF",
            LogicId::CoPC => "CoPC",
            LogicId::Mpc => "MPC",
        })
    }
}

impl FromStr for LogicId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "n" => Ok(LogicId::N),
            "nef" => Ok(LogicId::NeF),
            "copc" => Ok(LogicId::CoPC),
            "mpc" => Ok(LogicId::Mpc),
            _ => Err(format!("unknown logic '{s}' (expected n, nef, copc or mpc)")),
        }
    }
}
