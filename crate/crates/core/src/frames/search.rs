//! Bounded search for finite countermodels.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use thiserror::Error;

use crate::par::{self, Exec};
use crate::syntax::{Dag, Formula};

use super::enumerate::{for_each_ntable, labeled_posets};
use super::model::{frame_class_by_axiom, is_antitone, is_nef, refute_dag};
use super::{LogicId, NFrame, NModel};

/// Largest world count the exhaustive search accepts.
pub const MAX_SEARCH_WORLDS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search bound of {requested} worlds exceeds the limit of {limit}")]
    TooLarge { requested: usize, limit: usize },
    #[error("search deadline exceeded")]
    Timeout,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_worlds: usize,
    pub deadline: Option<Instant>,
    pub exec: Exec,
}

impl SearchConfig {
    pub fn new(max_worlds: usize) -> SearchConfig {
        SearchConfig {
            max_worlds,
            deadline: None,
            exec: Exec::default(),
        }
    }
}

/// A model and a world of it where the formula fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: NModel,
    pub world: usize,
}

pub(crate) fn in_class(fr: &NFrame, l: LogicId) -> bool {
    match l {
        LogicId::N => true,
        LogicId::NeF => is_nef(fr),
        LogicId::CoPC => is_antitone(fr),
        LogicId::Mpc => frame_class_by_axiom(fr, l, Exec::Sequential),
    }
}

/// The least countermodel to `f` on an `l`-frame with at most `max_worlds`
/// worlds, or `None` if there is none.
///
/// Candidates are ordered by world count, then by order code (see
/// [`labeled_posets`]), then by N-table (see [`for_each_ntable`]), then by
/// valuation; the world is the least one refuting `f`.
pub fn countermodel_search(
    l: LogicId,
    f: &Formula,
    max_worlds: usize,
) -> Result<Option<Countermodel>, SearchError> {
    countermodel_search_with(l, f, &SearchConfig::new(max_worlds))
}

pub fn countermodel_search_with(
    l: LogicId,
    f: &Formula,
    cfg: &SearchConfig,
) -> Result<Option<Countermodel>, SearchError> {
    if cfg.max_worlds > MAX_SEARCH_WORLDS {
        return Err(SearchError::TooLarge {
            requested: cfg.max_worlds,
            limit: MAX_SEARCH_WORLDS,
        });
    }
    let dag = Dag::new(f);
    let expired = AtomicBool::new(false);
    let past_deadline = || cfg.deadline.is_some_and(|d| Instant::now() >= d);
    for k in 1..=cfg.max_worlds {
        let posets = labeled_posets(k);
        let found = par::find_first(cfg.exec, posets.len(), |i| {
            let mut hit = None;
            for_each_ntable(&posets[i], |fr| {
                if expired.load(Ordering::Relaxed) || past_deadline() {
                    expired.store(true, Ordering::Relaxed);
                    return false;
                }
                if !in_class(&fr, l) {
                    return true;
                }
                match refute_dag(&fr, &dag, Exec::Sequential) {
                    Some(r) => {
                        let model = NModel {
                            frame: fr,
                            valuation: r.valuation,
                        };
                        hit = Some(Countermodel {
                            model,
                            world: r.world,
                        });
                        false
                    }
                    None => true,
                }
            });
            hit
        });
        if expired.load(Ordering::Relaxed) {
            return Err(SearchError::Timeout);
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use std::time::Duration;

    use super::*;
    use crate::bits::Bits;
    use crate::frames::nframe::tests::two_point;
    use crate::frames::{eval, frame_class};

    #[test]
    fn nef_countermodel_to_contraposition_is_the_two_point_frame() {
        let c = countermodel_search(LogicId::NeF, &LogicId::CoPC.axiom(), 2)
            .unwrap()
            .unwrap();
        assert!(c.model.frame.isomorphism(&two_point()).is_some());
        assert!(frame_class(&c.model.frame, LogicId::NeF));
        assert!(!eval(&c.model, &LogicId::CoPC.axiom()).contains(c.world));
    }

    #[test]
    fn class_axioms_have_no_countermodel() {
        assert_eq!(countermodel_search(LogicId::N, &LogicId::N.axiom(), 3), Ok(None));
        assert_eq!(countermodel_search(LogicId::CoPC, &LogicId::CoPC.axiom(), 3), Ok(None));
    }

    #[test]
    fn copc_refutes_mpc_axiom() {
        let c = countermodel_search(LogicId::CoPC, &LogicId::Mpc.axiom(), 3)
            .unwrap()
            .unwrap();
        assert!(frame_class(&c.model.frame, LogicId::CoPC));
        assert!(!eval(&c.model, &LogicId::Mpc.axiom()).contains(c.world));
        // One world with N constantly empty: p = W gives p -> ~p = ∅.
        assert_eq!(c.model.frame.size(), 1);
        assert_eq!(c.model.frame.table_values(), &[Bits(0), Bits(0)]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = crate::syntax::parse_prop("~p -> ~~~p").unwrap();
        for l in LogicId::ALL {
            let mut cfg = SearchConfig::new(3);
            cfg.exec = Exec::Sequential;
            let a = countermodel_search_with(l, &f, &cfg);
            cfg.exec = Exec::Parallel;
            assert_eq!(a, countermodel_search_with(l, &f, &cfg), "{l}");
        }
    }

    #[test]
    fn limits_are_explicit() {
        assert!(matches!(
            countermodel_search(LogicId::N, &LogicId::N.axiom(), 6),
            Err(SearchError::TooLarge { .. })
        ));
        let mut cfg = SearchConfig::new(4);
        cfg.deadline = Some(Instant::now() - Duration::from_millis(1));
        assert_eq!(
            countermodel_search_with(LogicId::N, &LogicId::N.axiom(), &cfg),
            Err(SearchError::Timeout)
        );
    }
}
