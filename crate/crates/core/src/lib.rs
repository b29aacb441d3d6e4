//! Semantics and decision procedures for subminimal logics of negation: N-frames
//! and their models, filtrations, N-algebras and their duality with top frames,
//! the antichain of finite frames behind the continuum of N-logics, and the
//! bi-modal companions NS4 and CoS4.

pub mod algebra;
pub mod antichain;
pub mod bits;
pub mod par;
pub mod filtration;
pub mod frames;
pub mod modal;
pub mod syntax;

pub use bits::{Bits, WorldSet};
pub use par::Exec;
pub use frames::{LogicId, NFrame, NModel, Poset};
pub use syntax::{Formula, ModalFormula};
