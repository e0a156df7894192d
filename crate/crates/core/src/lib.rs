//! Selection games `G_1`, `G_<ω`, `G_λ` and `G_m` played on `[0,1]`.
//!
//! Player I offers a set `P` from a family `Σ`, Player II answers with
//! `P_0 ⊆ P`, and from then on Player I picks points inside Player II's
//! latest set while Player II keeps answering with members of `Σ`. Player
//! II wins when the points converge and `f` is continuous along them.
//!
//! The crate provides exact carriers for four families (closed dyadic
//! interval unions, the same with measure bookkeeping, perfect sets given
//! by safety automata over `{0,1}`, and residual sets presented by an
//! interval carrier plus a meager schedule), a catalog of test functions
//! with exact oscillation, a referee issuing per-round certificates, and
//! the strategies that decide the game.

pub mod families;
pub mod functions;
pub mod game;
pub mod intervalsets;
pub mod numerics;
pub mod scenario;
pub mod strategies;
pub mod transcript;
pub mod treesets;

pub use families::{FamilySpec, Member, Schedule};
pub use functions::TestFunction;
pub use game::{Certificate, GameVariant, Move, Transcript};
pub use intervalsets::{DyadicInterval, IntervalSet};
pub use numerics::{EpPoint, Rat};
pub use treesets::TreeAutomaton;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("empty set")]
    Empty,
    #[error("point {0} is not in the set")]
    NotMember(String),
    #[error("refinement depth cap {0} reached without a decision")]
    DepthCapReached(u32),
    #[error("undecidable for this input: {0}")]
    Undecidable(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("strategy failure: {0}")]
    Strategy(String),
    #[error("transcript schema version {0} is not supported")]
    Schema(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
