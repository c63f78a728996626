//! Finitely presented groups with a decidable normal form.

pub mod abelian;
pub mod affine;
pub mod context;
pub mod parse;
pub mod presentation;
pub mod quotient;
pub mod raag;
pub mod rewriting;
pub mod subgroup;
pub mod word;

use thiserror::Error;

pub use abelian::{free_abelianization, Abelianization};
pub use context::{GroupContext, GroupElement};
pub use parse::parse_presentation;
pub use presentation::{GroupPresentation, NormalFormEngine};
pub use quotient::{FiniteGroup, FiniteQuotient};
pub use subgroup::subgroup_presentation;
pub use word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared generator `{name}` at {line}:{col}")]
    UndeclaredGenerator { name: String, line: usize, col: usize },
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("normal form engine rejected: {0}")]
    EngineRejected(String),
    #[error("rewriting system is not locally confluent (overlap {overlap:?})")]
    NotConfluent { overlap: Word },
    #[error("rewriting exceeded the step budget of {0}")]
    StepBudgetExceeded(usize),
    #[error("relator {0} does not reduce to the identity")]
    RelatorNotTrivial(usize),
    #[error("invalid quotient: {0}")]
    QuotientInvalid(String),
    #[error("quotient of order {order} exceeds the bound {bound}")]
    QuotientTooLarge { order: usize, bound: usize },
    #[error("element does not lie in the subgroup")]
    NotInSubgroup,
    #[error("word uses generator {0} outside the alphabet")]
    BadGenerator(usize),
}
