//! Raw finite and mixed infinitary terms over a signature.

mod env;
mod layer;
mod metric;
mod mixed;

use thiserror::Error;

pub use env::{Expr, TermEnv};
pub(crate) use env::ENode;
pub use layer::{Arg, FiniteTerm, Layer, Op, Slot, Truncation};
pub use metric::{an_distance, first_difference, Comparison, MetricResult};
pub(crate) use metric::distance;
pub use mixed::{Deferred, MixedTerm, Seeded};
pub(crate) use mixed::check_arity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("undefined name `{0}`")]
    UndefinedName(String),
    #[error("name `{0}` is defined twice")]
    DuplicateName(String),
    #[error("unguarded recursion: {}", .0.join(" -> "))]
    Unguarded(Vec<String>),
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(String),
    #[error("constructor `{op}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {arg} of `{op}` binds {expected} atoms, found {found}")]
    BinderMismatch {
        op: String,
        arg: usize,
        expected: usize,
        found: usize,
    },
    #[error("hole `_` is not allowed in a term")]
    UnexpectedHole,
}
