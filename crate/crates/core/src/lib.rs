//! Mixed inductive–coinductive terms with binders.
//!
//! Terms are built over a [`Signature`] whose constructors take arguments
//! that may bind atoms and may be inductive (finitely deep) or coinductive
//! (possibly infinitely deep). Infinite terms are represented lazily as
//! [`MixedTerm`]s and observed through depth-bounded truncations, on which
//! the Arnold–Nivat metric, α-equivalence and capture-avoiding substitution
//! are defined.

pub mod alpha;
pub mod nominal;
pub mod signature;
pub mod subst;
pub mod syntax;
pub mod term;
#[cfg(feature = "testgen")]
pub mod testgen;

pub use alpha::{alpha_distance, alpha_eq_finite, alpha_eq_regular, alpha_eq_trunc, alpha_eq_upto};
pub use nominal::{fresh, Abstraction, Atom, Nominal, Permutable, Permutation, SupportSet};
pub use signature::{ArgSpec, Constructor, Mode, Signature};
pub use subst::subst;
pub use term::{an_distance, Expr, FiniteTerm, MetricResult, MixedTerm, TermEnv, TermError, Truncation};
