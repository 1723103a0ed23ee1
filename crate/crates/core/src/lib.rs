//! Exact computation in the free diagonalizable algebra of ultimately-constant
//! binary sequences.
//!
//! - [`element`]: canonical sequences, Boolean operations, `Δ`, `□`, `∇`.
//! - [`formula`]: syntax, parsing, printing, substitution, desugaring.
//! - [`eval`]: exact evaluation under assignments.
//! - [`decide`]: transducer-based decision procedure for quasi-identities,
//!   with lasso counterexamples and a brute-force oracle.
//! - [`expressibility`]: the classes `K_i` and the certificate that each is
//!   parametrically precomplete.

pub mod decide;
pub mod element;
pub mod eval;
pub mod expressibility;
pub mod formula;

pub use decide::{brute_force, decide, replay, Equation, Lasso, QuasiQuery, Transducer, Verdict};
pub use element::{Bitvector, Element};
pub use eval::{evaluate, evaluate_closed, holds_equation, Assignment, EvalError};
pub use expressibility::{
    member_k, synthesize_term, verify_precompleteness, ClassId, PrecompletenessReport,
};
pub use formula::{parse, Formula, ParseError};
