//! Counting equivalence classes of rational functions and polynomials over
//! finite fields, with brute-force oracles for every closed form.
//!
//! Two rational functions `f, g` over `F_q` are equivalent when
//! `g = phi o f o psi` for degree-one `phi` and `psi`. Closed forms live in
//! [`counting`]; [`oracle`] recomputes the same numbers by enumeration.

pub mod classify;
pub mod counting;
pub mod gf;
pub mod numtheory;
pub mod oracle;
pub mod polyring;
pub mod ratmap;

pub use counting::{AffineClass, BigCount, CountError};
pub use gf::{Elem, ExtFieldCtx, FieldCtx, FieldError};
pub use oracle::{ConjClassRep, OracleError, VerificationReport, VerifyKind};
pub use polyring::{PolyError, PolyRing, Polynomial};
pub use ratmap::{MoebiusTransform, RatError, RationalMap, SubfieldKey, DEFAULT_KEY_BUDGET};
