//! Galois structure of `F(ζ_{2^e})/F` for finite fields, cyclotomic fields `Q(ζ_m)` and
//! quadratic fields `Q(√d)`.
//!
//! The [`classifier`] decides from two base-field invariants (`ν⁺` and `ν`) whether the
//! extension is cyclic, and describes its degree, Galois group, codegree-2 subextensions,
//! minimal polynomials and every maximal tower of quadratic steps. The [`oracle`] recomputes the
//! same objects from first principles (explicit subgroups of `(Z/2^e)^×`, concrete finite-field
//! arithmetic) so the two can be compared.

pub mod base_field;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod oracle;
pub mod towers;
pub mod unit_group;

pub use base_field::{BaseField, FieldFamily, TauSign};
pub use classifier::{classify, Classification, FieldLabel, Outcome};
pub use error::{Error, Result};
pub use invariants::Invariants;
pub use towers::TowerDecomposition;
pub use unit_group::{Sign, UnitClass, UnitSubgroup};
