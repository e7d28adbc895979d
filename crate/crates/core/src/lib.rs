//! Eligibility predicates for Hilbert–Grunwald extensions of finite groups,
//! tame local Galois theory over `Q_p`, and a finite-field oracle for the
//! local invariants of specialized Kummer covers `X^d - c t^m`.
//!
//! Modules:
//! - [`group`]: Cayley-table groups, obstruction detectors, Sylow shapes,
//!   Frobenius decompositions and classification reports.
//! - [`local_tame`]: tame pairs `σ^-1 τ σ = τ^q`, cyclic tame extensions, local
//!   Grunwald feasibility and the `C_4`-embedding criterion.
//! - [`covers`]: branch data and specialization predictions for Kummer covers.
//! - [`oracle`]: finite fields, discrete logarithms and Kummer local invariants.
//! - [`strata`]: prime strata `gcd(d, p-1) = e`, cyclotomic prime sets and
//!   biquadratic splitting.

pub mod arith;
pub mod covers;
pub mod group;
pub mod local_tame;
pub mod oracle;
pub mod strata;

pub use arith::Rational;
pub use covers::{BranchPoint, KummerCover, SpecializationReport};
pub use group::{classify, ClassificationReport, FiniteGroup};
pub use local_tame::{LocalExtensionSpec, TamePair};
pub use oracle::{FieldElement, FiniteField, KummerLocalInvariants};
pub use strata::PrimeStratum;
