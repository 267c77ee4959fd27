//! Decide whether a positive integer is integrally represented by a
//! diagonal binary quadratic form `ax² + by²`, and explain the answer.
//!
//! The pipeline combines three independent sources of truth:
//!
//! * [`local`]: solvability over every completion of ℚ;
//! * [`forms`] and [`classpoly`]: the form class group of `-4ab` and the
//!   ring class polynomial, whose factorization pattern modulo a prime gives
//!   the order of Frobenius in the class group;
//! * a complete bounded search, which is exact because the forms are
//!   positive definite.
//!
//! [`decision`] glues these together into a [`decision::DecisionReport`].
//! [`pell`] and [`quadfield`] cover the unit-norm equations `x² - dy² = u`
//! and exact arithmetic over imaginary quadratic rings of integers.

pub mod arith;
pub mod classpoly;
pub mod decision;
pub mod error;
pub mod forms;
pub mod local;
pub mod pell;
pub mod quadfield;
pub(crate) mod serde_big;

pub use arith::{factorize, Factorization};
pub use classpoly::{class_polynomial, degree_pattern, FactorPattern, IntPolynomial};
pub use decision::{criterion_2_7, decide, DecisionReport, Verdict};
pub use error::{Error, Result};
pub use forms::{FormClassGroup, QuadForm};
pub use local::{local_everywhere, LocalVerdict};
pub use pell::{CfExpansion, PellOutcome, PellSolution};
pub use quadfield::QuadInt;
