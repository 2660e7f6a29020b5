//! Construction, testing and certification of self-inversive polynomials
//! with all zeros on the unit circle.
//!
//! Everything runs on MPFR-backed floats at a caller-chosen binary
//! precision (see [`complex::DEFAULT_PRECISION`]).

mod error;

pub mod certify;
pub mod complex;
pub mod criteria;
pub mod families;
pub mod poly;
pub mod roots;
pub mod special;

pub use complex::{Coefficient, DEFAULT_PRECISION, MIN_PRECISION};
pub use certify::{CircleBound, Lemma2Certificate};
pub use criteria::{CriterionId, CriterionVerdict};
pub use error::{Error, Result};
pub use families::{FamilyDecomposition, FamilyId, FamilySequences};
pub use poly::{Polynomial, SelfInversiveForm};
pub use roots::RootReport;
pub use special::{ExactRational, RealValue};
