//! Standard-graded quotients `k[x_1..x_n]/I` handled one homogeneous degree
//! at a time: Hilbert functions, multiplicity, linear reductions of the
//! irrelevant ideal, Frobenius powers and closures, and branch counts.

mod closure;
mod linalg;
mod poly;
mod quotient;

use thiserror::Error;

use crate::ffield::FieldError;

pub use closure::{
    branch_count, closure_quotient_dim, find_linear_reduction, frobenius_closure_membership,
    frobenius_closure_membership_capped, frobenius_power, is_linear_reduction, probe_power_closure, reducedness,
    BranchOptions, BranchReport, ClosureMembership, LinearReduction, Reducedness, SliceProbe, DEFAULT_DEGREE_CAP,
    DEFAULT_S_MAX,
};
pub use linalg::Echelon;
pub use poly::{monomial_count, HomogPoly, Monomial};
pub use quotient::{DegreeSlice, GradedQuotient, Stabilization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("Hilbert function does not settle at a positive value up to degree {cap}; the ring is not one-dimensional")]
    NotOneDimensional { cap: u32 },
    #[error("no linear reduction over extensions of degree up to {0}")]
    NoReductionFound(usize),
    #[error("x^{n} vanishes in the ring")]
    PowerVanishes { n: u32 },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: u64, cap: u64 },
    #[error("power {n} is below the reduction index {index}")]
    BelowReductionIndex { n: u32, index: u32 },
    #[error("the linear form is not a reduction of the irrelevant ideal")]
    NotAReduction,
    #[error("term '{term}' at offset {position} has degree {found}, expected {expected}")]
    NotHomogeneous { position: usize, term: String, expected: u32, found: u32 },
    #[error("variable count mismatch")]
    VariableCountMismatch,
    #[error("expected a nonzero linear form")]
    NotLinearForm,
    #[error("parse error at offset {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}
