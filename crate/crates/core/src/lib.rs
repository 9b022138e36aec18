//! Exact closure computations in prime characteristic.
//!
//! * [`ffield`]: arithmetic in GF(p^s) and univariate squarefree analysis.
//! * [`graded`]: per-degree linear algebra on standard-graded quotients,
//!   Frobenius powers and closures, and the branch count of a reduced
//!   one-dimensional graded ring.
//! * [`oracle`]: independent branch counts for plane curves and coordinate
//!   axes.
//! * [`semigroup`]: affine semigroups, their saturation and weak
//!   normalization, F-nilpotence verdicts, tight closure of monomial ideals
//!   and Frobenius test exponents.

pub mod ffield;
pub mod graded;
pub mod grammar;
pub mod oracle;
pub mod semigroup;

pub use ffield::{FieldDescriptor, FieldElement, FieldError, UniPoly};
