//! Exact invariants of line arrangements in the projective plane.
//!
//! The crate computes intersection lattices over `Q`, number fields and
//! prime fields, combinatorial screens for freeness and plus-one
//! generation, and the minimal generator degrees of the Jacobian syzygy
//! module by exact or multi-prime linear algebra.

pub mod arrangement;
pub mod catalog;
pub mod combinatorics;
pub mod deletion;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod serde_int;
pub mod syzygy;

pub use arrangement::{parse_arrangement, Arrangement, IntersectionPoint, ProjectiveLine, WeakCombinatorics};
pub use field::{FieldDescriptor, FieldScalar, Specialization};
pub use poly::{defining_polynomial, jacobian, HomogeneousPoly};
pub use syzygy::{classify, classify_with, Classification, ClassifyOptions, ResolutionProfile, VerificationMode};
