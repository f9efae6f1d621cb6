//! Matrix groups SU(r) and SL(r, C), their Lie algebras, the adjoint action,
//! invariant pairings and random sampling.

mod algebra;
mod expm;
mod group;
mod haar;

pub use algebra::{adjoint, adjoint_matrix, algebra_basis, pairing, AlgebraElement, InvariantPairing};
pub use expm::{dexp_right, exp, expm, log_near_identity, log_principal, logm, sqrtm};
pub use group::{Family, GroupElement, GroupSpec};
pub use haar::{gaussian_algebra, haar_sample, random_element};
