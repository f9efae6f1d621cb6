//! Character varieties of surface groups (with boundary in prescribed conjugacy
//! classes) and of circle-bundle groups in `SU(r)` and `SL(r, C)`, modelled as
//! level sets of the relator map on matrix tuples, with the explicit symplectic
//! 2-form on their tangent spaces.
//!
//! Numerics are generic over the real scalar (`f32` or `f64`); the aliases below
//! fix `f64`.

pub mod error;
pub mod form;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod presentation;
pub mod rep;
pub mod scalar;
pub mod seifert;
pub mod tolerance;
pub mod volume;

pub use error::{Error, Result};
pub use lie::{Family, GroupSpec, InvariantPairing};
pub use presentation::{Generator, Letter, SurfacePresentation};
pub use scalar::Scalar;
pub use tolerance::Tolerances;

pub type GroupElement = lie::GroupElement<f64>;
pub type AlgebraElement = lie::AlgebraElement<f64>;
pub type GeneratorTuple = presentation::GeneratorTuple<f64>;
pub type TangentVector = presentation::TangentVector<f64>;
pub type ConjugacyClassSpec = rep::ConjugacyClassSpec<f64>;
pub type RepresentationPoint = rep::RepresentationPoint<f64>;
pub type CohomologyBasis = rep::CohomologyBasis<f64>;
pub type FormMatrix = form::FormMatrix<f64>;
pub type HolonomyCandidate = seifert::HolonomyCandidate<f64>;
