//! Points of the representation variety `{Pi = z0}` with boundary generators in
//! prescribed conjugacy classes, and the twisted cohomology at those points.

mod cohomology;
mod project;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lie::{log_principal, AlgebraElement, GroupElement, GroupSpec};
use crate::presentation::{evaluate_relator, GeneratorTuple};
use crate::scalar::{lit, CMatrix, Scalar};

pub use cohomology::{class_tangent_basis, cohomology_at, CohomologyBasis, RankWarning};
pub use project::{
    perturb_and_reproject, project_to_variety, project_with_report, random_initial, ProjectionOptions,
    ProjectionReport,
};

/// Conjugacy classes `Xi_k` of the boundary generators and the central target `z0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyClassSpec<T: Scalar> {
    representatives: Vec<GroupElement<T>>,
    target: GroupElement<T>,
}

impl<T: Scalar> ConjugacyClassSpec<T> {
    /// Fails unless `target` is a scalar matrix (the center of SU(r) and SL(r, C)).
    pub fn new(representatives: Vec<GroupElement<T>>, target: GroupElement<T>, tol: T) -> Result<Self> {
        let spec = target.spec();
        if target.as_scalar(tol).is_none() {
            return Err(Error::Precondition("relator target must be central (a scalar matrix)".into()));
        }
        if target.invariant_defect() > tol {
            return Err(Error::InvariantViolated { what: "group", defect: crate::scalar::to_f64(target.invariant_defect()) });
        }
        if let Some(bad) = representatives.iter().find(|c| c.spec() != spec) {
            return Err(Error::InvalidSpec(format!("class representative in {} but target in {spec}", bad.spec())));
        }
        Ok(Self { representatives, target })
    }

    /// No boundary, target `z0`.
    pub fn closed(target: GroupElement<T>, tol: T) -> Result<Self> {
        Self::new(Vec::new(), target, tol)
    }

    /// No boundary, target `I`.
    pub fn trivial(spec: GroupSpec) -> Self {
        Self { representatives: Vec::new(), target: GroupElement::identity(spec) }
    }

    pub fn representatives(&self) -> &[GroupElement<T>] {
        &self.representatives
    }

    pub fn target(&self) -> &GroupElement<T> {
        &self.target
    }

    pub fn spec(&self) -> GroupSpec {
        self.target.spec()
    }

    pub fn boundary_count(&self) -> usize {
        self.representatives.len()
    }

    /// Distance between the spectra of `c` and of the `k`-th representative.
    pub fn class_distance(&self, k: usize, c: &GroupElement<T>) -> T {
        spectrum_distance(&eigenvalues(c.matrix()), &eigenvalues(self.representatives[k].matrix()))
    }
}

/// Eigenvalues of a complex matrix via its Schur form, sorted by phase.
pub(crate) fn eigenvalues<T: Scalar>(m: &CMatrix<T>) -> Vec<Complex<T>> {
    let (_, tri) = m.clone().schur().unpack();
    let mut ev: Vec<Complex<T>> = (0..tri.nrows()).map(|i| tri[(i, i)]).collect();
    ev.sort_by(|a, b| a.argument().partial_cmp(&b.argument()).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Max-distance matching of two phase-sorted spectra, minimized over cyclic shifts
/// (phases wrap at `+-pi`).
pub(crate) fn spectrum_distance<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let n = a.len();
    (0..n)
        .map(|shift| {
            (0..n).map(|i| (a[i] - b[(i + shift) % n]).modulus()).fold(T::zero(), |x, y| x.max(y))
        })
        .fold(lit(f64::INFINITY), |x: T, y| x.min(y))
}

/// A tuple together with its relator target and residual `||log(Pi z0^{-1})||`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationPoint<T: Scalar> {
    pub tuple: GeneratorTuple<T>,
    pub target: GroupElement<T>,
    pub residual_norm: T,
    pub irreducible: Option<bool>,
}

impl<T: Scalar> RepresentationPoint<T> {
    /// Wraps a tuple, computing its residual.
    pub fn new(tuple: GeneratorTuple<T>, target: GroupElement<T>) -> Result<Self> {
        let residual_norm = relator_residual(&tuple, &target)?.norm();
        Ok(Self { tuple, target, residual_norm, irreducible: None })
    }

    pub fn spec(&self) -> GroupSpec {
        self.tuple.spec()
    }

    pub fn with_irreducibility(mut self, tol: T) -> Self {
        self.irreducible = Some(is_irreducible(&self, tol));
        self
    }
}

/// `log(Pi(t) z0^{-1})`, principal branch.
pub fn relator_residual<T: Scalar>(t: &GeneratorTuple<T>, target: &GroupElement<T>) -> Result<AlgebraElement<T>> {
    let value = &evaluate_relator(t) * &target.inverse();
    log_principal(&value).map_err(|_| Error::OutsideLogDomain)
}

/// Dimension of the joint commutant `{M : M s = s M for every generator s}`,
/// the null space of the stacked operator `vec(M) -> (vec(M s - s M))_s`.
pub fn commutant_dimension<T: Scalar>(t: &GeneratorTuple<T>, tol: T) -> usize {
    let r = t.spec().rank;
    let n = t.elements().len();
    let rr = r * r;
    let mut op: CMatrix<T> = DMatrix::zeros(n.max(1) * rr, rr);
    let id = CMatrix::<T>::identity(r, r);
    for (i, s) in t.elements().iter().enumerate() {
        // vec(M S) = (S^T (x) I) vec(M), vec(S M) = (I (x) S) vec(M), column-major vec.
        let block = s.matrix().transpose().kronecker(&id) - id.kronecker(s.matrix());
        op.view_mut((i * rr, 0), (rr, rr)).copy_from(&block);
    }
    let mut padded: CMatrix<T> = DMatrix::zeros(op.nrows().max(rr), rr);
    padded.view_mut((0, 0), (op.nrows(), rr)).copy_from(&op);
    let s = padded.singular_values();
    let scale = s.iter().fold(T::one(), |acc: T, &x| acc.max(x));
    s.iter().filter(|&&x| x <= tol * scale).count()
}

/// Irreducible iff the joint commutant is the scalars.
pub fn is_irreducible<T: Scalar>(p: &RepresentationPoint<T>, tol: T) -> bool {
    commutant_dimension(&p.tuple, tol) == 1
}

/// Every generator mapped to `A^{-1} s A`; the residual is recomputed.
pub fn conjugate_point<T: Scalar>(p: &RepresentationPoint<T>, a: &GroupElement<T>) -> Result<RepresentationPoint<T>> {
    let tuple = p.tuple.conjugate(a);
    let residual_norm = relator_residual(&tuple, &p.target)?.norm();
    Ok(RepresentationPoint { tuple, target: p.target.clone(), residual_norm, irreducible: p.irreducible })
}

/// `diag(e^{i theta}, e^{-i theta}, 1, ..., 1)` adjusted to determinant one: the
/// standard torus representative used for SU(2) boundary classes.
pub fn torus_element<T: Scalar>(spec: GroupSpec, theta: T) -> GroupElement<T> {
    let r = spec.rank;
    let mut m: CMatrix<T> = CMatrix::identity(r, r);
    m[(0, 0)] = Complex::new(theta.cos(), theta.sin());
    m[(1, 1)] = Complex::new(theta.cos(), -theta.sin());
    GroupElement::from_matrix_unchecked(spec, m)
}

#[cfg(test)]
mod tests;
