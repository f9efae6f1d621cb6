use nalgebra::ComplexField;
use std::ops::{Add, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cplx, frobenius, lit, to_f64, CMatrix, RMatrix, RVector, Scalar};

use super::group::{Family, GroupElement, GroupSpec};

/// Invariant bilinear form on the Lie algebra, `+-trace(XY)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantPairing {
    TraceForm,
    NegativeTraceForm,
}

/// Element of `su(r)` or `sl(r, C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T: Scalar> {
    matrix: CMatrix<T>,
    spec: GroupSpec,
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn zero(spec: GroupSpec) -> Self {
        Self { matrix: DMatrix::zeros(spec.rank, spec.rank), spec }
    }

    /// Wraps `matrix`, checking tracelessness (and skew-hermiticity for SU) to `tol`.
    pub fn from_matrix(spec: GroupSpec, matrix: CMatrix<T>, tol: T) -> Result<Self> {
        if matrix.nrows() != spec.rank || matrix.ncols() != spec.rank {
            return Err(Error::DimensionMismatch { expected: spec.rank, found: matrix.nrows() });
        }
        let mut defect = matrix.trace().modulus();
        if spec.is_compact() {
            defect = defect.max(frobenius(&(&matrix + matrix.adjoint())));
        }
        if !(defect <= tol) {
            return Err(Error::InvariantViolated { what: "algebra", defect: to_f64(defect) });
        }
        Ok(Self { matrix, spec })
    }

    /// Orthogonal projection of an arbitrary matrix onto the algebra.
    pub fn project(spec: GroupSpec, matrix: &CMatrix<T>) -> Self {
        let n = spec.rank;
        let mut m = if spec.is_compact() {
            (matrix - matrix.adjoint()) * Complex::from(lit::<T>(0.5))
        } else {
            matrix.clone()
        };
        let shift = m.trace() / Complex::from(lit::<T>(n as f64));
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        Self { matrix: m, spec }
    }

    pub(crate) fn from_matrix_unchecked(spec: GroupSpec, matrix: CMatrix<T>) -> Self {
        Self { matrix, spec }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn scale(&self, s: T) -> Self {
        Self { matrix: &self.matrix * Complex::from(s), spec: self.spec }
    }

    /// `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Self { matrix: m, spec: self.spec }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        frobenius(&self.matrix)
    }

    /// Real inner product `Re tr(X^* Y)`.
    pub fn dot(&self, other: &Self) -> T {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .fold(T::zero(), |acc, (x, y)| acc + x.re * y.re + x.im * y.im)
    }

    /// Coordinates in the orthonormal real basis of [`algebra_basis`].
    pub fn coords(&self) -> RVector<T> {
        let basis = algebra_basis::<T>(self.spec);
        self.coords_in(&basis)
    }

    pub(crate) fn coords_in(&self, basis: &[CMatrix<T>]) -> RVector<T> {
        DVector::from_iterator(
            basis.len(),
            basis.iter().map(|b| {
                b.iter()
                    .zip(self.matrix.iter())
                    .fold(T::zero(), |acc, (p, q)| acc + p.re * q.re + p.im * q.im)
            }),
        )
    }

    pub fn from_coords(spec: GroupSpec, coords: &[T]) -> Self {
        let basis = algebra_basis::<T>(spec);
        Self::from_coords_in(spec, &basis, coords)
    }

    pub(crate) fn from_coords_in(spec: GroupSpec, basis: &[CMatrix<T>], coords: &[T]) -> Self {
        debug_assert_eq!(basis.len(), coords.len());
        let mut m = DMatrix::zeros(spec.rank, spec.rank);
        for (b, &c) in basis.iter().zip(coords) {
            if c != T::zero() {
                m += b * Complex::from(c);
            }
        }
        Self { matrix: m, spec }
    }
}

impl<'a, T: Scalar> Add<&'a AlgebraElement<T>> for &'a AlgebraElement<T> {
    type Output = AlgebraElement<T>;

    fn add(self, rhs: &'a AlgebraElement<T>) -> AlgebraElement<T> {
        AlgebraElement { matrix: &self.matrix + &rhs.matrix, spec: self.spec }
    }
}

impl<'a, T: Scalar> Sub<&'a AlgebraElement<T>> for &'a AlgebraElement<T> {
    type Output = AlgebraElement<T>;

    fn sub(self, rhs: &'a AlgebraElement<T>) -> AlgebraElement<T> {
        AlgebraElement { matrix: &self.matrix - &rhs.matrix, spec: self.spec }
    }
}

/// Real basis of the Lie algebra, orthonormal for `Re tr(X^* Y)`.
///
/// For `su(r)`: `(E_jk - E_kj)/sqrt2`, `i(E_jk + E_kj)/sqrt2` for `j < k`, then the
/// diagonal Gell-Mann matrices times `i`. For `sl(r, C)`: each complex basis matrix
/// `B` of `sl(r, C)` contributes `B` and `iB`.
pub fn algebra_basis<T: Scalar>(spec: GroupSpec) -> Vec<CMatrix<T>> {
    let n = spec.rank;
    let zero = Complex::new(T::zero(), T::zero());
    let one = T::one();
    let inv_sqrt2 = one / lit::<T>(2.0).sqrt();
    let mut out = Vec::with_capacity(spec.real_dim());
    let diag = |k: usize, scale: Complex<T>| {
        let norm = one / lit::<T>((k * (k + 1)) as f64).sqrt();
        let mut m = DMatrix::from_element(n, n, zero);
        for i in 0..k {
            m[(i, i)] = scale * norm;
        }
        m[(k, k)] = scale * (norm * lit(-(k as f64)));
        m
    };
    match spec.family {
        Family::SpecialUnitary => {
            for j in 0..n {
                for k in j + 1..n {
                    let mut m = DMatrix::from_element(n, n, zero);
                    m[(j, k)] = cplx(inv_sqrt2, T::zero());
                    m[(k, j)] = cplx(-inv_sqrt2, T::zero());
                    out.push(m);
                    let mut m = DMatrix::from_element(n, n, zero);
                    m[(j, k)] = cplx(T::zero(), inv_sqrt2);
                    m[(k, j)] = cplx(T::zero(), inv_sqrt2);
                    out.push(m);
                }
            }
            for k in 1..n {
                out.push(diag(k, cplx(T::zero(), one)));
            }
        }
        Family::SpecialLinearComplex => {
            let mut complex_basis = Vec::with_capacity(spec.dim());
            for j in 0..n {
                for k in 0..n {
                    if j != k {
                        let mut m = DMatrix::from_element(n, n, zero);
                        m[(j, k)] = cplx(one, T::zero());
                        complex_basis.push(m);
                    }
                }
            }
            for k in 1..n {
                complex_basis.push(diag(k, cplx(one, T::zero())));
            }
            for b in complex_basis {
                let ib = &b * cplx(T::zero(), one);
                out.push(b);
                out.push(ib);
            }
        }
    }
    out
}

/// `Ad(g) X = g X g^{-1}`.
pub fn adjoint<T: Scalar>(g: &GroupElement<T>, x: &AlgebraElement<T>) -> AlgebraElement<T> {
    debug_assert_eq!(g.spec(), x.spec());
    let m = g.matrix() * x.matrix() * g.inverse().matrix();
    AlgebraElement::from_matrix_unchecked(x.spec(), m)
}

/// Matrix of `Ad(g)` in the real coordinates of [`algebra_basis`].
pub fn adjoint_matrix<T: Scalar>(g: &GroupElement<T>) -> RMatrix<T> {
    let spec = g.spec();
    let basis = algebra_basis::<T>(spec);
    let ginv = g.inverse();
    let d = basis.len();
    let mut out = RMatrix::zeros(d, d);
    for (a, b) in basis.iter().enumerate() {
        let img = AlgebraElement::from_matrix_unchecked(spec, g.matrix() * b * ginv.matrix());
        out.set_column(a, &img.coords_in(&basis));
    }
    out
}

/// `+-trace(XY)` according to the sign convention. Real on `su(r)` for either sign.
pub fn pairing<T: Scalar>(
    x: &AlgebraElement<T>,
    y: &AlgebraElement<T>,
    convention: InvariantPairing,
) -> Complex<T> {
    let n = x.spec().rank;
    let (xm, ym) = (x.matrix(), y.matrix());
    let mut tr = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            tr += xm[(i, k)] * ym[(k, i)];
        }
    }
    match convention {
        InvariantPairing::TraceForm => tr,
        InvariantPairing::NegativeTraceForm => -tr,
    }
}
