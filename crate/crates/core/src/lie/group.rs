use std::fmt;
use std::ops::Mul;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{frobenius, lit, to_f64, CMatrix, Scalar};

use super::algebra::InvariantPairing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "SU")]
    SpecialUnitary,
    #[serde(rename = "SLC")]
    SpecialLinearComplex,
}

/// A matrix group: `SU(r)` or `SL(r, C)` with `r >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct GroupSpec {
    pub family: Family,
    pub rank: usize,
}

#[derive(Deserialize)]
struct RawSpec {
    family: Family,
    rank: usize,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        GroupSpec::new(raw.family, raw.rank)
    }
}

impl GroupSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidSpec(format!("rank must be at least 2, got {rank}")));
        }
        Ok(Self { family, rank })
    }

    /// `SU(rank)`. Panics when `rank < 2`.
    pub fn su(rank: usize) -> Self {
        Self::new(Family::SpecialUnitary, rank).expect("valid SU rank")
    }

    /// `SL(rank, C)`. Panics when `rank < 2`.
    pub fn slc(rank: usize) -> Self {
        Self::new(Family::SpecialLinearComplex, rank).expect("valid SL rank")
    }

    /// Dimension `r^2 - 1` (real for SU, complex for SL).
    pub fn dim(&self) -> usize {
        self.rank * self.rank - 1
    }

    /// Dimension of the Lie algebra as a real vector space.
    pub fn real_dim(&self) -> usize {
        match self.family {
            Family::SpecialUnitary => self.dim(),
            Family::SpecialLinearComplex => 2 * self.dim(),
        }
    }

    pub fn is_compact(&self) -> bool {
        self.family == Family::SpecialUnitary
    }

    pub fn default_pairing(&self) -> InvariantPairing {
        match self.family {
            Family::SpecialUnitary => InvariantPairing::NegativeTraceForm,
            Family::SpecialLinearComplex => InvariantPairing::TraceForm,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::SpecialUnitary => write!(f, "SU({})", self.rank),
            Family::SpecialLinearComplex => write!(f, "SL({}, C)", self.rank),
        }
    }
}

/// An element of `SU(r)` or `SL(r, C)` stored as a dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<T: Scalar> {
    matrix: CMatrix<T>,
    spec: GroupSpec,
}

impl<T: Scalar> GroupElement<T> {
    pub fn identity(spec: GroupSpec) -> Self {
        Self { matrix: DMatrix::identity(spec.rank, spec.rank), spec }
    }

    /// Scalar matrix `z I`. Central in both families; lies in the group iff `z^r = 1`.
    pub fn scalar(spec: GroupSpec, z: Complex<T>) -> Self {
        Self { matrix: DMatrix::from_diagonal_element(spec.rank, spec.rank, z), spec }
    }

    /// Wraps `matrix`, checking the group invariants to `tol`.
    pub fn from_matrix(spec: GroupSpec, matrix: CMatrix<T>, tol: T) -> Result<Self> {
        if matrix.nrows() != spec.rank || matrix.ncols() != spec.rank {
            return Err(Error::DimensionMismatch { expected: spec.rank, found: matrix.nrows() });
        }
        let g = Self { matrix, spec };
        let defect = g.invariant_defect();
        if !(defect <= tol) {
            return Err(Error::InvariantViolated { what: "group", defect: to_f64(defect) });
        }
        Ok(g)
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

    /// `max(|det - 1|, ||M M^* - I||)`, the second term only for SU.
    pub fn invariant_defect(&self) -> T {
        let det = self.matrix.determinant();
        let mut defect = (det - Complex::new(T::one(), T::zero())).modulus();
        if self.spec.is_compact() {
            let n = self.spec.rank;
            let gram = &self.matrix * self.matrix.adjoint() - CMatrix::<T>::identity(n, n);
            defect = defect.max(frobenius(&gram));
        }
        defect
    }

    pub fn inverse(&self) -> Self {
        let matrix = match self.spec.family {
            Family::SpecialUnitary => self.matrix.adjoint(),
            Family::SpecialLinearComplex => self
                .matrix
                .clone()
                .try_inverse()
                .expect("determinant-one matrix is invertible"),
        };
        Self { matrix, spec: self.spec }
    }

    /// `A^{-1} self A`.
    pub fn conjugate_by(&self, a: &GroupElement<T>) -> Self {
        let matrix = a.inverse().matrix * &self.matrix * &a.matrix;
        Self { matrix, spec: self.spec }
    }

    /// If the element is a scalar matrix to `tol`, returns the scalar.
    pub fn as_scalar(&self, tol: T) -> Option<Complex<T>> {
        let z = self.matrix[(0, 0)];
        let n = self.spec.rank;
        let off = &self.matrix - CMatrix::<T>::from_diagonal_element(n, n, z);
        (frobenius(&off) <= tol).then_some(z)
    }

    /// Pulls the matrix back onto the group after rounding drift.
    pub fn reproject(&self) -> Self {
        let n = self.spec.rank;
        let mut m = self.matrix.clone();
        if self.spec.is_compact() {
            let id = CMatrix::<T>::identity(n, n);
            let defect = frobenius(&(m.adjoint() * &m - &id));
            if defect > lit(0.5) {
                let svd = m.clone().svd(true, true);
                m = svd.u.expect("u requested") * svd.v_t.expect("v_t requested");
            } else {
                // Newton-Schulz iteration for the unitary polar factor.
                for _ in 0..6 {
                    let gram = m.adjoint() * &m;
                    let d = frobenius(&(&gram - &id));
                    if d <= T::default_epsilon() * lit(4.0) {
                        break;
                    }
                    m = &m * (&id * Complex::from(lit::<T>(1.5)) - gram * Complex::from(lit::<T>(0.5)));
                }
            }
        }
        let det = m.determinant();
        let root = det.powf(T::one() / lit(n as f64));
        m /= root;
        Self { matrix: m, spec: self.spec }
    }
}

impl<'a, T: Scalar> Mul<&'a GroupElement<T>> for &'a GroupElement<T> {
    type Output = GroupElement<T>;

    fn mul(self, rhs: &'a GroupElement<T>) -> GroupElement<T> {
        debug_assert_eq!(self.spec, rhs.spec);
        GroupElement { matrix: &self.matrix * &rhs.matrix, spec: self.spec }
    }
}
