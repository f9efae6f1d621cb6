use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{lit, CMatrix, Scalar};

use super::algebra::{algebra_basis, AlgebraElement};
use super::expm::exp;
use super::group::{GroupElement, GroupSpec};

fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    lit(rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed element of `SU(r)`.
///
/// Complex Gaussian matrix, Gram-Schmidt with positive diagonal (Haar on `U(r)`),
/// then division by the principal `r`-th root of the determinant. The last map is
/// left-equivariant under `SU(r)`, so it pushes Haar on `U(r)` to Haar on `SU(r)`.
pub fn haar_sample<T: Scalar, R: Rng + ?Sized>(spec: GroupSpec, rng: &mut R) -> Result<GroupElement<T>> {
    if !spec.is_compact() {
        return Err(Error::Unsupported(format!("{spec} has no Haar probability measure")));
    }
    let n = spec.rank;
    let scale = T::one() / lit::<T>(2.0).sqrt();
    let mut m: CMatrix<T> =
        DMatrix::from_fn(n, n, |_, _| Complex::new(normal::<T, R>(rng) * scale, normal::<T, R>(rng) * scale));
    for j in 0..n {
        for k in 0..j {
            let proj = m.column(k).dotc(&m.column(j));
            let col_k = m.column(k).clone_owned();
            let mut col_j = m.column_mut(j);
            col_j -= col_k * proj;
        }
        let norm = m.column(j).norm();
        m.column_mut(j).unscale_mut(norm);
    }
    let det = m.determinant();
    m /= det.powf(T::one() / lit(n as f64));
    Ok(GroupElement::from_matrix_unchecked(spec, m))
}

/// Gaussian element of the algebra: independent `N(0, sigma^2)` real coordinates.
pub fn gaussian_algebra<T: Scalar, R: Rng + ?Sized>(spec: GroupSpec, sigma: T, rng: &mut R) -> AlgebraElement<T> {
    let basis = algebra_basis::<T>(spec);
    let coords: Vec<T> = (0..basis.len()).map(|_| normal::<T, R>(rng) * sigma).collect();
    AlgebraElement::from_coords_in(spec, &basis, &coords)
}

/// Haar sample for SU; for SL(r, C), `exp` of a standard Gaussian algebra element
/// (not Haar, SL(r, C) has no invariant probability measure).
pub fn random_element<T: Scalar, R: Rng + ?Sized>(spec: GroupSpec, rng: &mut R) -> GroupElement<T> {
    if spec.is_compact() {
        haar_sample(spec, rng).expect("compact family")
    } else {
        exp(&gaussian_algebra(spec, T::one(), rng))
    }
}
