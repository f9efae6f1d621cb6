use nalgebra::ComplexField;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{frobenius, lit, op_norm, CMatrix, Scalar};

use super::algebra::AlgebraElement;
use super::group::GroupElement;

const PADE_DEGREE: usize = 6;

fn one_norm<T: Scalar>(m: &CMatrix<T>) -> T {
    (0..m.ncols())
        .map(|j| m.column(j).iter().fold(T::zero(), |acc, z| acc + z.modulus()))
        .fold(T::zero(), |a, b| a.max(b))
}

/// Matrix exponential by scaling and squaring around a diagonal Pade approximant.
pub fn expm<T: Scalar>(a: &CMatrix<T>) -> CMatrix<T> {
    let n = a.nrows();
    let id = CMatrix::<T>::identity(n, n);
    let norm = one_norm(a);
    let mut squarings = 0i32;
    let half = lit::<T>(0.5);
    let mut scaled_norm = norm;
    while scaled_norm > half {
        scaled_norm *= half;
        squarings += 1;
    }
    let scale = Complex::from(lit::<T>(2.0).powi(-squarings));
    let x = a * scale;

    let mut coeff = T::one();
    let mut num = id.clone();
    let mut den = id.clone();
    let mut power = id.clone();
    let q = PADE_DEGREE as f64;
    for k in 1..=PADE_DEGREE {
        let kf = k as f64;
        coeff *= lit::<T>((q - kf + 1.0) / (kf * (2.0 * q - kf + 1.0)));
        power = &power * &x;
        let term = &power * Complex::from(coeff);
        num += &term;
        if k % 2 == 0 {
            den += &term;
        } else {
            den -= &term;
        }
    }
    let mut r = den.lu().solve(&num).expect("Pade denominator is invertible for small norm");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// Group exponential; the result is re-projected onto the group. `exp(0) = I` exactly.
pub fn exp<T: Scalar>(x: &AlgebraElement<T>) -> GroupElement<T> {
    if x.is_zero() {
        return GroupElement::identity(x.spec());
    }
    GroupElement::from_matrix_unchecked(x.spec(), expm(x.matrix())).reproject()
}

/// Principal square root by the Denman-Beavers iteration.
pub fn sqrtm<T: Scalar>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.nrows();
    let half = Complex::from(lit::<T>(0.5));
    let mut y = a.clone();
    let mut z = CMatrix::<T>::identity(n, n);
    let tol = T::default_epsilon() * lit(64.0);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().ok_or(Error::OutsideDomain)?;
        let zi = z.clone().try_inverse().ok_or(Error::OutsideDomain)?;
        let y_next = (&y + zi) * half;
        let z_next = (&z + yi) * half;
        let change = frobenius(&(&y_next - &y));
        let scale = frobenius(&y_next).max(T::one());
        y = y_next;
        z = z_next;
        if !change.is_finite() {
            return Err(Error::OutsideDomain);
        }
        if change <= tol * scale {
            return Ok(y);
        }
    }
    Err(Error::OutsideDomain)
}

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Fails with [`Error::OutsideDomain`] when the spectrum touches the closed negative
/// real axis (the square-root iteration breaks down or lands on a non-principal root).
pub fn logm<T: Scalar>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.nrows();
    let id = CMatrix::<T>::identity(n, n);
    let mut y = a.clone();
    let mut roots = 0i32;
    while frobenius(&(&y - &id)) > lit(0.25) {
        if roots >= 60 {
            return Err(Error::OutsideDomain);
        }
        y = sqrtm(&y)?;
        roots += 1;
    }
    // log y = 2 atanh(s), s = (y + I)^{-1}(y - I); the factors commute.
    let s = (&y + &id).lu().solve(&(&y - &id)).ok_or(Error::OutsideDomain)?;
    let s2 = &s * &s;
    let mut term = s.clone();
    let mut acc = s.clone();
    let tiny = T::default_epsilon() * lit(0.01);
    for k in 1..200 {
        term = &term * &s2;
        let t = &term * Complex::from(T::one() / lit((2 * k + 1) as f64));
        let size = frobenius(&t);
        acc += t;
        if size <= tiny {
            break;
        }
    }
    let log = acc * Complex::from(lit::<T>(2.0).powi(roots + 1));

    let back = expm(&log);
    let err = frobenius(&(&back - a));
    if !(err <= lit::<T>(1e-4) * frobenius(a).max(T::one())) {
        return Err(Error::OutsideDomain);
    }
    Ok(log)
}

/// Principal logarithm of a group element, projected onto the algebra.
pub fn log_principal<T: Scalar>(g: &GroupElement<T>) -> Result<AlgebraElement<T>> {
    let l = logm(g.matrix())?;
    Ok(AlgebraElement::project(g.spec(), &l))
}

/// Logarithm on the ball `||g - I|| < 1` (operator norm).
pub fn log_near_identity<T: Scalar>(g: &GroupElement<T>) -> Result<AlgebraElement<T>> {
    let n = g.spec().rank;
    let dist = op_norm(&(g.matrix() - CMatrix::<T>::identity(n, n)));
    if !(dist < T::one()) {
        return Err(Error::OutsideDomain);
    }
    if dist == T::zero() {
        return Ok(AlgebraElement::zero(g.spec()));
    }
    log_principal(g)
}

/// Right-trivialized differential of `exp` at `w` applied to `delta`:
/// `d/dt exp(w + t delta) exp(-w) = sum_k ad_w^k(delta) / (k+1)!`.
pub fn dexp_right<T: Scalar>(w: &AlgebraElement<T>, delta: &AlgebraElement<T>) -> AlgebraElement<T> {
    let mut term = delta.clone();
    let mut acc = delta.clone();
    let tiny = T::default_epsilon() * lit(0.01) * delta.norm();
    for k in 1..60 {
        term = w.bracket(&term).scale(T::one() / lit((k + 1) as f64));
        let size = term.norm();
        acc = &acc + &term;
        if size <= tiny {
            break;
        }
    }
    acc
}
