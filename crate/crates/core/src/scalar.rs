use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type the numerics are generic over. Implemented for `f32` and `f64`.
pub trait Scalar: RealField + Copy + FromPrimitive + ToPrimitive {}

impl<T: RealField + Copy + FromPrimitive + ToPrimitive> Scalar for T {}

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type RMatrix<T> = DMatrix<T>;
pub type RVector<T> = DVector<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn cplx<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn frobenius<T: Scalar>(m: &CMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

/// Largest singular value.
pub(crate) fn op_norm<T: Scalar>(m: &CMatrix<T>) -> T {
    m.clone().singular_values().max()
}
