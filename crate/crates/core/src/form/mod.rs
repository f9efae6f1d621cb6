//! The 2-forms `Theta` (closed surfaces) and `Theta_Xi` (boundary in prescribed
//! conjugacy classes) on tangent vectors of the representation variety, their
//! descent to `H^1`, and a finite-difference test of closedness.
//!
//! Conventions. Tangent vectors enter right-trivialized. For the word
//! `L_N ... L_1` each position `p` receives the left-trivialized component
//! `X_p` (`Ad(s^{-1}) H_s` for a letter `s`, `-H_s` for a letter `s^{-1}`) and
//! it is transported by `Z_p = Ad(f_{p-1})^{-1} X_p` with `f_{p-1} = L_{p-1} ... L_1`.
//! Then
//!
//! `Theta_Xi(u, v) = 1/2 sum_{p,q} eps(p,q) <Z_p(u), Z_q(v)> + 1/2 sum_k <T_k^+ C_k(u), (Ad c_k - Ad c_k^{-1}) T_k^+ C_k(v)>`
//!
//! with `T_k = Ad c_k^{-1} - 1`, `T_k^+` its Moore-Penrose pseudo-inverse and
//! `C_k` the right-trivialized boundary component. The closed-surface form carries
//! the same factor 1/2.

mod closedness;

use nalgebra::ComplexField;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lie::{adjoint_matrix, algebra_basis, GroupSpec, InvariantPairing};
use crate::linalg::{null_space, singular_values, RankInfo};
use crate::presentation::TangentVector;
use crate::rep::{CohomologyBasis, RepresentationPoint};
use crate::scalar::{lit, CMatrix, RMatrix, RVector, Scalar};

pub use closedness::{
    check_closedness, closedness_sweep, exterior_derivative_fd, ClosednessChart, ClosednessSweep,
};

/// `eps(i, j) = 1` for `i < j`, `-1` for `i > j`, `0` on the diagonal.
pub fn epsilon(i: usize, j: usize) -> i32 {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Greater => -1,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Which operator sits on the right of the boundary pairing.
///
/// `Symmetric` uses `T^+` on both sides, `<T^+ C1, (Ad c - Ad c^{-1}) T^+ C2>`;
/// this is skew in its arguments and vanishes on coboundaries. `Verbatim` uses
/// `<T^+ C1, (Ad c - Ad c^{-1}) T C2>`, which agrees with `Symmetric` when
/// `Ad c` squares to the identity on the class tangent (e.g. `c ~ diag(i, -i)` in SU(2))
/// but is not skew for general classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoundaryTerm {
    #[default]
    Symmetric,
    Verbatim,
}

/// Relative tolerance of the class-tangency test on boundary components.
pub const CLASS_TANGENT_TOL: f64 = 1e-8;

struct Position<T: Scalar> {
    generator: usize,
    negate: bool,
    // Z_p = +-M H M^{-1}
    m: CMatrix<T>,
    m_inv: CMatrix<T>,
}

struct BoundaryOps<T: Scalar> {
    t: RMatrix<T>,
    t_pinv: RMatrix<T>,
    middle: RMatrix<T>,
}

/// Transports and boundary operators of one point, reusable across many
/// evaluations of the form.
pub struct FormContext<T: Scalar> {
    spec: GroupSpec,
    pairing: InvariantPairing,
    generators: usize,
    interior: usize,
    positions: Vec<Position<T>>,
    boundary: Vec<BoundaryOps<T>>,
    basis: Vec<CMatrix<T>>,
    term: BoundaryTerm,
}

fn trace_pair<T: Scalar>(x: &CMatrix<T>, y: &CMatrix<T>, conv: InvariantPairing) -> Complex<T> {
    let n = x.nrows();
    let mut tr = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            tr += x[(i, k)] * y[(k, i)];
        }
    }
    match conv {
        InvariantPairing::TraceForm => tr,
        InvariantPairing::NegativeTraceForm => -tr,
    }
}

impl<T: Scalar> FormContext<T> {
    pub fn new(p: &RepresentationPoint<T>, term: BoundaryTerm) -> Self {
        let t = &p.tuple;
        let spec = t.spec();
        let r = spec.rank;
        let d = spec.real_dim();
        let mut positions = Vec::new();
        let mut f: CMatrix<T> = CMatrix::identity(r, r);
        let mut f_inv: CMatrix<T> = CMatrix::identity(r, r);
        for letter in t.presentation().letters() {
            let s = &t.elements()[letter.generator];
            let (h, h_inv) = if letter.inverse {
                (s.inverse().matrix().clone(), s.matrix().clone())
            } else {
                (s.matrix().clone(), s.inverse().matrix().clone())
            };
            let next = &h * &f;
            let next_inv = &f_inv * &h_inv;
            let (m, m_inv) = if letter.inverse {
                (f_inv.clone(), f.clone())
            } else {
                // f_{p-1}^{-1} s^{-1} = f_p^{-1}
                (next_inv.clone(), next.clone())
            };
            positions.push(Position { generator: letter.generator, negate: letter.inverse, m, m_inv });
            f = next;
            f_inv = next_inv;
        }
        let boundary = t
            .boundary()
            .iter()
            .map(|c| {
                let ad = adjoint_matrix(c);
                let ad_inv = adjoint_matrix(&c.inverse());
                let op = &ad_inv - RMatrix::identity(d, d);
                let s_max = singular_values(&op).first().copied().unwrap_or_else(T::zero);
                // Ad c is an isometry (or close to one), so an absolute floor is meaningful.
                let cut = T::default_epsilon().sqrt() * s_max.max(T::one());
                let t_pinv = op.clone().pseudo_inverse(cut).unwrap_or_else(|_| RMatrix::zeros(d, d));
                BoundaryOps { t: op, t_pinv, middle: ad - ad_inv }
            })
            .collect();
        Self {
            spec,
            pairing: spec.default_pairing(),
            generators: t.elements().len(),
            interior: 2 * t.genus(),
            positions,
            boundary,
            basis: algebra_basis(spec),
            term,
        }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    fn check_len(&self, u: &TangentVector<T>) -> Result<()> {
        if u.len() != self.generators {
            return Err(Error::DimensionMismatch { expected: self.generators, found: u.len() });
        }
        Ok(())
    }

    fn transported(&self, u: &TangentVector<T>) -> Vec<CMatrix<T>> {
        self.positions
            .iter()
            .map(|pos| {
                let z = &pos.m * u.components()[pos.generator].matrix() * &pos.m_inv;
                if pos.negate {
                    -z
                } else {
                    z
                }
            })
            .collect()
    }

    fn boundary_coords(&self, u: &TangentVector<T>) -> Result<Vec<RVector<T>>> {
        self.boundary
            .iter()
            .enumerate()
            .map(|(k, ops)| {
                let c = u.components()[self.interior + k].coords_in(&self.basis);
                let off = &c - &ops.t * (&ops.t_pinv * &c);
                let defect = off.norm() / c.norm().max(T::one());
                if defect > lit(CLASS_TANGENT_TOL) {
                    return Err(Error::NotClassTangent { index: k, defect: crate::scalar::to_f64(defect) });
                }
                Ok(c)
            })
            .collect()
    }

    fn algebra(&self, v: &RVector<T>) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.spec.rank, self.spec.rank);
        for (b, &c) in self.basis.iter().zip(v.iter()) {
            m += b * Complex::from(c);
        }
        m
    }

    fn boundary_sum(&self, c1: &[RVector<T>], c2: &[RVector<T>]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for ((ops, x), y) in self.boundary.iter().zip(c1).zip(c2) {
            let left = &ops.t_pinv * x;
            let right = match self.term {
                BoundaryTerm::Symmetric => &ops.middle * (&ops.t_pinv * y),
                BoundaryTerm::Verbatim => &ops.middle * (&ops.t * y),
            };
            acc += trace_pair(&self.algebra(&left), &self.algebra(&right), self.pairing);
        }
        acc
    }

    /// `Theta_Xi(u, v)` by the full double sum over word positions.
    pub fn theta(&self, u: &TangentVector<T>, v: &TangentVector<T>) -> Result<Complex<T>> {
        self.check_len(u)?;
        self.check_len(v)?;
        let (c1, c2) = (self.boundary_coords(u)?, self.boundary_coords(v)?);
        let (z1, z2) = (self.transported(u), self.transported(v));
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, x) in z1.iter().enumerate() {
            for (j, y) in z2.iter().enumerate() {
                match epsilon(i, j) {
                    1 => acc += trace_pair(x, y, self.pairing),
                    -1 => acc -= trace_pair(x, y, self.pairing),
                    _ => {}
                }
            }
        }
        let half = Complex::from(lit::<T>(0.5));
        Ok((acc + self.boundary_sum(&c1, &c2)) * half)
    }

    /// Same value through running prefix sums: `1/2 sum_q (<S_q(u), Z_q(v)> - <Z_q(u), S_q(v)>)`
    /// with `S_q = Z_1 + ... + Z_{q-1}`. Linear rather than quadratic in the word length.
    fn theta_prefix(&self, u: &TangentVector<T>, v: &TangentVector<T>) -> Result<Complex<T>> {
        self.check_len(u)?;
        self.check_len(v)?;
        let (c1, c2) = (self.boundary_coords(u)?, self.boundary_coords(v)?);
        let (z1, z2) = (self.transported(u), self.transported(v));
        let r = self.spec.rank;
        let (mut s1, mut s2) = (CMatrix::<T>::zeros(r, r), CMatrix::<T>::zeros(r, r));
        let mut acc = Complex::new(T::zero(), T::zero());
        for (x, y) in z1.iter().zip(&z2) {
            acc += trace_pair(&s1, y, self.pairing) - trace_pair(x, &s2, self.pairing);
            s1 += x;
            s2 += y;
        }
        let half = Complex::from(lit::<T>(0.5));
        Ok((acc + self.boundary_sum(&c1, &c2)) * half)
    }

    /// Matrix of the form on a list of tangent vectors.
    pub fn matrix(&self, vectors: &[TangentVector<T>]) -> Result<CMatrix<T>> {
        let n = vectors.len();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.theta_prefix(&vectors[i], &vectors[j])?;
                out[(i, j)] = w;
                out[(j, i)] = -w;
            }
        }
        Ok(out)
    }
}

/// `Theta` at a point of a closed surface (no boundary generators).
pub fn theta_closed<T: Scalar>(
    p: &RepresentationPoint<T>,
    u: &TangentVector<T>,
    v: &TangentVector<T>,
) -> Result<Complex<T>> {
    if p.tuple.boundary_count() != 0 {
        return Err(Error::Precondition("theta_closed needs a surface without boundary".into()));
    }
    FormContext::new(p, BoundaryTerm::Symmetric).theta_prefix(u, v)
}

/// `Theta_Xi` with the default [`BoundaryTerm`].
pub fn theta_with_classes<T: Scalar>(
    p: &RepresentationPoint<T>,
    u: &TangentVector<T>,
    v: &TangentVector<T>,
) -> Result<Complex<T>> {
    FormContext::new(p, BoundaryTerm::Symmetric).theta(u, v)
}

pub fn theta_with_classes_using<T: Scalar>(
    p: &RepresentationPoint<T>,
    u: &TangentVector<T>,
    v: &TangentVector<T>,
    term: BoundaryTerm,
) -> Result<Complex<T>> {
    FormContext::new(p, term).theta(u, v)
}

/// Values of a 2-form on a labelled basis. Real-valued (zero imaginary part) for
/// compact groups with the negative trace pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix<T: Scalar> {
    pub basis: Vec<String>,
    pub omega: CMatrix<T>,
}

impl<T: Scalar> FormMatrix<T> {
    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub fn real_part(&self) -> RMatrix<T> {
        self.omega.map(|z| z.re)
    }

    pub fn imag_part(&self) -> RMatrix<T> {
        self.omega.map(|z| z.im)
    }

    /// `max |Omega + Omega^T|`.
    pub fn skew_defect(&self) -> T {
        let s = &self.omega + self.omega.transpose();
        s.iter().fold(T::zero(), |m, z| m.max(z.modulus()))
    }

    /// Singular values of the real matrix `[Re Omega; Im Omega]`, decreasing. For a
    /// real form these are the singular values of `Omega`.
    pub fn singular_values(&self) -> Vec<T> {
        singular_values(&stack_parts(&self.omega))
    }
}

fn stack_parts<T: Scalar>(m: &CMatrix<T>) -> RMatrix<T> {
    let (r, c) = m.shape();
    let mut out = RMatrix::zeros(2 * r, c);
    out.view_mut((0, 0), (r, c)).copy_from(&m.map(|z| z.re));
    out.view_mut((r, 0), (r, c)).copy_from(&m.map(|z| z.im));
    out
}

/// The form on the `h1` basis of a cohomology computation.
pub fn form_on_cohomology<T: Scalar>(p: &RepresentationPoint<T>, basis: &CohomologyBasis<T>) -> Result<FormMatrix<T>> {
    let ctx = FormContext::new(p, BoundaryTerm::Symmetric);
    let omega = ctx.matrix(&basis.h1_vectors())?;
    let labels = (0..basis.dim_h1()).map(|i| format!("h1[{i}]")).collect();
    Ok(FormMatrix { basis: labels, omega })
}

/// `max |Theta(b, z)| / (|b| |z|)` over basis vectors `b` of `b1`, `z` of `z1`, in
/// both argument orders.
pub fn descent_defect<T: Scalar>(p: &RepresentationPoint<T>, basis: &CohomologyBasis<T>) -> Result<T> {
    let ctx = FormContext::new(p, BoundaryTerm::Symmetric);
    let mut worst = T::zero();
    let zs = basis.z1_vectors();
    for b in basis.b1_vectors() {
        for z in &zs {
            let scale = b.norm() * z.norm();
            if scale == T::zero() {
                continue;
            }
            let x = ctx.theta(&b, z)?.modulus() / scale;
            let y = ctx.theta(z, &b)?.modulus() / scale;
            worst = worst.max(x).max(y);
        }
    }
    Ok(worst)
}

/// Null space of `Theta` restricted to `z1`, returned as coordinate columns of
/// length `n d` together with the rank decision on the `z1` coefficients.
pub fn kernel_of_form<T: Scalar>(
    p: &RepresentationPoint<T>,
    basis: &CohomologyBasis<T>,
) -> Result<(RMatrix<T>, RankInfo<T>)> {
    let ctx = FormContext::new(p, BoundaryTerm::Symmetric);
    let omega = ctx.matrix(&basis.z1_vectors())?;
    let (coeffs, info) = null_space(&stack_parts(&omega));
    Ok((&basis.z1 * coeffs, info))
}

/// [`kernel_of_form`] as tangent vectors.
pub fn kernel_vectors<T: Scalar>(
    p: &RepresentationPoint<T>,
    basis: &CohomologyBasis<T>,
) -> Result<Vec<TangentVector<T>>> {
    let (k, _) = kernel_of_form(p, basis)?;
    Ok(k.column_iter().map(|c| TangentVector::from_coords(basis.spec, c.as_slice())).collect())
}

#[cfg(test)]
mod tests;
