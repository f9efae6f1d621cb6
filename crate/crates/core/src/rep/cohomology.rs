use crate::error::{Error, Result};
use crate::lie::{adjoint_matrix, GroupElement, GroupSpec};
use crate::linalg::{leading_left_vectors, null_space, range_basis, RankInfo};
use crate::presentation::{coboundary_matrix, relator_differential, TangentVector};
use crate::scalar::{lit, to_f64, RMatrix, Scalar};

use super::RepresentationPoint;

/// A rank decision whose relative gap fell below `gap_tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankWarning {
    pub stage: &'static str,
    pub relative_gap: f64,
    pub separation: f64,
}

/// Orthonormal coordinate bases (columns, length `n * d`) of the cocycles,
/// coboundaries and a complement of the coboundaries inside the cocycles, with the
/// rank decisions that produced them. Tangent vectors are right-trivialized.
#[derive(Clone, Debug)]
pub struct CohomologyBasis<T: Scalar> {
    pub spec: GroupSpec,
    pub z1: RMatrix<T>,
    pub b1: RMatrix<T>,
    pub h1: RMatrix<T>,
    pub z1_rank: RankInfo<T>,
    pub b1_rank: RankInfo<T>,
    pub h1_rank: RankInfo<T>,
    pub warnings: Vec<RankWarning>,
}

impl<T: Scalar> CohomologyBasis<T> {
    pub fn dim_z1(&self) -> usize {
        self.z1.ncols()
    }

    pub fn dim_b1(&self) -> usize {
        self.b1.ncols()
    }

    pub fn dim_h1(&self) -> usize {
        self.h1.ncols()
    }

    fn vectors(&self, m: &RMatrix<T>) -> Vec<TangentVector<T>> {
        m.column_iter().map(|c| TangentVector::from_coords(self.spec, c.as_slice())).collect()
    }

    pub fn z1_vectors(&self) -> Vec<TangentVector<T>> {
        self.vectors(&self.z1)
    }

    pub fn b1_vectors(&self) -> Vec<TangentVector<T>> {
        self.vectors(&self.b1)
    }

    pub fn h1_vectors(&self) -> Vec<TangentVector<T>> {
        self.vectors(&self.h1)
    }
}

/// Orthonormal basis of the tangent space `image(1 - Ad c)` to the conjugacy class
/// of `c`, in right-trivialized coordinates.
pub fn class_tangent_basis<T: Scalar>(c: &GroupElement<T>) -> (RMatrix<T>, RankInfo<T>) {
    let d = c.spec().real_dim();
    range_basis(&(RMatrix::identity(d, d) - adjoint_matrix(c)))
}

fn check_gap<T: Scalar>(stage: &'static str, info: &RankInfo<T>, gap_tol: f64, out: &mut Vec<RankWarning>) {
    // Only splits with something on both sides can be ambiguous.
    if info.largest_dropped().is_none() || info.smallest_kept().is_none() {
        return;
    }
    let relative_gap = to_f64(info.relative_gap());
    if relative_gap < gap_tol {
        out.push(RankWarning { stage, relative_gap, separation: to_f64(info.separation()) });
    }
}

/// `Z^1`, `B^1` and `H^1` at a point.
///
/// Cocycles are tangent vectors killed by the relator differential whose boundary
/// components are tangent to their classes. Fails if the point's residual exceeds
/// `tol_flat` or the coboundaries are not contained in the cocycles.
pub fn cohomology_at<T: Scalar>(p: &RepresentationPoint<T>, tol_flat: f64, gap_tol: f64) -> Result<CohomologyBasis<T>> {
    if to_f64(p.residual_norm) > tol_flat {
        return Err(Error::Precondition(format!(
            "residual {:e} exceeds tol_flat {:e}",
            to_f64(p.residual_norm),
            tol_flat
        )));
    }
    let t = &p.tuple;
    let spec = t.spec();
    let d = spec.real_dim();
    let interior = 2 * t.genus();
    let n = t.elements().len();
    let mut warnings = Vec::new();

    let mut blocks = Vec::with_capacity(t.boundary_count());
    let mut width = interior * d;
    for c in t.boundary() {
        let (q, info) = class_tangent_basis(c);
        check_gap("class tangent", &info, gap_tol, &mut warnings);
        width += q.ncols();
        blocks.push(q);
    }
    let mut param: RMatrix<T> = RMatrix::zeros(n * d, width);
    param.view_mut((0, 0), (interior * d, interior * d)).fill_with_identity();
    let mut col = interior * d;
    for (k, q) in blocks.iter().enumerate() {
        param.view_mut(((interior + k) * d, col), (d, q.ncols())).copy_from(q);
        col += q.ncols();
    }

    let jac = relator_differential(t).matrix() * &param;
    let (kernel, z1_rank) = null_space(&jac);
    check_gap("relator differential", &z1_rank, gap_tol, &mut warnings);
    let z1 = &param * kernel;

    let (b1, b1_rank) = range_basis(&coboundary_matrix(t));
    check_gap("coboundary", &b1_rank, gap_tol, &mut warnings);

    let outside = &b1 - &z1 * (z1.transpose() * &b1);
    let leak = outside.iter().fold(T::zero(), |m: T, x| m.max(x.abs()));
    if leak > lit::<T>(tol_flat.max(1e-8)) * lit(100.0) {
        return Err(Error::InvariantViolated { what: "coboundaries inside cocycles", defect: to_f64(leak) });
    }
    let k = z1.ncols().checked_sub(b1.ncols()).ok_or(Error::RankDeficiency {
        stage: "cohomology",
        gap: to_f64(z1_rank.relative_gap()),
    })?;
    let complement = &z1 - &b1 * (b1.transpose() * &z1);
    let (h1, h1_rank) = leading_left_vectors(&complement, k);
    if h1_rank.singular_values.len() > k {
        let dropped = h1_rank.singular_values[k];
        let kept = if k > 0 { h1_rank.singular_values[k - 1] } else { T::one() };
        if k > 0 && to_f64(dropped / kept) > 1e-6 {
            warnings.push(RankWarning {
                stage: "harmonic complement",
                relative_gap: to_f64(kept / h1_rank.largest()),
                separation: to_f64(kept / dropped),
            });
        }
    }
    Ok(CohomologyBasis { spec, z1, b1, h1, z1_rank, b1_rank, h1_rank, warnings })
}
