//! Dense real linear algebra helpers: SVD-based ranks, null spaces, ranges,
//! principal angles and the Pfaffian.

use nalgebra::{ComplexField, DMatrix};

use crate::scalar::{lit, RMatrix, Scalar};

/// Outcome of a singular-value rank decision.
#[derive(Clone, Debug, PartialEq)]
pub struct RankInfo<T: Scalar> {
    pub rank: usize,
    /// Singular values in decreasing order.
    pub singular_values: Vec<T>,
    /// Roundoff level `eps * max(rows, cols) * s_max`.
    pub noise_floor: T,
}

impl<T: Scalar> RankInfo<T> {
    fn new(mut singular_values: Vec<T>, rows: usize, cols: usize) -> Self {
        singular_values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let s_max = singular_values.first().copied().unwrap_or_else(T::zero);
        let eps = T::default_epsilon();
        let noise_floor = eps * lit((rows.max(cols)).max(1) as f64) * s_max;
        let rank = if s_max <= eps * lit(16.0) {
            0
        } else {
            let cut = s_max * eps.sqrt();
            singular_values.iter().filter(|&&s| s > cut).count()
        };
        Self { rank, singular_values, noise_floor }
    }

    pub fn largest(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn smallest_kept(&self) -> Option<T> {
        self.rank.checked_sub(1).map(|i| self.singular_values[i])
    }

    pub fn largest_dropped(&self) -> Option<T> {
        self.singular_values.get(self.rank).copied()
    }

    /// `smallest kept / largest`; 1 when nothing is kept.
    pub fn relative_gap(&self) -> T {
        match self.smallest_kept() {
            Some(s) => s / self.largest(),
            None => T::one(),
        }
    }

    /// `smallest kept / max(largest dropped, noise floor)`; infinite when there is
    /// nothing on one side of the split.
    pub fn separation(&self) -> T {
        match (self.smallest_kept(), self.largest_dropped()) {
            (Some(kept), Some(dropped)) => {
                let floor = dropped.max(self.noise_floor).max(T::min_value().unwrap_or_else(T::zero));
                if floor > T::zero() {
                    kept / floor
                } else {
                    lit(f64::INFINITY)
                }
            }
            _ => lit(f64::INFINITY),
        }
    }
}

struct FullSvd<T: Scalar> {
    u: RMatrix<T>,
    v: RMatrix<T>,
    info: RankInfo<T>,
}

/// SVD with complete `U` (rows x rows) and `V` (cols x cols), columns sorted by
/// decreasing singular value.
fn full_svd<T: Scalar>(m: &RMatrix<T>) -> FullSvd<T> {
    let (rows, cols) = m.shape();
    let n = rows.max(cols);
    if n == 0 {
        return FullSvd { u: RMatrix::zeros(rows, rows), v: RMatrix::zeros(cols, cols), info: RankInfo::new(vec![], rows, cols) };
    }
    let mut padded = RMatrix::zeros(n, n);
    padded.view_mut((0, 0), (rows, cols)).copy_from(m);
    let svd = padded.svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").transpose();
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut u_sorted = RMatrix::zeros(n, n);
    let mut v_sorted = RMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.set_column(dst, &u.column(src));
        v_sorted.set_column(dst, &v.column(src));
    }
    let kept = rows.min(cols);
    let svals: Vec<T> = order.iter().take(kept).map(|&i| s[i]).collect();
    let info = RankInfo::new(svals, rows, cols);
    // Padding rows only touch the first `rows` coordinates of U when rows < n, and
    // padding columns the V side; the relevant blocks are square orthogonal.
    let u = if rows < n { orthonormalize_prefix(&u_sorted.view((0, 0), (rows, n)).into_owned(), rows) } else { u_sorted };
    let v = if cols < n { orthonormalize_prefix(&v_sorted.view((0, 0), (cols, n)).into_owned(), cols) } else { v_sorted };
    FullSvd { u, v, info }
}

/// Picks `k` orthonormal columns spanning the column space of `m` (which has rank
/// `k`), keeping the leading columns first.
fn orthonormalize_prefix<T: Scalar>(m: &RMatrix<T>, k: usize) -> RMatrix<T> {
    let rows = m.nrows();
    let mut out = RMatrix::zeros(rows, k);
    let mut filled = 0;
    for j in 0..m.ncols() {
        if filled == k {
            break;
        }
        let mut col = m.column(j).into_owned();
        for _ in 0..2 {
            for i in 0..filled {
                let p = out.column(i).dot(&col);
                col -= out.column(i) * p;
            }
        }
        let norm = col.norm();
        if norm > lit(0.5) {
            out.set_column(filled, &(col / norm));
            filled += 1;
        }
    }
    debug_assert_eq!(filled, k);
    out
}

/// Orthonormal basis (columns) of `ker m`.
pub fn null_space<T: Scalar>(m: &RMatrix<T>) -> (RMatrix<T>, RankInfo<T>) {
    let svd = full_svd(m);
    let cols = m.ncols();
    let r = svd.info.rank;
    let basis = svd.v.columns(r, cols - r).into_owned();
    (basis, svd.info)
}

/// Orthonormal basis (columns) of the column space of `m`.
pub fn range_basis<T: Scalar>(m: &RMatrix<T>) -> (RMatrix<T>, RankInfo<T>) {
    let svd = full_svd(m);
    let r = svd.info.rank;
    (svd.u.columns(0, r).into_owned(), svd.info)
}

/// Leading `k` left singular vectors of `m`.
pub fn leading_left_vectors<T: Scalar>(m: &RMatrix<T>, k: usize) -> (RMatrix<T>, RankInfo<T>) {
    let svd = full_svd(m);
    (svd.u.columns(0, k).into_owned(), svd.info)
}

/// Singular values, decreasing.
pub fn singular_values<T: Scalar>(m: &RMatrix<T>) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<T> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Sine of the largest principal angle between the column spans of two
/// orthonormal matrices of equal width. Returns 1 when the widths differ.
pub fn max_principal_sine<T: Scalar>(q1: &RMatrix<T>, q2: &RMatrix<T>) -> T {
    if q1.ncols() != q2.ncols() {
        return T::one();
    }
    if q1.ncols() == 0 {
        return T::zero();
    }
    let residual = q2 - q1 * (q1.transpose() * q2);
    singular_values(&residual).first().copied().unwrap_or_else(T::zero).min(T::one())
}

/// Pfaffian of a skew-symmetric matrix by Parlett-Reid elimination with pivoting.
/// Zero for odd dimension.
pub fn pfaffian<N: ComplexField + Copy>(a: &DMatrix<N>) -> N {
    let n = a.nrows();
    if n % 2 == 1 {
        return N::zero();
    }
    let mut a = a.clone();
    let mut pf = N::one();
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].modulus();
        for i in k + 2..n {
            let v = a[(i, k)].modulus();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == N::zero() {
            return N::zero();
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<N> = (k + 2..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<N> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    let delta = tau[ii] * col[jj] - col[ii] * tau[jj];
                    a[(i, j)] += delta;
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let m = RMatrix::<f64>::from_row_slice(2, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        let (k, info) = null_space(&m);
        assert_eq!(info.rank, 2);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-14);
        assert!((k.transpose() * &k - RMatrix::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let (k, info) = null_space(&RMatrix::<f64>::zeros(3, 5));
        assert_eq!(info.rank, 0);
        assert_eq!(k.ncols(), 5);
        let (r, _) = range_basis(&RMatrix::<f64>::zeros(3, 5));
        assert_eq!(r.ncols(), 0);
    }

    #[test]
    fn pfaffian_of_standard_block() {
        let m = RMatrix::<f64>::from_row_slice(2, 2, &[0.0, 2.5, -2.5, 0.0]);
        assert_eq!(pfaffian(&m), 2.5);
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        // Independent route: det of a skew matrix equals Pf^2.
        let n = 6;
        let mut m = RMatrix::<f64>::zeros(n, n);
        let mut x = 0.3_f64;
        for i in 0..n {
            for j in i + 1..n {
                x = (x * 3.7 + 0.11).fract() - 0.5;
                m[(i, j)] = x;
                m[(j, i)] = -x;
            }
        }
        let pf = pfaffian(&m);
        assert!((pf * pf - m.determinant()).abs() < 1e-14);
    }

    #[test]
    fn principal_sine_detects_rotation() {
        let q1 = RMatrix::<f64>::from_column_slice(2, 1, &[1.0, 0.0]);
        let t = 1e-3_f64;
        let q2 = RMatrix::<f64>::from_column_slice(2, 1, &[t.cos(), t.sin()]);
        assert!((max_principal_sine(&q1, &q2) - t.sin()).abs() < 1e-15);
    }
}
