use nalgebra::ComplexField;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lie::{adjoint_matrix, dexp_right, exp, AlgebraElement, GroupSpec};
use crate::linalg::range_basis;
use crate::presentation::{relator_differential, GeneratorTuple, TangentVector};
use crate::rep::{class_tangent_basis, relator_residual, CohomologyBasis, RepresentationPoint};
use crate::scalar::{lit, to_f64, CMatrix, RMatrix, RVector, Scalar};

use super::{BoundaryTerm, FormContext};

const NEWTON_MAX: usize = 60;

/// Local chart of the variety around a solved point.
///
/// Coordinates `x` run along the `h1` basis. The chart point is
/// `W(x) = move(L (h1 x + N y(x)))` where `N` spans the normal directions (the
/// complement of `z1` inside the class-compatible tangent space), `y(x)` is the
/// Newton solution of `Pi(W) = z0`, and `L` turns right-trivialized tangents into
/// move parameters (identity on interior generators, `(1 - Ad c)^+` on boundary ones).
/// Interior generators move as `s -> exp(w) s`, boundary ones as
/// `c -> exp(u) c exp(-u)`. The image is transverse to the gauge orbit, since both
/// `h1` and `N` are orthogonal to `b1`.
pub struct ClosednessChart<T: Scalar> {
    base: RepresentationPoint<T>,
    spec: GroupSpec,
    h1: RMatrix<T>,
    normal: RMatrix<T>,
    lift: RMatrix<T>,
    term: BoundaryTerm,
}

/// Chart point with its tangent frame `dW/dx_i`.
pub struct ChartPoint<T: Scalar> {
    pub point: RepresentationPoint<T>,
    pub frame: Vec<TangentVector<T>>,
}

fn block_diag_apply<T: Scalar>(blocks: &[RMatrix<T>], v: &RMatrix<T>) -> RMatrix<T> {
    let mut out = RMatrix::zeros(v.nrows(), v.ncols());
    let mut row = 0;
    for b in blocks {
        let d = b.nrows();
        out.rows_mut(row, d).copy_from(&(b * v.rows(row, d)));
        row += d;
    }
    out
}

impl<T: Scalar> ClosednessChart<T> {
    pub fn new(p: &RepresentationPoint<T>, basis: &CohomologyBasis<T>) -> Result<Self> {
        let t = &p.tuple;
        let spec = t.spec();
        let d = spec.real_dim();
        let n = t.elements().len();
        let interior = 2 * t.genus();

        let tangents: Vec<RMatrix<T>> = t.boundary().iter().map(|c| class_tangent_basis(c).0).collect();
        let width = interior * d + tangents.iter().map(|q| q.ncols()).sum::<usize>();
        let mut param = RMatrix::zeros(n * d, width);
        param.view_mut((0, 0), (interior * d, interior * d)).fill_with_identity();
        let mut col = interior * d;
        for (k, q) in tangents.iter().enumerate() {
            param.view_mut(((interior + k) * d, col), (d, q.ncols())).copy_from(q);
            col += q.ncols();
        }
        let jac = relator_differential(t).matrix() * &param;
        let (rows, _) = range_basis(&jac.transpose());
        let normal = &param * rows;

        let mut lift = RMatrix::identity(n * d, n * d);
        for (k, c) in t.boundary().iter().enumerate() {
            let op = RMatrix::identity(d, d) - adjoint_matrix(c);
            let cut = T::default_epsilon().sqrt() * op.norm().max(T::one());
            let pinv = op.pseudo_inverse(cut).map_err(|e| Error::Precondition(e.into()))?;
            lift.view_mut(((interior + k) * d, (interior + k) * d), (d, d)).copy_from(&pinv);
        }
        Ok(Self { base: p.clone(), spec, h1: basis.h1.clone(), normal, lift, term: BoundaryTerm::Symmetric })
    }

    pub fn dim(&self) -> usize {
        self.h1.ncols()
    }

    fn params(&self, x: &[T], y: &RVector<T>) -> RVector<T> {
        let v = &self.h1 * RVector::from_column_slice(x) + &self.normal * y;
        &self.lift * v
    }

    fn moved(&self, q: &RVector<T>) -> GeneratorTuple<T> {
        let t = &self.base.tuple;
        let d = self.spec.real_dim();
        let interior = 2 * t.genus();
        let elements = t
            .elements()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let e = exp(&AlgebraElement::from_coords(self.spec, q.rows(i * d, d).as_slice()));
                if i < interior {
                    (&e * s).reproject()
                } else {
                    (&(&e * s) * &e.inverse()).reproject()
                }
            })
            .collect();
        t.with_elements(elements)
    }

    /// Block-diagonal derivative of `q -> W` (right-trivialized velocities).
    fn move_derivative(&self, q: &RVector<T>, w: &GeneratorTuple<T>) -> Vec<RMatrix<T>> {
        let d = self.spec.real_dim();
        let interior = 2 * w.genus();
        (0..w.elements().len())
            .map(|i| {
                let wi = AlgebraElement::from_coords(self.spec, q.rows(i * d, d).as_slice());
                let mut block = RMatrix::zeros(d, d);
                let mut e = vec![T::zero(); d];
                for a in 0..d {
                    e[a] = T::one();
                    let col = dexp_right(&wi, &AlgebraElement::from_coords(self.spec, &e)).coords();
                    block.set_column(a, &col);
                    e[a] = T::zero();
                }
                if i >= interior {
                    block = (RMatrix::identity(d, d) - adjoint_matrix(&w.elements()[i])) * block;
                }
                block
            })
            .collect()
    }

    /// Solves for the normal correction and returns the point with its frame.
    pub fn evaluate(&self, x: &[T]) -> Result<ChartPoint<T>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let target = &self.base.target;
        let mut y = RVector::zeros(self.normal.ncols());
        let mut best = lit::<T>(f64::INFINITY);
        let mut iterations = 0;
        let (w, dmove) = loop {
            let q = self.params(x, &y);
            let w = self.moved(&q);
            let r = relator_residual(&w, target)?.coords();
            let norm = r.norm();
            let dmove = self.move_derivative(&q, &w);
            // Stop once Newton no longer improves the residual.
            if norm == T::zero() || (norm >= best * lit(0.5) && norm <= T::default_epsilon() * lit(1e3)) {
                break (w, dmove);
            }
            if iterations == NEWTON_MAX {
                return Err(Error::NoConvergence { iterations, final_residual: to_f64(norm) });
            }
            if y.is_empty() {
                // No normal directions to correct along: the point is not smooth.
                return Err(Error::Precondition("chart has no normal directions at a residual-carrying point".into()));
            }
            best = best.min(norm);
            iterations += 1;
            let jac = relator_differential(&w).matrix();
            let g = &jac * block_diag_apply(&dmove, &(&self.lift * &self.normal));
            let step = g
                .svd(true, true)
                .solve(&r, T::default_epsilon())
                .map_err(|e| Error::Precondition(e.into()))?;
            y -= step;
        };
        let residual_norm = relator_residual(&w, target)?.norm();
        let jac = relator_differential(&w).matrix();
        let tn = block_diag_apply(&dmove, &(&self.lift * &self.normal));
        let th = block_diag_apply(&dmove, &(&self.lift * &self.h1));
        let g = &jac * &tn;
        let dy = if g.ncols() == 0 {
            RMatrix::zeros(0, th.ncols())
        } else {
            -g.svd(true, true).solve(&(&jac * &th), T::default_epsilon()).map_err(|e| Error::Precondition(e.into()))?
        };
        let frame_coords = th + tn * dy;
        let frame = frame_coords
            .column_iter()
            .map(|c| TangentVector::from_coords(self.spec, c.as_slice()))
            .collect();
        let point = RepresentationPoint { tuple: w, target: target.clone(), residual_norm, irreducible: None };
        Ok(ChartPoint { point, frame })
    }

    /// Matrix of the form in chart coordinates at `x`.
    pub fn omega(&self, x: &[T]) -> Result<CMatrix<T>> {
        let cp = self.evaluate(x)?;
        FormContext::new(&cp.point, self.term).matrix(&cp.frame)
    }
}

/// Largest coefficient `|(d omega)_{ijk}|`, `i < j < k`, of the exterior derivative
/// at `x0` of the 2-form with matrix `form(x)`, by central differences of step `h`.
pub fn exterior_derivative_fd<T, F>(mut form: F, x0: &[T], h: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> Result<CMatrix<T>>,
{
    let n = x0.len();
    let two_h = h + h;
    let mut partials = Vec::with_capacity(n);
    for i in 0..n {
        let mut xp = x0.to_vec();
        let mut xm = x0.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let diff = (form(&xp)? - form(&xm)?) / Complex::from(two_h);
        partials.push(diff);
    }
    let mut worst = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let c = partials[i][(j, k)] - partials[j][(i, k)] + partials[k][(i, j)];
                worst = worst.max(c.modulus());
            }
        }
    }
    Ok(worst)
}

/// Largest finite-difference coefficient of `d Omega` at the point, in the chart of
/// [`ClosednessChart`], with step `h`.
pub fn check_closedness<T: Scalar>(p: &RepresentationPoint<T>, basis: &CohomologyBasis<T>, h: T) -> Result<T> {
    let chart = ClosednessChart::new(p, basis)?;
    let origin = vec![T::zero(); chart.dim()];
    exterior_derivative_fd(|x| chart.omega(x), &origin, h)
}

/// Closedness values at steps `h, h/2, h/4` with observed orders
/// `log2(v(h) / v(h/2))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosednessSweep {
    pub steps: Vec<f64>,
    pub values: Vec<f64>,
    pub orders: Vec<f64>,
}

impl ClosednessSweep {
    pub fn min_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn closedness_sweep<T: Scalar>(p: &RepresentationPoint<T>, basis: &CohomologyBasis<T>, h: T) -> Result<ClosednessSweep> {
    let chart = ClosednessChart::new(p, basis)?;
    let origin = vec![T::zero(); chart.dim()];
    let steps = [h, h * lit(0.5), h * lit(0.25)];
    let mut values = Vec::with_capacity(3);
    for &s in &steps {
        values.push(to_f64(exterior_derivative_fd(|x| chart.omega(x), &origin, s)?));
    }
    let orders = values.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(ClosednessSweep { steps: steps.iter().map(|&s| to_f64(s)).collect(), values, orders })
}
