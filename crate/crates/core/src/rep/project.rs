use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{adjoint_matrix, exp, gaussian_algebra, random_element, AlgebraElement, GroupElement};
use crate::presentation::{relator_differential, GeneratorTuple, SurfacePresentation};
use crate::scalar::{lit, to_f64, RMatrix, RVector, Scalar};

use super::{relator_residual, ConjugacyClassSpec, RepresentationPoint};

/// Controls for the damped Gauss-Newton projection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionOptions {
    pub max_iter: usize,
    /// Iteration stops once the residual is at or below this value.
    pub stop_tol: f64,
    /// Largest residual accepted at exit.
    pub tol_flat: f64,
    /// Tikhonov factor: `lambda = damping * ||residual||`.
    pub damping: f64,
    pub max_halvings: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self { max_iter: 200, stop_tol: 1e-13, tol_flat: 1e-9, damping: 1e-2, max_halvings: 40 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport<T: Scalar> {
    pub point: RepresentationPoint<T>,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
}

/// Jacobian of the residual with respect to the move parameters: interior
/// generators move as `s -> exp(w) s`, boundary generators as `c -> exp(u) c exp(-u)`
/// (right-trivialized velocity `(1 - Ad c) u`).
fn move_jacobian<T: Scalar>(t: &GeneratorTuple<T>) -> RMatrix<T> {
    let mut j = relator_differential(t).matrix();
    let d = t.spec().real_dim();
    let interior = 2 * t.genus();
    for (k, c) in t.boundary().iter().enumerate() {
        let col = (interior + k) * d;
        let block = j.columns(col, d) * (RMatrix::identity(d, d) - adjoint_matrix(c));
        j.columns_mut(col, d).copy_from(&block);
    }
    j
}

fn apply_move<T: Scalar>(t: &GeneratorTuple<T>, step: &RVector<T>) -> GeneratorTuple<T> {
    let spec = t.spec();
    let d = spec.real_dim();
    let interior = 2 * t.genus();
    let elements = t
        .elements()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let w = AlgebraElement::from_coords(spec, step.rows(i * d, d).as_slice());
            let e = exp(&w);
            if i < interior {
                (&e * s).reproject()
            } else {
                (&(&e * s) * &e.inverse()).reproject()
            }
        })
        .collect();
    t.with_elements(elements)
}

/// Damped Gauss-Newton on `log(Pi z0^{-1}) = 0`.
///
/// Steps are the Tikhonov-regularized minimum-norm solutions of the linearized
/// equation, backtracked until the residual decreases. Boundary generators only move
/// by conjugation, so they never leave their classes.
pub fn project_with_report<T: Scalar>(
    initial: &GeneratorTuple<T>,
    classes: &ConjugacyClassSpec<T>,
    opts: &ProjectionOptions,
) -> Result<ProjectionReport<T>> {
    if initial.boundary_count() != classes.boundary_count() {
        return Err(Error::DimensionMismatch { expected: classes.boundary_count(), found: initial.boundary_count() });
    }
    if initial.spec() != classes.spec() {
        return Err(Error::InvalidSpec(format!("tuple in {} but classes in {}", initial.spec(), classes.spec())));
    }
    let target = classes.target();
    let stop_tol: T = lit(opts.stop_tol);
    let tol_flat: T = lit(opts.tol_flat);
    let mut t = initial.clone();
    let mut r = relator_residual(&t, target)?.coords();
    let mut norm = r.norm();
    let mut history = vec![to_f64(norm)];
    let mut iterations = 0;

    while norm > stop_tol {
        if iterations == opts.max_iter {
            return Err(Error::NoConvergence { iterations, final_residual: to_f64(norm) });
        }
        iterations += 1;
        let j = move_jacobian(&t);
        let d = j.nrows();
        let lambda = lit::<T>(opts.damping) * norm;
        let normal = &j * j.transpose() + RMatrix::identity(d, d) * lambda;
        let y = normal
            .cholesky()
            .map(|c| c.solve(&r))
            .ok_or(Error::NoConvergence { iterations, final_residual: to_f64(norm) })?;
        let step = -(j.transpose() * y);

        let mut scale = T::one();
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let candidate = apply_move(&t, &(&step * scale));
            if let Ok(res) = relator_residual(&candidate, target) {
                let c = res.coords();
                if c.norm() < norm {
                    accepted = Some((candidate, c));
                    break;
                }
            }
            scale *= lit(0.5);
        }
        let Some((next, next_r)) = accepted else {
            // Rounding floor: nothing decreases the residual any more.
            if norm <= tol_flat {
                break;
            }
            return Err(Error::NoConvergence { iterations, final_residual: to_f64(norm) });
        };
        let next_norm = next_r.norm();
        let stalled = next_norm > norm * lit(0.5) && next_norm <= tol_flat && scale == T::one();
        t = next;
        r = next_r;
        norm = next_norm;
        history.push(to_f64(norm));
        if stalled {
            break;
        }
    }
    if !(norm <= tol_flat) {
        return Err(Error::NoConvergence { iterations, final_residual: to_f64(norm) });
    }
    let point = RepresentationPoint { tuple: t, target: target.clone(), residual_norm: norm, irreducible: None };
    Ok(ProjectionReport { point, iterations, residual_history: history })
}

pub fn project_to_variety<T: Scalar>(
    initial: &GeneratorTuple<T>,
    classes: &ConjugacyClassSpec<T>,
    opts: &ProjectionOptions,
) -> Result<RepresentationPoint<T>> {
    project_with_report(initial, classes, opts).map(|r| r.point)
}

/// Random starting tuple: random interior generators, boundary generators at random
/// conjugates of their class representatives.
pub fn random_initial<T: Scalar, R: Rng + ?Sized>(
    presentation: SurfacePresentation,
    classes: &ConjugacyClassSpec<T>,
    rng: &mut R,
) -> Result<GeneratorTuple<T>> {
    if presentation.boundary_count != classes.boundary_count() {
        return Err(Error::DimensionMismatch { expected: classes.boundary_count(), found: presentation.boundary_count });
    }
    let spec = classes.spec();
    let mut elements: Vec<GroupElement<T>> =
        (0..2 * presentation.genus).map(|_| random_element(spec, rng)).collect();
    for rep in classes.representatives() {
        let h = random_element(spec, rng);
        elements.push(rep.conjugate_by(&h));
    }
    GeneratorTuple::from_flat(spec, presentation, elements)
}

/// One random-walk step: every generator moved by `exp` of a Gaussian of scale
/// `sigma` (boundary ones by conjugation), then projected back.
pub fn perturb_and_reproject<T: Scalar, R: Rng + ?Sized>(
    p: &RepresentationPoint<T>,
    classes: &ConjugacyClassSpec<T>,
    sigma: T,
    rng: &mut R,
    opts: &ProjectionOptions,
) -> Result<RepresentationPoint<T>> {
    let spec = p.spec();
    let d = spec.real_dim();
    let n = p.tuple.elements().len();
    let mut step = RVector::zeros(n * d);
    for i in 0..n {
        step.rows_mut(i * d, d).copy_from(&gaussian_algebra(spec, sigma, rng).coords());
    }
    let moved = apply_move(&p.tuple, &step);
    project_to_variety(&moved, classes, opts)
}
