//! Monte Carlo estimates of the Liouville volume of a moduli component, for
//! closed surfaces in SU(2).
//!
//! The quantity estimated is `V = int_R |Pf Omega| / J_orbit dsigma`, with `R` the
//! level set `Pi = z0` in `G^{2g}`, `Omega` the form on an orthonormal `h1` basis and
//! `J_orbit` the product of the singular values of the coboundary map. By the
//! co-area formula for the orbit map this is the Liouville volume of `R / G` up to
//! `vol(G) / |center|`. Both estimators draw Haar tuples `x` and look at
//! `F(x) = Pi(x) z0^{-1}`, whose rotation angle `phi` has Haar density
//! `(2/pi) sin^2 phi` on `[0, pi]`:
//!
//! - tube: keep `phi < window`, project `x` to `y` on `R`, weight
//!   `|Pf|(y) NJ(y) / J_orbit(y)`, divide by the Haar mass of the window;
//! - co-area: smooth kernel `k(phi) = (1 - (phi/window)^2)^2`, weight
//!   `k |Pf|(y) NJ(x) / J_orbit(y)`, divide by the Haar mass of `k`.
//!
//! With `extrapolate` (default) each estimator combines windows `w` and `w/2` as
//! `2 V(w/2) - V(w)`, removing the term linear in `w`. Such a term is present when
//! the level set contains reducible points (`z0 = I`): the pushed-forward density
//! has a cusp linear in `phi` there.
//!
//! `NJ = sqrt(det(dPi dPi^T))` is the normal Jacobian of `F`. Both results are in
//! units of `vol(G^{2g}) / vol(G)`; they are relative volumes in the negative trace
//! pairing convention.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::form_on_cohomology;
use crate::lie::{haar_sample, GroupElement, GroupSpec};
use crate::linalg::{pfaffian, singular_values};
use crate::presentation::{coboundary_matrix, evaluate_relator, relator_differential, GeneratorTuple, SurfacePresentation};
use crate::rep::{cohomology_at, project_to_variety, CohomologyBasis, ConjugacyClassSpec, ProjectionOptions, RepresentationPoint};
use crate::scalar::{lit, to_f64, Scalar};

pub const CONVENTION: &str = "Liouville volume |Pf Omega| / J_orbit integrated over the level set, pairing <X,Y> = -tr(XY), \
in units of vol(G^2g)/vol(G) for Haar probability measures";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Tube,
    CoArea,
}

impl Estimator {
    fn stream_key(self) -> u64 {
        match self {
            Estimator::Tube => 0x7475_6265,
            Estimator::CoArea => 0x636f_6172_6561,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeOptions {
    /// Angular window `phi < window` (radians) around the target.
    pub window: f64,
    pub min_landings: usize,
    pub projection: ProjectionOptions,
    pub gap_tol: f64,
    pub irreducible_tol: f64,
    /// Richardson extrapolation in the window radius.
    pub extrapolate: bool,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        Self { window: 0.4, min_landings: 30, projection: ProjectionOptions::default(), gap_tol: 1e-6, irreducible_tol: 1e-8, extrapolate: true }
    }
}

/// One accepted sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeSample {
    pub index: u64,
    pub angle: f64,
    /// Kernel value divided by its Haar mass.
    pub kernel: f64,
    pub density: f64,
    pub orbit_jacobian: f64,
    pub normal_jacobian: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub convention: String,
    pub method: Estimator,
    pub landings: usize,
    /// Samples inside the window that were dropped (reducible or failed to project).
    pub rejected: usize,
}

/// `|Pf Omega|` over the orthonormal `h1` basis.
pub fn liouville_density<T: Scalar>(p: &RepresentationPoint<T>, basis: &CohomologyBasis<T>) -> Result<T> {
    if basis.dim_h1() % 2 == 1 {
        return Err(Error::OddDimension(basis.dim_h1()));
    }
    let om = form_on_cohomology(p, basis)?;
    Ok(pfaffian(&om.real_part()).abs())
}

/// Product of the singular values of the coboundary map.
pub fn orbit_jacobian<T: Scalar>(t: &GeneratorTuple<T>) -> T {
    singular_values(&coboundary_matrix(t)).into_iter().fold(T::one(), |a, s| a * s)
}

/// `sqrt(det(dPi dPi^T))`.
pub fn normal_jacobian<T: Scalar>(t: &GeneratorTuple<T>) -> T {
    singular_values(&relator_differential(t).matrix()).into_iter().fold(T::one(), |a, s| a * s)
}

/// Rotation angle in `[0, pi]` of an SU(2) element.
pub fn su2_angle<T: Scalar>(g: &GroupElement<T>) -> T {
    let half_trace = g.matrix().trace().re * lit(0.5);
    half_trace.max(-T::one()).min(T::one()).acos()
}

fn bump(phi: f64, window: f64) -> f64 {
    if phi >= window {
        0.0
    } else {
        let s = phi / window;
        (1.0 - s * s).powi(2)
    }
}

/// Haar mass `(2/pi) int_0^pi k(phi) sin^2 phi dphi` of the estimator's kernel.
pub fn kernel_mass(estimator: Estimator, window: f64) -> f64 {
    match estimator {
        Estimator::Tube => (2.0 * window - (2.0 * window).sin()) / (2.0 * std::f64::consts::PI),
        Estimator::CoArea => {
            // Composite Simpson; the integrand is a polynomial times sin^2, smooth on [0, window].
            let n = 4096;
            let h = window / n as f64;
            let f = |x: f64| bump(x, window) * x.sin().powi(2);
            let mut acc = f(0.0) + f(window);
            for i in 1..n {
                acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0 * 2.0 / std::f64::consts::PI
        }
    }
}

fn normalized_kernel(estimator: Estimator, angle: f64, opts: &VolumeOptions) -> f64 {
    let at = |r: f64| match estimator {
        Estimator::Tube if angle < r => 1.0 / kernel_mass(estimator, r),
        Estimator::Tube => 0.0,
        Estimator::CoArea => bump(angle, r) / kernel_mass(estimator, r),
    };
    if opts.extrapolate {
        2.0 * at(0.5 * opts.window) - at(opts.window)
    } else {
        at(opts.window)
    }
}

fn check_problem<T: Scalar>(presentation: SurfacePresentation, classes: &ConjugacyClassSpec<T>) -> Result<GroupSpec> {
    let spec = classes.spec();
    if spec != GroupSpec::su(2) {
        return Err(Error::Unsupported(format!("volume estimates are implemented for SU(2), not {spec}")));
    }
    if presentation.boundary_count != 0 || classes.boundary_count() != 0 {
        return Err(Error::Unsupported("volume estimates need a closed surface".into()));
    }
    Ok(spec)
}

fn sample_rng(seed: u64, estimator: Estimator, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ estimator.stream_key());
    rng.set_stream(index);
    rng
}

enum Outcome {
    Miss,
    Rejected,
    Landed(VolumeSample),
}

fn draw<T: Scalar>(
    presentation: SurfacePresentation,
    classes: &ConjugacyClassSpec<T>,
    estimator: Estimator,
    seed: u64,
    index: u64,
    opts: &VolumeOptions,
) -> Outcome {
    let spec = classes.spec();
    let mut rng = sample_rng(seed, estimator, index);
    let elements = (0..presentation.generator_count())
        .map(|_| haar_sample(spec, &mut rng).expect("compact group"))
        .collect();
    let x = GeneratorTuple::from_flat(spec, presentation, elements).expect("shape from presentation");
    let f = &evaluate_relator(&x) * &classes.target().inverse();
    let angle = to_f64(su2_angle(&f));
    if angle >= opts.window {
        return Outcome::Miss;
    }
    let kernel = normalized_kernel(estimator, angle, opts);
    if kernel == 0.0 {
        return Outcome::Miss;
    }
    let Ok(y) = project_to_variety(&x, classes, &opts.projection) else {
        return Outcome::Rejected;
    };
    let y = y.with_irreducibility(lit(opts.irreducible_tol));
    if y.irreducible != Some(true) {
        return Outcome::Rejected;
    }
    let Ok(basis) = cohomology_at(&y, opts.projection.tol_flat, opts.gap_tol) else {
        return Outcome::Rejected;
    };
    let Ok(density) = liouville_density(&y, &basis) else {
        return Outcome::Rejected;
    };
    let density = to_f64(density);
    let orbit = to_f64(orbit_jacobian(&y.tuple));
    let nj = match estimator {
        Estimator::Tube => to_f64(normal_jacobian(&y.tuple)),
        Estimator::CoArea => to_f64(normal_jacobian(&x)),
    };
    let weight = kernel * density * nj / orbit;
    Outcome::Landed(VolumeSample { index, angle, kernel, density, orbit_jacobian: orbit, normal_jacobian: nj, weight })
}

/// Draws samples `0..n` (each from its own random stream) and returns the
/// accepted ones in index order, with the number rejected.
pub fn volume_samples<T: Scalar>(
    presentation: SurfacePresentation,
    classes: &ConjugacyClassSpec<T>,
    n: usize,
    seed: u64,
    estimator: Estimator,
    opts: &VolumeOptions,
) -> Result<(Vec<VolumeSample>, usize)> {
    check_problem(presentation, classes)?;
    let outcomes: Vec<Outcome> = (0..n as u64)
        .into_par_iter()
        .map(|i| draw(presentation, classes, estimator, seed, i, opts))
        .collect();
    let mut landed = Vec::new();
    let mut rejected = 0;
    for o in outcomes {
        match o {
            Outcome::Miss => {}
            Outcome::Rejected => rejected += 1,
            Outcome::Landed(s) => landed.push(s),
        }
    }
    Ok((landed, rejected))
}

/// Mean and standard error over all `n` draws (misses count as zero).
pub fn estimate_from_samples(
    samples: &[VolumeSample],
    n: usize,
    rejected: usize,
    estimator: Estimator,
    opts: &VolumeOptions,
) -> Result<VolumeEstimate> {
    if n < 2 {
        return Err(Error::InsufficientSamples { landings: samples.len(), required: opts.min_landings });
    }
    if samples.len() < opts.min_landings {
        return Err(Error::InsufficientSamples { landings: samples.len(), required: opts.min_landings });
    }
    let nf = n as f64;
    let values = samples.iter().map(|s| s.weight);
    let sum: f64 = values.clone().sum();
    let mean = sum / nf;
    let sq: f64 = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() + (n - samples.len()) as f64 * mean * mean;
    let var = sq / (nf - 1.0);
    Ok(VolumeEstimate {
        value: mean,
        stderr: (var / nf).sqrt(),
        samples: n,
        convention: CONVENTION.to_string(),
        method: estimator,
        landings: samples.len(),
        rejected,
    })
}

pub fn estimate_relative_volume<T: Scalar>(
    presentation: SurfacePresentation,
    classes: &ConjugacyClassSpec<T>,
    n: usize,
    seed: u64,
    estimator: Estimator,
    opts: &VolumeOptions,
) -> Result<VolumeEstimate> {
    let (samples, rejected) = volume_samples(presentation, classes, n, seed, estimator, opts)?;
    estimate_from_samples(&samples, n, rejected, estimator, opts)
}
