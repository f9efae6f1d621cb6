//! Circle bundles over closed surfaces: `<a_i, b_i, h | h central, prod [a_i, b_i] = h^n>`.
//!
//! An irreducible representation sends the central fiber `h` to a scalar `zeta I`
//! with `zeta^r = 1`, so the surface relator lands on `zeta^n I`. Each root of unity
//! gives a closed-surface problem with that central target.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Family, GroupElement, GroupSpec};
use crate::presentation::SurfacePresentation;
use crate::rep::{perturb_and_reproject, ConjugacyClassSpec, ProjectionOptions, RepresentationPoint};
use crate::scalar::{frobenius, lit, Scalar};

/// Genus `g >= 2`, Euler number `n`, matrix size `r >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSeifert")]
pub struct SeifertData {
    #[serde(rename = "g")]
    pub genus: usize,
    #[serde(rename = "n")]
    pub euler_number: i64,
    #[serde(rename = "r")]
    pub rank: usize,
}

#[derive(Deserialize)]
struct RawSeifert {
    g: usize,
    n: i64,
    r: usize,
}

impl TryFrom<RawSeifert> for SeifertData {
    type Error = Error;

    fn try_from(raw: RawSeifert) -> Result<Self> {
        Self::new(raw.g, raw.n, raw.r)
    }
}

impl SeifertData {
    pub fn new(genus: usize, euler_number: i64, rank: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidSpec(format!("Seifert base genus must be at least 2, got {genus}")));
        }
        if rank < 2 {
            return Err(Error::InvalidSpec(format!("rank must be at least 2, got {rank}")));
        }
        Ok(Self { genus, euler_number, rank })
    }
}

/// `e^{2 pi i j / r}`, exact when the angle is a multiple of a quarter turn.
pub fn root_of_unity<T: Scalar>(j: i64, r: usize) -> Complex<T> {
    let r = r as i64;
    let j = j.rem_euclid(r);
    if (4 * j) % r == 0 {
        return match 4 * j / r {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
    }
    let angle = lit::<T>(2.0 * std::f64::consts::PI * j as f64 / r as f64);
    Complex::new(angle.cos(), angle.sin())
}

/// Fiber holonomy `zeta = e^{2 pi i k / r}` and the exponent `n` of the induced
/// relator target `zeta^n I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolonomyCandidate<T: Scalar> {
    pub index: usize,
    pub zeta: Complex<T>,
    pub target_power: i64,
}

impl<T: Scalar> HolonomyCandidate<T> {
    /// `zeta^n`, computed from the exponent so that it stays an exact root of unity.
    pub fn target_scalar(&self, rank: usize) -> Complex<T> {
        root_of_unity(self.index as i64 * self.target_power, rank)
    }
}

/// All `r`-th roots of unity, each tagged with the Euler number.
pub fn fiber_holonomy_candidates<T: Scalar>(d: &SeifertData) -> Vec<HolonomyCandidate<T>> {
    (0..d.rank)
        .map(|k| HolonomyCandidate { index: k, zeta: root_of_unity(k as i64, d.rank), target_power: d.euler_number })
        .collect()
}

/// Closed genus-`g` surface problem with target `zeta^n I`.
pub fn to_surface_problem<T: Scalar>(
    d: &SeifertData,
    family: Family,
    candidate: &HolonomyCandidate<T>,
) -> Result<(SurfacePresentation, ConjugacyClassSpec<T>)> {
    let spec = GroupSpec::new(family, d.rank)?;
    let target = GroupElement::scalar(spec, candidate.target_scalar(d.rank));
    let classes = ConjugacyClassSpec::closed(target, lit(1e-12))?;
    Ok((SurfacePresentation::closed(d.genus)?, classes))
}

/// True iff every point of the path has target `zeta^n I` and relator value within
/// `tol` of it: the fiber holonomy never changes along the path.
pub fn rigidity_check<T: Scalar>(
    d: &SeifertData,
    candidate: &HolonomyCandidate<T>,
    path: &[RepresentationPoint<T>],
    tol: T,
) -> bool {
    let z = candidate.target_scalar(d.rank);
    path.iter().all(|p| {
        let spec = p.spec();
        let expected = GroupElement::scalar(spec, z);
        let stored = frobenius(&(p.target.matrix() - expected.matrix()));
        let actual = crate::presentation::evaluate_relator(&p.tuple);
        let reached = frobenius(&(actual.matrix() - expected.matrix()));
        spec.rank == d.rank && stored <= tol && reached <= tol
    })
}

/// `steps` rounds of perturb-and-reproject starting at `start`; the returned path
/// includes `start`.
pub fn random_walk<T: Scalar, R: Rng + ?Sized>(
    start: &RepresentationPoint<T>,
    classes: &ConjugacyClassSpec<T>,
    steps: usize,
    sigma: T,
    rng: &mut R,
    opts: &ProjectionOptions,
) -> Result<Vec<RepresentationPoint<T>>> {
    let mut path = Vec::with_capacity(steps + 1);
    path.push(start.clone());
    for _ in 0..steps {
        let next = perturb_and_reproject(path.last().expect("nonempty"), classes, sigma, rng, opts)?;
        path.push(next);
    }
    Ok(path)
}
