use charvar::form::{closedness_sweep, descent_defect, form_on_cohomology, kernel_of_form};
use charvar::linalg::max_principal_sine;
use charvar::rep::{cohomology_at, commutant_dimension};
use charvar::{CohomologyBasis, RepresentationPoint};
use serde::{Deserialize, Serialize};

use crate::config::CertifyConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Passes when `value <= tolerance`.
    Upper,
    /// Passes when `value >= tolerance`.
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    /// `None` when the quantity is undefined (the check is then decided by `note`).
    pub value: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn measure(name: &str, value: f64, tolerance: f64, bound: Bound) -> Self {
        let pass = match bound {
            Bound::Upper => value <= tolerance,
            Bound::Lower => value >= tolerance,
        };
        // JSON has no infinities or NaN; those values are reported as null with a note.
        let (value, note) = if value.is_finite() {
            (Some(value), None)
        } else {
            (None, Some(format!("non-finite value {value}")))
        };
        Self { check: name.to_string(), value, tolerance, bound, pass, note }
    }

    fn failed(name: &str, tolerance: f64, bound: Bound, note: impl ToString) -> Self {
        Self { check: name.to_string(), value: None, tolerance, bound, pass: false, note: Some(note.to_string()) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Dimensions>,
}

impl CertifyReport {
    fn finish(checks: Vec<Check>, dimensions: Option<Dimensions>) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Self { checks, pass, dimensions }
    }

    pub fn failed_checks(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.check.clone()).collect()
    }
}

/// Runs the certification checks in order. A failed residual gate stops early, as
/// every later check presumes a point on the variety.
pub fn certify_point(p: &RepresentationPoint, tol_flat: f64, gap_tol: f64, cfg: &CertifyConfig) -> CertifyReport {
    let mut checks = vec![Check::measure("residual", p.residual_norm, tol_flat, Bound::Upper)];
    if !checks[0].pass {
        return CertifyReport::finish(checks, None);
    }
    let commutant = commutant_dimension(&p.tuple, cfg.irreducible_tol);
    checks.push(Check::measure("commutant_dimension", commutant as f64, 1.0, Bound::Upper));

    let basis = match cohomology_at(p, tol_flat, gap_tol) {
        Ok(b) => b,
        Err(e) => {
            checks.push(Check::failed("cohomology", cfg.min_separation, Bound::Lower, e));
            return CertifyReport::finish(checks, None);
        }
    };
    let dims = Dimensions { z1: basis.dim_z1(), b1: basis.dim_b1(), h1: basis.dim_h1() };
    let separation = [&basis.z1_rank, &basis.b1_rank, &basis.h1_rank]
        .iter()
        .map(|r| r.separation())
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::measure("rank_separation", separation, cfg.min_separation, Bound::Lower));

    checks.push(match descent_defect(p, &basis) {
        Ok(d) => Check::measure("descent", d, cfg.descent_tol, Bound::Upper),
        Err(e) => Check::failed("descent", cfg.descent_tol, Bound::Upper, e),
    });
    checks.extend(closedness_checks(p, &basis, cfg));
    checks.extend(kernel_checks(p, &basis, cfg));
    checks.push(nondegeneracy_check(p, &basis, cfg));
    CertifyReport::finish(checks, Some(dims))
}

fn closedness_checks(p: &RepresentationPoint, basis: &CohomologyBasis, cfg: &CertifyConfig) -> Vec<Check> {
    if basis.dim_h1() < 3 {
        let note = "vacuous: a 3-form on a chart of dimension below 3";
        return vec![
            Check { note: Some(note.into()), ..Check::measure("closedness", 0.0, cfg.closedness_tol, Bound::Upper) },
            Check {
                check: "closedness_order".into(),
                value: None,
                tolerance: cfg.min_order,
                bound: Bound::Lower,
                pass: true,
                note: Some(note.into()),
            },
        ];
    }
    match closedness_sweep(p, basis, cfg.closedness_step) {
        Ok(s) => vec![
            Check::measure("closedness", s.values[0], cfg.closedness_tol, Bound::Upper),
            Check::measure("closedness_order", s.min_order(), cfg.min_order, Bound::Lower),
        ],
        Err(e) => vec![
            Check::failed("closedness", cfg.closedness_tol, Bound::Upper, &e),
            Check::failed("closedness_order", cfg.min_order, Bound::Lower, e),
        ],
    }
}

fn kernel_checks(p: &RepresentationPoint, basis: &CohomologyBasis, cfg: &CertifyConfig) -> Vec<Check> {
    match kernel_of_form(p, basis) {
        Ok((k, _)) => {
            let diff = k.ncols().abs_diff(basis.dim_b1()) as f64;
            let mut out = vec![Check::measure("kernel_dimension_defect", diff, 0.0, Bound::Upper)];
            out.push(if diff == 0.0 {
                Check::measure("kernel_angle", max_principal_sine(&k, &basis.b1), cfg.kernel_angle_tol, Bound::Upper)
            } else {
                Check::failed("kernel_angle", cfg.kernel_angle_tol, Bound::Upper, "kernel and b1 differ in dimension")
            });
            out
        }
        Err(e) => vec![
            Check::failed("kernel_dimension_defect", 0.0, Bound::Upper, &e),
            Check::failed("kernel_angle", cfg.kernel_angle_tol, Bound::Upper, e),
        ],
    }
}

fn nondegeneracy_check(p: &RepresentationPoint, basis: &CohomologyBasis, cfg: &CertifyConfig) -> Check {
    if basis.dim_h1() == 0 {
        return Check::failed("nondegeneracy", cfg.nondegeneracy_tol, Bound::Lower, "h1 is zero-dimensional");
    }
    match form_on_cohomology(p, basis) {
        Ok(f) => {
            let s = f.singular_values();
            let max = s.iter().copied().fold(0.0, f64::max);
            let min = s.iter().copied().fold(f64::INFINITY, f64::min);
            let ratio = if max > 0.0 { min / max } else { 0.0 };
            Check::measure("nondegeneracy", ratio, cfg.nondegeneracy_tol, Bound::Lower)
        }
        Err(e) => Check::failed("nondegeneracy", cfg.nondegeneracy_tol, Bound::Lower, e),
    }
}
