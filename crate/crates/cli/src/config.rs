use std::path::{Path, PathBuf};

use charvar::io::{matrix_from_json, MatrixJson};
use charvar::rep::{torus_element, ProjectionOptions};
use charvar::seifert::{fiber_holonomy_candidates, to_surface_problem, SeifertData};
use charvar::volume::{Estimator, VolumeOptions};
use charvar::{ConjugacyClassSpec, GroupElement, GroupSpec, SurfacePresentation, Tolerances};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupSpec,
    pub problem: Problem,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub output: Option<OutputConfig>,
    #[serde(default)]
    pub projection: ProjectionConfig,
    #[serde(default)]
    pub certify: CertifyConfig,
    #[serde(default)]
    pub volume: VolumeConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Problem {
    Surface(SurfaceProblem),
    Seifert(SeifertProblem),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceProblem {
    pub g: usize,
    #[serde(default)]
    pub m: usize,
    /// One entry per boundary generator.
    #[serde(default)]
    pub classes: Vec<ClassConfig>,
    /// Central target `z0 = zeta I`, as `[re, im]`.
    #[serde(default = "unit")]
    pub target: [f64; 2],
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

/// A class representative: an explicit matrix, or `diag(e^{i angle}, e^{-i angle}, 1, ...)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassConfig {
    Angle { angle: f64 },
    Matrix { matrix: MatrixJson },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeifertProblem {
    #[serde(flatten)]
    pub data: SeifertData,
    #[serde(default)]
    pub zeta_index: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    Identity,
    #[default]
    Haar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectionConfig {
    pub max_iter: usize,
    pub damping: f64,
    /// Starting tuples tried by `solve` before giving up.
    pub restarts: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        let d = ProjectionOptions::default();
        Self { max_iter: d.max_iter, damping: d.damping, restarts: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertifyConfig {
    pub descent_tol: f64,
    pub closedness_step: f64,
    pub closedness_tol: f64,
    pub min_order: f64,
    pub kernel_angle_tol: f64,
    pub min_separation: f64,
    /// `sigma_min / sigma_max` of the form on `h1` must exceed this.
    pub nondegeneracy_tol: f64,
    pub irreducible_tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            descent_tol: 1e-9,
            closedness_step: 1e-3,
            closedness_tol: 1e-4,
            min_order: 1.8,
            kernel_angle_tol: 1e-7,
            min_separation: 1e6,
            nondegeneracy_tol: 1e-8,
            irreducible_tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorChoice {
    Tube,
    #[default]
    CoArea,
}

impl From<EstimatorChoice> for Estimator {
    fn from(e: EstimatorChoice) -> Self {
        match e {
            EstimatorChoice::Tube => Estimator::Tube,
            EstimatorChoice::CoArea => Estimator::CoArea,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VolumeConfig {
    pub samples: usize,
    pub estimator: EstimatorChoice,
    pub window: f64,
    pub extrapolate: bool,
    pub min_landings: usize,
}

impl Default for VolumeConfig {
    fn default() -> Self {
        let d = VolumeOptions::default();
        Self {
            samples: 200_000,
            estimator: EstimatorChoice::default(),
            window: d.window,
            extrapolate: d.extrapolate,
            min_landings: d.min_landings,
        }
    }
}

/// Reads and validates a config file. Parse errors keep serde_json's line and column.
pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<RunConfig, CliError> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(CliError::from_json)?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.tolerances.validate().map_err(|e| CliError::config(e.to_string()))?;
        if let Problem::Surface(s) = &self.problem {
            if s.classes.len() != s.m {
                return Err(CliError::config(format!("{} classes given for m = {}", s.classes.len(), s.m)));
            }
            if s.g == 0 {
                return Err(CliError::config("genus must be at least 1"));
            }
        }
        if let Problem::Seifert(s) = &self.problem {
            if s.data.rank != self.group.rank {
                return Err(CliError::config(format!("Seifert r = {} but group rank {}", s.data.rank, self.group.rank)));
            }
            if s.zeta_index >= s.data.rank {
                return Err(CliError::config(format!("zeta_index {} out of range 0..{}", s.zeta_index, s.data.rank)));
            }
        }
        let positive = [
            self.certify.descent_tol,
            self.certify.closedness_step,
            self.certify.closedness_tol,
            self.volume.window,
            self.projection.damping,
        ];
        if positive.iter().any(|x| !(*x > 0.0)) {
            return Err(CliError::config("certify tolerances, volume window and damping must be positive"));
        }
        Ok(())
    }

    pub fn projection_options(&self) -> ProjectionOptions {
        ProjectionOptions {
            max_iter: self.projection.max_iter,
            damping: self.projection.damping,
            tol_flat: self.tolerances.tol_flat,
            ..ProjectionOptions::default()
        }
    }

    pub fn volume_options(&self) -> VolumeOptions {
        VolumeOptions {
            window: self.volume.window,
            min_landings: self.volume.min_landings,
            projection: self.projection_options(),
            gap_tol: self.tolerances.gap_tol,
            irreducible_tol: self.certify.irreducible_tol,
            extrapolate: self.volume.extrapolate,
        }
    }

    /// The surface problem this config describes (Seifert problems reduce to one).
    pub fn surface_problem(&self) -> Result<(SurfacePresentation, ConjugacyClassSpec), CliError> {
        let spec = self.group;
        match &self.problem {
            Problem::Surface(s) => {
                let pres = SurfacePresentation::new(s.g, s.m).map_err(CliError::config)?;
                let reps = s
                    .classes
                    .iter()
                    .map(|c| match c {
                        ClassConfig::Angle { angle } => Ok(torus_element(spec, *angle)),
                        ClassConfig::Matrix { matrix } => {
                            let m = matrix_from_json(matrix).map_err(CliError::config)?;
                            GroupElement::from_matrix(spec, m, self.tolerances.tol_group).map_err(CliError::config)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let target = GroupElement::scalar(spec, Complex::new(s.target[0], s.target[1]));
                let classes =
                    ConjugacyClassSpec::new(reps, target, self.tolerances.tol_group).map_err(CliError::config)?;
                Ok((pres, classes))
            }
            Problem::Seifert(s) => {
                let cand = fiber_holonomy_candidates::<f64>(&s.data)[s.zeta_index];
                to_surface_problem(&s.data, spec.family, &cand).map_err(CliError::config)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let cfg = parse(r#"{"group":{"family":"SU","rank":2},"problem":{"surface":{"g":2}}}"#).unwrap();
        assert_eq!(cfg.tolerances, Tolerances::default());
        assert_eq!(cfg.initial, Initial::Haar);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.certify.closedness_step, 1e-3);
        let (pres, classes) = cfg.surface_problem().unwrap();
        assert_eq!((pres.genus, pres.boundary_count), (2, 0));
        assert!(classes.target().as_scalar(0.0).is_some());
    }

    #[test]
    fn classes_by_angle_or_matrix() {
        let text = r#"{"group":{"family":"SU","rank":2},
            "problem":{"surface":{"g":1,"m":2,"target":[-1,0],"classes":[
                {"angle":0.5},
                {"matrix":[[[0,1],[0,0]],[[0,0],[0,-1]]]}]}}}"#;
        let cfg = parse(text).unwrap();
        let (_, classes) = cfg.surface_problem().unwrap();
        assert_eq!(classes.boundary_count(), 2);
        assert_eq!(classes.representatives()[1].matrix()[(0, 0)], Complex::new(0.0, 1.0));
        assert_eq!(classes.target().matrix()[(1, 1)], Complex::new(-1.0, 0.0));
    }

    #[test]
    fn non_group_class_matrix_is_rejected() {
        let text = r#"{"group":{"family":"SU","rank":2},
            "problem":{"surface":{"g":1,"m":1,"classes":[{"matrix":[[[2,0],[0,0]],[[0,0],[1,0]]]}]}}}"#;
        let e = parse(text).unwrap().surface_problem().unwrap_err();
        assert_eq!(e.kind, crate::error::ErrorKind::Config);
    }

    #[test]
    fn seifert_problem_reduces_to_closed_surface() {
        let text = r#"{"group":{"family":"SU","rank":2},"problem":{"seifert":{"g":3,"n":1,"r":2,"zeta_index":1}}}"#;
        let (pres, classes) = parse(text).unwrap().surface_problem().unwrap();
        assert_eq!((pres.genus, pres.boundary_count), (3, 0));
        assert_eq!(classes.target().as_scalar(1e-15), Some(Complex::new(-1.0, 0.0)));
        let bad = r#"{"group":{"family":"SU","rank":3},"problem":{"seifert":{"g":3,"n":1,"r":2}}}"#;
        assert!(parse(bad).is_err());
    }

    #[test]
    fn parse_error_has_position() {
        let e = parse("{\n  \"group\": 3,\n}").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.column.is_some());
    }
}
