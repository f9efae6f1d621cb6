use charvar::io::{CandidateJson, PointJson};
use charvar::rep::{project_with_report, random_initial};
use charvar::seifert::fiber_holonomy_candidates;
use charvar::volume::{estimate_from_samples, volume_samples, VolumeEstimate, VolumeSample};
use charvar::{ConjugacyClassSpec, GeneratorTuple, Generator, GroupElement, RepresentationPoint, SurfacePresentation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_point, CertifyReport, Dimensions};
use crate::config::{Initial, Problem, RunConfig, SeifertProblem};
use crate::error::CliError;

#[derive(Clone, Debug)]
pub struct Solved {
    pub point: RepresentationPoint,
    /// Zero-based index of the start that converged.
    pub attempt: usize,
    pub iterations: usize,
}

fn starting_tuple(
    cfg: &RunConfig,
    attempt: usize,
    pres: SurfacePresentation,
    classes: &ConjugacyClassSpec,
) -> Result<GeneratorTuple, CliError> {
    if cfg.initial == Initial::Identity && attempt == 0 {
        let spec = cfg.group;
        let id = || vec![GroupElement::identity(spec); pres.genus];
        return Ok(GeneratorTuple::new(spec, id(), id(), classes.representatives().to_vec())?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(attempt as u64);
    Ok(random_initial(pres, classes, &mut rng)?)
}

/// Projects deterministic starting tuples until one converges. Start `k` draws from
/// stream `k` of the seeded generator (or is the identity tuple for `k = 0` with
/// `initial: identity`).
pub fn solve(cfg: &RunConfig) -> Result<Solved, CliError> {
    let (pres, classes) = cfg.surface_problem()?;
    let opts = cfg.projection_options();
    let mut last = None;
    for attempt in 0..cfg.projection.restarts.max(1) {
        let start = starting_tuple(cfg, attempt, pres, &classes)?;
        match project_with_report(&start, &classes, &opts) {
            Ok(r) => {
                let point = r.point.with_irreducibility(cfg.certify.irreducible_tol);
                return Ok(Solved { point, attempt, iterations: r.iterations });
            }
            Err(e @ charvar::Error::NoConvergence { .. }) | Err(e @ charvar::Error::OutsideLogDomain) => {
                last = Some(e)
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one attempt").into())
}

pub fn certify(cfg: &RunConfig, point: &RepresentationPoint) -> CertifyReport {
    certify_point(point, cfg.tolerances.tol_flat, cfg.tolerances.gap_tol, &cfg.certify)
}

/// Reads a point file. The residual is recomputed from the matrices.
pub fn read_point(text: &str, cfg: &RunConfig) -> Result<RepresentationPoint, CliError> {
    let json: PointJson = serde_json::from_str(text).map_err(CliError::from_json)?;
    json.to_point(cfg.tolerances.tol_group).map_err(CliError::config)
}

/// One row of the CSV encoding of a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryRow {
    pub generator: String,
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

pub fn point_rows(p: &RepresentationPoint) -> Vec<EntryRow> {
    let pres = p.tuple.presentation();
    let mut rows = Vec::new();
    let mut push = |name: String, g: &GroupElement| {
        let m = g.matrix();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                rows.push(EntryRow { generator: name.clone(), row: i, col: j, re: m[(i, j)].re, im: m[(i, j)].im });
            }
        }
    };
    for (k, g) in p.tuple.elements().iter().enumerate() {
        let name = match pres.generator(k) {
            Generator::A(i) => format!("a{}", i + 1),
            Generator::B(i) => format!("b{}", i + 1),
            Generator::C(i) => format!("c{}", i + 1),
        };
        push(name, g);
    }
    push("target".into(), &p.target);
    rows
}

#[derive(Clone, Debug)]
pub struct VolumeRun {
    pub estimate: VolumeEstimate,
    pub samples: Vec<VolumeSample>,
}

pub fn volume(cfg: &RunConfig) -> Result<VolumeRun, CliError> {
    let (pres, classes) = cfg.surface_problem()?;
    let est = cfg.volume.estimator.into();
    let opts = cfg.volume_options();
    let (samples, rejected) = volume_samples(pres, &classes, cfg.volume.samples, cfg.seed, est, &opts)?;
    let estimate = estimate_from_samples(&samples, cfg.volume.samples, rejected, est, &opts)?;
    Ok(VolumeRun { estimate, samples })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub zeta_index: usize,
    #[serde(flatten)]
    pub candidate: CandidateJson,
    pub solved: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve_error: Option<String>,
    pub residual: Option<f64>,
    pub irreducible: Option<bool>,
    pub attempt: Option<usize>,
    pub iterations: Option<usize>,
    pub dimensions: Option<Dimensions>,
    pub certified: bool,
    pub failed_checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub genus: usize,
    pub euler_number: i64,
    pub rank: usize,
    /// Candidates with a certified irreducible point.
    pub components: usize,
    pub entries: Vec<ScanEntry>,
}

/// Solves and certifies at every fiber-holonomy candidate `zeta` with `zeta^r = 1`.
pub fn seifert_scan(cfg: &RunConfig) -> Result<ScanReport, CliError> {
    let Problem::Seifert(SeifertProblem { data, .. }) = &cfg.problem else {
        return Err(CliError::config("seifert-scan needs a seifert problem"));
    };
    let mut entries = Vec::new();
    for (j, cand) in fiber_holonomy_candidates::<f64>(data).iter().enumerate() {
        let mut sub = cfg.clone();
        sub.problem = Problem::Seifert(SeifertProblem { data: *data, zeta_index: j });
        let mut entry = ScanEntry {
            zeta_index: j,
            candidate: cand.into(),
            solved: false,
            solve_error: None,
            residual: None,
            irreducible: None,
            attempt: None,
            iterations: None,
            dimensions: None,
            certified: false,
            failed_checks: Vec::new(),
        };
        match solve(&sub) {
            Ok(s) => {
                let report = certify(&sub, &s.point);
                entry.solved = true;
                entry.residual = Some(s.point.residual_norm);
                entry.irreducible = s.point.irreducible;
                entry.attempt = Some(s.attempt);
                entry.iterations = Some(s.iterations);
                entry.dimensions = report.dimensions;
                entry.certified = report.pass;
                entry.failed_checks = report.failed_checks();
            }
            Err(e) if e.kind == crate::error::ErrorKind::Numerical => entry.solve_error = Some(e.message),
            Err(e) => return Err(e),
        }
        entries.push(entry);
    }
    let components = entries.iter().filter(|e| e.certified && e.irreducible == Some(true)).count();
    Ok(ScanReport { genus: data.genus, euler_number: data.euler_number, rank: data.rank, components, entries })
}
