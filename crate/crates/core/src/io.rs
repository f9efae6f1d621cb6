//! JSON forms of the f64 data types.
//!
//! Complex matrices are arrays of rows, each entry `[re, im]`. Tuples are
//! `{"g", "m", "a", "b", "c"}` with lists of matrices; points add `"group"`,
//! `"target"`, `"residual"` and `"irreducible"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::FormMatrix;
use crate::lie::{AlgebraElement, GroupElement, GroupSpec};
use crate::presentation::{GeneratorTuple, TangentVector};
use crate::rep::{CohomologyBasis, RepresentationPoint};
use crate::scalar::CMatrix;
use crate::seifert::HolonomyCandidate;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix<f64>) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidSpec("matrix must be square and nonempty".into()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| num_complex::Complex::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleJson {
    pub g: usize,
    pub m: usize,
    pub a: Vec<MatrixJson>,
    pub b: Vec<MatrixJson>,
    pub c: Vec<MatrixJson>,
}

impl TupleJson {
    pub fn from_tuple(t: &GeneratorTuple<f64>) -> Self {
        let g = t.genus();
        Self {
            g,
            m: t.boundary_count(),
            a: (0..g).map(|i| matrix_to_json(t.a(i).matrix())).collect(),
            b: (0..g).map(|i| matrix_to_json(t.b(i).matrix())).collect(),
            c: t.boundary().iter().map(|c| matrix_to_json(c.matrix())).collect(),
        }
    }

    /// Rebuilds the tuple, checking every matrix lies in the group to `tol`.
    pub fn to_tuple(&self, spec: GroupSpec, tol: f64) -> Result<GeneratorTuple<f64>> {
        if self.a.len() != self.g || self.b.len() != self.g {
            return Err(Error::DimensionMismatch { expected: self.g, found: self.a.len().min(self.b.len()) });
        }
        if self.c.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: self.c.len() });
        }
        let el = |m: &MatrixJson| -> Result<GroupElement<f64>> { GroupElement::from_matrix(spec, matrix_from_json(m)?, tol) };
        let a = self.a.iter().map(el).collect::<Result<Vec<_>>>()?;
        let b = self.b.iter().map(el).collect::<Result<Vec<_>>>()?;
        let c = self.c.iter().map(el).collect::<Result<Vec<_>>>()?;
        GeneratorTuple::new(spec, a, b, c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub group: GroupSpec,
    #[serde(flatten)]
    pub tuple: TupleJson,
    pub target: MatrixJson,
    pub residual: f64,
    pub irreducible: Option<bool>,
}

impl PointJson {
    pub fn from_point(p: &RepresentationPoint<f64>) -> Self {
        Self {
            group: p.spec(),
            tuple: TupleJson::from_tuple(&p.tuple),
            target: matrix_to_json(p.target.matrix()),
            residual: p.residual_norm,
            irreducible: p.irreducible,
        }
    }

    /// Rebuilds the point. The residual is recomputed from the matrices; the stored
    /// value is informational.
    pub fn to_point(&self, tol: f64) -> Result<RepresentationPoint<f64>> {
        let tuple = self.tuple.to_tuple(self.group, tol)?;
        let target = GroupElement::from_matrix(self.group, matrix_from_json(&self.target)?, tol)?;
        let mut p = RepresentationPoint::new(tuple, target)?;
        p.irreducible = self.irreducible;
        Ok(p)
    }
}

/// A tangent vector as its list of per-generator algebra matrices.
pub fn tangent_to_json(v: &TangentVector<f64>) -> Vec<MatrixJson> {
    v.components().iter().map(|x| matrix_to_json(x.matrix())).collect()
}

pub fn tangent_from_json(spec: GroupSpec, v: &[MatrixJson], tol: f64) -> Result<TangentVector<f64>> {
    let comps = v
        .iter()
        .map(|m| AlgebraElement::from_matrix(spec, matrix_from_json(m)?, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(TangentVector::new(comps))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyJson {
    #[serde(rename = "Z1")]
    pub z1: Vec<Vec<MatrixJson>>,
    #[serde(rename = "B1")]
    pub b1: Vec<Vec<MatrixJson>>,
    #[serde(rename = "H1")]
    pub h1: Vec<Vec<MatrixJson>>,
}

impl CohomologyJson {
    pub fn from_basis(basis: &CohomologyBasis<f64>) -> Self {
        let conv = |vs: Vec<TangentVector<f64>>| vs.iter().map(tangent_to_json).collect();
        Self { z1: conv(basis.z1_vectors()), b1: conv(basis.b1_vectors()), h1: conv(basis.h1_vectors()) }
    }
}

/// Form entries: plain numbers for compact groups (real form), `[re, im]` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaJson {
    Real(Vec<Vec<f64>>),
    Complex(MatrixJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormMatrixJson {
    pub basis: Vec<String>,
    pub omega: OmegaJson,
}

impl FormMatrixJson {
    pub fn from_form(f: &FormMatrix<f64>, spec: GroupSpec) -> Self {
        let omega = if spec.is_compact() {
            let m = f.real_part();
            OmegaJson::Real((0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
        } else {
            OmegaJson::Complex(matrix_to_json(&f.omega))
        };
        Self { basis: f.basis.clone(), omega }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub zeta: [f64; 2],
    pub target_power: i64,
}

impl From<&HolonomyCandidate<f64>> for CandidateJson {
    fn from(c: &HolonomyCandidate<f64>) -> Self {
        Self { zeta: [c.zeta.re, c.zeta.im], target_power: c.target_power }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::presentation::SurfacePresentation;
    use crate::rep::{cohomology_at, project_to_variety, random_initial, torus_element, ConjugacyClassSpec, ProjectionOptions};

    fn point() -> RepresentationPoint<f64> {
        let spec = GroupSpec::su(2);
        let classes =
            ConjugacyClassSpec::new(vec![torus_element(spec, 0.9)], GroupElement::identity(spec), 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let start = random_initial(SurfacePresentation::new(2, 1).unwrap(), &classes, &mut rng).unwrap();
        project_to_variety(&start, &classes, &ProjectionOptions::default()).unwrap().with_irreducibility(1e-9)
    }

    #[test]
    fn point_roundtrip_is_exact() {
        let p = point();
        let text = serde_json::to_string(&PointJson::from_point(&p)).unwrap();
        let back: PointJson = serde_json::from_str(&text).unwrap();
        let q = back.to_point(1e-10).unwrap();
        assert_eq!(q.tuple, p.tuple);
        assert_eq!(q.residual_norm, p.residual_norm);
        assert_eq!(q.irreducible, Some(true));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["group", "g", "m", "a", "b", "c", "target", "residual", "irreducible"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["group"]["family"], "SU");
    }

    #[test]
    fn bad_shapes_rejected() {
        let mut j = PointJson::from_point(&point());
        j.tuple.c.clear();
        assert!(j.to_point(1e-10).is_err());
        assert!(matrix_from_json(&vec![vec![[1.0, 0.0]], vec![]]).is_err());
        let mut j = PointJson::from_point(&point());
        j.tuple.a[0][0][0] = [3.0, 0.0];
        assert!(matches!(j.to_point(1e-10), Err(Error::InvariantViolated { .. })));
    }

    #[test]
    fn cohomology_and_form_layout() {
        let p = point();
        let h = cohomology_at(&p, 1e-9, 1e-6).unwrap();
        let v = serde_json::to_value(CohomologyJson::from_basis(&h)).unwrap();
        assert_eq!(v["Z1"].as_array().unwrap().len(), h.dim_z1());
        assert_eq!(v["H1"].as_array().unwrap().len(), h.dim_h1());
        let back = tangent_from_json(p.spec(), &CohomologyJson::from_basis(&h).h1[0], 1e-10).unwrap();
        assert!((back.coords() - h.h1.column(0)).norm() < 1e-14);
        let f = crate::form::form_on_cohomology(&p, &h).unwrap();
        let v = serde_json::to_value(FormMatrixJson::from_form(&f, p.spec())).unwrap();
        assert!(v["omega"][0][1].is_number());
        assert_eq!(v["basis"].as_array().unwrap().len(), h.dim_h1());
    }
}
