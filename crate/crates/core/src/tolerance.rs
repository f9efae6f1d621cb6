use serde::{Deserialize, Serialize};

/// Numerical tolerances shared across the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Group invariants: `|det - 1|`, `||M M^* - I||`.
    pub tol_group: f64,
    /// Algebra invariants: `|trace|`, `||X + X^*||`.
    pub tol_alg: f64,
    /// Largest relator residual `||log(Pi z0^{-1})||` accepted as a solved point.
    pub tol_flat: f64,
    /// Smallest relative singular-value gap accepted when splitting kernel and range.
    pub gap_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol_group: 1e-10, tol_alg: 1e-10, tol_flat: 1e-9, gap_tol: 1e-6 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("tol_group", self.tol_group),
            ("tol_alg", self.tol_alg),
            ("tol_flat", self.tol_flat),
            ("gap_tol", self.gap_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }
}
