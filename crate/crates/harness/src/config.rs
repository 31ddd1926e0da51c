use serde::{Deserialize, Serialize};

/// Sizes, seeds and tolerances for every experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarnessConfig {
    /// Largest ambient dimension for randomized suites.
    pub n_max: usize,
    /// Finest refinement level for the integral theorems.
    pub levels: u32,
    pub seed: u64,
    pub identity_instances: usize,
    pub pairing_instances: usize,
    pub bound_instances: usize,
    pub magic_instances: usize,
    /// Chains in the enumerated norm-oracle family.
    pub norm_family: usize,
    pub hodge_levels: u32,
    pub cauchy_levels: u32,
    /// Levels with at most this many poles also run the identities in exact arithmetic.
    pub rational_pole_cap: usize,
    /// Relative tolerance for float identities.
    pub float_tol: f64,
    /// Above this many parent cells, refinement brackets use one representative parent.
    pub literal_parent_cap: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            n_max: 4,
            levels: 8,
            seed: 7,
            identity_instances: 1000,
            pairing_instances: 500,
            bound_instances: 1000,
            magic_instances: 1000,
            norm_family: 60,
            hodge_levels: 5,
            cauchy_levels: 8,
            rational_pole_cap: 4096,
            float_tol: 1e-12,
            literal_parent_cap: 1 << 15,
        }
    }
}

impl HarnessConfig {
    /// Float comparison `|a - b| <= tol * max(1, |a|, |b|)`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.float_tol * 1f64.max(a.abs()).max(b.abs())
    }

    pub fn validate(&self) -> Result<(), crate::HarnessError> {
        let bad = |m: &str| Err(crate::HarnessError::Config(m.into()));
        if self.n_max == 0 || self.n_max > 6 {
            return bad("n_max must be in 1..=6");
        }
        if self.levels > 12 {
            return bad("levels above 12 are out of desk scale");
        }
        if self.hodge_levels == 0 || self.hodge_levels > 7 {
            return bad("hodge_levels must be in 1..=7");
        }
        if !(self.float_tol > 0.0) {
            return bad("float_tol must be positive");
        }
        Ok(())
    }
}
