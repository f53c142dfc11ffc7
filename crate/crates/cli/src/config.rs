//! Run configuration: a JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Angles,
    Lemmas,
    Sector,
    Estimate,
    Accretivity,
    Gradient,
    Semigroup,
    Resolvent,
    All,
}

impl Suite {
    pub const ORDERED: [Suite; 8] = [
        Suite::Angles,
        Suite::Lemmas,
        Suite::Sector,
        Suite::Estimate,
        Suite::Accretivity,
        Suite::Gradient,
        Suite::Semigroup,
        Suite::Resolvent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Angles => "angles",
            Suite::Lemmas => "lemmas",
            Suite::Sector => "sector",
            Suite::Estimate => "estimate",
            Suite::Accretivity => "accretivity",
            Suite::Gradient => "gradient",
            Suite::Semigroup => "semigroup",
            Suite::Resolvent => "resolvent",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RegimeChoice {
    /// From the field's `R_a = 0` claim (`ra_zero` when no field is involved).
    #[default]
    Auto,
    RaZero,
    RaNonzero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Acceptance tolerances for each check family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub angles: f64,
    pub lemmas: f64,
    pub sector: f64,
    pub rounding: f64,
    pub ibp: f64,
    pub integrand: f64,
    pub contraction: f64,
    pub exact_norm: f64,
    pub resolvent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            angles: 1e-12,
            lemmas: 1e-10,
            sector: 1e-10,
            rounding: 1e-12,
            ibp: 1e-10,
            integrand: 1e-10,
            contraction: 1e-8,
            exact_norm: 1e-12,
            resolvent: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub suite: Option<Suite>,
    /// `name(args)`; all library fields when absent.
    pub field: Option<String>,
    pub p: Option<Vec<f64>>,
    pub theta: Option<f64>,
    pub regime: RegimeChoice,
    /// Points per axis for quadrature suites and grid size for the semigroup
    /// suites; per-dimension defaults when absent.
    pub n: Option<usize>,
    /// Random test functions (or vectors) per check.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Lower-bound constant for the gradient inequality; the Oleinik
    /// constant when absent.
    pub gradient_m: Option<f64>,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(ps) = &self.p {
            if ps.is_empty() {
                return Err(CliError::Usage("p list is empty".into()));
            }
            if let Some(p) = ps.iter().find(|p| !(p.is_finite() && **p > 1.0)) {
                return Err(CliError::Usage(format!("p = {p} is outside (1, ∞)")));
            }
        }
        if let Some(t) = self.theta {
            if !(0.0..std::f64::consts::FRAC_PI_2).contains(&t) {
                return Err(CliError::Usage(format!("theta = {t} is outside [0, π/2)")));
            }
        }
        if let Some(n) = self.n {
            if n < 8 || n % 2 != 0 {
                return Err(CliError::Usage(format!("n = {n} must be even and at least 8")));
            }
        }
        if self.samples == Some(0) {
            return Err(CliError::Usage("samples must be at least 1".into()));
        }
        if let Some(m) = self.gradient_m {
            if !(m.is_finite() && m >= 0.0) {
                return Err(CliError::Usage(format!("gradient_m = {m} must be finite and nonnegative")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(RunConfig::from_json(r#"{"sead": 3}"#), Err(CliError::Config(_))));
        assert!(matches!(RunConfig::from_json(r#"{"tolerances": {"lemma": 1}}"#), Err(CliError::Config(_))));
    }

    #[test]
    fn full_config_parses() {
        let c = RunConfig::from_json(
            r#"{"suite": "estimate", "field": "cosine_modulated(1)", "p": [2, 3], "theta": 0.1,
                "regime": "ra_zero", "n": 16, "samples": 3, "seed": 9, "format": "json",
                "tolerances": {"resolvent": 1e-5}}"#,
        )
        .unwrap();
        assert_eq!(c.suite, Some(Suite::Estimate));
        assert_eq!(c.p, Some(vec![2.0, 3.0]));
        assert_eq!(c.tolerances.resolvent, 1e-5);
        assert_eq!(c.tolerances.lemmas, 1e-10);
        assert_eq!(c.format, Format::Json);
        c.validate().unwrap();
    }

    #[test]
    fn validation() {
        let bad = RunConfig { p: Some(vec![1.0]), ..Default::default() };
        assert!(matches!(bad.validate(), Err(CliError::Usage(_))));
        let bad = RunConfig { n: Some(9), ..Default::default() };
        assert!(matches!(bad.validate(), Err(CliError::Usage(_))));
    }
}
