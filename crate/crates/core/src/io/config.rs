use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::InputStateSpec;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A signal sweep read from TOML:
///
/// ```toml
/// phi_min = 0.0
/// phi_max = 1.5707963267948966
/// phi_steps = 201           # optional
/// nbar_list = [2.0, 3.0]    # optional: one curve per mean photon number
/// nu = 1                    # optional
/// tail_epsilon = 1e-12      # optional
/// output_path = "out.csv"   # optional, stdout otherwise
/// format = "csv"            # optional: csv | json
///
/// [state]
/// family = "tmsv"
/// nbar = 2.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub state: InputStateSpec,
    pub phi_min: f64,
    pub phi_max: f64,
    #[serde(default = "SweepConfig::default_phi_steps")]
    pub phi_steps: usize,
    #[serde(default)]
    pub nbar_list: Option<Vec<f64>>,
    #[serde(default = "SweepConfig::default_nu")]
    pub nu: u32,
    #[serde(default = "SweepConfig::default_tail_epsilon")]
    pub tail_epsilon: f64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl SweepConfig {
    pub const DEFAULT_PHI_STEPS: usize = 201;
    pub const DEFAULT_TAIL_EPSILON: f64 = 1e-12;

    fn default_phi_steps() -> usize {
        Self::DEFAULT_PHI_STEPS
    }

    fn default_nu() -> u32 {
        1
    }

    fn default_tail_epsilon() -> f64 {
        Self::DEFAULT_TAIL_EPSILON
    }

    /// A config for `state` on `[phi_min, phi_max]` with every default applied.
    pub fn new(state: InputStateSpec, phi_min: f64, phi_max: f64) -> Self {
        Self {
            state,
            phi_min,
            phi_max,
            phi_steps: Self::DEFAULT_PHI_STEPS,
            nbar_list: None,
            nu: 1,
            tail_epsilon: Self::DEFAULT_TAIL_EPSILON,
            output_path: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.state.validate()?;
        if !(self.phi_min.is_finite() && self.phi_max.is_finite()) {
            return Err(Error::invalid("phi_min", "phi_min and phi_max must be finite"));
        }
        if !(self.phi_min < self.phi_max) {
            return Err(Error::invalid(
                "phi_max",
                format!("must exceed phi_min, got {} <= {}", self.phi_max, self.phi_min),
            ));
        }
        if self.phi_steps < 2 {
            return Err(Error::invalid(
                "phi_steps",
                format!("must be >= 2, got {}", self.phi_steps),
            ));
        }
        if self.nu == 0 {
            return Err(Error::invalid("nu", "must be >= 1"));
        }
        if !(self.tail_epsilon > 0.0 && self.tail_epsilon < 1.0) {
            return Err(Error::invalid(
                "tail_epsilon",
                format!("must lie in (0, 1), got {}", self.tail_epsilon),
            ));
        }
        if let Some(list) = &self.nbar_list {
            if list.is_empty() {
                return Err(Error::invalid("nbar_list", "must not be empty"));
            }
            if let Some(bad) = list.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                return Err(Error::invalid(
                    "nbar_list",
                    format!("entries must be finite and >= 0, got {bad}"),
                ));
            }
        }
        Ok(())
    }

    /// The state instances swept: one per `nbar_list` entry, else `state`.
    pub fn instances(&self) -> Result<Vec<InputStateSpec>> {
        match &self.nbar_list {
            None => Ok(vec![self.state]),
            Some(list) => list
                .iter()
                .map(|&nbar| self.state.with_mean_photon_number(nbar))
                .collect(),
        }
    }

    /// `phi_steps` equally spaced points, both ends included.
    pub fn phi_grid(&self) -> Vec<f64> {
        phi_grid(self.phi_min, self.phi_max, self.phi_steps)
    }
}

pub(crate) fn phi_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let span = max - min;
    let last = steps - 1;
    (0..steps)
        .map(|i| {
            if i == last {
                max
            } else {
                min + span * i as f64 / last as f64
            }
        })
        .collect()
}

pub fn parse_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    SweepConfig::from_toml_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "phi_min = 0.0\nphi_max = 1.0\n[state]\nfamily = \"tf\"\nn = 1\n";

    fn message(result: Result<SweepConfig>) -> String {
        result.unwrap_err().to_string()
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let config = SweepConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(config.state, InputStateSpec::TwinFock { n: 1 });
        assert_eq!(config, SweepConfig::new(InputStateSpec::TwinFock { n: 1 }, 0.0, 1.0));
        assert_eq!(config.nu, 1);
        assert_eq!(config.tail_epsilon, 1e-12);
        assert_eq!(config.format, OutputFormat::Csv);
        assert_eq!(config.phi_steps, 201);
    }

    #[test]
    fn every_field_parses() {
        let text = r#"
            phi_min = 0.1
            phi_max = 0.2
            phi_steps = 3
            nbar_list = [1.0, 2.0]
            nu = 4
            tail_epsilon = 1e-9
            output_path = "out.json"
            format = "json"
            [state]
            family = "ec"
            alpha = 1.5
        "#;
        let config = SweepConfig::from_toml_str(text).unwrap();
        assert_eq!(config.format, OutputFormat::Json);
        assert_eq!(config.output_path.as_deref(), Some(Path::new("out.json")));
        assert_eq!(config.instances().unwrap().len(), 2);
        assert_eq!(config.phi_grid(), vec![0.1, 0.1 + 0.1 * 0.5, 0.2]);
    }

    #[test]
    fn errors_name_the_field() {
        let bad_eps = format!("tail_epsilon = 2.0\n{MINIMAL}");
        assert!(message(SweepConfig::from_toml_str(&bad_eps)).contains("tail_epsilon"));

        let empty = format!("nbar_list = []\n{MINIMAL}");
        assert!(message(SweepConfig::from_toml_str(&empty)).contains("nbar_list"));

        let unknown = "phi_min = 0.0\nphi_max = 1.0\n[state]\nfamily = \"squeezed\"\n";
        assert!(message(SweepConfig::from_toml_str(unknown)).contains("squeezed"));

        let missing = "phi_max = 1.0\n[state]\nfamily = \"tf\"\nn = 1\n";
        assert!(message(SweepConfig::from_toml_str(missing)).contains("phi_min"));

        let typed = "phi_min = \"zero\"\nphi_max = 1.0\n[state]\nfamily = \"tf\"\nn = 1\n";
        assert!(message(SweepConfig::from_toml_str(typed)).contains("phi_min"));

        let reversed = "phi_min = 1.0\nphi_max = 0.0\n[state]\nfamily = \"tf\"\nn = 1\n";
        assert!(message(SweepConfig::from_toml_str(reversed)).contains("phi_max"));

        let steps = format!("phi_steps = 1\n{MINIMAL}");
        assert!(message(SweepConfig::from_toml_str(&steps)).contains("phi_steps"));

        let extra = format!("colour = 1\n{MINIMAL}");
        assert!(message(SweepConfig::from_toml_str(&extra)).contains("colour"));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = parse_config(Path::new("/nonexistent/sweep.toml")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
