use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use surface_domain::DomainConfig;

use crate::{derive_shape, derive_shape_analytic, ImmersionData, ImmersionError, Preset};

/// Immersion input file schema.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImmersionConfig {
    pub domain: DomainConfig,
    pub kind: ImmersionKind,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub params: HashMap<String, f64>,
    #[serde(default)]
    pub samples: Vec<[f64; 3]>,
    /// resolution knob for analytic presets (domain refinement level)
    #[serde(default = "default_resolution")]
    pub resolution: u32,
}

fn default_resolution() -> u32 {
    3
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub enum ImmersionKind {
    #[serde(rename = "analytic-preset")]
    AnalyticPreset,
    #[serde(rename = "samples")]
    Samples,
}

impl ImmersionConfig {
    pub fn build(&self) -> Result<ImmersionData, ImmersionError> {
        match self.kind {
            ImmersionKind::AnalyticPreset => {
                let name = self.preset.as_deref().unwrap_or_default();
                let preset = Preset::by_name(name, &self.params)?;
                derive_shape_analytic(&preset, self.resolution)
            }
            ImmersionKind::Samples => {
                let domain = self.domain.build()?;
                derive_shape(&self.samples, &domain)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build_preset_config() {
        let json = r#"{
            "domain": {"type": "sphere", "subdiv": 3},
            "kind": "analytic-preset",
            "preset": "sphere",
            "params": {"radius": 1.0},
            "resolution": 3
        }"#;
        let cfg: ImmersionConfig = serde_json::from_str(json).unwrap();
        let data = cfg.build().unwrap();
        assert!(data.conformality_residual < 1e-10);
    }

    #[test]
    fn unknown_preset_is_an_error() {
        let json = r#"{
            "domain": {"type": "sphere", "subdiv": 2},
            "kind": "analytic-preset",
            "preset": "saddle"
        }"#;
        let cfg: ImmersionConfig = serde_json::from_str(json).unwrap();
        assert!(matches!(cfg.build(), Err(ImmersionError::UnknownPreset(_))));
    }
}
