use serde::{Deserialize, Serialize};
use surface_domain::DomainConfig;

use crate::harmonic::{DelaunayUnduloid, EquatorGeodesic, HarmonicTorusData, SampledMap};
use crate::SpectralError;

/// Input file for the spectral-genus pipeline: either a named preset or
/// sphere-valued samples on a torus grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarmonicConfig {
    #[serde(default)]
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub preset: Option<HarmonicPresetConfig>,
    #[serde(default)]
    pub samples: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum HarmonicPresetConfig {
    EquatorGeodesic {
        #[serde(default = "default_grid")]
        grid: usize,
    },
    Delaunay {
        a: f64,
        #[serde(default = "default_grid")]
        grid: usize,
    },
}

fn default_grid() -> usize {
    32
}

impl HarmonicConfig {
    pub fn build(&self) -> Result<HarmonicTorusData, SpectralError> {
        if let Some(preset) = &self.preset {
            let map: Box<dyn crate::HarmonicMap> = match *preset {
                HarmonicPresetConfig::EquatorGeodesic { grid } => {
                    match &self.domain {
                        Some(cfg) => match cfg.build() {
                            Ok(surface_domain::Domain::Torus(t)) => {
                                Box::new(EquatorGeodesic::new(t))
                            }
                            _ => {
                                return Err(SpectralError::UnknownPreset(
                                    "equator-geodesic needs a torus domain".into(),
                                ))
                            }
                        },
                        None => Box::new(EquatorGeodesic::square_2pi(grid)),
                    }
                }
                HarmonicPresetConfig::Delaunay { a, grid } => {
                    Box::new(DelaunayUnduloid::new(a, grid))
                }
            };
            return Ok(HarmonicTorusData::new(map));
        }
        let Some(domain_cfg) = &self.domain else {
            return Err(SpectralError::UnknownPreset(
                "either a preset or domain + samples is required".into(),
            ));
        };
        let domain = match domain_cfg.build() {
            Ok(surface_domain::Domain::Torus(t)) => t,
            _ => {
                return Err(SpectralError::UnknownPreset(
                    "harmonic sample data needs a torus domain".into(),
                ))
            }
        };
        let samples: Vec<quatlinalg::Quaternion> = self
            .samples
            .iter()
            .map(|v| quatlinalg::Quaternion::from_imag(*v))
            .collect();
        let map = SampledMap::new(domain, samples)?;
        Ok(HarmonicTorusData::new(Box::new(map)))
    }
}
