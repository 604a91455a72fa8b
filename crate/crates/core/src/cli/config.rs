use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::fluxes::{FluxParams, SurfaceFlux};
use crate::limiter::LimiterSettings;
use crate::sbp::{NodeFamily, MAX_DEGREE};
use crate::scenarios::{scenario, Scenario, ScenarioKind};
use crate::semidisc::SubcellConfig;
use crate::time::{StepControl, StepMode};

pub const OUTPUT_DIR_ENV: &str = "SBP_SWE_OUTPUT_DIR";

/// Flat JSON run configuration. Every field but `scenario` overrides a
/// scenario default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub n_elements: Option<usize>,
    pub degree: Option<usize>,
    pub family: Option<NodeFamily>,
    pub flux: Option<String>,
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    /// Parameters of the surface flux; default to the volume parameters.
    pub surface_a1: Option<f64>,
    pub surface_a2: Option<f64>,
    pub m4: Option<f64>,
    pub k9: Option<f64>,
    pub k10: Option<f64>,
    pub k11: Option<f64>,
    pub l10: Option<f64>,
    pub limiter: Option<bool>,
    pub limit_discharge: Option<bool>,
    pub subcells: Option<bool>,
    pub subcell_threshold: Option<f64>,
    pub include_neighbors: Option<bool>,
    pub cfl: Option<f64>,
    pub steps: Option<usize>,
    pub adaptive: Option<bool>,
    pub dt_max: Option<f64>,
    pub t_final: Option<f64>,
    pub m: Option<f64>,
    pub energy: Option<f64>,
    pub output_dir: Option<String>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn for_scenario(kind: ScenarioKind) -> Self {
        Self {
            scenario: kind.name().to_string(),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Output directory: the environment override, else `output_dir`, else `output`.
    pub fn output_root(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => PathBuf::from(self.output_dir.as_deref().unwrap_or("output")),
        }
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let kind: ScenarioKind = self.scenario.parse()?;
        let m = self.m.unwrap_or(1.0);
        let energy = self.energy.unwrap_or(25.0);
        let scenario = scenario(kind, m, energy)?;
        let d = scenario.defaults.clone();
        let d = &d;

        let degree = self.degree.unwrap_or(d.degree);
        if degree > MAX_DEGREE {
            return Err(CliError::Config(format!(
                "degree {degree} exceeds the maximum {MAX_DEGREE}"
            )));
        }
        let n_elements = self.n_elements.unwrap_or(d.n_elements);
        if n_elements == 0 {
            return Err(CliError::Config("n_elements must be positive".into()));
        }
        let a1 = self.a1.unwrap_or(d.a1);
        let a2 = self.a2.unwrap_or(d.a2);
        let vol_params = FluxParams::new(a1, a2).with_free(
            self.m4.unwrap_or(0.0),
            self.k9.unwrap_or(0.0),
            self.k10.unwrap_or(0.0),
            self.k11.unwrap_or(0.0),
            self.l10.unwrap_or(0.0),
        );
        vol_params.validate()?;
        let flux_name = self.flux.clone().unwrap_or_else(|| d.flux.clone());
        let surface_flux = SurfaceFlux::parse(
            &flux_name,
            self.surface_a1.unwrap_or(a1),
            self.surface_a2.unwrap_or(a2),
        )?;

        let subcells = match (self.subcells, self.subcell_threshold.or(d.subcell_threshold)) {
            (Some(false), _) | (None, None) => SubcellConfig::disabled(),
            (_, Some(threshold)) => {
                if !(threshold >= 0.0) {
                    return Err(CliError::Config(format!(
                        "subcell threshold must be non-negative, got {threshold}"
                    )));
                }
                SubcellConfig::new(threshold, self.include_neighbors.unwrap_or(d.include_neighbors))
            }
            (Some(true), None) => {
                return Err(CliError::Config("subcells enabled without a threshold".into()))
            }
        };

        let t_final = self.t_final.unwrap_or(scenario.t_final);
        let cfl = self.cfl.unwrap_or(d.cfl);
        let steps = match (self.adaptive, self.steps) {
            (Some(true), _) => None,
            (_, Some(n)) => Some(n),
            (_, None) => d.steps,
        };
        let control = StepControl {
            t_final,
            mode: match steps {
                Some(steps) => StepMode::Fixed { steps },
                None => StepMode::Adaptive {
                    cfl,
                    dt_max: self.dt_max.unwrap_or(f64::INFINITY),
                },
            },
        };
        control.validate()?;

        Ok(Resolved {
            scenario,
            settings: ResolvedSettings {
                scenario: kind,
                n_elements,
                degree,
                family: self.family.unwrap_or(d.family),
                flux: surface_flux.name().to_string(),
                surface_flux,
                vol_params,
                limiter: LimiterSettings {
                    enabled: self.limiter.unwrap_or(d.limiter),
                    limit_discharge: self.limit_discharge.unwrap_or(true),
                },
                subcell_threshold: subcells.threshold,
                include_neighbors: subcells.include_neighbors,
                control,
                m: (kind == ScenarioKind::MovingWater).then_some(m),
                energy: (kind == ScenarioKind::MovingWater).then_some(energy),
                seed: self.seed.unwrap_or(0),
            },
        })
    }
}

/// Fully resolved settings, echoed in `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedSettings {
    pub scenario: ScenarioKind,
    pub n_elements: usize,
    pub degree: usize,
    pub family: NodeFamily,
    pub flux: String,
    #[serde(skip)]
    pub surface_flux: SurfaceFlux,
    pub vol_params: FluxParams,
    pub limiter: LimiterSettings,
    pub subcell_threshold: Option<f64>,
    pub include_neighbors: bool,
    pub control: StepControl,
    pub m: Option<f64>,
    pub energy: Option<f64>,
    pub seed: u64,
}

impl ResolvedSettings {
    pub fn subcells(&self) -> SubcellConfig {
        SubcellConfig {
            threshold: self.subcell_threshold,
            include_neighbors: self.include_neighbors,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub settings: ResolvedSettings,
}
