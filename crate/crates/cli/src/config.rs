//! TOML configuration with a strict schema.
//!
//! Every block and every key is optional. Omitted values take the
//! reference aluminium-conductor parameters; unknown keys are errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tline_core::environment::{LoadParams, Scenario};
use tline_core::physics::MaterialParams;
use tline_core::simulator::{MeshSpec, RunConfig};
use tline_core::stochastic::{Method, ParamId, RandomParam, StochasticConfig, DEFAULT_HALF_WIDTH};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshBlock {
    /// Span length (m).
    pub length: f64,
    pub n_elements: usize,
    /// Conductor diameter (m).
    pub diameter: f64,
    /// Spread of the central area reduction (m).
    pub a_sigma: f64,
}

impl Default for MeshBlock {
    fn default() -> Self {
        let m = MeshSpec::<f64>::reference();
        Self {
            length: m.length,
            n_elements: m.n_elements,
            diameter: m.diameter,
            a_sigma: m.a_sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialBlock {
    /// Young's modulus Y (Pa).
    pub youngs_modulus: f64,
    /// Damage width γ (m).
    pub gamma: f64,
    /// Fracture energy g_c (N/m).
    pub g_c: f64,
    /// Density ρ (kg/m³).
    pub density: f64,
    /// Aging rate a (m³/(kg·yr)).
    pub aging_rate: f64,
    /// Thermal conductivity κ (W/(m·K)).
    pub thermal_conductivity: f64,
    /// Electrical conductivity σ_E at θ0 (S/m).
    pub electrical_conductivity: f64,
    /// Temperature coefficient of resistivity α (1/K).
    pub resistivity_coefficient: f64,
    /// Linear thermal expansion α_L (1/K).
    pub thermal_expansion: f64,
    /// Reference temperature θ0 (K).
    pub reference_temperature: f64,
}

impl Default for MaterialBlock {
    fn default() -> Self {
        Self::from(MaterialParams::<f64>::aluminium())
    }
}

impl From<MaterialParams<f64>> for MaterialBlock {
    fn from(m: MaterialParams<f64>) -> Self {
        Self {
            youngs_modulus: m.youngs_modulus,
            gamma: m.damage_width,
            g_c: m.fracture_energy,
            density: m.density,
            aging_rate: m.aging_rate,
            thermal_conductivity: m.thermal_conductivity,
            electrical_conductivity: m.electrical_conductivity,
            resistivity_coefficient: m.resistivity_coefficient,
            thermal_expansion: m.thermal_expansion,
            reference_temperature: m.reference_temperature,
        }
    }
}

impl From<&MaterialBlock> for MaterialParams<f64> {
    fn from(b: &MaterialBlock) -> Self {
        Self {
            youngs_modulus: b.youngs_modulus,
            damage_width: b.gamma,
            fracture_energy: b.g_c,
            density: b.density,
            aging_rate: b.aging_rate,
            thermal_conductivity: b.thermal_conductivity,
            electrical_conductivity: b.electrical_conductivity,
            resistivity_coefficient: b.resistivity_coefficient,
            thermal_expansion: b.thermal_expansion,
            reference_temperature: b.reference_temperature,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadBlock {
    /// Base air temperature (K). Defaults to the scenario's value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_b: Option<f64>,
    pub theta_a: f64,
    /// Wind (ft/s).
    pub w_b: f64,
    pub w_a: f64,
    /// Current (A).
    pub i_b: f64,
    pub i_a: f64,
    /// Pre-tension H0 (N).
    pub pre_tension: f64,
    /// Air pressure (atm).
    pub pressure: f64,
}

impl Default for LoadBlock {
    fn default() -> Self {
        let l = LoadParams::<f64>::reference();
        Self {
            theta_b: None,
            theta_a: l.theta_a,
            w_b: l.wind_b,
            w_a: l.wind_a,
            i_b: l.current_b,
            i_a: l.current_a,
            pre_tension: l.pre_tension,
            pressure: l.pressure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioBlock {
    /// 1 normal, 2 high winds, 3 increasing demand, 4 increasing air
    /// temperature.
    pub id: u8,
    /// Seasonal peak wind (ft/s), scenario 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_max: Option<f64>,
    /// Current growth (A/step), scenario 3.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_r: Option<f64>,
    /// Air temperature growth (K/step), scenario 4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_r: Option<f64>,
}

impl Default for ScenarioBlock {
    fn default() -> Self {
        Self {
            id: 1,
            w_max: None,
            i_r: None,
            theta_r: None,
        }
    }
}

impl ScenarioBlock {
    pub fn scenario(&self) -> Result<Scenario<f64>, CliError> {
        let reference = Scenario::<f64>::reference(self.id)?;
        let (extra, other) = match self.id {
            2 => (self.w_max, self.i_r.or(self.theta_r)),
            3 => (self.i_r, self.w_max.or(self.theta_r)),
            4 => (self.theta_r, self.w_max.or(self.i_r)),
            _ => (None, self.w_max.or(self.i_r).or(self.theta_r)),
        };
        if other.is_some() {
            return Err(CliError::Validation(format!(
                "scenario {} does not take that extra parameter (w_max: 2, i_r: 3, theta_r: 4)",
                self.id
            )));
        }
        Ok(match extra {
            Some(v) => Scenario::from_id(self.id, v)?,
            None => reference,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunBlock {
    pub n_steps: usize,
    /// Time step (yr).
    pub dt: f64,
    /// Failure temperature (K).
    pub theta_lim: f64,
}

impl Default for RunBlock {
    fn default() -> Self {
        let r = RunConfig::<f64>::reference();
        Self {
            n_steps: r.n_steps,
            dt: r.dt,
            theta_lim: r.theta_lim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StochasticBlock {
    /// Named set (`xi_m`, `xi_l`, `xi_1`..`xi_4`), used when `params` is
    /// empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Parameter names, e.g. `["g_c", "a", "w_b", "i_b"]`.
    pub params: Vec<String>,
    /// Relative half-width of every uniform range.
    pub half_width: f64,
    pub n_per_dim: usize,
    pub method: Method,
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for StochasticBlock {
    fn default() -> Self {
        Self {
            preset: None,
            params: Vec::new(),
            half_width: DEFAULT_HALF_WIDTH,
            n_per_dim: 5,
            method: Method::Pcm,
            mc_samples: 1000,
            seed: 0,
        }
    }
}

impl StochasticBlock {
    pub fn param_ids(&self) -> Result<Vec<ParamId>, CliError> {
        let ids = if self.params.is_empty() {
            let name = self.preset.as_deref().ok_or_else(|| {
                CliError::Validation("stochastic block needs `params` or `preset`".into())
            })?;
            ParamId::preset(name).ok_or_else(|| {
                CliError::Validation(format!(
                    "unknown preset '{name}' (expected xi_m, xi_l, xi_1, xi_2, xi_3, xi_4)"
                ))
            })?
        } else {
            if self.preset.is_some() {
                return Err(CliError::Validation(
                    "give either `params` or `preset`, not both".into(),
                ));
            }
            self.params
                .iter()
                .map(|s| s.parse::<ParamId>())
                .collect::<Result<_, _>>()?
        };
        Ok(ids)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    pub directory: PathBuf,
    /// Field snapshot cadence (steps); 0 disables snapshots.
    pub snapshot_every: usize,
    /// Extra formats besides CSV; only `"json"` is recognised.
    pub formats: Vec<String>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            snapshot_every: RunConfig::<f64>::reference().snapshot_every,
            formats: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareBlock {
    /// Years at which fields are compared; empty means every common
    /// snapshot.
    pub years: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub mesh: MeshBlock,
    pub material: MaterialBlock,
    pub load: LoadBlock,
    pub scenario: ScenarioBlock,
    pub run: RunBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stochastic: Option<StochasticBlock>,
    pub output: OutputBlock,
    pub compare: CompareBlock,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Reads a file, returning the parsed config and its raw bytes.
    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| CliError::Parse(format!("{}: not UTF-8: {e}", path.display())))?;
        let cfg = Self::parse(text).map_err(|e| match e {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            e => e,
        })?;
        Ok((cfg, bytes))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Validation(format!("cannot serialize config: {e}")))
    }

    /// Deterministic run configuration, validated.
    pub fn run_config(&self) -> Result<RunConfig<f64>, CliError> {
        let scenario = self.scenario.scenario()?;
        let preset = LoadParams::<f64>::for_scenario(self.scenario.id);
        let l = &self.load;
        let cfg = RunConfig {
            mesh: MeshSpec {
                length: self.mesh.length,
                n_elements: self.mesh.n_elements,
                diameter: self.mesh.diameter,
                a_sigma: self.mesh.a_sigma,
            },
            material: MaterialParams::from(&self.material),
            loads: LoadParams {
                theta_b: l.theta_b.unwrap_or(preset.theta_b),
                theta_a: l.theta_a,
                wind_b: l.w_b,
                wind_a: l.w_a,
                current_b: l.i_b,
                current_a: l.i_a,
                pre_tension: l.pre_tension,
                pressure: l.pressure,
            },
            scenario,
            n_steps: self.run.n_steps,
            dt: self.run.dt,
            theta_lim: self.run.theta_lim,
            snapshot_every: self.output.snapshot_every,
        };
        cfg.validate()?;
        cfg.mesh.build()?;
        Ok(cfg)
    }

    /// Copy with every scenario-dependent default written out.
    pub fn resolved(&self) -> Result<Self, CliError> {
        let rc = self.run_config()?;
        let mut c = self.clone();
        c.load.theta_b = Some(rc.loads.theta_b);
        match rc.scenario {
            Scenario::Normal => {}
            Scenario::HighWinds { w_max } => c.scenario.w_max = Some(w_max),
            Scenario::IncreasingDemand { current_rate } => c.scenario.i_r = Some(current_rate),
            Scenario::IncreasingAirTemperature { theta_rate } => c.scenario.theta_r = Some(theta_rate),
        }
        Ok(c)
    }

    /// Ensemble specification, centred on the deterministic configuration.
    pub fn stochastic_config(&self, run: &RunConfig<f64>) -> Result<StochasticConfig<f64>, CliError> {
        let block = self
            .stochastic
            .as_ref()
            .ok_or_else(|| CliError::Validation("config has no [stochastic] block".into()))?;
        let ids = block.param_ids()?;
        if ids.is_empty() {
            return Err(CliError::Validation("no random parameters given".into()));
        }
        if ids.len() > tline_core::stochastic::MAX_DIMS {
            return Err(CliError::Validation(format!(
                "{} random parameters requested; full tensor grids are limited to {} dimensions. \
                 Drop the least influential parameters or use method = \"monte_carlo\".",
                ids.len(),
                tline_core::stochastic::MAX_DIMS
            )));
        }
        let params = ids
            .into_iter()
            .map(|id| RandomParam::new(id, id.get(run)?, block.half_width))
            .collect::<Result<Vec<_>, _>>()?;
        let sc = match block.method {
            Method::Pcm => {
                if block.n_per_dim == 0 {
                    return Err(CliError::Validation("n_per_dim must be at least 1".into()));
                }
                StochasticConfig::pcm(params, block.n_per_dim)
            }
            Method::MonteCarlo => {
                if block.mc_samples == 0 {
                    return Err(CliError::Validation("mc_samples must be at least 1".into()));
                }
                StochasticConfig::monte_carlo(params, block.mc_samples, block.seed)
            }
        };
        Ok(sc)
    }

    pub fn wants_json(&self) -> bool {
        self.output.formats.iter().any(|f| f == "json")
    }

    pub fn validate_formats(&self) -> Result<(), CliError> {
        match self.output.formats.iter().find(|f| !matches!(f.as_str(), "csv" | "json")) {
            Some(f) => Err(CliError::Validation(format!(
                "unknown output format '{f}' (expected csv or json)"
            ))),
            None => Ok(()),
        }
    }
}
