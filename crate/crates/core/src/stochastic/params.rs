//! Uncertain inputs and how they enter a run configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::environment::Scenario;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simulator::RunConfig;

/// Default half-width of the uniform ranges, relative to the mean.
pub const DEFAULT_HALF_WIDTH: f64 = 0.10;

/// Inputs that may be treated as random.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamId {
    #[serde(rename = "a_sigma")]
    ASigma,
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "g_c")]
    FractureEnergy,
    #[serde(rename = "a")]
    AgingRate,
    #[serde(rename = "theta_b")]
    ThetaBase,
    #[serde(rename = "theta_a")]
    ThetaAmplitude,
    #[serde(rename = "w_b")]
    WindBase,
    #[serde(rename = "w_a")]
    WindAmplitude,
    #[serde(rename = "i_b")]
    CurrentBase,
    #[serde(rename = "i_a")]
    CurrentAmplitude,
    #[serde(rename = "w_max")]
    WindMax,
    #[serde(rename = "i_r")]
    CurrentRate,
    #[serde(rename = "theta_r")]
    ThetaRate,
}

impl ParamId {
    pub const ALL: [ParamId; 13] = [
        ParamId::ASigma,
        ParamId::Gamma,
        ParamId::FractureEnergy,
        ParamId::AgingRate,
        ParamId::ThetaBase,
        ParamId::ThetaAmplitude,
        ParamId::WindBase,
        ParamId::WindAmplitude,
        ParamId::CurrentBase,
        ParamId::CurrentAmplitude,
        ParamId::WindMax,
        ParamId::CurrentRate,
        ParamId::ThetaRate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamId::ASigma => "a_sigma",
            ParamId::Gamma => "gamma",
            ParamId::FractureEnergy => "g_c",
            ParamId::AgingRate => "a",
            ParamId::ThetaBase => "theta_b",
            ParamId::ThetaAmplitude => "theta_a",
            ParamId::WindBase => "w_b",
            ParamId::WindAmplitude => "w_a",
            ParamId::CurrentBase => "i_b",
            ParamId::CurrentAmplitude => "i_a",
            ParamId::WindMax => "w_max",
            ParamId::CurrentRate => "i_r",
            ParamId::ThetaRate => "theta_r",
        }
    }

    /// Physical unit, as written in output headers.
    pub fn unit(self) -> &'static str {
        match self {
            ParamId::ASigma | ParamId::Gamma => "m",
            ParamId::FractureEnergy => "N/m",
            ParamId::AgingRate => "m^3/(kg*yr)",
            ParamId::ThetaBase | ParamId::ThetaAmplitude => "K",
            ParamId::WindBase | ParamId::WindAmplitude | ParamId::WindMax => "ft/s",
            ParamId::CurrentBase | ParamId::CurrentAmplitude => "A",
            ParamId::CurrentRate => "A/step",
            ParamId::ThetaRate => "K/step",
        }
    }

    /// Current value in `config`.
    pub fn get<T: Real>(self, config: &RunConfig<T>) -> Result<T> {
        let m = &config.material;
        let l = &config.loads;
        Ok(match (self, config.scenario) {
            (ParamId::ASigma, _) => config.mesh.a_sigma,
            (ParamId::Gamma, _) => m.damage_width,
            (ParamId::FractureEnergy, _) => m.fracture_energy,
            (ParamId::AgingRate, _) => m.aging_rate,
            (ParamId::ThetaBase, _) => l.theta_b,
            (ParamId::ThetaAmplitude, _) => l.theta_a,
            (ParamId::WindBase, _) => l.wind_b,
            (ParamId::WindAmplitude, _) => l.wind_a,
            (ParamId::CurrentBase, _) => l.current_b,
            (ParamId::CurrentAmplitude, _) => l.current_a,
            (ParamId::WindMax, Scenario::HighWinds { w_max }) => w_max,
            (ParamId::CurrentRate, Scenario::IncreasingDemand { current_rate }) => current_rate,
            (ParamId::ThetaRate, Scenario::IncreasingAirTemperature { theta_rate }) => theta_rate,
            (p, s) => return Err(mismatch(p, &s)),
        })
    }

    /// Writes `value` into `config`.
    pub fn set<T: Real>(self, config: &mut RunConfig<T>, value: T) -> Result<()> {
        let scenario = config.scenario;
        let m = &mut config.material;
        let l = &mut config.loads;
        match (self, &mut config.scenario) {
            (ParamId::ASigma, _) => config.mesh.a_sigma = value,
            (ParamId::Gamma, _) => m.damage_width = value,
            (ParamId::FractureEnergy, _) => m.fracture_energy = value,
            (ParamId::AgingRate, _) => m.aging_rate = value,
            (ParamId::ThetaBase, _) => l.theta_b = value,
            (ParamId::ThetaAmplitude, _) => l.theta_a = value,
            (ParamId::WindBase, _) => l.wind_b = value,
            (ParamId::WindAmplitude, _) => l.wind_a = value,
            (ParamId::CurrentBase, _) => l.current_b = value,
            (ParamId::CurrentAmplitude, _) => l.current_a = value,
            (ParamId::WindMax, Scenario::HighWinds { w_max }) => *w_max = value,
            (ParamId::CurrentRate, Scenario::IncreasingDemand { current_rate }) => *current_rate = value,
            (ParamId::ThetaRate, Scenario::IncreasingAirTemperature { theta_rate }) => *theta_rate = value,
            (p, _) => return Err(mismatch(p, &scenario)),
        }
        Ok(())
    }

    /// Named parameter sets.
    ///
    /// `xi_m` material, `xi_l` loading, `xi_1` the combined normal-operation
    /// set, and `xi_2`..`xi_4` that set plus the scenario parameter.
    pub fn preset(name: &str) -> Option<Vec<ParamId>> {
        use ParamId::*;
        let xi1 = [FractureEnergy, AgingRate, WindBase, CurrentBase];
        let with = |p: ParamId| xi1.iter().copied().chain([p]).collect();
        Some(match name {
            "xi_m" => vec![ASigma, Gamma, FractureEnergy, AgingRate],
            "xi_l" => vec![
                ThetaBase,
                ThetaAmplitude,
                WindBase,
                WindAmplitude,
                CurrentBase,
                CurrentAmplitude,
            ],
            "xi_1" => xi1.to_vec(),
            "xi_2" => with(WindMax),
            "xi_3" => with(CurrentRate),
            "xi_4" => with(ThetaRate),
            _ => return None,
        })
    }
}

fn mismatch<T: Real>(p: ParamId, s: &Scenario<T>) -> Error {
    Error::InvalidParameter(format!(
        "parameter {} does not apply to scenario {}",
        p.name(),
        s.id()
    ))
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown parameter '{s}'")))
    }
}

/// Uniform random input on `[mean (1 - f), mean (1 + f)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomParam<T> {
    pub id: ParamId,
    pub mean: T,
    pub half_width_fraction: T,
}

impl<T: Real> RandomParam<T> {
    pub fn new(id: ParamId, mean: T, half_width_fraction: T) -> Result<Self> {
        let p = Self {
            id,
            mean,
            half_width_fraction,
        };
        p.validate()?;
        Ok(p)
    }

    /// Centred on the value `config` already holds, with the default width.
    pub fn around(id: ParamId, config: &RunConfig<T>) -> Result<Self> {
        Self::new(id, id.get(config)?, T::lit(DEFAULT_HALF_WIDTH))
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.half_width_fraction;
        if !(f >= T::zero() && f < T::one()) || !self.mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{}: need finite mean and 0 <= half_width_fraction < 1, got mean {} f {}",
                self.id, self.mean, f
            )));
        }
        Ok(())
    }

    /// `(a, b)` with `a <= b`.
    pub fn bounds(&self) -> (T, T) {
        let half = self.mean * self.half_width_fraction;
        let (lo, hi) = (self.mean - half, self.mean + half);
        (lo.min(hi), lo.max(hi))
    }

    /// Maps `η ∈ [-1, 1]` to the physical range.
    pub fn map(&self, eta: T) -> T {
        let (a, b) = self.bounds();
        a + (b - a) * (eta + T::one()) / T::lit(2.0)
    }

    /// Constant density `1/(b - a)`.
    pub fn density(&self) -> T {
        let (a, b) = self.bounds();
        T::one() / (b - a)
    }

    /// Jacobian `(b - a)/2` of the affine map.
    pub fn jacobian(&self) -> T {
        let (a, b) = self.bounds();
        (b - a) / T::lit(2.0)
    }
}
