//! Time-dependent loading and the sag/tension chain.
//!
//! Air temperature, wind and current follow yearly sinusoids; the four
//! operating scenarios modify them. Scenario drifts are computed from the
//! step index, never accumulated, so any step can be evaluated on its own.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::units::{fps_to_mph, m_to_in, LB_PER_FT_IN_N_PER_M};

/// First and last step (within a year) of the seasonal high-wind window.
pub const HIGH_WIND_WINDOW: (usize, usize) = (25, 30);

/// Cyclic loading parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadParams<T> {
    /// Base air temperature (K).
    pub theta_b: T,
    /// Air temperature amplitude (K).
    pub theta_a: T,
    /// Base wind speed (ft/s).
    pub wind_b: T,
    /// Wind speed amplitude (ft/s).
    pub wind_a: T,
    /// Base current (A).
    pub current_b: T,
    /// Current amplitude (A).
    pub current_a: T,
    /// Horizontal pre-tension `H0` (N).
    pub pre_tension: T,
    /// Atmospheric pressure (atm).
    pub pressure: T,
}

impl<T: Real> LoadParams<T> {
    /// Normal operating conditions.
    pub fn reference() -> Self {
        Self {
            theta_b: T::lit(288.0),
            theta_a: T::lit(10.0),
            wind_b: T::lit(2.0),
            wind_a: T::lit(1.0),
            current_b: T::lit(1500.0),
            current_a: T::lit(100.0),
            pre_tension: T::lit(40e3),
            pressure: T::one(),
        }
    }

    /// Reference loads for a scenario; the high-wind scenario runs in a
    /// warmer climate (`θ_b = 293 K`).
    pub fn for_scenario(id: u8) -> Self {
        let mut p = Self::reference();
        if id == 2 {
            p.theta_b = T::lit(293.0);
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let non_negative = [
            ("theta_a", self.theta_a),
            ("wind_b", self.wind_b),
            ("wind_a", self.wind_a),
            ("current_a", self.current_a),
        ];
        for (name, v) in non_negative {
            if !(v >= T::zero()) {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        for (name, v) in [
            ("theta_b", self.theta_b),
            ("pre_tension", self.pre_tension),
            ("pressure", self.pressure),
        ] {
            if !(v > T::zero()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.current_b.is_finite() {
            return Err(Error::InvalidParameter("current_b must be finite".into()));
        }
        Ok(())
    }
}

impl<T: Real> Default for LoadParams<T> {
    fn default() -> Self {
        Self::reference()
    }
}

/// Operating scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario<T> {
    /// 1: unchanged yearly cycles.
    Normal,
    /// 2: wind held at `w_max` (ft/s) during a short window every year.
    HighWinds { w_max: T },
    /// 3: base current raised by `current_rate` (A) every step.
    IncreasingDemand { current_rate: T },
    /// 4: base air temperature raised by `theta_rate` (K) every step.
    IncreasingAirTemperature { theta_rate: T },
}

impl<T: Real> Scenario<T> {
    /// Builds a scenario from its numeric id and the extra parameter it uses
    /// (ignored for scenario 1).
    pub fn from_id(id: u8, extra: T) -> Result<Self> {
        match id {
            1 => Ok(Scenario::Normal),
            2 => Ok(Scenario::HighWinds { w_max: extra }),
            3 => Ok(Scenario::IncreasingDemand { current_rate: extra }),
            4 => Ok(Scenario::IncreasingAirTemperature { theta_rate: extra }),
            other => Err(Error::UnknownScenario(other)),
        }
    }

    /// Reference scenario parameter values.
    pub fn reference(id: u8) -> Result<Self> {
        let extra = match id {
            2 => 100.0,
            3 => 0.1,
            4 => 0.001,
            _ => 0.0,
        };
        Self::from_id(id, T::lit(extra))
    }

    pub fn id(&self) -> u8 {
        match self {
            Scenario::Normal => 1,
            Scenario::HighWinds { .. } => 2,
            Scenario::IncreasingDemand { .. } => 3,
            Scenario::IncreasingAirTemperature { .. } => 4,
        }
    }
}

/// Instantaneous environmental state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadState<T> {
    pub step: usize,
    /// Time (yr).
    pub time: T,
    /// Effective base air temperature after scenario drift (K).
    pub theta_base: T,
    /// Air temperature (K).
    pub theta_air: T,
    /// Wind speed (ft/s).
    pub wind_speed: T,
    /// Effective base current after scenario drift (A).
    pub current_base: T,
    /// Signed current (A); negative by convention.
    pub current: T,
}

fn evaluate<T: Real>(
    phase: T,
    time: T,
    step: usize,
    in_wind_window: bool,
    loads: &LoadParams<T>,
    scenario: &Scenario<T>,
) -> LoadState<T> {
    let two_pi = T::lit(2.0) * T::PI();
    let yearly = (two_pi * phase).sin();
    let half_yearly = (T::lit(2.0) * two_pi * phase).sin();
    let k = T::from_count(step);

    let mut theta_base = loads.theta_b;
    let mut current_base = loads.current_b;
    let mut wind = loads.wind_b + loads.wind_a * yearly;
    match *scenario {
        Scenario::Normal => {}
        Scenario::HighWinds { w_max } => {
            if in_wind_window {
                wind = w_max;
            }
        }
        Scenario::IncreasingDemand { current_rate } => current_base += current_rate * k,
        Scenario::IncreasingAirTemperature { theta_rate } => theta_base += theta_rate * k,
    }
    LoadState {
        step,
        time,
        theta_base,
        theta_air: theta_base + loads.theta_a * yearly,
        wind_speed: wind,
        current_base,
        current: -current_base - loads.current_a * half_yearly,
    }
}

fn in_window(step_in_year: usize) -> bool {
    (HIGH_WIND_WINDOW.0..=HIGH_WIND_WINDOW.1).contains(&step_in_year)
}

/// Loads at time `t` (yr) and step index `step`, for a schedule with
/// `steps_per_year` steps per year.
pub fn loads_at<T: Real>(
    t: T,
    step: usize,
    loads: &LoadParams<T>,
    scenario: &Scenario<T>,
    steps_per_year: usize,
) -> Result<LoadState<T>> {
    if !(t >= T::zero()) {
        return Err(Error::InvalidParameter(format!("time must be non-negative, got {t}")));
    }
    let spy = steps_per_year.max(1);
    Ok(evaluate(t - t.floor(), t, step, in_window(step % spy), loads, scenario))
}

/// Loads on the uniform time grid `t_k = k Δt`.
///
/// The yearly phase is taken from `k mod steps_per_year`, so cyclic loads
/// repeat bit-for-bit every year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSchedule<T> {
    pub loads: LoadParams<T>,
    pub scenario: Scenario<T>,
    pub dt: T,
}

impl<T: Real> LoadSchedule<T> {
    pub fn new(loads: LoadParams<T>, scenario: Scenario<T>, dt: T) -> Self {
        Self { loads, scenario, dt }
    }

    pub fn steps_per_year(&self) -> usize {
        (T::one() / self.dt).round().to_usize().unwrap_or(1).max(1)
    }

    pub fn time(&self, step: usize) -> T {
        T::from_count(step) * self.dt
    }

    pub fn at_step(&self, step: usize) -> LoadState<T> {
        let spy = self.steps_per_year();
        let in_year = step % spy;
        let phase = T::from_count(in_year) * self.dt;
        evaluate(phase, self.time(step), step, in_window(in_year), &self.loads, &self.scenario)
    }
}

/// Total weight per unit length (N/m) with the wind component
/// `W_w = P_w d / 12`, `P_w = 0.0025 v²` (v in mph, d in inches, lb units).
pub fn wind_weight<T: Real>(wind_mph: T, diameter_in: T, base_weight: T) -> T {
    let pressure = T::lit(0.0025) * wind_mph * wind_mph;
    let w_wind = pressure * diameter_in / T::lit(12.0) * T::lit(LB_PER_FT_IN_N_PER_M);
    base_weight.hypot(w_wind)
}

/// Parabolic sag relations mapping conductor temperature and wind to the
/// horizontal tension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SagChain<T> {
    /// Span `S_c` (m).
    pub span: T,
    /// Pre-tension `H0` (N) at the reference temperature.
    pub pre_tension: T,
    /// Bare weight per length `W_b` (N/m).
    pub unit_weight: T,
    /// Thermal expansion coefficient (1/K).
    pub thermal_expansion: T,
    /// Temperature at which the pre-tension holds (K).
    pub reference_temperature: T,
    /// Conductor diameter (m), for the wind load.
    pub diameter: T,
    /// Reference sag `D0 = W_b S² / (8 H0)` (m).
    pub initial_sag: T,
    /// Reference length `L0 = S + 8 D0² / (3 S)` (m).
    pub initial_length: T,
}

impl<T: Real> SagChain<T> {
    pub fn new(
        span: T,
        pre_tension: T,
        unit_weight: T,
        thermal_expansion: T,
        reference_temperature: T,
        diameter: T,
    ) -> Self {
        let initial_sag = unit_weight * span * span / (T::lit(8.0) * pre_tension);
        let initial_length = span + T::lit(8.0) * initial_sag * initial_sag / (T::lit(3.0) * span);
        Self {
            span,
            pre_tension,
            unit_weight,
            thermal_expansion,
            reference_temperature,
            diameter,
            initial_sag,
            initial_length,
        }
    }

    /// Lowest temperature change before the conductor would be shorter than
    /// the span.
    pub fn contraction_limit(&self) -> T {
        (self.span / self.initial_length - T::one()) / self.thermal_expansion
    }

    /// Sag at mean conductor temperature `theta_mean`.
    pub fn sag_at(&self, theta_mean: T) -> Result<T> {
        let delta = theta_mean - self.reference_temperature;
        let length = self.initial_length * (T::one() + self.thermal_expansion * delta);
        if !(length > self.span) {
            return Err(Error::SagChainBreakdown {
                delta_theta: delta.to_f64_lossy(),
                bound: self.contraction_limit().to_f64_lossy(),
            });
        }
        Ok((T::lit(3.0) * self.span * (length - self.span) / T::lit(8.0)).sqrt())
    }

    /// Horizontal tension `H = W S² / (8 D)` (N).
    pub fn tension_at(&self, theta_mean: T, wind_fps: T) -> Result<T> {
        let sag = self.sag_at(theta_mean)?;
        let w = wind_weight(fps_to_mph(wind_fps), m_to_in(self.diameter), self.unit_weight);
        Ok(w * self.span * self.span / (T::lit(8.0) * sag))
    }
}
