//! Staggered quasi-static time loop and failure detection.
//!
//! Every step solves, in order: tension from the sag chain, displacement,
//! strain-energy history, damage, forward-Euler fatigue, temperature and
//! voltage. One pass per step, no inner iterations.

use serde::{Deserialize, Serialize};

use crate::environment::{LoadParams, LoadSchedule, LoadState, SagChain, Scenario};
use crate::error::{Error, Result};
use crate::mesh::{area_of_diameter, Mesh1D};
use crate::physics::{
    build_damage, build_mechanical, build_thermal, build_voltage, clamp_damage, cooling_coefficient,
    step_fatigue, update_history, voltage_drop, FieldState, HeatExchange, MaterialParams,
};
use crate::scalar::{max_of, Real};
use crate::units::{m_to_in, STANDARD_GRAVITY};

/// Geometry of the span and the damage precursor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec<T> {
    /// Span length (m).
    pub length: T,
    pub n_elements: usize,
    /// Undamaged conductor diameter (m).
    pub diameter: T,
    /// Spread of the central area reduction (m); infinite for none.
    pub a_sigma: T,
}

impl<T: Real> MeshSpec<T> {
    pub fn reference() -> Self {
        Self {
            length: T::lit(200.0),
            n_elements: 1000,
            diameter: T::lit(0.04),
            a_sigma: T::lit(2.5),
        }
    }

    pub fn area0(&self) -> T {
        area_of_diameter(self.diameter)
    }

    pub fn build(&self) -> Result<Mesh1D<T>> {
        if !(self.diameter > T::zero()) {
            return Err(Error::InvalidMesh(format!(
                "diameter must be positive, got {}",
                self.diameter
            )));
        }
        Mesh1D::build(self.length, self.n_elements, self.area0(), self.a_sigma)
    }
}

/// Everything a deterministic run needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig<T> {
    pub mesh: MeshSpec<T>,
    pub material: MaterialParams<T>,
    pub loads: LoadParams<T>,
    pub scenario: Scenario<T>,
    pub n_steps: usize,
    /// Time step (yr).
    pub dt: T,
    /// Failure temperature (K).
    pub theta_lim: T,
    /// Field snapshot cadence in steps; 0 disables snapshots.
    pub snapshot_every: usize,
}

impl<T: Real> RunConfig<T> {
    /// 40-year reference run of the normal-operation scenario.
    pub fn reference() -> Self {
        Self {
            mesh: MeshSpec::reference(),
            material: MaterialParams::aluminium(),
            loads: LoadParams::reference(),
            scenario: Scenario::Normal,
            n_steps: 4000,
            dt: T::lit(0.01),
            theta_lim: T::lit(373.0),
            snapshot_every: 500,
        }
    }

    /// Small configuration for quick studies: 100 elements, 10 years, with
    /// base current lowered to 1350 A and aging ten times faster so the
    /// limit state is crossed after a few years of damage growth rather
    /// than by the first-year load peak.
    pub fn desk() -> Self {
        let mut c = Self::reference();
        c.mesh.n_elements = 100;
        c.n_steps = 1000;
        c.snapshot_every = 100;
        c.loads.current_b = T::lit(1350.0);
        c.material.aging_rate = T::lit(1e-9);
        c
    }

    /// [`RunConfig::desk`] with scenario `id` and its reference parameter.
    pub fn desk_scenario(id: u8) -> Result<Self> {
        let mut c = Self::desk();
        c.loads.theta_b = LoadParams::for_scenario(id).theta_b;
        c.scenario = Scenario::reference(id)?;
        Ok(c)
    }

    /// Reference configuration of scenario `id` with its reference
    /// scenario parameter.
    pub fn reference_scenario(id: u8) -> Result<Self> {
        Ok(Self {
            loads: LoadParams::for_scenario(id),
            scenario: Scenario::reference(id)?,
            ..Self::reference()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 1 {
            return Err(Error::InvalidParameter("n_steps must be at least 1".into()));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        self.material.validate()?;
        self.loads.validate()?;
        let hottest_air = self.loads.theta_b + self.loads.theta_a;
        if !(self.theta_lim > hottest_air) {
            return Err(Error::InvalidParameter(format!(
                "theta_lim = {} K must exceed the peak air temperature {} K",
                self.theta_lim, hottest_air
            )));
        }
        Ok(())
    }

    pub fn schedule(&self) -> LoadSchedule<T> {
        LoadSchedule::new(self.loads, self.scenario, self.dt)
    }

    /// Sag chain referenced to the air temperature at `t = 0`.
    pub fn sag_chain(&self) -> SagChain<T> {
        let unit_weight = self.material.density * T::lit(STANDARD_GRAVITY) * self.mesh.area0();
        SagChain::new(
            self.mesh.length,
            self.loads.pre_tension,
            unit_weight,
            self.material.thermal_expansion,
            self.schedule().at_step(0).theta_air,
            self.mesh.diameter,
        )
    }
}

/// Per-step quantities of interest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint<T> {
    pub step: usize,
    pub time: T,
    pub max_phi: T,
    pub max_fatigue: T,
    pub max_theta: T,
    pub delta_v: T,
    /// Horizontal tension applied this step (N).
    pub tension: T,
    pub loads: LoadState<T>,
    /// Largest damage correction removed by clamping this step.
    pub clamp_overshoot: T,
}

/// Nodal fields at a recorded step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot<T> {
    pub step: usize,
    pub fields: FieldState<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult<T> {
    /// Node coordinates (m).
    pub x: Vec<T>,
    /// Steps `1..=n` (truncated at failure, failing step included).
    pub series: Vec<SeriesPoint<T>>,
    pub snapshots: Vec<Snapshot<T>>,
    pub failed: bool,
    pub failure_step: Option<usize>,
    /// Time of the first limit-state crossing (yr).
    pub failure_time: Option<T>,
    /// Planned number of steps.
    pub n_steps: usize,
    pub theta_lim: T,
    pub max_clamp_overshoot: T,
}

impl<T: Real> RunResult<T> {
    pub fn max_theta(&self) -> Vec<T> {
        self.series.iter().map(|p| p.max_theta).collect()
    }

    /// Failure indicator over the full planned horizon.
    pub fn failure_indicator(&self) -> Vec<u8> {
        failure_indicator(&self.max_theta(), self.theta_lim, self.n_steps)
    }
}

/// `g = θ_lim - θ_max`; negative means failed.
#[inline]
pub fn limit_state<T: Real>(theta_max: T, theta_lim: T) -> T {
    theta_lim - theta_max
}

/// Absorbing failure indicator: 0 while `g ≥ 0`, 1 from the first crossing
/// to the end of a horizon of `n_total` steps.
pub fn failure_indicator<T: Real>(theta_max: &[T], theta_lim: T, n_total: usize) -> Vec<u8> {
    let n = n_total.max(theta_max.len());
    let first = theta_max
        .iter()
        .position(|&t| limit_state(t, theta_lim) < T::zero());
    match first {
        Some(k) => (0..n).map(|i| u8::from(i >= k)).collect(),
        None => vec![0; n],
    }
}

/// Step-by-step driver of one deterministic realization.
#[derive(Debug, Clone)]
pub struct Simulation<T> {
    config: RunConfig<T>,
    mesh: Mesh1D<T>,
    chain: SagChain<T>,
    schedule: LoadSchedule<T>,
    diameter_in: T,
    state: FieldState<T>,
    step: usize,
}

impl<T: Real> Simulation<T> {
    /// Virgin conductor at `θ_air(0)` with the voltage field of the initial
    /// current.
    pub fn new(config: RunConfig<T>) -> Result<Self> {
        config.validate()?;
        let mesh = config.mesh.build()?;
        let schedule = config.schedule();
        let chain = config.sag_chain();
        let initial = schedule.at_step(0);
        let mut state = FieldState::initial(mesh.n_nodes(), initial.theta_air);
        state.voltage = build_voltage(&mesh, &state.phi, &state.theta, initial.current, &config.material)?
            .solve()?;
        Ok(Self {
            diameter_in: m_to_in(config.mesh.diameter),
            config,
            mesh,
            chain,
            schedule,
            state,
            step: 0,
        })
    }

    pub fn mesh(&self) -> &Mesh1D<T> {
        &self.mesh
    }

    pub fn state(&self) -> &FieldState<T> {
        &self.state
    }

    pub fn config(&self) -> &RunConfig<T> {
        &self.config
    }

    /// Index of the last completed step (0 before the first).
    pub fn current_step(&self) -> usize {
        self.step
    }

    /// Advances one step.
    pub fn step(&mut self) -> Result<SeriesPoint<T>> {
        let k = self.step + 1;
        let time = self.schedule.time(k);
        self.advance(k).map_err(|e| e.at_step(k, time.to_f64_lossy()))
    }

    fn advance(&mut self, k: usize) -> Result<SeriesPoint<T>> {
        let p = &self.config.material;
        let mesh = &self.mesh;
        let loads = self.schedule.at_step(k);
        let s = &mut self.state;

        let theta_mean = s.theta.iter().copied().sum::<T>() / T::from_count(s.theta.len());
        let tension = self.chain.tension_at(theta_mean, loads.wind_speed)?;

        let u = build_mechanical(mesh, &s.phi, tension, p)?.solve()?;
        let history = update_history(mesh, &s.history, &u, p)?;
        let mut phi = build_damage(mesh, &history, &s.fatigue, p)?.solve()?;
        let overshoot = clamp_damage(&mut phi);
        let fatigue = step_fatigue(mesh, &s.fatigue, &u, &phi, &s.theta, p, self.config.dt)?;

        let cooling = cooling_coefficient(&HeatExchange {
            pressure: self.config.loads.pressure,
            wind_speed: loads.wind_speed,
            theta_air: loads.theta_air,
            diameter: self.diameter_in,
        });
        let theta = build_thermal(mesh, &phi, &s.voltage, &s.theta, cooling, loads.theta_air, p)?.solve()?;
        let voltage = build_voltage(mesh, &phi, &theta, loads.current, p)?.solve()?;

        s.u = u;
        s.history = history;
        s.phi = phi;
        s.fatigue = fatigue;
        s.theta = theta;
        s.voltage = voltage;
        s.time = loads.time;
        self.step = k;

        Ok(SeriesPoint {
            step: k,
            time: loads.time,
            max_phi: max_of(&s.phi),
            max_fatigue: max_of(&s.fatigue),
            max_theta: max_of(&s.theta),
            delta_v: voltage_drop(&s.voltage),
            tension,
            loads,
            clamp_overshoot: overshoot,
        })
    }

    fn snapshot(&self) -> Snapshot<T> {
        Snapshot {
            step: self.step,
            fields: self.state.clone(),
        }
    }
}

/// Runs the configured horizon, stopping at the first step whose peak
/// temperature exceeds `θ_lim`.
pub fn run<T: Real>(config: &RunConfig<T>) -> Result<RunResult<T>> {
    let mut sim = Simulation::new(*config)?;
    let every = config.snapshot_every;
    let mut series = Vec::with_capacity(config.n_steps);
    let mut snapshots = Vec::new();
    if every > 0 {
        snapshots.push(sim.snapshot());
    }
    let mut failure_step = None;
    let mut failure_time = None;
    let mut max_clamp = T::zero();

    for _ in 0..config.n_steps {
        let point = sim.step()?;
        max_clamp = max_clamp.max(point.clamp_overshoot);
        series.push(point);
        if every > 0 && point.step % every == 0 {
            snapshots.push(sim.snapshot());
        }
        if limit_state(point.max_theta, config.theta_lim) < T::zero() {
            failure_step = Some(point.step);
            failure_time = Some(point.time);
            break;
        }
    }
    if max_clamp > T::lit(0.05) {
        log::warn!(
            "damage clamp removed an overshoot of {:.3e}",
            max_clamp.to_f64_lossy()
        );
    }

    Ok(RunResult {
        x: sim.mesh.node_x.clone(),
        series,
        snapshots,
        failed: failure_step.is_some(),
        failure_step,
        failure_time,
        n_steps: config.n_steps,
        theta_lim: config.theta_lim,
        max_clamp_overshoot: max_clamp,
    })
}
