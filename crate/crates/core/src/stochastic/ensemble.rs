//! Parallel evaluation of a design and reduction to ensemble statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::design::{CollocationGrid, Design, MonteCarlo};
use super::params::RandomParam;
use super::stats::{moments_series, probability_of_failure, sobol_series};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::simulator::{run, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pcm,
    #[serde(alias = "mc")]
    MonteCarlo,
}

/// Uncertain inputs and how to sample them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticConfig<T> {
    pub params: Vec<RandomParam<T>>,
    pub method: Method,
    /// Collocation points per dimension.
    pub n_per_dim: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

impl<T: Real> StochasticConfig<T> {
    pub fn pcm(params: Vec<RandomParam<T>>, n_per_dim: usize) -> Self {
        Self {
            params,
            method: Method::Pcm,
            n_per_dim,
            mc_samples: 0,
            seed: 0,
        }
    }

    pub fn monte_carlo(params: Vec<RandomParam<T>>, samples: usize, seed: u64) -> Self {
        Self {
            params,
            method: Method::MonteCarlo,
            n_per_dim: 0,
            mc_samples: samples,
            seed,
        }
    }

    /// Number of solver runs the design requires.
    pub fn n_realizations(&self) -> usize {
        match self.method {
            Method::Pcm => self.n_per_dim.pow(self.params.len() as u32),
            Method::MonteCarlo => self.mc_samples,
        }
    }

    /// Runs the ensemble on `workers` threads (0 = all available cores).
    pub fn run(&self, base: &RunConfig<T>, workers: usize) -> Result<EnsembleResult<T>> {
        match self.method {
            Method::Pcm => {
                let grid = CollocationGrid::new(self.params.clone(), self.n_per_dim)?;
                run_collocation(base, &grid, workers)
            }
            Method::MonteCarlo => {
                let mc = MonteCarlo::new(self.params.clone(), self.mc_samples, self.seed)?;
                run_monte_carlo(base, &mc, workers)
            }
        }
    }
}

/// Mean and standard deviation of the temperature field at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldStats<T> {
    pub step: usize,
    pub time: T,
    pub mean_theta: Vec<T>,
    pub std_theta: Vec<T>,
}

/// Outcome of one realization, reduced to what the statistics need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization<T> {
    pub point: Vec<T>,
    pub weight: T,
    pub failure_step: Option<usize>,
    pub failure_time: Option<T>,
    pub theta_max: Vec<T>,
    /// Failure indicator over the full planned horizon.
    pub indicator: Vec<u8>,
    /// `(step, θ field)` at the snapshot cadence.
    pub theta_snapshots: Vec<(usize, Vec<T>)>,
    pub max_clamp_overshoot: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult<T> {
    pub params: Vec<RandomParam<T>>,
    pub method: Method,
    pub realizations: Vec<Realization<T>>,
    /// Node coordinates (m).
    pub x: Vec<T>,
    pub dt: T,
    pub n_steps: usize,
    /// Steps shared by every realization: the run stops at the earliest
    /// failure across the ensemble.
    pub horizon: usize,
    /// Times `1..=horizon` (yr).
    pub times: Vec<T>,
    pub mean_theta_max: Vec<T>,
    pub std_theta_max: Vec<T>,
    /// First-order indices `[dim][t]` on the truncated axis (collocation
    /// only); `None` where the variance vanishes.
    pub sobol: Option<Vec<Vec<Option<T>>>>,
    /// Probability of failure at times `1..=n_steps`.
    pub pf: Vec<T>,
    /// Temperature field statistics at snapshot steps within the horizon.
    pub fields: Vec<FieldStats<T>>,
}

impl<T: Real> EnsembleResult<T> {
    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }

    /// Earliest failure time in the ensemble, if any realization failed.
    pub fn min_failure_time(&self) -> Option<T> {
        self.realizations
            .iter()
            .filter_map(|r| r.failure_time)
            .reduce(|a, b| a.min(b))
    }

    pub fn horizon_time(&self) -> T {
        T::from_count(self.horizon) * self.dt
    }

    /// Times of the p_f curve (yr).
    pub fn pf_times(&self) -> Vec<T> {
        (1..=self.n_steps).map(|k| T::from_count(k) * self.dt).collect()
    }

    pub fn field_at(&self, step: usize) -> Option<&FieldStats<T>> {
        self.fields.iter().find(|f| f.step == step)
    }
}

pub fn run_collocation<T: Real>(
    base: &RunConfig<T>,
    grid: &CollocationGrid<T>,
    workers: usize,
) -> Result<EnsembleResult<T>> {
    let runs = evaluate(base, grid, workers)?;
    reduce(base, grid, runs, Some(grid))
}

pub fn run_monte_carlo<T: Real>(
    base: &RunConfig<T>,
    mc: &MonteCarlo<T>,
    workers: usize,
) -> Result<EnsembleResult<T>> {
    let runs = evaluate(base, mc, workers)?;
    reduce(base, mc, runs, None)
}

fn realize<T: Real, D: Design<T>>(base: &RunConfig<T>, design: &D, r: usize) -> Result<Realization<T>> {
    let point = design.point(r);
    let mut config = *base;
    for (d, &v) in design.dims().iter().zip(&point) {
        d.id.set(&mut config, v)?;
    }
    let res = run(&config).map_err(|e| Error::InRealization {
        index: r,
        point: describe(design.dims(), &point),
        source: Box::new(e),
    })?;
    Ok(Realization {
        indicator: res.failure_indicator(),
        theta_max: res.max_theta(),
        theta_snapshots: res
            .snapshots
            .into_iter()
            .map(|s| (s.step, s.fields.theta))
            .collect(),
        failure_step: res.failure_step,
        failure_time: res.failure_time,
        max_clamp_overshoot: res.max_clamp_overshoot,
        weight: design.weight(r),
        point,
    })
}

fn describe<T: Real>(dims: &[RandomParam<T>], point: &[T]) -> String {
    dims.iter()
        .zip(point)
        .map(|(d, v)| format!("{}={}", d.id, v))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Runs every realization; output order follows the design, independent of
/// scheduling.
fn evaluate<T: Real, D: Design<T>>(base: &RunConfig<T>, design: &D, workers: usize) -> Result<Vec<Realization<T>>> {
    base.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    log::info!("evaluating {} realizations on {} workers", design.len(), pool.current_num_threads());
    pool.install(|| {
        (0..design.len())
            .into_par_iter()
            .map(|r| realize(base, design, r))
            .collect()
    })
}

fn reduce<T: Real, D: Design<T>>(
    base: &RunConfig<T>,
    design: &D,
    runs: Vec<Realization<T>>,
    grid: Option<&CollocationGrid<T>>,
) -> Result<EnsembleResult<T>> {
    let horizon = runs.iter().map(|r| r.theta_max.len()).min().unwrap_or(0);
    let truncated: Vec<Vec<T>> = runs.iter().map(|r| r.theta_max[..horizon].to_vec()).collect();
    let (mean_theta_max, std_theta_max) = moments_series(design, &truncated)?;
    let sobol = grid.map(|g| sobol_series(g, &truncated)).transpose()?;
    let indicators: Vec<Vec<u8>> = runs
        .iter()
        .map(|r| {
            let mut h = r.indicator.clone();
            h.resize(base.n_steps, *h.last().unwrap_or(&0));
            h
        })
        .collect();
    let pf = probability_of_failure(design, &indicators)?;

    let mut fields = Vec::new();
    if let Some(first) = runs.first() {
        for (step, _) in first.theta_snapshots.iter().filter(|(s, _)| *s <= horizon) {
            // each realization's field plays the role of a series over nodes
            let nodal: Vec<Vec<T>> = runs
                .iter()
                .map(|r| {
                    r.theta_snapshots
                        .iter()
                        .find(|(s, _)| s == step)
                        .map(|(_, f)| f.clone())
                        .ok_or(Error::IncompleteEnsemble {
                            expected: runs.len(),
                            found: 0,
                        })
                })
                .collect::<Result<_>>()?;
            let (mean_theta, std_theta) = moments_series(design, &nodal)?;
            fields.push(FieldStats {
                step: *step,
                time: T::from_count(*step) * base.dt,
                mean_theta,
                std_theta,
            });
        }
    }

    let max_clamp = runs
        .iter()
        .map(|r| r.max_clamp_overshoot)
        .fold(T::zero(), |a, b| a.max(b));
    if max_clamp > T::lit(0.05) {
        log::warn!("ensemble damage clamp overshoot reached {max_clamp}");
    }

    Ok(EnsembleResult {
        params: design.dims().to_vec(),
        method: if grid.is_some() { Method::Pcm } else { Method::MonteCarlo },
        realizations: runs,
        x: base.mesh.build()?.node_x,
        dt: base.dt,
        n_steps: base.n_steps,
        horizon,
        times: (1..=horizon).map(|k| T::from_count(k) * base.dt).collect(),
        mean_theta_max,
        std_theta_max,
        sobol,
        pf,
        fields,
    })
}
