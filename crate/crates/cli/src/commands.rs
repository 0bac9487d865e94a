//! The `run`, `uq` and `compare` commands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use tline_core::simulator::{run, RunResult};
use tline_core::stochastic::{relative_error, EnsembleResult, Method};

use crate::config::Config;
use crate::io::{self, col, num, write_csv, FieldTable, Manifest};
use crate::CliError;

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    /// Worker threads for ensembles; 0 or `None` uses every core.
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub out_dir: PathBuf,
    /// A deterministic run crossed the temperature limit.
    pub failed: bool,
}

struct Loaded {
    config: Config,
    sha: String,
    path: PathBuf,
    out_dir: PathBuf,
}

fn load(path: &Path, opts: &Options) -> Result<Loaded, CliError> {
    let (config, bytes) = Config::load(path)?;
    let mut config = config.resolved()?;
    config.validate_formats()?;
    if let Some(out) = &opts.out {
        config.output.directory = out.clone();
    }
    if let (Some(seed), Some(st)) = (opts.seed, config.stochastic.as_mut()) {
        st.seed = seed;
    }
    Ok(Loaded {
        out_dir: config.output.directory.clone(),
        sha: io::sha256_hex(&bytes),
        path: path.to_path_buf(),
        config,
    })
}

fn manifest(l: &Loaded, command: &str, started: Instant, workers: Option<usize>, summary: serde_json::Value) -> Manifest {
    Manifest {
        command: command.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        core_version: tline_core::VERSION.into(),
        config_path: l.path.clone(),
        config_sha256: l.sha.clone(),
        wall_time_s: started.elapsed().as_secs_f64(),
        workers,
        config: l.config.clone(),
        summary,
    }
}

/// Deterministic run of the configured scenario.
pub fn cmd_run(config_path: &Path, opts: &Options) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let l = load(config_path, opts)?;
    let rc = l.config.run_config()?;
    let result = run(&rc)?;
    io::ensure_dir(&l.out_dir)?;
    write_run(&l.out_dir, &result, rc.dt)?;
    if l.config.wants_json() {
        io::write_json(&l.out_dir.join("result.json"), &result)?;
    }
    let last = result.series.last();
    let summary = json!({
        "failed": result.failed,
        "failure_time_yr": result.failure_time,
        "steps_completed": result.series.len(),
        "final_max_theta_K": last.map(|p| p.max_theta),
        "final_max_phi": last.map(|p| p.max_phi),
        "max_clamp_overshoot": result.max_clamp_overshoot,
    });
    manifest(&l, "run", started, None, summary).write(&l.out_dir)?;
    match result.failure_time {
        Some(t) => log::info!("limit state crossed at t = {t:.2} yr"),
        None => log::info!("no failure within {} steps", rc.n_steps),
    }
    Ok(Outcome {
        out_dir: l.out_dir,
        failed: result.failed,
    })
}

fn write_run(dir: &Path, r: &RunResult<f64>, dt: f64) -> Result<(), CliError> {
    write_csv(
        &dir.join(io::TIMESERIES),
        &[
            col("t", "yr"),
            col("max_phi", "-"),
            col("max_fatigue", "N/m"),
            col("max_theta", "K"),
            col("delta_V", "V"),
        ],
        r.series.iter().map(|p| {
            vec![num(p.time), num(p.max_phi), num(p.max_fatigue), num(p.max_theta), num(p.delta_v)]
        }),
    )?;
    write_csv(
        &dir.join(io::LOADS),
        &[
            col("t", "yr"),
            col("theta_air", "K"),
            col("wind", "ft/s"),
            col("current", "A"),
            col("current_base", "A"),
            col("theta_base", "K"),
            col("tension", "N"),
        ],
        r.series.iter().map(|p| {
            let s = &p.loads;
            vec![
                num(p.time),
                num(s.theta_air),
                num(s.wind_speed),
                num(s.current),
                num(s.current_base),
                num(s.theta_base),
                num(p.tension),
            ]
        }),
    )?;
    for snap in &r.snapshots {
        let f = &snap.fields;
        let year = snap.step as f64 * dt;
        write_csv(
            &dir.join(io::fields_file_name(year)),
            &[
                col("x", "m"),
                col("u", "m"),
                col("phi", "-"),
                col("fatigue", "N/m"),
                col("theta", "K"),
                col("voltage", "V"),
                col("history", "Pa"),
            ],
            (0..r.x.len()).map(|i| {
                vec![
                    num(r.x[i]),
                    num(f.u[i]),
                    num(f.phi[i]),
                    num(f.fatigue[i]),
                    num(f.theta[i]),
                    num(f.voltage[i]),
                    num(f.history[i]),
                ]
            }),
        )?;
    }
    Ok(())
}

fn ensemble(l: &Loaded, opts: &Options) -> Result<EnsembleResult<f64>, CliError> {
    let rc = l.config.run_config()?;
    let sc = l.config.stochastic_config(&rc)?;
    log::info!("{} realizations", sc.n_realizations());
    Ok(sc.run(&rc, opts.workers.unwrap_or(0))?)
}

/// Collocation or Monte Carlo ensemble.
pub fn cmd_uq(config_path: &Path, opts: &Options) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let l = load(config_path, opts)?;
    let e = ensemble(&l, opts)?;
    io::ensure_dir(&l.out_dir)?;
    write_ensemble(&l.out_dir, &e)?;
    if l.config.wants_json() {
        io::write_json(&l.out_dir.join("ensemble.json"), &e)?;
    }
    let summary = json!({
        "method": e.method,
        "realizations": e.len(),
        "params": e.params.iter().map(|p| p.id.name()).collect::<Vec<_>>(),
        "horizon_steps": e.horizon,
        "horizon_yr": e.horizon_time(),
        "min_failure_time_yr": e.min_failure_time(),
        "final_pf": e.pf.last(),
    });
    manifest(&l, "uq", started, opts.workers, summary).write(&l.out_dir)?;
    Ok(Outcome {
        out_dir: l.out_dir,
        failed: false,
    })
}

fn write_ensemble(dir: &Path, e: &EnsembleResult<f64>) -> Result<(), CliError> {
    write_csv(
        &dir.join(io::STATS),
        &[col("t", "yr"), col("mean_theta_max", "K"), col("std_theta_max", "K")],
        (0..e.horizon).map(|k| vec![num(e.times[k]), num(e.mean_theta_max[k]), num(e.std_theta_max[k])]),
    )?;
    if let Some(sobol) = &e.sobol {
        let mut header = vec![col("t", "yr")];
        header.extend(e.params.iter().map(|p| col(&format!("S_{}", p.id), "-")));
        write_csv(
            &dir.join(io::SOBOL),
            &header,
            (0..e.horizon).map(|k| {
                let mut row = vec![num(e.times[k])];
                row.extend(sobol.iter().map(|s| num(s[k].unwrap_or(f64::NAN))));
                row
            }),
        )?;
    }
    write_csv(
        &dir.join(io::PF),
        &[col("t", "yr"), col("p_f", "-")],
        e.pf_times().into_iter().zip(&e.pf).map(|(t, p)| vec![num(t), num(*p)]),
    )?;
    write_csv(
        &dir.join(io::FIELD_STATS),
        &[col("t", "yr"), col("x", "m"), col("mean_theta", "K"), col("std_theta", "K")],
        e.fields.iter().flat_map(|f| {
            (0..e.x.len()).map(move |i| vec![num(f.time), num(e.x[i]), num(f.mean_theta[i]), num(f.std_theta[i])])
        }),
    )?;
    let mut header = vec![col("index", "-")];
    header.extend(e.params.iter().map(|p| col(p.id.name(), p.id.unit())));
    header.extend([col("weight", "-"), col("failure_time", "yr")]);
    write_csv(
        &dir.join(io::REALIZATIONS),
        &header,
        e.realizations.iter().enumerate().map(|(i, r)| {
            let mut row = vec![i.to_string()];
            row.extend(r.point.iter().map(|&v| num(v)));
            row.push(num(r.weight));
            row.push(num(r.failure_time.unwrap_or(f64::NAN)));
            row
        }),
    )
}

/// One row of a convergence report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub time: f64,
    pub eps_mean: f64,
    pub eps_std: f64,
}

/// Runs the configured ensemble and reports the relative error of its
/// temperature statistics against a reference bundle.
pub fn cmd_compare(config_path: &Path, reference: &Path, opts: &Options) -> Result<(Outcome, Vec<CompareRow>), CliError> {
    let started = Instant::now();
    let l = load(config_path, opts)?;
    let refs = io::read_field_stats(reference)?;
    let e = ensemble(&l, opts)?;
    let ours: Vec<FieldTable> = e
        .fields
        .iter()
        .map(|f| FieldTable {
            time: f.time,
            x: e.x.clone(),
            mean: at_file_precision(&f.mean_theta),
            std: at_file_precision(&f.std_theta),
        })
        .collect();
    let rows = compare_tables(&ours, &refs, &l.config.compare.years)?;

    io::ensure_dir(&l.out_dir)?;
    write_ensemble(&l.out_dir, &e)?;
    write_csv(
        &l.out_dir.join(io::COMPARE),
        &[col("t", "yr"), col("eps_mean", "-"), col("eps_std", "-")],
        rows.iter().map(|r| vec![num(r.time), num(r.eps_mean), num(r.eps_std)]),
    )?;
    println!("{:>10} {:>16} {:>16}", "t [yr]", "eps(E[theta])", "eps(std[theta])");
    for r in &rows {
        println!("{:>10.4} {:>16.6e} {:>16.6e}", r.time, r.eps_mean, r.eps_std);
    }
    let summary = json!({
        "reference": reference,
        "method": e.method,
        "realizations": e.len(),
        "rows": rows.iter().map(|r| json!({"t_yr": r.time, "eps_mean": r.eps_mean, "eps_std": r.eps_std})).collect::<Vec<_>>(),
    });
    manifest(&l, "compare", started, opts.workers, summary).write(&l.out_dir)?;
    if e.method == Method::MonteCarlo {
        log::info!("Monte Carlo ensemble compared against reference");
    }
    Ok((
        Outcome {
            out_dir: l.out_dir,
            failed: false,
        },
        rows,
    ))
}

/// Rounds like the CSV writer, so a bundle compared with itself gives zero.
fn at_file_precision(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| num(x).parse().unwrap_or(x)).collect()
}

/// Matches times (to a tenth of a time step) and checks node coordinates.
pub fn compare_tables(ours: &[FieldTable], refs: &[FieldTable], years: &[f64]) -> Result<Vec<CompareRow>, CliError> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-6 * (1.0 + b.abs());
    let times: Vec<f64> = if years.is_empty() {
        ours.iter()
            .map(|f| f.time)
            .filter(|&t| refs.iter().any(|r| close(r.time, t)))
            .collect()
    } else {
        years.to_vec()
    };
    if times.is_empty() {
        return Err(CliError::Validation("no common snapshot times between the two bundles".into()));
    }
    times
        .into_iter()
        .map(|t| {
            let find = |set: &[FieldTable], which: &str| {
                set.iter().find(|f| close(f.time, t)).cloned().ok_or_else(|| {
                    CliError::Validation(format!("no {which} temperature field at t = {t} yr"))
                })
            };
            let a = find(ours, "computed")?;
            let b = find(refs, "reference")?;
            if a.x.len() != b.x.len() || a.x.iter().zip(&b.x).any(|(p, q)| !close(*p, *q)) {
                return Err(CliError::Validation(format!(
                    "incompatible meshes at t = {t} yr ({} vs {} nodes)",
                    a.x.len(),
                    b.x.len()
                )));
            }
            let eps_std = match relative_error(&a.std, &b.std) {
                Ok(v) => v,
                Err(tline_core::Error::ZeroReferenceNorm) => {
                    if a.std.iter().all(|&s| s == 0.0) {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                }
                Err(e) => return Err(e.into()),
            };
            Ok(CompareRow {
                time: t,
                eps_mean: relative_error(&a.mean, &b.mean)?,
                eps_std,
            })
        })
        .collect()
}
