//! The four command-line operations, usable as a library.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::thread;

use stmr_core::analysis::stability::is_hurwitz;
use stmr_core::analysis::{biagent_linearization, eig2, BiAgentParams};
use stmr_core::controllers::ControllerKind;
use stmr_core::engine::{run, ReactiveSet, RunOutput, ScenarioConfig};

use crate::export::{fmt_f64, header_line, table_writer, write_bundle, NA, VERSION};
use crate::scenario::{load_scenario, ScenarioError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) | CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn numerical(label: &str, out: &RunOutput) -> Option<String> {
    out.failure.map(|f| {
        format!(
            "{label}: non-finite state at step {} (t = {} s), agent {}",
            f.step,
            fmt_f64(f.time),
            f.agent
        )
    })
}

/// Runs `items` on scoped threads, one per item, and returns results in input
/// order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(1);
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

pub struct SimulateSummary {
    pub snapshots: usize,
    pub accepted_switches: usize,
}

/// Runs one scenario and writes its bundle into `out_dir`.
pub fn simulate(
    config: &Path,
    out_dir: &Path,
    no_dwell_enforce: bool,
) -> Result<SimulateSummary, CliError> {
    let mut cfg = load_scenario(config)?;
    if no_dwell_enforce {
        cfg.dwell.enforce = false;
    }
    let out = run(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    write_bundle(out_dir, &cfg, &out)?;
    if let Some(msg) = numerical("simulate", &out) {
        return Err(CliError::Numerical(msg));
    }
    Ok(SimulateSummary {
        snapshots: out.trajectory.snapshots.len(),
        accepted_switches: out.accepted_switches(),
    })
}

pub fn parse_models(list: &str) -> Result<Vec<ControllerKind>, CliError> {
    let mut kinds = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let kind = ControllerKind::parse(name)
            .ok_or_else(|| CliError::Usage(format!("unknown model `{name}`")))?;
        if kinds.contains(&kind) {
            return Err(CliError::Usage(format!("model `{name}` listed twice")));
        }
        kinds.push(kind);
    }
    if kinds.is_empty() {
        return Err(CliError::Usage("model list is empty".into()));
    }
    Ok(kinds)
}

pub const COMPARISON_COLUMNS: [&str; 8] = [
    "model",
    "time_s",
    "polarization",
    "mean_heading_rad",
    "circular_variance",
    "fiedler_instant",
    "fiedler_union",
    "attentional_work",
];

/// Runs every model from the same initial conditions and seed. Writes one
/// bundle per model under `out_dir/<model>/` and a joined `comparison.csv`.
pub fn compare(
    config: &Path,
    models: &[ControllerKind],
    single_agent: bool,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    if models.is_empty() {
        return Err(CliError::Usage("model list is empty".into()));
    }
    let mut base = load_scenario(config)?;
    if single_agent {
        base.reactive = ReactiveSet::First;
    }
    let cfgs: Vec<ScenarioConfig> = models
        .iter()
        .map(|&k| {
            let mut c = base.clone();
            c.controller.kind = k;
            c
        })
        .collect();
    let outs = par_map(&cfgs, run);
    let mut dirs = Vec::new();
    let mut failures = Vec::new();
    let mut w = table_writer(
        BufWriter::new(fs::File::create({
            fs::create_dir_all(out_dir)?;
            out_dir.join("comparison.csv")
        })?),
        &header_line(&base),
    )?;
    w.write_record(COMPARISON_COLUMNS)?;
    for (cfg, out) in cfgs.iter().zip(outs) {
        let out = out.map_err(|e| CliError::Usage(e.to_string()))?;
        let name = cfg.controller.kind.name();
        let dir = out_dir.join(name);
        write_bundle(&dir, cfg, &out)?;
        for r in &out.metrics.rows {
            w.write_record([
                name.to_owned(),
                fmt_f64(r.t),
                fmt_f64(r.polarization),
                r.mean_heading.map_or_else(|| NA.to_owned(), fmt_f64),
                fmt_f64(r.circular_variance),
                fmt_f64(r.fiedler_instant),
                fmt_f64(r.fiedler_union),
                fmt_f64(r.attentional_work),
            ])?;
        }
        failures.extend(numerical(name, &out));
        dirs.push(dir);
    }
    w.flush()?;
    if !failures.is_empty() {
        return Err(CliError::Numerical(failures.join("; ")));
    }
    Ok(dirs)
}

/// `lo:hi:n` grid, logarithmically spaced when `lo > 0`, linear otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected lo:hi:n, got `{s}`"));
        };
        let lo: f64 = lo.parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
        let hi: f64 = hi.parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
        let n: usize = n.parse().map_err(|_| format!("bad count `{n}`"))?;
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(format!("range {lo}:{hi} is empty or not finite"));
        }
        if n == 0 {
            return Err("grid needs at least one point".into());
        }
        Ok(Grid { lo, hi, n })
    }
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|k| {
                if k == self.n - 1 {
                    return self.hi;
                }
                let s = k as f64 / last;
                if self.lo > 0.0 {
                    let (a, b) = (self.lo.log10(), self.hi.log10());
                    10f64.powf(a + s * (b - a))
                } else {
                    self.lo + s * (self.hi - self.lo)
                }
            })
            .collect()
    }
}

pub const STABILITY_COLUMNS: [&str; 7] = ["K_a", "alpha", "re1", "im1", "re2", "im2", "stable"];

/// Eigenvalues of the straight-flying-target linearization over a grid.
pub fn stability<W: Write>(ka: &Grid, alpha: &Grid, sink: W) -> Result<(), CliError> {
    if alpha.lo <= 0.0 {
        return Err(CliError::Usage("alpha must be positive".into()));
    }
    let mut w = table_writer(sink, &format!("# stmr-sim {VERSION} stability"))?;
    w.write_record(STABILITY_COLUMNS)?;
    for &k_a in &ka.points() {
        for &al in &alpha.points() {
            let m = biagent_linearization(&BiAgentParams {
                k_a,
                k_b: 0.0,
                alpha: al,
            })
            .expect("k_b is zero");
            let e = eig2(&m);
            w.write_record([
                fmt_f64(k_a),
                fmt_f64(al),
                fmt_f64(e[0].re),
                fmt_f64(e[0].im),
                fmt_f64(e[1].re),
                fmt_f64(e[1].im),
                is_hurwitz(&e).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub const SWEEP_COLUMNS: [&str; 10] = [
    "seed",
    "initial_circular_variance",
    "final_circular_variance",
    "final_circular_variance_min",
    "final_circular_variance_max",
    "final_polarization",
    "final_polarization_min",
    "final_polarization_max",
    "accepted_switches",
    "failed",
];

/// End-of-run statistics of one seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedSummary {
    pub seed: u64,
    pub initial_variance: f64,
    pub final_variance: f64,
    pub final_polarization: f64,
    pub accepted_switches: usize,
    pub failed: bool,
}

/// Runs seeds `0..seeds` of a scenario and writes `sweep.csv`: one row per
/// seed, then an `all` row with the mean, minimum and maximum.
pub fn sweep(config: &Path, seeds: u64, out_dir: &Path) -> Result<Vec<SeedSummary>, CliError> {
    if seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let base = load_scenario(config)?;
    let cfgs: Vec<ScenarioConfig> = (0..seeds)
        .map(|seed| ScenarioConfig {
            seed,
            ..base.clone()
        })
        .collect();
    let outs = par_map(&cfgs, |c| {
        run(c).map(|out| {
            let rows = &out.metrics.rows;
            let (first, last) = (&rows[0], rows.last().expect("at least one snapshot"));
            SeedSummary {
                seed: c.seed,
                initial_variance: first.circular_variance,
                final_variance: last.circular_variance,
                final_polarization: last.polarization,
                accepted_switches: out.accepted_switches(),
                failed: out.failure.is_some(),
            }
        })
    });
    let rows: Vec<SeedSummary> = outs
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    fs::create_dir_all(out_dir)?;
    let mut w = table_writer(
        BufWriter::new(fs::File::create(out_dir.join("sweep.csv"))?),
        &header_line(&base),
    )?;
    w.write_record(SWEEP_COLUMNS)?;
    for r in &rows {
        let (v, p) = (fmt_f64(r.final_variance), fmt_f64(r.final_polarization));
        w.write_record([
            r.seed.to_string(),
            fmt_f64(r.initial_variance),
            v.clone(),
            v.clone(),
            v,
            p.clone(),
            p.clone(),
            p,
            r.accepted_switches.to_string(),
            r.failed.to_string(),
        ])?;
    }
    let n = rows.len() as f64;
    let stat = |f: fn(&SeedSummary) -> f64| {
        let vals = rows.iter().map(f);
        let mean = vals.clone().sum::<f64>() / n;
        let min = vals.clone().fold(f64::INFINITY, f64::min);
        let max = vals.fold(f64::NEG_INFINITY, f64::max);
        (mean, min, max)
    };
    let (v_mean, v_min, v_max) = stat(|r| r.final_variance);
    let (p_mean, p_min, p_max) = stat(|r| r.final_polarization);
    let (i_mean, _, _) = stat(|r| r.initial_variance);
    let switches: usize = rows.iter().map(|r| r.accepted_switches).sum();
    w.write_record([
        "all".to_owned(),
        fmt_f64(i_mean),
        fmt_f64(v_mean),
        fmt_f64(v_min),
        fmt_f64(v_max),
        fmt_f64(p_mean),
        fmt_f64(p_min),
        fmt_f64(p_max),
        fmt_f64(switches as f64 / n),
        rows.iter().any(|r| r.failed).to_string(),
    ])?;
    w.flush()?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.failed)
        .map(|r| r.seed.to_string())
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Numerical(format!(
            "non-finite state in seeds {}",
            failed.join(", ")
        )));
    }
    Ok(rows)
}
