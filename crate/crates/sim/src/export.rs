//! CSV export bundles and the trajectory reader.
//!
//! Every table starts with one `#` comment line carrying the engine version,
//! run seed and config hash, followed by a column-name row. Numbers use the
//! shortest decimal form that parses back to the same `f64`.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use stmr_core::analysis::MetricsSeries;
use stmr_core::engine::{RunOutput, ScenarioConfig, Snapshot, SwitchEvent, TrajectoryLog};
use stmr_core::AgentState;

use crate::scenario::{config_hash, resolved_toml};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const TRAJECTORY_COLUMNS: [&str; 10] = [
    "time_s",
    "agent_id",
    "x_m",
    "y_m",
    "theta_rad",
    "theta_unwrapped_rad",
    "v_mps",
    "omega_radps",
    "target_id",
    "peak_flow",
];

pub const SWITCH_COLUMNS: [&str; 5] =
    ["time_s", "agent_id", "old_target", "new_target", "accepted"];

pub const METRICS_COLUMNS: [&str; 10] = [
    "time_s",
    "polarization",
    "mean_heading_rad",
    "circular_variance",
    "linear_variance",
    "fiedler_instant",
    "fiedler_union",
    "attentional_work",
    "edge_count",
    "union_edge_count",
];

/// Marker for an absent value (no target, undefined mean heading).
pub const NA: &str = "NA";

/// Shortest round-trip decimal representation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn fmt_opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| NA.to_owned(), |v| v.to_string())
}

pub fn header_line(cfg: &ScenarioConfig) -> String {
    format!(
        "# stmr-sim {VERSION} seed={} config_sha256={}",
        cfg.seed,
        config_hash(cfg)
    )
}

/// A CSV writer whose first line is `header`.
pub fn table_writer<W: Write>(mut sink: W, header: &str) -> io::Result<csv::Writer<W>> {
    writeln!(sink, "{header}")?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink))
}

pub fn write_trajectory<W: Write>(sink: W, header: &str, log: &TrajectoryLog) -> io::Result<()> {
    let mut w = table_writer(sink, header)?;
    w.write_record(TRAJECTORY_COLUMNS)?;
    for snap in &log.snapshots {
        for (i, a) in snap.agents.iter().enumerate() {
            w.write_record([
                fmt_f64(snap.t),
                i.to_string(),
                fmt_f64(a.x),
                fmt_f64(a.y),
                fmt_f64(a.theta),
                fmt_f64(snap.unwrapped[i]),
                fmt_f64(a.v),
                fmt_f64(a.omega),
                fmt_opt(snap.targets[i]),
                fmt_opt(snap.peaks[i].map(fmt_f64)),
            ])?;
        }
    }
    w.flush()
}

pub fn write_switches<W: Write>(sink: W, header: &str, events: &[SwitchEvent]) -> io::Result<()> {
    let mut w = table_writer(sink, header)?;
    w.write_record(SWITCH_COLUMNS)?;
    for e in events {
        w.write_record([
            fmt_f64(e.time),
            e.agent.to_string(),
            e.old_target.to_string(),
            e.new_target.to_string(),
            e.accepted.to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_metrics<W: Write>(sink: W, header: &str, metrics: &MetricsSeries) -> io::Result<()> {
    let mut w = table_writer(sink, header)?;
    w.write_record(METRICS_COLUMNS)?;
    for r in &metrics.rows {
        w.write_record([
            fmt_f64(r.t),
            fmt_f64(r.polarization),
            fmt_opt(r.mean_heading.map(fmt_f64)),
            fmt_f64(r.circular_variance),
            fmt_f64(r.linear_variance),
            fmt_f64(r.fiedler_instant),
            fmt_f64(r.fiedler_union),
            fmt_f64(r.attentional_work),
            r.edge_count.to_string(),
            r.union_edge_count.to_string(),
        ])?;
    }
    w.flush()
}

fn create(dir: &Path, name: &str) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Writes `trajectory.csv`, `switches.csv`, `metrics.csv` and
/// `resolved_config.toml` into `dir`, plus `failure.txt` if the run aborted.
pub fn write_bundle(dir: &Path, cfg: &ScenarioConfig, out: &RunOutput) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let header = header_line(cfg);
    write_trajectory(create(dir, "trajectory.csv")?, &header, &out.trajectory)?;
    write_switches(create(dir, "switches.csv")?, &header, &out.switches)?;
    write_metrics(create(dir, "metrics.csv")?, &header, &out.metrics)?;
    fs::write(dir.join("resolved_config.toml"), resolved_toml(cfg))?;
    let failure = dir.join("failure.txt");
    match &out.failure {
        Some(f) => fs::write(
            failure,
            format!(
                "non-finite state at step {} (t = {} s), agent {}\n",
                f.step,
                fmt_f64(f.time),
                f.agent
            ),
        )?,
        None => {
            if failure.exists() {
                fs::remove_file(failure)?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
}

fn parse_field<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize) -> Result<T, ReadError> {
    let line = rec.position().map_or(0, |p| p.line());
    let raw = rec.get(idx).ok_or_else(|| ReadError::Malformed {
        line,
        message: format!("missing column {}", TRAJECTORY_COLUMNS[idx]),
    })?;
    raw.parse().map_err(|_| ReadError::Malformed {
        line,
        message: format!("bad {} value {raw:?}", TRAJECTORY_COLUMNS[idx]),
    })
}

fn parse_opt<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    idx: usize,
) -> Result<Option<T>, ReadError> {
    if rec.get(idx) == Some(NA) {
        Ok(None)
    } else {
        parse_field(rec, idx).map(Some)
    }
}

/// Parses an exported `trajectory.csv` back into a log. Rows sharing a time
/// stamp form one snapshot.
pub fn read_trajectory<R: io::Read>(source: R, dt: f64) -> Result<TrajectoryLog, ReadError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(TRAJECTORY_COLUMNS) {
        return Err(ReadError::Malformed {
            line: headers.position().map_or(0, |p| p.line()),
            message: format!("unexpected columns {headers:?}"),
        });
    }
    let mut snapshots: Vec<Snapshot> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let t: f64 = parse_field(&rec, 0)?;
        let agent = AgentState {
            x: parse_field(&rec, 2)?,
            y: parse_field(&rec, 3)?,
            theta: parse_field(&rec, 4)?,
            v: parse_field(&rec, 6)?,
            omega: parse_field(&rec, 7)?,
        };
        let unwrapped: f64 = parse_field(&rec, 5)?;
        let target: Option<usize> = parse_opt(&rec, 8)?;
        let peak: Option<f64> = parse_opt(&rec, 9)?;
        let snap = match snapshots.last_mut() {
            Some(s) if s.t == t => s,
            _ => {
                snapshots.push(Snapshot {
                    t,
                    agents: Vec::new(),
                    unwrapped: Vec::new(),
                    targets: Vec::new(),
                    peaks: Vec::new(),
                });
                snapshots.last_mut().expect("just pushed")
            }
        };
        snap.agents.push(agent);
        snap.unwrapped.push(unwrapped);
        snap.targets.push(target);
        snap.peaks.push(peak);
    }
    Ok(TrajectoryLog { dt, snapshots })
}
