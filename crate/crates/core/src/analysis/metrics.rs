//! Per-snapshot swarm metrics.

use alloc::vec::Vec;

use super::graph::{build_graph, fiedler, InteractionGraph};
use super::stats::{circular_mean_and_variance, linear_variance, polarization};
use crate::controllers::ControllerConfig;
use crate::engine::TrajectoryLog;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub t: f64,
    pub polarization: f64,
    /// `None` when the headings cancel exactly.
    pub mean_heading: Option<f64>,
    pub circular_variance: f64,
    /// Variance of the unwrapped headings.
    pub linear_variance: f64,
    pub fiedler_instant: f64,
    pub fiedler_union: f64,
    pub attentional_work: f64,
    pub edge_count: usize,
    pub union_edge_count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsSeries {
    pub rows: Vec<MetricsRow>,
}

impl MetricsSeries {
    pub fn column(&self, f: impl Fn(&MetricsRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }
}

/// Cumulative trapezoidal integral of `series` sampled every `dt`.
pub fn attentional_work(series: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(series.len());
    let mut acc = 0.0;
    for (k, &f) in series.iter().enumerate() {
        if k > 0 {
            acc += 0.5 * dt * (series[k - 1] + f);
        }
        out.push(acc);
    }
    out
}

/// Fiedler value, reusing the previous result when the graph is unchanged.
struct CachedFiedler {
    last: Option<(InteractionGraph, f64)>,
}

impl CachedFiedler {
    fn eval(&mut self, g: &InteractionGraph) -> f64 {
        if let Some((prev, val)) = &self.last {
            if prev == g {
                return *val;
            }
        }
        let val = fiedler(g).expect("graphs have at least two nodes and small size");
        self.last = Some((g.clone(), val));
        val
    }
}

/// Computes every metric for every snapshot of a trajectory.
pub fn compute_metrics(
    controller: &ControllerConfig,
    r_min: f64,
    reactive: &[bool],
    log: &TrajectoryLog,
) -> MetricsSeries {
    let mut rows = Vec::with_capacity(log.snapshots.len());
    let mut union: Option<InteractionGraph> = None;
    let mut instant_cache = CachedFiedler { last: None };
    let mut union_cache = CachedFiedler { last: None };
    let mut union_series = Vec::with_capacity(log.snapshots.len());
    let mut headings = Vec::new();
    for snap in &log.snapshots {
        let g = build_graph(controller, r_min, &snap.agents, &snap.targets, reactive);
        let u = match union.as_mut() {
            Some(u) => {
                u.union_with(&g).expect("constant node count");
                u
            }
            None => union.insert(g.clone()),
        };
        let fiedler_instant = instant_cache.eval(&g);
        let fiedler_union = union_cache.eval(u);
        union_series.push(fiedler_union);

        headings.clear();
        headings.extend(snap.agents.iter().map(|a| a.theta));
        let (mean_heading, circular_variance) = circular_mean_and_variance(&headings);
        rows.push(MetricsRow {
            t: snap.t,
            polarization: polarization(&headings),
            mean_heading,
            circular_variance,
            linear_variance: linear_variance(&snap.unwrapped),
            fiedler_instant,
            fiedler_union,
            attentional_work: 0.0,
            edge_count: g.edge_count(),
            union_edge_count: u.edge_count(),
        });
    }
    for (row, w) in rows.iter_mut().zip(attentional_work(&union_series, log.dt)) {
        row.attentional_work = w;
    }
    MetricsSeries { rows }
}
