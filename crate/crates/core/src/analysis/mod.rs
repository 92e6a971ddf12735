//! Post-processing: bi-agent stability, interaction graphs, order statistics
//! and per-step metrics.

pub mod eigen;
pub mod graph;
pub mod metrics;
pub mod stability;
pub mod stats;

pub use graph::{build_graph, fiedler, union_graph_series, InteractionGraph};
pub use metrics::{attentional_work, compute_metrics, MetricsRow, MetricsSeries};
pub use stability::{biagent_error_rhs, biagent_linearization, eig2, BiAgentParams, Complex};
pub use stats::{circular_mean_and_variance, polarization};
