//! Interaction graphs, Laplacians and algebraic connectivity.

use alloc::vec::Vec;

use super::eigen::{symmetric_eigenvalues, NoConvergence, SymMatrix};
use crate::controllers::{cs_weight, ControllerConfig, ControllerKind};
use crate::flow::nearness;
use crate::geometry::AgentState;
use crate::math;

/// Weighted undirected graph on `n` agents, stored as a dense symmetric
/// adjacency with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionGraph {
    n: usize,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCountMismatch {
    pub left: usize,
    pub right: usize,
}

impl InteractionGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            weights: alloc::vec![0.0; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..i {
                g.set_edge(i, j, 1.0);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Sets the weight of `{i, j}`; self-loops are ignored.
    pub fn set_edge(&mut self, i: usize, j: usize, w: f64) {
        debug_assert!(w >= 0.0);
        if i == j {
            return;
        }
        self.weights[i * self.n + j] = w;
        self.weights[j * self.n + i] = w;
    }

    /// Undirected edges with positive weight.
    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .map(|i| (0..i).filter(|&j| self.weight(i, j) > 0.0).count())
            .sum()
    }

    pub fn degree(&self, i: usize) -> f64 {
        (0..self.n).map(|j| self.weight(i, j)).sum()
    }

    /// `L = D − W`.
    pub fn laplacian(&self) -> SymMatrix {
        let n = self.n;
        let mut l = SymMatrix::zeros(n);
        for i in 0..n {
            let mut deg = 0.0;
            for j in 0..n {
                if i != j {
                    let w = self.weight(i, j);
                    l.set(i, j, -w);
                    deg += w;
                }
            }
            l.set(i, i, deg);
        }
        l
    }

    /// Connected components over positive-weight edges.
    pub fn component_count(&self) -> usize {
        let n = self.n;
        let mut seen = alloc::vec![false; n];
        let mut stack = Vec::new();
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(i) = stack.pop() {
                for (j, s) in seen.iter_mut().enumerate() {
                    if !*s && self.weight(i, j) > 0.0 {
                        *s = true;
                        stack.push(j);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Edge-wise maximum of the two graphs, in place.
    pub fn union_with(&mut self, other: &InteractionGraph) -> Result<(), NodeCountMismatch> {
        if self.n != other.n {
            return Err(NodeCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        for (a, &b) in self.weights.iter_mut().zip(&other.weights) {
            if b > *a {
                *a = b;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiedlerError {
    TooFewNodes(usize),
    NoConvergence,
}

impl From<NoConvergence> for FiedlerError {
    fn from(_: NoConvergence) -> Self {
        FiedlerError::NoConvergence
    }
}

/// Algebraic connectivity: the second-smallest Laplacian eigenvalue.
///
/// Computed purely from the spectrum, so a disconnected graph gives zero up
/// to round-off; negative round-off is clamped to zero.
pub fn fiedler(graph: &InteractionGraph) -> Result<f64, FiedlerError> {
    if graph.n < 2 {
        return Err(FiedlerError::TooFewNodes(graph.n));
    }
    let eig = symmetric_eigenvalues(&graph.laplacian())?;
    Ok(eig[1].max(0.0))
}

/// Who interacts with whom at one instant.
///
/// * STMR: edge `{i, target_i}` of weight 1 for every agent with a target.
/// * Vicsek: weight 1 between agents within the interaction radius.
/// * Cucker-Smale: weight `ψ(r_ij)` between every pair.
/// * WFI: weight `μ(r_ij)` between every pair.
///
/// Pairs where neither agent is reactive carry no edge.
pub fn build_graph(
    controller: &ControllerConfig,
    r_min: f64,
    agents: &[AgentState],
    targets: &[Option<usize>],
    reactive: &[bool],
) -> InteractionGraph {
    let n = agents.len();
    let mut g = InteractionGraph::empty(n);
    let dist =
        |i: usize, j: usize| math::hypot(agents[i].x - agents[j].x, agents[i].y - agents[j].y);
    if controller.kind.is_stmr() {
        for (i, t) in targets.iter().enumerate() {
            if let (Some(j), true) = (t, reactive[i]) {
                g.set_edge(i, *j, 1.0);
            }
        }
        return g;
    }
    for i in 0..n {
        for j in 0..i {
            if !(reactive[i] || reactive[j]) {
                continue;
            }
            let r = dist(i, j);
            let w = match controller.kind {
                ControllerKind::Vicsek => {
                    if r <= controller.vicsek_radius {
                        1.0
                    } else {
                        0.0
                    }
                }
                ControllerKind::CuckerSmale => cs_weight(r, controller.cs_beta),
                ControllerKind::Wfi => nearness(r, r_min),
                ControllerKind::StmrPurePursuit | ControllerKind::StmrMotionCamouflage => {
                    unreachable!()
                }
            };
            if w > 0.0 {
                g.set_edge(i, j, w);
            }
        }
    }
    g
}

/// Running union: entry `k` is the edge-wise maximum of graphs `0..=k`.
pub fn union_graph_series(
    graphs: &[InteractionGraph],
) -> Result<Vec<InteractionGraph>, NodeCountMismatch> {
    let mut out: Vec<InteractionGraph> = Vec::with_capacity(graphs.len());
    for g in graphs {
        let next = match out.last() {
            Some(prev) => {
                let mut u = prev.clone();
                u.union_with(g)?;
                u
            }
            None => g.clone(),
        };
        out.push(next);
    }
    Ok(out)
}
