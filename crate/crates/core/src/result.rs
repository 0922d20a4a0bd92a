use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::Error;
use crate::multigraph::{EdgeMultiset, HamCycle, UnionMultigraph};
use crate::state::{SearchStats, SolveLimits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Decomposed,
    NoneExists,
    TimedOut,
}

impl Status {
    /// Token used in certificates and benchmark CSVs.
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Decomposed => "DECOMPOSED",
            Status::NoneExists => "NONE",
            Status::TimedOut => "TIMEOUT",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "DECOMPOSED" => Ok(Status::Decomposed),
            "NONE" => Ok(Status::NoneExists),
            "TIMEOUT" => Ok(Status::TimedOut),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub edges_fixed: u64,
    pub max_depth: u32,
    pub audits: u64,
    pub audit_violations: u64,
    pub elapsed: Duration,
}

impl SolveStats {
    pub(crate) fn from_search(s: SearchStats, elapsed: Duration) -> Self {
        SolveStats {
            nodes: s.nodes,
            edges_fixed: s.edges_fixed,
            max_depth: s.max_depth,
            audits: s.audits,
            audit_violations: s.audit_violations,
            elapsed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    /// `(z, w)`, present iff `status` is `Decomposed`.
    pub decomposition: Option<(HamCycle, HamCycle)>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Simple path extension.
    Bsp,
    /// Chain edge fixing.
    Bcef,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Bsp => "bsp",
            Algorithm::Bcef => "bcef",
        }
    }

    pub fn solve(
        self,
        g: &UnionMultigraph,
        x: &HamCycle,
        y: &HamCycle,
        config: SolveConfig,
    ) -> Result<SolveResult, Error> {
        match self {
            Algorithm::Bsp => crate::bsp::solve_bsp_with(g, x, y, config),
            Algorithm::Bcef => crate::bcef::solve_bcef_with(g, x, y, config),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bsp" => Ok(Algorithm::Bsp),
            "bcef" => Ok(Algorithm::Bcef),
            other => Err(format!(
                "unknown algorithm `{other}` (expected bsp or bcef)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveConfig {
    pub limits: SolveLimits,
    /// Run a full state audit after every propagation step and count
    /// violations in the stats. Slow; meant for small instances.
    pub audit: bool,
}

impl From<SolveLimits> for SolveConfig {
    fn from(limits: SolveLimits) -> Self {
        SolveConfig {
            limits,
            audit: false,
        }
    }
}

/// Outcome of a subtree search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flow {
    Found,
    Exhausted,
    Aborted,
}

/// Node and wall-clock accounting shared by the solvers.
pub(crate) struct Budget {
    started: Instant,
    limits: SolveLimits,
}

impl Budget {
    pub(crate) fn start(limits: SolveLimits) -> Self {
        Budget {
            started: Instant::now(),
            limits,
        }
    }

    /// Counts one node; false once a budget is exhausted. The clock is only
    /// read every 1024 nodes.
    #[inline]
    pub(crate) fn enter_node(&self, stats: &mut SearchStats, depth: u32) -> bool {
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(depth);
        if self.limits.node_budget > 0 && stats.nodes > self.limits.node_budget {
            return false;
        }
        if !self.limits.time_budget.is_zero()
            && stats.nodes.is_multiple_of(1024)
            && self.started.elapsed() >= self.limits.time_budget
        {
            return false;
        }
        true
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}

/// Checks that `g` is `x ∪ y` and returns the input multisets.
pub(crate) fn check_inputs(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
) -> Result<(EdgeMultiset, EdgeMultiset), Error> {
    if x.n() != g.n() || y.n() != g.n() || x.mode() != g.mode() || y.mode() != g.mode() {
        return Err(Error::MismatchedInstances);
    }
    let (xs, ys) = (x.edge_multiset(), y.edge_multiset());
    if xs.merged(&ys) != g.edge_multiset() {
        return Err(Error::MismatchedInstances);
    }
    Ok((xs, ys))
}
