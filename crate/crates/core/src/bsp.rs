//! Backtracking by simple path extension.
//!
//! Component `z` is grown as a single simple path rooted at vertex 1. As soon
//! as a vertex has used up its `z` slots, its remaining free edges are moved
//! to `w`. A branch dies when `z` closes a short cycle or `w` stops being a
//! union of simple paths.

use crate::error::Error;
use crate::multigraph::{EdgeId, EdgeMultiset, HamCycle, Mode, UnionMultigraph, VertexId};
use crate::result::{check_inputs, Budget, Flow, SolveConfig, SolveResult, SolveStats, Status};
use crate::state::{Component, PartialState, SolveLimits};

pub fn solve_bsp(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    limits: SolveLimits,
) -> Result<SolveResult, Error> {
    solve_bsp_with(g, x, y, limits.into())
}

pub fn solve_bsp_with(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    config: SolveConfig,
) -> Result<SolveResult, Error> {
    let (xs, ys) = check_inputs(g, x, y)?;
    let mut search = PathSearch {
        g,
        state: PartialState::new(g),
        xs,
        ys,
        budget: Budget::start(config.limits),
        audit: config.audit,
    };

    // Naming the component that holds the first edge `z` loses nothing, so
    // the first edge is fixed without branching.
    let root = VertexId::new(1);
    let first = match g.mode() {
        Mode::Undirected => g.incident(root)[0],
        Mode::Directed => g.out_arcs(root)[0],
    };
    let flow = search.extend(first, root, 1);

    let status = match flow {
        Flow::Found => Status::Decomposed,
        Flow::Exhausted => Status::NoneExists,
        Flow::Aborted => Status::TimedOut,
    };
    let decomposition = match flow {
        Flow::Found => Some(search.state.extract_decomposition(g)?),
        _ => None,
    };
    Ok(SolveResult {
        status,
        decomposition,
        stats: SolveStats::from_search(search.state.stats, search.budget.elapsed()),
    })
}

struct PathSearch<'g> {
    g: &'g UnionMultigraph,
    state: PartialState,
    xs: EdgeMultiset,
    ys: EdgeMultiset,
    budget: Budget,
    audit: bool,
}

impl PathSearch<'_> {
    /// Appends `e` (leaving `from`) to the `z` path and searches below it.
    /// Leaves the state untouched unless a solution was found.
    fn extend(&mut self, e: EdgeId, from: VertexId, depth: u32) -> Flow {
        if !self.budget.enter_node(&mut self.state.stats, depth) {
            return Flow::Aborted;
        }
        let mark = self.state.mark();
        let flow = self.try_extend(e, from, depth);
        if flow != Flow::Found {
            self.state.undo_unchecked(self.g, mark);
        }
        flow
    }

    fn try_extend(&mut self, e: EdgeId, from: VertexId, depth: u32) -> Flow {
        let g = self.g;
        let head = g.other_end(e, from);
        if self.state.fix_unchecked(g, e, Component::Z).is_failure() {
            return Flow::Exhausted;
        }
        if !self.displace(from) || !self.displace(head) {
            return Flow::Exhausted;
        }
        if self.audit {
            self.run_audit();
        }

        if self.state.is_closed(Component::Z) {
            for f in g.edge_ids() {
                if self.state.is_free(f)
                    && self.state.fix_unchecked(g, f, Component::W).is_failure()
                {
                    return Flow::Exhausted;
                }
            }
            let done = self.state.is_complete()
                && self.state.differs_from_inputs(g, &self.xs, &self.ys) == Ok(true);
            return if done { Flow::Found } else { Flow::Exhausted };
        }

        let (cands, len) = self.candidates(head);
        for &next in &cands[..len] {
            match self.extend(next, head, depth + 1) {
                Flow::Exhausted => continue,
                other => return other,
            }
        }
        Flow::Exhausted
    }

    /// Moves the free edges of `v` to `w` once `v` has no `z` slot left.
    fn displace(&mut self, v: VertexId) -> bool {
        let g = self.g;
        let (out_full, in_full) = match g.mode() {
            Mode::Undirected => (self.state.degree(Component::Z, v) == 2, false),
            Mode::Directed => (
                self.state.degree(Component::Z, v) == 1,
                self.state.in_degree(Component::Z, v) == 1,
            ),
        };
        let incident = g.incident(v);
        let (lo, hi) = match (g.mode(), out_full, in_full) {
            (_, false, false) => return true,
            (Mode::Undirected, _, _) => (0, 4),
            (Mode::Directed, true, true) => (0, 4),
            (Mode::Directed, true, false) => (0, 2),
            (Mode::Directed, false, true) => (2, 4),
        };
        for &f in &incident[lo..hi] {
            if self.state.is_free(f) && self.state.fix_unchecked(g, f, Component::W).is_failure() {
                return false;
            }
        }
        true
    }

    /// Free continuations from the path head, by ascending free degree of
    /// the far end, then its label, then edge id. Of two parallel copies only
    /// the lower id is kept.
    fn candidates(&self, head: VertexId) -> ([EdgeId; 4], usize) {
        let g = self.g;
        let pool = match g.mode() {
            Mode::Undirected => &g.incident(head)[..],
            Mode::Directed => g.out_arcs(head),
        };
        let mut keyed = [(0u8, 0u32, EdgeId::new(0)); 4];
        let mut len = 0;
        for &f in pool {
            if self.state.is_free(f) {
                let k = g.other_end(f, head);
                keyed[len] = (self.state.free_degree(k), k.get(), f);
                len += 1;
            }
        }
        keyed[..len].sort_unstable();
        let mut out = [EdgeId::new(0); 4];
        let mut kept = 0;
        for i in 0..len {
            if i > 0 && keyed[i].1 == keyed[i - 1].1 {
                continue;
            }
            out[kept] = keyed[i].2;
            kept += 1;
        }
        (out, kept)
    }

    fn run_audit(&mut self) {
        let violations = self.state.audit(self.g, false).len() as u64;
        self.state.stats.audits += 1;
        self.state.stats.audit_violations += violations;
    }
}
