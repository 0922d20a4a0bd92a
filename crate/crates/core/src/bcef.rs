//! Backtracking by chain edge fixing.
//!
//! Every decision is followed by propagation to a fixpoint:
//!
//! * directed: an arc `(i, j)` fixed in one component sends the other
//!   out-arc of `i` and the other in-arc of `j` to the opposite component;
//! * undirected: a vertex with two fixed edges in one component sends its
//!   remaining free edges to the opposite component.
//!
//! Forced edges are fixed as soon as they are discovered and their own
//! consequences are processed in FIFO order, so the trail lists the cascade
//! level by level. Each edge is fixed at most once per cascade.

use std::collections::VecDeque;

use crate::error::Error;
use crate::multigraph::{EdgeId, EdgeMultiset, HamCycle, Mode, UnionMultigraph, VertexId};
use crate::result::{check_inputs, Budget, Flow, SolveConfig, SolveResult, SolveStats, Status};
use crate::state::{Component, EdgeAssignment, FixOutcome, PartialState, SolveLimits};

/// Reusable work queue for propagation.
#[derive(Debug, Default)]
pub struct Propagator {
    queue: VecDeque<(EdgeId, Component)>,
}

impl Propagator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fixes `e` into `c` and propagates. Stops at the first failure and
    /// leaves everything fixed so far on the trail.
    pub fn chain_fix(
        &mut self,
        state: &mut PartialState,
        g: &UnionMultigraph,
        e: EdgeId,
        c: Component,
    ) -> Result<FixOutcome, Error> {
        if !state.is_free(e) {
            return Err(Error::AlreadyFixed(e));
        }
        Ok(self.run(state, g, e, c))
    }

    pub(crate) fn run(
        &mut self,
        state: &mut PartialState,
        g: &UnionMultigraph,
        e: EdgeId,
        c: Component,
    ) -> FixOutcome {
        self.queue.clear();
        let mut completed = false;
        match state.fix_unchecked(g, e, c) {
            f if f.is_failure() => return f,
            FixOutcome::CompletesComponent => completed = true,
            _ => {}
        }
        self.queue.push_back((e, c));

        while let Some((e, c)) = self.queue.pop_front() {
            let (u, v) = g.endpoints(e);
            let forced = c.opposite();
            let outcome = match g.mode() {
                Mode::Directed => {
                    // Other out-arc of the tail, other in-arc of the head.
                    let out = self.force(state, g, g.out_arcs(u), forced, &mut completed);
                    if out.is_failure() {
                        out
                    } else {
                        self.force(state, g, g.in_arcs(v), forced, &mut completed)
                    }
                }
                Mode::Undirected => {
                    let mut out = FixOutcome::Ok;
                    for w in [u, v] {
                        if state.degree(c, w) == 2 {
                            out = self.force(state, g, g.incident(w), forced, &mut completed);
                            if out.is_failure() {
                                break;
                            }
                        }
                    }
                    out
                }
            };
            if outcome.is_failure() {
                self.queue.clear();
                return outcome;
            }
        }
        if completed {
            FixOutcome::CompletesComponent
        } else {
            FixOutcome::Ok
        }
    }

    /// Fixes every free edge of `edges` into `c` and queues it.
    ///
    /// A forced edge is never found fixed in the wrong component: in the
    /// directed rule that would already have been a degree conflict on the
    /// triggering arc, and in the undirected rule the fixed edges of a
    /// saturated vertex are exactly its two edges in the triggering
    /// component plus edges already in `c`.
    #[inline]
    fn force(
        &mut self,
        state: &mut PartialState,
        g: &UnionMultigraph,
        edges: &[EdgeId],
        c: Component,
        completed: &mut bool,
    ) -> FixOutcome {
        for &f in edges {
            if !state.is_free(f) {
                continue;
            }
            match state.fix_unchecked(g, f, c) {
                out if out.is_failure() => return out,
                FixOutcome::CompletesComponent => *completed = true,
                _ => {}
            }
            self.queue.push_back((f, c));
        }
        FixOutcome::Ok
    }
}

/// Fixes `e` into `c` and propagates its consequences.
pub fn chain_fix(
    state: &mut PartialState,
    g: &UnionMultigraph,
    e: EdgeId,
    c: Component,
) -> Result<FixOutcome, Error> {
    Propagator::new().chain_fix(state, g, e, c)
}

/// Splits every pair of parallel edges: two copies of one edge can never lie
/// on the same Hamiltonian cycle (for `n >= 3`). The copies are
/// interchangeable, so the lower id goes to `z` unless propagation already
/// placed one of them.
pub fn preprocess_parallel(state: &mut PartialState, g: &UnionMultigraph) -> FixOutcome {
    preprocess_with(&mut Propagator::new(), state, g)
}

fn preprocess_with(
    prop: &mut Propagator,
    state: &mut PartialState,
    g: &UnionMultigraph,
) -> FixOutcome {
    let mut completed = false;
    let mut note = |out: FixOutcome| {
        completed |= out == FixOutcome::CompletesComponent;
        out
    };
    for (lo, hi) in g.parallel_edge_pairs() {
        let target = match (state.assignment(lo), state.assignment(hi).component()) {
            (EdgeAssignment::Free, None) => Some(Component::Z),
            (EdgeAssignment::Free, Some(c)) => Some(c.opposite()),
            _ => None,
        };
        if let Some(t) = target {
            let out = note(prop.run(state, g, lo, t));
            if out.is_failure() {
                return out;
            }
        }
        let lo_comp = state.assignment(lo).component().expect("fixed above");
        match state.assignment(hi).component() {
            None => {
                let out = note(prop.run(state, g, hi, lo_comp.opposite()));
                if out.is_failure() {
                    return out;
                }
            }
            // Two copies in one component close a 2-cycle when the second
            // one is fixed, so this is not reachable through `run`.
            Some(c) if c == lo_comp => return FixOutcome::Conflict,
            Some(_) => {}
        }
    }
    if completed {
        FixOutcome::CompletesComponent
    } else {
        FixOutcome::Ok
    }
}

/// Chooses the branching vertex and its candidate edges, or `None` when no
/// free edge is left.
///
/// Directed: among vertices with free out-arcs, the one with the most fixed
/// incident arcs (lowest label on ties), so that fixing one of its out-arcs
/// propagates from both ends; candidates by ascending head label.
///
/// Undirected: the vertex with the fewest free edges (lowest label on ties);
/// candidates by ascending free degree of the neighbour, then neighbour
/// label, then edge id.
pub fn select_branch_edge(
    state: &PartialState,
    g: &UnionMultigraph,
) -> Option<(VertexId, Vec<EdgeId>)> {
    let (v, cands, len) = select(state, g)?;
    Some((v, cands[..len].to_vec()))
}

fn select(state: &PartialState, g: &UnionMultigraph) -> Option<(VertexId, [EdgeId; 4], usize)> {
    let mut best: Option<(VertexId, u8)> = None;
    match g.mode() {
        Mode::Directed => {
            for v in g.vertices() {
                let free_out = state.free_out_degree(v);
                if free_out == 0 {
                    continue;
                }
                let fixed = 4 - free_out - state.free_in_degree(v);
                if best.is_none_or(|(_, b)| fixed > b) {
                    best = Some((v, fixed));
                    if fixed == 2 {
                        break;
                    }
                }
            }
        }
        Mode::Undirected => {
            for v in g.vertices() {
                let d = state.free_degree(v);
                if d == 0 {
                    continue;
                }
                if best.is_none_or(|(_, b)| d < b) {
                    best = Some((v, d));
                    if d == 1 {
                        break;
                    }
                }
            }
        }
    }
    let (v, _) = best?;

    let pool = match g.mode() {
        Mode::Directed => g.out_arcs(v),
        Mode::Undirected => &g.incident(v)[..],
    };
    let mut keyed = [(0u8, 0u32, EdgeId::new(0)); 4];
    let mut len = 0;
    for &e in pool {
        if state.is_free(e) {
            let k = g.other_end(e, v);
            let rank = match g.mode() {
                Mode::Directed => 0,
                Mode::Undirected => state.free_degree(k),
            };
            keyed[len] = (rank, k.get(), e);
            len += 1;
        }
    }
    keyed[..len].sort_unstable();
    let mut out = [EdgeId::new(0); 4];
    for (slot, k) in out.iter_mut().zip(&keyed[..len]) {
        *slot = k.2;
    }
    Some((v, out, len))
}

pub fn solve_bcef(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    limits: SolveLimits,
) -> Result<SolveResult, Error> {
    solve_bcef_with(g, x, y, limits.into())
}

pub fn solve_bcef_with(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    config: SolveConfig,
) -> Result<SolveResult, Error> {
    let (xs, ys) = check_inputs(g, x, y)?;
    let mut search = ChainSearch {
        g,
        state: PartialState::new(g),
        prop: Propagator::new(),
        xs,
        ys,
        budget: Budget::start(config.limits),
        audit: config.audit,
    };
    let flow = search.run();
    let decomposition = match flow {
        Flow::Found => Some(search.state.extract_decomposition(g)?),
        _ => None,
    };
    Ok(SolveResult {
        status: match flow {
            Flow::Found => Status::Decomposed,
            Flow::Exhausted => Status::NoneExists,
            Flow::Aborted => Status::TimedOut,
        },
        decomposition,
        stats: SolveStats::from_search(search.state.stats, search.budget.elapsed()),
    })
}

struct ChainSearch<'g> {
    g: &'g UnionMultigraph,
    state: PartialState,
    prop: Propagator,
    xs: EdgeMultiset,
    ys: EdgeMultiset,
    budget: Budget,
    audit: bool,
}

impl ChainSearch<'_> {
    fn run(&mut self) -> Flow {
        let g = self.g;
        let out = preprocess_with(&mut self.prop, &mut self.state, g);
        self.after_propagation(out);
        if out.is_failure() {
            return Flow::Exhausted;
        }
        // The first free edge belongs to one of the two cycles; call that one
        // `z`. Preprocessing put the lower parallel copies in `z`, which is
        // harmless because copies can be swapped in any solution.
        if let Some(first) = g.edge_ids().find(|&e| self.state.is_free(e)) {
            let out = self.prop.run(&mut self.state, g, first, Component::Z);
            self.after_propagation(out);
            if out.is_failure() {
                return Flow::Exhausted;
            }
        }
        self.search(1)
    }

    /// Searches below a valid, propagated state. On any outcome other than
    /// `Found` the state is restored to what it was on entry.
    fn search(&mut self, depth: u32) -> Flow {
        let g = self.g;
        if !self.budget.enter_node(&mut self.state.stats, depth) {
            return Flow::Aborted;
        }
        if self.state.is_complete() {
            return match self.state.differs_from_inputs(g, &self.xs, &self.ys) {
                Ok(true) => Flow::Found,
                _ => Flow::Exhausted,
            };
        }
        let Some((_, cands, len)) = select(&self.state, g) else {
            return Flow::Exhausted;
        };

        // Branch k puts candidate k in z and candidates 1..k in w. Some
        // candidate must be in z in every solution, so the branches cover
        // the subtree and are pairwise disjoint.
        let node_mark = self.state.mark();
        let mut flow = Flow::Exhausted;
        for &e in &cands[..len] {
            match self.state.assignment(e) {
                EdgeAssignment::InW => continue,
                EdgeAssignment::InZ => {
                    // Earlier candidates in w forced this one into z.
                    flow = self.search(depth + 1);
                    break;
                }
                EdgeAssignment::Free => {}
            }
            let mark = self.state.mark();
            let out = self.prop.run(&mut self.state, g, e, Component::Z);
            self.after_propagation(out);
            if !out.is_failure() {
                flow = self.search(depth + 1);
                if flow != Flow::Exhausted {
                    break;
                }
            }
            self.state.undo_unchecked(g, mark);
            let out = self.prop.run(&mut self.state, g, e, Component::W);
            self.after_propagation(out);
            if out.is_failure() {
                break;
            }
        }
        if flow != Flow::Found {
            self.state.undo_unchecked(g, node_mark);
        }
        flow
    }

    fn after_propagation(&mut self, out: FixOutcome) {
        if self.audit && !out.is_failure() {
            let violations = self.state.audit(self.g, true).len() as u64;
            self.state.stats.audits += 1;
            self.state.stats.audit_violations += violations;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::build_union;

    fn inst(mode: Mode, x: &[u32], y: &[u32]) -> (HamCycle, HamCycle, UnionMultigraph) {
        let x = HamCycle::new(mode, x).unwrap();
        let y = HamCycle::new(mode, y).unwrap();
        let g = build_union(&x, &y).unwrap();
        (x, y, g)
    }

    fn fig3() -> (HamCycle, HamCycle, UnionMultigraph) {
        inst(Mode::Directed, &[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5])
    }

    fn endpoints(g: &UnionMultigraph, e: EdgeId) -> (u32, u32) {
        let (a, b) = g.endpoints(e);
        (a.get(), b.get())
    }

    #[test]
    fn fig3_cascade_from_one_edge() {
        let (_, _, g) = fig3();
        let mut s = PartialState::new(&g);
        assert_eq!(preprocess_parallel(&mut s, &g), FixOutcome::Ok);
        let split: Vec<_> = s.trail_edges().collect();
        assert_eq!(
            split,
            vec![
                (EdgeId::new(1), Component::Z),
                (EdgeId::new(9), Component::W)
            ]
        );

        let mark = s.mark();
        let out = chain_fix(&mut s, &g, EdgeId::new(0), Component::Z).unwrap();
        assert_eq!(out, FixOutcome::CompletesComponent);
        let cascade: Vec<_> = s
            .trail_edges()
            .skip(mark)
            .map(|(e, c)| (endpoints(&g, e), c))
            .collect();
        use Component::{W, Z};
        assert_eq!(
            cascade,
            vec![
                ((1, 2), Z),
                ((1, 4), W),
                ((6, 2), W),
                ((3, 4), Z),
                ((6, 1), Z),
                ((3, 5), W),
                ((5, 1), W),
                ((4, 5), Z),
                ((5, 6), Z),
                // The last free arc closes w.
                ((4, 6), W),
            ]
        );
        assert!(s.is_complete());
        assert!(s.audit(&g, true).is_empty());
    }

    #[test]
    fn lone_parallel_copy_does_not_propagate() {
        let (_, _, g) = inst(Mode::Undirected, &[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        let mut s = PartialState::new(&g);
        assert_eq!(
            chain_fix(&mut s, &g, EdgeId::new(1), Component::Z),
            Ok(FixOutcome::Ok)
        );
        assert_eq!(s.mark(), 1);
        assert!(s.is_free(EdgeId::new(9)));
        assert_eq!(
            chain_fix(&mut s, &g, EdgeId::new(1), Component::W),
            Err(Error::AlreadyFixed(EdgeId::new(1)))
        );
    }

    #[test]
    fn last_free_edge_completes() {
        let (_, _, g) = fig3();
        let mut s = PartialState::new(&g);
        for id in 0..6 {
            s.fix_edge(&g, EdgeId::new(id), Component::Z).unwrap();
        }
        for id in 6..11 {
            s.fix_edge(&g, EdgeId::new(id), Component::W).unwrap();
        }
        assert_eq!(
            chain_fix(&mut s, &g, EdgeId::new(11), Component::W),
            Ok(FixOutcome::CompletesComponent)
        );
        assert!(s.is_complete());
    }

    #[test]
    fn preprocessing_completes_doubled_square() {
        let (x, _, g) = inst(Mode::Undirected, &[1, 2, 3, 4], &[1, 2, 3, 4]);
        let mut s = PartialState::new(&g);
        assert_eq!(
            preprocess_parallel(&mut s, &g),
            FixOutcome::CompletesComponent
        );
        assert!(s.is_complete());
        let (z, w) = s.extract_decomposition(&g).unwrap();
        assert_eq!(z, x.canonical());
        assert_eq!(w, x.canonical());
    }

    #[test]
    fn preprocessing_without_parallel_edges_is_noop() {
        let (_, _, g) = inst(Mode::Undirected, &[1, 2, 3, 4, 5], &[1, 3, 5, 2, 4]);
        let mut s = PartialState::new(&g);
        assert_eq!(preprocess_parallel(&mut s, &g), FixOutcome::Ok);
        assert_eq!(s.mark(), 0);
    }

    #[test]
    fn undirected_selection_rules() {
        let (_, _, g) = inst(Mode::Undirected, &[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        let mut s = PartialState::new(&g);
        let (v, cands) = select_branch_edge(&s, &g).unwrap();
        assert_eq!(v.get(), 1);
        // Neighbours of 1 are 2, 6 (from x) and 4, 5 (from y); all have free
        // degree 4, so ties go by label.
        let heads: Vec<u32> = cands.iter().map(|&e| g.other_end(e, v).get()).collect();
        assert_eq!(heads, vec![2, 4, 5, 6]);

        // Fix two edges at 5 into different components: 5 keeps 2 free edges
        // while 3, 4, 6 and 1 drop to 3.
        let e45 = EdgeId::new(3);
        let e35 = EdgeId::new(10);
        s.fix_edge(&g, e45, Component::Z).unwrap();
        s.fix_edge(&g, e35, Component::W).unwrap();
        let (v, _) = select_branch_edge(&s, &g).unwrap();
        assert_eq!(v.get(), 5);
    }

    #[test]
    fn directed_selection_prefers_fixed_neighbourhood() {
        // Arcs 1 -> 2 appear twice; with both fixed, vertex 2 has two fixed
        // in-arcs and vertex 1 no free out-arc left.
        let (_, _, g) = inst(Mode::Directed, &[1, 2, 3, 4, 5], &[1, 2, 4, 3, 5]);
        let mut s = PartialState::new(&g);
        assert_eq!(select_branch_edge(&s, &g).unwrap().0.get(), 1);
        s.fix_edge(&g, EdgeId::new(0), Component::Z).unwrap();
        s.fix_edge(&g, EdgeId::new(5), Component::W).unwrap();
        let (v, cands) = select_branch_edge(&s, &g).unwrap();
        assert_eq!(v.get(), 2);
        let heads: Vec<u32> = cands.iter().map(|&e| g.endpoints(e).1.get()).collect();
        assert_eq!(heads, vec![3, 4]);
    }

    #[test]
    fn figures_solve() {
        let (x, y, g) = fig3();
        let r = solve_bcef(&g, &x, &y, SolveLimits::unlimited()).unwrap();
        assert_eq!(r.status, Status::NoneExists);

        let (x, y, g) = inst(Mode::Undirected, &[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        let r = solve_bcef(&g, &x, &y, SolveLimits::unlimited()).unwrap();
        assert_eq!(r.status, Status::Decomposed);
        let (z, w) = r.decomposition.unwrap();
        let (zs, ws) = (z.edge_multiset(), w.edge_multiset());
        assert_eq!(zs.merged(&ws), g.edge_multiset());
        assert!(zs != x.edge_multiset() && zs != y.edge_multiset());
    }

    #[test]
    fn doubled_cycles_have_none() {
        for n in 3..=40u32 {
            let v: Vec<u32> = (1..=n).rev().collect();
            for mode in [Mode::Undirected, Mode::Directed] {
                let (x, y, g) = inst(mode, &v, &v);
                let r = solve_bcef(&g, &x, &y, SolveLimits::unlimited()).unwrap();
                assert_eq!(r.status, Status::NoneExists, "n = {n} {mode}");
            }
        }
    }
}
