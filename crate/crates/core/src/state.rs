//! Mutable search state shared by the solvers.
//!
//! Every component's fixed edges form vertex-disjoint simple paths until the
//! component closes into a Hamiltonian cycle. Each path end stores the
//! opposite end of its path, so a new edge closes a cycle exactly when it
//! joins the two ends of one path. All writes are recorded on the trail and
//! `undo_to` reverts them exactly.

use std::time::Duration;

use crate::error::Error;
use crate::multigraph::{EdgeId, EdgeMultiset, HamCycle, Mode, UnionMultigraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Z,
    W,
}

impl Component {
    #[inline]
    pub fn opposite(self) -> Component {
        match self {
            Component::Z => Component::W,
            Component::W => Component::Z,
        }
    }

    #[inline]
    fn index(self) -> usize {
        match self {
            Component::Z => 0,
            Component::W => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeAssignment {
    Free,
    InZ,
    InW,
}

impl EdgeAssignment {
    #[inline]
    pub fn component(self) -> Option<Component> {
        match self {
            EdgeAssignment::Free => None,
            EdgeAssignment::InZ => Some(Component::Z),
            EdgeAssignment::InW => Some(Component::W),
        }
    }
}

impl From<Component> for EdgeAssignment {
    fn from(c: Component) -> Self {
        match c {
            Component::Z => EdgeAssignment::InZ,
            Component::W => EdgeAssignment::InW,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixOutcome {
    Ok,
    /// The edge joined the two ends of one path with fewer than `n` edges.
    ClosesNonHamCycle,
    /// A degree bound would be exceeded.
    Conflict,
    /// The edge closed a Hamiltonian cycle on all `n` vertices.
    CompletesComponent,
}

impl FixOutcome {
    #[inline]
    pub fn is_failure(self) -> bool {
        matches!(self, FixOutcome::ClosesNonHamCycle | FixOutcome::Conflict)
    }
}

/// Per-run resource limits. Zero means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveLimits {
    pub time_budget: Duration,
    pub node_budget: u64,
}

impl SolveLimits {
    pub fn unlimited() -> Self {
        SolveLimits::default()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub edges_fixed: u64,
    pub max_depth: u32,
    /// Number of full-state audits run (only when auditing is enabled).
    pub audits: u64,
    pub audit_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Side {
    /// Undirected degree, or directed out-degree.
    deg: Vec<u8>,
    /// Directed in-degree; all zero in undirected mode.
    in_deg: Vec<u8>,
    /// For a path end (or an isolated vertex) the opposite end of its path.
    /// Entries of interior vertices are stale and never read.
    partner: Vec<u32>,
    count: usize,
    closed: bool,
}

impl Side {
    fn new(n: usize) -> Self {
        Side {
            deg: vec![0; n + 1],
            in_deg: vec![0; n + 1],
            partner: (0..=n as u32).collect(),
            count: 0,
            closed: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TrailEntry {
    edge: EdgeId,
    comp: Component,
    outcome: FixOutcome,
    // Partner slots overwritten by the join, with their previous values.
    a: u32,
    old_a: u32,
    b: u32,
    old_b: u32,
}

/// Edge assignments plus the bookkeeping needed to check partial solutions
/// in O(1) per fixed edge.
///
/// Equality ignores `stats`, so a state after `undo_to` compares equal to a
/// freshly replayed prefix.
#[derive(Debug, Clone)]
pub struct PartialState {
    n: usize,
    mode: Mode,
    assignment: Vec<EdgeAssignment>,
    sides: [Side; 2],
    /// Undirected free degree, or directed free out-degree.
    free_deg: Vec<u8>,
    /// Directed free in-degree.
    free_in: Vec<u8>,
    trail: Vec<TrailEntry>,
    /// Number of failed fixes currently on the trail.
    failures: usize,
    pub stats: SearchStats,
}

impl PartialEq for PartialState {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.mode == other.mode
            && self.assignment == other.assignment
            && self.sides == other.sides
            && self.free_deg == other.free_deg
            && self.free_in == other.free_in
            && self.trail == other.trail
            && self.failures == other.failures
    }
}

impl Eq for PartialState {}

impl PartialState {
    pub fn new(g: &UnionMultigraph) -> Self {
        let n = g.n();
        let (free_deg, free_in) = match g.mode() {
            Mode::Undirected => (vec![4; n + 1], vec![0; n + 1]),
            Mode::Directed => (vec![2; n + 1], vec![2; n + 1]),
        };
        PartialState {
            n,
            mode: g.mode(),
            assignment: vec![EdgeAssignment::Free; g.edge_count()],
            sides: [Side::new(n), Side::new(n)],
            free_deg,
            free_in,
            trail: Vec::with_capacity(g.edge_count()),
            failures: 0,
            stats: SearchStats::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    #[inline]
    pub fn assignment(&self, e: EdgeId) -> EdgeAssignment {
        self.assignment[e.index()]
    }

    #[inline]
    pub fn is_free(&self, e: EdgeId) -> bool {
        self.assignment[e.index()] == EdgeAssignment::Free
    }

    /// Current trail length, usable as a mark for `undo_to`.
    #[inline]
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn count(&self, c: Component) -> usize {
        self.sides[c.index()].count
    }

    /// Whether `c` has closed into a Hamiltonian cycle.
    pub fn is_closed(&self, c: Component) -> bool {
        self.sides[c.index()].closed
    }

    /// False while a failed fix is on the trail.
    #[inline]
    pub fn is_valid(&self) -> bool {
        self.failures == 0
    }

    /// Undirected degree of `v` in `c`, or out-degree when directed.
    #[inline]
    pub fn degree(&self, c: Component, v: VertexId) -> u8 {
        self.sides[c.index()].deg[v.index()]
    }

    #[inline]
    pub fn in_degree(&self, c: Component, v: VertexId) -> u8 {
        self.sides[c.index()].in_deg[v.index()]
    }

    /// Number of free incident edges; for directed graphs, free in- plus
    /// out-arcs.
    #[inline]
    pub fn free_degree(&self, v: VertexId) -> u8 {
        self.free_deg[v.index()] + self.free_in[v.index()]
    }

    #[inline]
    pub fn free_out_degree(&self, v: VertexId) -> u8 {
        debug_assert_eq!(self.mode, Mode::Directed);
        self.free_deg[v.index()]
    }

    #[inline]
    pub fn free_in_degree(&self, v: VertexId) -> u8 {
        debug_assert_eq!(self.mode, Mode::Directed);
        self.free_in[v.index()]
    }

    /// Edges in fix order.
    pub fn trail_edges(&self) -> impl Iterator<Item = (EdgeId, Component)> + '_ {
        self.trail.iter().map(|t| (t.edge, t.comp))
    }

    pub fn fixed_edges(&self, c: Component) -> impl Iterator<Item = EdgeId> + '_ {
        let want = EdgeAssignment::from(c);
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &a)| a == want)
            .map(|(i, _)| EdgeId::new(i as u32))
    }

    /// Fixes a free edge into `c`. Failed fixes are applied too and leave the
    /// state invalid until they are undone.
    pub fn fix_edge(
        &mut self,
        g: &UnionMultigraph,
        e: EdgeId,
        c: Component,
    ) -> Result<FixOutcome, Error> {
        if !self.is_free(e) {
            return Err(Error::AlreadyFixed(e));
        }
        Ok(self.fix_unchecked(g, e, c))
    }

    #[inline]
    pub(crate) fn fix_unchecked(
        &mut self,
        g: &UnionMultigraph,
        e: EdgeId,
        c: Component,
    ) -> FixOutcome {
        debug_assert!(self.is_free(e));
        let (u, v) = g.endpoints(e);
        let (u, v) = (u.index(), v.index());
        let n = self.n;
        let directed = self.mode == Mode::Directed;
        let side = &mut self.sides[c.index()];

        let conflict = if directed {
            side.deg[u] >= 1 || side.in_deg[v] >= 1
        } else {
            side.deg[u] >= 2 || side.deg[v] >= 2
        };

        let mut entry = TrailEntry {
            edge: e,
            comp: c,
            outcome: FixOutcome::Ok,
            a: u as u32,
            old_a: side.partner[u],
            b: u as u32,
            old_b: side.partner[u],
        };

        if conflict {
            entry.outcome = FixOutcome::Conflict;
        } else {
            // u and v are both path ends (or isolated); in directed mode u is
            // the last vertex of its path and v the first of its own.
            let end_u = side.partner[u];
            let end_v = side.partner[v];
            if end_u as usize == v {
                entry.outcome = if side.count + 1 == n {
                    side.closed = true;
                    FixOutcome::CompletesComponent
                } else {
                    FixOutcome::ClosesNonHamCycle
                };
            } else {
                entry.a = end_u;
                entry.old_a = side.partner[end_u as usize];
                entry.b = end_v;
                entry.old_b = side.partner[end_v as usize];
                side.partner[end_u as usize] = end_v;
                side.partner[end_v as usize] = end_u;
            }
        }

        if directed {
            side.deg[u] += 1;
            side.in_deg[v] += 1;
            self.free_deg[u] -= 1;
            self.free_in[v] -= 1;
        } else {
            side.deg[u] += 1;
            side.deg[v] += 1;
            self.free_deg[u] -= 1;
            self.free_deg[v] -= 1;
        }
        side.count += 1;
        self.assignment[e.index()] = c.into();
        if entry.outcome.is_failure() {
            self.failures += 1;
        }
        self.stats.edges_fixed += 1;
        let outcome = entry.outcome;
        self.trail.push(entry);
        outcome
    }

    /// Reverts every fix made after `mark`.
    pub fn undo_to(&mut self, g: &UnionMultigraph, mark: usize) -> Result<(), Error> {
        if mark > self.trail.len() {
            return Err(Error::InvalidMark {
                mark,
                len: self.trail.len(),
            });
        }
        self.undo_unchecked(g, mark);
        Ok(())
    }

    pub(crate) fn undo_unchecked(&mut self, g: &UnionMultigraph, mark: usize) {
        let directed = self.mode == Mode::Directed;
        while self.trail.len() > mark {
            let t = self.trail.pop().unwrap();
            let (u, v) = g.endpoints(t.edge);
            let (u, v) = (u.index(), v.index());
            let side = &mut self.sides[t.comp.index()];
            side.partner[t.b as usize] = t.old_b;
            side.partner[t.a as usize] = t.old_a;
            match t.outcome {
                FixOutcome::CompletesComponent => side.closed = false,
                FixOutcome::ClosesNonHamCycle | FixOutcome::Conflict => self.failures -= 1,
                FixOutcome::Ok => {}
            }
            if directed {
                side.deg[u] -= 1;
                side.in_deg[v] -= 1;
                self.free_deg[u] += 1;
                self.free_in[v] += 1;
            } else {
                side.deg[u] -= 1;
                side.deg[v] -= 1;
                self.free_deg[u] += 1;
                self.free_deg[v] += 1;
            }
            side.count -= 1;
            self.assignment[t.edge.index()] = EdgeAssignment::Free;
        }
    }

    /// Both components are Hamiltonian cycles on all `n` vertices.
    pub fn is_complete(&self) -> bool {
        self.is_valid() && self.sides[0].closed && self.sides[1].closed
    }

    /// Reads both components off as vertex sequences starting at vertex 1.
    /// Directed cycles follow arc orientation; undirected ones are oriented
    /// towards the smaller neighbour of vertex 1.
    pub fn extract_decomposition(
        &self,
        g: &UnionMultigraph,
    ) -> Result<(HamCycle, HamCycle), Error> {
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        Ok((self.walk(g, Component::Z), self.walk(g, Component::W)))
    }

    fn walk(&self, g: &UnionMultigraph, c: Component) -> HamCycle {
        let want = EdgeAssignment::from(c);
        let n = self.n;
        let mut labels = Vec::with_capacity(n);
        let mut v = VertexId::new(1);
        let mut via: Option<EdgeId> = None;
        for _ in 0..n {
            labels.push(v.get());
            let candidates = g.incident(v).iter().copied().filter(|&e| {
                self.assignment(e) == want
                    && Some(e) != via
                    && (self.mode == Mode::Undirected || g.endpoints(e).0 == v)
            });
            let next = match (self.mode, via) {
                // First step of an undirected walk: go to the smaller neighbour.
                (Mode::Undirected, None) => candidates.min_by_key(|&e| g.other_end(e, v)),
                _ => candidates.min(),
            }
            .expect("complete component is 2-regular");
            via = Some(next);
            v = g.other_end(next, v);
        }
        HamCycle::new(self.mode, &labels).expect("closed component is Hamiltonian")
    }

    /// Edge multiset of component `c`.
    pub fn component_multiset(&self, g: &UnionMultigraph, c: Component) -> EdgeMultiset {
        g.multiset_of(self.fixed_edges(c))
    }

    /// True iff the decomposition differs from `{x, y}`. `w` is the
    /// complement of `z` in `x ∪ y`, so checking `z` alone is enough.
    pub fn differs_from_inputs(
        &self,
        g: &UnionMultigraph,
        x: &EdgeMultiset,
        y: &EdgeMultiset,
    ) -> Result<bool, Error> {
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        let z = self.component_multiset(g, Component::Z);
        Ok(z != *x && z != *y)
    }

    /// Full scan of the state against its invariants. With `closure` set,
    /// also checks that no forced assignment is pending (the fixpoint that
    /// chain fixing maintains). Returns one message per violation.
    pub fn audit(&self, g: &UnionMultigraph, closure: bool) -> Vec<String> {
        let mut out = Vec::new();
        let directed = self.mode == Mode::Directed;
        for c in [Component::Z, Component::W] {
            let want = EdgeAssignment::from(c);
            let mut deg = vec![0u8; self.n + 1];
            let mut in_deg = vec![0u8; self.n + 1];
            let mut count = 0;
            for e in g.edge_ids() {
                if self.assignment(e) == want {
                    let (a, b) = g.endpoints(e);
                    deg[a.index()] += 1;
                    if directed {
                        in_deg[b.index()] += 1;
                    } else {
                        deg[b.index()] += 1;
                    }
                    count += 1;
                }
            }
            if count != self.count(c) {
                out.push(format!(
                    "{c:?}: count {} but {count} edges fixed",
                    self.count(c)
                ));
            }
            for v in g.vertices() {
                let i = v.index();
                if deg[i] != self.sides[c.index()].deg[i]
                    || in_deg[i] != self.sides[c.index()].in_deg[i]
                {
                    out.push(format!("{c:?}: degree counters of {v} out of sync"));
                }
                let bound = if directed { 1 } else { 2 };
                if deg[i] > bound || in_deg[i] > bound {
                    out.push(format!("{c:?}: degree bound exceeded at {v}"));
                }
                if closure {
                    let pending = if directed {
                        (deg[i] == 1 && self.free_deg[i] > 0)
                            || (in_deg[i] == 1 && self.free_in[i] > 0)
                    } else {
                        deg[i] == 2 && self.free_deg[i] > 0
                    };
                    if pending {
                        out.push(format!("{c:?}: forced assignment pending at {v}"));
                    }
                }
            }
            if self.is_valid() {
                out.extend(self.check_paths(g, c));
            }
        }
        for v in g.vertices() {
            let free = g.incident(v).iter().filter(|&&e| self.is_free(e));
            let (out_free, in_free) = if directed {
                let o = free.filter(|&&e| g.endpoints(e).0 == v).count();
                let i = g.incident(v).iter().filter(|&&e| self.is_free(e)).count() - o;
                (o, i)
            } else {
                (free.count(), 0)
            };
            if out_free != self.free_deg[v.index()] as usize
                || in_free != self.free_in[v.index()] as usize
            {
                out.push(format!("free degree of {v} out of sync"));
            }
        }
        if self.trail.len() != self.count(Component::Z) + self.count(Component::W) {
            out.push("trail length differs from fixed edge total".to_string());
        }
        out
    }

    /// Walks every path of `c` explicitly: it must be acyclic unless it is
    /// one closed cycle through all vertices, and path ends must be paired.
    fn check_paths(&self, g: &UnionMultigraph, c: Component) -> Vec<String> {
        let want = EdgeAssignment::from(c);
        let side = &self.sides[c.index()];
        let mut out = Vec::new();
        let mut seen = vec![false; self.n + 1];
        let adj = |v: VertexId| {
            g.incident(v)
                .iter()
                .copied()
                .filter(move |&e| self.assignment(e) == want)
        };
        for start in g.vertices() {
            if seen[start.index()] {
                continue;
            }
            let d = adj(start).count();
            if d == 2 {
                continue;
            }
            // Walk from a path end (or isolated vertex) to the other end.
            let mut v = start;
            let mut via = None;
            seen[v.index()] = true;
            loop {
                let next = adj(v).find(|&e| Some(e) != via);
                match next {
                    None => break,
                    Some(e) => {
                        via = Some(e);
                        v = g.other_end(e, v);
                        if seen[v.index()] {
                            out.push(format!("{c:?}: unexpected cycle through {v}"));
                            break;
                        }
                        seen[v.index()] = true;
                    }
                }
            }
            if side.partner[start.index()] != v.get() || side.partner[v.index()] != start.get() {
                out.push(format!("{c:?}: path ends {start} and {v} are not paired"));
            }
        }
        let unseen = g.vertices().filter(|v| !seen[v.index()]).count();
        if unseen > 0 && !(side.closed && unseen == self.n) {
            out.push(format!(
                "{c:?}: cycle on {unseen} vertices that is not a closed Hamiltonian cycle"
            ));
        }
        out
    }
}
