//! Exhaustive enumeration of all Hamiltonian decompositions of a small union
//! multigraph.
//!
//! Deliberately shares nothing with the solvers' search state: edges are
//! assigned in id order with plain degree counters, and each complete
//! assignment is checked by walking both components.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::multigraph::{EdgeMultiset, HamCycle, Mode, UnionMultigraph};

pub const MAX_ORACLE_N: usize = 14;

/// Unordered pairs `{A, B}` stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSet {
    pub decompositions: Vec<(EdgeMultiset, EdgeMultiset)>,
}

impl DecompositionSet {
    pub fn count(&self) -> usize {
        self.decompositions.len()
    }

    pub fn contains(&self, a: &EdgeMultiset, b: &EdgeMultiset) -> bool {
        let key = ordered(a.clone(), b.clone());
        self.decompositions.contains(&key)
    }
}

fn ordered(a: EdgeMultiset, b: EdgeMultiset) -> (EdgeMultiset, EdgeMultiset) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn enumerate_decompositions(g: &UnionMultigraph) -> Result<DecompositionSet, Error> {
    if g.n() > MAX_ORACLE_N {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: MAX_ORACLE_N,
        });
    }
    let mut e = Enumerator {
        g,
        side: vec![0; g.edge_count()],
        out_deg: [vec![0; g.n() + 1], vec![0; g.n() + 1]],
        in_deg: [vec![0; g.n() + 1], vec![0; g.n() + 1]],
        found: BTreeSet::new(),
    };
    e.assign(0);
    Ok(DecompositionSet {
        decompositions: e.found.into_iter().collect(),
    })
}

/// True iff `x ∪ y` has a decomposition other than `{x, y}`.
pub fn second_decomposition_exists(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
) -> Result<bool, Error> {
    let set = enumerate_decompositions(g)?;
    let input = ordered(x.edge_multiset(), y.edge_multiset());
    Ok(set.decompositions.iter().any(|d| *d != input))
}

struct Enumerator<'g> {
    g: &'g UnionMultigraph,
    side: Vec<u8>,
    // Undirected graphs only use `out_deg` (as plain degree).
    out_deg: [Vec<u8>; 2],
    in_deg: [Vec<u8>; 2],
    found: BTreeSet<(EdgeMultiset, EdgeMultiset)>,
}

impl Enumerator<'_> {
    fn assign(&mut self, k: usize) {
        let g = self.g;
        if k == g.edge_count() {
            self.leaf();
            return;
        }
        let (a, b) = g.endpoints(crate::multigraph::EdgeId::new(k as u32));
        let (a, b) = (a.get() as usize, b.get() as usize);
        for s in 0..2 {
            let fits = match g.mode() {
                Mode::Directed => self.out_deg[s][a] < 1 && self.in_deg[s][b] < 1,
                Mode::Undirected => self.out_deg[s][a] < 2 && self.out_deg[s][b] < 2,
            };
            if !fits {
                continue;
            }
            self.side[k] = s as u8;
            self.out_deg[s][a] += 1;
            match g.mode() {
                Mode::Directed => self.in_deg[s][b] += 1,
                Mode::Undirected => self.out_deg[s][b] += 1,
            }
            self.assign(k + 1);
            self.out_deg[s][a] -= 1;
            match g.mode() {
                Mode::Directed => self.in_deg[s][b] -= 1,
                Mode::Undirected => self.out_deg[s][b] -= 1,
            }
        }
    }

    fn leaf(&mut self) {
        // Degree pruning guarantees every vertex has exactly two edges per
        // side (one in, one out when directed).
        if self.is_hamiltonian(0) && self.is_hamiltonian(1) {
            let g = self.g;
            let a = g.multiset_of(g.edge_ids().filter(|e| self.side[e.index()] == 0));
            let b = g.multiset_of(g.edge_ids().filter(|e| self.side[e.index()] == 1));
            self.found.insert(ordered(a, b));
        }
    }

    fn is_hamiltonian(&self, s: u8) -> bool {
        let g = self.g;
        let n = g.n();
        let mine = |e: &crate::multigraph::EdgeId| self.side[e.index()] == s;
        let start = crate::multigraph::VertexId::new(1);
        let mut v = start;
        let mut via = None;
        for step in 1..=n {
            let next = g
                .incident(v)
                .iter()
                .filter(|e| mine(e))
                .find(|&&e| match g.mode() {
                    Mode::Directed => g.endpoints(e).0 == v,
                    Mode::Undirected => Some(e) != via,
                });
            let Some(&e) = next else {
                return false;
            };
            via = Some(e);
            v = g.other_end(e, v);
            if v == start {
                return step == n;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::build_union;

    fn union(mode: Mode, x: &[u32], y: &[u32]) -> (HamCycle, HamCycle, UnionMultigraph) {
        let x = HamCycle::new(mode, x).unwrap();
        let y = HamCycle::new(mode, y).unwrap();
        let g = build_union(&x, &y).unwrap();
        (x, y, g)
    }

    #[test]
    fn doubled_hexagon_has_one_decomposition() {
        let (x, y, g) = union(Mode::Undirected, &[1, 2, 3, 4, 5, 6], &[1, 2, 3, 4, 5, 6]);
        let set = enumerate_decompositions(&g).unwrap();
        assert_eq!(set.count(), 1);
        assert!(!second_decomposition_exists(&g, &x, &y).unwrap());
    }

    #[test]
    fn fig1_contains_both_figure_decompositions() {
        let (x, y, g) = union(Mode::Undirected, &[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        let set = enumerate_decompositions(&g).unwrap();
        assert!(set.count() >= 2);
        assert!(set.contains(&x.edge_multiset(), &y.edge_multiset()));
        let z = HamCycle::new(Mode::Undirected, &[1, 4, 5, 3, 2, 6]).unwrap();
        let w = HamCycle::new(Mode::Undirected, &[1, 2, 3, 4, 6, 5]).unwrap();
        assert!(set.contains(&w.edge_multiset(), &z.edge_multiset()));
        assert!(second_decomposition_exists(&g, &x, &y).unwrap());
    }

    #[test]
    fn fig3_decomposition_is_unique() {
        let (x, y, g) = union(Mode::Directed, &[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        assert_eq!(enumerate_decompositions(&g).unwrap().count(), 1);
        assert!(!second_decomposition_exists(&g, &x, &y).unwrap());
    }

    #[test]
    fn k5_count_is_frozen() {
        // x ∪ y is K5; its Hamiltonian decompositions were counted once by
        // this enumerator and cross-checked by hand: K5 has 12 Hamiltonian
        // cycles and each one's complement is again a Hamiltonian cycle.
        let (_, _, g) = union(Mode::Undirected, &[1, 2, 3, 4, 5], &[1, 3, 5, 2, 4]);
        assert_eq!(enumerate_decompositions(&g).unwrap().count(), 6);
    }

    #[test]
    fn too_large_is_rejected() {
        let v: Vec<u32> = (1..=15).collect();
        let (x, y, g) = union(Mode::Undirected, &v, &v);
        assert_eq!(
            second_decomposition_exists(&g, &x, &y),
            Err(Error::TooLarge { n: 15, limit: 14 })
        );
    }
}
