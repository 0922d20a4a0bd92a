//! Independent certificate checks. Only vertex sequences and edge multisets
//! are used; nothing here touches the search state.

use std::fmt;

use crate::multigraph::{HamCycle, Mode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    NotHamiltonian { which: &'static str, reason: String },
    NotAPartition,
    SameAsInput { which: &'static str },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::NotHamiltonian { which, reason } => {
                write!(f, "{which} is not a Hamiltonian cycle: {reason}")
            }
            Refutation::NotAPartition => f.write_str("z and w do not partition the edges of x ∪ y"),
            Refutation::SameAsInput { which } => write!(f, "z coincides with {which}"),
        }
    }
}

/// Checks that the raw vertex sequences `z` and `w` form a second
/// Hamiltonian decomposition of `x ∪ y`.
pub fn check_decomposition(
    x: &HamCycle,
    y: &HamCycle,
    z: &[u32],
    w: &[u32],
) -> Result<(), Refutation> {
    let mode: Mode = x.mode();
    let n = x.n();
    let cycle = |which: &'static str, labels: &[u32]| {
        if labels.len() != n {
            return Err(Refutation::NotHamiltonian {
                which,
                reason: format!("{} vertices, expected {n}", labels.len()),
            });
        }
        HamCycle::new(mode, labels).map_err(|e| Refutation::NotHamiltonian {
            which,
            reason: e.to_string(),
        })
    };
    let z = cycle("z", z)?;
    let w = cycle("w", w)?;
    let (xs, ys, zs) = (x.edge_multiset(), y.edge_multiset(), z.edge_multiset());
    if zs.merged(&w.edge_multiset()) != xs.merged(&ys) {
        return Err(Refutation::NotAPartition);
    }
    if zs == xs {
        return Err(Refutation::SameAsInput { which: "x" });
    }
    if zs == ys {
        return Err(Refutation::SameAsInput { which: "y" });
    }
    Ok(())
}
