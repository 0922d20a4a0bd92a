//! Random instances and their text formats.

mod rng;
mod text;

pub use rng::{rng_next, RngState};
pub use text::{parse_certificate, parse_instance, write_certificate, write_instance, Certificate};

use crate::error::Error;
use crate::multigraph::{build_union, HamCycle, Mode, UnionMultigraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub mode: Mode,
    pub n: usize,
    pub x: HamCycle,
    pub y: HamCycle,
}

impl Instance {
    pub fn new(x: HamCycle, y: HamCycle) -> Result<Self, Error> {
        if x.n() != y.n() || x.mode() != y.mode() {
            return Err(Error::MismatchedInstances);
        }
        Ok(Instance {
            mode: x.mode(),
            n: x.n(),
            x,
            y,
        })
    }

    pub fn union(&self) -> UnionMultigraph {
        build_union(&self.x, &self.y).expect("instance cycles agree on n and mode")
    }
}

/// Uniform random cycle by Fisher-Yates over `1..=n`: for `i` from `n - 1`
/// down to 1, swap positions `i` and `next() mod (i + 1)`. The modulo bias is
/// below `n / 2^64` and ignored.
pub fn gen_cycle(n: usize, mode: Mode, rng: RngState) -> Result<(RngState, HamCycle), Error> {
    if n < 3 {
        return Err(Error::InvalidN(n));
    }
    let mut rng = rng;
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    Ok((rng, HamCycle::new(mode, &perm)?))
}

/// `x` and `y` are two consecutive draws from one stream seeded with `seed`.
/// The mode does not influence the permutations.
pub fn gen_instance(n: usize, mode: Mode, seed: u64) -> Result<Instance, Error> {
    let rng = RngState::new(seed);
    let (rng, x) = gen_cycle(n, mode, rng)?;
    let (_, y) = gen_cycle(n, mode, rng)?;
    Instance::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic_and_mode_blind() {
        let a = gen_instance(16, Mode::Undirected, 7).unwrap();
        let b = gen_instance(16, Mode::Undirected, 7).unwrap();
        assert_eq!(a, b);
        let d = gen_instance(16, Mode::Directed, 7).unwrap();
        assert_eq!(a.x.labels(), d.x.labels());
        assert_eq!(a.y.labels(), d.y.labels());
        assert_ne!(a.x.labels(), a.y.labels());
    }

    #[test]
    fn small_n_is_rejected() {
        assert_eq!(
            gen_instance(2, Mode::Undirected, 0),
            Err(Error::InvalidN(2))
        );
        assert!(gen_cycle(3, Mode::Directed, RngState::new(9)).is_ok());
    }

    #[test]
    fn fisher_yates_is_uniform_on_three() {
        let mut counts = std::collections::HashMap::new();
        let mut rng = RngState::new(123);
        let samples = 6000;
        for _ in 0..samples {
            let (next, c) = gen_cycle(3, Mode::Directed, rng).unwrap();
            rng = next;
            *counts.entry(c.labels()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (perm, &k) in &counts {
            let freq = k as f64 / samples as f64;
            assert!((freq - 1.0 / 6.0).abs() <= 0.05, "{perm:?}: {freq}");
        }
    }
}
