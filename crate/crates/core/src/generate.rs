//! Seeded random instance families.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A random graph family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Erdős–Rényi: every pair is an edge independently with probability `p`.
    Gnp(f64),
    /// Disjoint cycles (mostly of order 4 and 5) joined by sparse chords.
    CyclesPlusChords,
    /// Random paths of order at most `k` covering all vertices, plus noise edges.
    PlantedCover(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gnp(p) => write!(f, "gnp:{p}"),
            Family::CyclesPlusChords => write!(f, "cycles"),
            Family::PlantedCover(k) => write!(f, "planted:{k}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `gnp:<p>`, `cycles` and `planted:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown graph family {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        match (name, arg) {
            ("gnp", Some(p)) => Ok(Family::Gnp(p.parse().map_err(|_| bad())?)),
            ("cycles", None) => Ok(Family::CyclesPlusChords),
            ("planted", Some(k)) => Ok(Family::PlantedCover(k.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// Draws a graph on `n` vertices from `family`; deterministic in `seed`.
pub fn random_graph(n: usize, family: Family, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = match family {
        Family::Gnp(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")));
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        Family::CyclesPlusChords => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut edges = Vec::new();
            let mut rest = &order[..];
            while !rest.is_empty() {
                let want = match rng.gen_range(0..10) {
                    0..=3 => 4,
                    4..=7 => 5,
                    8 => rng.gen_range(6..=9),
                    _ => rng.gen_range(1..=3),
                };
                let len = want.min(rest.len());
                let (block, tail) = rest.split_at(len);
                edges.extend(block.windows(2).map(|w| (w[0], w[1])));
                if len >= 4 {
                    edges.push((block[len - 1], block[0]));
                }
                rest = tail;
            }
            add_noise(&mut rng, n, n / 2 + 1, &mut edges);
            edges
        }
        Family::PlantedCover(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter(
                    "planted path order must be positive".into(),
                ));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut edges = Vec::new();
            let mut rest = &order[..];
            while !rest.is_empty() {
                let len = rng.gen_range(1..=k).min(rest.len());
                let (block, tail) = rest.split_at(len);
                edges.extend(block.windows(2).map(|w| (w[0], w[1])));
                rest = tail;
            }
            add_noise(&mut rng, n, n / 3 + 1, &mut edges);
            edges
        }
    };
    Graph::from_edges(n, edges)
}

fn add_noise(rng: &mut ChaCha8Rng, n: usize, count: usize, edges: &mut Vec<(usize, usize)>) {
    if n < 2 {
        return;
    }
    for _ in 0..count {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        assert_eq!(random_graph(5, Family::Gnp(0.0), 1).unwrap().m(), 0);
        assert_eq!(random_graph(5, Family::Gnp(1.0), 1).unwrap().m(), 10);
        assert!(random_graph(5, Family::Gnp(1.5), 1).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        for fam in [
            Family::Gnp(0.3),
            Family::CyclesPlusChords,
            Family::PlantedCover(9),
        ] {
            let a = random_graph(30, fam, 7).unwrap();
            let b = random_graph(30, fam, 7).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn family_strings() {
        for s in ["gnp:0.25", "cycles", "planted:11"] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("gnp".parse::<Family>().is_err());
        assert!("tree:3".parse::<Family>().is_err());
    }
}
