//! Seeded benchmark fixtures shared by the criterion benches.

use kpp_core::generate::{random_graph, Family};
use kpp_core::Graph;

/// Sparse random graph with average degree about `degree`.
pub fn sparse(n: usize, degree: f64, seed: u64) -> Graph {
    random_graph(n, Family::Gnp(degree / n as f64), seed).expect("n >= 1")
}

/// Graph built around a planted partition into `k`-paths.
pub fn planted(n: usize, k: usize, seed: u64) -> Graph {
    random_graph(n, Family::PlantedCover(k), seed).expect("n >= 1")
}

/// Disjoint short cycles with sparse chords; rich in satellites.
pub fn cycles(n: usize, seed: u64) -> Graph {
    random_graph(n, Family::CyclesPlusChords, seed).expect("n >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(sparse(50, 4.0, 1), sparse(50, 4.0, 1));
        assert_eq!(planted(30, 9, 2).n(), 30);
        assert_eq!(cycles(30, 3).n(), 30);
    }
}
