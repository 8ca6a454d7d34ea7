#![allow(dead_code)]

use kpp_core::generate::{random_graph, Family};
use kpp_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A short path or cycle with pendant 4- and 5-cycles hanging off it,
/// sometimes with extra chords to the center or to earlier cycles. Rich in 1- and 2-anchors.
pub fn satellite_graph(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = rng.gen_range(1..5usize);
    let mut edges: Vec<(usize, usize)> = (1..center).map(|i| (i - 1, i)).collect();
    if center >= 4 && rng.gen_bool(0.5) {
        edges.push((0, center - 1));
    }
    let mut n = center;
    for _ in 0..rng.gen_range(1..4usize) {
        let len = rng.gen_range(4..6usize);
        for i in 0..len {
            edges.push((n + i, n + (i + 1) % len));
        }
        edges.push((rng.gen_range(0..center), n + rng.gen_range(0..len)));
        if rng.gen_bool(0.4) {
            edges.push((rng.gen_range(0..center), n + rng.gen_range(0..len)));
        }
        if n > center && rng.gen_bool(0.3) {
            edges.push((rng.gen_range(center..n), n + rng.gen_range(0..len)));
        }
        n += len;
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Seeded connected graphs with `lo <= n <= hi`, alternating gnp and
/// planted_cover.
pub fn connected_instances(count: usize, lo: usize, hi: usize, salt: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(salt);
    let mut out = Vec::with_capacity(count);
    let mut seed = salt * 1_000_003;
    while out.len() < count {
        seed += 1;
        let n = rng.gen_range(lo..=hi);
        let fam = if out.len() % 2 == 0 {
            Family::Gnp(rng.gen_range(0.2..0.6))
        } else {
            Family::PlantedCover(rng.gen_range(2..=n.min(11)))
        };
        let g = random_graph(n, fam, seed).unwrap();
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}
