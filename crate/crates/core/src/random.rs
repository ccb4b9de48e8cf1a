//! Seeded instance generators shared by the verification suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{is_connected, Graph};

/// SplitMix64 finalizer applied to `seed + stream * golden`.
pub fn splitmix64(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed, stream))
}

/// Erdős–Rényi `G(n, p)` resampled until connected.
pub fn connected_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::unweighted(n, edges).expect("simple by construction");
        if is_connected(&g) {
            return g;
        }
    }
}

/// Connected `G(n, p)` with independent weights drawn from `[lo, hi)`.
pub fn connected_weighted_gnp<R: Rng>(n: usize, p: f64, lo: f64, hi: f64, rng: &mut R) -> Graph {
    let g = connected_gnp(n, p, rng);
    let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, rng.gen_range(lo..hi))).collect();
    Graph::from_edges(n, edges).expect("simple by construction")
}

/// Decodes a Prüfer sequence of length `n - 2` into a labelled tree.
pub fn tree_from_prufer(seq: &[usize]) -> Graph {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&k| degree[k] == 1).expect("a leaf always exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&k| degree[k] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::unweighted(n, edges).expect("Prüfer decoding yields a tree")
}

/// Uniformly random labelled tree on `n >= 2` nodes.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    assert!(n >= 2);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    tree_from_prufer(&seq)
}

/// Every Prüfer sequence for trees on `n >= 2` nodes, in lexicographic order.
pub fn all_prufer_sequences(n: usize) -> impl Iterator<Item = Vec<usize>> {
    assert!(n >= 2);
    let len = n - 2;
    let total = (n as u64).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut seq = vec![0; len];
        for slot in seq.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        seq
    })
}

/// Every connected labelled simple graph on `n` nodes (edge-subset
/// enumeration of `K_n`; keep `n <= 7`).
pub fn all_connected_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    assert!(pairs.len() < 32, "edge-subset enumeration limited to n <= 8");
    (0u32..(1u32 << pairs.len())).filter_map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p);
        let g = Graph::unweighted(n, edges).expect("simple by construction");
        is_connected(&g).then_some(g)
    })
}
