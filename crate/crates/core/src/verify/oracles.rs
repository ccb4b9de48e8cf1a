//! Independent reference computations. None of these reuse the code path
//! they are compared against.

use nalgebra::{DMatrix, DVector};

use crate::graph::Graph;

/// `Σ_{k=0}^{terms−1} (A^k)_ii / k!` by repeated multiplication.
pub fn subgraph_centrality_series(g: &Graph, terms: usize) -> Vec<f64> {
    let n = g.node_count();
    let a = g.adjacency_matrix();
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut acc = vec![0.0; n];
    let mut factorial = 1.0;
    for k in 0..terms {
        if k > 0 {
            power = &power * &a;
            factorial *= k as f64;
        }
        for (i, slot) in acc.iter_mut().enumerate() {
            *slot += power[(i, i)] / factorial;
        }
    }
    acc
}

/// Random-walk betweenness from one grounded linear solve per pair, with no
/// use of the pseudo-inverse. Potentials are fixed by grounding `t`.
pub fn randomwalk_betweenness_by_solves(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let lap = g.laplacian();
    let mut total = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let keep: Vec<usize> = (0..n).filter(|&x| x != t).collect();
            let reduced = DMatrix::from_fn(n - 1, n - 1, |r, c| lap[(keep[r], keep[c])]);
            let rhs = DVector::from_iterator(n - 1, keep.iter().map(|&x| if x == s { 1.0 } else { 0.0 }));
            let sol = reduced.lu().solve(&rhs).expect("grounded Laplacian of a connected graph is invertible");
            let mut pot = vec![0.0; n];
            for (r, &x) in keep.iter().enumerate() {
                pot[x] = sol[r];
            }
            for v in (0..n).filter(|&v| v != s && v != t) {
                let flow: f64 = g.neighbors(v).iter().map(|&(k, w)| (w * (pot[v] - pot[k])).abs()).sum();
                total[v] += flow / 2.0;
            }
        }
    }
    let pairs = ((n - 1) * (n - 2) / 2) as f64;
    total.into_iter().map(|x| x / pairs).collect()
}

/// Kirchhoff index of a tree from geodesics: on trees `Ω = SPD`, so
/// `K = (1/n) Σ_{i<j} SPD(i, j)`.
pub fn tree_kirchhoff_from_distances(t: &Graph) -> f64 {
    let n = t.node_count();
    let total: f64 = (0..n)
        .map(|i| crate::graph::geodesics_from(t, i).iter().sum::<f64>())
        .sum();
    total / 2.0 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_on_single_edge() {
        let sc = subgraph_centrality_series(&Graph::path(2), 30);
        assert!((sc[0] - 1f64.cosh()).abs() < 1e-15);
    }

    #[test]
    fn solves_on_path() {
        let rb = randomwalk_betweenness_by_solves(&Graph::path(3));
        assert!((rb[1] - 1.0).abs() < 1e-12 && rb[0].abs() < 1e-12);
    }

    #[test]
    fn star_kirchhoff() {
        assert!((tree_kirchhoff_from_distances(&Graph::star(4)) - 9.0 / 4.0).abs() < 1e-15);
    }
}
