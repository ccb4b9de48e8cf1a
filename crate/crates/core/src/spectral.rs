//! Laplacian pseudo-inverse, Euclidean embedding, topological centrality and
//! the Kirchhoff index.
//!
//! Two independent routes produce `L⁺`:
//!
//! * rank correction: `L⁺ = (L + J/n)⁻¹ − J/n`, one Cholesky factorization;
//!   this is the value every accessor returns;
//! * symmetric eigen-decomposition: `L⁺ = U Λ⁺ Uᵀ`, kept for verification and
//!   for the embedding coordinates.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{require_connected, Graph, NodeId};

#[derive(Debug, Clone)]
pub struct SpectralBundle {
    laplacian: DMatrix<f64>,
    /// Descending; the last entry is the zero eigenvalue.
    eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    eigenvectors: DMatrix<f64>,
    lplus: DMatrix<f64>,
    lplus_eigen: DMatrix<f64>,
    /// Column `i` is the position vector `x_i`; `XᵀX = L⁺`.
    embedding: DMatrix<f64>,
    degrees: Vec<f64>,
    volume: f64,
}

/// Per-node topological centrality and the graph-level Kirchhoff index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessSummary {
    pub cstar: Vec<f64>,
    pub kirchhoff: f64,
    pub kstar: f64,
}

pub fn build_spectral(g: &Graph) -> Result<SpectralBundle> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    require_connected(g)?;
    let laplacian = g.laplacian();
    let lplus = rank_correction_pinv(&laplacian)?;

    let eig = SymmetricEigen::new(laplacian.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    // Connectivity is settled by BFS above, so exactly the last eigenpair is
    // the null space spanned by the constant vector.
    let mut lplus_eigen = DMatrix::zeros(n, n);
    let mut embedding = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        let lambda = eigenvalues[k];
        let u = eigenvectors.column(k);
        lplus_eigen += (u * u.transpose()) / lambda;
        let scale = lambda.sqrt().recip();
        for i in 0..n {
            embedding[(k, i)] = scale * u[i];
        }
    }
    let mut eigenvalues = eigenvalues;
    eigenvalues[n - 1] = 0.0;

    let dv = g.degrees();
    Ok(SpectralBundle {
        laplacian,
        eigenvalues,
        eigenvectors,
        lplus,
        lplus_eigen: symmetrize(lplus_eigen),
        embedding,
        degrees: dv.d,
        volume: dv.vol,
    })
}

/// `(L + J/n)⁻¹ − J/n` for the Laplacian of a connected graph.
pub fn rank_correction_pinv(laplacian: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = laplacian.nrows();
    let shift = 1.0 / n as f64;
    let shifted = laplacian.map(|x| x + shift);
    let inv = Cholesky::new(shifted)
        .ok_or_else(|| Error::Numerical("L + J/n is not positive definite".into()))?
        .inverse();
    Ok(symmetrize(inv.map(|x| x - shift)))
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

impl SpectralBundle {
    pub fn node_count(&self) -> usize {
        self.laplacian.nrows()
    }

    pub fn laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// `L⁺` from the rank-correction route.
    pub fn lplus(&self) -> &DMatrix<f64> {
        &self.lplus
    }

    /// `L⁺` from the eigen-decomposition route.
    pub fn lplus_eigen(&self) -> &DMatrix<f64> {
        &self.lplus_eigen
    }

    pub fn embedding(&self) -> &DMatrix<f64> {
        &self.embedding
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn lplus_diag(&self) -> Vec<f64> {
        self.lplus.diagonal().iter().copied().collect()
    }

    /// `l⁺_ii = Σ_j u_ij² / λ_j` over the nonzero spectrum.
    pub fn lplus_diag_spectral(&self) -> Vec<f64> {
        let n = self.node_count();
        (0..n)
            .map(|i| {
                (0..n - 1)
                    .map(|k| self.eigenvectors[(i, k)].powi(2) / self.eigenvalues[k])
                    .sum()
            })
            .collect()
    }

    /// Largest elementwise gap between the two `L⁺` routes.
    pub fn route_discrepancy(&self) -> f64 {
        (&self.lplus - &self.lplus_eigen).amax()
    }

    /// Relative residuals of `L L⁺ L = L` and `L⁺ L L⁺ = L⁺`.
    pub fn moore_penrose_residuals(&self) -> (f64, f64) {
        let l = &self.laplacian;
        let p = &self.lplus;
        let r1 = (l * p * l - l).amax() / l.amax().max(f64::MIN_POSITIVE);
        let r2 = (p * l * p - p).amax() / p.amax().max(f64::MIN_POSITIVE);
        (r1, r2)
    }

    /// Largest absolute row or column sum of `L⁺`.
    pub fn centering_residual(&self) -> f64 {
        let n = self.node_count();
        (0..n)
            .flat_map(|i| [self.lplus.row(i).sum().abs(), self.lplus.column(i).sum().abs()])
            .fold(0.0, f64::max)
    }

    /// Largest elementwise gap in `XᵀX = L⁺`.
    pub fn embedding_residual(&self) -> f64 {
        (self.embedding.transpose() * &self.embedding - &self.lplus).amax()
    }
}

/// `C*(i) = 1 / l⁺_ii`.
pub fn topological_centrality(b: &SpectralBundle) -> Vec<f64> {
    b.lplus_diag().into_iter().map(f64::recip).collect()
}

/// `(K, K*)` with `K = Tr(L⁺)` and `K* = 1/K`.
pub fn kirchhoff_index(b: &SpectralBundle) -> (f64, f64) {
    let k = b.lplus.trace();
    (k, k.recip())
}

/// `K = Σ 1/λ_i` over the nonzero Laplacian spectrum.
pub fn kirchhoff_spectral(b: &SpectralBundle) -> f64 {
    let n = b.node_count();
    b.eigenvalues[..n - 1].iter().map(|l| l.recip()).sum()
}

pub fn robustness_summary(b: &SpectralBundle) -> RobustnessSummary {
    let (kirchhoff, kstar) = kirchhoff_index(b);
    RobustnessSummary { cstar: topological_centrality(b), kirchhoff, kstar }
}

/// `Ω_ij = l⁺_ii + l⁺_jj − 2 l⁺_ij`.
pub fn effective_resistance(b: &SpectralBundle, i: NodeId, j: NodeId) -> f64 {
    let p = &b.lplus;
    if i == j {
        return 0.0;
    }
    p[(i, i)] + p[(j, j)] - 2.0 * p[(i, j)]
}

pub fn resistance_matrix(b: &SpectralBundle) -> DMatrix<f64> {
    let n = b.node_count();
    DMatrix::from_fn(n, n, |i, j| effective_resistance(b, i, j))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSpectral {
    pub id: NodeId,
    pub label: String,
    pub lplus_diag: f64,
    pub cstar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpectral {
    pub kirchhoff: f64,
    pub kstar: f64,
    pub eigenvalues: Vec<f64>,
    /// Always `"trace"`: `K = Tr(L⁺)`, not the `n·Tr(L⁺)` variant.
    pub kirchhoff_convention: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub nodes: Vec<NodeSpectral>,
    pub graph: GraphSpectral,
}

impl SpectralReport {
    pub fn new(g: &Graph, b: &SpectralBundle) -> Self {
        let diag = b.lplus_diag();
        let nodes = diag
            .iter()
            .enumerate()
            .map(|(id, &d)| NodeSpectral { id, label: g.label(id), lplus_diag: d, cstar: d.recip() })
            .collect();
        let (kirchhoff, kstar) = kirchhoff_index(b);
        SpectralReport {
            nodes,
            graph: GraphSpectral {
                kirchhoff,
                kstar,
                eigenvalues: b.eigenvalues().to_vec(),
                kirchhoff_convention: "trace".into(),
            },
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,label,lplus_diag,cstar\n");
        for n in &self.nodes {
            out.push_str(&format!("{},{},{},{}\n", n.id, n.label, n.lplus_diag, n.cstar));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    #[test]
    fn complete_graph_closed_form() {
        let b = build_spectral(&Graph::complete(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 2.0 / 9.0 } else { -1.0 / 9.0 };
                assert!(close(b.lplus()[(i, j)], want));
            }
        }
        assert!(topological_centrality(&b).iter().all(|&c| close(c, 4.5)));
        assert!(close(kirchhoff_index(&b).0, 2.0 / 3.0));
        assert!(close(effective_resistance(&b, 0, 2), 2.0 / 3.0));
    }

    #[test]
    fn path_three() {
        let b = build_spectral(&Graph::path(3)).unwrap();
        let d = b.lplus_diag();
        assert!(close(d[0], 5.0 / 9.0) && close(d[1], 2.0 / 9.0) && close(d[2], 5.0 / 9.0));
        assert!(close(b.lplus()[(0, 2)], -4.0 / 9.0));
        let ev = b.eigenvalues();
        assert!(close(ev[0], 3.0) && close(ev[1], 1.0) && ev[2] == 0.0);
        let c = topological_centrality(&b);
        assert!(close(c[1], 4.5) && close(c[0], 1.8));
        let (k, ks) = kirchhoff_index(&b);
        assert!(close(k, 4.0 / 3.0) && close(ks, 0.75));
        assert!(close(kirchhoff_spectral(&b), 4.0 / 3.0));
        assert!(close(effective_resistance(&b, 0, 2), 2.0));
    }

    #[test]
    fn star_and_long_path() {
        let b = build_spectral(&Graph::star(4)).unwrap();
        let c = topological_centrality(&b);
        assert!(close(c[0], 16.0 / 3.0));
        assert!(c[1..].iter().all(|&x| close(x, 16.0 / 11.0)));
        assert!(close(kirchhoff_index(&b).0, 9.0 / 4.0));
        let b = build_spectral(&Graph::path(4)).unwrap();
        assert!(close(effective_resistance(&b, 0, 3), 3.0));
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::unweighted(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        match build_spectral(&g) {
            Err(Error::Disconnected { second_component }) => assert_eq!(second_component, vec![3, 4]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_node() {
        let g = Graph::unweighted(1, []).unwrap();
        let b = build_spectral(&g).unwrap();
        assert_eq!(b.lplus()[(0, 0)], 0.0);
        assert_eq!(kirchhoff_index(&b).0, 0.0);
    }

    #[test]
    fn weighted_routes_agree() {
        let g = Graph::from_edges(4, [(0, 1, 2.0), (1, 2, 0.5), (2, 3, 3.0), (3, 0, 1.5), (0, 2, 0.25)]).unwrap();
        let b = build_spectral(&g).unwrap();
        assert!(b.route_discrepancy() < 1e-8);
        let (r1, r2) = b.moore_penrose_residuals();
        assert!(r1 < 1e-9 && r2 < 1e-9);
        assert!(b.centering_residual() < 1e-10);
        assert!(b.embedding_residual() < 1e-9);
        let d = b.lplus_diag_spectral();
        for (x, y) in d.iter().zip(b.lplus_diag()) {
            assert!(close(*x, y));
        }
    }

    #[test]
    fn report_serializes() {
        let g = Graph::path(3);
        let b = build_spectral(&g).unwrap();
        let r = SpectralReport::new(&g, &b);
        let js = serde_json::to_value(&r).unwrap();
        assert_eq!(js["graph"]["kirchhoff_convention"], "trace");
        assert_eq!(js["nodes"][1]["id"], 1);
        assert!(r.to_csv().starts_with("id,label,lplus_diag,cstar\n0,0,"));
    }
}
