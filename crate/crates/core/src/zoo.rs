//! Comparison indices: degree, geodesic closeness and betweenness, subgraph
//! centrality, random-walk (current-flow) betweenness and the Randić index.

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{geodesics_from, require_connected, Graph};
use crate::spectral::{build_spectral, kirchhoff_index, topological_centrality, SpectralBundle};

/// Relative tolerance for treating two weighted path lengths as equal.
const LENGTH_EPS: f64 = 1e-12;

/// `GC(i) = (n − 1) / Σ_{j≠i} SPD(i, j)`.
pub fn geodesic_closeness(g: &Graph) -> Result<Vec<f64>> {
    require_connected(g)?;
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidArgument("closeness needs at least two nodes".into()));
    }
    Ok((0..n)
        .map(|i| (n - 1) as f64 / geodesics_from(g, i).iter().sum::<f64>())
        .collect())
}

/// Freeman betweenness, unnormalized: `Σ_{s<t, s≠v≠t} σ_st(v) / σ_st`.
/// Brandes accumulation; weighted graphs use `1/w` edge lengths.
pub fn geodesic_betweenness(g: &Graph) -> Result<Vec<f64>> {
    require_connected(g)?;
    let n = g.node_count();
    let mut bc = vec![0.0; n];
    let unweighted = g.is_unweighted();
    for s in 0..n {
        let dist = geodesics_from(g, s);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let on_geodesic = |x: usize, y: usize, w: f64| {
            let len = if unweighted { 1.0 } else { 1.0 / w };
            let want = dist[x] + len;
            (dist[y] - want).abs() <= LENGTH_EPS * want.max(1.0)
        };
        let mut sigma = vec![0.0f64; n];
        sigma[s] = 1.0;
        for &x in &order {
            for &(y, w) in g.neighbors(x) {
                if on_geodesic(x, y, w) {
                    sigma[y] += sigma[x];
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        for &y in order.iter().rev() {
            for &(x, w) in g.neighbors(y) {
                if on_geodesic(x, y, w) {
                    delta[x] += sigma[x] / sigma[y] * (1.0 + delta[y]);
                }
            }
            if y != s {
                bc[y] += delta[y];
            }
        }
    }
    // each unordered pair was counted from both ends
    Ok(bc.into_iter().map(|x| x / 2.0).collect())
}

/// `SC(i) = Σ_k (A^k)_ii / k! = Σ_j u_ij² e^{μ_j}` over adjacency eigenpairs.
pub fn subgraph_centrality(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let eig = SymmetricEigen::new(g.adjacency_matrix());
    (0..n)
        .map(|i| (0..n).map(|j| eig.eigenvectors[(i, j)].powi(2) * eig.eigenvalues[j].exp()).sum())
        .collect()
}

/// Newman's random-walk betweenness: for each unordered pair `s < t` a unit
/// current enters at `s` and leaves at `t`; the throughflow of `v` is half
/// the sum of absolute currents on its incident edges. `RB(v)` averages the
/// throughflow over the `(n−1)(n−2)/2` pairs that do not contain `v`.
pub fn randomwalk_betweenness(g: &Graph, b: &SpectralBundle) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let p = b.lplus();
    let mut total = vec![0.0; n];
    let mut through = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            through.iter_mut().for_each(|x| *x = 0.0);
            for e in g.edges() {
                let pot_u = p[(e.u, s)] - p[(e.u, t)];
                let pot_v = p[(e.v, s)] - p[(e.v, t)];
                let current = (e.w * (pot_u - pot_v)).abs();
                through[e.u] += current;
                through[e.v] += current;
            }
            for v in 0..n {
                if v != s && v != t {
                    total[v] += through[v] / 2.0;
                }
            }
        }
    }
    let pairs = ((n - 1) * (n - 2) / 2) as f64;
    total.into_iter().map(|x| x / pairs).collect()
}

/// `R₁(G) = Σ_{e_ij} d(i) d(j)` with generalized degrees.
pub fn randic_index(g: &Graph) -> f64 {
    let d = g.degrees().d;
    g.edges().iter().map(|e| d[e.u] * d[e.v]).sum()
}

/// Divides by the maximum. A vector whose maximum is not positive is
/// returned unchanged.
pub fn max_normalize(values: &[f64]) -> Vec<f64> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        values.iter().map(|x| x / max).collect()
    } else {
        values.to_vec()
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexVectors {
    pub degree: Vec<f64>,
    pub gc: Vec<f64>,
    pub sc: Vec<f64>,
    pub gb: Vec<f64>,
    pub rb: Vec<f64>,
    pub cstar: Vec<f64>,
}

impl IndexVectors {
    pub fn map(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        IndexVectors {
            degree: f(&self.degree),
            gc: f(&self.gc),
            sc: f(&self.sc),
            gb: f(&self.gb),
            rb: f(&self.rb),
            cstar: f(&self.cstar),
        }
    }

    pub fn by_name(&self, name: &str) -> Option<&[f64]> {
        Some(match name {
            "degree" => &self.degree,
            "gc" => &self.gc,
            "sc" => &self.sc,
            "gb" => &self.gb,
            "rb" => &self.rb,
            "cstar" => &self.cstar,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub degree: f64,
    pub gc: f64,
    pub sc: f64,
    pub gb: f64,
    pub rb: f64,
    pub cstar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityReport {
    pub labels: Vec<String>,
    pub raw: IndexVectors,
    pub max_normalized: IndexVectors,
    pub averages: Averages,
    pub kirchhoff: f64,
    pub kstar: f64,
    pub randic: f64,
}

pub fn centrality_report(g: &Graph) -> Result<CentralityReport> {
    let b = build_spectral(g)?;
    centrality_report_with(g, &b)
}

pub fn centrality_report_with(g: &Graph, b: &SpectralBundle) -> Result<CentralityReport> {
    let raw = IndexVectors {
        degree: g.degrees().d,
        gc: geodesic_closeness(g)?,
        sc: subgraph_centrality(g),
        gb: geodesic_betweenness(g)?,
        rb: randomwalk_betweenness(g, b),
        cstar: topological_centrality(b),
    };
    let averages = Averages {
        degree: mean(&raw.degree),
        gc: mean(&raw.gc),
        sc: mean(&raw.sc),
        gb: mean(&raw.gb),
        rb: mean(&raw.rb),
        cstar: mean(&raw.cstar),
    };
    let (kirchhoff, kstar) = kirchhoff_index(b);
    Ok(CentralityReport {
        labels: (0..g.node_count()).map(|i| g.label(i)).collect(),
        max_normalized: raw.map(max_normalize),
        raw,
        averages,
        kirchhoff,
        kstar,
        randic: randic_index(g),
    })
}

impl CentralityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "node,degree,GC,SC,GB,RB,C*,degree_norm,GC_norm,SC_norm,GB_norm,RB_norm,C*_norm\n",
        );
        let (r, m) = (&self.raw, &self.max_normalized);
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                label, r.degree[i], r.gc[i], r.sc[i], r.gb[i], r.rb[i], r.cstar[i],
                m.degree[i], m.gc[i], m.sc[i], m.gb[i], m.rb[i], m.cstar[i],
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn all_close(v: &[f64], want: f64) -> bool {
        v.iter().all(|x| (x - want).abs() < TOL)
    }

    #[test]
    fn closeness() {
        let gc = geodesic_closeness(&Graph::path(3)).unwrap();
        assert!((gc[1] - 1.0).abs() < TOL && (gc[0] - 2.0 / 3.0).abs() < TOL);
        assert!(all_close(&geodesic_closeness(&Graph::complete(5)).unwrap(), 1.0));
        assert!((geodesic_closeness(&Graph::path(4)).unwrap()[0] - 0.5).abs() < TOL);
    }

    #[test]
    fn betweenness() {
        let gb = geodesic_betweenness(&Graph::path(3)).unwrap();
        assert_eq!(gb, vec![0.0, 1.0, 0.0]);
        assert!(all_close(&geodesic_betweenness(&Graph::complete(4)).unwrap(), 0.0));
        // C4: each node sits on one of the two geodesics of the opposite pair
        assert!(all_close(&geodesic_betweenness(&Graph::cycle(4)).unwrap(), 0.5));
        let star = geodesic_betweenness(&Graph::star(5)).unwrap();
        assert_eq!(star[0], 6.0);
    }

    #[test]
    fn subgraph() {
        let e = std::f64::consts::E;
        assert!(all_close(&subgraph_centrality(&Graph::complete(3)), (e * e + 2.0 / e) / 3.0));
        assert!((subgraph_centrality(&Graph::path(3))[1] - 2f64.sqrt().cosh()).abs() < TOL);
        assert!(all_close(&subgraph_centrality(&Graph::path(2)), 1f64.cosh()));
    }

    #[test]
    fn random_walk_betweenness() {
        let g = Graph::path(3);
        let rb = randomwalk_betweenness(&g, &build_spectral(&g).unwrap());
        assert!((rb[1] - 1.0).abs() < TOL && rb[0].abs() < TOL && rb[2].abs() < TOL);
        let g = Graph::complete(3);
        let rb = randomwalk_betweenness(&g, &build_spectral(&g).unwrap());
        // a third of the unit current detours through the non-terminal node
        assert!(all_close(&rb, 1.0 / 3.0));
    }

    #[test]
    fn randic() {
        assert_eq!(randic_index(&Graph::path(3)), 4.0);
        assert_eq!(randic_index(&Graph::complete(3)), 12.0);
        assert_eq!(randic_index(&Graph::path(2)), 1.0);
    }

    #[test]
    fn report_normalization() {
        let r = centrality_report(&Graph::path(5)).unwrap();
        for name in ["degree", "gc", "sc", "gb", "rb", "cstar"] {
            let v = r.max_normalized.by_name(name).unwrap();
            assert!((v.iter().copied().fold(f64::MIN, f64::max) - 1.0).abs() < 1e-15, "{name}");
        }
        assert!((r.averages.cstar - r.raw.cstar.iter().sum::<f64>() / 5.0).abs() < 1e-12);
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 6);
        assert!(max_normalize(&[0.0, 0.0]).iter().all(|&x| x == 0.0));
    }
}
