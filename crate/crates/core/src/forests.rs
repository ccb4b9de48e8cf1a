//! Connected bi-partitions, spanning-tree and rooted-forest counts, and the
//! combinatorial routes to `diag(L⁺)` they provide.
//!
//! Everything here is exact integer arithmetic over unweighted graphs and is
//! exponential in `n`, so enumeration is capped at [`ENUMERATION_LIMIT`].

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{geodesics_from, is_connected, require_connected, Graph, NodeId};

pub const ENUMERATION_LIMIT: usize = 14;

/// Split of the nodes into two blocks that each induce a connected subgraph.
/// Canonical orientation: node 0 is in `s_nodes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiPartition {
    pub s_nodes: Vec<NodeId>,
    pub sprime_nodes: Vec<NodeId>,
    pub cut: Vec<(NodeId, NodeId)>,
    pub trees_s: u64,
    pub trees_sprime: u64,
}

impl BiPartition {
    pub fn contains_in_s(&self, i: NodeId) -> bool {
        self.s_nodes.binary_search(&i).is_ok()
    }

    /// `ε(F^{ii}_{n−2 | P})`: two-tree spanning forests along this partition
    /// with `i` a root, i.e. `|T(S)| |T(S′)|` times the size of the block
    /// not containing `i` (where the second root may sit).
    pub fn rooted_forests(&self, i: NodeId) -> u64 {
        let other = if self.contains_in_s(i) { self.sprime_nodes.len() } else { self.s_nodes.len() };
        self.trees_s * self.trees_sprime * other as u64
    }

    /// Contribution to `ε(F_{n−2})`: `|T(S)| |T(S′)| |V(S)| |V(S′)|`.
    pub fn forests(&self) -> u64 {
        self.trees_s * self.trees_sprime * (self.s_nodes.len() * self.sprime_nodes.len()) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestCensus {
    /// `ε(F_{n−1}) = n |T(G)|`.
    pub eps_n1: u64,
    /// `ε(F_{n−2})`.
    pub eps_n2: u64,
    /// `ε(F^{ii}_{n−2})` per node.
    pub eps_rooted: Vec<u64>,
}

fn require_unweighted(g: &Graph) -> Result<()> {
    if g.is_unweighted() {
        Ok(())
    } else {
        Err(Error::Weighted)
    }
}

fn require_small(g: &Graph) -> Result<()> {
    if g.node_count() > ENUMERATION_LIMIT {
        Err(Error::TooLarge { n: g.node_count(), limit: ENUMERATION_LIMIT })
    } else {
        Ok(())
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|a| m[i][k].checked_mul(m[k][j]).and_then(|b| a.checked_sub(b)))
                    .ok_or(Error::Overflow("computing a determinant"))?;
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Number of spanning trees via the Matrix-Tree theorem (exact; unweighted
/// graphs only). Disconnected graphs have none.
pub fn count_spanning_trees(g: &Graph) -> Result<u64> {
    require_unweighted(g)?;
    let n = g.node_count();
    if n == 0 {
        return Ok(0);
    }
    let reduced: Vec<Vec<i128>> = (0..n - 1)
        .map(|i| {
            (0..n - 1)
                .map(|j| if i == j { g.hop_degree(i) as i128 } else { -(g.has_edge(i, j) as i128) })
                .collect()
        })
        .collect();
    let det = bareiss_determinant(reduced)?;
    u64::try_from(det).map_err(|_| Error::Overflow("counting spanning trees"))
}

/// Total spanning-tree weight `Σ_T Π_{e∈T} w_e` for weighted graphs
/// (reduced-Laplacian determinant in floating point).
pub fn spanning_tree_weight(g: &Graph) -> f64 {
    let n = g.node_count();
    if n <= 1 {
        return n as f64;
    }
    if !is_connected(g) {
        return 0.0;
    }
    let l = g.laplacian();
    l.view((0, 0), (n - 1, n - 1)).into_owned().determinant()
}

fn neighbor_masks(g: &Graph) -> Vec<u32> {
    (0..g.node_count())
        .map(|i| g.neighbors(i).iter().fold(0u32, |m, &(k, _)| m | (1 << k)))
        .collect()
}

fn mask_connected(mask: u32, nbr: &[u32]) -> bool {
    if mask == 0 {
        return false;
    }
    let mut reached = mask & mask.wrapping_neg();
    loop {
        let mut grown = reached;
        let mut rest = reached;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grown |= nbr[v] & mask;
        }
        if grown == reached {
            return reached == mask;
        }
        reached = grown;
    }
}

fn mask_nodes(mask: u32) -> Vec<NodeId> {
    (0..32).filter(|&k| mask >> k & 1 == 1).collect()
}

/// Every connected bi-partition, each exactly once.
pub fn enumerate_bipartitions(g: &Graph) -> Result<Vec<BiPartition>> {
    require_small(g)?;
    require_unweighted(g)?;
    require_connected(g)?;
    let n = g.node_count();
    if n < 2 {
        return Ok(Vec::new());
    }
    let nbr = neighbor_masks(g);
    let full: u32 = (1u32 << n) - 1;
    let mut out = Vec::new();
    // subsets of {1..n-1} joined with node 0
    for rest in 0u32..(1u32 << (n - 1)) {
        let s = 1 | (rest << 1);
        let sp = full & !s;
        if sp == 0 || !mask_connected(s, &nbr) || !mask_connected(sp, &nbr) {
            continue;
        }
        let s_nodes = mask_nodes(s);
        let sprime_nodes = mask_nodes(sp);
        let cut = g
            .edges()
            .iter()
            .filter(|e| (s >> e.u & 1) != (s >> e.v & 1))
            .map(|e| (e.u, e.v))
            .collect();
        let trees_s = count_spanning_trees(&g.induced_subgraph(&s_nodes))?;
        let trees_sprime = count_spanning_trees(&g.induced_subgraph(&sprime_nodes))?;
        out.push(BiPartition { s_nodes, sprime_nodes, cut, trees_s, trees_sprime });
    }
    Ok(out)
}

fn checked_sum(mut values: impl Iterator<Item = u64>) -> Result<u64> {
    values.try_fold(0u64, |acc, x| acc.checked_add(x).ok_or(Error::Overflow("summing forest counts")))
}

pub fn forest_census(g: &Graph) -> Result<ForestCensus> {
    let parts = enumerate_bipartitions(g)?;
    forest_census_from(g, &parts)
}

pub fn forest_census_from(g: &Graph, parts: &[BiPartition]) -> Result<ForestCensus> {
    let n = g.node_count();
    let eps_n1 = count_spanning_trees(g)?
        .checked_mul(n as u64)
        .ok_or(Error::Overflow("counting spanning forests"))?;
    let eps_n2 = checked_sum(parts.iter().map(BiPartition::forests))?;
    let eps_rooted = (0..n)
        .map(|i| checked_sum(parts.iter().map(|p| p.rooted_forests(i))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ForestCensus { eps_n1, eps_n2, eps_rooted })
}

/// `l⁺_ii = (ε(F^{ii}_{n−2}) − ε(F_{n−2})/n) / ε(F_{n−1})` as exact rationals.
pub fn lplus_diag_rational(g: &Graph) -> Result<Vec<Ratio<i128>>> {
    let census = forest_census(g)?;
    let n = g.node_count() as i128;
    let den = n * census.eps_n1 as i128;
    Ok(census
        .eps_rooted
        .iter()
        .map(|&r| Ratio::new(n * r as i128 - census.eps_n2 as i128, den))
        .collect())
}

/// Forest-count route to `diag(L⁺)`.
pub fn lplus_diag_via_forests(g: &Graph) -> Result<Vec<f64>> {
    let census = forest_census(g)?;
    let n = g.node_count() as f64;
    Ok(census
        .eps_rooted
        .iter()
        .map(|&r| (r as f64 - census.eps_n2 as f64 / n) / census.eps_n1 as f64)
        .collect())
}

fn require_tree(t: &Graph) -> Result<()> {
    require_unweighted(t)?;
    let n = t.node_count();
    if n == 0 || t.edge_count() != n - 1 || !is_connected(t) {
        return Err(Error::NotATree(format!("{} nodes, {} edges, connected: {}", n, t.edge_count(), is_connected(t))));
    }
    Ok(())
}

/// On a tree, `l⁺_ii = (1/n²) Σ_e |V(S′_e)|²` where deleting edge `e`
/// leaves `i` in `S_e` and `S′_e` is the other side.
pub fn tree_centrality(t: &Graph) -> Result<Vec<f64>> {
    require_tree(t)?;
    let n = t.node_count();
    // preorder from root 0; subtree of v is the contiguous range [tin, tout)
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(c, _) in t.neighbors(v) {
            if parent[c] == usize::MAX {
                parent[c] = v;
                stack.push(c);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev().filter(|&&v| v != 0) {
        size[parent[v]] += size[v];
    }
    let mut tin = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        tin[v] = pos;
    }
    let in_subtree = |x: NodeId, root: NodeId| tin[x] >= tin[root] && tin[x] < tin[root] + size[root];
    let n2 = (n * n) as f64;
    Ok((0..n)
        .map(|i| {
            let total: usize = (1..n)
                .map(|c| {
                    let below = size[c];
                    let other = if in_subtree(i, c) { n - below } else { below };
                    other * other
                })
                .sum();
            total as f64 / n2
        })
        .collect())
}

/// Nodes minimizing total shortest-path distance; ties are all returned.
pub fn tree_center(t: &Graph) -> Result<Vec<NodeId>> {
    require_tree(t)?;
    let totals = tree_total_distances(t);
    let best = *totals.iter().min().expect("nonempty tree");
    Ok((0..t.node_count()).filter(|&i| totals[i] == best).collect())
}

/// `Σ_j SPD(i, j)` per node of a tree (hop counts).
pub fn tree_total_distances(t: &Graph) -> Vec<u64> {
    (0..t.node_count())
        .map(|i| geodesics_from(t, i).into_iter().map(|d| d as u64).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i128, b: i128) -> Ratio<i128> {
        Ratio::new(a, b)
    }

    #[test]
    fn spanning_tree_counts() {
        assert_eq!(count_spanning_trees(&Graph::path(3)).unwrap(), 1);
        assert_eq!(count_spanning_trees(&Graph::complete(3)).unwrap(), 3);
        assert_eq!(count_spanning_trees(&Graph::complete(4)).unwrap(), 16);
        assert_eq!(count_spanning_trees(&Graph::cycle(6)).unwrap(), 6);
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(count_spanning_trees(&g).unwrap(), 0);
        let w = Graph::from_edges(2, [(0, 1, 2.0)]).unwrap();
        assert_eq!(count_spanning_trees(&w), Err(Error::Weighted));
    }

    #[test]
    fn weighted_tree_weight() {
        // triangle: spanning trees are edge pairs, weight = Σ of pairwise products
        let g = Graph::from_edges(3, [(0, 1, 2.0), (1, 2, 3.0), (0, 2, 5.0)]).unwrap();
        assert!((spanning_tree_weight(&g) - (6.0 + 10.0 + 15.0)).abs() < 1e-9);
        assert!((spanning_tree_weight(&Graph::complete(5)) - 125.0).abs() < 1e-9);
    }

    #[test]
    fn bipartitions_of_small_graphs() {
        let p = enumerate_bipartitions(&Graph::path(3)).unwrap();
        let blocks: Vec<_> = p.iter().map(|b| (b.s_nodes.clone(), b.sprime_nodes.clone())).collect();
        assert_eq!(blocks, vec![(vec![0], vec![1, 2]), (vec![0, 1], vec![2])]);
        assert_eq!(p[0].cut, vec![(0, 1)]);
        assert_eq!(enumerate_bipartitions(&Graph::complete(3)).unwrap().len(), 3);
        assert_eq!(enumerate_bipartitions(&Graph::star(6)).unwrap().len(), 5);
        assert_eq!(enumerate_bipartitions(&Graph::path(15)), Err(Error::TooLarge { n: 15, limit: 14 }));
    }

    #[test]
    fn census_path_and_star() {
        let c = forest_census(&Graph::path(3)).unwrap();
        assert_eq!(c, ForestCensus { eps_n1: 3, eps_n2: 4, eps_rooted: vec![3, 2, 3] });
        let c = forest_census(&Graph::star(4)).unwrap();
        assert_eq!(c.eps_rooted[0], 3);
        assert_eq!(c.eps_rooted.iter().sum::<u64>(), 2 * c.eps_n2);
    }

    #[test]
    fn rational_diagonals() {
        assert_eq!(lplus_diag_rational(&Graph::path(3)).unwrap(), vec![r(5, 9), r(2, 9), r(5, 9)]);
        assert_eq!(lplus_diag_rational(&Graph::complete(3)).unwrap(), vec![r(2, 9); 3]);
        let s = lplus_diag_rational(&Graph::star(4)).unwrap();
        assert_eq!(s, vec![r(3, 16), r(11, 16), r(11, 16), r(11, 16)]);
        let p = lplus_diag_rational(&Graph::path(4)).unwrap();
        assert_eq!(p, vec![r(7, 8), r(3, 8), r(3, 8), r(7, 8)]);
    }

    #[test]
    fn tree_formulas() {
        let p4 = tree_centrality(&Graph::path(4)).unwrap();
        assert!((p4[0] - 7.0 / 8.0).abs() < 1e-12 && (p4[1] - 3.0 / 8.0).abs() < 1e-12);
        let s4 = tree_centrality(&Graph::star(4)).unwrap();
        assert!((s4[0] - 3.0 / 16.0).abs() < 1e-12);
        assert!((s4.iter().sum::<f64>() - 9.0 / 4.0).abs() < 1e-12);
        assert_eq!(tree_center(&Graph::path(3)).unwrap(), vec![1]);
        assert_eq!(tree_center(&Graph::path(4)).unwrap(), vec![1, 2]);
        assert_eq!(tree_center(&Graph::star(4)).unwrap(), vec![0]);
        assert!(matches!(tree_centrality(&Graph::cycle(4)), Err(Error::NotATree(_))));
        assert!(matches!(tree_center(&Graph::complete(3)), Err(Error::NotATree(_))));
    }

    #[test]
    fn per_partition_ratio() {
        for p in enumerate_bipartitions(&Graph::cycle(5)).unwrap() {
            let (i, j) = (p.s_nodes[0], p.sprime_nodes[0]);
            // ε_i / ε_j = |V(S′)| / |V(S)|
            assert_eq!(
                p.rooted_forests(i) * p.s_nodes.len() as u64,
                p.rooted_forests(j) * p.sprime_nodes.len() as u64
            );
        }
    }
}
