//! Random-walk quantities: exact hitting and commute times, detour
//! overheads, and a seeded Monte Carlo walk simulator.
//!
//! The walk moves from `i` to a neighbour `k` with probability `a_ik / d(i)`.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{require_connected, Graph, NodeId};
use crate::random::rng_for;
use crate::spectral::{kirchhoff_index, SpectralBundle};

/// Exact hitting times `H(i, j)` and commute times `C(i, j) = H(i, j) + H(j, i)`.
#[derive(Debug, Clone)]
pub struct HittingTable {
    pub hitting: DMatrix<f64>,
    pub commute: DMatrix<f64>,
}

impl HittingTable {
    pub fn node_count(&self) -> usize {
        self.hitting.nrows()
    }
}

/// First-step analysis: for each target `j`, solve `h_i = 1 + Σ_k p_ik h_k`
/// over `i ≠ j` with `h_j = 0`. Multiplying through by `d(i)` gives the
/// grounded Laplacian system `L_{−j} h = d_{−j}`, which is positive definite
/// on a connected graph.
pub fn hitting_times_exact(g: &Graph) -> Result<HittingTable> {
    require_connected(g)?;
    let n = g.node_count();
    let lap = g.laplacian();
    let deg = g.degrees().d;
    let mut hitting = DMatrix::zeros(n, n);
    for target in 0..n {
        if n == 1 {
            break;
        }
        let keep: Vec<usize> = (0..n).filter(|&x| x != target).collect();
        let reduced = DMatrix::from_fn(n - 1, n - 1, |r, c| lap[(keep[r], keep[c])]);
        let rhs = DVector::from_iterator(n - 1, keep.iter().map(|&x| deg[x]));
        let h = Cholesky::new(reduced)
            .ok_or_else(|| Error::Numerical("grounded Laplacian is not positive definite".into()))?
            .solve(&rhs);
        for (r, &src) in keep.iter().enumerate() {
            hitting[(src, target)] = h[r];
        }
    }
    let commute = &hitting + hitting.transpose();
    Ok(HittingTable { hitting, commute })
}

/// `ΔH^{i→k→j} = H(i,k) + H(k,j) − H(i,j)`.
pub fn detour_overhead(ht: &HittingTable, i: NodeId, k: NodeId, j: NodeId) -> f64 {
    let h = &ht.hitting;
    h[(i, k)] + h[(k, j)] - h[(i, j)]
}

/// The same overhead through commute times: `(C(i,k) + C(k,j) − C(i,j)) / 2`.
pub fn detour_overhead_commute(ht: &HittingTable, i: NodeId, k: NodeId, j: NodeId) -> f64 {
    let c = &ht.commute;
    (c[(i, k)] + c[(k, j)] - c[(i, j)]) / 2.0
}

/// Average detour overhead through `k` next to the diagonal entry it should equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageDetour {
    /// `(1 / (n² Vol)) Σ_i Σ_j ΔH^{i→k→j}` over all ordered pairs, `i = j` included.
    pub double_sum: f64,
    pub lplus_kk: f64,
}

impl AverageDetour {
    pub fn residual(&self) -> f64 {
        (self.double_sum - self.lplus_kk).abs()
    }
}

pub fn average_detour_overhead(ht: &HittingTable, b: &SpectralBundle, k: NodeId) -> AverageDetour {
    let n = ht.node_count();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += detour_overhead(ht, i, k, j);
        }
    }
    AverageDetour {
        double_sum: total / ((n * n) as f64 * b.volume()),
        lplus_kk: b.lplus()[(k, k)],
    }
}

/// `Σ_j C(k, j)` from the commute table versus `Vol · (n l⁺_kk + Tr L⁺)`.
pub fn commute_row_sum_identity(ht: &HittingTable, b: &SpectralBundle, k: NodeId) -> (f64, f64) {
    let n = ht.node_count();
    let lhs = ht.commute.row(k).sum();
    let (trace, _) = kirchhoff_index(b);
    let rhs = b.volume() * (n as f64 * b.lplus()[(k, k)] + trace);
    (lhs, rhs)
}

/// Kirchhoff index recovered from commute times: `ΣΣ C / (2 n Vol)`.
pub fn kirchhoff_from_commute(ht: &HittingTable, volume: f64) -> f64 {
    ht.commute.sum() / (2.0 * ht.node_count() as f64 * volume)
}

/// Monte Carlo estimate of a walk statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√runs`.
    pub std_error: f64,
    pub runs: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub step_cap: u64,
    /// `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { step_cap: 10_000_000, workers: None }
    }
}

/// Neighbour sampler proportional to edge weight.
struct Sampler<'a> {
    g: &'a Graph,
    cumulative: Vec<Vec<f64>>,
    unweighted: bool,
}

impl<'a> Sampler<'a> {
    fn new(g: &'a Graph) -> Self {
        let cumulative = (0..g.node_count())
            .map(|i| {
                let mut acc = 0.0;
                g.neighbors(i)
                    .iter()
                    .map(|&(_, w)| {
                        acc += w;
                        acc
                    })
                    .collect()
            })
            .collect();
        Sampler { g, cumulative, unweighted: g.is_unweighted() }
    }

    fn step<R: Rng>(&self, at: NodeId, rng: &mut R) -> NodeId {
        let nb = self.g.neighbors(at);
        if self.unweighted {
            return nb[rng.gen_range(0..nb.len())].0;
        }
        let cum = &self.cumulative[at];
        let x = rng.gen::<f64>() * cum[cum.len() - 1];
        let pos = cum.partition_point(|&c| c <= x).min(nb.len() - 1);
        nb[pos].0
    }

    /// Walks from `from` until `to`; returns (steps, visits to `watch`
    /// counting the start).
    fn walk<R: Rng>(&self, from: NodeId, to: NodeId, watch: NodeId, cap: u64, rng: &mut R) -> Result<(u64, u64)> {
        let mut at = from;
        let mut steps = 0u64;
        let mut visits = u64::from(from == watch && from != to);
        while at != to {
            if steps >= cap {
                return Err(Error::StepCapExceeded { cap });
            }
            at = self.step(at, rng);
            steps += 1;
            if at == watch && at != to {
                visits += 1;
            }
        }
        Ok((steps, visits))
    }
}

fn check_walk_args(g: &Graph, i: NodeId, j: NodeId, runs: u64) -> Result<()> {
    g.check_node(i)?;
    g.check_node(j)?;
    require_connected(g)?;
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    Ok(())
}

/// Runs `runs` independent walks; run `r` draws from a generator seeded by
/// `splitmix(seed, r)`, so the outcome does not depend on the worker count.
fn simulate(
    g: &Graph,
    i: NodeId,
    j: NodeId,
    watch: NodeId,
    runs: u64,
    seed: u64,
    opts: McOptions,
) -> Result<Vec<(u64, u64)>> {
    let sampler = Sampler::new(g);
    let job = || {
        (0..runs)
            .into_par_iter()
            .map(|r| sampler.walk(i, j, watch, opts.step_cap, &mut rng_for(seed, r)))
            .collect::<Result<Vec<_>>>()
    };
    match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(job),
        None => job(),
    }
}

/// Welford accumulation in run-index order.
fn summarize(samples: impl Iterator<Item = u64>, runs: u64, seed: u64) -> WalkEstimate {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (count, x) in samples.enumerate() {
        let x = x as f64;
        let delta = x - mean;
        mean += delta / (count + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = if runs > 1 { m2 / (runs - 1) as f64 } else { 0.0 };
    WalkEstimate { mean, std_error: (var / runs as f64).sqrt(), runs, seed }
}

pub fn estimate_hitting_mc(g: &Graph, i: NodeId, j: NodeId, runs: u64, seed: u64) -> Result<WalkEstimate> {
    estimate_hitting_mc_with(g, i, j, runs, seed, McOptions::default())
}

pub fn estimate_hitting_mc_with(
    g: &Graph,
    i: NodeId,
    j: NodeId,
    runs: u64,
    seed: u64,
    opts: McOptions,
) -> Result<WalkEstimate> {
    check_walk_args(g, i, j, runs)?;
    let out = simulate(g, i, j, i, runs, seed, opts)?;
    Ok(summarize(out.into_iter().map(|(s, _)| s), runs, seed))
}

/// Expected number of visits to `k` (the start counts) by the walk `i → j`
/// before it stops at `j`.
pub fn estimate_visits_mc(
    g: &Graph,
    i: NodeId,
    j: NodeId,
    k: NodeId,
    runs: u64,
    seed: u64,
    opts: McOptions,
) -> Result<WalkEstimate> {
    check_walk_args(g, i, j, runs)?;
    g.check_node(k)?;
    let out = simulate(g, i, j, k, runs, seed, opts)?;
    Ok(summarize(out.into_iter().map(|(_, v)| v), runs, seed))
}

/// Which degree the dense-regime hitting approximation divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeConvention {
    /// `H_ij ≈ Vol / d(i)`.
    #[default]
    SourceDegree,
    /// `H_ij ≈ Vol / d(j)`.
    TargetDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenseApprox {
    pub hitting: f64,
    /// `Vol · (1/d(i) + 1/d(j))`.
    pub commute: f64,
    pub convention: DegreeConvention,
    /// Always true: only meaningful for dense graphs.
    pub heuristic: bool,
}

pub fn approx_hitting_dense(g: &Graph, i: NodeId, j: NodeId, convention: DegreeConvention) -> Result<DenseApprox> {
    g.check_node(i)?;
    g.check_node(j)?;
    let dv = g.degrees();
    let (di, dj) = (dv.d[i], dv.d[j]);
    if di == 0.0 || dj == 0.0 {
        return Err(Error::InvalidArgument("isolated node has no hitting approximation".into()));
    }
    let hitting = match convention {
        DegreeConvention::SourceDegree => dv.vol / di,
        DegreeConvention::TargetDegree => dv.vol / dj,
    };
    Ok(DenseApprox { hitting, commute: dv.vol * (di.recip() + dj.recip()), convention, heuristic: true })
}
