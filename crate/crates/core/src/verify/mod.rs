//! Self-contained verification suites. Each suite generates its own seeded
//! instances, compares two independent routes to the same quantity, and
//! reports the worst residual together with the first failing instance (as
//! an edge list) for replay.

pub mod oracles;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::electrical::{kcl_residual, recurrence_overhead, verify_circuit_identities, voltage_at, voltages};
use crate::experiments::{
    gen_core_gateway, pert_preset, sensitivity_report, Direction, Pert, TopologySpec, REFERENCE_DELTA_KSTAR_PERT1,
    REFERENCE_DELTA_KSTAR_PERT2, REFERENCE_DELTA_R1_PERT1,
};
use crate::forests::{enumerate_bipartitions, forest_census_from, lplus_diag_via_forests, tree_center, tree_centrality};
use crate::graph::{is_connected, shortest_path_distances, Graph};
use crate::random::{
    all_connected_graphs, all_prufer_sequences, connected_gnp, connected_weighted_gnp, random_tree, rng_for,
    tree_from_prufer,
};
use crate::spectral::{
    build_spectral, kirchhoff_index, kirchhoff_spectral, rank_correction_pinv, resistance_matrix,
    topological_centrality, SpectralBundle,
};
use crate::walks::{
    average_detour_overhead, commute_row_sum_identity, detour_overhead, detour_overhead_commute,
    estimate_hitting_mc_with, estimate_visits_mc, hitting_times_exact, kirchhoff_from_commute, McOptions,
};
use crate::zoo::{
    centrality_report, geodesic_betweenness, geodesic_closeness, max_normalize, randomwalk_betweenness,
    subgraph_centrality,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Spectral,
    Detour,
    Commute,
    Circuit,
    Forests,
    Trees,
    MonteCarlo,
    Extremal,
    Zoo,
    Perturbation,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Spectral,
        Suite::Detour,
        Suite::Commute,
        Suite::Circuit,
        Suite::Forests,
        Suite::Trees,
        Suite::MonteCarlo,
        Suite::Extremal,
        Suite::Zoo,
        Suite::Perturbation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectral => "spectral",
            Suite::Detour => "detour",
            Suite::Commute => "commute",
            Suite::Circuit => "circuit",
            Suite::Forests => "forests",
            Suite::Trees => "trees",
            Suite::MonteCarlo => "montecarlo",
            Suite::Extremal => "extremal",
            Suite::Zoo => "zoo",
            Suite::Perturbation => "perturbation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let canonical = match s {
            "theorem1" => "detour",
            "theorem2" => "circuit",
            "table1" => "perturbation",
            other => other,
        };
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == canonical)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}`; expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replaces every residual tolerance when set.
    pub tolerance: Option<f64>,
    /// Upper bound on random instance size; suites keep their own caps.
    pub max_n: Option<usize>,
    pub runs: u64,
    pub only: Option<Suite>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 42, tolerance: None, max_n: None, runs: 100_000, only: None }
    }
}

impl VerifyConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    fn cap(&self, default: usize) -> usize {
        self.max_n.map_or(default, |m| m.min(default).max(3))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub instances: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Edge list of the first instance over tolerance.
    pub failing_instance: Option<String>,
    pub note: Option<String>,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {}.{} instances={} max_residual={:.3e} tol={:.0e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.instances,
            self.max_residual,
            self.tolerance
        );
        if let Some(note) = &self.note {
            s.push_str("  # ");
            s.push_str(note);
        }
        s
    }
}

/// Running maximum of a residual over instances.
struct Check {
    suite: Suite,
    name: String,
    tol: f64,
    instances: usize,
    max: f64,
    failing: Option<String>,
    note: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: &str, tol: f64) -> Self {
        Check { suite, name: name.into(), tol, instances: 0, max: 0.0, failing: None, note: None }
    }

    fn record(&mut self, g: &Graph, residual: f64) {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.max = self.max.max(residual);
        if residual > self.tol && self.failing.is_none() {
            self.failing = Some(g.to_edge_list());
        }
    }

    fn record_bool(&mut self, g: &Graph, ok: bool) {
        self.record(g, if ok { 0.0 } else { 1.0 });
    }

    fn instance(&mut self) {
        self.instances += 1;
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            suite: self.suite,
            name: self.name,
            instances: self.instances,
            max_residual: self.max,
            tolerance: self.tol,
            passed: self.max <= self.tol,
            failing_instance: self.failing,
            note: self.note,
        }
    }
}

pub fn run(cfg: &VerifyConfig) -> Vec<CheckResult> {
    match cfg.only {
        Some(s) => run_suite(s, cfg),
        None => Suite::ALL.iter().flat_map(|&s| run_suite(s, cfg)).collect(),
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckResult> {
    match suite {
        Suite::Spectral => spectral_suite(cfg),
        Suite::Detour => detour_suite(cfg),
        Suite::Commute => commute_suite(cfg),
        Suite::Circuit => circuit_suite(cfg),
        Suite::Forests => forests_suite(cfg),
        Suite::Trees => trees_suite(cfg),
        Suite::MonteCarlo => montecarlo_suite(cfg),
        Suite::Extremal => extremal_suite(cfg),
        Suite::Zoo => zoo_suite(cfg),
        Suite::Perturbation => perturbation_suite(cfg),
    }
}

/// `count` connected `G(n, p)` graphs with `n` uniform in `[lo, hi]`.
pub fn random_instances(seed: u64, stream: u64, count: usize, lo: usize, hi: usize, p: f64) -> Vec<Graph> {
    let mut rng = rng_for(seed, stream);
    (0..count).map(|_| connected_gnp(rng.gen_range(lo..=hi), p, &mut rng)).collect()
}

fn weighted_instances(seed: u64, stream: u64, count: usize, lo: usize, hi: usize) -> Vec<Graph> {
    let mut rng = rng_for(seed, stream);
    (0..count)
        .map(|_| connected_weighted_gnp(rng.gen_range(lo..=hi), 0.4, 0.2, 5.0, &mut rng))
        .collect()
}

/// Connected graphs on at most `hi` nodes with a uniformly random edge
/// subset of `K_n`.
pub fn random_edge_subset_graphs(seed: u64, stream: u64, count: usize, hi: usize) -> Vec<Graph> {
    let mut rng = rng_for(seed, stream);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=hi);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        let g = Graph::unweighted(n, edges).expect("simple");
        if is_connected(&g) {
            out.push(g);
        }
    }
    out
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn argmax_set(v: &[f64], rel: f64) -> Vec<usize> {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..v.len()).filter(|&i| v[i] >= m - rel * m.abs().max(1.0)).collect()
}

fn argmin_set(v: &[f64], rel: f64) -> Vec<usize> {
    let m = v.iter().copied().fold(f64::INFINITY, f64::min);
    (0..v.len()).filter(|&i| v[i] <= m + rel * m.abs().max(1.0)).collect()
}

/// Spectral self-consistency on every instance the other suites use.
fn check_bundle(checks: &mut [Check; 6], g: &Graph, b: &SpectralBundle) {
    let (r1, r2) = b.moore_penrose_residuals();
    let (k, _) = kirchhoff_index(b);
    let inv_sum: f64 = topological_centrality(b).iter().map(|c| c.recip()).sum();
    let residuals = [
        b.route_discrepancy(),
        r1.max(r2),
        b.centering_residual(),
        b.embedding_residual(),
        max_abs_diff(&b.lplus_diag_spectral(), &b.lplus_diag()),
        (k - kirchhoff_spectral(b)).abs().max((k - inv_sum).abs()),
    ];
    for (c, r) in checks.iter_mut().zip(residuals) {
        c.instance();
        c.record(g, r);
    }
}

fn spectral_checks(cfg: &VerifyConfig) -> [Check; 6] {
    let s = Suite::Spectral;
    [
        Check::new(s, "routes_agree", cfg.tol(1e-8)),
        Check::new(s, "moore_penrose", cfg.tol(1e-9)),
        Check::new(s, "double_centering", cfg.tol(1e-10)),
        Check::new(s, "embedding_gram", cfg.tol(1e-9)),
        Check::new(s, "diag_spectral_form", cfg.tol(1e-9)),
        Check::new(s, "kirchhoff_routes", cfg.tol(1e-9)),
    ]
}

fn spectral_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let hi = cfg.cap(12);
    let mut checks = spectral_checks(cfg);
    let mut triangle = Check::new(Suite::Spectral, "resistance_triangle", cfg.tol(1e-9));
    let graphs = random_instances(cfg.seed, 1, 100, 4, hi, 0.4)
        .into_iter()
        .chain(weighted_instances(cfg.seed, 2, 30, 4, hi));
    for g in graphs {
        let b = build_spectral(&g).expect("connected instance");
        check_bundle(&mut checks, &g, &b);
        if g.node_count() <= 10 {
            triangle.instance();
            let om = resistance_matrix(&b);
            let n = g.node_count();
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        worst = worst.max(om[(i, j)] - om[(i, k)] - om[(k, j)]);
                    }
                }
            }
            triangle.record(&g, worst);
        }
    }
    checks.into_iter().chain([triangle]).map(Check::finish).collect()
}

fn detour_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let hi = cfg.cap(12);
    let mut c = Check::new(Suite::Detour, "avg_detour_eq_lplus_diag", cfg.tol(1e-9));
    for g in random_instances(cfg.seed, 10, 100, 4, hi, 0.4) {
        let ht = hitting_times_exact(&g).expect("connected");
        let b = build_spectral(&g).expect("connected");
        c.instance();
        let worst = (0..g.node_count())
            .map(|k| average_detour_overhead(&ht, &b, k).residual())
            .fold(0.0, f64::max);
        c.record(&g, worst);
    }
    vec![c.finish()]
}

fn commute_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let hi = cfg.cap(12);
    let s = Suite::Commute;
    let mut eq8 = Check::new(s, "commute_eq_vol_resistance", cfg.tol(1e-9));
    let mut eq9 = Check::new(s, "detour_hitting_eq_commute", cfg.tol(1e-9));
    let mut sym = Check::new(s, "detour_reversal_symmetry", cfg.tol(1e-9));
    let mut eq11 = Check::new(s, "commute_row_sum", cfg.tol(1e-9));
    let mut eq12 = Check::new(s, "kirchhoff_from_commute", cfg.tol(1e-9));
    let mut rank = Check::new(s, "argmax_cstar_eq_argmin_commute", cfg.tol(0.0));
    for g in random_instances(cfg.seed, 10, 100, 4, hi, 0.4) {
        let n = g.node_count();
        let ht = hitting_times_exact(&g).expect("connected");
        let b = build_spectral(&g).expect("connected");
        let om = resistance_matrix(&b);
        eq8.instance();
        eq8.record(&g, (&ht.commute - om * b.volume()).amax());
        eq11.instance();
        let worst = (0..n)
            .map(|k| {
                let (l, r) = commute_row_sum_identity(&ht, &b, k);
                (l - r).abs()
            })
            .fold(0.0, f64::max);
        eq11.record(&g, worst);
        eq12.instance();
        eq12.record(&g, (kirchhoff_from_commute(&ht, b.volume()) - kirchhoff_index(&b).0).abs());
        rank.instance();
        let row_sums: Vec<f64> = (0..n).map(|k| ht.commute.row(k).sum()).collect();
        rank.record_bool(&g, argmax_set(&topological_centrality(&b), 1e-9) == argmin_set(&row_sums, 1e-9));
        if n <= 8 {
            eq9.instance();
            sym.instance();
            let (mut w9, mut ws) = (0.0f64, 0.0f64);
            for i in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        let h = detour_overhead(&ht, i, k, j);
                        w9 = w9.max((h - detour_overhead_commute(&ht, i, k, j)).abs());
                        ws = ws.max((h - detour_overhead(&ht, j, k, i)).abs());
                    }
                }
            }
            eq9.record(&g, w9);
            sym.record(&g, ws);
        }
    }
    [eq8, eq9, sym, eq11, eq12, rank].into_iter().map(Check::finish).collect()
}

fn circuit_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let hi = cfg.cap(10);
    let s = Suite::Circuit;
    let mut thm = Check::new(s, "recurrence_eq_detour", cfg.tol(1e-9));
    let mut circuit = Check::new(s, "superposition_reciprocity", cfg.tol(1e-9));
    let mut kcl = Check::new(s, "current_conservation", cfg.tol(1e-9));
    let mut recur = Check::new(s, "source_recurrence_positive", cfg.tol(0.0));
    let mut skipped = 0;
    let graphs = random_instances(cfg.seed, 20, 50, 3, hi, 0.4)
        .into_iter()
        .chain(weighted_instances(cfg.seed, 21, 10, 3, hi));
    for g in graphs {
        let n = g.node_count();
        let ht = hitting_times_exact(&g).expect("connected");
        let b = build_spectral(&g).expect("connected");
        let mut triples = Vec::with_capacity(n * n * n);
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    triples.push((i, k, j));
                    worst = worst.max((recurrence_overhead(&b, i, k, j) - detour_overhead(&ht, i, k, j)).abs());
                }
            }
        }
        thm.instance();
        thm.record(&g, worst);
        let report = verify_circuit_identities(&b, &triples);
        skipped += report.skipped;
        circuit.instance();
        circuit.record(&g, report.max_residual());
        kcl.instance();
        recur.instance();
        let (mut wk, mut positive) = (0.0f64, true);
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let p = voltages(&b, i, j).expect("distinct nodes");
                wk = wk.max(kcl_residual(&g, &p));
                positive &= p.visits[i] > 0.0 && voltage_at(&b, i, j, i) > 0.0;
            }
        }
        kcl.record(&g, wk);
        recur.record_bool(&g, positive);
    }
    circuit.note = Some(format!("{skipped} degenerate triples skipped"));
    [thm, circuit, kcl, recur].into_iter().map(Check::finish).collect()
}

fn forests_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let hi = cfg.cap(7);
    let s = Suite::Forests;
    let mut eq14 = Check::new(s, "forest_diag_eq_spectral", cfg.tol(1e-9));
    let mut lemma2 = Check::new(s, "rooted_counts_partition_total", cfg.tol(0.0));
    let mut ratio = Check::new(s, "per_partition_ratio", cfg.tol(0.0));
    for g in random_edge_subset_graphs(cfg.seed, 30, 500, hi) {
        let b = build_spectral(&g).expect("connected");
        let forest = lplus_diag_via_forests(&g).expect("small unweighted graph");
        eq14.instance();
        eq14.record(&g, max_abs_diff(&forest, &b.lplus_diag()));
        let parts = enumerate_bipartitions(&g).expect("small graph");
        let census = forest_census_from(&g, &parts).expect("small graph");
        lemma2.instance();
        lemma2.record_bool(&g, census.eps_rooted.iter().sum::<u64>() == 2 * census.eps_n2);
        ratio.instance();
        let ok = parts.iter().all(|p| {
            p.s_nodes.iter().all(|&i| {
                p.sprime_nodes.iter().all(|&j| {
                    p.rooted_forests(i) * p.s_nodes.len() as u64 == p.rooted_forests(j) * p.sprime_nodes.len() as u64
                })
            })
        });
        ratio.record_bool(&g, ok);
    }
    [eq14, lemma2, ratio].into_iter().map(Check::finish).collect()
}

fn trees_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let hi = cfg.cap(12);
    let s = Suite::Trees;
    let mut cor1 = Check::new(s, "tree_formula_eq_spectral", cfg.tol(1e-9));
    let mut spd = Check::new(s, "geodesic_eq_resistance", cfg.tol(1e-9));
    let mut center = Check::new(s, "argmax_cstar_in_center", cfg.tol(0.0));
    let mut ident = Check::new(s, "diag_from_total_distance", cfg.tol(1e-9));
    let mut rng = rng_for(cfg.seed, 40);
    for _ in 0..100 {
        let t = random_tree(rng.gen_range(2..=hi), &mut rng);
        let n = t.node_count();
        let b = build_spectral(&t).expect("tree is connected");
        cor1.instance();
        cor1.record(&t, max_abs_diff(&tree_centrality(&t).expect("tree"), &b.lplus_diag()));
        let geo = shortest_path_distances(&t).expect("connected");
        spd.instance();
        spd.record(&t, (&geo - resistance_matrix(&b)).amax());
        center.instance();
        let cset = tree_center(&t).expect("tree");
        let top = argmax_set(&topological_centrality(&b), 1e-9);
        center.record_bool(&t, top.iter().all(|k| cset.contains(k)));
        ident.instance();
        let trace = kirchhoff_index(&b).0;
        let worst = (0..n)
            .map(|i| (b.lplus()[(i, i)] - (geo.row(i).sum() - trace) / n as f64).abs())
            .fold(0.0, f64::max);
        ident.record(&t, worst);
    }
    [cor1, spd, center, ident].into_iter().map(Check::finish).collect()
}

fn montecarlo_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let s = Suite::MonteCarlo;
    let runs = cfg.runs;
    let opts = McOptions::default();
    let mut hit = Check::new(s, "hitting_within_4_sigma", 4.0);
    let mut visits = Check::new(s, "visits_within_4_sigma", 4.0);
    let mut det = Check::new(s, "worker_count_independent", 0.0);
    let mut scaling = Check::new(s, "std_error_quarter_runs_doubles", 0.05);
    let cases = [(Graph::path(3), 0, 2, 1), (Graph::path(3), 0, 1, 1), (Graph::complete(4), 0, 1, 2)];
    for (stream, (g, i, j, k)) in cases.iter().enumerate() {
        let seed = cfg.seed.wrapping_add(stream as u64);
        let ht = hitting_times_exact(g).expect("connected");
        let est = estimate_hitting_mc_with(g, *i, *j, runs, seed, opts).expect("valid walk");
        hit.instance();
        let z = if est.std_error > 0.0 {
            (est.mean - ht.hitting[(*i, *j)]).abs() / est.std_error
        } else if est.mean == ht.hitting[(*i, *j)] {
            0.0
        } else {
            f64::INFINITY
        };
        hit.record(g, z);

        let b = build_spectral(g).expect("connected");
        let exact_visits = b.degrees()[*k] * voltage_at(&b, *i, *j, *k);
        let v = estimate_visits_mc(g, *i, *j, *k, runs, seed, opts).expect("valid walk");
        visits.instance();
        visits.record(g, (v.mean - exact_visits).abs() / v.std_error.max(f64::MIN_POSITIVE));

        det.instance();
        let small = (runs / 10).max(1);
        let one = estimate_hitting_mc_with(g, *i, *j, small, seed, McOptions { workers: Some(1), ..opts });
        let many = estimate_hitting_mc_with(g, *i, *j, small, seed, McOptions { workers: Some(4), ..opts });
        det.record_bool(g, one == many);

        if est.std_error > 0.0 {
            scaling.instance();
            let quarter = estimate_hitting_mc_with(g, *i, *j, (runs / 4).max(1), seed, opts).expect("valid walk");
            scaling.record(g, (est.std_error / quarter.std_error - 0.5).abs());
        }
    }
    [hit, visits, det, scaling].into_iter().map(Check::finish).collect()
}

fn extremal_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let s = Suite::Extremal;
    let tol = cfg.tol(1e-9);
    let mut star = Check::new(s, "star_minimizes_tree_kirchhoff", tol);
    star.note = Some("all labelled trees, n = 3..8".into());
    let kirchhoff = |g: &Graph| rank_correction_pinv(&g.laplacian()).expect("connected").trace();
    for n in 3..=cfg.cap(8).max(3) {
        let k_star = kirchhoff(&Graph::star(n));
        let mut min_k = f64::INFINITY;
        let mut argmin_all_stars = true;
        let mut count = 0usize;
        for seq in all_prufer_sequences(n) {
            let t = tree_from_prufer(&seq);
            let k = kirchhoff(&t);
            count += 1;
            if k < min_k {
                min_k = k;
            }
            if k <= k_star + tol && (0..n).all(|i| t.hop_degree(i) < n - 1) {
                argmin_all_stars = false;
            }
        }
        star.instances += count;
        let g = Graph::star(n);
        star.record(&g, (k_star - min_k).max(0.0));
        star.record_bool(&g, argmin_all_stars);
    }
    let mut complete = Check::new(s, "complete_minimizes_kirchhoff_n5", tol);
    let k5 = kirchhoff(&Graph::complete(5));
    let mut min_other = f64::INFINITY;
    for g in all_connected_graphs(5) {
        complete.instance();
        let k = kirchhoff(&g);
        if g.edge_count() < 10 {
            min_other = min_other.min(k);
        }
        complete.record(&g, (k5 - k).max(0.0));
    }
    complete.record_bool(&Graph::complete(5), min_other > k5 + tol && complete.instances == 728);
    complete.note = Some(format!("{} connected graphs", complete.instances));
    [star, complete].into_iter().map(Check::finish).collect()
}

fn zoo_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let s = Suite::Zoo;
    let mut sc = Check::new(s, "subgraph_spectral_eq_series", cfg.tol(1e-9));
    for g in random_instances(cfg.seed, 50, 50, 3, cfg.cap(10), 0.4) {
        sc.instance();
        let a = subgraph_centrality(&g);
        let o = oracles::subgraph_centrality_series(&g, 30);
        sc.record(&g, a.iter().zip(&o).map(|(x, y)| (x - y).abs() / x.abs().max(1.0)).fold(0.0, f64::max));
    }
    let mut rb = Check::new(s, "rb_pinv_eq_solves", cfg.tol(1e-9));
    let graphs = random_instances(cfg.seed, 51, 30, 3, cfg.cap(8), 0.4)
        .into_iter()
        .chain(weighted_instances(cfg.seed, 52, 10, 3, cfg.cap(8)));
    for g in graphs {
        rb.instance();
        let b = build_spectral(&g).expect("connected");
        rb.record(&g, max_abs_diff(&randomwalk_betweenness(&g, &b), &oracles::randomwalk_betweenness_by_solves(&g)));
    }
    let mut transitive = Check::new(s, "vertex_transitive_constant", cfg.tol(1e-9));
    let symmetric = (3..=7).map(Graph::complete).chain((3..=10).map(Graph::cycle));
    for g in symmetric {
        transitive.instance();
        let r = centrality_report(&g).expect("connected");
        let spread = |v: &[f64]| {
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        let worst = ["degree", "gc", "sc", "gb", "rb", "cstar"]
            .iter()
            .map(|n| spread(r.raw.by_name(n).expect("known index")))
            .fold(0.0, f64::max);
        transitive.record(&g, worst);
    }
    let mut argmax = Check::new(s, "max_normalization_keeps_argmax", cfg.tol(0.0));
    for g in random_instances(cfg.seed, 53, 20, 4, cfg.cap(10), 0.4) {
        argmax.instance();
        let b = build_spectral(&g).expect("connected");
        let vectors = [
            geodesic_closeness(&g).expect("connected"),
            geodesic_betweenness(&g).expect("connected"),
            subgraph_centrality(&g),
            randomwalk_betweenness(&g, &b),
            topological_centrality(&b),
        ];
        let ok = vectors
            .iter()
            .all(|v| argmax_set(v, 1e-12) == argmax_set(&max_normalize(v), 1e-12));
        argmax.record_bool(&g, ok);
    }
    [sc, rb, transitive, argmax].into_iter().map(Check::finish).collect()
}

/// Expected `(K*, R₁, GC̄, SC̄, GB̄, RB̄)` directions for PERT-I and PERT-II.
pub const PERT1_DIRECTIONS: [Direction; 6] =
    [Direction::Down, Direction::Up, Direction::Down, Direction::Up, Direction::Up, Direction::Up];
pub const PERT2_DIRECTIONS: [Direction; 6] =
    [Direction::Up, Direction::Flat, Direction::Up, Direction::Down, Direction::Down, Direction::Up];

fn perturbation_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let s = Suite::Perturbation;
    let mut p1 = Check::new(s, "pert1_directions", 0.0);
    let mut p2 = Check::new(s, "pert2_directions", 0.0);
    let mut r1 = Check::new(s, "pert2_randic_unchanged", 0.0);
    let g = gen_core_gateway(&TopologySpec::reference(cfg.seed)).expect("reference topology");
    let g1 = pert_preset(&g, Pert::One).expect("PERT-I applies");
    let g2 = pert_preset(&g1, Pert::Two).expect("PERT-II applies");
    let a = sensitivity_report(&g, &g1).expect("same size");
    let b = sensitivity_report(&g1, &g2).expect("same size");
    p1.instance();
    p1.record_bool(&g, a.table_row() == PERT1_DIRECTIONS);
    p2.instance();
    p2.record_bool(&g1, b.table_row() == PERT2_DIRECTIONS);
    r1.instance();
    r1.record(&g1, b.deltas.randic.abs());
    p1.note = Some(format!(
        "ΔR1={:+.4} (ref {:+.3}), ΔK*={:+.4} (ref {:+.3})",
        a.deltas.randic, REFERENCE_DELTA_R1_PERT1, a.deltas.kstar, REFERENCE_DELTA_KSTAR_PERT1
    ));
    p2.note = Some(format!("ΔK*={:+.4} (ref {:+.3})", b.deltas.kstar, REFERENCE_DELTA_KSTAR_PERT2));
    [p1, p2, r1].into_iter().map(Check::finish).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("theorem1".parse::<Suite>().unwrap(), Suite::Detour);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn edge_subset_sampler_is_connected_and_small() {
        let gs = random_edge_subset_graphs(1, 0, 50, 7);
        assert!(gs.iter().all(|g| is_connected(g) && g.node_count() <= 7));
    }

    #[test]
    fn unattainable_tolerance_fails_with_instance() {
        let cfg = VerifyConfig { tolerance: Some(1e-30), only: Some(Suite::Detour), max_n: Some(6), ..Default::default() };
        let out = run(&cfg);
        assert!(out.iter().any(|c| !c.passed && c.failing_instance.is_some()));
    }
}
