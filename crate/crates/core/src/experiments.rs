//! Synthetic core/gateway topologies, degree-preserving perturbation
//! presets, sensitivity reports and Graphviz export.
//!
//! Nodes are labelled `v1..vN`: core nodes first, then gateways, then the
//! members of each gateway's subnet in gateway order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components, is_connected, rewire_by_label, sorted_degrees, Graph, NodeId};
use crate::random::rng_for;
use crate::spectral::build_spectral;
use crate::zoo::{centrality_report_with, subgraph_centrality};

/// Relative changes reported for the original 65-node topology, used as a
/// reference next to the reproduced values.
pub const REFERENCE_DELTA_R1_PERT1: f64 = 0.029;
pub const REFERENCE_DELTA_KSTAR_PERT1: f64 = -0.045;
pub const REFERENCE_DELTA_KSTAR_PERT2: f64 = 0.036;

/// Dead-band for the "unchanged" direction.
pub const FLAT_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubnetWiring {
    /// Gateway linked to every member, no member-member links.
    Star,
    /// Gateway and members form a complete graph.
    Clique,
    /// Star plus each member-member chord with the given probability.
    Random { chord_prob: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub core_size: usize,
    pub gateway_count: usize,
    /// Members per gateway, excluding the gateway itself.
    pub subnet_sizes: Vec<usize>,
    /// One entry per gateway; empty means all stars.
    pub subnet_wiring: Vec<SubnetWiring>,
    /// Extra links by 1-based vertex number.
    pub redundant_links: Vec<(usize, usize)>,
    pub expected_nodes: Option<usize>,
    /// Check the structural constraints of the 65-node reference topology.
    pub reference_constraints: bool,
    pub seed: u64,
}

impl TopologySpec {
    /// Star-of-stars with no extra structure.
    pub fn simple(core_size: usize, subnet_sizes: Vec<usize>, seed: u64) -> Self {
        TopologySpec {
            core_size,
            gateway_count: subnet_sizes.len(),
            subnet_sizes,
            subnet_wiring: Vec::new(),
            redundant_links: Vec::new(),
            expected_nodes: None,
            reference_constraints: false,
            seed,
        }
    }

    /// The 65-node reference topology: a 4-node ring core, 10 gateways
    /// assigned to the core in contiguous blocks (v5, v6 on v1), star subnets of sizes
    /// 9, 9, 4 × 7 and 5, the last one a clique, plus the v22–v23 and
    /// v24–v25 redundant links.
    pub fn reference(seed: u64) -> Self {
        let mut wiring = vec![SubnetWiring::Star; 10];
        wiring[9] = SubnetWiring::Clique;
        TopologySpec {
            core_size: 4,
            gateway_count: 10,
            subnet_sizes: vec![9, 9, 4, 4, 4, 4, 4, 4, 4, 5],
            subnet_wiring: wiring,
            redundant_links: vec![(22, 23), (24, 25)],
            expected_nodes: Some(65),
            reference_constraints: true,
            seed,
        }
    }

    pub fn node_count(&self) -> usize {
        self.core_size + self.gateway_count + self.subnet_sizes.iter().sum::<usize>()
    }

    /// 0-based core node that gateway `g` (0-based) attaches to.
    pub fn core_of_gateway(&self, g: usize) -> usize {
        ((g + 1) * self.core_size).div_ceil(self.gateway_count) - 1
    }
}

fn vlabel(k: NodeId) -> String {
    format!("v{}", k + 1)
}

pub fn gen_core_gateway(spec: &TopologySpec) -> Result<Graph> {
    if spec.core_size == 0 || spec.gateway_count == 0 {
        return Err(Error::Constraint("core and gateway counts must be at least 1".into()));
    }
    if spec.subnet_sizes.len() != spec.gateway_count {
        return Err(Error::Constraint(format!(
            "{} subnet sizes given for {} gateways",
            spec.subnet_sizes.len(),
            spec.gateway_count
        )));
    }
    if spec.subnet_sizes.contains(&0) {
        return Err(Error::Constraint("subnet sizes must be at least 1".into()));
    }
    if !spec.subnet_wiring.is_empty() && spec.subnet_wiring.len() != spec.gateway_count {
        return Err(Error::Constraint(format!(
            "{} wiring rules given for {} gateways",
            spec.subnet_wiring.len(),
            spec.gateway_count
        )));
    }
    let n = spec.node_count();
    if let Some(want) = spec.expected_nodes {
        if want != n {
            return Err(Error::Constraint(format!("sizes sum to {n} nodes, expected {want}")));
        }
    }

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut link = |a: usize, b: usize| {
        edges.insert((a.min(b), a.max(b)));
    };
    let c = spec.core_size;
    match c {
        1 => {}
        2 => link(0, 1),
        _ => (0..c).for_each(|i| link(i, (i + 1) % c)),
    }
    let mut next = c + spec.gateway_count;
    for (g, &size) in spec.subnet_sizes.iter().enumerate() {
        let gw = c + g;
        link(gw, spec.core_of_gateway(g));
        let members: Vec<usize> = (next..next + size).collect();
        next += size;
        for &m in &members {
            link(gw, m);
        }
        match spec.subnet_wiring.get(g).copied().unwrap_or(SubnetWiring::Star) {
            SubnetWiring::Star => {}
            SubnetWiring::Clique => {
                for (a, &x) in members.iter().enumerate() {
                    for &y in &members[a + 1..] {
                        link(x, y);
                    }
                }
            }
            SubnetWiring::Random { chord_prob } => {
                if !(0.0..=1.0).contains(&chord_prob) {
                    return Err(Error::Constraint(format!("chord probability {chord_prob} outside [0, 1]")));
                }
                let mut rng = rng_for(spec.seed, g as u64);
                for (a, &x) in members.iter().enumerate() {
                    for &y in &members[a + 1..] {
                        if rng.gen_bool(chord_prob) {
                            link(x, y);
                        }
                    }
                }
            }
        }
    }
    for &(a, b) in &spec.redundant_links {
        if a == 0 || b == 0 || a > n || b > n || a == b {
            return Err(Error::Constraint(format!("redundant link v{a}–v{b} is not a valid pair")));
        }
        if !edges.insert(((a - 1).min(b - 1), (a - 1).max(b - 1))) {
            return Err(Error::Constraint(format!("redundant link v{a}–v{b} already present")));
        }
    }

    let g = Graph::unweighted(n, edges)?.with_labels((0..n).map(vlabel).collect())?;
    if !is_connected(&g) {
        return Err(Error::Constraint("generated topology is disconnected".into()));
    }
    if spec.reference_constraints {
        let violated = reference_violations(&g);
        if !violated.is_empty() {
            return Err(Error::Constraint(violated.join("; ")));
        }
    }
    Ok(g)
}

/// Nodes cut off from the core (the component of `v1`'s side that does not
/// contain `v2`) when edge `a–b` fails.
fn cut_off_by(g: &Graph, a: &str, b: &str) -> Result<usize> {
    let h = rewire_by_label(g, &[(a, b)], &[])?;
    let anchor = h.node_by_label("v2")?;
    Ok(components(&h).iter().filter(|c| !c.contains(&anchor)).map(Vec::len).sum())
}

/// Structural constraints of the 65-node reference topology that are not
/// satisfied by `g`.
pub fn reference_violations(g: &Graph) -> Vec<String> {
    let mut out = Vec::new();
    if g.node_count() != 65 {
        out.push(format!("expected 65 nodes, found {}", g.node_count()));
        return out;
    }
    let id = |s: &str| g.node_by_label(s).expect("v1..v65 labels");
    for v in ["v5", "v6"] {
        if g.hop_degree(id(v)) != 10 {
            out.push(format!("d({v}) = {}, expected 10", g.hop_degree(id(v))));
        }
    }
    let subnet: BTreeSet<NodeId> = g.neighbors(id("v5")).iter().map(|&(k, _)| k).filter(|&k| k != id("v1")).collect();
    let want: BTreeSet<NodeId> = (15..=23).map(|k| id(&format!("v{k}"))).collect();
    if subnet != want {
        out.push("subnet of v5 is not exactly v15..v23".into());
    }
    for (a, b) in [("v15", "v5"), ("v6", "v1"), ("v5", "v1"), ("v22", "v23"), ("v24", "v25")] {
        if !g.has_edge(id(a), id(b)) {
            out.push(format!("edge {a}–{b} missing"));
        }
    }
    for (a, b) in [("v15", "v1"), ("v6", "v5"), ("v22", "v25"), ("v23", "v24")] {
        if g.has_edge(id(a), id(b)) {
            out.push(format!("edge {a}–{b} present before perturbation"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    match cut_off_by(g, "v5", "v1") {
        Ok(10) => {}
        Ok(k) => out.push(format!("failure of v5–v1 cuts off {k} nodes, expected 10")),
        Err(e) => out.push(e.to_string()),
    }
    match pert_preset(g, Pert::One).and_then(|g1| cut_off_by(&g1, "v5", "v1")) {
        Ok(19) => {}
        Ok(k) => out.push(format!("after PERT-I failure of v5–v1 cuts off {k} nodes, expected 19")),
        Err(e) => out.push(e.to_string()),
    }
    out
}

type LabelPair = (&'static str, &'static str);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pert {
    /// `v15–v5, v6–v1 → v15–v1, v6–v5`.
    One,
    /// `v22–v23, v24–v25 → v22–v25, v23–v24`.
    Two,
}

impl Pert {
    fn swap(self) -> ([LabelPair; 2], [LabelPair; 2]) {
        match self {
            Pert::One => ([("v15", "v5"), ("v6", "v1")], [("v15", "v1"), ("v6", "v5")]),
            Pert::Two => ([("v22", "v23"), ("v24", "v25")], [("v22", "v25"), ("v23", "v24")]),
        }
    }
}

/// Applies a named degree-preserving double edge swap by node label.
pub fn pert_preset(g: &Graph, which: Pert) -> Result<Graph> {
    let (remove, add) = which.swap();
    let out = rewire_by_label(g, &remove, &add)?;
    if sorted_degrees(&out) != sorted_degrees(g) {
        return Err(Error::Constraint("perturbation changed the degree sequence".into()));
    }
    Ok(out)
}

/// Graph-level descriptors compared before and after a perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Descriptors {
    pub kstar: f64,
    pub randic: f64,
    pub gc: f64,
    pub sc: f64,
    pub gb: f64,
    pub rb: f64,
    pub cstar: f64,
    pub kirchhoff: f64,
}

impl Descriptors {
    pub fn of(g: &Graph) -> Result<Self> {
        let b = build_spectral(g)?;
        let r = centrality_report_with(g, &b)?;
        Ok(Descriptors {
            kstar: r.kstar,
            randic: r.randic,
            gc: r.averages.gc,
            sc: r.averages.sc,
            gb: r.averages.gb,
            rb: r.averages.rb,
            cstar: r.averages.cstar,
            kirchhoff: r.kirchhoff,
        })
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Deltas {
        Deltas {
            kstar: f(self.kstar, other.kstar),
            randic: f(self.randic, other.randic),
            gc: f(self.gc, other.gc),
            sc: f(self.sc, other.sc),
            gb: f(self.gb, other.gb),
            rb: f(self.rb, other.rb),
            cstar: f(self.cstar, other.cstar),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub kstar: f64,
    pub randic: f64,
    pub gc: f64,
    pub sc: f64,
    pub gb: f64,
    pub rb: f64,
    pub cstar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "↑")]
    Up,
    #[serde(rename = "↓")]
    Down,
    #[serde(rename = "↔")]
    Flat,
}

impl Direction {
    pub fn of(delta: f64) -> Self {
        if delta.abs() < FLAT_BAND {
            Direction::Flat
        } else if delta > 0.0 {
            Direction::Up
        } else {
            Direction::Down
        }
    }

    pub fn arrow(self) -> &'static str {
        match self {
            Direction::Up => "↑",
            Direction::Down => "↓",
            Direction::Flat => "↔",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Directions {
    pub kstar: Direction,
    pub randic: Direction,
    pub gc: Direction,
    pub sc: Direction,
    pub gb: Direction,
    pub rb: Direction,
    pub cstar: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub before: Descriptors,
    pub after: Descriptors,
    /// `(after − before) / before`.
    pub deltas: Deltas,
    pub directions: Directions,
}

impl SensitivityReport {
    /// `|ΔK* + ΔK · K_before / K_after|`, zero up to rounding.
    pub fn kstar_consistency(&self) -> f64 {
        let (kb, ka) = (self.before.kirchhoff, self.after.kirchhoff);
        let dk = (ka - kb) / kb;
        (self.deltas.kstar + dk * kb / ka).abs()
    }

    /// Directions as `(K*, R₁, GC̄, SC̄, GB̄, RB̄)`.
    pub fn table_row(&self) -> [Direction; 6] {
        let d = &self.directions;
        [d.kstar, d.randic, d.gc, d.sc, d.gb, d.rb]
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("descriptor  before          after           delta       dir\n");
        let rows = [
            ("K*", self.before.kstar, self.after.kstar, self.deltas.kstar, self.directions.kstar),
            ("R1", self.before.randic, self.after.randic, self.deltas.randic, self.directions.randic),
            ("GC", self.before.gc, self.after.gc, self.deltas.gc, self.directions.gc),
            ("SC", self.before.sc, self.after.sc, self.deltas.sc, self.directions.sc),
            ("GB", self.before.gb, self.after.gb, self.deltas.gb, self.directions.gb),
            ("RB", self.before.rb, self.after.rb, self.deltas.rb, self.directions.rb),
            ("C*", self.before.cstar, self.after.cstar, self.deltas.cstar, self.directions.cstar),
        ];
        for (name, b, a, d, dir) in rows {
            let _ = writeln!(out, "{name:<11} {b:<15.8} {a:<15.8} {d:<+11.6} {}", dir.arrow());
        }
        out
    }
}

pub fn sensitivity_report(before: &Graph, after: &Graph) -> Result<SensitivityReport> {
    if before.node_count() != after.node_count() {
        return Err(Error::LengthMismatch { expected: before.node_count(), got: after.node_count() });
    }
    let b = Descriptors::of(before)?;
    let a = Descriptors::of(after)?;
    let deltas = b.zip(&a, |x, y| (y - x) / x);
    let directions = Directions {
        kstar: Direction::of(deltas.kstar),
        randic: Direction::of(deltas.randic),
        gc: Direction::of(deltas.gc),
        sc: Direction::of(deltas.sc),
        gb: Direction::of(deltas.gb),
        rb: Direction::of(deltas.rb),
        cstar: Direction::of(deltas.cstar),
    };
    Ok(SensitivityReport { before: b, after: a, deltas, directions })
}

/// Hue of turquoise on the HSV wheel.
const TURQUOISE_HUE: f64 = 174.0 / 360.0;

/// Graphviz source with node fill colours on a red → turquoise ramp by
/// decreasing value: the maximum is pure red, the minimum turquoise.
pub fn export_dot(g: &Graph, values: &[f64]) -> Result<String> {
    if values.len() != g.node_count() {
        return Err(Error::LengthMismatch { expected: g.node_count(), got: values.len() });
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let span = max - min;
    let mut out = String::from("graph G {\n  node [style=filled, shape=circle];\n");
    for (i, &x) in values.iter().enumerate() {
        let t = if span > 0.0 { (max - x) / span } else { 0.0 };
        let _ = writeln!(
            out,
            "  \"{}\" [fillcolor=\"{:.4} 0.8500 0.9500\", tooltip=\"{:.6}\"];",
            g.label(i),
            t * TURQUOISE_HUE,
            x
        );
    }
    for e in g.edges() {
        let _ = writeln!(out, "  \"{}\" -- \"{}\";", g.label(e.u), g.label(e.v));
    }
    out.push_str("}\n");
    Ok(out)
}

/// Node holding the largest subgraph centrality, by label.
pub fn top_subgraph_node(g: &Graph) -> String {
    let sc = subgraph_centrality(g);
    let best = (0..sc.len()).max_by(|&a, &b| sc[a].total_cmp(&sc[b])).unwrap_or(0);
    g.label(best)
}
