//! Equivalent electrical network: each edge becomes a resistor of `1/w`.
//!
//! `V^{xy}_z` is the potential at `z` when a unit current enters at `x` and
//! leaves at `y`, grounded so that the sink sits at zero volts. With this
//! gauge `d(z) · V^{xy}_z` is the expected number of visits to `z` by a walk
//! from `x` stopped at `y`, and every voltage is a difference of `L⁺`
//! entries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::spectral::SpectralBundle;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoltageProfile {
    pub source: NodeId,
    pub sink: NodeId,
    /// Node potentials, `v[sink] = 0`.
    pub v: Vec<f64>,
    /// Expected visit counts `U_k = d(k) v[k]`.
    pub visits: Vec<f64>,
}

/// `V^{xy}_z`; zero when `x == y` (no current flows).
pub fn voltage_at(b: &SpectralBundle, x: NodeId, y: NodeId, z: NodeId) -> f64 {
    if x == y {
        return 0.0;
    }
    let p = b.lplus();
    (p[(z, x)] - p[(z, y)]) - (p[(y, x)] - p[(y, y)])
}

pub fn voltages(b: &SpectralBundle, i: NodeId, j: NodeId) -> Result<VoltageProfile> {
    let n = b.node_count();
    for node in [i, j] {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, n });
        }
    }
    if i == j {
        return Err(Error::InvalidArgument("source and sink must differ".into()));
    }
    let v: Vec<f64> = (0..n).map(|k| voltage_at(b, i, j, k)).collect();
    let visits = v.iter().zip(b.degrees()).map(|(x, d)| x * d).collect();
    Ok(VoltageProfile { source: i, sink: j, v, visits })
}

/// `Vol · (V^{ik}_i + V^{kj}_i − V^{ij}_i)`.
pub fn recurrence_overhead(b: &SpectralBundle, i: NodeId, k: NodeId, j: NodeId) -> f64 {
    b.volume() * (voltage_at(b, i, k, i) + voltage_at(b, k, j, i) - voltage_at(b, i, j, i))
}

/// Visit-count form: `Vol · (U^{ik}_i + U^{kj}_i − U^{ij}_i) / d(i)`.
pub fn recurrence_overhead_visits(b: &SpectralBundle, i: NodeId, k: NodeId, j: NodeId) -> f64 {
    let d = b.degrees()[i];
    let u = |x, y| d * voltage_at(b, x, y, i);
    b.volume() * (u(i, k) + u(k, j) - u(i, j)) / d
}

/// Largest Kirchhoff-current-law violation: net outflow must be `+1` at the
/// source, `−1` at the sink and `0` elsewhere.
pub fn kcl_residual(g: &Graph, profile: &VoltageProfile) -> f64 {
    (0..g.node_count())
        .map(|m| {
            let out: f64 = g.neighbors(m).iter().map(|&(k, w)| w * (profile.v[m] - profile.v[k])).sum();
            let want = if m == profile.source {
                1.0
            } else if m == profile.sink {
                -1.0
            } else {
                0.0
            };
            (out - want).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitReport {
    pub checked: usize,
    /// Triples with a repeated node.
    pub skipped: usize,
    /// `max |V^{xz}_x − (V^{xz}_y + V^{zx}_y)|`.
    pub max_superposition: f64,
    /// `max |V^{xy}_z − V^{zy}_x|`.
    pub max_reciprocity: f64,
}

impl CircuitReport {
    pub fn max_residual(&self) -> f64 {
        self.max_superposition.max(self.max_reciprocity)
    }
}

/// Checks superposition and reciprocity on each `(x, y, z)` triple of
/// distinct nodes.
pub fn verify_circuit_identities(b: &SpectralBundle, triples: &[(NodeId, NodeId, NodeId)]) -> CircuitReport {
    let mut report = CircuitReport { checked: 0, skipped: 0, max_superposition: 0.0, max_reciprocity: 0.0 };
    for &(x, y, z) in triples {
        if x == y || y == z || x == z {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        let sup = voltage_at(b, x, z, x) - (voltage_at(b, x, z, y) + voltage_at(b, z, x, y));
        let rec = voltage_at(b, x, y, z) - voltage_at(b, z, y, x);
        report.max_superposition = report.max_superposition.max(sup.abs());
        report.max_reciprocity = report.max_reciprocity.max(rec.abs());
    }
    report
}

/// Netlist of the equivalent network, one `u v R=<1/w>` line per edge.
pub fn een_netlist(g: &Graph) -> String {
    g.edges()
        .iter()
        .map(|e| format!("{} {} R={}\n", g.label(e.u), g.label(e.v), crate::graph::format_weight(1.0 / e.w)))
        .collect()
}
