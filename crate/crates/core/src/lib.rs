//! Network robustness from the Moore–Penrose pseudo-inverse of the graph
//! Laplacian: topological centrality `C*(i) = 1/l⁺_ii`, the Kirchhoff index
//! `K = Tr(L⁺)`, and exact cross-checks through random walks, the equivalent
//! electrical network, and spanning-forest counts.

pub mod electrical;
pub mod error;
pub mod experiments;
pub mod forests;
pub mod graph;
pub mod random;
pub mod spectral;
pub mod verify;
pub mod walks;
pub mod zoo;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, Graph, NodeId};
pub use spectral::{build_spectral, SpectralBundle};
