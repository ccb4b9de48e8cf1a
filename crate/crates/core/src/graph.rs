//! Weighted undirected simple graphs.
//!
//! Edge weights are affinities: a larger weight means the endpoints are more
//! strongly coupled. Geodesic lengths therefore use `1/w` per edge, and the
//! equivalent electrical network uses a resistance of `1/w`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: f64,
}

/// Generalized degrees `d(i) = sum_j a_ij` and the graph volume.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeView {
    pub d: Vec<f64>,
    pub vol: f64,
}

/// Immutable weighted undirected simple graph on dense node ids `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    /// Canonical edge list, `u < v`, sorted.
    edges: Vec<Edge>,
    /// Neighbour lists sorted by neighbour id.
    adj: Vec<Vec<(NodeId, f64)>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Rejects self-loops, duplicate
    /// edges (in either orientation) and non-positive weights.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut canon: Vec<Edge> = Vec::new();
        for (u, v, w) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight(w));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            canon.push(Edge { u: a, v: b, w });
        }
        canon.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = canon.windows(2).find(|p| p[0].u == p[1].u && p[0].v == p[1].v) {
            return Err(Error::DuplicateEdge(pair[0].u, pair[0].v));
        }
        let mut adj = vec![Vec::new(); n];
        for e in &canon {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(k, _)| k);
        }
        Ok(Graph { n, edges: canon, adj, labels: None })
    }

    /// Unit-weight convenience constructor.
    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn path(n: usize) -> Self {
        Self::unweighted(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Self::unweighted(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::unweighted(n, edges).expect("complete graph is simple")
    }

    /// Star with hub 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        Self::unweighted(n, (1..n).map(|i| (0, i))).expect("star is simple")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, i: NodeId) -> &[(NodeId, f64)] {
        &self.adj[i]
    }

    /// Affinity `a_ij`, zero when the edge is absent.
    pub fn weight(&self, i: NodeId, j: NodeId) -> f64 {
        match self.adj[i].binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) => self.adj[i][pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        i < self.n && j < self.n && self.adj[i].binary_search_by_key(&j, |&(k, _)| k).is_ok()
    }

    pub fn degree(&self, i: NodeId) -> f64 {
        self.adj[i].iter().map(|&(_, w)| w).sum()
    }

    /// Number of incident edges, ignoring weights.
    pub fn hop_degree(&self, i: NodeId) -> usize {
        self.adj[i].len()
    }

    pub fn degrees(&self) -> DegreeView {
        let d: Vec<f64> = (0..self.n).map(|i| self.degree(i)).collect();
        let vol = d.iter().sum();
        DegreeView { d, vol }
    }

    pub fn volume(&self) -> f64 {
        2.0 * self.edges.iter().map(|e| e.w).sum::<f64>()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External label of a node, falling back to its numeric id.
    pub fn label(&self, i: NodeId) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn node_by_label(&self, label: &str) -> Result<NodeId> {
        match &self.labels {
            Some(l) => l
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string())),
            None => label
                .parse::<usize>()
                .ok()
                .filter(|&i| i < self.n)
                .ok_or_else(|| Error::UnknownLabel(label.to_string())),
        }
    }

    pub fn check_node(&self, i: NodeId) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: i, n: self.n })
        }
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            a[(e.u, e.v)] = e.w;
            a[(e.v, e.u)] = e.w;
        }
        a
    }

    /// Combinatorial Laplacian `D - A`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.adjacency_matrix();
        for i in 0..self.n {
            l[(i, i)] = self.degree(i);
        }
        l
    }

    /// Subgraph induced by `nodes`, relabelled densely in the given order.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
            .map(|e| (index[e.u], index[e.v], e.w));
        Graph::from_edges(nodes.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Serializes as an edge list, one `u v [w]` line per edge, using labels
    /// when present. Unit weights are omitted.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&self.label(e.u));
            out.push(' ');
            out.push_str(&self.label(e.v));
            if e.w != 1.0 {
                out.push(' ');
                out.push_str(&format_weight(e.w));
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn format_weight(w: f64) -> String {
    let s = format!("{w}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

/// Parses a whitespace-separated edge list: one `u v [w]` per line, `#`
/// comments, blank lines ignored, weight defaults to 1.
///
/// Node tokens are labels. When every label is `<prefix><integer>` with one
/// shared prefix (including the empty prefix, i.e. plain integers), ids are
/// assigned in increasing integer order; otherwise in order of first
/// appearance.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut raw: Vec<(String, String, f64, usize)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `u v [w]`, found {} fields", toks.len()),
            });
        }
        let w = match toks.get(2) {
            Some(t) => t.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("malformed weight `{t}`"),
            })?,
            None => 1.0,
        };
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Parse { line: lineno, msg: format!("nonpositive weight {w}") });
        }
        if toks[0] == toks[1] {
            return Err(Error::Parse { line: lineno, msg: format!("self-loop at node {}", toks[0]) });
        }
        raw.push((toks[0].to_string(), toks[1].to_string(), w, lineno));
    }

    let mut order: Vec<String> = Vec::new();
    let mut seen: HashMap<String, ()> = HashMap::new();
    for (u, v, _, _) in &raw {
        for t in [u, v] {
            if seen.insert(t.clone(), ()).is_none() {
                order.push(t.clone());
            }
        }
    }
    if let Some(keys) = numeric_suffix_keys(&order) {
        let mut paired: Vec<(u64, String)> = keys.into_iter().zip(order).collect();
        paired.sort();
        order = paired.into_iter().map(|(_, s)| s).collect();
    }
    let index: HashMap<&str, usize> =
        order.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    let mut seen_edges: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (u, v, w, lineno) in &raw {
        let (a, b) = (index[u.as_str()], index[v.as_str()]);
        let key = (a.min(b), a.max(b));
        if let Some(first) = seen_edges.insert(key, *lineno) {
            return Err(Error::Parse {
                line: *lineno,
                msg: format!("duplicate edge ({u}, {v}), first given on line {first}"),
            });
        }
        edges.push((a, b, *w));
    }
    let numeric_identity = order.iter().enumerate().all(|(i, s)| s == &i.to_string());
    let g = Graph::from_edges(order.len(), edges)?;
    if numeric_identity {
        Ok(g)
    } else {
        g.with_labels(order)
    }
}

/// Integer suffixes when all labels share one non-numeric prefix.
fn numeric_suffix_keys(labels: &[String]) -> Option<Vec<u64>> {
    let split = |s: &str| -> Option<(String, u64)> {
        let pos = s.find(|c: char| c.is_ascii_digit())?;
        let (prefix, digits) = s.split_at(pos);
        if prefix.chars().any(|c| c.is_ascii_digit()) {
            return None;
        }
        Some((prefix.to_string(), digits.parse().ok()?))
    };
    let parts: Vec<(String, u64)> = labels.iter().map(|s| split(s)).collect::<Option<_>>()?;
    let first = parts.first()?.0.clone();
    if parts.iter().any(|(p, _)| *p != first) {
        return None;
    }
    Some(parts.into_iter().map(|(_, k)| k).collect())
}

/// Connected components, each sorted, ordered by smallest member.
pub fn components(g: &Graph) -> Vec<Vec<NodeId>> {
    let mut comp = vec![usize::MAX; g.node_count()];
    let mut out = Vec::new();
    for start in 0..g.node_count() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in g.neighbors(x) {
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    components(g).len() <= 1
}

pub fn require_connected(g: &Graph) -> Result<()> {
    let comps = components(g);
    if comps.len() <= 1 {
        Ok(())
    } else {
        Err(Error::Disconnected { second_component: comps[1].clone() })
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, NodeId);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Single-source geodesic lengths: hop counts when unweighted, `1/w` edge
/// lengths otherwise.
pub fn geodesics_from(g: &Graph, source: NodeId) -> Vec<f64> {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    dist[source] = 0.0;
    if g.is_unweighted() {
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in g.neighbors(x) {
                if dist[y].is_infinite() {
                    dist[y] = dist[x] + 1.0;
                    queue.push_back(y);
                }
            }
        }
    } else {
        let mut heap = BinaryHeap::from([HeapItem(0.0, source)]);
        while let Some(HeapItem(dx, x)) = heap.pop() {
            if dx > dist[x] {
                continue;
            }
            for &(y, w) in g.neighbors(x) {
                let cand = dx + 1.0 / w;
                if cand < dist[y] {
                    dist[y] = cand;
                    heap.push(HeapItem(cand, y));
                }
            }
        }
    }
    dist
}

/// All-pairs shortest-path distance table.
pub fn shortest_path_distances(g: &Graph) -> Result<DMatrix<f64>> {
    require_connected(g)?;
    let n = g.node_count();
    let mut spd = DMatrix::zeros(n, n);
    for s in 0..n {
        for (t, d) in geodesics_from(g, s).into_iter().enumerate() {
            spd[(s, t)] = d;
        }
    }
    Ok(spd)
}

/// Geodesic diameter: the largest shortest-path distance.
pub fn diameter(g: &Graph) -> Result<f64> {
    Ok(shortest_path_distances(g)?.max())
}

/// Removes then adds edges, producing a new graph. Added edges carry the
/// given weights. Connectivity is not enforced; check it with
/// [`is_connected`] when it matters.
pub fn rewire(g: &Graph, remove: &[(NodeId, NodeId)], add: &[(NodeId, NodeId, f64)]) -> Result<Graph> {
    let touched = remove.iter().copied().chain(add.iter().map(|&(u, v, _)| (u, v)));
    for (u, v) in touched {
        g.check_node(u)?;
        g.check_node(v)?;
    }
    let mut kept: Vec<Edge> = g.edges.clone();
    for &(u, v) in remove {
        let (a, b) = (u.min(v), u.max(v));
        match kept.iter().position(|e| e.u == a && e.v == b) {
            Some(pos) => {
                kept.remove(pos);
            }
            None => return Err(Error::MissingEdge(u, v)),
        }
    }
    for &(u, v, _) in add {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let (a, b) = (u.min(v), u.max(v));
        if kept.iter().any(|e| e.u == a && e.v == b) {
            return Err(Error::DuplicateEdge(u, v));
        }
    }
    let edges = kept
        .into_iter()
        .map(|e| (e.u, e.v, e.w))
        .chain(add.iter().copied());
    let out = Graph::from_edges(g.n, edges)?;
    match &g.labels {
        Some(l) => out.with_labels(l.clone()),
        None => Ok(out),
    }
}

/// [`rewire`] addressed by node labels; added edges get unit weight.
pub fn rewire_by_label(g: &Graph, remove: &[(&str, &str)], add: &[(&str, &str)]) -> Result<Graph> {
    let rm = remove
        .iter()
        .map(|(a, b)| Ok((g.node_by_label(a)?, g.node_by_label(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let ad = add
        .iter()
        .map(|(a, b)| Ok((g.node_by_label(a)?, g.node_by_label(b)?, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    rewire(g, &rm, &ad)
}

/// Degree multiset as a sorted vector.
pub fn sorted_degrees(g: &Graph) -> Vec<f64> {
    let mut d = g.degrees().d;
    d.sort_by(|a, b| b.total_cmp(a));
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.degrees().vol, 4.0);
        assert!(g.labels().is_none());
    }

    #[test]
    fn parses_weighted_edge() {
        let g = parse_edge_list("0 1 2.5").unwrap();
        let dv = g.degrees();
        assert_eq!(dv.d, vec![2.5, 2.5]);
        assert_eq!(dv.vol, 5.0);
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(
            parse_edge_list("0 0"),
            Err(Error::Parse { line: 1, msg: "self-loop at node 0".into() })
        );
        assert!(matches!(parse_edge_list("0 1\n1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("0 1 -1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 1 0"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 1 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0 1\n# c\n1 0"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn comments_and_crlf() {
        let g = parse_edge_list("# header\r\n0 1 # tail\r\n\r\n1 2\r\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn label_ordering() {
        let g = parse_edge_list("v10 v2\nv2 v1").unwrap();
        assert_eq!(g.labels().unwrap(), &["v1", "v2", "v10"]);
        let g = parse_edge_list("b a\na c").unwrap();
        assert_eq!(g.labels().unwrap(), &["b", "a", "c"]);
        let g = parse_edge_list("3 5").unwrap();
        assert_eq!(g.labels().unwrap(), &["3", "5"]);
        assert_eq!(g.node_by_label("5").unwrap(), 1);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&Graph::path(3)));
        assert!(is_connected(&Graph::complete(4)));
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!is_connected(&g));
        assert_eq!(
            require_connected(&g),
            Err(Error::Disconnected { second_component: vec![2, 3] })
        );
    }

    #[test]
    fn geodesics() {
        let spd = shortest_path_distances(&Graph::path(3)).unwrap();
        assert_eq!(spd[(0, 2)], 2.0);
        let spd = shortest_path_distances(&Graph::complete(3)).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| spd[(i, j)] == if i == j { 0.0 } else { 1.0 })));
        assert_eq!(diameter(&Graph::path(4)).unwrap(), 3.0);
        let g = Graph::unweighted(4, [(0, 1), (2, 3)]).unwrap();
        assert!(shortest_path_distances(&g).is_err());
    }

    #[test]
    fn weighted_geodesics_use_reciprocal_length() {
        // direct 0-2 edge of affinity 0.25 has length 4; the detour through 1 has length 1
        let g = Graph::from_edges(3, [(0, 1, 2.0), (1, 2, 2.0), (0, 2, 0.25)]).unwrap();
        let spd = shortest_path_distances(&g).unwrap();
        assert!((spd[(0, 2)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rewire_path() {
        let g = Graph::path(3);
        let h = rewire(&g, &[(1, 2)], &[(0, 2, 1.0)]).unwrap();
        assert!(h.has_edge(0, 1) && h.has_edge(0, 2) && !h.has_edge(1, 2));
        assert_eq!(sorted_degrees(&g), sorted_degrees(&h));
        assert_eq!(rewire(&g, &[(0, 2)], &[]), Err(Error::MissingEdge(0, 2)));
        assert_eq!(rewire(&g, &[], &[(0, 1, 1.0)]), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(rewire(&g, &[], &[(1, 1, 1.0)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 0.5)]).unwrap();
        let h = parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let l = Graph::complete(5).laplacian();
        for i in 0..5 {
            assert_eq!(l.row(i).sum(), 0.0);
        }
    }
}
