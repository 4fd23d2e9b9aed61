use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};
use crate::ingest::{Term, TermDocMatrix};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub term: Term,
    /// Total occurrences in the corpus.
    pub frequency: u64,
}

/// Undirected weighted edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    nodes: Vec<GraphNode>,
    edges: Vec<Edge>,
}

/// Weighted term-similarity graph. Edges are unique, loop-free, positive
/// and sorted by `(u, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct TermGraph {
    nodes: Vec<GraphNode>,
    edges: Vec<Edge>,
    components: Vec<usize>,
}

impl TryFrom<RawGraph> for TermGraph {
    type Error = TomError;

    fn try_from(raw: RawGraph) -> Result<Self> {
        TermGraph::new(raw.nodes, raw.edges.into_iter().map(|e| (e.u, e.v, e.weight)).collect())
    }
}

impl From<TermGraph> for RawGraph {
    fn from(g: TermGraph) -> Self {
        RawGraph { nodes: g.nodes, edges: g.edges }
    }
}

impl TermGraph {
    pub fn new(nodes: Vec<GraphNode>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = nodes.len();
        let mut out = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a == b {
                return Err(TomError::InvalidArgument(format!("self-loop on node {a}")));
            }
            if a >= n || b >= n {
                return Err(TomError::InvalidArgument(format!("edge ({a}, {b}) out of range")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(TomError::InvalidArgument(format!("edge ({a}, {b}) has weight {w}")));
            }
            out.push(Edge { u: a.min(b), v: a.max(b), weight: w });
        }
        out.sort_by_key(|e| (e.u, e.v));
        if out.windows(2).any(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(TomError::InvalidArgument("duplicate edge".into()));
        }
        let components = label_components(n, &out);
        Ok(TermGraph { nodes, edges: out, components })
    }

    /// Graph over anonymous nodes `n0, n1, ...`; convenient for fixtures.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let nodes = (0..n)
            .map(|i| GraphNode {
                term: Term { canonical: format!("n{i:04}"), display: format!("n{i}") },
                frequency: 1,
            })
            .collect();
        TermGraph::new(nodes, edges.to_vec())
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Component label per node; labels are dense and numbered in order of
    /// each component's lowest node.
    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn n_components(&self) -> usize {
        self.components.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n_nodes()];
        for e in &self.edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        for row in &mut adj {
            row.sort_by_key(|&(v, _)| v);
        }
        adj
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Copy with every edge weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<TermGraph> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(TomError::InvalidArgument(format!("scale factor {factor}")));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= factor;
        }
        Ok(g)
    }
}

fn label_components(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        out[i] = label[root];
    }
    out
}

fn squared_norm(row: &[(u32, u32)]) -> u64 {
    row.iter().map(|&(_, c)| (c as u64) * (c as u64)).sum()
}

fn sparse_dot(a: &[(u32, u32)], b: &[(u32, u32)]) -> u64 {
    let (mut i, mut j, mut acc) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1 as u64 * b[j].1 as u64;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Dot product and squared norms are exact integers, so the result is
/// bitwise symmetric in its arguments.
fn cosine_from_parts(dot: u64, sq_a: u64, sq_b: u64) -> f64 {
    if (dot as u128) * (dot as u128) == sq_a as u128 * sq_b as u128 {
        return 1.0;
    }
    let denom = (sq_a as f64 * sq_b as f64).sqrt();
    (dot as f64 / denom).min(1.0)
}

/// Cosine similarity of two term rows over raw counts.
pub fn cosine_similarity_terms(matrix: &TermDocMatrix, t1: usize, t2: usize) -> Result<f64> {
    let (a, b) = (matrix.row(t1), matrix.row(t2));
    let (sa, sb) = (squared_norm(a), squared_norm(b));
    if sa == 0 || sb == 0 {
        return Err(TomError::UndefinedSimilarity(format!("term {} has an all-zero row", if sa == 0 { t1 } else { t2 })));
    }
    let (lo, hi) = if sa <= sb { (sa, sb) } else { (sb, sa) };
    Ok(cosine_from_parts(sparse_dot(a, b), lo, hi))
}

/// Links every term pair whose cosine similarity exceeds `edge_threshold`.
pub fn build_term_graph(matrix: &TermDocMatrix, edge_threshold: f64, exec: Execution) -> Result<TermGraph> {
    if !(0.0..1.0).contains(&edge_threshold) {
        return Err(TomError::Config(format!("edge_threshold must lie in [0, 1), got {edge_threshold}")));
    }
    let n = matrix.n_terms();
    let sq: Vec<u64> = (0..n).map(|t| squared_norm(matrix.row(t))).collect();
    if let Some(t) = sq.iter().position(|&s| s == 0) {
        return Err(TomError::UndefinedSimilarity(format!("term {t} has an all-zero row")));
    }
    let columns = matrix.columns();

    let per_node: Vec<Vec<(usize, usize, f64)>> = exec.map_range(n, |u| {
        let mut dots = vec![0u64; n];
        for &(d, cu) in matrix.row(u) {
            for &(v, cv) in &columns[d as usize] {
                if v as usize > u {
                    dots[v as usize] += cu as u64 * cv as u64;
                }
            }
        }
        let mut out = Vec::new();
        for v in u + 1..n {
            if dots[v] == 0 {
                continue;
            }
            let (lo, hi) = if sq[u] <= sq[v] { (sq[u], sq[v]) } else { (sq[v], sq[u]) };
            let w = cosine_from_parts(dots[v], lo, hi);
            if w > edge_threshold {
                out.push((u, v, w));
            }
        }
        out
    });

    let nodes = matrix
        .terms
        .iter()
        .enumerate()
        .map(|(t, term)| GraphNode { term: term.clone(), frequency: matrix.term_frequency(t) })
        .collect();
    TermGraph::new(nodes, per_node.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Term;

    fn matrix(rows: &[&[u32]]) -> TermDocMatrix {
        let n_docs = rows[0].len();
        let terms = (0..rows.len()).map(|i| Term { canonical: format!("t{i}"), display: format!("t{i}") }).collect();
        let sparse = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, &c)| (d as u32, c)).collect())
            .collect();
        TermDocMatrix::from_rows(terms, (0..n_docs).map(|d| format!("d{d}")).collect(), sparse).unwrap()
    }

    #[test]
    fn cosine_examples() {
        let m = matrix(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 3], &[1, 0, 1]]);
        assert_eq!(cosine_similarity_terms(&m, 0, 1).unwrap(), 1.0);
        assert_eq!(cosine_similarity_terms(&m, 0, 2).unwrap(), 0.0);
        let half = cosine_similarity_terms(&m, 0, 3).unwrap();
        assert!((half - 0.5).abs() < 1e-15);
        assert_eq!(cosine_similarity_terms(&m, 3, 0).unwrap(), half);
    }

    #[test]
    fn zero_row_is_undefined() {
        let terms = vec![Term { canonical: "a".into(), display: "a".into() }, Term { canonical: "b".into(), display: "b".into() }];
        let m = TermDocMatrix::from_rows(terms, vec!["d0".into()], vec![vec![(0, 1)], vec![]]).unwrap();
        assert!(matches!(cosine_similarity_terms(&m, 0, 1), Err(TomError::UndefinedSimilarity(_))));
    }

    #[test]
    fn threshold_zero_on_cooccurring_terms_is_complete() {
        let m = matrix(&[&[1, 2, 1], &[2, 1, 1], &[1, 1, 3], &[3, 1, 1]]);
        let g = build_term_graph(&m, 0.0, Execution::Sequential).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert_eq!(g.n_components(), 1);
    }

    #[test]
    fn threshold_above_max_is_edgeless() {
        let m = matrix(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let g = build_term_graph(&m, 0.5, Execution::Sequential).unwrap();
        assert!(g.edges().is_empty());
        assert_eq!(g.n_components(), 3);
    }

    #[test]
    fn exactly_the_low_pair_is_absent() {
        let m = matrix(&[&[2, 1, 1, 0], &[1, 2, 1, 0], &[1, 1, 2, 1], &[0, 1, 1, 2]]);
        let thr = 0.45;
        let g = build_term_graph(&m, thr, Execution::Sequential).unwrap();
        let mut expected = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                let w = cosine_similarity_terms(&m, u, v).unwrap();
                if w > thr {
                    expected.push((u, v, w));
                }
            }
        }
        let got: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 5);
        assert!(!got.iter().any(|&(u, v, _)| (u, v) == (0, 3)));
    }

    #[test]
    fn graph_validation() {
        assert!(TermGraph::from_edges(2, &[(0, 0, 1.0)]).is_err());
        assert!(TermGraph::from_edges(2, &[(0, 1, 1.0), (1, 0, 0.5)]).is_err());
        assert!(TermGraph::from_edges(2, &[(0, 1, -1.0)]).is_err());
        let g = TermGraph::from_edges(4, &[(3, 2, 0.5), (1, 0, 0.2)]).unwrap();
        assert_eq!((g.edges()[0].u, g.edges()[0].v), (0, 1));
        assert_eq!(g.components(), &[0, 0, 1, 1]);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<TermGraph>(&json).unwrap(), g);
    }

    #[test]
    fn parallel_matches_sequential() {
        let rows: Vec<Vec<u32>> = (0..30).map(|t| (0..40).map(|d| ((t * 7 + d * 3) % 5) as u32).collect()).collect();
        let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = matrix(&refs);
        let a = build_term_graph(&m, 0.1, Execution::Sequential).unwrap();
        let b = build_term_graph(&m, 0.1, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
