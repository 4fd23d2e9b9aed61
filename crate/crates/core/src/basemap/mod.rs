//! Topic proximity network derived from a partitioned term graph.

mod layout;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};
use crate::matrix::SquareMatrix;
use crate::network::{TermGraph, TopicPartition};

pub use layout::{basemap_layout, LAYOUT_ITERATIONS};

pub const DEFAULT_LINK_THRESHOLD: f64 = 0.1;
pub const DEFAULT_LAYOUT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasemapTopic {
    pub id: usize,
    pub labels: Vec<String>,
    pub members: usize,
    pub residual: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Basemap {
    pub topics: Vec<BasemapTopic>,
    /// Raw cross-topic edge density; zero diagonal.
    pub overlap: SquareMatrix,
    /// Proximity, unit diagonal.
    #[serde(rename = "S")]
    pub s: SquareMatrix,
    /// Distance `1 - S`.
    pub d: SquareMatrix,
    /// Display-only cutoff on `S`.
    pub link_threshold: f64,
    pub layout: Option<Vec<[f64; 2]>>,
}

impl Basemap {
    pub fn k(&self) -> usize {
        self.topics.len()
    }

    /// Topic pairs `(i, j, S_ij)` with `i < j` and `S_ij` above the link threshold.
    pub fn links(&self) -> Vec<(usize, usize, f64)> {
        let k = self.k();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let s = self.s[(i, j)];
                if s > self.link_threshold {
                    out.push((i, j, s));
                }
            }
        }
        out
    }

    pub fn residual(&self) -> Option<usize> {
        self.topics.iter().position(|t| t.residual)
    }
}

/// Sum of cross-edge weights between topics `a` and `b`, over `|A|·|B|`.
pub fn topic_overlap(graph: &TermGraph, partition: &TopicPartition, a: usize, b: usize) -> Result<f64> {
    if a == b {
        return Err(TomError::InvalidArgument(format!("overlap of topic {a} with itself")));
    }
    if a >= partition.k() || b >= partition.k() {
        return Err(TomError::InvalidArgument(format!("topic ({a}, {b}) out of range")));
    }
    let sizes = partition.sizes();
    let mut sum = 0.0;
    for e in graph.edges() {
        let (tu, tv) = (partition.topic_of(e.u), partition.topic_of(e.v));
        if (tu == a && tv == b) || (tu == b && tv == a) {
            sum += e.weight;
        }
    }
    Ok(sum / (sizes[a] as f64 * sizes[b] as f64))
}

pub fn build_basemap(graph: &TermGraph, partition: &TopicPartition, link_threshold: f64) -> Result<Basemap> {
    let k = partition.k();
    if k < 2 {
        return Err(TomError::DegenerateBasemap(k));
    }
    if partition.n_nodes() != graph.n_nodes() {
        return Err(TomError::Shape { expected: graph.n_nodes(), found: partition.n_nodes() });
    }
    if !(0.0..=1.0).contains(&link_threshold) {
        return Err(TomError::Config(format!("link_threshold must lie in [0, 1], got {link_threshold}")));
    }
    // One pass in edge order gives the same sums as `topic_overlap`.
    let mut cross = SquareMatrix::zeros(k);
    for e in graph.edges() {
        let (tu, tv) = (partition.topic_of(e.u), partition.topic_of(e.v));
        if tu != tv {
            cross[(tu.min(tv), tu.max(tv))] += e.weight;
        }
    }
    let sizes = partition.sizes();
    let mut overlap = SquareMatrix::zeros(k);
    let mut max = 0.0f64;
    for i in 0..k {
        for j in i + 1..k {
            let o = cross[(i, j)] / (sizes[i] as f64 * sizes[j] as f64);
            overlap[(i, j)] = o;
            overlap[(j, i)] = o;
            max = max.max(o);
        }
    }
    let mut s = SquareMatrix::identity(k);
    if max > 0.0 {
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    s[(i, j)] = overlap[(i, j)] / max;
                }
            }
        }
    }
    let d = s.map(|x| 1.0 - x);
    let topics = (0..k)
        .map(|t| BasemapTopic {
            id: t,
            labels: partition.labels[t].clone(),
            members: sizes[t],
            residual: partition.is_residual(t),
        })
        .collect();
    Ok(Basemap { topics, overlap, s, d, link_threshold, layout: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(edges: &[(usize, usize, f64)], n: usize, assignment: Vec<usize>) -> (TermGraph, TopicPartition) {
        let g = TermGraph::from_edges(n, edges).unwrap();
        let p = TopicPartition::new(&g, assignment, None, 3).unwrap();
        (g, p)
    }

    #[test]
    fn overlap_examples() {
        let (g, p) = fixture(&[(0, 1, 0.9), (1, 2, 0.6)], 3, vec![0, 0, 1]);
        assert_eq!(topic_overlap(&g, &p, 0, 1).unwrap(), 0.3);
        assert_eq!(topic_overlap(&g, &p, 1, 0).unwrap(), 0.3);
        let (g, p) = fixture(&[(0, 1, 1.0), (2, 3, 1.0)], 4, vec![0, 0, 1, 1]);
        assert_eq!(topic_overlap(&g, &p, 0, 1).unwrap(), 0.0);
        let (g, p) = fixture(&[(0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0)], 4, vec![0, 0, 1, 1]);
        assert_eq!(topic_overlap(&g, &p, 0, 1).unwrap(), 1.0);
        assert!(topic_overlap(&g, &p, 1, 1).is_err());
    }

    #[test]
    fn proximity_normalizes_by_max_overlap() {
        // Singleton topics so overlaps equal edge weights: AB 0.4, AC 0.2, BC none.
        let (g, p) = fixture(&[(0, 1, 0.4), (0, 2, 0.2)], 3, vec![0, 1, 2]);
        let b = build_basemap(&g, &p, 0.1).unwrap();
        assert_eq!(b.s[(0, 1)], 1.0);
        assert_eq!(b.d[(0, 1)], 0.0);
        assert_eq!(b.s[(0, 2)], 0.5);
        assert_eq!(b.s[(1, 2)], 0.0);
        for i in 0..3 {
            assert_eq!(b.s[(i, i)], 1.0);
            for j in 0..3 {
                assert_eq!(b.s[(i, j)] + b.d[(i, j)], 1.0);
                assert_eq!(b.s[(i, j)], b.s[(j, i)]);
            }
        }
        assert_eq!(b.links(), vec![(0, 1, 1.0), (0, 2, 0.5)]);
    }

    #[test]
    fn matrix_matches_pairwise_overlap() {
        let edges = [(0, 1, 0.3), (0, 4, 0.7), (1, 2, 0.2), (2, 5, 0.9), (3, 4, 0.5), (1, 5, 0.15), (4, 5, 0.11)];
        let (g, p) = fixture(&edges, 6, vec![0, 0, 1, 2, 2, 1]);
        let b = build_basemap(&g, &p, 0.1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(b.overlap[(i, j)], topic_overlap(&g, &p, i, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn disconnected_topics_give_zero_proximity() {
        let (g, p) = fixture(&[(0, 1, 1.0), (2, 3, 1.0)], 4, vec![0, 0, 1, 1]);
        let b = build_basemap(&g, &p, 0.1).unwrap();
        assert_eq!(b.s[(0, 1)], 0.0);
        assert_eq!(b.d[(0, 1)], 1.0);
    }

    #[test]
    fn one_topic_is_degenerate() {
        let (g, p) = fixture(&[(0, 1, 1.0)], 2, vec![0, 0]);
        assert!(matches!(build_basemap(&g, &p, 0.1), Err(TomError::DegenerateBasemap(1))));
    }

    #[test]
    fn threshold_does_not_touch_matrices() {
        let (g, p) = fixture(&[(0, 1, 0.4), (0, 2, 0.2)], 3, vec![0, 1, 2]);
        let a = build_basemap(&g, &p, 0.0).unwrap();
        let b = build_basemap(&g, &p, 0.9).unwrap();
        assert_eq!((a.overlap, a.s, a.d), (b.overlap, b.s, b.d));
    }
}
