//! Topic overlays of document sets and the measures defined on them.

mod metrics;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};
use crate::ingest::TermDocMatrix;
use crate::network::TopicPartition;
use crate::par::Execution;

pub use metrics::{pwcs, stirling_diversity, ProximityProfile};

/// Share of a document set's in-vocabulary descriptor occurrences per topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub doc_ids: Vec<String>,
    pub p: Vec<f64>,
    pub support: Vec<usize>,
}

impl Overlay {
    /// Normalizes raw per-topic counts; an all-zero count vector stays zero.
    pub fn from_counts(doc_ids: Vec<String>, counts: &[u64]) -> Overlay {
        let total: u64 = counts.iter().sum();
        let p: Vec<f64> = if total == 0 {
            vec![0.0; counts.len()]
        } else {
            counts.iter().map(|&c| c as f64 / total as f64).collect()
        };
        let support = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
        Overlay { doc_ids, p, support }
    }

    /// Wraps a share vector, checking it is non-negative and sums to 0 or 1.
    pub fn from_shares(doc_ids: Vec<String>, p: Vec<f64>) -> Result<Overlay> {
        if p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
            return Err(TomError::InvalidArgument("overlay shares must be finite and non-negative".into()));
        }
        let sum: f64 = p.iter().sum();
        if sum != 0.0 && (sum - 1.0).abs() > 1e-9 {
            return Err(TomError::InvalidArgument(format!("overlay shares sum to {sum}")));
        }
        let support = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
        Ok(Overlay { doc_ids, p, support })
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }
}

fn topic_counts(matrix: &TermDocMatrix, partition: &TopicPartition, docs: &[usize]) -> Vec<u64> {
    let mut counts = vec![0u64; partition.k()];
    let mut wanted = vec![false; matrix.n_docs()];
    for &d in docs {
        wanted[d] = true;
    }
    for t in 0..matrix.n_terms() {
        let topic = partition.topic_of(t);
        for &(d, c) in matrix.row(t) {
            if wanted[d as usize] {
                counts[topic] += c as u64;
            }
        }
    }
    counts
}

fn check_shapes(matrix: &TermDocMatrix, partition: &TopicPartition) -> Result<()> {
    if matrix.n_terms() != partition.n_nodes() {
        return Err(TomError::Shape { expected: partition.n_nodes(), found: matrix.n_terms() });
    }
    Ok(())
}

/// Overlay of the documents named in `doc_ids`.
pub fn compute_overlay(doc_ids: &[String], matrix: &TermDocMatrix, partition: &TopicPartition) -> Result<Overlay> {
    if doc_ids.is_empty() {
        return Err(TomError::InvalidArgument("overlay of an empty document set".into()));
    }
    check_shapes(matrix, partition)?;
    let index: std::collections::HashMap<&str, usize> =
        matrix.docs.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect();
    let docs = doc_ids
        .iter()
        .map(|id| index.get(id.as_str()).copied().ok_or_else(|| TomError::InvalidArgument(format!("unknown document {id}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Overlay::from_counts(doc_ids.to_vec(), &topic_counts(matrix, partition, &docs)))
}

/// One overlay per document column, in column order.
pub fn document_overlays(matrix: &TermDocMatrix, partition: &TopicPartition, exec: Execution) -> Result<Vec<Overlay>> {
    check_shapes(matrix, partition)?;
    let columns = matrix.columns();
    Ok(exec.map_range(matrix.n_docs(), |d| {
        let mut counts = vec![0u64; partition.k()];
        for &(t, c) in &columns[d] {
            counts[partition.topic_of(t as usize)] += c as u64;
        }
        Overlay::from_counts(vec![matrix.docs[d].clone()], &counts)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Term;
    use crate::network::TermGraph;

    fn fixture() -> (TermDocMatrix, TopicPartition) {
        // Terms 0,1 -> topic 0; terms 2,3 -> topic 1; term 4 -> topic 2.
        let rows = vec![
            vec![(0, 2), (2, 1)],
            vec![(1, 1)],
            vec![(0, 1), (1, 3)],
            vec![(1, 1), (2, 1)],
            vec![(3, 4)],
        ];
        let terms = (0..5).map(|i| Term { canonical: format!("t{i}"), display: format!("t{i}") }).collect();
        let docs = (0..4).map(|d| format!("d{d}")).collect();
        let m = TermDocMatrix::from_rows(terms, docs, rows).unwrap();
        let g = TermGraph::from_edges(5, &[(0, 1, 1.0), (2, 3, 1.0), (1, 2, 0.1), (3, 4, 0.2)]).unwrap();
        let p = TopicPartition::new(&g, vec![0, 0, 1, 1, 2], None, 2).unwrap();
        (m, p)
    }

    fn ids(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_topic_document_is_a_unit_vector() {
        let (m, p) = fixture();
        let o = compute_overlay(&ids(&["d3"]), &m, &p).unwrap();
        assert_eq!(o.p, vec![0.0, 0.0, 1.0]);
        assert_eq!(o.support, vec![2]);
    }

    #[test]
    fn even_split() {
        let (m, p) = fixture();
        // d2 holds term 0 and term 3 once each.
        let o = compute_overlay(&ids(&["d2"]), &m, &p).unwrap();
        assert_eq!(o.p, vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn union_is_occurrence_weighted_mean() {
        let (m, p) = fixture();
        let a = compute_overlay(&ids(&["d1"]), &m, &p).unwrap();
        let b = compute_overlay(&ids(&["d3"]), &m, &p).unwrap();
        let u = compute_overlay(&ids(&["d1", "d3"]), &m, &p).unwrap();
        // d1 carries 5 occurrences, d3 carries 4.
        assert_eq!(a.p, vec![0.2, 0.8, 0.0]);
        for i in 0..3 {
            assert!((u.p[i] - (5.0 * a.p[i] + 4.0 * b.p[i]) / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn per_document_overlays_match_set_overlays() {
        let (m, p) = fixture();
        let all = document_overlays(&m, &p, Execution::Sequential).unwrap();
        assert_eq!(all, document_overlays(&m, &p, Execution::Parallel).unwrap());
        for (d, o) in all.iter().enumerate() {
            assert_eq!(o, &compute_overlay(&[m.docs[d].clone()], &m, &p).unwrap());
        }
    }

    #[test]
    fn errors() {
        let (m, p) = fixture();
        assert!(compute_overlay(&[], &m, &p).is_err());
        assert!(compute_overlay(&ids(&["nope"]), &m, &p).is_err());
        assert!(Overlay::from_shares(vec![], vec![0.5, 0.2]).is_err());
        assert!(Overlay::from_shares(vec![], vec![0.0, 0.0]).unwrap().is_zero());
    }

    #[test]
    fn zero_counts_give_zero_overlay() {
        let o = Overlay::from_counts(vec![], &[0, 0, 0]);
        assert!(o.is_zero());
        assert_eq!(o.p, vec![0.0; 3]);
    }
}
