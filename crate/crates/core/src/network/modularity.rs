use super::graph::TermGraph;
use super::partition::TopicPartition;

/// Weighted Newman modularity `Q = sum_c (e_cc - a_c^2)`.
pub fn modularity(graph: &TermGraph, partition: &TopicPartition) -> f64 {
    modularity_of_assignment(graph, partition.assignment())
}

pub(crate) fn modularity_of_assignment(graph: &TermGraph, assignment: &[usize]) -> f64 {
    let m = graph.total_weight();
    if m <= 0.0 {
        return 0.0;
    }
    let k = assignment.iter().max().map_or(0, |&x| x + 1);
    let mut internal = vec![0.0; k];
    let mut boundary = vec![0.0; k];
    for e in graph.edges() {
        let (cu, cv) = (assignment[e.u], assignment[e.v]);
        if cu == cv {
            internal[cu] += e.weight;
        } else {
            boundary[cu] += e.weight;
            boundary[cv] += e.weight;
        }
    }
    // Total degree as 2*internal + boundary keeps the one-community case exact.
    (0..k).map(|c| internal[c] / m - ((2.0 * internal[c] + boundary[c]) / (2.0 * m)).powi(2)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique_edges(offset: usize, size: usize, w: f64) -> Vec<(usize, usize, f64)> {
        let mut e = Vec::new();
        for i in 0..size {
            for j in i + 1..size {
                e.push((offset + i, offset + j, w));
            }
        }
        e
    }

    #[test]
    fn single_community_is_zero() {
        let g = TermGraph::from_edges(5, &clique_edges(0, 5, 1.0)).unwrap();
        assert_eq!(modularity_of_assignment(&g, &[0; 5]), 0.0);
    }

    #[test]
    fn two_disconnected_cliques() {
        let mut e = clique_edges(0, 4, 1.0);
        e.extend(clique_edges(4, 4, 1.0));
        let g = TermGraph::from_edges(8, &e).unwrap();
        // e_cc = 0.5 and a_c = 0.5 for both cliques.
        let split = modularity_of_assignment(&g, &[0, 0, 0, 0, 1, 1, 1, 1]);
        assert!((split - 0.5).abs() < 1e-15);
        assert!(modularity_of_assignment(&g, &[0; 8]).abs() < 1e-15);
    }
}
