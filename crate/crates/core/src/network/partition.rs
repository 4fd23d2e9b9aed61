use serde::{Deserialize, Serialize};

use super::graph::TermGraph;
use crate::error::{Result, TomError};

/// Hard assignment of graph nodes to topics `0..k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicPartition {
    assignment: Vec<usize>,
    k: usize,
    /// Per topic, the most frequent member terms (display form).
    pub labels: Vec<Vec<String>>,
    /// Topic pooling the nodes of small components, if any.
    pub residual: Option<usize>,
    /// Modularity of the chosen level.
    pub modularity: f64,
}

impl TopicPartition {
    /// Validates that topic ids are dense; labels are filled from `graph`.
    pub fn new(graph: &TermGraph, assignment: Vec<usize>, residual: Option<usize>, label_count: usize) -> Result<Self> {
        if assignment.len() != graph.n_nodes() {
            return Err(TomError::Shape { expected: graph.n_nodes(), found: assignment.len() });
        }
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; k];
        for &t in &assignment {
            seen[t] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(TomError::InvalidArgument("topic ids are not dense".into()));
        }
        if residual.is_some_and(|r| r >= k) {
            return Err(TomError::InvalidArgument("residual topic out of range".into()));
        }
        let mut p = TopicPartition { assignment, k, labels: Vec::new(), residual, modularity: 0.0 };
        p.labels = (0..k)
            .map(|t| {
                let mut members = p.members(t);
                members.sort_by(|&a, &b| {
                    let (na, nb) = (&graph.nodes()[a], &graph.nodes()[b]);
                    nb.frequency.cmp(&na.frequency).then_with(|| na.term.canonical.cmp(&nb.term.canonical))
                });
                members.iter().take(label_count).map(|&i| graph.nodes()[i].term.display.clone()).collect()
            })
            .collect();
        p.modularity = super::modularity(graph, &p);
        Ok(p)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_nodes(&self) -> usize {
        self.assignment.len()
    }

    pub fn topic_of(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn members(&self, topic: usize) -> Vec<usize> {
        self.assignment.iter().enumerate().filter(|&(_, &t)| t == topic).map(|(i, _)| i).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &t in &self.assignment {
            s[t] += 1;
        }
        s
    }

    pub fn is_residual(&self, topic: usize) -> bool {
        self.residual == Some(topic)
    }
}
