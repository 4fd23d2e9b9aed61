//! Term-vector baseline: tf-idf weighting compared by plain cosine.

use super::{cluster_dissimilarity, Clustering, Method, TreeCutParams};
use crate::error::{Result, TomError};
use crate::ingest::TermDocMatrix;
use crate::matrix::SquareMatrix;
use crate::par::Execution;

/// Sparse tf-idf document vectors, column order of the source matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdf {
    pub docs: Vec<String>,
    /// Per document, `(term, weight)` with non-zero weight, ascending term.
    pub vectors: Vec<Vec<(u32, f64)>>,
}

impl TfIdf {
    /// Documents whose vector is all zero.
    pub fn zero_docs(&self) -> Vec<usize> {
        (0..self.vectors.len()).filter(|&d| self.vectors[d].is_empty()).collect()
    }
}

/// `count · ln(N / df)` per term and document.
pub fn vsm_tfidf(matrix: &TermDocMatrix) -> TfIdf {
    let n = matrix.n_docs() as f64;
    let idf: Vec<f64> = matrix.dfs().iter().map(|&df| if df == 0 { 0.0 } else { (n / df as f64).ln() }).collect();
    let vectors = matrix
        .columns()
        .into_iter()
        .map(|col| {
            col.into_iter()
                .map(|(t, c)| (t, c as f64 * idf[t as usize]))
                .filter(|&(_, w)| w != 0.0)
                .collect()
        })
        .collect();
    TfIdf { docs: matrix.docs.clone(), vectors }
}

fn sparse_dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut s) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Cosine similarity matrix over the given non-zero vectors.
pub fn cosine_matrix(vectors: &[&[(u32, f64)]], exec: Execution) -> SquareMatrix {
    let n = vectors.len();
    let norms: Vec<f64> = vectors.iter().map(|v| sparse_dot(v, v)).collect();
    let upper: Vec<Vec<f64>> = exec.map_range(n, |i| {
        (i + 1..n).map(|j| (sparse_dot(vectors[i], vectors[j]) / (norms[i] * norms[j]).sqrt()).min(1.0)).collect()
    });
    let mut m = SquareMatrix::identity(n);
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            m[(i, i + 1 + off)] = v;
            m[(i + 1 + off, i)] = v;
        }
    }
    m
}

/// Clusters the documents with a non-zero tf-idf vector; the rest are
/// reported as excluded.
pub fn vsm_cluster(matrix: &TermDocMatrix, params: TreeCutParams, exec: Execution) -> Result<Clustering> {
    let tfidf = vsm_tfidf(matrix);
    let (kept, excluded): (Vec<usize>, Vec<usize>) = (0..tfidf.vectors.len()).partition(|&d| !tfidf.vectors[d].is_empty());
    if kept.len() < 2 {
        return Err(TomError::InsufficientData(format!("{} documents with a non-zero tf-idf vector", kept.len())));
    }
    let vectors: Vec<&[(u32, f64)]> = kept.iter().map(|&d| tfidf.vectors[d].as_slice()).collect();
    let sim = cosine_matrix(&vectors, exec);
    let ids = kept.iter().map(|&d| tfidf.docs[d].clone()).collect();
    let excluded = excluded.iter().map(|&d| tfidf.docs[d].clone()).collect();
    cluster_dissimilarity(&sim, ids, excluded, params, Method::Vsm)
}
