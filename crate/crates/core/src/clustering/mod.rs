//! Agglomerative document clustering on overlay proximity, and the
//! term-vector baseline sharing the same linkage and tree cut.

mod assignment;
pub mod eval;
mod linkage;
mod treecut;
mod vsm;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};
use crate::matrix::SquareMatrix;
use crate::overlay::{Overlay, ProximityProfile};
use crate::par::Execution;

pub use assignment::{ClusterAssignment, Method};
pub use linkage::{average_linkage, Dendrogram, Merge};
pub use treecut::{dynamic_tree_cut, TreeCutParams, DEFAULT_DEEP_SPLIT, DEFAULT_MIN_CLUSTER_SIZE};
pub use vsm::{cosine_matrix, vsm_cluster, vsm_tfidf, TfIdf};

/// A dendrogram with its cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub dendrogram: Dendrogram,
    pub assignment: ClusterAssignment,
}

/// Symmetric matrix of pairwise proximity-weighted cosine similarities.
pub fn pairwise_pwcs_matrix(overlays: &[Overlay], s: &SquareMatrix, exec: Execution) -> Result<SquareMatrix> {
    let profiles = overlays.iter().map(|o| ProximityProfile::new(o, s)).collect::<Result<Vec<_>>>()?;
    let n = profiles.len();
    let upper: Vec<Vec<f64>> = exec.map_range(n, |i| (i + 1..n).map(|j| profiles[i].similarity(&profiles[j])).collect());
    let mut m = SquareMatrix::identity(n);
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            m[(i, i + 1 + off)] = v;
            m[(i + 1 + off, i)] = v;
        }
    }
    Ok(m)
}

/// `1 - similarity`, clamped to `[0, 1]`, with an exact zero diagonal.
pub fn similarity_to_dissimilarity(sim: &SquareMatrix) -> SquareMatrix {
    let mut d = sim.map(|x| (1.0 - x).clamp(0.0, 1.0));
    for i in 0..d.dim() {
        d[(i, i)] = 0.0;
    }
    d
}

pub(crate) fn cluster_dissimilarity(
    sim: &SquareMatrix,
    ids: Vec<String>,
    excluded: Vec<String>,
    params: TreeCutParams,
    method: Method,
) -> Result<Clustering> {
    let dendrogram = average_linkage(&similarity_to_dissimilarity(sim), ids)?;
    let assignment = dynamic_tree_cut(&dendrogram, params, method)?.with_excluded(excluded);
    Ok(Clustering { dendrogram, assignment })
}

/// Clusters documents by overlay proximity; all-zero overlays are excluded.
pub fn tom_cluster(overlays: &[Overlay], s: &SquareMatrix, params: TreeCutParams, exec: Execution) -> Result<Clustering> {
    let (kept, zero): (Vec<&Overlay>, Vec<&Overlay>) = overlays.iter().partition(|o| !o.is_zero());
    if kept.len() < 2 {
        return Err(TomError::InsufficientData(format!("{} documents with a non-zero overlay", kept.len())));
    }
    let kept: Vec<Overlay> = kept.into_iter().cloned().collect();
    let sim = pairwise_pwcs_matrix(&kept, s, exec)?;
    let ids = kept.iter().map(|o| o.doc_ids.join("+")).collect();
    let excluded = zero.iter().map(|o| o.doc_ids.join("+")).collect();
    cluster_dissimilarity(&sim, ids, excluded, params, Method::Tom)
}
