//! Shape-adaptive dendrogram cut (the tree step of the hybrid dynamic tree
//! cut, without the partitioning-around-medoids reassignment).

use serde::{Deserialize, Serialize};

use super::assignment::{ClusterAssignment, Method};
use super::linkage::Dendrogram;
use crate::error::{Result, TomError};

pub const DEFAULT_MIN_CLUSTER_SIZE: usize = 5;
pub const DEFAULT_DEEP_SPLIT: u8 = 1;

const MAX_CORE_SCATTER: [f64; 4] = [0.64, 0.73, 0.82, 0.91];
const REF_QUANTILE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeCutParams {
    pub min_cluster_size: usize,
    pub deep_split: u8,
}

impl Default for TreeCutParams {
    fn default() -> Self {
        TreeCutParams { min_cluster_size: DEFAULT_MIN_CLUSTER_SIZE, deep_split: DEFAULT_DEEP_SPLIT }
    }
}

impl TreeCutParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_cluster_size == 0 {
            return Err(TomError::Config("min_cluster_size must be at least 1".into()));
        }
        if self.deep_split as usize >= MAX_CORE_SCATTER.len() {
            return Err(TomError::Config(format!("deep_split must lie in 0..=3, got {}", self.deep_split)));
        }
        Ok(())
    }
}

struct Branch {
    basic: bool,
    /// Leaves in joining order (basic branches only).
    leaves: Vec<usize>,
    /// Height at which each leaf joined.
    join_heights: Vec<f64>,
    /// Children (composite branches only).
    children: Vec<usize>,
    /// Leaves hanging off a composite branch without belonging to a cluster.
    loose: Vec<usize>,
    size: usize,
}

impl Branch {
    fn basic(leaves: Vec<usize>, join_heights: Vec<f64>) -> Branch {
        let size = leaves.len();
        Branch { basic: true, leaves, join_heights, children: Vec::new(), loose: Vec::new(), size }
    }
}

fn core_size(branch_size: usize, min_cluster_size: usize) -> usize {
    let base = min_cluster_size as f64 / 2.0 + 1.0;
    if base < branch_size as f64 {
        (base + (branch_size as f64 - base).sqrt()) as usize
    } else {
        branch_size
    }
}

fn core_scatter(b: &Branch, min_cluster_size: usize) -> f64 {
    let c = core_size(b.join_heights.len(), min_cluster_size);
    b.join_heights[..c].iter().sum::<f64>() / c as f64
}

/// Labels the leaves of `dendrogram`; leaves outside every qualifying branch
/// stay unassigned.
pub fn dynamic_tree_cut(dendrogram: &Dendrogram, params: TreeCutParams, method: Method) -> Result<ClusterAssignment> {
    params.validate()?;
    let n = dendrogram.n_leaves();
    let m = params.min_cluster_size;
    if m > n {
        log::warn!("min_cluster_size {m} exceeds the {n} leaves; every leaf is unassigned");
        return Ok(ClusterAssignment::from_labels(dendrogram.leaf_ids.clone(), vec![None; n], method));
    }
    let heights = dendrogram.heights();
    let n_merge = heights.len();
    let ref_merge = ((n_merge as f64 * REF_QUANTILE).round() as usize).max(1);
    let ref_height = heights[ref_merge - 1];
    let max_height = heights[n_merge - 1];
    let cut_height = if max_height > ref_height { 0.99 * (max_height - ref_height) + ref_height } else { max_height };
    let max_scatter = MAX_CORE_SCATTER[params.deep_split as usize];
    let min_gap = (1.0 - max_scatter) * 0.75;
    let max_abs_scatter = ref_height + max_scatter * (cut_height - ref_height);
    let min_abs_gap = min_gap * (cut_height - ref_height);
    let min_abs_split = ref_height;

    let mut branches: Vec<Branch> = Vec::new();
    // Branch currently holding each dendrogram node; `None` for leaves.
    let mut branch_of: Vec<Option<usize>> = vec![None; n + n_merge];

    let fails = |b: &Branch, h: f64| {
        b.basic
            && (b.size < m
                || core_scatter(b, m) > max_abs_scatter
                || h - core_scatter(b, m) < min_abs_gap
                || h < min_abs_split)
    };

    for (i, mg) in dendrogram.merges.iter().enumerate() {
        let h = mg.height;
        if h > cut_height {
            break;
        }
        let node = n + i;
        match (branch_of[mg.left], branch_of[mg.right]) {
            (None, None) => {
                branches.push(Branch::basic(vec![mg.left, mg.right], vec![h, h]));
                branch_of[node] = Some(branches.len() - 1);
            }
            (Some(b), None) | (None, Some(b)) => {
                let leaf = if branch_of[mg.left].is_none() { mg.left } else { mg.right };
                let br = &mut branches[b];
                if br.basic {
                    br.leaves.push(leaf);
                    br.join_heights.push(h);
                } else {
                    br.loose.push(leaf);
                }
                br.size += 1;
                branch_of[node] = Some(b);
            }
            (Some(a), Some(b)) => {
                let (small, large) = if branches[a].size <= branches[b].size { (a, b) } else { (b, a) };
                let absorb = if fails(&branches[small], h) {
                    Some((small, large))
                } else if fails(&branches[large], h) {
                    Some((large, small))
                } else {
                    None
                };
                match absorb {
                    Some((from, into)) => {
                        let src = std::mem::replace(&mut branches[from], Branch::basic(Vec::new(), Vec::new()));
                        let dst = &mut branches[into];
                        if dst.basic {
                            dst.leaves.extend(src.leaves);
                            dst.join_heights.extend(src.join_heights);
                        } else {
                            dst.loose.extend(src.leaves);
                        }
                        dst.size += src.size;
                        branch_of[node] = Some(into);
                    }
                    None => {
                        let size = branches[a].size + branches[b].size;
                        branches.push(Branch {
                            basic: false,
                            leaves: Vec::new(),
                            join_heights: Vec::new(),
                            children: vec![a, b],
                            loose: Vec::new(),
                            size,
                        });
                        branch_of[node] = Some(branches.len() - 1);
                    }
                }
            }
        }
    }

    // Top-level branches are those not referenced as a composite child and
    // still holding leaves.
    let mut is_child = vec![false; branches.len()];
    for b in &branches {
        for &c in &b.children {
            is_child[c] = true;
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (idx, b) in branches.iter().enumerate() {
        if !b.basic || b.leaves.is_empty() {
            continue;
        }
        let top_ok = b.size >= m && core_scatter(b, m) <= max_abs_scatter;
        if is_child[idx] || top_ok {
            let mut leaves = b.leaves.clone();
            leaves.sort_unstable();
            clusters.push(leaves);
        }
    }
    clusters.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    let mut labels = vec![None; n];
    for (id, members) in clusters.iter().enumerate() {
        for &leaf in members {
            labels[leaf] = Some(id);
        }
    }
    Ok(ClusterAssignment::from_labels(dendrogram.leaf_ids.clone(), labels, method))
}
