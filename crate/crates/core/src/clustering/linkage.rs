//! Average-linkage (UPGMA) agglomeration.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};
use crate::matrix::SquareMatrix;

/// Relative tolerance under which two linkage distances count as tied.
pub(crate) const TIE_RTOL: f64 = 1e-12;

/// One agglomeration step. Node ids follow the usual convention: leaves are
/// `0..n`, and merge `i` creates node `n + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaf_ids: Vec<String>,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    /// Checks leaf coverage, merge count and height order.
    pub fn new(leaf_ids: Vec<String>, merges: Vec<Merge>) -> Result<Self> {
        let n = leaf_ids.len();
        if n < 2 {
            return Err(TomError::TrivialDendrogram(n));
        }
        if merges.len() != n - 1 {
            return Err(TomError::InvalidArgument(format!("{} merges for {n} leaves", merges.len())));
        }
        let mut used = vec![false; 2 * n - 1];
        let mut size = vec![1usize; 2 * n - 1];
        for (i, m) in merges.iter().enumerate() {
            let node = n + i;
            for child in [m.left, m.right] {
                if child >= node || used[child] {
                    return Err(TomError::InvalidArgument(format!("merge {i} reuses or forward-references node {child}")));
                }
                used[child] = true;
            }
            size[node] = size[m.left] + size[m.right];
            if m.size != size[node] {
                return Err(TomError::InvalidArgument(format!("merge {i} has size {} instead of {}", m.size, size[node])));
            }
            if !m.height.is_finite() || (i > 0 && m.height < merges[i - 1].height) {
                return Err(TomError::InvalidArgument(format!("merge {i} height out of order")));
            }
        }
        Ok(Dendrogram { leaf_ids, merges })
    }

    pub fn n_leaves(&self) -> usize {
        self.leaf_ids.len()
    }

    pub fn heights(&self) -> Vec<f64> {
        self.merges.iter().map(|m| m.height).collect()
    }

    /// Leaves under `node`, ascending.
    pub fn leaves_of(&self, node: usize) -> Vec<usize> {
        let n = self.n_leaves();
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if x < n {
                out.push(x);
            } else {
                let m = &self.merges[x - n];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort_unstable();
        out
    }
}

pub(crate) fn validate_dissimilarity(d: &SquareMatrix) -> Result<()> {
    let n = d.dim();
    for i in 0..n {
        if d[(i, i)] != 0.0 {
            return Err(TomError::InvalidArgument(format!("diagonal entry {i} is not zero")));
        }
        for j in 0..n {
            let x = d[(i, j)];
            if !(x.is_finite() && x >= 0.0) {
                return Err(TomError::InvalidArgument(format!("entry ({i}, {j}) = {x}")));
            }
            if x != d[(j, i)] {
                return Err(TomError::InvalidArgument(format!("asymmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Whether `(cost, key)` beats `(best, best_key)`: strictly lower cost, or a
/// tie within tolerance and a smaller key.
pub(crate) fn better(cost: f64, key: (usize, usize), best: Option<(f64, (usize, usize))>) -> bool {
    match best {
        None => true,
        Some((b, bk)) => {
            let tol = TIE_RTOL * cost.abs().max(b.abs());
            cost < b - tol || ((cost - b).abs() <= tol && key < bk)
        }
    }
}

/// UPGMA over a symmetric dissimilarity matrix with zero diagonal.
///
/// The closest pair of clusters merges first; near-ties go to the pair whose
/// smallest leaves come first. The left child is the one holding the smaller
/// leaf.
pub fn average_linkage(dissimilarity: &SquareMatrix, leaf_ids: Vec<String>) -> Result<Dendrogram> {
    let n = dissimilarity.dim();
    if leaf_ids.len() != n {
        return Err(TomError::Shape { expected: n, found: leaf_ids.len() });
    }
    if n < 2 {
        return Err(TomError::TrivialDendrogram(n));
    }
    validate_dissimilarity(dissimilarity)?;

    let mut dist = dissimilarity.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut node = (0..n).collect::<Vec<_>>();
    let mut min_leaf = (0..n).collect::<Vec<_>>();
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(n - 1);
    let mut last = 0.0f64;

    while active.len() > 1 {
        let mut best: Option<(f64, (usize, usize))> = None;
        let mut pick = (0, 0);
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let key = (min_leaf[a].min(min_leaf[b]), min_leaf[a].max(min_leaf[b]));
                if better(dist[(a, b)], key, best) {
                    best = Some((dist[(a, b)], key));
                    pick = (a, b);
                }
            }
        }
        let (a, b) = if min_leaf[pick.0] < min_leaf[pick.1] { pick } else { (pick.1, pick.0) };
        let height = best.unwrap().0.max(last);
        last = height;
        let (sa, sb) = (size[a] as f64, size[b] as f64);
        for &c in &active {
            if c != a && c != b {
                let v = (sa * dist[(a, c)] + sb * dist[(b, c)]) / (sa + sb);
                dist[(a, c)] = v;
                dist[(c, a)] = v;
            }
        }
        merges.push(Merge { left: node[a], right: node[b], height, size: size[a] + size[b] });
        node[a] = n + merges.len() - 1;
        size[a] += size[b];
        min_leaf[a] = min_leaf[a].min(min_leaf[b]);
        active.retain(|&c| c != b);
    }
    Ok(Dendrogram { leaf_ids, merges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    /// Recomputes every inter-cluster mean from the input at each step.
    fn brute_force(d: &SquareMatrix) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
        let n = d.dim();
        let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut out = Vec::new();
        let mut last = 0.0f64;
        while clusters.len() > 1 {
            let mut best: Option<(f64, (usize, usize))> = None;
            let mut pick = (0, 0);
            for a in 0..clusters.len() {
                for b in a + 1..clusters.len() {
                    let mut s = 0.0;
                    for &i in &clusters[a] {
                        for &j in &clusters[b] {
                            s += d[(i, j)];
                        }
                    }
                    let mean = s / (clusters[a].len() * clusters[b].len()) as f64;
                    let (ma, mb) = (clusters[a][0], clusters[b][0]);
                    if better(mean, (ma.min(mb), ma.max(mb)), best) {
                        best = Some((mean, (ma.min(mb), ma.max(mb))));
                        pick = (a, b);
                    }
                }
            }
            let h = best.unwrap().0.max(last);
            last = h;
            let (a, b) = pick;
            let (l, r) = (clusters[a].clone(), clusters[b].clone());
            out.push((l.clone(), r.clone(), h));
            let mut merged = [l, r].concat();
            merged.sort_unstable();
            clusters.remove(b);
            clusters[a] = merged;
        }
        out
    }

    #[test]
    fn two_points() {
        let d = SquareMatrix::from_rows(vec![vec![0.0, 0.3], vec![0.3, 0.0]]).unwrap();
        let t = average_linkage(&d, ids(2)).unwrap();
        assert_eq!(t.merges, vec![Merge { left: 0, right: 1, height: 0.3, size: 2 }]);
    }

    #[test]
    fn three_points() {
        let d = SquareMatrix::from_rows(vec![vec![0.0, 0.1, 0.9], vec![0.1, 0.0, 0.9], vec![0.9, 0.9, 0.0]]).unwrap();
        let t = average_linkage(&d, ids(3)).unwrap();
        assert_eq!(t.merges[0], Merge { left: 0, right: 1, height: 0.1, size: 2 });
        assert_eq!(t.merges[1], Merge { left: 3, right: 2, height: 0.9, size: 3 });
        assert_eq!(t.leaves_of(4), vec![0, 1, 2]);
        assert!(Dendrogram::new(t.leaf_ids.clone(), t.merges.clone()).is_ok());
    }

    #[test]
    fn equal_distances_chain_by_lowest_leaf() {
        let d = SquareMatrix::identity(4).map(|x| 1.0 - x);
        let t = average_linkage(&d, ids(4)).unwrap();
        let pairs: Vec<_> = t.merges.iter().map(|m| (m.left, m.right)).collect();
        assert_eq!(pairs, vec![(0, 1), (4, 2), (5, 3)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(average_linkage(&SquareMatrix::zeros(1), ids(1)), Err(TomError::TrivialDendrogram(1))));
        let asym = SquareMatrix::from_rows(vec![vec![0.0, 0.3], vec![0.2, 0.0]]).unwrap();
        assert!(average_linkage(&asym, ids(2)).is_err());
        let diag = SquareMatrix::from_rows(vec![vec![0.1, 0.3], vec![0.3, 0.0]]).unwrap();
        assert!(average_linkage(&diag, ids(2)).is_err());
    }

    fn dissimilarity(max_n: usize) -> impl Strategy<Value = SquareMatrix> {
        (2..=max_n).prop_flat_map(|n| {
            prop::collection::vec(0.0f64..1.0, n * n).prop_map(move |v| {
                let mut d = SquareMatrix::zeros(n);
                for i in 0..n {
                    for j in i + 1..n {
                        d[(i, j)] = v[i * n + j];
                        d[(j, i)] = v[i * n + j];
                    }
                }
                d
            })
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(d in dissimilarity(8)) {
            let t = average_linkage(&d, ids(d.dim())).unwrap();
            let oracle = brute_force(&d);
            for (m, (l, r, h)) in t.merges.iter().zip(&oracle) {
                prop_assert_eq!(&t.leaves_of(m.left), l);
                prop_assert_eq!(&t.leaves_of(m.right), r);
                prop_assert!((m.height - h).abs() < 1e-12);
            }
        }

        #[test]
        fn heights_are_monotone_and_permutation_free(d in dissimilarity(10), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let n = d.dim();
            let t = average_linkage(&d, ids(n)).unwrap();
            prop_assert!(t.merges.windows(2).all(|w| w[0].height <= w[1].height));
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let mut dp = SquareMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    dp[(i, j)] = d[(perm[i], perm[j])];
                }
            }
            let tp = average_linkage(&dp, ids(n)).unwrap();
            for (a, b) in t.heights().iter().zip(tp.heights()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
