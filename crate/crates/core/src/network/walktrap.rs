//! Agglomerative community detection by random-walk distance (Walktrap),
//! cut at the level of maximal weighted modularity.
//!
//! Each node gets a self-loop weighted by its mean incident edge weight.
//! Communities are compared by the distance between their `t`-step walk
//! distributions, scaled by `1/d(k)`; at every step the adjacent pair with
//! the smallest increase in squared distance `delta_sigma` is merged.
//! Merges never cross component boundaries because only adjacent
//! communities are candidates.

use std::collections::{BTreeMap, BTreeSet};

use super::graph::TermGraph;
use super::modularity::modularity_of_assignment;
use super::partition::TopicPartition;
use crate::error::{Result, TomError};
use crate::par::Execution;

pub const DEFAULT_WALK_LENGTH: usize = 4;
pub const DEFAULT_MIN_COMPONENT: usize = 4;
pub const LABEL_TERMS: usize = 5;

/// Relative tolerance under which two merge costs count as tied.
const TIE_RTOL: f64 = 1e-12;
/// Absolute tolerance for comparing modularity levels.
const MODULARITY_TOL: f64 = 1e-12;

struct Community {
    size: usize,
    min_node: usize,
    walk: Vec<f64>,
    neighbors: BTreeSet<usize>,
}

pub fn detect_topics(graph: &TermGraph, walk_length: usize, min_component: usize) -> Result<TopicPartition> {
    detect_topics_with(graph, walk_length, min_component, Execution::default())
}

pub fn detect_topics_with(
    graph: &TermGraph,
    walk_length: usize,
    min_component: usize,
    exec: Execution,
) -> Result<TopicPartition> {
    if graph.edges().is_empty() {
        return Err(TomError::NoStructure);
    }
    if walk_length == 0 {
        return Err(TomError::Config("walk_length must be at least 1".into()));
    }
    let n = graph.n_nodes();
    let merges = walktrap_merges(graph, walk_length, exec);

    // Replay merges, keeping the level with the highest modularity.
    let mut uf: Vec<usize> = (0..n).collect();
    let mut best_q = modularity_of_assignment(graph, &dense_labels(&mut uf));
    let mut best_level = 0;
    for (level, &(a, b)) in merges.iter().enumerate() {
        union(&mut uf, a, b);
        let q = modularity_of_assignment(graph, &dense_labels(&mut uf));
        if q > best_q + MODULARITY_TOL {
            best_q = q;
            best_level = level + 1;
        }
    }
    let mut uf: Vec<usize> = (0..n).collect();
    for &(a, b) in &merges[..best_level] {
        union(&mut uf, a, b);
    }
    let communities = dense_labels(&mut uf);

    // Pool small components into one residual topic placed last.
    let components = graph.components();
    let mut comp_size = vec![0usize; graph.n_components()];
    for &c in components {
        comp_size[c] += 1;
    }
    let is_small = |node: usize| comp_size[components[node]] < min_component;
    let mut relabel = BTreeMap::new();
    for node in 0..n {
        if !is_small(node) {
            let next = relabel.len();
            relabel.entry(communities[node]).or_insert(next);
        }
    }
    let regular = relabel.len();
    let has_residual = (0..n).any(is_small);
    let assignment: Vec<usize> =
        (0..n).map(|node| if is_small(node) { regular } else { relabel[&communities[node]] }).collect();
    TopicPartition::new(graph, assignment, has_residual.then_some(regular), LABEL_TERMS)
}

/// Merge sequence as pairs of representative nodes, in merge order.
fn walktrap_merges(graph: &TermGraph, t: usize, exec: Execution) -> Vec<(usize, usize)> {
    let n = graph.n_nodes();
    let mut adj = graph.adjacency();
    for (i, row) in adj.iter_mut().enumerate() {
        let loop_weight = if row.is_empty() { 1.0 } else { row.iter().map(|&(_, w)| w).sum::<f64>() / row.len() as f64 };
        let pos = row.partition_point(|&(v, _)| v < i);
        row.insert(pos, (i, loop_weight));
    }
    let degree: Vec<f64> = adj.iter().map(|row| row.iter().map(|&(_, w)| w).sum()).collect();
    let inv_degree: Vec<f64> = degree.iter().map(|d| 1.0 / d).collect();

    let walks: Vec<Vec<f64>> = exec.map_range(n, |i| {
        let mut p = vec![0.0; n];
        p[i] = 1.0;
        for _ in 0..t {
            let mut next = vec![0.0; n];
            for (k, &pk) in p.iter().enumerate() {
                if pk == 0.0 {
                    continue;
                }
                let scale = pk * inv_degree[k];
                for &(j, w) in &adj[k] {
                    next[j] += scale * w;
                }
            }
            p = next;
        }
        p
    });

    let mut comms: Vec<Option<Community>> = walks
        .into_iter()
        .enumerate()
        .map(|(i, walk)| {
            let neighbors = adj[i].iter().map(|&(j, _)| j).filter(|&j| j != i).collect();
            Some(Community { size: 1, min_node: i, walk, neighbors })
        })
        .collect();

    let delta_sigma = |a: &Community, b: &Community| -> f64 {
        let r2: f64 = a.walk.iter().zip(&b.walk).zip(&inv_degree).map(|((x, y), w)| (x - y) * (x - y) * w).sum();
        let (sa, sb) = (a.size as f64, b.size as f64);
        sa * sb / (sa + sb) * r2 / n as f64
    };

    let mut candidates: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in graph.edges() {
        let (a, b) = (comms[e.u].as_ref().unwrap(), comms[e.v].as_ref().unwrap());
        candidates.insert((e.u, e.v), delta_sigma(a, b));
    }

    let mut merges = Vec::new();
    let mut rep: Vec<usize> = (0..n).collect();
    while !candidates.is_empty() {
        let (a, b) = pick_merge(&candidates, &comms);
        candidates.retain(|&(x, y), _| x != a && x != b && y != a && y != b);
        let ca = comms[a].take().unwrap();
        let cb = comms[b].take().unwrap();
        let size = ca.size + cb.size;
        let (wa, wb) = (ca.size as f64 / size as f64, cb.size as f64 / size as f64);
        let walk = ca.walk.iter().zip(&cb.walk).map(|(x, y)| wa * x + wb * y).collect();
        let mut neighbors: BTreeSet<usize> = ca.neighbors.union(&cb.neighbors).copied().collect();
        neighbors.remove(&a);
        neighbors.remove(&b);
        merges.push((rep[a], rep[b]));

        let id = comms.len();
        rep.push(rep[a]);
        let merged = Community { size, min_node: ca.min_node.min(cb.min_node), walk, neighbors };
        for &nb in &merged.neighbors {
            let other = comms[nb].as_mut().unwrap();
            other.neighbors.remove(&a);
            other.neighbors.remove(&b);
            other.neighbors.insert(id);
            candidates.insert((nb, id), delta_sigma(comms[nb].as_ref().unwrap(), &merged));
        }
        comms.push(Some(merged));
    }
    merges
}

/// Smallest `delta_sigma`; near-ties go to the pair whose lowest member
/// nodes are smallest.
fn pick_merge(candidates: &BTreeMap<(usize, usize), f64>, comms: &[Option<Community>]) -> (usize, usize) {
    let key = |&(a, b): &(usize, usize)| {
        let (ma, mb) = (comms[a].as_ref().unwrap().min_node, comms[b].as_ref().unwrap().min_node);
        (ma.min(mb), ma.max(mb))
    };
    let mut best: Option<((usize, usize), f64)> = None;
    for (&pair, &cost) in candidates {
        best = match best {
            None => Some((pair, cost)),
            Some((bp, bc)) => {
                let tol = TIE_RTOL * bc.abs().max(cost.abs());
                if cost < bc - tol || ((cost - bc).abs() <= tol && key(&pair) < key(&bp)) {
                    Some((pair, cost))
                } else {
                    Some((bp, bc))
                }
            }
        };
    }
    best.unwrap().0
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

fn union(uf: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        uf[ra.max(rb)] = ra.min(rb);
    }
}

/// Community label per node, numbered by lowest member.
fn dense_labels(uf: &mut [usize]) -> Vec<usize> {
    let n = uf.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|i| {
            let r = find(uf, i);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique(offset: usize, size: usize, w: f64) -> Vec<(usize, usize, f64)> {
        let mut e = Vec::new();
        for i in 0..size {
            for j in i + 1..size {
                e.push((offset + i, offset + j, w));
            }
        }
        e
    }

    #[test]
    fn planted_five_cliques_with_weak_bridge() {
        let mut e = clique(0, 5, 1.0);
        e.extend(clique(5, 5, 1.0));
        e.push((4, 5, 0.05));
        let g = TermGraph::from_edges(10, &e).unwrap();
        let p = detect_topics(&g, 4, 4).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.assignment(), &[0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert_eq!(p.residual, None);
        assert!(p.modularity > 0.45);
    }

    #[test]
    fn single_clique_is_one_topic() {
        let g = TermGraph::from_edges(6, &clique(0, 6, 0.7)).unwrap();
        let p = detect_topics(&g, 4, 4).unwrap();
        assert_eq!(p.k(), 1);
    }

    #[test]
    fn disconnected_cliques_never_merge() {
        let mut e = clique(0, 5, 1.0);
        e.extend(clique(5, 5, 1.0));
        let g = TermGraph::from_edges(10, &e).unwrap();
        for t in [1, 2, 4, 8, 20] {
            let p = detect_topics(&g, t, 4).unwrap();
            assert_eq!(p.k(), 2, "walk length {t}");
            assert_eq!(p.members(0), (0..5).collect::<Vec<_>>());
        }
    }

    #[test]
    fn small_components_pool_into_residual() {
        let mut e = clique(0, 5, 1.0);
        e.push((5, 6, 0.3));
        let g = TermGraph::from_edges(8, &e).unwrap();
        let p = detect_topics(&g, 4, 4).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.residual, Some(1));
        assert_eq!(p.members(1), vec![5, 6, 7]);
    }

    #[test]
    fn edgeless_graph_has_no_structure() {
        let g = TermGraph::from_edges(3, &[]).unwrap();
        assert!(matches!(detect_topics(&g, 4, 4), Err(TomError::NoStructure)));
    }

    #[test]
    fn execution_strategy_does_not_change_result() {
        let mut e = clique(0, 6, 0.9);
        e.extend(clique(6, 7, 0.8));
        e.extend(clique(13, 5, 1.0));
        e.push((2, 8, 0.1));
        e.push((10, 15, 0.2));
        let g = TermGraph::from_edges(18, &e).unwrap();
        let a = detect_topics_with(&g, 4, 4, Execution::Sequential).unwrap();
        let b = detect_topics_with(&g, 4, 4, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k(), 3);
    }
}
