//! Agreement between two labelings.

use std::collections::HashMap;

use super::ClusterAssignment;

fn choose2(x: u64) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index of two labelings of the same items.
pub fn adjusted_rand_index<A, B>(a: &[A], b: &[B]) -> f64
where
    A: std::hash::Hash + Eq,
    B: std::hash::Hash + Eq,
{
    assert_eq!(a.len(), b.len(), "labelings differ in length");
    let n = a.len() as u64;
    let mut joint: HashMap<(&A, &B), u64> = HashMap::new();
    let mut rows: HashMap<&A, u64> = HashMap::new();
    let mut cols: HashMap<&B, u64> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = joint.values().map(|&c| choose2(c)).sum();
    let sum_a: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sum_b: f64 = cols.values().map(|&c| choose2(c)).sum();
    let expected = sum_a * sum_b / choose2(n);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Labels for `doc_ids` from `assignment`; unassigned, excluded and missing
/// documents each become their own singleton.
pub fn labels_with_singletons(assignment: &ClusterAssignment, doc_ids: &[String]) -> Vec<String> {
    let known: HashMap<&str, Option<usize>> =
        assignment.doc_ids().iter().map(String::as_str).zip(assignment.labels().iter().copied()).collect();
    doc_ids
        .iter()
        .map(|d| match known.get(d.as_str()).copied().flatten() {
            Some(c) => format!("c{c}"),
            None => format!("single:{d}"),
        })
        .collect()
}
