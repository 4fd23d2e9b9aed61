use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterAssignment;
use crate::error::{Result, TomError};

/// Row-percentage contingency table of two clusterings over the documents
/// assigned in both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossTab {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub counts: Vec<Vec<usize>>,
    pub percents: Vec<Vec<f64>>,
    /// Rows without any shared document; their cells are all zero.
    pub empty_rows: Vec<usize>,
}

impl CrossTab {
    pub fn shared_docs(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Rows are `a` clusters, columns `b` clusters, cells rounded percents.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec![String::from("cluster")];
        header.extend(self.col_labels.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.row_labels.iter().zip(&self.percents) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|p| format!("{}", p.round() as i64)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn cross_tabulate(a: &ClusterAssignment, b: &ClusterAssignment) -> Result<CrossTab> {
    let (ka, kb) = (a.n_clusters(), b.n_clusters());
    let b_label: HashMap<&str, usize> =
        b.doc_ids().iter().zip(b.labels()).filter_map(|(d, l)| l.map(|l| (d.as_str(), l))).collect();
    let mut counts = vec![vec![0usize; kb]; ka];
    for (d, l) in a.doc_ids().iter().zip(a.labels()) {
        if let (Some(r), Some(&c)) = (l, b_label.get(d.as_str())) {
            counts[*r][c] += 1;
        }
    }
    if counts.iter().flatten().all(|&c| c == 0) {
        return Err(TomError::EmptyCrossTab);
    }
    let mut empty_rows = Vec::new();
    let percents = counts
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let total: usize = row.iter().sum();
            if total == 0 {
                empty_rows.push(r);
                return vec![0.0; kb];
            }
            row.iter().map(|&c| 100.0 * c as f64 / total as f64).collect()
        })
        .collect();
    Ok(CrossTab {
        row_labels: (0..ka).map(|r| format!("{}{r}", a.method)).collect(),
        col_labels: (0..kb).map(|c| format!("{}{c}", b.method)).collect(),
        counts,
        percents,
        empty_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::Method;
    use proptest::prelude::*;

    fn assignment(labels: &[Option<usize>], method: Method) -> ClusterAssignment {
        ClusterAssignment::from_labels((0..labels.len()).map(|i| format!("d{i}")).collect(), labels.to_vec(), method)
    }

    #[test]
    fn hand_counted() {
        let a = assignment(&[Some(0), Some(0), Some(0), Some(1), Some(1), None, Some(2)], Method::Tom);
        let b = assignment(&[Some(1), Some(1), Some(0), Some(0), None, Some(0), None], Method::Vsm);
        let t = cross_tabulate(&a, &b).unwrap();
        assert_eq!(t.counts, vec![vec![1, 2], vec![1, 0], vec![0, 0]]);
        assert_eq!(t.empty_rows, vec![2]);
        assert_eq!(t.shared_docs(), 4);
        assert!((t.percents[0][1] - 200.0 / 3.0).abs() < 1e-12);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "cluster,vsm0,vsm1\ntom0,33,67\ntom1,100,0\ntom2,0,0\n");
    }

    #[test]
    fn nothing_shared() {
        let a = assignment(&[Some(0), None], Method::Tom);
        let b = assignment(&[None, Some(0)], Method::Vsm);
        assert!(matches!(cross_tabulate(&a, &b), Err(TomError::EmptyCrossTab)));
    }

    fn labels() -> impl Strategy<Value = Vec<Option<usize>>> {
        prop::collection::vec(prop::option::weighted(0.8, 0usize..6), 1..80)
    }

    /// Renumbers labels densely in order of first appearance.
    fn dense(v: Vec<Option<usize>>) -> Vec<Option<usize>> {
        let mut map = HashMap::new();
        v.into_iter().map(|l| l.map(|x| { let n = map.len(); *map.entry(x).or_insert(n) })).collect()
    }

    proptest! {
        #[test]
        fn rows_sum_to_hundred(a in labels(), b in labels()) {
            let n = a.len().min(b.len());
            let (a, b) = (dense(a[..n].to_vec()), dense(b[..n].to_vec()));
            let (a, b) = (assignment(&a, Method::Tom), assignment(&b, Method::Vsm));
            if let Ok(t) = cross_tabulate(&a, &b) {
                for (r, row) in t.percents.iter().enumerate() {
                    if !t.empty_rows.contains(&r) {
                        prop_assert!((row.iter().sum::<f64>() - 100.0).abs() < 0.1);
                    }
                }
                let shared = a.labels().iter().zip(b.labels()).filter(|(x, y)| x.is_some() && y.is_some()).count();
                prop_assert_eq!(t.shared_docs(), shared);
            }
        }

        #[test]
        fn self_tabulation_is_diagonal(a in labels()) {
            let a = assignment(&dense(a), Method::Tom);
            prop_assume!(a.n_clusters() > 0);
            let t = cross_tabulate(&a, &a).unwrap();
            for (r, row) in t.percents.iter().enumerate() {
                for (c, &p) in row.iter().enumerate() {
                    prop_assert_eq!(p, if r == c { 100.0 } else { 0.0 });
                }
            }
        }
    }
}
