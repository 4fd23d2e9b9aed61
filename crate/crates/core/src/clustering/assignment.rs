use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tom,
    Vsm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Tom => "tom",
            Method::Vsm => "vsm",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = TomError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tom" => Ok(Method::Tom),
            "vsm" => Ok(Method::Vsm),
            other => Err(TomError::Format(format!("unknown method tag {other:?}"))),
        }
    }
}

const UNASSIGNED: &str = "unassigned";
const EXCLUDED: &str = "excluded";

/// Cluster label per clustered document. Documents that could not enter the
/// clustering at all (for example an all-zero overlay) are listed in
/// `excluded`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub method: Method,
    doc_ids: Vec<String>,
    labels: Vec<Option<usize>>,
    pub excluded: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    doc_id: String,
    cluster: String,
    method: Method,
}

impl ClusterAssignment {
    /// Renumbers nothing; labels must already be dense.
    pub fn from_labels(doc_ids: Vec<String>, labels: Vec<Option<usize>>, method: Method) -> ClusterAssignment {
        debug_assert_eq!(doc_ids.len(), labels.len());
        ClusterAssignment { method, doc_ids, labels, excluded: Vec::new() }
    }

    pub fn with_excluded(mut self, excluded: Vec<String>) -> Self {
        self.excluded = excluded;
        self
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn label_of(&self, doc_id: &str) -> Option<usize> {
        self.doc_ids.iter().position(|d| d == doc_id).and_then(|i| self.labels[i])
    }

    pub fn n_clusters(&self) -> usize {
        self.labels.iter().flatten().max().map_or(0, |&m| m + 1)
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.n_clusters()];
        for &l in self.labels.iter().flatten() {
            s[l] += 1;
        }
        s
    }

    pub fn n_unassigned(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    /// Document ids of cluster `c`, in input order.
    pub fn members(&self, c: usize) -> Vec<String> {
        self.doc_ids.iter().zip(&self.labels).filter(|(_, &l)| l == Some(c)).map(|(d, _)| d.clone()).collect()
    }

    pub fn unassigned(&self) -> Vec<String> {
        self.doc_ids.iter().zip(&self.labels).filter(|(_, l)| l.is_none()).map(|(d, _)| d.clone()).collect()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (d, l) in self.doc_ids.iter().zip(&self.labels) {
            let cluster = l.map_or(UNASSIGNED.to_string(), |c| c.to_string());
            w.serialize(Row { doc_id: d.clone(), cluster, method: self.method })?;
        }
        for d in &self.excluded {
            w.serialize(Row { doc_id: d.clone(), cluster: EXCLUDED.into(), method: self.method })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<ClusterAssignment> {
        let mut method = None;
        let (mut doc_ids, mut labels, mut excluded) = (Vec::new(), Vec::new(), Vec::new());
        for row in csv::Reader::from_reader(reader).deserialize::<Row>() {
            let row = row?;
            if *method.get_or_insert(row.method) != row.method {
                return Err(TomError::Format("mixed method tags in one assignment".into()));
            }
            match row.cluster.as_str() {
                EXCLUDED => excluded.push(row.doc_id),
                UNASSIGNED => {
                    doc_ids.push(row.doc_id);
                    labels.push(None);
                }
                c => {
                    let id = c.parse().map_err(|_| TomError::Format(format!("bad cluster label {c:?}")))?;
                    doc_ids.push(row.doc_id);
                    labels.push(Some(id));
                }
            }
        }
        let method = method.ok_or_else(|| TomError::Format("empty cluster assignment".into()))?;
        Ok(ClusterAssignment { method, doc_ids, labels, excluded })
    }
}
