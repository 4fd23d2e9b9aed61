use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::descriptors::{extract_descriptors, DescriptorSources};
use super::normalize::{normalize_term, Term};
use super::record::Corpus;
use super::stopwords::StopWords;
use crate::error::{Result, TomError};
use crate::par::Execution;

/// Descriptor extraction and normalization settings shared by every stage
/// that turns records into terms.
#[derive(Debug, Clone)]
pub struct DescriptorOptions {
    pub sources: DescriptorSources,
    pub stopwords: StopWords,
    pub min_len: usize,
}

impl Default for DescriptorOptions {
    fn default() -> Self {
        DescriptorOptions { sources: DescriptorSources::all(), stopwords: StopWords::english(), min_len: 2 }
    }
}

impl DescriptorOptions {
    /// Normalized terms of one record, in descriptor order.
    pub fn record_terms(&self, record: &super::CorpusRecord) -> Vec<Term> {
        extract_descriptors(record, &self.sources)
            .iter()
            .filter_map(|raw| normalize_term(raw, &self.stopwords, self.min_len))
            .collect()
    }
}

/// Sparse term x document count matrix. Terms are indexed in lexicographic
/// order of their canonical form; documents keep corpus order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDocMatrix {
    pub terms: Vec<Term>,
    pub docs: Vec<String>,
    /// Per term: `(doc index, count)` sorted by doc index, counts > 0.
    rows: Vec<Vec<(u32, u32)>>,
    df: Vec<u32>,
}

impl TermDocMatrix {
    /// Assembles a matrix from per-term sparse rows; rows are sorted and
    /// zero entries removed.
    pub fn from_rows(terms: Vec<Term>, docs: Vec<String>, mut rows: Vec<Vec<(u32, u32)>>) -> Result<Self> {
        if terms.len() != rows.len() {
            return Err(TomError::Shape { expected: terms.len(), found: rows.len() });
        }
        for row in &mut rows {
            row.retain(|&(_, c)| c > 0);
            row.sort_unstable_by_key(|&(d, _)| d);
            if row.windows(2).any(|w| w[0].0 == w[1].0) || row.last().is_some_and(|&(d, _)| d as usize >= docs.len()) {
                return Err(TomError::Format("term row has duplicate or out-of-range documents".into()));
            }
        }
        let df = rows.iter().map(|r| r.len() as u32).collect();
        Ok(TermDocMatrix { terms, docs, rows, df })
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn n_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn row(&self, term: usize) -> &[(u32, u32)] {
        &self.rows[term]
    }

    pub fn df(&self, term: usize) -> u32 {
        self.df[term]
    }

    pub fn dfs(&self) -> &[u32] {
        &self.df
    }

    pub fn count(&self, term: usize, doc: usize) -> u32 {
        let row = &self.rows[term];
        row.binary_search_by_key(&(doc as u32), |&(d, _)| d).map(|i| row[i].1).unwrap_or(0)
    }

    /// Total occurrences of `term` across all documents.
    pub fn term_frequency(&self, term: usize) -> u64 {
        self.rows[term].iter().map(|&(_, c)| c as u64).sum()
    }

    pub fn total_count(&self) -> u64 {
        (0..self.n_terms()).map(|t| self.term_frequency(t)).sum()
    }

    pub fn term_index(&self, canonical: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.canonical.as_str().cmp(canonical)).ok()
    }

    /// Document-major view: per document, `(term index, count)` sorted by term.
    pub fn columns(&self) -> Vec<Vec<(u32, u32)>> {
        let mut cols = vec![Vec::new(); self.n_docs()];
        for (t, row) in self.rows.iter().enumerate() {
            for &(d, c) in row {
                cols[d as usize].push((t as u32, c));
            }
        }
        cols
    }

    /// Keeps only the listed term indices (in ascending order); the document
    /// index is unchanged.
    pub fn retain_terms(&self, keep: &[usize]) -> TermDocMatrix {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        TermDocMatrix {
            terms: keep.iter().map(|&t| self.terms[t].clone()).collect(),
            docs: self.docs.clone(),
            rows: keep.iter().map(|&t| self.rows[t].clone()).collect(),
            df: keep.iter().map(|&t| self.df[t]).collect(),
        }
    }

    /// Returns a copy with every row's document index remapped through
    /// `perm` (`new_doc = perm[old_doc]`).
    pub fn permute_docs(&self, perm: &[usize]) -> TermDocMatrix {
        let mut docs = vec![String::new(); self.n_docs()];
        for (old, &new) in perm.iter().enumerate() {
            docs[new] = self.docs[old].clone();
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r: Vec<_> = row.iter().map(|&(d, c)| (perm[d as usize] as u32, c)).collect();
                r.sort_unstable_by_key(|&(d, _)| d);
                r
            })
            .collect();
        TermDocMatrix { terms: self.terms.clone(), docs, rows, df: self.df.clone() }
    }
}

/// Counts the normalized descriptors of every record.
pub fn build_term_doc_matrix(corpus: &Corpus, options: &DescriptorOptions, exec: Execution) -> Result<TermDocMatrix> {
    if corpus.is_empty() {
        return Err(TomError::EmptyCorpus { source_name: corpus.provenance.source.clone(), skipped: 0 });
    }
    let per_doc: Vec<Vec<Term>> = exec.map_slice(&corpus.records, |r| options.record_terms(r));

    // canonical -> (doc -> count, surface form -> occurrences)
    let mut vocab: BTreeMap<&str, (BTreeMap<u32, u32>, HashMap<&str, u64>)> = BTreeMap::new();
    for (d, terms) in per_doc.iter().enumerate() {
        for term in terms {
            let entry = vocab.entry(term.canonical.as_str()).or_default();
            *entry.0.entry(d as u32).or_insert(0) += 1;
            *entry.1.entry(term.display.as_str()).or_insert(0) += 1;
        }
    }
    if vocab.is_empty() {
        return Err(TomError::EmptyVocabulary);
    }

    let mut terms = Vec::with_capacity(vocab.len());
    let mut rows = Vec::with_capacity(vocab.len());
    for (canonical, (docs, surfaces)) in vocab {
        let display = surfaces
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(s, _)| s.to_string())
            .unwrap_or_default();
        terms.push(Term { canonical: canonical.to_string(), display });
        rows.push(docs.into_iter().collect::<Vec<_>>());
    }
    let docs = corpus.records.iter().map(|r| r.id.clone()).collect();
    TermDocMatrix::from_rows(terms, docs, rows)
}
