use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::series::{annual_relative_size, corpus_trendline, moving_average, TimeSeries};
use crate::basemap::Basemap;
use crate::clustering::ClusterAssignment;
use crate::error::{Result, TomError};
use crate::ingest::{extract_descriptors, normalize_term, Corpus, DescriptorOptions, DescriptorSource, DescriptorSources};
use crate::network::TopicPartition;
use crate::overlay::{compute_overlay, stirling_diversity, Overlay};
use crate::ingest::TermDocMatrix;
use crate::par::Execution;

pub const DEFAULT_TOP_KEYWORDS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordCount {
    pub term: String,
    pub canonical: String,
    pub frequency: u64,
}

/// Most frequent normalized keywords (author keywords and reference-title
/// words) across `cluster_docs`. Ties go to the lexicographically smaller
/// canonical form.
pub fn keyword_profile(
    cluster_docs: &[String],
    corpus: &Corpus,
    options: &DescriptorOptions,
    top_k: usize,
) -> Result<Vec<KeywordCount>> {
    if cluster_docs.is_empty() {
        return Err(TomError::InvalidArgument("keyword profile of an empty cluster".into()));
    }
    let sources = DescriptorSources::new([DescriptorSource::AuthorKeywords, DescriptorSource::ReferenceTitles])?;
    let index = corpus.index_by_id();
    // canonical -> (count, surface form -> count)
    let mut tally: BTreeMap<String, (u64, BTreeMap<String, u64>)> = BTreeMap::new();
    for id in cluster_docs {
        let &i = index.get(id.as_str()).ok_or_else(|| TomError::InvalidArgument(format!("unknown document {id}")))?;
        for raw in extract_descriptors(&corpus.records[i], &sources) {
            if let Some(t) = normalize_term(&raw, &options.stopwords, options.min_len) {
                let e = tally.entry(t.canonical).or_default();
                e.0 += 1;
                *e.1.entry(t.display).or_default() += 1;
            }
        }
    }
    if tally.is_empty() {
        log::warn!("cluster of {} documents has no keywords", cluster_docs.len());
    }
    let mut ranked: Vec<KeywordCount> = tally
        .into_iter()
        .map(|(canonical, (frequency, forms))| {
            let term = forms.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(f, _)| f.clone()).unwrap_or_default();
            KeywordCount { term, canonical, frequency }
        })
        .collect();
    ranked.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.canonical.cmp(&b.canonical)));
    ranked.truncate(top_k);
    Ok(ranked)
}

/// Overlay, keywords and the three time series of one cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterProfile {
    pub cluster: usize,
    pub size: usize,
    pub overlay: Overlay,
    pub diversity: f64,
    pub keywords: Vec<KeywordCount>,
    pub annual: TimeSeries,
    pub smoothed: TimeSeries,
    pub corpus_trend: TimeSeries,
    pub undated: usize,
}

#[derive(Debug, Clone)]
pub struct ProfileOptions {
    pub window: usize,
    pub top_keywords: usize,
    pub descriptors: DescriptorOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            window: super::DEFAULT_WINDOW,
            top_keywords: DEFAULT_TOP_KEYWORDS,
            descriptors: DescriptorOptions::default(),
        }
    }
}

/// One profile per cluster, in cluster order. A failing cluster yields an
/// error in its slot without affecting the others.
pub fn build_cluster_profiles(
    assignment: &ClusterAssignment,
    corpus: &Corpus,
    matrix: &TermDocMatrix,
    partition: &TopicPartition,
    basemap: &Basemap,
    options: &ProfileOptions,
    exec: Execution,
) -> Vec<Result<ClusterProfile>> {
    exec.map_range(assignment.n_clusters(), |c| {
        let docs = assignment.members(c);
        let overlay = compute_overlay(&docs, matrix, partition)?;
        let diversity = stirling_diversity(&overlay, &basemap.d)?;
        let keywords = keyword_profile(&docs, corpus, &options.descriptors, options.top_keywords)?;
        let annual = annual_relative_size(&docs, corpus)?;
        let smoothed = moving_average(&annual.series, options.window)?;
        let corpus_trend = corpus_trendline(corpus, options.window)?;
        Ok(ClusterProfile {
            cluster: c,
            size: docs.len(),
            overlay,
            diversity,
            keywords,
            annual: annual.series,
            smoothed,
            corpus_trend,
            undated: annual.undated,
        })
    })
}
