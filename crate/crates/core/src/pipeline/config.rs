use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basemap::{DEFAULT_LAYOUT_SEED, DEFAULT_LINK_THRESHOLD};
use crate::clustering::{TreeCutParams, DEFAULT_DEEP_SPLIT, DEFAULT_MIN_CLUSTER_SIZE};
use crate::error::{Result, TomError};
use crate::export::RenderOptions;
use crate::ingest::{DescriptorOptions, DescriptorSources, InputFormat, StopWords};
use crate::network::{DEFAULT_MIN_COMPONENT, DEFAULT_WALK_LENGTH};
use crate::par::Execution;
use crate::trends::{ProfileOptions, DEFAULT_TOP_KEYWORDS, DEFAULT_WINDOW};

pub const DEFAULT_TOP_N: usize = 300;
pub const DEFAULT_MIN_DF: u32 = 5;
pub const DEFAULT_EDGE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub path: PathBuf,
    pub format: InputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorConfig {
    pub sources: DescriptorSources,
    /// One stopword per line; empty selects the built-in English list.
    pub stopwords: String,
    pub min_term_length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VocabularyConfig {
    pub top_n: usize,
    pub min_df: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub edge_threshold: f64,
    pub walk_length: usize,
    pub min_component: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasemapConfig {
    pub link_threshold: f64,
    pub layout_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusteringConfig {
    pub min_cluster_size: usize,
    pub deep_split: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendConfig {
    pub window: usize,
    pub top_keywords: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExecutionConfig {
    pub parallel: bool,
    /// Worker cap; 0 means one per core.
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: InputConfig,
    pub descriptors: DescriptorConfig,
    pub vocabulary: VocabularyConfig,
    pub graph: GraphConfig,
    pub basemap: BasemapConfig,
    pub clustering: ClusteringConfig,
    pub trends: TrendConfig,
    pub render: RenderOptions,
    pub execution: ExecutionConfig,
    pub output: OutputConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: InputConfig { path: PathBuf::from("corpus.jsonl"), format: InputFormat::Jsonl },
            descriptors: DescriptorConfig { sources: DescriptorSources::all(), stopwords: String::new(), min_term_length: 2 },
            vocabulary: VocabularyConfig { top_n: DEFAULT_TOP_N, min_df: DEFAULT_MIN_DF },
            graph: GraphConfig {
                edge_threshold: DEFAULT_EDGE_THRESHOLD,
                walk_length: DEFAULT_WALK_LENGTH,
                min_component: DEFAULT_MIN_COMPONENT,
            },
            basemap: BasemapConfig { link_threshold: DEFAULT_LINK_THRESHOLD, layout_seed: DEFAULT_LAYOUT_SEED },
            clustering: ClusteringConfig { min_cluster_size: DEFAULT_MIN_CLUSTER_SIZE, deep_split: DEFAULT_DEEP_SPLIT },
            trends: TrendConfig { window: DEFAULT_WINDOW, top_keywords: DEFAULT_TOP_KEYWORDS },
            render: RenderOptions::default(),
            execution: ExecutionConfig { parallel: true, threads: 0 },
            output: OutputConfig { dir: PathBuf::from("tom_out") },
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(TomError::Config(msg()))
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| TomError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| TomError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let v = &self.vocabulary;
        check(v.top_n >= 2, || format!("vocabulary.top_n must be at least 2, got {}", v.top_n))?;
        check(v.min_df >= 1, || "vocabulary.min_df must be at least 1".into())?;
        check(self.descriptors.min_term_length >= 1, || "descriptors.min_term_length must be at least 1".into())?;
        let g = &self.graph;
        check((0.0..1.0).contains(&g.edge_threshold), || format!("graph.edge_threshold must lie in [0, 1), got {}", g.edge_threshold))?;
        check(g.walk_length >= 1, || "graph.walk_length must be at least 1".into())?;
        check(g.min_component >= 1, || "graph.min_component must be at least 1".into())?;
        let lt = self.basemap.link_threshold;
        check((0.0..=1.0).contains(&lt), || format!("basemap.link_threshold must lie in [0, 1], got {lt}"))?;
        let seed = self.basemap.layout_seed;
        check(i64::try_from(seed).is_ok(), || format!("basemap.layout_seed must fit in a signed 64-bit integer, got {seed}"))?;
        self.tree_cut().validate()?;
        let w = self.trends.window;
        check(!w.is_multiple_of(2), || format!("trends.window must be odd and positive, got {w}"))?;
        check(self.trends.top_keywords >= 1, || "trends.top_keywords must be at least 1".into())?;
        self.render.validate()
    }

    pub fn tree_cut(&self) -> TreeCutParams {
        TreeCutParams { min_cluster_size: self.clustering.min_cluster_size, deep_split: self.clustering.deep_split }
    }

    pub fn execution(&self) -> Execution {
        if self.execution.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    pub fn descriptor_options(&self) -> Result<DescriptorOptions> {
        let stopwords = if self.descriptors.stopwords.is_empty() {
            StopWords::english()
        } else {
            StopWords::from_reader(std::fs::File::open(&self.descriptors.stopwords)?)?
        };
        Ok(DescriptorOptions {
            sources: self.descriptors.sources.clone(),
            stopwords,
            min_len: self.descriptors.min_term_length,
        })
    }

    pub fn profile_options(&self) -> Result<ProfileOptions> {
        Ok(ProfileOptions {
            window: self.trends.window,
            top_keywords: self.trends.top_keywords,
            descriptors: self.descriptor_options()?,
        })
    }
}

/// The default configuration with every key written out.
pub fn default_config_toml() -> String {
    let body = PipelineConfig::default().to_toml().expect("default config serializes");
    format!(
        "# Topic overlay mapping pipeline configuration.\n\
         # input.format: jsonl | csv | wos-tab\n\
         # descriptors.stopwords: path to a word list, empty for the built-in English list\n\
         # render.node_scale: area | radius\n\
         # execution.threads: 0 uses every core\n\n{body}"
    )
}
