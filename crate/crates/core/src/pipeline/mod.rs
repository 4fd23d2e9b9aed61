//! Configuration-driven orchestration of every stage, with a run manifest.

mod config;
mod stages;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, TomError};

pub use config::{
    default_config_toml, BasemapConfig, ClusteringConfig, DescriptorConfig, ExecutionConfig, GraphConfig, InputConfig,
    OutputConfig, PipelineConfig, TrendConfig, VocabularyConfig, DEFAULT_EDGE_THRESHOLD, DEFAULT_MIN_DF, DEFAULT_TOP_N,
};
pub use stages::*;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub path: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub millis: f64,
}

/// Volatile facts about one run. Nothing outside this block depends on
/// the clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub started_unix: u64,
    pub finished_unix: u64,
    pub timings: Vec<StageTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub status: String,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub layout_seed: u64,
    pub config: PipelineConfig,
    pub completed: Vec<String>,
    pub counts: BTreeMap<String, BTreeMap<String, Value>>,
    pub artifacts: Vec<ArtifactEntry>,
    pub run: RunInfo,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Manifest> {
        Ok(serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST))?)?)
    }

    pub fn is_complete(&self) -> bool {
        self.status == "complete"
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn collect_files(root: &Path, rel: &Path, acc: &mut Vec<ArtifactEntry>) -> Result<()> {
    for entry in fs::read_dir(root.join(rel))? {
        let entry = entry?;
        let path = rel.join(entry.file_name());
        if entry.file_type()?.is_dir() {
            collect_files(root, &path, acc)?;
        } else {
            let name = path.to_string_lossy().replace('\\', "/");
            if name != MANIFEST {
                acc.push(ArtifactEntry { path: name, bytes: entry.metadata()?.len() });
            }
        }
    }
    Ok(())
}

/// Every file under `dir` except the manifest, sorted by relative path.
pub fn list_artifacts(dir: &Path) -> Result<Vec<ArtifactEntry>> {
    let mut acc = Vec::new();
    collect_files(dir, Path::new(""), &mut acc)?;
    acc.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(acc)
}

/// Runs every stage in order into the configured output directory and
/// writes `manifest.json`. On failure the manifest records the failing
/// stage and whatever artifacts exist, and the error names the stage.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Manifest> {
    cfg.validate()?;
    let dir: PathBuf = cfg.output.dir.clone();
    fs::create_dir_all(&dir)?;
    let started_unix = unix_now();
    let mut manifest = Manifest {
        tool: "tom".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        status: "running".into(),
        failed_stage: None,
        error: None,
        layout_seed: cfg.basemap.layout_seed,
        config: cfg.clone(),
        completed: Vec::new(),
        counts: BTreeMap::new(),
        artifacts: Vec::new(),
        run: RunInfo { started_unix, finished_unix: started_unix, timings: Vec::new() },
    };
    let mut failure = None;
    for stage in Stage::ALL {
        let clock = Instant::now();
        let result = stage.run(cfg, &dir);
        manifest.run.timings.push(StageTiming { stage: stage.name().into(), millis: clock.elapsed().as_secs_f64() * 1e3 });
        match result {
            Ok(report) => {
                log::info!("{stage}: {} file(s)", report.outputs.len());
                manifest.completed.push(stage.name().into());
                manifest.counts.insert(stage.name().into(), report.counts);
            }
            Err(e) => {
                log::error!("{stage} failed: {e}");
                manifest.failed_stage = Some(stage.name().into());
                manifest.error = Some(e.to_string());
                failure = Some(TomError::Stage { stage: stage.name().into(), source: Box::new(e) });
                break;
            }
        }
    }
    manifest.status = if failure.is_some() { "failed" } else { "complete" }.into();
    manifest.artifacts = list_artifacts(&dir)?;
    manifest.run.finished_unix = unix_now();
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(dir.join(MANIFEST), text)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}
