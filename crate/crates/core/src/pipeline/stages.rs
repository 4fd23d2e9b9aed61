use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use super::config::PipelineConfig;
use crate::basemap::{basemap_layout, build_basemap, Basemap};
use crate::clustering::{tom_cluster, vsm_cluster, ClusterAssignment, Clustering};
use crate::error::{Result, TomError};
use crate::export;
use crate::ingest::{build_term_doc_matrix, parse_records, Corpus, TermDocMatrix};
use crate::network::{build_term_graph, detect_topics_with, select_vocabulary, TermGraph, TopicPartition};
use crate::overlay::{compute_overlay, document_overlays, Overlay};
use crate::trends::{build_cluster_profiles, cross_tabulate, ClusterProfile};

pub const CORPUS: &str = "corpus.json";
pub const MATRIX_DIR: &str = "matrix";
pub const FULL_MATRIX: &str = "matrix/full.json";
pub const MATRIX: &str = "matrix/vocabulary.json";
pub const TERMS: &str = "matrix/terms.csv";
pub const TERM_GRAPH: &str = "termgraph.graphml";
pub const TERM_GRAPH_JSON: &str = "termgraph.json";
pub const TOPICS: &str = "topics.json";
pub const BASEMAP: &str = "basemap.json";
pub const BASEMAP_GRAPHML: &str = "basemap.graphml";
pub const BASEMAP_SVG: &str = "basemap.svg";
pub const OVERLAYS: &str = "overlays.json";
pub const TOM_NEWICK: &str = "tom_dendrogram.newick";
pub const TOM_DENDROGRAM: &str = "tom_dendrogram.json";
pub const TOM_CLUSTERS: &str = "tom_clusters.csv";
pub const VSM_NEWICK: &str = "vsm_dendrogram.newick";
pub const VSM_DENDROGRAM: &str = "vsm_dendrogram.json";
pub const VSM_CLUSTERS: &str = "vsm_clusters.csv";
pub const CROSSTAB: &str = "crosstab.csv";
pub const PROFILES_DIR: &str = "profiles";
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    TermGraph,
    Topics,
    Basemap,
    Overlay,
    Cluster,
    Baseline,
    Trends,
    CrossTab,
    Render,
}

impl Stage {
    pub const ALL: [Stage; 10] = [
        Stage::Ingest,
        Stage::TermGraph,
        Stage::Topics,
        Stage::Basemap,
        Stage::Overlay,
        Stage::Cluster,
        Stage::Baseline,
        Stage::Trends,
        Stage::CrossTab,
        Stage::Render,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::TermGraph => "termgraph",
            Stage::Topics => "topics",
            Stage::Basemap => "basemap",
            Stage::Overlay => "overlay",
            Stage::Cluster => "cluster",
            Stage::Baseline => "baseline",
            Stage::Trends => "trends",
            Stage::CrossTab => "crosstab",
            Stage::Render => "render",
        }
    }

    /// Runs this stage alone, reading upstream artifacts from `dir`.
    pub fn run(self, cfg: &PipelineConfig, dir: &Path) -> Result<StageReport> {
        fs::create_dir_all(dir)?;
        let out = Out { dir, report: StageReport::default() };
        match self {
            Stage::Ingest => ingest(cfg, out),
            Stage::TermGraph => termgraph(cfg, out),
            Stage::Topics => topics(cfg, out),
            Stage::Basemap => basemap(cfg, out),
            Stage::Overlay => overlay(cfg, out),
            Stage::Cluster => cluster(cfg, out),
            Stage::Baseline => baseline(cfg, out),
            Stage::Trends => trends(cfg, out),
            Stage::CrossTab => crosstab(out),
            Stage::Render => render(cfg, out),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = TomError;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| TomError::InvalidArgument(format!("unknown stage `{s}`")))
    }
}

/// Files written and counts observed by one stage.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageReport {
    pub outputs: Vec<String>,
    pub counts: BTreeMap<String, Value>,
}

struct Out<'a> {
    dir: &'a Path,
    report: StageReport,
}

impl Out<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn bytes(&mut self, name: &str, data: &[u8]) -> Result<()> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, data)?;
        self.report.outputs.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.bytes(name, text.as_bytes())
    }

    fn with_writer(&mut self, name: &str, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.bytes(name, &buf)
    }

    fn count(&mut self, key: &str, value: impl Into<Value>) {
        self.report.counts.insert(key.to_string(), value.into());
    }

    fn load<T: DeserializeOwned>(&self, name: &str) -> Result<T> {
        let file = open(&self.path(name))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| TomError::Format(format!("{name}: {e}")))
    }

    fn load_assignment(&self, name: &str) -> Result<ClusterAssignment> {
        ClusterAssignment::read_csv(BufReader::new(open(&self.path(name))?))
    }

    fn done(self) -> Result<StageReport> {
        Ok(self.report)
    }
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| TomError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn ingest(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let exec = cfg.execution();
    let source = cfg.input.path.display().to_string();
    let corpus = parse_records(BufReader::new(open(&cfg.input.path)?), cfg.input.format, &source)?;
    let full = build_term_doc_matrix(&corpus, &cfg.descriptor_options()?, exec)?;
    let selected = select_vocabulary(&full, cfg.vocabulary.top_n, cfg.vocabulary.min_df)?;
    out.json(CORPUS, &corpus)?;
    out.json(FULL_MATRIX, &full)?;
    out.json(MATRIX, &selected)?;
    out.with_writer(TERMS, |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["index", "canonical", "display", "df", "frequency"])?;
        for (i, t) in selected.terms.iter().enumerate() {
            w.write_record([
                i.to_string(),
                t.canonical.clone(),
                t.display.clone(),
                selected.df(i).to_string(),
                selected.term_frequency(i).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    out.count("documents", corpus.len());
    out.count("skipped_records", corpus.provenance.skipped);
    out.count("terms", full.n_terms());
    out.count("vocabulary", selected.n_terms());
    out.done()
}

fn termgraph(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let matrix: TermDocMatrix = out.load(MATRIX)?;
    let graph = build_term_graph(&matrix, cfg.graph.edge_threshold, cfg.execution())?;
    out.bytes(TERM_GRAPH, export::term_graph_graphml(&graph, None)?.as_bytes())?;
    out.json(TERM_GRAPH_JSON, &graph)?;
    out.count("nodes", graph.n_nodes());
    out.count("edges", graph.edges().len());
    out.count("components", graph.n_components());
    out.done()
}

fn topics(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let graph: TermGraph = out.load(TERM_GRAPH_JSON)?;
    let partition = detect_topics_with(&graph, cfg.graph.walk_length, cfg.graph.min_component, cfg.execution())?;
    out.json(TOPICS, &partition)?;
    out.count("topics", partition.k());
    out.count("residual", partition.residual.is_some());
    out.count("modularity", partition.modularity);
    out.done()
}

fn basemap(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let graph: TermGraph = out.load(TERM_GRAPH_JSON)?;
    let partition: TopicPartition = out.load(TOPICS)?;
    let mut basemap = build_basemap(&graph, &partition, cfg.basemap.link_threshold)?;
    basemap.layout = Some(basemap_layout(&basemap, cfg.basemap.layout_seed));
    out.json(BASEMAP, &basemap)?;
    out.bytes(BASEMAP_GRAPHML, export::basemap_graphml(&basemap).as_bytes())?;
    out.count("topics", basemap.k());
    out.count("links", basemap.links().len());
    out.count("layout_seed", cfg.basemap.layout_seed);
    out.done()
}

fn overlay(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let matrix: TermDocMatrix = out.load(MATRIX)?;
    let partition: TopicPartition = out.load(TOPICS)?;
    let overlays = document_overlays(&matrix, &partition, cfg.execution())?;
    out.count("documents", overlays.len());
    out.count("zero_overlays", overlays.iter().filter(|o| o.is_zero()).count());
    out.json(OVERLAYS, &overlays)?;
    out.done()
}

fn write_clustering(out: &mut Out, c: &Clustering, newick: &str, json: &str, csv_name: &str) -> Result<()> {
    out.bytes(newick, export::dendrogram_newick(&c.dendrogram).as_bytes())?;
    out.bytes(json, export::dendrogram_json(&c.dendrogram)?.as_bytes())?;
    out.with_writer(csv_name, |buf| c.assignment.write_csv(buf))?;
    out.count("clusters", c.assignment.n_clusters());
    out.count("unassigned", c.assignment.n_unassigned());
    out.count("excluded", c.assignment.excluded.len());
    Ok(())
}

fn cluster(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let overlays: Vec<Overlay> = out.load(OVERLAYS)?;
    let basemap: Basemap = out.load(BASEMAP)?;
    let c = tom_cluster(&overlays, &basemap.s, cfg.tree_cut(), cfg.execution())?;
    write_clustering(&mut out, &c, TOM_NEWICK, TOM_DENDROGRAM, TOM_CLUSTERS)?;
    out.done()
}

fn baseline(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let matrix: TermDocMatrix = out.load(MATRIX)?;
    let c = vsm_cluster(&matrix, cfg.tree_cut(), cfg.execution())?;
    write_clustering(&mut out, &c, VSM_NEWICK, VSM_DENDROGRAM, VSM_CLUSTERS)?;
    out.done()
}

fn profile_dir(cluster: usize) -> String {
    format!("{PROFILES_DIR}/{cluster}")
}

fn trends(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let assignment = out.load_assignment(TOM_CLUSTERS)?;
    let corpus: Corpus = out.load(CORPUS)?;
    let matrix: TermDocMatrix = out.load(MATRIX)?;
    let partition: TopicPartition = out.load(TOPICS)?;
    let basemap: Basemap = out.load(BASEMAP)?;
    let stale = out.path(PROFILES_DIR);
    if stale.exists() {
        fs::remove_dir_all(&stale)?;
    }
    let profiles = build_cluster_profiles(
        &assignment,
        &corpus,
        &matrix,
        &partition,
        &basemap,
        &cfg.profile_options()?,
        cfg.execution(),
    );
    let mut failed = Vec::new();
    for (c, profile) in profiles.into_iter().enumerate() {
        match profile {
            Ok(p) => {
                let dir = profile_dir(c);
                out.json(&format!("{dir}/profile.json"), &p)?;
                out.with_writer(&format!("{dir}/keywords.csv"), |buf| export::write_keywords_csv(&p.keywords, buf))?;
            }
            Err(e) => {
                log::warn!("profile of cluster {c} skipped: {e}");
                failed.push(Value::from(format!("{c}: {e}")));
            }
        }
    }
    out.count("profiles", assignment.n_clusters() - failed.len());
    out.count("failed_profiles", failed);
    out.done()
}

fn crosstab(mut out: Out) -> Result<StageReport> {
    let tom = out.load_assignment(TOM_CLUSTERS)?;
    let vsm = out.load_assignment(VSM_CLUSTERS)?;
    let table = cross_tabulate(&tom, &vsm)?;
    out.with_writer(CROSSTAB, |buf| table.write_csv(buf))?;
    out.count("shared_documents", table.shared_docs());
    out.count("empty_rows", table.empty_rows.len());
    out.done()
}

fn render(cfg: &PipelineConfig, mut out: Out) -> Result<StageReport> {
    let basemap: Basemap = out.load(BASEMAP)?;
    let matrix: TermDocMatrix = out.load(MATRIX)?;
    let partition: TopicPartition = out.load(TOPICS)?;
    let whole = compute_overlay(&matrix.docs, &matrix, &partition)?;
    out.bytes(BASEMAP_SVG, export::render_overlay_svg(&basemap, &whole, &cfg.render)?.as_bytes())?;
    let root = out.path(PROFILES_DIR);
    let mut clusters: Vec<usize> = match fs::read_dir(&root) {
        Ok(entries) => entries
            .filter_map(|e| e.ok()?.file_name().to_str()?.parse().ok())
            .collect(),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    clusters.sort_unstable();
    for &c in &clusters {
        let dir = profile_dir(c);
        let profile: ClusterProfile = out.load(&format!("{dir}/profile.json"))?;
        out.bytes(&format!("{dir}/overlay.svg"), export::render_overlay_svg(&basemap, &profile.overlay, &cfg.render)?.as_bytes())?;
        out.bytes(&format!("{dir}/timeline.svg"), export::render_timeline_svg(&profile, &cfg.render)?.as_bytes())?;
    }
    out.count("profiles_rendered", clusters.len());
    out.done()
}
