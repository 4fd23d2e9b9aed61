//! GraphML and DOT writers for the term graph and the basemap.

use std::fmt::Write;

use crate::basemap::Basemap;
use crate::error::{Result, TomError};
use crate::network::{TermGraph, TopicPartition};

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

const GRAPHML_HEAD: &str = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";

fn check_partition(graph: &TermGraph, partition: Option<&TopicPartition>) -> Result<()> {
    match partition {
        Some(p) if p.n_nodes() != graph.n_nodes() => Err(TomError::Shape { expected: graph.n_nodes(), found: p.n_nodes() }),
        _ => Ok(()),
    }
}

/// Term graph as GraphML; the topic attribute is written when a partition
/// is given.
pub fn term_graph_graphml(graph: &TermGraph, partition: Option<&TopicPartition>) -> Result<String> {
    check_partition(graph, partition)?;
    let mut s = String::from(GRAPHML_HEAD);
    s.push_str("  <key id=\"canonical\" for=\"node\" attr.name=\"canonical\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"display\" for=\"node\" attr.name=\"display\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"frequency\" for=\"node\" attr.name=\"frequency\" attr.type=\"long\"/>\n");
    s.push_str("  <key id=\"topic\" for=\"node\" attr.name=\"topic\" attr.type=\"int\"/>\n");
    s.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    s.push_str("  <graph id=\"termgraph\" edgedefault=\"undirected\">\n");
    for (i, node) in graph.nodes().iter().enumerate() {
        let _ = write!(
            s,
            "    <node id=\"n{i}\"><data key=\"canonical\">{}</data><data key=\"display\">{}</data><data key=\"frequency\">{}</data>",
            xml_escape(&node.term.canonical),
            xml_escape(&node.term.display),
            node.frequency
        );
        if let Some(p) = partition {
            let _ = write!(s, "<data key=\"topic\">{}</data>", p.topic_of(i));
        }
        s.push_str("</node>\n");
    }
    for e in graph.edges() {
        let _ = writeln!(s, "    <edge source=\"n{}\" target=\"n{}\"><data key=\"weight\">{:.6}</data></edge>", e.u, e.v, e.weight);
    }
    s.push_str("  </graph>\n</graphml>\n");
    Ok(s)
}

pub fn term_graph_dot(graph: &TermGraph, partition: Option<&TopicPartition>) -> Result<String> {
    check_partition(graph, partition)?;
    let mut s = String::from("graph termgraph {\n");
    for (i, node) in graph.nodes().iter().enumerate() {
        let _ = write!(
            s,
            "  n{i} [canonical=\"{}\", display=\"{}\", frequency={}",
            dot_escape(&node.term.canonical),
            dot_escape(&node.term.display),
            node.frequency
        );
        if let Some(p) = partition {
            let _ = write!(s, ", topic={}", p.topic_of(i));
        }
        s.push_str("];\n");
    }
    for e in graph.edges() {
        let _ = writeln!(s, "  n{} -- n{} [weight={:.6}];", e.u, e.v, e.weight);
    }
    s.push_str("}\n");
    Ok(s)
}

/// Basemap as GraphML: every topic, and links with S above the threshold.
pub fn basemap_graphml(basemap: &Basemap) -> String {
    let mut s = String::from(GRAPHML_HEAD);
    s.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"members\" for=\"node\" attr.name=\"members\" attr.type=\"int\"/>\n");
    s.push_str("  <key id=\"residual\" for=\"node\" attr.name=\"residual\" attr.type=\"boolean\"/>\n");
    s.push_str("  <key id=\"S\" for=\"edge\" attr.name=\"S\" attr.type=\"double\"/>\n");
    s.push_str("  <graph id=\"basemap\" edgedefault=\"undirected\">\n");
    for t in &basemap.topics {
        let _ = writeln!(
            s,
            "    <node id=\"t{}\"><data key=\"label\">{}</data><data key=\"members\">{}</data><data key=\"residual\">{}</data></node>",
            t.id,
            xml_escape(&t.labels.join(", ")),
            t.members,
            t.residual
        );
    }
    for (i, j, v) in basemap.links() {
        let _ = writeln!(s, "    <edge source=\"t{i}\" target=\"t{j}\"><data key=\"S\">{v:.6}</data></edge>");
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

pub fn basemap_dot(basemap: &Basemap) -> String {
    let mut s = String::from("graph basemap {\n");
    for t in &basemap.topics {
        let _ = writeln!(
            s,
            "  t{} [label=\"{}\", members={}, residual={}];",
            t.id,
            dot_escape(&t.labels.join(", ")),
            t.members,
            t.residual
        );
    }
    for (i, j, v) in basemap.links() {
        let _ = writeln!(s, "  t{i} -- t{j} [S={v:.6}];");
    }
    s.push_str("}\n");
    s
}
