//! Serialized forms of stage outputs: graph formats, dendrograms, renders
//! and tables.

mod graph;
mod newick;
mod svg;
mod tables;

pub use graph::{basemap_dot, basemap_graphml, term_graph_dot, term_graph_graphml};
pub use newick::{dendrogram_json, dendrogram_newick};
pub use svg::{render_overlay_svg, render_timeline_svg, NodeScale, RenderOptions};
pub use tables::{write_keywords_csv, write_similarity_csv};
