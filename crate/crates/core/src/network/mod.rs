//! Co-word term graph and topic detection.

mod graph;
mod modularity;
mod partition;
mod vocabulary;
mod walktrap;

pub use graph::{build_term_graph, cosine_similarity_terms, Edge, GraphNode, TermGraph};
pub use modularity::modularity;
pub use partition::TopicPartition;
pub use vocabulary::select_vocabulary;
pub use walktrap::{detect_topics, detect_topics_with, DEFAULT_MIN_COMPONENT, DEFAULT_WALK_LENGTH, LABEL_TERMS};
