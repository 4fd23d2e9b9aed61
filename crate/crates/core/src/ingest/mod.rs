//! Corpus ingestion: record parsing, descriptor extraction, term
//! normalization and the term-document matrix.

mod descriptors;
mod normalize;
mod parse;
pub mod porter;
mod record;
mod stopwords;
mod tdm;

pub use descriptors::{extract_descriptors, DescriptorSource, DescriptorSources};
pub use normalize::{normalize_term, Term, PHRASE_SEPARATOR};
pub use parse::{cited_reference_title, parse_records};
pub use record::{Corpus, CorpusRecord, InputFormat, Provenance, MAX_YEAR, MIN_YEAR};
pub use stopwords::StopWords;
pub use tdm::{build_term_doc_matrix, DescriptorOptions, TermDocMatrix};
