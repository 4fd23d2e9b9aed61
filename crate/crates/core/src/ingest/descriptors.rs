use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::record::CorpusRecord;
use crate::error::{Result, TomError};

/// Record field contributing textual descriptors. Variant order is the
/// order in which fields are concatenated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorSource {
    AuthorKeywords,
    Title,
    ReferenceTitles,
}

impl FromStr for DescriptorSource {
    type Err = TomError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "author_keywords" | "keywords" => Ok(DescriptorSource::AuthorKeywords),
            "title" => Ok(DescriptorSource::Title),
            "reference_titles" | "references" => Ok(DescriptorSource::ReferenceTitles),
            other => Err(TomError::Config(format!("unknown descriptor source `{other}`"))),
        }
    }
}

impl fmt::Display for DescriptorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DescriptorSource::AuthorKeywords => "author_keywords",
            DescriptorSource::Title => "title",
            DescriptorSource::ReferenceTitles => "reference_titles",
        })
    }
}

/// Non-empty, sorted, de-duplicated set of sources.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<DescriptorSource>", into = "Vec<DescriptorSource>")]
pub struct DescriptorSources(Vec<DescriptorSource>);

impl DescriptorSources {
    pub fn new(sources: impl IntoIterator<Item = DescriptorSource>) -> Result<Self> {
        let mut v: Vec<_> = sources.into_iter().collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(TomError::Config("descriptor sources must not be empty".into()));
        }
        Ok(DescriptorSources(v))
    }

    pub fn all() -> Self {
        DescriptorSources(vec![
            DescriptorSource::AuthorKeywords,
            DescriptorSource::Title,
            DescriptorSource::ReferenceTitles,
        ])
    }

    pub fn contains(&self, source: DescriptorSource) -> bool {
        self.0.contains(&source)
    }

    pub fn iter(&self) -> impl Iterator<Item = DescriptorSource> + '_ {
        self.0.iter().copied()
    }
}

impl Default for DescriptorSources {
    fn default() -> Self {
        Self::all()
    }
}

impl TryFrom<Vec<DescriptorSource>> for DescriptorSources {
    type Error = TomError;

    fn try_from(v: Vec<DescriptorSource>) -> Result<Self> {
        DescriptorSources::new(v)
    }
}

impl From<DescriptorSources> for Vec<DescriptorSource> {
    fn from(s: DescriptorSources) -> Self {
        s.0
    }
}

/// Raw descriptor strings of `record` for the selected fields, in field
/// order. Multi-word author keywords are emitted whole and then word by word.
pub fn extract_descriptors(record: &CorpusRecord, sources: &DescriptorSources) -> Vec<String> {
    let mut out = Vec::new();
    for source in sources.iter() {
        match source {
            DescriptorSource::AuthorKeywords => {
                for kw in &record.author_keywords {
                    let kw = kw.trim();
                    if kw.is_empty() {
                        continue;
                    }
                    out.push(kw.to_string());
                    let words: Vec<&str> = kw.split_whitespace().collect();
                    if words.len() > 1 {
                        out.extend(words.into_iter().map(String::from));
                    }
                }
            }
            DescriptorSource::Title => out.extend(record.title.split_whitespace().map(String::from)),
            DescriptorSource::ReferenceTitles => {
                for title in &record.reference_titles {
                    out.extend(title.split_whitespace().map(String::from));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use DescriptorSource::*;

    #[test]
    fn phrase_plus_tokens() {
        let r = CorpusRecord::new("a").with_keywords(["species concept"]);
        let s = DescriptorSources::new([AuthorKeywords]).unwrap();
        assert_eq!(extract_descriptors(&r, &s), ["species concept", "species", "concept"]);
    }

    #[test]
    fn title_whitespace_tokens() {
        let r = CorpusRecord::new("a").with_title("On the species problem");
        let s = DescriptorSources::new([Title]).unwrap();
        assert_eq!(extract_descriptors(&r, &s), ["On", "the", "species", "problem"]);
    }

    #[test]
    fn fields_are_concatenated_in_fixed_order() {
        let r = CorpusRecord::new("a")
            .with_title("Cladistic species")
            .with_keywords(["phylogeny", "natural kinds"])
            .with_references(["ORIGIN SPECIES"]);
        // Requested order does not matter.
        let s = DescriptorSources::new([Title, AuthorKeywords]).unwrap();
        assert_eq!(
            extract_descriptors(&r, &s),
            ["phylogeny", "natural kinds", "natural", "kinds", "Cladistic", "species"]
        );
        let all = extract_descriptors(&r, &DescriptorSources::all());
        assert_eq!(&all[all.len() - 2..], ["ORIGIN", "SPECIES"]);
    }

    #[test]
    fn empty_fields_and_sources() {
        let r = CorpusRecord::new("a");
        assert!(extract_descriptors(&r, &DescriptorSources::all()).is_empty());
        assert!(DescriptorSources::new([]).is_err());
    }
}
