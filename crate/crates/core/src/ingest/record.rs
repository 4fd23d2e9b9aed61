use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};

pub const MIN_YEAR: i32 = 1500;
pub const MAX_YEAR: i32 = 2100;

/// One bibliographic document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub author_keywords: Vec<String>,
    #[serde(default)]
    pub reference_titles: Vec<String>,
    #[serde(default, rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
}

impl CorpusRecord {
    pub fn new(id: impl Into<String>) -> Self {
        CorpusRecord {
            id: id.into(),
            year: None,
            title: String::new(),
            author_keywords: Vec::new(),
            reference_titles: Vec::new(),
            abstract_text: None,
        }
    }

    pub fn with_year(mut self, year: i32) -> Self {
        self.year = Some(year);
        self
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    pub fn with_keywords<I, S>(mut self, keywords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.author_keywords = keywords.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_references<I, S>(mut self, refs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.reference_titles = refs.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InputFormat {
    #[serde(rename = "wos-tab")]
    WosTab,
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "jsonl")]
    Jsonl,
}

impl FromStr for InputFormat {
    type Err = TomError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wos-tab" | "wos" => Ok(InputFormat::WosTab),
            "csv" => Ok(InputFormat::Csv),
            "jsonl" | "json-lines" => Ok(InputFormat::Jsonl),
            other => Err(TomError::Config(format!("unknown input format `{other}`"))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::WosTab => "wos-tab",
            InputFormat::Csv => "csv",
            InputFormat::Jsonl => "jsonl",
        })
    }
}

/// Where a corpus came from and how much of it parsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub format: InputFormat,
    pub accepted: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub records: Vec<CorpusRecord>,
    pub provenance: Provenance,
}

impl Corpus {
    /// Builds a corpus from in-memory records, checking id uniqueness and
    /// year range.
    pub fn from_records(records: Vec<CorpusRecord>, source: impl Into<String>) -> Result<Self> {
        let source = source.into();
        if records.is_empty() {
            return Err(TomError::EmptyCorpus { source_name: source, skipped: 0 });
        }
        let mut seen = std::collections::HashSet::new();
        for r in &records {
            if r.id.is_empty() || !seen.insert(r.id.as_str()) {
                return Err(TomError::InvalidArgument(format!("duplicate or empty record id `{}`", r.id)));
            }
            if let Some(y) = r.year {
                if !(MIN_YEAR..=MAX_YEAR).contains(&y) {
                    return Err(TomError::InvalidArgument(format!("year {y} out of range for `{}`", r.id)));
                }
            }
        }
        let accepted = records.len();
        Ok(Corpus {
            records,
            provenance: Provenance { source, format: InputFormat::Jsonl, accepted, skipped: 0 },
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn index_by_id(&self) -> HashMap<&str, usize> {
        self.records.iter().enumerate().map(|(i, r)| (r.id.as_str(), i)).collect()
    }

    /// Inclusive year range over dated records.
    pub fn year_span(&self) -> Option<(i32, i32)> {
        let mut years = self.records.iter().filter_map(|r| r.year);
        let first = years.next()?;
        Some(years.fold((first, first), |(lo, hi), y| (lo.min(y), hi.max(y))))
    }
}
