use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read};

use crate::error::Result;

const ENGLISH: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "among", "an",
    "and", "any", "are", "aren", "as", "at", "be", "because", "been", "before", "being",
    "below", "between", "both", "but", "by", "can", "cannot", "could", "couldn", "did",
    "didn", "do", "does", "doesn", "doing", "don", "down", "during", "each", "either",
    "etc", "few", "for", "from", "further", "had", "hadn", "has", "hasn", "have", "haven",
    "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
    "however", "i", "if", "in", "into", "is", "isn", "it", "its", "itself", "just", "let",
    "may", "me", "might", "more", "most", "must", "mustn", "my", "myself", "neither", "no",
    "nor", "not", "now", "of", "off", "often", "on", "once", "only", "or", "other", "our",
    "ours", "ourselves", "out", "over", "own", "per", "same", "shall", "shan", "she",
    "should", "shouldn", "since", "so", "some", "such", "than", "that", "the", "their",
    "theirs", "them", "themselves", "then", "there", "therefore", "these", "they", "this",
    "those", "though", "through", "thus", "to", "too", "toward", "towards", "under",
    "until", "up", "upon", "us", "very", "via", "was", "wasn", "we", "were", "weren",
    "what", "when", "where", "whereas", "whether", "which", "while", "who", "whom", "whose",
    "why", "will", "with", "within", "without", "won", "would", "wouldn", "yet", "you",
    "your", "yours", "yourself", "yourselves",
];

/// Lowercase stopword set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    /// The built-in English list.
    pub fn english() -> Self {
        StopWords(ENGLISH.iter().map(|w| w.to_string()).collect())
    }

    pub fn empty() -> Self {
        StopWords(HashSet::new())
    }

    /// Reads one word per line; blank lines and `#` comments are ignored.
    pub fn from_reader(reader: impl Read) -> Result<Self> {
        let mut words = HashSet::new();
        for line in BufReader::new(reader).lines() {
            let line = line?;
            let word = line.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            words.insert(word.to_lowercase());
        }
        Ok(StopWords(words))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopWords(words.into_iter().map(|w| w.as_ref().to_lowercase()).collect())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for StopWords {
    fn default() -> Self {
        Self::english()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_list_has_expected_size() {
        let sw = StopWords::english();
        assert!((160..=200).contains(&sw.len()), "{}", sw.len());
        assert!(sw.contains("the"));
        assert!(!sw.contains("species"));
    }

    #[test]
    fn file_override_skips_comments() {
        let sw = StopWords::from_reader("# custom\nFoo\n\n bar \n".as_bytes()).unwrap();
        assert_eq!(sw.len(), 2);
        assert!(sw.contains("foo") && sw.contains("bar"));
    }
}
