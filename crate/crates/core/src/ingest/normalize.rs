use serde::{Deserialize, Serialize};

use super::porter;
use super::stopwords::StopWords;

/// Separator joining the stemmed words of a multi-word phrase.
pub const PHRASE_SEPARATOR: char = '_';

/// Applying the stemmer repeatedly reaches a fixed point within a few
/// rounds; the bound only guards against pathological input.
const MAX_STEM_ROUNDS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub canonical: String,
    pub display: String,
}

/// Lowercases, strips punctuation, drops stopwords, digit-only and short
/// words, and stems what is left. Multi-word input is rejoined with
/// [`PHRASE_SEPARATOR`]. Returns `None` when nothing survives.
pub fn normalize_term(raw: &str, stopwords: &StopWords, min_len: usize) -> Option<Term> {
    let mut stems = Vec::new();
    let mut surface = Vec::new();
    for word in raw.split(|c: char| c.is_whitespace() || c == PHRASE_SEPARATOR) {
        let cleaned: String = word.to_lowercase().chars().filter(|c| c.is_alphanumeric()).collect();
        if !keep(&cleaned, stopwords, min_len) {
            continue;
        }
        let stemmed = stem_to_fixed_point(&cleaned);
        if !keep(&stemmed, stopwords, min_len) {
            continue;
        }
        stems.push(stemmed);
        surface.push(cleaned);
    }
    if stems.is_empty() {
        return None;
    }
    Some(Term {
        canonical: stems.join(&PHRASE_SEPARATOR.to_string()),
        display: surface.join(" "),
    })
}

fn keep(word: &str, stopwords: &StopWords, min_len: usize) -> bool {
    !word.is_empty()
        && !word.chars().all(|c| c.is_ascii_digit())
        && word.chars().count() >= min_len
        && !stopwords.contains(word)
}

fn stem_to_fixed_point(word: &str) -> String {
    let mut current = porter::stem(word);
    for _ in 0..MAX_STEM_ROUNDS {
        let next = porter::stem(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn canon(raw: &str) -> Option<String> {
        normalize_term(raw, &StopWords::english(), 2).map(|t| t.canonical)
    }

    #[test]
    fn stopwords_and_short_tokens_are_dropped() {
        assert_eq!(canon("the"), None);
        assert_eq!(canon("The"), None);
        assert_eq!(canon("x"), None);
        assert_eq!(canon("1859"), None);
        assert_eq!(canon("--"), None);
    }

    #[test]
    fn lowercase_pass_through() {
        let t = normalize_term("RNA", &StopWords::english(), 2).unwrap();
        assert_eq!(t.canonical, "rna");
        assert_eq!(t.display, "rna");
    }

    #[test]
    fn species_stems_to_speci() {
        // step 1a rewrites the `ies` suffix to `i`; no later rule fires.
        assert_eq!(canon("Species").as_deref(), Some("speci"));
        assert_eq!(porter::stem("species"), "speci");
    }

    #[test]
    fn phrases_are_stemmed_per_word() {
        let t = normalize_term("Species Concept", &StopWords::english(), 2).unwrap();
        assert_eq!(t.canonical, "speci_concept");
        assert_eq!(t.display, "species concept");
        assert_eq!(canon("the species").as_deref(), Some("speci"));
        assert_eq!(canon("Darwin's (1859) theory,").as_deref(), Some("darwin_theori"));
    }

    #[test]
    fn stems_that_collapse_to_digits_are_dropped() {
        assert_eq!(canon("1990s"), None);
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(raw in "[A-Za-z0-9 ,.'-]{0,40}") {
            let sw = StopWords::english();
            if let Some(t) = normalize_term(&raw, &sw, 2) {
                let again = normalize_term(&t.canonical, &sw, 2).map(|t| t.canonical);
                prop_assert_eq!(again, Some(t.canonical.clone()));
                prop_assert!(!t.canonical.chars().any(char::is_whitespace));
                prop_assert!(t.canonical.chars().count() >= 2);
            }
        }
    }
}
