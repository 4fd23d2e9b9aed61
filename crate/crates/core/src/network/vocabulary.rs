use crate::error::{Result, TomError};
use crate::ingest::TermDocMatrix;

/// Keeps the `top_n` terms by document frequency (ties by canonical form),
/// then drops any with `df < min_df`. The document index is unchanged.
pub fn select_vocabulary(matrix: &TermDocMatrix, top_n: usize, min_df: u32) -> Result<TermDocMatrix> {
    if top_n < 2 {
        return Err(TomError::Config(format!("top_n must be at least 2, got {top_n}")));
    }
    let mut ranked: Vec<usize> = (0..matrix.n_terms()).collect();
    // Term indices are already in canonical order, so index order breaks ties.
    ranked.sort_by(|&a, &b| matrix.df(b).cmp(&matrix.df(a)).then(a.cmp(&b)));
    let keep: Vec<usize> = ranked.into_iter().take(top_n).filter(|&t| matrix.df(t) >= min_df).collect();
    if keep.len() < 2 {
        return Err(TomError::VocabularyTooSmall(keep.len()));
    }
    Ok(matrix.retain_terms(&keep))
}
