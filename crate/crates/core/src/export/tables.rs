use std::io::Write;

use crate::error::{Result, TomError};
use crate::matrix::SquareMatrix;
use crate::trends::KeywordCount;

pub fn write_keywords_csv<W: Write>(keywords: &[KeywordCount], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["rank", "term", "canonical", "frequency"])?;
    for (i, k) in keywords.iter().enumerate() {
        w.write_record([(i + 1).to_string(), k.term.clone(), k.canonical.clone(), k.frequency.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Labelled square matrix, values with 6 fractional digits.
pub fn write_similarity_csv<W: Write>(ids: &[String], m: &SquareMatrix, writer: W) -> Result<()> {
    if ids.len() != m.dim() {
        return Err(TomError::Shape { expected: m.dim(), found: ids.len() });
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec![String::new()];
    header.extend(ids.iter().cloned());
    w.write_record(&header)?;
    for (id, row) in ids.iter().zip(m.rows()) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(|v| format!("{v:.6}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
