use serde::{Deserialize, Serialize};

use crate::error::{Result, TomError};
use crate::ingest::Corpus;

pub const DEFAULT_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Annual,
    MovingAverage,
}

/// Per-year values over a contiguous range starting at `first_year`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub first_year: i32,
    pub values: Vec<f64>,
    pub kind: SeriesKind,
}

impl TimeSeries {
    pub fn years(&self) -> Vec<i32> {
        (0..self.values.len() as i32).map(|i| self.first_year + i).collect()
    }

    pub fn last_year(&self) -> i32 {
        self.first_year + self.values.len() as i32 - 1
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["year", "value"])?;
        for (y, v) in self.years().iter().zip(&self.values) {
            w.write_record([y.to_string(), format!("{v:.6}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Annual series plus the number of documents left out for lack of a year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualSeries {
    pub series: TimeSeries,
    pub undated: usize,
}

/// Percentage of dated documents per year, over `span`.
pub(crate) fn annual_percent(years: &[Option<i32>], span: (i32, i32)) -> Result<AnnualSeries> {
    let dated: Vec<i32> = years.iter().flatten().copied().collect();
    if dated.is_empty() {
        return Err(TomError::NoTimeline);
    }
    let (lo, hi) = span;
    let mut counts = vec![0usize; (hi - lo + 1) as usize];
    for &y in &dated {
        if !(lo..=hi).contains(&y) {
            return Err(TomError::InvalidArgument(format!("year {y} outside {lo}..={hi}")));
        }
        counts[(y - lo) as usize] += 1;
    }
    let total = dated.len() as f64;
    Ok(AnnualSeries {
        series: TimeSeries {
            first_year: lo,
            values: counts.iter().map(|&c| 100.0 * c as f64 / total).collect(),
            kind: SeriesKind::Annual,
        },
        undated: years.len() - dated.len(),
    })
}

/// Share of the listed documents per year of the corpus span, in percent of
/// the documents that carry a year.
pub fn annual_relative_size(cluster_docs: &[String], corpus: &Corpus) -> Result<AnnualSeries> {
    let span = corpus.year_span().ok_or(TomError::NoTimeline)?;
    let index = corpus.index_by_id();
    let years = cluster_docs
        .iter()
        .map(|id| {
            index
                .get(id.as_str())
                .map(|&i| corpus.records[i].year)
                .ok_or_else(|| TomError::InvalidArgument(format!("unknown document {id}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = annual_percent(&years, span)?;
    if out.undated > 0 {
        log::info!("{} undated documents left out of the timeline", out.undated);
    }
    Ok(out)
}

/// Centred moving average; near the ends the window is clipped to the
/// points that exist, so fewer values are averaged.
pub fn moving_average(series: &TimeSeries, window: usize) -> Result<TimeSeries> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(TomError::Config(format!("moving-average window must be odd and positive, got {window}")));
    }
    let n = series.values.len();
    let half = window / 2;
    let values = (0..n)
        .map(|i| {
            let slice = &series.values[i.saturating_sub(half)..(i + half + 1).min(n)];
            slice.iter().sum::<f64>() / slice.len() as f64
        })
        .collect();
    Ok(TimeSeries { first_year: series.first_year, values, kind: SeriesKind::MovingAverage })
}

/// Smoothed percentage of all dated corpus documents per year.
pub fn corpus_trendline(corpus: &Corpus, window: usize) -> Result<TimeSeries> {
    let span = corpus.year_span().ok_or(TomError::NoTimeline)?;
    let years: Vec<Option<i32>> = corpus.records.iter().map(|r| r.year).collect();
    moving_average(&annual_percent(&years, span)?.series, window)
}
