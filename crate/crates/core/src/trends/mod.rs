//! Per-cluster profiles, time series and clustering cross-tabulation.

mod crosstab;
mod profiles;
mod series;

pub use crosstab::{cross_tabulate, CrossTab};
pub use profiles::{build_cluster_profiles, keyword_profile, ClusterProfile, KeywordCount, ProfileOptions, DEFAULT_TOP_KEYWORDS};
pub use series::{annual_relative_size, corpus_trendline, moving_average, AnnualSeries, SeriesKind, TimeSeries, DEFAULT_WINDOW};
