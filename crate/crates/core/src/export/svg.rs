//! Deterministic SVG renders of overlay maps and cluster timelines.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::graph::xml_escape;
use crate::basemap::Basemap;
use crate::error::{Result, TomError};
use crate::overlay::Overlay;
use crate::trends::ClusterProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeScale {
    /// Circle area proportional to the share.
    Area,
    /// Circle radius proportional to the share.
    Radius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderOptions {
    pub node_scale: NodeScale,
    /// Shares at or below this are drawn as minimum-size outlines.
    pub min_render_share: f64,
    pub min_radius: f64,
    pub max_radius: f64,
    /// Fill colours, indexed by topic id modulo length.
    pub palette: Vec<String>,
    /// Links with S above this are drawn.
    pub edge_threshold: f64,
    pub show_residual: bool,
    pub width: u32,
    pub height: u32,
    pub label_terms: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            node_scale: NodeScale::Area,
            min_render_share: 0.0,
            min_radius: 3.0,
            max_radius: 60.0,
            palette: [
                "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
                "#17becf", "#aec7e8", "#ffbb78",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            edge_threshold: 0.1,
            show_residual: false,
            width: 800,
            height: 800,
            label_terms: 3,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.min_render_share) {
            return Err(TomError::Config(format!("min_render_share must lie in [0, 1), got {}", self.min_render_share)));
        }
        if !(self.min_radius > 0.0 && self.max_radius >= self.min_radius) {
            return Err(TomError::Config("radii must satisfy 0 < min_radius <= max_radius".into()));
        }
        if !(0.0..=1.0).contains(&self.edge_threshold) {
            return Err(TomError::Config(format!("edge_threshold must lie in [0, 1], got {}", self.edge_threshold)));
        }
        if self.palette.is_empty() {
            return Err(TomError::Config("palette must not be empty".into()));
        }
        if self.width < 100 || self.height < 100 {
            return Err(TomError::Config("canvas must be at least 100x100".into()));
        }
        Ok(())
    }

    fn radius(&self, share: f64) -> f64 {
        let scaled = match self.node_scale {
            NodeScale::Area => self.max_radius * share.sqrt(),
            NodeScale::Radius => self.max_radius * share,
        };
        scaled.max(self.min_radius)
    }
}

/// Basemap with node sizes set by `overlay`.
pub fn render_overlay_svg(basemap: &Basemap, overlay: &Overlay, options: &RenderOptions) -> Result<String> {
    options.validate()?;
    let layout = basemap.layout.as_ref().ok_or_else(|| TomError::Render("basemap has no layout".into()))?;
    if overlay.k() != basemap.k() || layout.len() != basemap.k() {
        return Err(TomError::Shape { expected: basemap.k(), found: overlay.k() });
    }
    let shown = |t: usize| options.show_residual || !basemap.topics[t].residual;
    let (w, h) = (options.width as f64, options.height as f64);
    let margin = options.max_radius + 20.0;
    let at = |t: usize| (margin + layout[t][0] * (w - 2.0 * margin), margin + layout[t][1] * (h - 2.0 * margin));
    let threshold = options.edge_threshold;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        options.width, options.height, options.width, options.height
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    s.push_str("<g class=\"links\" stroke=\"#999999\" stroke-opacity=\"0.6\">\n");
    for i in 0..basemap.k() {
        for j in i + 1..basemap.k() {
            let v = basemap.s[(i, j)];
            if v > threshold && shown(i) && shown(j) {
                let ((x1, y1), (x2, y2)) = (at(i), at(j));
                let _ = writeln!(
                    s,
                    "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke-width=\"{:.3}\"/>",
                    0.5 + 4.0 * v
                );
            }
        }
    }
    s.push_str("</g>\n<g class=\"topics\">\n");
    for t in (0..basemap.k()).filter(|&t| shown(t)) {
        let (x, y) = at(t);
        let p = overlay.p[t];
        let colour = &options.palette[t % options.palette.len()];
        if p > options.min_render_share {
            let _ = writeln!(
                s,
                "<circle data-topic=\"{t}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.4}\" fill=\"{colour}\" fill-opacity=\"0.75\" stroke=\"{colour}\"/>",
                options.radius(p)
            );
        } else {
            let _ = writeln!(
                s,
                "<circle data-topic=\"{t}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.4}\" fill=\"none\" stroke=\"{colour}\"/>",
                options.min_radius
            );
        }
        let label: Vec<&str> = basemap.topics[t].labels.iter().take(options.label_terms).map(String::as_str).collect();
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            y + options.radius(p) + 12.0,
            xml_escape(&label.join(", "))
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

/// Annual series, its moving average and the corpus trendline on one axis.
pub fn render_timeline_svg(profile: &ClusterProfile, options: &RenderOptions) -> Result<String> {
    options.validate()?;
    let series = [&profile.annual, &profile.smoothed, &profile.corpus_trend];
    if profile.annual.values.is_empty() {
        return Err(TomError::Render("empty timeline".into()));
    }
    if series.iter().any(|t| t.first_year != profile.annual.first_year || t.values.len() != profile.annual.values.len()) {
        return Err(TomError::Render("timelines do not share a year axis".into()));
    }
    let (w, h) = (options.width as f64, options.height as f64 / 2.0);
    let (left, right, top, bottom) = (50.0, 20.0, 20.0, 40.0);
    let n = profile.annual.values.len();
    let y_max = series.iter().flat_map(|t| t.values.iter()).fold(0.0f64, |a, &b| a.max(b)).max(1.0);
    let x_of = |i: usize| if n == 1 { left + (w - left - right) / 2.0 } else { left + i as f64 * (w - left - right) / (n - 1) as f64 };
    let y_of = |v: f64| top + (1.0 - v / y_max) * (h - top - bottom);

    let mut s = String::new();
    let _ = writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">");
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<line class=\"axis\" x1=\"{left:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        h - bottom,
        w - right,
        h - bottom
    );
    let _ = writeln!(s, "<line class=\"axis\" x1=\"{left:.2}\" y1=\"{top:.2}\" x2=\"{left:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", h - bottom);
    let step = (n / 12).max(1);
    for (i, year) in profile.annual.years().into_iter().enumerate() {
        let x = x_of(i);
        let _ = writeln!(s, "<line class=\"tick\" x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", h - bottom, h - bottom + 4.0);
        if i % step == 0 || i == n - 1 {
            let _ = writeln!(
                s,
                "<text class=\"tick-label\" x=\"{x:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\">{year}</text>",
                h - bottom + 16.0
            );
        }
    }
    let styles = [
        ("annual", "#1f77b4", "1"),
        ("moving-average", "#d62728", "2"),
        ("corpus-trend", "#7f7f7f", "1.5\" stroke-dasharray=\"4 3"),
    ];
    for (t, (class, colour, width)) in series.iter().zip(styles) {
        let points: Vec<String> = t.values.iter().enumerate().map(|(i, &v)| format!("{:.2},{:.2}", x_of(i), y_of(v))).collect();
        let _ = writeln!(
            s,
            "<polyline class=\"{class}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"{width}\" points=\"{}\"/>",
            points.join(" ")
        );
    }
    for (i, &v) in profile.annual.values.iter().enumerate() {
        let _ = writeln!(s, "<circle class=\"annual-point\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"#1f77b4\"/>", x_of(i), y_of(v));
    }
    let _ = writeln!(
        s,
        "<text x=\"{left:.2}\" y=\"12\" font-size=\"11\">cluster {} ({} documents), y max {:.1}%</text>",
        profile.cluster, profile.size, y_max
    );
    s.push_str("</svg>\n");
    Ok(s)
}
