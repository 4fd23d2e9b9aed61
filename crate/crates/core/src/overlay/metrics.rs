use super::Overlay;
use crate::error::{Result, TomError};
use crate::matrix::SquareMatrix;

fn check_dim(k: usize, m: &SquareMatrix) -> Result<()> {
    if m.dim() != k {
        return Err(TomError::Shape { expected: k, found: m.dim() });
    }
    Ok(())
}

/// Rao-Stirling diversity `Σ_{i≠j} d_ij p_i p_j`.
pub fn stirling_diversity(overlay: &Overlay, d: &SquareMatrix) -> Result<f64> {
    check_dim(overlay.k(), d)?;
    let p = &overlay.p;
    let mut total = 0.0;
    for &i in &overlay.support {
        let mut inner = 0.0;
        for &j in &overlay.support {
            if i != j {
                inner += d[(i, j)] * p[j];
            }
        }
        total += p[i] * inner;
    }
    Ok(total)
}

/// An overlay together with `S·p` and its self-proximity `Φ_XX`.
#[derive(Debug, Clone)]
pub struct ProximityProfile {
    p: Vec<f64>,
    sp: Vec<f64>,
    self_phi: f64,
}

impl ProximityProfile {
    pub fn new(overlay: &Overlay, s: &SquareMatrix) -> Result<Self> {
        check_dim(overlay.k(), s)?;
        if overlay.is_zero() {
            let label = overlay.doc_ids.first().map_or("<unnamed>", String::as_str);
            return Err(TomError::UndefinedSimilarity(format!("overlay of {label} is all zero")));
        }
        let sp = s.mul_vec(&overlay.p);
        let self_phi = dot(&overlay.p, &sp);
        if self_phi <= 0.0 || !self_phi.is_finite() {
            return Err(TomError::DegenerateProximity(self_phi));
        }
        Ok(ProximityProfile { p: overlay.p.clone(), sp, self_phi })
    }

    /// `Φ_XY / sqrt(Φ_XX Φ_YY)`.
    pub fn similarity(&self, other: &ProximityProfile) -> f64 {
        dot(&self.p, &other.sp) / (self.self_phi * other.self_phi).sqrt()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Proximity-weighted cosine similarity of two overlays under `s`.
pub fn pwcs(x: &Overlay, y: &Overlay, s: &SquareMatrix) -> Result<f64> {
    if x.k() != y.k() {
        return Err(TomError::Shape { expected: x.k(), found: y.k() });
    }
    Ok(ProximityProfile::new(x, s)?.similarity(&ProximityProfile::new(y, s)?))
}
