//! Seeded Fruchterman-Reingold layout of the basemap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Basemap;

pub const LAYOUT_ITERATIONS: usize = 500;

/// Positions in the unit square; attraction acts only along displayed links.
pub fn basemap_layout(basemap: &Basemap, seed: u64) -> Vec<[f64; 2]> {
    let k = basemap.k();
    if k == 0 {
        return Vec::new();
    }
    if k == 1 {
        return vec![[0.5, 0.5]];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<[f64; 2]> = (0..k).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    let links = basemap.links();
    let ideal = (1.0 / k as f64).sqrt();
    let mut temperature = 0.1;
    let cooling = temperature / LAYOUT_ITERATIONS as f64;

    for _ in 0..LAYOUT_ITERATIONS {
        let mut disp = vec![[0.0f64; 2]; k];
        for i in 0..k {
            for j in i + 1..k {
                let (dx, dy, dist) = delta(&pos, i, j);
                let f = ideal * ideal / dist;
                push(&mut disp, i, j, dx / dist * f, dy / dist * f);
            }
        }
        for &(i, j, s) in &links {
            let (dx, dy, dist) = delta(&pos, i, j);
            let f = s * dist * dist / ideal;
            push(&mut disp, i, j, -dx / dist * f, -dy / dist * f);
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(temperature);
                p[0] += d[0] / len * step;
                p[1] += d[1] / len * step;
            }
        }
        temperature -= cooling;
    }
    normalize(&mut pos);
    pos
}

fn delta(pos: &[[f64; 2]], i: usize, j: usize) -> (f64, f64, f64) {
    let dx = pos[i][0] - pos[j][0];
    let dy = pos[i][1] - pos[j][1];
    (dx, dy, (dx * dx + dy * dy).sqrt().max(1e-9))
}

fn push(disp: &mut [[f64; 2]], i: usize, j: usize, fx: f64, fy: f64) {
    disp[i][0] += fx;
    disp[i][1] += fy;
    disp[j][0] -= fx;
    disp[j][1] -= fy;
}

/// Uniform scaling into `[0, 1]²`, centred on the shorter axis.
fn normalize(pos: &mut [[f64; 2]]) {
    let lo = |a: usize| pos.iter().map(|p| p[a]).fold(f64::INFINITY, f64::min);
    let hi = |a: usize| pos.iter().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max);
    let (min, max) = ([lo(0), lo(1)], [hi(0), hi(1)]);
    let extent = (max[0] - min[0]).max(max[1] - min[1]);
    for p in pos.iter_mut() {
        for a in 0..2 {
            p[a] = if extent > 0.0 { (p[a] - min[a]) / extent + (1.0 - (max[a] - min[a]) / extent) / 2.0 } else { 0.5 };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basemap::{build_basemap, BasemapTopic};
    use crate::matrix::SquareMatrix;
    use crate::network::{TermGraph, TopicPartition};

    fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
    }

    fn three_topics() -> Basemap {
        let g = TermGraph::from_edges(3, &[(0, 1, 0.8)]).unwrap();
        let p = TopicPartition::new(&g, vec![0, 1, 2], None, 1).unwrap();
        build_basemap(&g, &p, 0.1).unwrap()
    }

    #[test]
    fn single_topic_is_centred() {
        let b = Basemap {
            topics: vec![BasemapTopic { id: 0, labels: vec![], members: 1, residual: false }],
            overlap: SquareMatrix::zeros(1),
            s: SquareMatrix::identity(1),
            d: SquareMatrix::zeros(1),
            link_threshold: 0.1,
            layout: None,
        };
        assert_eq!(basemap_layout(&b, 7), vec![[0.5, 0.5]]);
    }

    #[test]
    fn linked_topics_sit_closer() {
        let b = three_topics();
        assert_eq!(b.s[(0, 1)], 1.0);
        for seed in 0..20 {
            let pos = basemap_layout(&b, seed);
            let ab = dist(pos[0], pos[1]);
            assert!(ab < dist(pos[0], pos[2]) && ab < dist(pos[1], pos[2]), "seed {seed}");
        }
    }

    #[test]
    fn seeded_and_bounded() {
        let b = three_topics();
        let a = basemap_layout(&b, 42);
        assert_eq!(a, basemap_layout(&b, 42));
        assert!(a.iter().flatten().all(|&c| (0.0..=1.0).contains(&c)));
    }
}
