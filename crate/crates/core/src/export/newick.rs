use crate::clustering::Dendrogram;
use crate::error::Result;

fn quote(name: &str) -> String {
    if name.is_empty() || name.chars().any(|c| "()[]':;,".contains(c) || c.is_whitespace()) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

/// Newick text; each branch length is the parent height minus the child
/// height (leaves sit at height 0).
pub fn dendrogram_newick(dendrogram: &Dendrogram) -> String {
    let n = dendrogram.n_leaves();
    let height = |node: usize| if node < n { 0.0 } else { dendrogram.merges[node - n].height };
    // Iterative post-order to keep deep trees off the call stack.
    let root = n + dendrogram.merges.len() - 1;
    let mut text: Vec<Option<String>> = vec![None; root + 1];
    let mut stack = vec![(root, false)];
    while let Some((node, expanded)) = stack.pop() {
        if node < n {
            text[node] = Some(quote(&dendrogram.leaf_ids[node]));
            continue;
        }
        let m = &dendrogram.merges[node - n];
        if expanded {
            let h = m.height;
            let l = text[m.left].take().unwrap();
            let r = text[m.right].take().unwrap();
            text[node] = Some(format!("({l}:{},{r}:{})", h - height(m.left), h - height(m.right)));
        } else {
            stack.push((node, true));
            stack.push((m.right, false));
            stack.push((m.left, false));
        }
    }
    format!("{};", text[root].take().unwrap())
}

pub fn dendrogram_json(dendrogram: &Dendrogram) -> Result<String> {
    Ok(serde_json::to_string_pretty(dendrogram)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{average_linkage, Merge};
    use crate::matrix::SquareMatrix;
    use rand::{Rng, SeedableRng};

    /// Minimal Newick reader returning the height of every internal node.
    fn internal_heights(text: &str) -> Vec<f64> {
        struct P<'a> {
            s: &'a [u8],
            i: usize,
            out: Vec<f64>,
        }
        impl P<'_> {
            fn name(&mut self) {
                if self.s[self.i] == b'\'' {
                    self.i += 1;
                    loop {
                        if self.s[self.i] == b'\'' {
                            if self.s.get(self.i + 1) == Some(&b'\'') {
                                self.i += 2;
                                continue;
                            }
                            self.i += 1;
                            break;
                        }
                        self.i += 1;
                    }
                } else {
                    while !b"(),:;".contains(&self.s[self.i]) {
                        self.i += 1;
                    }
                }
            }
            fn length(&mut self) -> f64 {
                assert_eq!(self.s[self.i], b':');
                self.i += 1;
                let start = self.i;
                while !b"(),;".contains(&self.s[self.i]) {
                    self.i += 1;
                }
                std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().unwrap()
            }
            /// Returns the node's height above its leaves.
            fn node(&mut self) -> f64 {
                if self.s[self.i] != b'(' {
                    self.name();
                    return 0.0;
                }
                self.i += 1;
                let mut h = Vec::new();
                loop {
                    let child = self.node();
                    h.push(child + self.length());
                    match self.s[self.i] {
                        b',' => self.i += 1,
                        b')' => {
                            self.i += 1;
                            break;
                        }
                        c => panic!("unexpected {}", c as char),
                    }
                }
                let height = h[0];
                assert!(h.iter().all(|x| (x - height).abs() < 1e-9), "ultrametric");
                self.out.push(height);
                height
            }
        }
        let mut p = P { s: text.as_bytes(), i: 0, out: Vec::new() };
        p.node();
        assert_eq!(&text[p.i..], ";");
        p.out
    }

    #[test]
    fn two_leaves() {
        let d = Dendrogram::new(vec!["a".into(), "b".into()], vec![Merge { left: 0, right: 1, height: 0.4, size: 2 }]).unwrap();
        assert_eq!(dendrogram_newick(&d), "(a:0.4,b:0.4);");
        let j: serde_json::Value = serde_json::from_str(&dendrogram_json(&d).unwrap()).unwrap();
        assert_eq!(j["merges"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn names_are_quoted_when_needed() {
        let d = Dendrogram::new(vec!["it's".into(), "x y".into()], vec![Merge { left: 0, right: 1, height: 1.0, size: 2 }]).unwrap();
        assert_eq!(dendrogram_newick(&d), "('it''s':1,'x y':1);");
        assert_eq!(internal_heights(&dendrogram_newick(&d)), vec![1.0]);
    }

    #[test]
    fn round_trip_preserves_heights() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 3, 7, 25, 120] {
            let mut m = SquareMatrix::zeros(n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.gen::<f64>();
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            let d = average_linkage(&m, (0..n).map(|i| format!("doc{i}")).collect()).unwrap();
            let mut got = internal_heights(&dendrogram_newick(&d));
            let mut want = d.heights();
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            assert_eq!(got.len(), n - 1);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-9);
            }
            let j: serde_json::Value = serde_json::from_str(&dendrogram_json(&d).unwrap()).unwrap();
            assert_eq!(j["merges"].as_array().unwrap().len(), n - 1);
        }
    }
}
