//! Deterministic 3D spring layout for display hints.

use std::collections::BTreeMap;

use chromacut::{SimplicialGraph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ITERATIONS: usize = 150;

/// Fruchterman-Reingold in a unit cube, seeded, rounded to four decimals so
/// the output is byte-stable.
pub fn spring_layout(g: &SimplicialGraph, seed: u64) -> BTreeMap<VertexId, [f64; 3]> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    if n == 0 {
        return BTreeMap::new();
    }
    let index: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<[f64; 3]> = (0..n).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
    let k = (1.0 / n as f64).cbrt();
    let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(a, b)| (index[&a], index[&b])).collect();
    let mut temperature = 0.1;
    for _ in 0..ITERATIONS {
        let mut disp = vec![[0.0f64; 3]; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = sub(pos[i], pos[j]);
                let len = norm(d).max(1e-6);
                let f = k * k / len;
                for c in 0..3 {
                    disp[i][c] += d[c] / len * f;
                    disp[j][c] -= d[c] / len * f;
                }
            }
        }
        for &(i, j) in &edges {
            let d = sub(pos[i], pos[j]);
            let len = norm(d).max(1e-6);
            let f = len * len / k;
            for c in 0..3 {
                disp[i][c] -= d[c] / len * f;
                disp[j][c] += d[c] / len * f;
            }
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = norm(*d).max(1e-9);
            let step = len.min(temperature);
            for c in 0..3 {
                p[c] += d[c] / len * step;
            }
        }
        temperature *= 0.97;
    }
    let center: Vec<f64> = (0..3).map(|c| pos.iter().map(|p| p[c]).sum::<f64>() / n as f64).collect();
    let radius = pos.iter().map(|p| norm(sub(*p, [center[0], center[1], center[2]]))).fold(1e-9, f64::max);
    vs.iter()
        .zip(&pos)
        .map(|(&v, p)| {
            let q = [0, 1, 2].map(|c| round4((p[c] - center[c]) / radius));
            (v, q)
        })
        .collect()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn round4(x: f64) -> f64 {
    let r = (x * 1e4).round() / 1e4;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chromacut::constructions;

    #[test]
    fn layout_is_deterministic_and_normalized() {
        let g = constructions::icosahedron();
        let a = spring_layout(&g, 0);
        assert_eq!(a, spring_layout(&g, 0));
        assert_eq!(a.len(), 12);
        assert!(a.values().all(|p| p.iter().all(|x| x.abs() <= 1.0)));
    }

    #[test]
    fn adjacent_vertices_sit_closer_than_antipodes() {
        let g = constructions::octahedron();
        let p = spring_layout(&g, 3);
        let d = |a: VertexId, b: VertexId| norm(sub(p[&a], p[&b]));
        assert!(d(0, 1) < d(0, 3));
    }
}
