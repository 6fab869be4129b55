#![allow(dead_code)]

pub mod symmetric;

use curvlab_core::metrics::{TrigMetric, Wave};
use curvlab_core::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random periodic Hermitian metric `Id + Σ cos θ_m C_m` with small
/// Hermitian `C_m`, positive definite by construction.
pub fn random_trig_metric(rng: &mut ChaCha8Rng, n: usize, terms: usize, size: f64) -> TrigMetric {
    let mut out = Vec::new();
    for _ in 0..terms {
        let k: Vec<i32> = (0..2 * n).map(|_| rng.gen_range(-1..=1)).collect();
        let mut c = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            c[i * n + i] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                c[i * n + j] = v;
                c[j * n + i] = v.conj();
            }
        }
        // scale so that Σ‖C_m‖ stays below 1
        let norm: f64 = c.iter().map(|x| x.norm()).sum();
        let s = size / (terms as f64 * norm.max(1e-12));
        out.push((Wave { k, coeff: 1.0 }, c.iter().map(|x| x * s).collect()));
    }
    TrigMetric { n, period: 1.0, terms: out }
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> curvlab_core::geometry::ChartPoint {
    let z: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))).collect();
    curvlab_core::geometry::ChartPoint::new(&z)
}
