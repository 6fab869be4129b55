//! Quadrature grids over fundamental domains.
//!
//! Weights are Lebesgue weights in the real chart coordinates. Integrals
//! against the metric volume multiply them by `2ⁿ det h`, i.e. `dV = ωⁿ/n!`.

use crate::error::{CurvError, Result};
use crate::geometry::{ChartPoint, MetricField};
use num_complex::Complex64 as C64;
use std::f64::consts::{LN_2, PI};

#[derive(Clone, Debug, PartialEq)]
pub enum GridKind {
    /// Uniform lattice on `ℂⁿ / (L ℤ^{2n})`; `active` lists the real coordinates
    /// that are sampled (the others are frozen at 0 and integrated exactly).
    Torus { per_dim: usize, period: f64, active: Vec<usize> },
    /// Annulus `1 ≤ |z| < 2` in `ℂ²`, with `τ = log₂|z|`, `s = |z¹|²/|z|²` and
    /// two fibre angles.
    Hopf { n_tau: usize, n_s: usize, n_xi: usize },
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub manifold: String,
    pub kind: GridKind,
    pub nodes: Vec<ChartPoint>,
    pub weights: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m {
        let mut t = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = t;
            }
            dp = m as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[m - 1 - i] = t;
        w[m - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

impl QuadratureGrid {
    /// Full periodic lattice with `per_dim` nodes per real dimension.
    pub fn torus(manifold: &str, n: usize, per_dim: usize, period: f64) -> Self {
        Self::torus_active(manifold, n, per_dim, period, (0..2 * n).collect())
    }

    /// Lattice on the listed real coordinates only. Exact for integrands that
    /// do not depend on the remaining coordinates.
    pub fn torus_active(manifold: &str, n: usize, per_dim: usize, period: f64, active: Vec<usize>) -> Self {
        assert!(per_dim >= 1 && period > 0.0);
        let h = period / per_dim as f64;
        let total = per_dim.pow(active.len() as u32);
        let w = period.powi(2 * n as i32) / total as f64;
        let mut nodes = Vec::with_capacity(total);
        let mut idx = vec![0usize; active.len()];
        for _ in 0..total {
            let mut z = vec![C64::new(0.0, 0.0); n];
            for (slot, &r) in active.iter().enumerate() {
                let t = idx[slot] as f64 * h;
                if r < n {
                    z[r].re = t;
                } else {
                    z[r - n].im = t;
                }
            }
            nodes.push(ChartPoint::new(&z));
            for slot in (0..active.len()).rev() {
                idx[slot] += 1;
                if idx[slot] < per_dim {
                    break;
                }
                idx[slot] = 0;
            }
        }
        QuadratureGrid {
            manifold: manifold.to_string(),
            kind: GridKind::Torus { per_dim, period, active },
            weights: vec![w; nodes.len()],
            nodes,
        }
    }

    /// Product grid on the Hopf annulus. With `n_xi = 1` the grid integrates
    /// torus-invariant integrands exactly in the fibre angles.
    pub fn hopf(manifold: &str, n_tau: usize, n_s: usize, n_xi: usize) -> Self {
        let (gx, gw) = gauss_legendre(n_s);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let dxi = 2.0 * PI / n_xi as f64;
        for it in 0..n_tau {
            let tau = it as f64 / n_tau as f64;
            let r = 2f64.powf(tau);
            for (&xs, &ws) in gx.iter().zip(&gw) {
                let s = 0.5 * (xs + 1.0);
                for a in 0..n_xi {
                    for b in 0..n_xi {
                        let (x1, x2) = (a as f64 * dxi, b as f64 * dxi);
                        let z1 = C64::from_polar(r * s.sqrt(), x1);
                        let z2 = C64::from_polar(r * (1.0 - s).sqrt(), x2);
                        nodes.push(ChartPoint::new(&[z1, z2]));
                        // dλ = r³ dr dσ_{S³}, dr = r ln2 dτ, dσ = ½ ds dξ¹ dξ²
                        weights.push(r.powi(4) * LN_2 / n_tau as f64 * 0.5 * (0.5 * ws) * (2.0 * PI / n_xi as f64).powi(2));
                    }
                }
            }
        }
        QuadratureGrid { manifold: manifold.to_string(), kind: GridKind::Hopf { n_tau, n_s, n_xi }, nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].dim()
    }

    /// Node weights for `dV = 2ⁿ det h dλ`.
    pub fn volume_weights(&self, metric: &dyn MetricField) -> Vec<f64> {
        let n = metric.dim();
        let c = 2f64.powi(n as i32);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * c * metric.value(p).determinant().re)
            .collect()
    }

    /// `∫ F dV` with the metric volume.
    pub fn integrate<F>(&self, metric: &dyn MetricField, mut integrand: F) -> Result<f64>
    where
        F: FnMut(usize, &ChartPoint) -> f64,
    {
        let vw = self.volume_weights(metric);
        self.sum_weighted(&vw, |i| integrand(i, &self.nodes[i]))
    }

    /// `Σ w_i F(i)` for precomputed weights, in node order.
    pub fn sum_weighted<F>(&self, w: &[f64], mut f: F) -> Result<f64>
    where
        F: FnMut(usize) -> f64,
    {
        let mut acc = 0.0;
        for (i, wi) in w.iter().enumerate() {
            let v = f(i);
            if !v.is_finite() {
                return Err(CurvError::NonFiniteIntegrand(i));
            }
            acc += wi * v;
        }
        Ok(acc)
    }
}
