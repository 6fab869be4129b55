//! Yamabe quotient within a conformal class and descent toward its infimum.
//!
//! For `g̃ = e^f g` in real dimension `2n`,
//!
//! ```text
//! s̃ = e^{−f} ( s + (2n−1) Δ_d f − (2n−1)(n−1) |∂f|² ),   dṼ = e^{nf} dV,
//! Q(f) = ∫ s̃ dṼ / (∫ dṼ)^{1 − 1/n}.
//! ```
//!
//! `Δ_d = d*d` is the non-negative Laplacian and `|∂f|² = h^{ij̄} ∂_i f ∂_j̄ f`.
//! Descent runs over coefficients of a spectral basis with the constant mode
//! removed, using the exact gradient of the discrete quotient.

use crate::conformal::Sign;
use crate::error::Result;
use crate::forms::{self, Form1};
use crate::geometry::{ChartPoint, DerivativeEngine, MetricField, ScalarField};
use crate::jet::Jet;
use crate::quadrature::QuadratureGrid;
use crate::rng;
use crate::spectral::SpectralBasis;
use crate::tensor::{real_oracle, PointGeometry};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const ARMIJO: f64 = 1e-4;

/// `Δ_d f = ∂̄*∂̄f + ∂*∂f` at a point.
pub fn hodge_laplacian(geom: &PointGeometry, f: &Jet) -> f64 {
    (forms::dbar_star_01(geom, &Form1::delbar(f)) + forms::d_star_10(geom, &Form1::del(f))).re
}

fn grad_sq(geom: &PointGeometry, f: &Jet) -> f64 {
    let df = Form1::del(f);
    forms::inner10(geom, &df.c, &df.c).re
}

fn law(n: usize, s: f64, fv: f64, lap: f64, g2: f64) -> f64 {
    let (m, k) = (2.0 * n as f64 - 1.0, n as f64 - 1.0);
    (-fv).exp() * (s + m * lap - m * k * g2)
}

/// Riemannian scalar curvature of `e^f g` at `p` by the conformal law.
pub fn conformal_scalar_riemannian(metric: &dyn MetricField, f: &dyn ScalarField, p: &ChartPoint) -> Result<f64> {
    let geom = PointGeometry::at(&DerivativeEngine::analytic(), metric, p)?;
    let s = real_oracle::scalar(&geom)?;
    let fj = f.jet(p);
    Ok(law(geom.n, s, fj.re(), hodge_laplacian(&geom, &fj), grad_sq(&geom, &fj)))
}

/// `Q(f)` on a grid.
pub fn yamabe_quotient(metric: &dyn MetricField, f: &dyn ScalarField, grid: &QuadratureGrid) -> Result<f64> {
    let n = metric.dim();
    let vw = grid.volume_weights(metric);
    let mut num = Vec::with_capacity(grid.len());
    let mut vol = Vec::with_capacity(grid.len());
    for p in &grid.nodes {
        let st = conformal_scalar_riemannian(metric, f, p)?;
        let e = (n as f64 * f.value(p).re).exp();
        num.push(st * e);
        vol.push(e);
    }
    let a = grid.sum_weighted(&vw, |i| num[i])?;
    let b = grid.sum_weighted(&vw, |i| vol[i])?;
    Ok(a / b.powf(1.0 - 1.0 / n as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YamabeTrace {
    pub iteration: usize,
    pub quotient: f64,
    pub step: f64,
    pub gradient_norm: f64,
}

#[derive(Clone, Debug)]
pub struct YamabeResult {
    pub estimate: f64,
    pub initial: f64,
    pub trace: Vec<YamabeTrace>,
    pub converged: bool,
    pub coeffs: Vec<f64>,
}

/// Quotient restricted to `f = Σ c_a φ_a` with per-node basis data cached.
pub struct YamabeProblem {
    pub n: usize,
    pub basis: Arc<SpectralBasis>,
    w: Vec<f64>,
    s: Vec<f64>,
    hinv: Vec<Vec<C64>>,
    phi: Vec<Vec<f64>>,
    lap: Vec<Vec<f64>>,
    dphi: Vec<Vec<Vec<C64>>>,
}

impl YamabeProblem {
    pub fn new(metric: &dyn MetricField, grid: &QuadratureGrid, basis: Arc<SpectralBasis>) -> Result<Self> {
        let n = metric.dim();
        let engine = DerivativeEngine::analytic();
        let w = grid.volume_weights(metric);
        let m = basis.len();
        let (mut s, mut hinv, mut phi, mut lap, mut dphi) = (vec![], vec![], vec![], vec![], vec![]);
        for p in &grid.nodes {
            let geom = PointGeometry::at(&engine, metric, p)?;
            s.push(real_oracle::scalar(&geom)?);
            hinv.push((0..n * n).map(|kl| geom.hinv(kl / n, kl % n)).collect());
            let (q, qv) = basis.local_values(p);
            let (mut pv, mut lv, mut dv) = (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
            for a in 0..m {
                let (v, g, h) = basis.local_jet_of(a, &qv);
                let j = Jet::compose(&q, v, &g, &h);
                pv.push(v);
                lv.push(hodge_laplacian(&geom, &j));
                dv.push((0..n).map(|k| j.dz(k)).collect());
            }
            phi.push(pv);
            lap.push(lv);
            dphi.push(dv);
        }
        Ok(YamabeProblem { n, basis, w, s, hinv, phi, lap, dphi })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Quotient and its gradient in the coefficients.
    pub fn evaluate(&self, c: &[f64], want_grad: bool) -> (f64, Vec<f64>) {
        let n = self.n;
        let nf = n as f64;
        let (m2, k) = (2.0 * nf - 1.0, nf - 1.0);
        let alpha = 1.0 - 1.0 / nf;
        let ma = self.dim();
        let (mut num, mut den) = (0.0, 0.0);
        let mut dnum = vec![0.0; ma];
        let mut dden = vec![0.0; ma];
        for i in 0..self.w.len() {
            let w = self.w[i];
            let fv: f64 = (0..ma).map(|a| c[a] * self.phi[i][a]).sum();
            let lv: f64 = (0..ma).map(|a| c[a] * self.lap[i][a]).sum();
            let v: Vec<C64> = (0..n).map(|kk| (0..ma).map(|a| self.dphi[i][a][kk] * c[a]).sum()).collect();
            let mut g2 = C64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    g2 += self.hinv[i][a * n + b] * v[a] * v[b].conj();
                }
            }
            let g2 = g2.re;
            let e = (k * fv).exp();
            let en = (nf * fv).exp();
            let sv = self.s[i] + m2 * lv - m2 * k * g2;
            num += w * e * sv;
            den += w * en;
            if want_grad {
                // h^{kl̄} conj(v_l) for the gradient of |∂f|²
                let hv: Vec<C64> = (0..n).map(|a| (0..n).map(|b| self.hinv[i][a * n + b] * v[b].conj()).sum()).collect();
                for a in 0..ma {
                    let dg2: f64 = 2.0 * (0..n).map(|kk| self.dphi[i][a][kk] * hv[kk]).sum::<C64>().re;
                    dnum[a] += w * e * (k * sv * self.phi[i][a] + m2 * self.lap[i][a] - m2 * k * dg2);
                    dden[a] += w * nf * en * self.phi[i][a];
                }
            }
        }
        let q = num / den.powf(alpha);
        let grad = if want_grad {
            (0..ma).map(|a| dnum[a] / den.powf(alpha) - alpha * num * den.powf(-alpha - 1.0) * dden[a]).collect()
        } else {
            vec![]
        };
        (q, grad)
    }

    /// The scalar field `Σ c_a φ_a`.
    pub fn field(&self, c: &[f64]) -> impl ScalarField {
        let basis = self.basis.clone();
        let c = c.to_vec();
        move |p: &ChartPoint| basis.jet(&c, p)
    }
}

/// Random start with the constant mode removed.
pub fn random_start(dim: usize, seed: u64, amplitude: f64) -> Vec<f64> {
    let mut r = rng::stream(seed, rng::STREAM_YAMABE);
    let mut c: Vec<f64> = (0..dim).map(|_| r.gen_range(-amplitude..amplitude)).collect();
    c[0] = 0.0;
    c
}

/// Backtracking gradient descent; every accepted step satisfies the Armijo condition.
pub fn minimize_quotient(problem: &YamabeProblem, start: Vec<f64>, max_iters: usize, grad_tol: f64) -> YamabeResult {
    let mut c = start;
    c[0] = 0.0;
    let (mut q, mut g) = problem.evaluate(&c, true);
    g[0] = 0.0;
    let initial = q;
    let mut step = 1.0;
    let mut trace = Vec::new();
    let mut converged = false;
    for it in 0..max_iters {
        let gn2: f64 = g.iter().map(|x| x * x).sum();
        let gn = gn2.sqrt();
        trace.push(YamabeTrace { iteration: it, quotient: q, step, gradient_norm: gn });
        if gn <= grad_tol {
            converged = true;
            break;
        }
        // at most a unit-size move in coefficient space per step
        let mut t = (step * 2.0).min(0.5 / gn);
        let mut accepted = false;
        while t > 1e-16 {
            let trial: Vec<f64> = c.iter().zip(&g).map(|(x, d)| x - t * d).collect();
            let (qt, _) = problem.evaluate(&trial, false);
            if qt.is_finite() && qt != 0.0 && qt <= q - ARMIJO * t * gn2 {
                c = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            converged = true;
            break;
        }
        step = t;
        let (nq, mut ng) = problem.evaluate(&c, true);
        ng[0] = 0.0;
        q = nq;
        g = ng;
    }
    if !converged {
        let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        trace.push(YamabeTrace { iteration: max_iters, quotient: q, step, gradient_norm: gn });
    }
    YamabeResult { estimate: q, initial, trace, converged, coeffs: c }
}

pub fn trace_is_monotone(trace: &[YamabeTrace]) -> bool {
    trace.windows(2).all(|w| w[1].quotient <= w[0].quotient)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statement {
    KodairaMinusInfinity,
    AhatVanishes,
    NoConclusion,
}

/// Consequences of a positive complex Yamabe number.
pub fn lambda_c_verdict(sign: Sign, spin: bool) -> Vec<Statement> {
    match sign {
        Sign::Positive if spin => vec![Statement::KodairaMinusInfinity, Statement::AhatVanishes],
        Sign::Positive => vec![Statement::KodairaMinusInfinity],
        _ => vec![Statement::NoConclusion],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kappa {
    MinusInfinity,
    Zero,
    One,
    Two,
}

impl std::str::FromStr for Kappa {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "-inf" | "-infinity" | "minus-infinity" => Ok(Kappa::MinusInfinity),
            "0" => Ok(Kappa::Zero),
            "1" => Ok(Kappa::One),
            "2" => Ok(Kappa::Two),
            _ => Err(format!("kodaira dimension must be -inf, 0, 1 or 2, got {s}")),
        }
    }
}

/// Trichotomy for compact Kähler surfaces: `λ > 0 ⟺ κ = −∞`, `λ = 0 ⟺ κ ∈ {0, 1}`, `λ < 0 ⟺ κ = 2`.
pub fn lebrun_consistency(lambda_sign: Sign, kappa: Kappa) -> bool {
    matches!(
        (lambda_sign, kappa),
        (Sign::Positive, Kappa::MinusInfinity) | (Sign::Zero, Kappa::Zero | Kappa::One) | (Sign::Negative, Kappa::Two)
    )
}

pub const SIGNS: [Sign; 3] = [Sign::Positive, Sign::Zero, Sign::Negative];

/// Rows are signs `+, 0, −`; columns are `κ = −∞`, `κ ∈ {0, 1}`, `κ = 2`.
/// The middle column is true only if both `0` and `1` are consistent.
pub fn lebrun_table() -> [[bool; 3]; 3] {
    let mut t = [[false; 3]; 3];
    for (r, &s) in SIGNS.iter().enumerate() {
        t[r][0] = lebrun_consistency(s, Kappa::MinusInfinity);
        t[r][1] = lebrun_consistency(s, Kappa::Zero) && lebrun_consistency(s, Kappa::One);
        t[r][2] = lebrun_consistency(s, Kappa::Two);
    }
    t
}
