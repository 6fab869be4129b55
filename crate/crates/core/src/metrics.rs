//! Concrete Hermitian metric fields.

use crate::geometry::{ChartPoint, MetricField, ScalarField};
use crate::jet::Jet;
use num_complex::Complex64 as C64;
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

fn diag(n: usize, d: &[Jet]) -> Vec<Jet> {
    let mut e = vec![Jet::real(n, 0.0); n * n];
    for k in 0..n {
        e[k * n + k] = d[k];
    }
    e
}

/// `h = Id` on `ℂⁿ`.
#[derive(Clone, Debug)]
pub struct FlatMetric {
    pub n: usize,
}

impl MetricField for FlatMetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn entries(&self, _p: &ChartPoint) -> Vec<Jet> {
        diag(self.n, &vec![Jet::real(self.n, 1.0); self.n])
    }
}

/// One plane wave `cos(2π k·x / L)` in the real coordinates `(x, y)`.
#[derive(Clone, Debug)]
pub struct Wave {
    /// Integer wave vector, ordered `(k_x1..k_xn, k_y1..k_yn)`.
    pub k: Vec<i32>,
    pub coeff: f64,
}

impl Wave {
    /// Phase `θ` as a jet.
    pub fn phase(&self, p: &ChartPoint, period: f64) -> Jet {
        let n = p.dim();
        let mut th = Jet::real(n, 0.0);
        for j in 0..n {
            if self.k[j] != 0 {
                th += p.x(j) * (2.0 * PI * self.k[j] as f64 / period);
            }
            if self.k[n + j] != 0 {
                th += p.y(j) * (2.0 * PI * self.k[n + j] as f64 / period);
            }
        }
        th
    }

    /// `∂_j θ / 2π`.
    pub fn alpha(&self, j: usize, n: usize, period: f64) -> C64 {
        C64::new(self.k[j] as f64, -(self.k[n + j] as f64)) / (2.0 * period)
    }
}

/// Kähler metric `h = Id + ∂∂̄φ` with `φ = (a / 4π²) Σ c_m cos θ_m`.
#[derive(Clone, Debug)]
pub struct KahlerPotentialTorus {
    pub n: usize,
    pub amplitude: f64,
    pub period: f64,
    pub waves: Vec<Wave>,
}

impl KahlerPotentialTorus {
    pub fn standard(n: usize, amplitude: f64, period: f64) -> Self {
        let mut waves = Vec::new();
        let mut k = vec![0; 2 * n];
        k[0] = 1;
        waves.push(Wave { k: k.clone(), coeff: 1.0 });
        if n >= 2 {
            let mut k = vec![0; 2 * n];
            k[n] = 1;
            k[1] = 1;
            waves.push(Wave { k, coeff: 0.6 });
            let mut k = vec![0; 2 * n];
            k[n + 1] = 1;
            waves.push(Wave { k, coeff: -0.4 });
        } else {
            let mut k = vec![0; 2];
            k[1] = 1;
            waves.push(Wave { k, coeff: 0.5 });
        }
        KahlerPotentialTorus { n, amplitude, period, waves }
    }

    /// The potential `φ` itself.
    pub fn potential(&self, p: &ChartPoint) -> Jet {
        let mut acc = Jet::real(self.n, 0.0);
        for w in &self.waves {
            acc += w.phase(p, self.period).cos() * (self.amplitude * w.coeff / (4.0 * PI * PI));
        }
        acc
    }
}

impl MetricField for KahlerPotentialTorus {
    fn dim(&self) -> usize {
        self.n
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        let n = self.n;
        let mut e: Vec<Jet> = (0..n * n).map(|ij| Jet::real(n, if ij / n == ij % n { 1.0 } else { 0.0 })).collect();
        for w in &self.waves {
            // ∂_i∂_j̄ cos θ = −cos θ · α_i ᾱ_j (times 4π²)
            let c = w.phase(p, self.period).cos() * (-self.amplitude * w.coeff);
            for i in 0..n {
                for j in 0..n {
                    let s = w.alpha(i, n, self.period) * w.alpha(j, n, self.period).conj();
                    if s != C64::new(0.0, 0.0) {
                        e[i * n + j] += c * s;
                    }
                }
            }
        }
        e
    }
}

/// Non-Kähler torus metric depending on `x¹` and `y²` only.
///
/// `h₁₁ = 1 + a cos 2πx¹`, `h₂₂ = 1 + a cos 2π(x¹ + y²)`,
/// `h₁₂̄ = b (cos 2πy² + √−1 sin 2πx¹)`, further diagonal entries
/// `1 + a sin 2πy²`.
#[derive(Clone, Debug)]
pub struct PerturbedTorus {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub period: f64,
}

impl PerturbedTorus {
    /// Real coordinates the metric depends on.
    pub fn active_coords(&self) -> Vec<usize> {
        if self.n == 1 {
            vec![0]
        } else {
            vec![0, self.n + 1]
        }
    }
}

impl MetricField for PerturbedTorus {
    fn dim(&self) -> usize {
        self.n
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        let n = self.n;
        let w = 2.0 * PI / self.period;
        let x1 = p.x(0) * w;
        let one = Jet::real(n, 1.0);
        let mut d = vec![one + x1.cos() * self.a];
        if n >= 2 {
            let y2 = p.y(1) * w;
            d.push(one + (x1 + y2).cos() * self.a);
            for _ in 2..n {
                d.push(one + y2.sin() * self.a);
            }
        }
        let mut e = diag(n, &d);
        if n >= 2 {
            let y2 = p.y(1) * w;
            let off = (y2.cos() + x1.sin() * C64::new(0.0, 1.0)) * self.b;
            e[1] = off;
            e[n] = off.conj();
        }
        e
    }
}

/// `τ = log₂|z|` on `ℂ² ∖ {0}`.
pub fn hopf_tau(p: &ChartPoint) -> Jet {
    p.norm_sq().ln() * (0.5 / LN_2)
}

/// `s = |z¹|² / |z|²`.
pub fn hopf_s(p: &ChartPoint) -> Jet {
    p.z(0) * p.zb(0) / p.norm_sq()
}

/// The fixed torus-invariant profile `g(τ, s) = cos 2πτ + s/2 + ¼ s² sin 2πτ`.
pub fn hopf_profile(p: &ChartPoint) -> Jet {
    let tau = hopf_tau(p) * (2.0 * PI);
    let s = hopf_s(p);
    tau.cos() + s * 0.5 + s * s * tau.sin() * 0.25
}

/// Hopf-surface metric `h = e^{−t g} δ / |z|²` on the annulus `1 ≤ |z| < 2`.
#[derive(Clone)]
pub struct HopfMetric {
    pub t: f64,
    pub profile: Arc<dyn ScalarField>,
}

impl HopfMetric {
    pub fn standard() -> Self {
        HopfMetric { t: 0.0, profile: Arc::new(hopf_profile) }
    }
    pub fn conformal(t: f64) -> Self {
        HopfMetric { t, profile: Arc::new(hopf_profile) }
    }
}

impl MetricField for HopfMetric {
    fn dim(&self) -> usize {
        2
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        let mut f = p.norm_sq().recip();
        if self.t != 0.0 {
            f = f * (self.profile.jet(p) * (-self.t)).exp();
        }
        diag(2, &[f, f])
    }
    fn in_domain(&self, p: &ChartPoint) -> bool {
        p.coords().iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.0
    }
}

/// Inoue-surface chart `{Im w > 0} × ℂ` with `ω = √−1(dw∧dw̄ / v² + v dz∧dz̄)`, `v = Im w`.
#[derive(Clone, Debug, Default)]
pub struct InoueMetric;

impl InoueMetric {
    /// The canonical-bundle metric `(Im w)²`.
    pub fn bundle_metric(p: &ChartPoint) -> Jet {
        let v = p.y(0);
        v * v
    }

    /// Coefficient `c` in `√−1∂∂̄ log (Im w)² = √−1 c dw∧dw̄`.
    pub fn bundle_curvature_coefficient(p: &ChartPoint) -> C64 {
        Self::bundle_metric(p).ln().dz_dzb(0, 0)
    }
}

impl MetricField for InoueMetric {
    fn dim(&self) -> usize {
        2
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        let v = p.y(0);
        diag(2, &[(v * v).recip(), v])
    }
    fn in_domain(&self, p: &ChartPoint) -> bool {
        p.coords()[0].im > 0.0
    }
}

/// Fubini–Study metric `∂∂̄ log(1 + |z|²)` in an affine chart.
#[derive(Clone, Debug)]
pub struct FubiniStudyChart {
    pub n: usize,
}

impl MetricField for FubiniStudyChart {
    fn dim(&self) -> usize {
        self.n
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        let n = self.n;
        let q = (p.norm_sq() + 1.0).recip();
        let q2 = q * q;
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut v = p.zb(i) * p.z(j) * q2 * -1.0;
                if i == j {
                    v += q;
                }
                e.push(v);
            }
        }
        e
    }
}

/// `h = Id + Σ_m cos θ_m C_m` with Hermitian `C_m`: a generic non-Kähler,
/// non-Gauduchon periodic metric.
#[derive(Clone, Debug)]
pub struct TrigMetric {
    pub n: usize,
    pub period: f64,
    pub terms: Vec<(Wave, Vec<C64>)>,
}

impl MetricField for TrigMetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        let n = self.n;
        let mut e: Vec<Jet> = (0..n * n).map(|ij| Jet::real(n, if ij / n == ij % n { 1.0 } else { 0.0 })).collect();
        for (w, c) in &self.terms {
            let cs = w.phase(p, self.period).cos() * w.coeff;
            for ij in 0..n * n {
                if c[ij] != C64::new(0.0, 0.0) {
                    e[ij] += cs * c[ij];
                }
            }
        }
        e
    }
}

/// `h · c` for a positive constant.
#[derive(Clone)]
pub struct ScaledMetric<M> {
    pub base: M,
    pub c: f64,
}

impl<M: MetricField> MetricField for ScaledMetric<M> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        self.base.entries(p).into_iter().map(|e| e * self.c).collect()
    }
    fn in_domain(&self, p: &ChartPoint) -> bool {
        self.base.in_domain(p)
    }
}
