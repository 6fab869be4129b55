//! Checks of the adjoint-operator identities, pointwise and weakly.
//!
//! Labels `c1`..`c8`:
//!
//! | label | identity |
//! |-------|----------|
//! | c1 | `∂̄*(fω) = f ∂̄*ω + √−1 ∂f` |
//! | c2 | `⟨∂̄∂̄*ω, ω⟩ = |∂̄*ω|² − √−1 ∂*∂̄*ω` |
//! | c3 | `⟨∂̄∂̄*ω, ω⟩ = |∂̄*ω|²` for a Gauduchon metric |
//! | c4 | `∂̄*_f ω_f = ∂̄*ω + (n−1)√−1 ∂f` |
//! | c5 | `∂*(fη) = f ∂*η − ⟨η, ∂f⟩` |
//! | c6 | `√−1∂*_f∂̄*_f ω_f = e^{−f}(√−1∂*∂̄*ω − (n−1)(Δ_d f + tr_ω √−1∂∂̄f) + (n−1)²|∂f|²)` |
//! | c7 | `∂*_f η = e^{−f}(∂*η − (n−1)⟨η, ∂f⟩)` |
//! | c8 | `√−1⟨∂̄*ω, ∂f⟩ = ∂̄*∂̄f + tr_ω √−1∂∂̄f` |
//!
//! Pointwise checks compare the closed forms with a recomputation from the
//! conformal metric `e^f h`. Weak checks compare the closed forms with the
//! defining pairings `(∂*η, φ) = (η, ∂φ)`, `(∂̄*Φ, η) = (Φ, ∂̄η)` under quadrature.

use crate::conformal::ConformalMetric;
use crate::error::{CurvError, Result};
use crate::forms::{self, Form1, Form11};
use crate::geometry::{ChartPoint, DerivativeEngine, MetricField};
use crate::jet::Jet;
use crate::quadrature::{GridKind, QuadratureGrid};
use crate::rng;
use crate::tensor::{self, Christoffel, PointGeometry};
use num_complex::Complex64 as C64;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

const I: C64 = C64::new(0.0, 1.0);

pub const LABELS: [&str; 8] = ["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"];

type Field = Arc<dyn Fn(&ChartPoint) -> Jet + Send + Sync>;

/// A random real function `f`, `(1,0)`-form `η` and complex test function `φ`.
#[derive(Clone)]
pub struct TestTriple {
    pub f: Field,
    pub eta: Vec<Field>,
    pub phi: Field,
}

/// How random smooth fields are drawn on a given manifold.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldFamily {
    /// Trigonometric polynomials of degree one in each real coordinate.
    Torus { n: usize, period: f64 },
    /// Monomials in `w = z/|z|` and `w̄` times Fourier modes in `τ`.
    Hopf,
}

impl FieldFamily {
    pub fn for_grid(grid: &QuadratureGrid) -> Self {
        match &grid.kind {
            GridKind::Torus { period, .. } => FieldFamily::Torus { n: grid.dim(), period: *period },
            GridKind::Hopf { .. } => FieldFamily::Hopf,
        }
    }

    fn complex_scalar(&self, r: &mut ChaCha8Rng, amp: f64) -> Field {
        match *self {
            FieldFamily::Torus { n, period } => {
                let mut modes = Vec::new();
                for _ in 0..3 {
                    let k: Vec<f64> = (0..2 * n).map(|_| r.gen_range(-1..=1) as f64).collect();
                    let c = C64::new(r.gen_range(-amp..amp), r.gen_range(-amp..amp));
                    let ph = r.gen_range(0.0..2.0 * PI);
                    modes.push((k, c, ph));
                }
                Arc::new(move |p: &ChartPoint| {
                    let mut acc = Jet::real(n, 0.0);
                    for (k, c, ph) in &modes {
                        let mut th = Jet::real(n, *ph);
                        for j in 0..n {
                            th += p.x(j) * (2.0 * PI * k[j] / period) + p.y(j) * (2.0 * PI * k[n + j] / period);
                        }
                        acc += th.cos() * *c;
                    }
                    acc
                })
            }
            FieldFamily::Hopf => {
                let mut modes = Vec::new();
                for _ in 0..3 {
                    let pw: [u32; 4] = [0, 1, 2, 3].map(|_| r.gen_range(0..=1));
                    let c = C64::new(r.gen_range(-amp..amp), r.gen_range(-amp..amp));
                    let k = r.gen_range(0..=1) as f64;
                    let ph = r.gen_range(0.0..2.0 * PI);
                    modes.push((pw, c, k, ph));
                }
                Arc::new(move |p: &ChartPoint| {
                    let inv = p.norm_sq().powf(-0.5);
                    let w = [p.z(0) * inv, p.z(1) * inv];
                    let tau = crate::metrics::hopf_tau(p);
                    let mut acc = Jet::real(2, 0.0);
                    for (pw, c, k, ph) in &modes {
                        let mut m = (tau * (2.0 * PI * k) + Jet::real(2, *ph)).cos() * *c;
                        for (e, wj) in [(pw[0], w[0]), (pw[1], w[1]), (pw[2], w[0].conj()), (pw[3], w[1].conj())] {
                            if e == 1 {
                                m = m * wj;
                            }
                        }
                        acc += m;
                    }
                    acc
                })
            }
        }
    }

    fn real_scalar(&self, r: &mut ChaCha8Rng, amp: f64) -> Field {
        let c = self.complex_scalar(r, amp);
        Arc::new(move |p: &ChartPoint| {
            let j = c(p);
            (j + j.conj()) * 0.5
        })
    }

    fn one_form(&self, r: &mut ChaCha8Rng, amp: f64) -> Vec<Field> {
        match *self {
            FieldFamily::Torus { n, .. } => (0..n).map(|_| self.complex_scalar(r, amp)).collect(),
            FieldFamily::Hopf => {
                // η_j = Σ_i S_ij z̄_i / |z|², invariant under z ↦ 2z
                let s: Vec<Field> = (0..4).map(|_| self.complex_scalar(r, amp)).collect();
                (0..2)
                    .map(|j| {
                        let (a, b) = (s[j].clone(), s[2 + j].clone());
                        Arc::new(move |p: &ChartPoint| {
                            let rho = p.norm_sq().recip();
                            (a(p) * p.zb(0) + b(p) * p.zb(1)) * rho
                        }) as Field
                    })
                    .collect()
            }
        }
    }

    pub fn triple(&self, r: &mut ChaCha8Rng) -> TestTriple {
        TestTriple { f: self.real_scalar(r, 0.4), eta: self.one_form(r, 0.6), phi: self.complex_scalar(r, 0.6) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResidual {
    pub label: &'static str,
    pub pointwise: f64,
    pub weak: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdjointReport {
    pub residuals: Vec<IdentityResidual>,
    pub triples: usize,
    pub sampled_points: usize,
}

impl AdjointReport {
    pub fn max(&self) -> f64 {
        self.residuals.iter().map(|r| r.pointwise.max(r.weak)).fold(0.0, f64::max)
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

fn rel_vec(a: &[C64], b: &[C64]) -> f64 {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let m = a.iter().chain(b).map(|x| x.norm()).fold(0.0, f64::max);
    d / (1.0 + m)
}

struct Base {
    g: PointGeometry,
    theta: Form1,
    a: C64,
    omega: Form11,
}

fn base_at(metric: &dyn MetricField, p: &ChartPoint) -> Result<Base> {
    let g = PointGeometry::at(&DerivativeEngine::analytic(), metric, p)?;
    let ch = Christoffel::compute(&g);
    let theta = tensor::dbar_star_omega_at(&g, &ch);
    let a = tensor::adjoint_term_at(&g, &ch);
    let omega = Form11::omega_times(&g, &Jet::real(g.n, 1.0));
    Ok(Base { g, theta, a, omega })
}

/// Per-node integrands `(L, R)` for the weak form of each identity.
fn weak_terms(b: &Base, gb: Option<&Base>, t: &TestTriple, p: &ChartPoint) -> [(C64, C64); 8] {
    let g = &b.g;
    let n = g.n;
    let k = n as f64 - 1.0;
    let f = (t.f)(p);
    let phi = (t.phi)(p);
    let fv = f.re();
    let ef = fv.exp();
    let etaj: Vec<Jet> = t.eta.iter().map(|e| e(p)).collect();
    let eta = Form1::from_jets(&etaj);
    let df = Form1::del(&f);
    let dbf = Form1::delbar(&f);
    let dphi = Form1::del(&phi);
    let dbphi = Form1::delbar(&phi);
    let pb = phi.value().conj();
    let dbeta = Form11::delbar_of(&eta);
    let th = &b.theta.c;
    let lap = forms::dbar_star_01(g, &dbf) + forms::d_star_10(g, &df);
    let tr = forms::trace_ddbar(g, &f);
    let grad2 = forms::inner10(g, &df.c, &df.c);
    let eta_df = forms::inner10(g, &eta.c, &df.c);
    let dstar_eta = forms::d_star_10(g, &eta);
    let th_plus: Vec<C64> = th.iter().zip(&df.c).map(|(a, d)| a + I * k * d).collect();
    let omega_b = &b.omega.c;

    let c1l = forms::inner10(g, &th.iter().zip(&df.c).map(|(a, d)| a * fv + I * d).collect::<Vec<_>>(), &eta.c);
    let c1r = forms::inner11(g, &(omega_b * C64::from(fv)), &dbeta);

    let phi_omega = Form11::omega_times(g, &phi);
    let c2l = (forms::inner10(g, th, th) - b.a) * pb;
    let c2r = forms::inner10(g, th, &forms::dbar_star_11(g, &phi_omega));

    let (c3l, c3r) = match gb {
        Some(gb) => {
            let gg = &gb.g;
            let pw = Form11::omega_times(gg, &phi);
            (forms::inner10(gg, &gb.theta.c, &gb.theta.c) * pb, forms::inner10(gg, &gb.theta.c, &forms::dbar_star_11(gg, &pw)))
        }
        None => (C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
    };

    let w1 = ef.powf(k); // e^{−f} e^{nf}
    let c4l = forms::inner10(g, &th_plus, &eta.c) * w1;
    let c4r = forms::inner11(g, omega_b, &dbeta) * w1;

    let c5l = (dstar_eta * fv - eta_df) * pb;
    let c5r = forms::inner10(g, &eta.c.iter().map(|x| x * fv).collect::<Vec<_>>(), &dphi.c);

    let c6rhs = (b.a - k * (lap + tr) + k * k * grad2) / ef;
    let c6l = c6rhs * pb * ef.powi(n as i32);
    let c6r = I * forms::inner10(g, &th_plus, &dphi.c) * w1;

    let c7l = (dstar_eta - k * eta_df) / ef * pb * ef.powi(n as i32);
    let c7r = forms::inner10(g, &eta.c, &dphi.c) * w1;

    let c8l = I * forms::inner10(g, th, &df.c) * pb;
    let c8r = forms::inner01(g, &dbf.c, &dbphi.c) + tr * pb;

    [(c1l, c1r), (c2l, c2r), (c3l, c3r), (c4l, c4r), (c5l, c5r), (c6l, c6r), (c7l, c7r), (c8l, c8r)]
}

/// Pointwise residuals at one node.
fn pointwise(metric: &Arc<dyn MetricField>, b: &Base, gb: Option<&Base>, t: &TestTriple, p: &ChartPoint) -> Result<[f64; 8]> {
    let g = &b.g;
    let n = g.n;
    let k = n as f64 - 1.0;
    let f = (t.f)(p);
    let fv = f.re();
    let ef = fv.exp();
    let eta = Form1::from_jets(&t.eta.iter().map(|e| e(p)).collect::<Vec<_>>());
    let df = Form1::del(&f);
    let dbf = Form1::delbar(&f);
    let th = &b.theta.c;

    let c1l = forms::dbar_star_11(g, &Form11::omega_times(g, &f));
    let c1r: Vec<C64> = th.iter().zip(&df.c).map(|(a, d)| a * fv + I * d).collect();

    let c2l = forms::inner11(g, &Form11::delbar_of(&b.theta), &b.omega.c);
    let c2r = forms::inner10(g, th, th) - b.a;

    let c3 = match gb {
        Some(gb) => rel(forms::inner11(&gb.g, &Form11::delbar_of(&gb.theta), &gb.omega.c), forms::inner10(&gb.g, &gb.theta.c, &gb.theta.c)),
        None => 0.0,
    };

    let fc = t.f.clone();
    let cm = ConformalMetric { base: metric.clone(), f: Arc::new(move |q: &ChartPoint| fc(q)) };
    let gf = PointGeometry::at(&DerivativeEngine::analytic(), &cm, p)?;
    let chf = Christoffel::compute(&gf);
    let c4l = tensor::dbar_star_omega_at(&gf, &chf).c;
    let c4r: Vec<C64> = th.iter().zip(&df.c).map(|(a, d)| a + I * k * d).collect();

    let eta_df = forms::inner10(g, &eta.c, &df.c);
    let dstar_eta = forms::d_star_10(g, &eta);
    let c5l = forms::d_star_10(g, &eta.times(&f));
    let c5r = dstar_eta * fv - eta_df;

    let lap = forms::dbar_star_01(g, &dbf) + forms::d_star_10(g, &df);
    let tr = forms::trace_ddbar(g, &f);
    let c6l = tensor::adjoint_term_at(&gf, &chf);
    let c6r = (b.a - k * (lap + tr) + k * k * forms::inner10(g, &df.c, &df.c)) / ef;

    let c7l = forms::d_star_10(&gf, &eta);
    let c7r = (dstar_eta - k * eta_df) / ef;

    let c8l = I * forms::inner10(g, th, &df.c);
    let c8r = forms::dbar_star_01(g, &dbf) + tr;

    Ok([
        rel_vec(&c1l, &c1r),
        rel(c2l, c2r),
        c3,
        rel_vec(&c4l, &c4r),
        rel(c5l, c5r),
        rel(c6l, c6r),
        rel(c7l, c7r),
        rel(c8l, c8r),
    ])
}

/// Runs every identity for `triples` random triples drawn from `seed`.
///
/// `gauduchon` is a Gauduchon metric in the conformal class, used for c3;
/// without it c3 is reported as zero.
pub fn verify_adjoint_identities(
    metric: Arc<dyn MetricField>,
    gauduchon: Option<Arc<dyn MetricField>>,
    grid: &QuadratureGrid,
    seed: u64,
    triples: usize,
    sampled_points: usize,
) -> Result<AdjointReport> {
    if grid.is_empty() {
        return Err(CurvError::QuadratureUnsupported(grid.manifold.clone()));
    }
    let family = FieldFamily::for_grid(grid);
    let mut r = rng::stream(seed, rng::STREAM_TEST_FIELDS);
    let bases: Vec<Base> = grid.nodes.iter().map(|p| base_at(metric.as_ref(), p)).collect::<Result<_>>()?;
    let gbases: Option<Vec<Base>> = match &gauduchon {
        Some(m) => Some(grid.nodes.iter().map(|p| base_at(m.as_ref(), p)).collect::<Result<_>>()?),
        None => None,
    };
    let vw = grid.volume_weights(metric.as_ref());
    let gw = gauduchon.as_ref().map(|m| grid.volume_weights(m.as_ref()));
    let mut pw = [0.0f64; 8];
    let mut wk = [0.0f64; 8];
    for _ in 0..triples {
        let t = family.triple(&mut r);
        let mut acc = [(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 8];
        for (i, p) in grid.nodes.iter().enumerate() {
            let terms = weak_terms(&bases[i], gbases.as_ref().map(|v| &v[i]), &t, p);
            for (c, (l, rr)) in terms.iter().enumerate() {
                let w = if c == 2 { gw.as_ref().map_or(0.0, |g| g[i]) } else { vw[i] };
                if !(l.is_finite() && rr.is_finite()) {
                    return Err(CurvError::NonFiniteIntegrand(i));
                }
                acc[c].0 += l * w;
                acc[c].1 += rr * w;
            }
        }
        for c in 0..8 {
            wk[c] = wk[c].max(rel(acc[c].0, acc[c].1));
        }
        let picks = sample(&mut r, grid.len(), sampled_points.min(grid.len()));
        for i in picks.iter() {
            let res = pointwise(&metric, &bases[i], gbases.as_ref().map(|v| &v[i]), &t, &grid.nodes[i])?;
            for c in 0..8 {
                pw[c] = pw[c].max(res[c]);
            }
        }
    }
    Ok(AdjointReport {
        residuals: (0..8).map(|c| IdentityResidual { label: LABELS[c], pointwise: pw[c], weak: wk[c] }).collect(),
        triples,
        sampled_points,
    })
}
