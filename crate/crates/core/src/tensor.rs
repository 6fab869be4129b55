//! Pointwise tensor calculus of a Hermitian metric.
//!
//! Index letters: `0..n` are holomorphic (`i`), `n..2n` antiholomorphic (`ī`).
//! `H[(i, j)] = h_{ij̄}` and `G = H⁻¹`, so `h^{ij̄} = G[(j, i)]`.

use crate::error::{CurvError, Result};
use crate::forms::{self, Form1};
use crate::geometry::{cmax, hermitian_to_real, ChartPoint, DerivativeEngine, MetricField, MetricJet};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

const I: C64 = C64::new(0.0, 1.0);
const Z: C64 = C64::new(0.0, 0.0);

/// Inverse metric, its derivatives and the log-determinant at a point.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub n: usize,
    pub point: ChartPoint,
    pub mj: MetricJet,
    /// `H⁻¹`.
    pub g: DMatrix<C64>,
    /// `∂_A (H⁻¹)`.
    pub dg: Vec<DMatrix<C64>>,
    pub det: f64,
    /// `∂_A log det h`.
    pub dlogdet: Vec<C64>,
}

impl PointGeometry {
    pub fn new(point: ChartPoint, mj: MetricJet) -> Result<Self> {
        let n = mj.n;
        let det = mj.h.determinant();
        if !(det.re > 0.0) || !det.is_finite() {
            return Err(CurvError::SingularMetric);
        }
        let g = mj.h.clone().try_inverse().ok_or(CurvError::SingularMetric)?;
        if cmax(&(&g * &mj.h - DMatrix::identity(n, n))) > 1e-8 {
            return Err(CurvError::SingularMetric);
        }
        let dg: Vec<_> = mj.dh.iter().map(|d| -(&g * d * &g)).collect();
        let dlogdet = mj.dh.iter().map(|d| (&g * d).trace()).collect();
        Ok(PointGeometry { n, point, mj, g, dg, det: det.re, dlogdet })
    }

    pub fn at(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<Self> {
        Self::new(*p, engine.metric_jet(metric, p)?)
    }

    /// `h^{kl̄}`.
    #[inline]
    pub fn hinv(&self, k: usize, l: usize) -> C64 {
        self.g[(l, k)]
    }

    /// `∂_A h^{kl̄}`.
    #[inline]
    pub fn d_hinv(&self, a: usize, k: usize, l: usize) -> C64 {
        self.dg[a][(l, k)]
    }

    /// `∂_A h_{ij̄}`.
    #[inline]
    pub fn dh(&self, a: usize, i: usize, j: usize) -> C64 {
        self.mj.dh[a][(i, j)]
    }

    #[inline]
    pub fn ddh(&self, a: usize, b: usize, i: usize, j: usize) -> C64 {
        self.mj.ddh[a][b][(i, j)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorKind {
    Christoffel,
    Torsion,
    Curvature,
    Ricci,
    OneForm,
}

/// Complex components over the `2n`-letter alphabet, row-major in the index
/// order of `signature`. Slots forbidden by the Hermitian structure are zero.
#[derive(Clone, Debug)]
pub struct TensorBlock {
    pub kind: TensorKind,
    pub n: usize,
    /// Index positions, `true` for an upper index.
    pub signature: Vec<bool>,
    pub point: ChartPoint,
    pub data: Vec<C64>,
}

impl TensorBlock {
    pub fn zeros(kind: TensorKind, n: usize, signature: Vec<bool>, point: ChartPoint) -> Self {
        let len = (2 * n).pow(signature.len() as u32);
        TensorBlock { kind, n, signature, point, data: vec![Z; len] }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.signature.len());
        idx.iter().fold(0, |acc, &a| acc * 2 * self.n + a)
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: C64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// Christoffel symbols of the complexified Levi-Civita connection:
/// `hol[k][i][j] = Γ^k_{ij}`, `mixed[k][i][j] = Γ^k_{īj}`, with derivatives
/// `d_hol[A]`, `d_mixed[A]`.
#[derive(Clone, Debug)]
pub struct Christoffel {
    pub n: usize,
    pub hol: Vec<C64>,
    pub mixed: Vec<C64>,
    pub d_hol: Vec<Vec<C64>>,
    pub d_mixed: Vec<Vec<C64>>,
}

impl Christoffel {
    #[inline]
    fn ix(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.n + i) * self.n + j
    }
    /// `Γ^k_{ij}`.
    pub fn hol(&self, k: usize, i: usize, j: usize) -> C64 {
        self.hol[self.ix(k, i, j)]
    }
    /// `Γ^k_{īj}` (= `Γ^k_{jī}`).
    pub fn mixed(&self, k: usize, i: usize, j: usize) -> C64 {
        self.mixed[self.ix(k, i, j)]
    }
    pub fn d_hol(&self, a: usize, k: usize, i: usize, j: usize) -> C64 {
        self.d_hol[a][self.ix(k, i, j)]
    }
    pub fn d_mixed(&self, a: usize, k: usize, i: usize, j: usize) -> C64 {
        self.d_mixed[a][self.ix(k, i, j)]
    }

    pub fn compute(geom: &PointGeometry) -> Self {
        let n = geom.n;
        let m = 2 * n;
        let len = n * n * n;
        let mut hol = vec![Z; len];
        let mut mixed = vec![Z; len];
        let mut d_hol = vec![vec![Z; len]; m];
        let mut d_mixed = vec![vec![Z; len]; m];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let o = (k * n + i) * n + j;
                    let ib = n + i;
                    for l in 0..n {
                        let lb = n + l;
                        let hk = geom.hinv(k, l);
                        // Γ^k_{ij} = ½ h^{kl̄}(∂_i h_{jl̄} + ∂_j h_{il̄})
                        let a = geom.dh(i, j, l) + geom.dh(j, i, l);
                        // Γ^k_{īj} = ½ h^{kl̄}(∂_ī h_{jl̄} − ∂_l̄ h_{jī})
                        let b = geom.dh(ib, j, l) - geom.dh(lb, j, i);
                        hol[o] += 0.5 * hk * a;
                        mixed[o] += 0.5 * hk * b;
                        for e in 0..m {
                            let dk = geom.d_hinv(e, k, l);
                            let da = geom.ddh(e, i, j, l) + geom.ddh(e, j, i, l);
                            let db = geom.ddh(e, ib, j, l) - geom.ddh(e, lb, j, i);
                            d_hol[e][o] += 0.5 * (dk * a + hk * da);
                            d_mixed[e][o] += 0.5 * (dk * b + hk * db);
                        }
                    }
                }
            }
        }
        Christoffel { n, hol, mixed, d_hol, d_mixed }
    }

    /// All symbols `Γ^C_{AB}` in alphabet form.
    pub fn to_block(&self, point: ChartPoint) -> TensorBlock {
        let n = self.n;
        let mut t = TensorBlock::zeros(TensorKind::Christoffel, n, vec![true, false, false], point);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let h = self.hol(k, i, j);
                    let x = self.mixed(k, i, j);
                    t.set(&[k, i, j], h);
                    t.set(&[k, n + i, j], x);
                    t.set(&[k, j, n + i], x);
                    t.set(&[n + k, n + i, n + j], h.conj());
                    t.set(&[n + k, i, n + j], x.conj());
                    t.set(&[n + k, n + j, i], x.conj());
                }
            }
        }
        t
    }
}

pub fn christoffel(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<TensorBlock> {
    let geom = PointGeometry::at(engine, metric, p)?;
    Ok(Christoffel::compute(&geom).to_block(*p))
}

/// Torsion `T^k_{ij} = h^{kl̄}(∂_i h_{jl̄} − ∂_j h_{il̄})`, index `[k][i][j]`.
pub fn torsion_components(geom: &PointGeometry) -> Vec<C64> {
    let n = geom.n;
    let mut t = vec![Z; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut s = Z;
                for l in 0..n {
                    s += geom.hinv(k, l) * (geom.dh(i, j, l) - geom.dh(j, i, l));
                }
                t[(k * n + i) * n + j] = s;
            }
        }
    }
    t
}

/// `|T|² = Σ h^{ip̄} h^{jq̄} h_{kl̄} T^k_{ij} conj(T^l_{pq})`.
pub fn torsion_norm_sq(geom: &PointGeometry, t: &[C64]) -> f64 {
    let n = geom.n;
    let h = &geom.mj.h;
    let mut s = Z;
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for p in 0..n {
                        for q in 0..n {
                            s += geom.hinv(i, p)
                                * geom.hinv(j, q)
                                * h[(k, l)]
                                * t[(k * n + i) * n + j]
                                * t[(l * n + p) * n + q].conj();
                        }
                    }
                }
            }
        }
    }
    s.re
}

pub fn torsion(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<(TensorBlock, f64)> {
    let geom = PointGeometry::at(engine, metric, p)?;
    let n = geom.n;
    let t = torsion_components(&geom);
    let norm = torsion_norm_sq(&geom, &t);
    let mut b = TensorBlock::zeros(TensorKind::Torsion, n, vec![true, false, false], *p);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                b.set(&[k, i, j], t[(k * n + i) * n + j]);
            }
        }
    }
    Ok((b, norm))
}

/// `τ_i = T^k_{ik}`.
pub fn torsion_trace(geom: &PointGeometry, t: &[C64]) -> Vec<C64> {
    let n = geom.n;
    (0..n).map(|i| (0..n).map(|k| t[(k * n + i) * n + k]).sum()).collect()
}

/// Complexified curvature: `up[i][j][k][l] = R^l_{ij̄k}` and the lowered
/// `low[i][j][k][l] = R_{ij̄kl̄}`.
#[derive(Clone, Debug)]
pub struct ComplexCurvature {
    pub n: usize,
    pub up: Vec<C64>,
    pub low: Vec<C64>,
}

impl ComplexCurvature {
    #[inline]
    pub fn ix(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn compute(geom: &PointGeometry, ch: &Christoffel) -> Self {
        let n = geom.n;
        let len = n * n * n * n;
        let mut up = vec![Z; len];
        for i in 0..n {
            for j in 0..n {
                let jb = n + j;
                for k in 0..n {
                    for l in 0..n {
                        let mut s = ch.d_hol(jb, l, i, k) - ch.d_mixed(i, l, j, k);
                        for t in 0..n {
                            s += ch.hol(t, i, k) * ch.mixed(l, j, t);
                            s -= ch.mixed(t, j, k) * ch.hol(l, i, t);
                            // Γ^{t̄}_{j̄k} = conj(Γ^t_{k̄j}), Γ^l_{it̄} = Γ^l_{t̄i}
                            s -= ch.mixed(t, k, j).conj() * ch.mixed(l, t, i);
                        }
                        up[((i * n + j) * n + k) * n + l] = -s;
                    }
                }
            }
        }
        let mut low = vec![Z; len];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        low[((i * n + j) * n + k) * n + l] =
                            (0..n).map(|p| up[((i * n + j) * n + k) * n + p] * geom.mj.h[(p, l)]).sum();
                    }
                }
            }
        }
        ComplexCurvature { n, up, low }
    }

    /// Largest violation of `R_{ij̄kl̄} = conj(R_{jīlk̄})`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let a = self.low[self.ix(i, j, k, l)];
                        let b = self.low[self.ix(j, i, l, k)].conj();
                        worst = worst.max((a - b).norm());
                    }
                }
            }
        }
        worst
    }

    /// `s = 2 h^{ij̄} h^{kl̄} (2 R_{il̄kj̄} − R_{ij̄kl̄})`.
    pub fn scalar(&self, geom: &PointGeometry) -> C64 {
        let n = self.n;
        let mut s = Z;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        s += geom.hinv(i, j)
                            * geom.hinv(k, l)
                            * (2.0 * self.low[self.ix(i, l, k, j)] - self.low[self.ix(i, j, k, l)]);
                    }
                }
            }
        }
        2.0 * s
    }
}

pub fn curvature_complexified(
    engine: &DerivativeEngine,
    metric: &dyn MetricField,
    p: &ChartPoint,
) -> Result<(TensorBlock, ComplexCurvature)> {
    let geom = PointGeometry::at(engine, metric, p)?;
    let ch = Christoffel::compute(&geom);
    let cc = ComplexCurvature::compute(&geom, &ch);
    let scale = 1.0 + cc.low.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let defect = cc.hermitian_defect();
    if defect > 1e-10 * scale {
        return Err(CurvError::CrossCheckFailed { what: "curvature Hermitian symmetry".into(), got: defect, tol: 1e-10 * scale });
    }
    let n = geom.n;
    let mut b = TensorBlock::zeros(TensorKind::Curvature, n, vec![false; 4], *p);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    b.set(&[i, n + j, k, n + l], cc.low[cc.ix(i, j, k, l)]);
                }
            }
        }
    }
    Ok((b, cc))
}

/// Chern Ricci form `R_{ij̄} = −∂_i∂_j̄ log det h` (matrix `[(i, j)]`) and `s_C`.
pub fn chern_ricci_at(geom: &PointGeometry) -> (DMatrix<C64>, C64) {
    let n = geom.n;
    let g = &geom.g;
    let ric = DMatrix::from_fn(n, n, |i, j| {
        let jb = n + j;
        let a = (g * &geom.mj.ddh[i][jb]).trace();
        let b = (g * &geom.mj.dh[jb] * g * &geom.mj.dh[i]).trace();
        -(a - b)
    });
    let mut s = Z;
    for i in 0..n {
        for j in 0..n {
            s += geom.hinv(i, j) * ric[(i, j)];
        }
    }
    (ric, s)
}

pub fn chern_ricci(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<(DMatrix<C64>, f64)> {
    let geom = PointGeometry::at(engine, metric, p)?;
    let (r, s) = chern_ricci_at(&geom);
    Ok((r, s.re))
}

/// `∂̄*ω = 2√−1 conj(Γ^k_{īk}) dz^i`, with first derivatives.
pub fn dbar_star_omega_at(geom: &PointGeometry, ch: &Christoffel) -> Form1 {
    let n = geom.n;
    let c = (0..n).map(|i| 2.0 * I * (0..n).map(|k| ch.mixed(k, i, k)).sum::<C64>().conj()).collect();
    // ∂_A conj(F) = conj(∂_{Ā} F)
    let bar = |a: usize| if a < n { a + n } else { a - n };
    let d = (0..2 * n)
        .map(|a| (0..n).map(|i| 2.0 * I * (0..n).map(|k| ch.d_mixed(bar(a), k, i, k)).sum::<C64>().conj()).collect())
        .collect();
    Form1 { c, d }
}

pub fn dbar_star_omega(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<TensorBlock> {
    let geom = PointGeometry::at(engine, metric, p)?;
    let th = dbar_star_omega_at(&geom, &Christoffel::compute(&geom));
    let mut b = TensorBlock::zeros(TensorKind::OneForm, geom.n, vec![false], *p);
    for (i, v) in th.c.iter().enumerate() {
        b.set(&[i], *v);
    }
    Ok(b)
}

/// `√−1 ∂*∂̄*ω`, computed as the divergence of the `(1,0)`-form `∂̄*ω`.
pub fn adjoint_term_at(geom: &PointGeometry, ch: &Christoffel) -> C64 {
    I * forms::d_star_10(geom, &dbar_star_omega_at(geom, ch))
}

/// Everything entering the scalar-curvature identity at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarReport {
    pub point: ChartPoint,
    /// Riemannian scalar curvature from the real-coordinate Levi-Civita computation.
    pub s: f64,
    /// Same quantity from the complexified curvature.
    pub s_complexified: f64,
    pub s_c: f64,
    pub torsion_norm_sq: f64,
    pub adjoint_term: f64,
    /// `s − (2 s_C − 2 A − ½|T|²)`.
    pub identity_residual: f64,
    /// Largest imaginary part seen among `s`, `s_C` and the adjoint term.
    pub max_imag: f64,
}

impl ScalarReport {
    pub fn relative_residual(&self) -> f64 {
        self.identity_residual.abs() / (1.0 + self.s.abs())
    }
}

pub fn scalar_report_at(geom: &PointGeometry) -> Result<ScalarReport> {
    let ch = Christoffel::compute(geom);
    let cc = ComplexCurvature::compute(geom, &ch);
    let s = cc.scalar(geom);
    let (_, sc) = chern_ricci_at(geom);
    let t = torsion_components(geom);
    let tn = torsion_norm_sq(geom, &t);
    let a = adjoint_term_at(geom, &ch);
    let s_real = real_oracle::scalar(geom)?;
    let residual = s_real - (2.0 * sc.re - 2.0 * a.re - 0.5 * tn);
    Ok(ScalarReport {
        point: geom.point,
        s: s_real,
        s_complexified: s.re,
        s_c: sc.re,
        torsion_norm_sq: tn,
        adjoint_term: a.re,
        identity_residual: residual,
        max_imag: s.im.abs().max(sc.im.abs()).max(a.im.abs()),
    })
}

pub fn scalar_identity_residual(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<ScalarReport> {
    scalar_report_at(&PointGeometry::at(engine, metric, p)?)
}

pub fn riemannian_scalar(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<f64> {
    let geom = PointGeometry::at(engine, metric, p)?;
    let ch = Christoffel::compute(&geom);
    Ok(ComplexCurvature::compute(&geom, &ch).scalar(&geom).re)
}

pub fn riemannian_scalar_real_oracle(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint) -> Result<f64> {
    real_oracle::scalar(&PointGeometry::at(engine, metric, p)?)
}

/// Full complexified Levi-Civita curvature `R_{ABCD}` over the `2n` alphabet,
/// built from the complex-bilinear extension of `g`.
pub fn full_curvature_lowered(geom: &PointGeometry) -> Result<Vec<C64>> {
    let n = geom.n;
    let m = 2 * n;
    // g_{i j̄} = g_{j̄ i} = h_{ij̄}
    let gmat = |dm: &DMatrix<C64>| {
        let mut g = DMatrix::from_element(m, m, Z);
        for i in 0..n {
            for j in 0..n {
                g[(i, n + j)] = dm[(i, j)];
                g[(n + j, i)] = dm[(i, j)];
            }
        }
        g
    };
    let g0 = gmat(&geom.mj.h);
    let dg: Vec<_> = (0..m).map(|a| gmat(&geom.mj.dh[a])).collect();
    let ddg: Vec<Vec<_>> = (0..m).map(|a| (0..m).map(|b| gmat(&geom.mj.ddh[a][b])).collect()).collect();
    let gi = g0.clone().try_inverse().ok_or(CurvError::SingularMetric)?;
    let dgi: Vec<_> = dg.iter().map(|d| -(&gi * d * &gi)).collect();
    let ix3 = |c: usize, a: usize, b: usize| (c * m + a) * m + b;
    let mut gam = vec![Z; m * m * m];
    let mut dgam = vec![vec![Z; m * m * m]; m];
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                for e in 0..m {
                    let k = dg[b][(a, e)] + dg[a][(b, e)] - dg[e][(a, b)];
                    gam[ix3(c, a, b)] += 0.5 * gi[(c, e)] * k;
                    for f in 0..m {
                        let dk = ddg[f][b][(a, e)] + ddg[f][a][(b, e)] - ddg[f][e][(a, b)];
                        dgam[f][ix3(c, a, b)] += 0.5 * (dgi[f][(c, e)] * k + gi[(c, e)] * dk);
                    }
                }
            }
        }
    }
    // R^D_{ABC}: R(∂_A, ∂_B)∂_C
    let mut r = vec![Z; m * m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for e in 0..m {
                    let mut rd = Z;
                    for d in 0..m {
                        let mut v = dgam[a][ix3(d, b, c)] - dgam[b][ix3(d, a, c)];
                        for f in 0..m {
                            v += gam[ix3(f, b, c)] * gam[ix3(d, a, f)] - gam[ix3(f, a, c)] * gam[ix3(d, b, f)];
                        }
                        rd += v * g0[(d, e)];
                    }
                    r[((a * m + b) * m + c) * m + e] = rd;
                }
            }
        }
    }
    Ok(r)
}

/// Riemannian Ricci curvature `Ric(X, Y) = h^{il̄}[R(∂_i, X, Y, ∂_l̄) + R(∂_i, Y, X, ∂_l̄)]`
/// for real tangent vectors in the ordering `(x^1..x^n, y^1..y^n)`.
pub fn riemannian_ricci_at(geom: &PointGeometry, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = geom.n;
    let m = 2 * n;
    let r = full_curvature_lowered(geom)?;
    // X = ξ^k ∂_k + conj(ξ^k) ∂_k̄ with ξ^k = X^{x_k} + √−1 X^{y_k}
    let cx = |v: &[f64]| -> Vec<C64> {
        let mut c = vec![Z; m];
        for k in 0..n {
            let xi = C64::new(v[k], v[n + k]);
            c[k] = xi;
            c[n + k] = xi.conj();
        }
        c
    };
    let (xc, yc) = (cx(x), cx(y));
    let mut s = Z;
    for i in 0..n {
        for l in 0..n {
            let lb = n + l;
            let mut t = Z;
            for b in 0..m {
                for c in 0..m {
                    t += xc[b] * yc[c] * r[((i * m + b) * m + c) * m + lb];
                    t += yc[b] * xc[c] * r[((i * m + b) * m + c) * m + lb];
                }
            }
            s += geom.hinv(i, l) * t;
        }
    }
    Ok(s.re)
}

pub fn riemannian_ricci(engine: &DerivativeEngine, metric: &dyn MetricField, p: &ChartPoint, x: &[f64], y: &[f64]) -> Result<f64> {
    riemannian_ricci_at(&PointGeometry::at(engine, metric, p)?, x, y)
}

/// Levi-Civita computations in the real coordinates `(x^1..x^n, y^1..y^n)`.
pub mod real_oracle {
    use super::*;

    struct RealJet {
        g: DMatrix<f64>,
        dg: Vec<DMatrix<f64>>,
        ddg: Vec<Vec<DMatrix<f64>>>,
    }

    fn real_jet(geom: &PointGeometry) -> RealJet {
        let n = geom.n;
        let m = 2 * n;
        // ∂_{x_k} = ∂_k + ∂_k̄, ∂_{y_k} = √−1(∂_k − ∂_k̄)
        let lift = |r: usize| -> Vec<(usize, C64)> {
            if r < n {
                vec![(r, C64::new(1.0, 0.0)), (n + r, C64::new(1.0, 0.0))]
            } else {
                vec![(r - n, I), (r, -I)]
            }
        };
        let d1: Vec<DMatrix<f64>> = (0..m)
            .map(|r| {
                let mut acc = DMatrix::from_element(n, n, Z);
                for (a, c) in lift(r) {
                    acc += &geom.mj.dh[a] * c;
                }
                hermitian_to_real(&acc)
            })
            .collect();
        let d2: Vec<Vec<DMatrix<f64>>> = (0..m)
            .map(|r| {
                (0..m)
                    .map(|s| {
                        let mut acc = DMatrix::from_element(n, n, Z);
                        for (a, ca) in lift(r) {
                            for (b, cb) in lift(s) {
                                acc += &geom.mj.ddh[a][b] * (ca * cb);
                            }
                        }
                        hermitian_to_real(&acc)
                    })
                    .collect()
            })
            .collect();
        RealJet { g: hermitian_to_real(&geom.mj.h), dg: d1, ddg: d2 }
    }

    /// Returns `(g⁻¹, Ric_{bc})`.
    fn ricci(geom: &PointGeometry) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let rj = real_jet(geom);
        let m = rj.g.nrows();
        let gi = rj.g.clone().try_inverse().ok_or(CurvError::SingularMetric)?;
        let dgi: Vec<_> = rj.dg.iter().map(|d| -(&gi * d * &gi)).collect();
        let ix3 = |c: usize, a: usize, b: usize| (c * m + a) * m + b;
        let mut gam = vec![0.0; m * m * m];
        let mut dgam = vec![vec![0.0; m * m * m]; m];
        for c in 0..m {
            for a in 0..m {
                for b in 0..m {
                    for e in 0..m {
                        let k = rj.dg[b][(a, e)] + rj.dg[a][(b, e)] - rj.dg[e][(a, b)];
                        gam[ix3(c, a, b)] += 0.5 * gi[(c, e)] * k;
                        for f in 0..m {
                            let dk = rj.ddg[f][b][(a, e)] + rj.ddg[f][a][(b, e)] - rj.ddg[f][e][(a, b)];
                            dgam[f][ix3(c, a, b)] += 0.5 * (dgi[f][(c, e)] * k + gi[(c, e)] * dk);
                        }
                    }
                }
            }
        }
        // Ric_{bc} = R^a_{abc} = ∂_aΓ^a_{bc} − ∂_bΓ^a_{ac} + Γ^e_{bc}Γ^a_{ae} − Γ^e_{ac}Γ^a_{be}
        let mut ric = DMatrix::zeros(m, m);
        for b in 0..m {
            for c in 0..m {
                let mut v = 0.0;
                for a in 0..m {
                    v += dgam[a][ix3(a, b, c)] - dgam[b][ix3(a, a, c)];
                    for e in 0..m {
                        v += gam[ix3(e, b, c)] * gam[ix3(a, a, e)] - gam[ix3(e, a, c)] * gam[ix3(a, b, e)];
                    }
                }
                ric[(b, c)] = v;
            }
        }
        Ok((gi, ric))
    }

    pub fn scalar(geom: &PointGeometry) -> Result<f64> {
        let (gi, ric) = ricci(geom)?;
        Ok(gi.component_mul(&ric).sum())
    }

    /// `Ric(X, Y)` in real coordinates.
    pub fn ricci_xy(geom: &PointGeometry, x: &[f64], y: &[f64]) -> Result<f64> {
        let (_, ric) = ricci(geom)?;
        let m = ric.nrows();
        let mut s = 0.0;
        for b in 0..m {
            for c in 0..m {
                s += x[b] * ric[(b, c)] * y[c];
            }
        }
        Ok(s)
    }
}
