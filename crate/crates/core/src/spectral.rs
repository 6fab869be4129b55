//! Tensor-product spectral bases in a few real local coordinates.
//!
//! A basis function is a product of one-dimensional factors, one per local
//! coordinate. Local coordinates are real functions of the chart point (real
//! torus coordinates, or `(τ, s)` on the Hopf surface) supplied as jets.

use crate::geometry::ChartPoint;
use crate::jet::Jet;
use crate::metrics::{hopf_s, hopf_tau};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `1, cos(2πkq/L), sin(2πkq/L), …` for `k ≤ kmax`; index `2k−1` is cos, `2k` is sin.
    Fourier { kmax: usize, period: f64 },
    /// Legendre polynomials `P_j(2q − 1)` on `[0, 1]`, `j ≤ degree`.
    Legendre { degree: usize },
}

impl Family {
    pub fn size(&self) -> usize {
        match self {
            Family::Fourier { kmax, .. } => 2 * kmax + 1,
            Family::Legendre { degree } => degree + 1,
        }
    }

    /// Values, first and second derivatives of every member at `q`.
    pub fn eval(&self, q: f64) -> Vec<[f64; 3]> {
        match self {
            Family::Fourier { kmax, period } => {
                let mut out = vec![[1.0, 0.0, 0.0]];
                for k in 1..=*kmax {
                    let w = 2.0 * PI * k as f64 / period;
                    let (s, c) = (w * q).sin_cos();
                    out.push([c, -w * s, -w * w * c]);
                    out.push([s, w * c, -w * w * s]);
                }
                out
            }
            Family::Legendre { degree } => {
                let x = 2.0 * q - 1.0;
                // P, P', P'' in x; chain factor 2 per derivative
                let mut out: Vec<[f64; 3]> = Vec::with_capacity(degree + 1);
                let (mut p0, mut d0, mut e0) = (1.0, 0.0, 0.0);
                out.push([p0, 0.0, 0.0]);
                if *degree >= 1 {
                    let (mut p1, mut d1, mut e1) = (x, 1.0, 0.0);
                    out.push([p1, 2.0 * d1, 0.0]);
                    for j in 1..*degree {
                        let jf = j as f64;
                        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
                        let d2 = ((2.0 * jf + 1.0) * (p1 + x * d1) - jf * d0) / (jf + 1.0);
                        let e2 = ((2.0 * jf + 1.0) * (2.0 * d1 + x * e1) - jf * e0) / (jf + 1.0);
                        out.push([p2, 2.0 * d2, 4.0 * e2]);
                        p0 = p1;
                        d0 = d1;
                        e0 = e1;
                        p1 = p2;
                        d1 = d2;
                        e1 = e2;
                    }
                }
                out
            }
        }
    }
}

/// How local coordinates are read off a chart point.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalCoords {
    /// Real torus coordinates `(x^1..x^n, y^1..y^n)` by index.
    Real(Vec<usize>),
    /// `(τ, s)` on the Hopf annulus.
    HopfTauS,
}

impl LocalCoords {
    pub fn jets(&self, p: &ChartPoint) -> Vec<Jet> {
        match self {
            LocalCoords::Real(idx) => {
                let n = p.dim();
                idx.iter().map(|&r| if r < n { p.x(r) } else { p.y(r - n) }).collect()
            }
            LocalCoords::HopfTauS => vec![hopf_tau(p), hopf_s(p)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBasis {
    pub coords: LocalCoords,
    pub families: Vec<Family>,
    /// Multi-indices into the families; the first entry is the constant function.
    pub indices: Vec<Vec<usize>>,
}

/// Value, gradient and Hessian in local coordinates.
pub type LocalJet = (f64, Vec<f64>, Vec<Vec<f64>>);

impl SpectralBasis {
    /// Full tensor product of the families.
    pub fn tensor(coords: LocalCoords, families: Vec<Family>) -> Self {
        let mut indices = vec![vec![]];
        for f in &families {
            let mut next = Vec::new();
            for m in &indices {
                for k in 0..f.size() {
                    let mut v = m.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            indices = next;
        }
        SpectralBasis { coords, families, indices }
    }

    /// Tensor product restricted to Fourier modes with `Σ |k_c| ≤ kmax`.
    pub fn fourier_l1(coords: Vec<usize>, kmax: usize, period: f64) -> Self {
        let fam = Family::Fourier { kmax, period };
        let full = Self::tensor(LocalCoords::Real(coords.clone()), vec![fam; coords.len()]);
        let indices = full.indices.into_iter().filter(|m| m.iter().map(|&i| i.div_ceil(2)).sum::<usize>() <= kmax).collect();
        SpectralBasis { indices, ..full }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn local_values(&self, p: &ChartPoint) -> (Vec<Jet>, Vec<f64>) {
        let j = self.coords.jets(p);
        let q = j.iter().map(|x| x.re()).collect();
        (j, q)
    }

    fn tables(&self, q: &[f64]) -> Vec<Vec<[f64; 3]>> {
        self.families.iter().zip(q).map(|(f, &x)| f.eval(x)).collect()
    }

    /// Values and local gradients of every basis function.
    pub fn eval(&self, q: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let t = self.tables(q);
        let d = self.families.len();
        let mut vals = Vec::with_capacity(self.len());
        let mut grads = Vec::with_capacity(self.len());
        for m in &self.indices {
            let f: Vec<[f64; 3]> = (0..d).map(|c| t[c][m[c]]).collect();
            let v: f64 = f.iter().map(|x| x[0]).product();
            let g = (0..d)
                .map(|c| (0..d).map(|e| if e == c { f[e][1] } else { f[e][0] }).product())
                .collect();
            vals.push(v);
            grads.push(g);
        }
        (vals, grads)
    }

    /// Local jet of a single basis function.
    pub fn local_jet_of(&self, a: usize, q: &[f64]) -> LocalJet {
        let mut coeffs = vec![0.0; self.len()];
        coeffs[a] = 1.0;
        self.combine(&coeffs, q)
    }

    /// Local jet of `Σ c_a φ_a`.
    pub fn combine(&self, coeffs: &[f64], q: &[f64]) -> LocalJet {
        let t = self.tables(q);
        let d = self.families.len();
        let mut v = 0.0;
        let mut g = vec![0.0; d];
        let mut h = vec![vec![0.0; d]; d];
        for (m, &c) in self.indices.iter().zip(coeffs) {
            if c == 0.0 {
                continue;
            }
            let f: Vec<[f64; 3]> = (0..d).map(|k| t[k][m[k]]).collect();
            let prod_except = |skip: &[usize]| -> f64 {
                (0..d).filter(|e| !skip.contains(e)).map(|e| f[e][0]).product()
            };
            v += c * prod_except(&[]);
            for a in 0..d {
                g[a] += c * f[a][1] * prod_except(&[a]);
                h[a][a] += c * f[a][2] * prod_except(&[a]);
                for b in a + 1..d {
                    let x = c * f[a][1] * f[b][1] * prod_except(&[a, b]);
                    h[a][b] += x;
                    h[b][a] += x;
                }
            }
        }
        (v, g, h)
    }

    /// Wirtinger jet of `Σ c_a φ_a` at `p`.
    pub fn jet(&self, coeffs: &[f64], p: &ChartPoint) -> Jet {
        let (j, q) = self.local_values(p);
        let (v, g, h) = self.combine(coeffs, &q);
        Jet::compose(&j, v, &g, &h)
    }
}
