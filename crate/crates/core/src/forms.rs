//! Pointwise forms of low degree and their formal adjoints.
//!
//! Norms use the Hermitian extension of `g`, so `⟨dz^i, dz^j⟩ = h^{ij̄}` and
//! `⟨dz̄^i, dz̄^j⟩ = h^{jī}`. Adjoints are written as divergences against the
//! volume density `det h`.

use crate::jet::Jet;
use crate::tensor::PointGeometry;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

const I: C64 = C64::new(0.0, 1.0);

/// A `(1,0)`-form `η_i dz^i` or a `(0,1)`-form `ψ_ī dz̄^i`, with first derivatives
/// `d[A][i] = ∂_A` of component `i`.
#[derive(Clone, Debug)]
pub struct Form1 {
    pub c: Vec<C64>,
    pub d: Vec<Vec<C64>>,
}

impl Form1 {
    pub fn from_jets(js: &[Jet]) -> Self {
        let m = 2 * js[0].dim();
        Form1 {
            c: js.iter().map(|j| j.value()).collect(),
            d: (0..m).map(|a| js.iter().map(|j| j.d(a)).collect()).collect(),
        }
    }

    /// Values only; derivatives are zero.
    pub fn values(c: Vec<C64>) -> Self {
        let m = 2 * c.len();
        let n = c.len();
        Form1 { c, d: vec![vec![C64::new(0.0, 0.0); n]; m] }
    }

    /// `∂f` as a `(1,0)`-form with first derivatives.
    pub fn del(f: &Jet) -> Self {
        let n = f.dim();
        Form1 {
            c: (0..n).map(|i| f.dz(i)).collect(),
            d: (0..2 * n).map(|a| (0..n).map(|i| f.dd(a, i)).collect()).collect(),
        }
    }

    /// `∂̄f` as a `(0,1)`-form with first derivatives.
    pub fn delbar(f: &Jet) -> Self {
        let n = f.dim();
        Form1 {
            c: (0..n).map(|i| f.dzb(i)).collect(),
            d: (0..2 * n).map(|a| (0..n).map(|i| f.dd(a, n + i)).collect()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Form1 {
            c: self.c.iter().map(|x| x * s).collect(),
            d: self.d.iter().map(|r| r.iter().map(|x| x * s).collect()).collect(),
        }
    }

    pub fn add(&self, o: &Form1) -> Self {
        Form1 {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
            d: self.d.iter().zip(&o.d).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect(),
        }
    }

    /// Product with a function jet (Leibniz rule on first derivatives).
    pub fn times(&self, f: &Jet) -> Self {
        let n = self.c.len();
        Form1 {
            c: self.c.iter().map(|x| x * f.value()).collect(),
            d: (0..2 * n)
                .map(|a| (0..n).map(|i| self.d[a][i] * f.value() + self.c[i] * f.d(a)).collect())
                .collect(),
        }
    }
}

/// A `(1,1)`-form `Φ_{ij̄} dz^i ∧ dz̄^j` with first derivatives.
#[derive(Clone, Debug)]
pub struct Form11 {
    pub c: DMatrix<C64>,
    pub d: Vec<DMatrix<C64>>,
}

impl Form11 {
    /// The fundamental form `ω = √−1 h_{ij̄} dz^i ∧ dz̄^j` times a function `f`.
    pub fn omega_times(geom: &PointGeometry, f: &Jet) -> Self {
        let mj = &geom.mj;
        let c = mj.h.map(|x| x * I * f.value());
        let d = (0..2 * geom.n).map(|a| (&mj.dh[a] * f.value() + &mj.h * f.d(a)) * I).collect();
        Form11 { c, d }
    }

    /// `∂̄η` for a `(1,0)`-form: coefficient `−∂_j̄ η_i` (values only).
    pub fn delbar_of(eta: &Form1) -> DMatrix<C64> {
        let n = eta.c.len();
        DMatrix::from_fn(n, n, |i, j| -eta.d[n + j][i])
    }
}

/// `⟨a, b⟩` for `(1,0)`-forms.
pub fn inner10(geom: &PointGeometry, a: &[C64], b: &[C64]) -> C64 {
    let n = geom.n;
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += geom.hinv(i, j) * a[i] * b[j].conj();
        }
    }
    s
}

/// `⟨a, b⟩` for `(0,1)`-forms.
pub fn inner01(geom: &PointGeometry, a: &[C64], b: &[C64]) -> C64 {
    let n = geom.n;
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += geom.hinv(j, i) * a[i] * b[j].conj();
        }
    }
    s
}

/// `⟨Φ, Ψ⟩` for `(1,1)`-forms.
pub fn inner11(geom: &PointGeometry, a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = geom.n;
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            for p in 0..n {
                for q in 0..n {
                    s += geom.hinv(i, p) * geom.hinv(q, j) * a[(i, j)] * b[(p, q)].conj();
                }
            }
        }
    }
    s
}

/// `∂*η = −(det h)⁻¹ ∂_j̄ (det h · h^{ij̄} η_i)` for a `(1,0)`-form.
pub fn d_star_10(geom: &PointGeometry, eta: &Form1) -> C64 {
    let n = geom.n;
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let jb = n + j;
            s += (geom.dlogdet[jb] * geom.hinv(i, j) + geom.d_hinv(jb, i, j)) * eta.c[i]
                + geom.hinv(i, j) * eta.d[jb][i];
        }
    }
    -s
}

/// `∂̄*ψ = −(det h)⁻¹ ∂_j (det h · h^{jī} ψ_ī)` for a `(0,1)`-form.
pub fn dbar_star_01(geom: &PointGeometry, psi: &Form1) -> C64 {
    let n = geom.n;
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += (geom.dlogdet[j] * geom.hinv(j, i) + geom.d_hinv(j, j, i)) * psi.c[i] + geom.hinv(j, i) * psi.d[j][i];
        }
    }
    -s
}

/// `∂̄*Φ` for a `(1,1)`-form: `(∂̄*Φ)_k = h_{kp̄} (det h)⁻¹ ∂_q (det h · h^{ip̄} h^{qj̄} Φ_{ij̄})`.
pub fn dbar_star_11(geom: &PointGeometry, phi: &Form11) -> Vec<C64> {
    let n = geom.n;
    let mut v = vec![C64::new(0.0, 0.0); n];
    for (p, vp) in v.iter_mut().enumerate() {
        for q in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let a = geom.hinv(i, p);
                    let b = geom.hinv(q, j);
                    *vp += (geom.dlogdet[q] * a * b + geom.d_hinv(q, i, p) * b + a * geom.d_hinv(q, q, j)) * phi.c[(i, j)]
                        + a * b * phi.d[q][(i, j)];
                }
            }
        }
    }
    (0..n).map(|k| (0..n).map(|p| geom.mj.h[(k, p)] * v[p]).sum()).collect()
}

/// `tr_ω √−1∂∂̄f = h^{ij̄} ∂_i∂_j̄ f`.
pub fn trace_ddbar(geom: &PointGeometry, f: &Jet) -> C64 {
    let n = geom.n;
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += geom.hinv(i, j) * f.dz_dzb(i, j);
        }
    }
    s
}
