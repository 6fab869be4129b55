//! Second-order forward-mode differentiation over Wirtinger variables.
//!
//! A [`Jet`] carries the value of a complex function together with all first
//! and second derivatives with respect to the alphabet `z^1..z^n, z̄^1..z̄^n`.
//! Alphabet letter `a < n` is `∂/∂z^a`, letter `n + a` is `∂/∂z̄^a`.

use num_complex::Complex64 as C64;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Largest supported complex dimension.
pub const MAX_DIM: usize = 3;
const W: usize = 2 * MAX_DIM;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    n: usize,
    v: C64,
    d: [C64; W],
    dd: [[C64; W]; W],
}

impl Jet {
    pub fn constant(n: usize, v: C64) -> Self {
        assert!(n >= 1 && n <= MAX_DIM, "dimension {n} out of range");
        Jet { n, v, d: [ZERO; W], dd: [[ZERO; W]; W] }
    }

    pub fn real(n: usize, v: f64) -> Self {
        Self::constant(n, C64::new(v, 0.0))
    }

    /// The coordinate function `z^k` at the value `z`.
    pub fn coord(n: usize, z: C64, k: usize) -> Self {
        let mut j = Self::constant(n, z);
        j.d[k] = C64::new(1.0, 0.0);
        j
    }

    /// The conjugate coordinate `z̄^k` at the value `z` (so the jet value is `conj(z)`).
    pub fn coord_bar(n: usize, z: C64, k: usize) -> Self {
        let mut j = Self::constant(n, z.conj());
        j.d[n + k] = C64::new(1.0, 0.0);
        j
    }

    /// Real part `x^k` of the k-th coordinate.
    pub fn coord_re(n: usize, z: C64, k: usize) -> Self {
        (Self::coord(n, z, k) + Self::coord_bar(n, z, k)) * 0.5
    }

    /// Imaginary part `y^k` of the k-th coordinate.
    pub fn coord_im(n: usize, z: C64, k: usize) -> Self {
        (Self::coord(n, z, k) - Self::coord_bar(n, z, k)) * C64::new(0.0, -0.5)
    }

    /// Build a jet from raw parts. `d` and `dd` are indexed by alphabet letter.
    pub fn from_parts(n: usize, v: C64, d: &[C64], dd: &[Vec<C64>]) -> Self {
        let mut j = Self::constant(n, v);
        for a in 0..2 * n {
            j.d[a] = d[a];
            for b in 0..2 * n {
                j.dd[a][b] = dd[a][b];
            }
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn value(&self) -> C64 {
        self.v
    }
    pub fn re(&self) -> f64 {
        self.v.re
    }
    /// First derivative along alphabet letter `a`.
    pub fn d(&self, a: usize) -> C64 {
        self.d[a]
    }
    /// Second derivative along letters `a`, `b`.
    pub fn dd(&self, a: usize, b: usize) -> C64 {
        self.dd[a][b]
    }
    /// `∂_i f`.
    pub fn dz(&self, i: usize) -> C64 {
        self.d[i]
    }
    /// `∂_ī f`.
    pub fn dzb(&self, i: usize) -> C64 {
        self.d[self.n + i]
    }
    /// `∂_i ∂_j̄ f`.
    pub fn dz_dzb(&self, i: usize, j: usize) -> C64 {
        self.dd[i][self.n + j]
    }

    /// Complex conjugate function.
    pub fn conj(&self) -> Self {
        let n = self.n;
        let bar = |a: usize| if a < n { a + n } else { a - n };
        let mut out = Self::constant(n, self.v.conj());
        for a in 0..2 * n {
            out.d[a] = self.d[bar(a)].conj();
            for b in 0..2 * n {
                out.dd[a][b] = self.dd[bar(a)][bar(b)].conj();
            }
        }
        out
    }

    /// Apply a scalar function through the chain rule given `φ(v)`, `φ'(v)`, `φ''(v)`.
    pub fn chain(&self, f0: C64, f1: C64, f2: C64) -> Self {
        let m = 2 * self.n;
        let mut out = Self::constant(self.n, f0);
        for a in 0..m {
            out.d[a] = f1 * self.d[a];
        }
        for a in 0..m {
            for b in a..m {
                let v = f2 * self.d[a] * self.d[b] + f1 * self.dd[a][b];
                out.dd[a][b] = v;
                out.dd[b][a] = v;
            }
        }
        out
    }

    /// Compose a real function `u(q_1..q_m)` with real-valued inner jets `q_c`,
    /// given the value, gradient and Hessian of `u` at `q(z)`.
    pub fn compose(inner: &[Jet], u: f64, grad: &[f64], hess: &[Vec<f64>]) -> Self {
        let n = inner[0].n;
        let m = 2 * n;
        let mut out = Self::real(n, u);
        for (c, q) in inner.iter().enumerate() {
            let g = grad[c];
            if g != 0.0 {
                for a in 0..m {
                    out.d[a] += q.d[a] * g;
                    for b in 0..m {
                        out.dd[a][b] += q.dd[a][b] * g;
                    }
                }
            }
            for (e, r) in inner.iter().enumerate() {
                let h = hess[c][e];
                if h != 0.0 {
                    for a in 0..m {
                        for b in 0..m {
                            out.dd[a][b] += q.d[a] * r.d[b] * h;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    pub fn ln(&self) -> Self {
        let r = self.v.inv();
        self.chain(self.v.ln(), r, -r * r)
    }
    pub fn sin(&self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(s, c, -s)
    }
    pub fn cos(&self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(c, -s, -c)
    }
    pub fn recip(&self) -> Self {
        let r = self.v.inv();
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
    pub fn powf(&self, p: f64) -> Self {
        let v = self.v;
        self.chain(v.powf(p), p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0))
    }
    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }
    pub fn powi(&self, k: u32) -> Self {
        let mut out = Jet::real(self.n, 1.0);
        for _ in 0..k {
            out = out * *self;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        let m = 2 * self.n;
        self.v.is_finite()
            && self.d[..m].iter().all(|x| x.is_finite())
            && self.dd[..m].iter().all(|r| r[..m].iter().all(|x| x.is_finite()))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self += o;
        self
    }
}
impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        let m = 2 * self.n;
        self.v += o.v;
        for a in 0..m {
            self.d[a] += o.d[a];
            for b in 0..m {
                self.dd[a][b] += o.dd[a][b];
            }
        }
    }
}
impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        self -= o;
        self
    }
}
impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        *self += -o;
    }
}
impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self * -1.0
    }
}
impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let m = 2 * self.n;
        let mut out = Jet::constant(self.n, self.v * o.v);
        for a in 0..m {
            out.d[a] = self.d[a] * o.v + self.v * o.d[a];
        }
        for a in 0..m {
            for b in a..m {
                let v = self.dd[a][b] * o.v
                    + self.v * o.dd[a][b]
                    + self.d[a] * o.d[b]
                    + self.d[b] * o.d[a];
                out.dd[a][b] = v;
                out.dd[b][a] = v;
            }
        }
        out
    }
}
impl MulAssign for Jet {
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}
impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}
impl Mul<C64> for Jet {
    type Output = Jet;
    fn mul(mut self, c: C64) -> Jet {
        let m = 2 * self.n;
        self.v *= c;
        for a in 0..m {
            self.d[a] *= c;
            for b in 0..m {
                self.dd[a][b] *= c;
            }
        }
        self
    }
}
impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self * C64::new(c, 0.0)
    }
}
impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.v += c;
        self
    }
}
impl Add<C64> for Jet {
    type Output = Jet;
    fn add(mut self, c: C64) -> Jet {
        self.v += c;
        self
    }
}
