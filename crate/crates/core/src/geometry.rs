//! Chart points, Hermitian metric fields and their Wirtinger derivatives.

use crate::error::{CurvError, Result};
use crate::jet::{Jet, MAX_DIM};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    n: usize,
    z: [C64; MAX_DIM],
}

impl ChartPoint {
    pub fn new(coords: &[C64]) -> Self {
        let n = coords.len();
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        let mut z = [C64::new(0.0, 0.0); MAX_DIM];
        z[..n].copy_from_slice(coords);
        ChartPoint { n, z }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[C64] {
        &self.z[..self.n]
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }

    /// Coordinate jets `z^k`.
    pub fn z(&self, k: usize) -> Jet {
        Jet::coord(self.n, self.z[k], k)
    }

    /// Conjugate coordinate jets `z̄^k`.
    pub fn zb(&self, k: usize) -> Jet {
        Jet::coord_bar(self.n, self.z[k], k)
    }

    pub fn x(&self, k: usize) -> Jet {
        Jet::coord_re(self.n, self.z[k], k)
    }

    pub fn y(&self, k: usize) -> Jet {
        Jet::coord_im(self.n, self.z[k], k)
    }

    /// `|z|²` as a jet.
    pub fn norm_sq(&self) -> Jet {
        let mut acc = Jet::real(self.n, 0.0);
        for k in 0..self.n {
            acc += self.z(k) * self.zb(k);
        }
        acc
    }

    /// Real coordinate `r`: `x^r` for `r < n`, `y^{r-n}` otherwise.
    pub fn real_coord(&self, r: usize) -> f64 {
        if r < self.n {
            self.z[r].re
        } else {
            self.z[r - self.n].im
        }
    }

    /// Shift real coordinate `r` by `t`.
    pub fn shifted(&self, r: usize, t: f64) -> Self {
        let mut p = *self;
        if r < self.n {
            p.z[r].re += t;
        } else {
            p.z[r - self.n].im += t;
        }
        p
    }
}

/// A smooth complex function on a chart, evaluated as a second-order jet.
pub trait ScalarField: Send + Sync {
    fn jet(&self, p: &ChartPoint) -> Jet;
    fn value(&self, p: &ChartPoint) -> C64 {
        self.jet(p).value()
    }
}

impl<F> ScalarField for F
where
    F: Fn(&ChartPoint) -> Jet + Send + Sync,
{
    fn jet(&self, p: &ChartPoint) -> Jet {
        self(p)
    }
}

/// A Hermitian matrix field `h_{ij̄}(z)` on a chart.
///
/// Implementors return every entry as a jet so that analytic derivatives of
/// all orders up to two come for free.
pub trait MetricField: Send + Sync {
    fn dim(&self) -> usize;

    /// Row-major entries `h_{ij̄}`, index `i * n + j`.
    fn entries(&self, p: &ChartPoint) -> Vec<Jet>;

    fn value(&self, p: &ChartPoint) -> DMatrix<C64> {
        let n = self.dim();
        let e = self.entries(p);
        DMatrix::from_fn(n, n, |i, j| e[i * n + j].value())
    }

    fn in_domain(&self, _p: &ChartPoint) -> bool {
        true
    }
}

impl<M: MetricField + ?Sized> MetricField for Arc<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        (**self).entries(p)
    }
    fn value(&self, p: &ChartPoint) -> DMatrix<C64> {
        (**self).value(p)
    }
    fn in_domain(&self, p: &ChartPoint) -> bool {
        (**self).in_domain(p)
    }
}

/// Value and derivatives of a metric at one point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub n: usize,
    /// Entries as jets, row-major.
    pub entries: Vec<Jet>,
    /// `h`.
    pub h: DMatrix<C64>,
    /// `∂_A h` for each alphabet letter `A`.
    pub dh: Vec<DMatrix<C64>>,
    /// `∂_A ∂_B h`.
    pub ddh: Vec<Vec<DMatrix<C64>>>,
}

impl MetricJet {
    pub fn from_entries(n: usize, entries: Vec<Jet>) -> Self {
        let m = 2 * n;
        let h = DMatrix::from_fn(n, n, |i, j| entries[i * n + j].value());
        let dh = (0..m)
            .map(|a| DMatrix::from_fn(n, n, |i, j| entries[i * n + j].d(a)))
            .collect();
        let ddh = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| DMatrix::from_fn(n, n, |i, j| entries[i * n + j].dd(a, b)))
                    .collect()
            })
            .collect();
        MetricJet { n, entries, h, dh, ddh }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Jet {
        &self.entries[i * self.n + j]
    }

    /// Largest deviation from Hermitian symmetry over value and derivatives.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let a = self.entry(i, j);
                let b = self.entry(j, i).conj();
                worst = worst.max((a.value() - b.value()).norm());
                for e in 0..2 * n {
                    worst = worst.max((a.d(e) - b.d(e)).norm());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

/// Chooses between analytic jets and a fourth-order central stencil.
#[derive(Clone, Copy, Debug)]
pub struct DerivativeEngine {
    pub mode: DerivativeMode,
    /// Step in every real coordinate for finite differences.
    pub step: f64,
    /// When set, analytic derivatives are compared against the stencil.
    pub cross_check: Option<f64>,
}

impl Default for DerivativeEngine {
    fn default() -> Self {
        DerivativeEngine { mode: DerivativeMode::Analytic, step: 1e-3, cross_check: None }
    }
}

/// Declared order of accuracy of the finite-difference stencil.
pub const STENCIL_ORDER: u32 = 4;

const D1_OFF: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
const D1_W: [f64; 4] = [1.0, -8.0, 8.0, -1.0];
const D2_W: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

impl DerivativeEngine {
    pub fn analytic() -> Self {
        Self::default()
    }

    pub fn finite_difference(step: f64) -> Self {
        assert!(step > 0.0);
        DerivativeEngine { mode: DerivativeMode::FiniteDifference, step, cross_check: None }
    }

    pub fn with_cross_check(mut self, tol: f64) -> Self {
        self.cross_check = Some(tol);
        self
    }

    /// Wirtinger jets of a vector-valued function from its values alone.
    pub fn fd_jets<F>(&self, n: usize, p: &ChartPoint, in_domain: &dyn Fn(&ChartPoint) -> bool, f: F) -> Result<Vec<Jet>>
    where
        F: Fn(&ChartPoint) -> Vec<C64>,
    {
        let h = self.step;
        let m = 2 * n;
        let eval = |q: ChartPoint| -> Result<Vec<C64>> {
            if !in_domain(&q) {
                return Err(CurvError::StencilOutOfDomain(format!("{:?}", q.coords())));
            }
            Ok(f(&q))
        };
        let f0 = eval(*p)?;
        let k = f0.len();
        let zero = vec![C64::new(0.0, 0.0); k];
        let mut d1 = vec![zero.clone(); m];
        let mut d2 = vec![vec![zero.clone(); m]; m];
        for r in 0..m {
            let vals: Vec<Vec<C64>> = [-2.0, -1.0, 1.0, 2.0]
                .iter()
                .map(|&o| eval(p.shifted(r, o * h)))
                .collect::<Result<_>>()?;
            for c in 0..k {
                let mut s1 = C64::new(0.0, 0.0);
                for t in 0..4 {
                    s1 += vals[t][c] * D1_W[t];
                }
                d1[r][c] = s1 / (12.0 * h);
                let s2 = vals[0][c] * D2_W[0]
                    + vals[1][c] * D2_W[1]
                    + f0[c] * D2_W[2]
                    + vals[2][c] * D2_W[3]
                    + vals[3][c] * D2_W[4];
                d2[r][r][c] = s2 / (12.0 * h * h);
            }
        }
        for r in 0..m {
            for s in r + 1..m {
                let mut acc = zero.clone();
                for (a, &oa) in D1_OFF.iter().enumerate() {
                    for (b, &ob) in D1_OFF.iter().enumerate() {
                        let v = eval(p.shifted(r, oa * h).shifted(s, ob * h))?;
                        let w = D1_W[a] * D1_W[b];
                        for c in 0..k {
                            acc[c] += v[c] * w;
                        }
                    }
                }
                for c in 0..k {
                    let v = acc[c] / (144.0 * h * h);
                    d2[r][s][c] = v;
                    d2[s][r][c] = v;
                }
            }
        }
        // real -> Wirtinger: ∂_k = (∂x − i∂y)/2, ∂_k̄ = (∂x + i∂y)/2
        let lin = |a: usize, r: usize| -> C64 {
            let (k, bar) = if a < n { (a, false) } else { (a - n, true) };
            if r == k {
                C64::new(0.5, 0.0)
            } else if r == n + k {
                C64::new(0.0, if bar { 0.5 } else { -0.5 })
            } else {
                C64::new(0.0, 0.0)
            }
        };
        let mut out = Vec::with_capacity(k);
        for c in 0..k {
            let mut d = vec![C64::new(0.0, 0.0); m];
            let mut dd = vec![vec![C64::new(0.0, 0.0); m]; m];
            for a in 0..m {
                for r in 0..m {
                    d[a] += lin(a, r) * d1[r][c];
                }
                for b in 0..m {
                    for r in 0..m {
                        let la = lin(a, r);
                        if la == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for s in 0..m {
                            dd[a][b] += la * lin(b, s) * d2[r][s][c];
                        }
                    }
                }
            }
            out.push(Jet::from_parts(n, f0[c], &d, &dd));
        }
        Ok(out)
    }

    /// Metric value and derivatives at `p` according to the engine mode.
    pub fn metric_jet(&self, metric: &dyn MetricField, p: &ChartPoint) -> Result<MetricJet> {
        let n = metric.dim();
        let dom = |q: &ChartPoint| metric.in_domain(q);
        let entries = match self.mode {
            DerivativeMode::Analytic => {
                let e = metric.entries(p);
                if let Some(tol) = self.cross_check {
                    let fd = self.fd_jets(n, p, &dom, |q| metric.value(q).transpose().iter().copied().collect())?;
                    compare_jets("metric", &e, &fd, tol)?;
                }
                e
            }
            DerivativeMode::FiniteDifference => {
                self.fd_jets(n, p, &dom, |q| metric.value(q).transpose().iter().copied().collect())?
            }
        };
        Ok(MetricJet::from_entries(n, entries))
    }

    /// Wirtinger jet of a scalar field at `p`.
    pub fn scalar_jet(&self, field: &dyn ScalarField, p: &ChartPoint) -> Result<Jet> {
        let n = p.dim();
        let dom = |_: &ChartPoint| true;
        match self.mode {
            DerivativeMode::Analytic => {
                let j = field.jet(p);
                if let Some(tol) = self.cross_check {
                    let fd = self.fd_jets(n, p, &dom, |q| vec![field.value(q)])?;
                    compare_jets("scalar", &[j], &fd, tol)?;
                }
                Ok(j)
            }
            DerivativeMode::FiniteDifference => Ok(self.fd_jets(n, p, &dom, |q| vec![field.value(q)])?[0]),
        }
    }
}

fn compare_jets(what: &str, a: &[Jet], b: &[Jet], tol: f64) -> Result<()> {
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        let m = 2 * x.dim();
        worst = worst.max((x.value() - y.value()).norm());
        for i in 0..m {
            worst = worst.max((x.d(i) - y.d(i)).norm());
            for j in 0..m {
                worst = worst.max((x.dd(i, j) - y.dd(i, j)).norm());
            }
        }
    }
    if worst > tol {
        return Err(CurvError::CrossCheckFailed { what: what.to_string(), got: worst, tol });
    }
    Ok(())
}

/// Standard complex structure on ℝ^{2n} in the ordering `(x^1..x^n, y^1..y^n)`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        // J ∂x_k = ∂y_k, J ∂y_k = −∂x_k
        j[(n + k, k)] = 1.0;
        j[(k, n + k)] = -1.0;
    }
    j
}

/// Hermitian form of a J-invariant real metric in the frame `e_i, J e_i`.
///
/// `h_{ij̄} = ½ (g(e_i, e_j) + √−1 g(e_i, J e_j))`.
pub fn real_to_hermitian(g: &DMatrix<f64>, j: &DMatrix<f64>) -> Result<DMatrix<C64>> {
    const TOL: f64 = 1e-12;
    let m = g.nrows();
    assert!(m % 2 == 0 && g.ncols() == m && j.nrows() == m && j.ncols() == m);
    let n = m / 2;
    let scale = 1.0 + g.amax();
    let jj = j * j + DMatrix::<f64>::identity(m, m);
    if jj.amax() > TOL * (1.0 + j.amax() * j.amax()) {
        return Err(CurvError::NotJInvariant(jj.amax()));
    }
    let dev = (j.transpose() * g * j - g).amax().max((g - g.transpose()).amax());
    if dev > TOL * scale {
        return Err(CurvError::NotJInvariant(dev));
    }
    let gj = g * j;
    let h = DMatrix::from_fn(n, n, |a, b| C64::new(0.5 * g[(a, b)], 0.5 * gj[(a, b)]));
    if !is_positive_definite(&h) {
        return Err(CurvError::NotPositive);
    }
    Ok(h)
}

/// Real metric in coordinates `(x, y)` for the standard complex structure.
pub fn hermitian_to_real(h: &DMatrix<C64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for k in 0..n {
            let v = h[(i, k)];
            g[(i, k)] = 2.0 * v.re;
            g[(n + i, n + k)] = 2.0 * v.re;
            g[(i, n + k)] = 2.0 * v.im;
            g[(n + i, k)] = -2.0 * v.im;
        }
    }
    g
}

/// Largest entry modulus of a complex matrix.
pub fn cmax(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn is_positive_definite(h: &DMatrix<C64>) -> bool {
    let herm = cmax(&(h - h.adjoint())) <= 1e-10 * (1.0 + cmax(h));
    // complex Cholesky in nalgebra accepts negative real pivots, so test the spectrum
    herm && h.clone().symmetric_eigenvalues().iter().all(|&l| l > 0.0)
}
