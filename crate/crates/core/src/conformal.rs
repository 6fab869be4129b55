//! Conformal changes, the Gauduchon factor and the total Chern scalar curvature.
//!
//! For `ω_f = e^f ω` the Gauduchon condition `∂∂̄ω_f^{n−1} = 0` is linear in
//! `u = e^{(n−1)f}`:
//!
//! ```text
//! Σ_{ij} ∂_i∂_j̄ (u · det h · h^{ij̄}) = 0.
//! ```
//!
//! It is discretized by a Galerkin method on a symmetry-reduced spectral basis
//! and the positive null vector is found by shifted inverse iteration.

use crate::error::{CurvError, Result};
use crate::geometry::{ChartPoint, DerivativeEngine, MetricField, ScalarField};
use crate::jet::Jet;
use crate::quadrature::QuadratureGrid;
use crate::spectral::SpectralBasis;
use crate::tensor::{self, PointGeometry};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// `e^f h` with jets composed by the product rule.
#[derive(Clone)]
pub struct ConformalMetric {
    pub base: Arc<dyn MetricField>,
    pub f: Arc<dyn ScalarField>,
}

impl MetricField for ConformalMetric {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn entries(&self, p: &ChartPoint) -> Vec<Jet> {
        let ef = self.f.jet(p).exp();
        self.base.entries(p).into_iter().map(|e| e * ef).collect()
    }
    fn in_domain(&self, p: &ChartPoint) -> bool {
        self.base.in_domain(p)
    }
}

pub fn conformal_metric(metric: Arc<dyn MetricField>, f: &ConformalFactor) -> ConformalMetric {
    ConformalMetric { base: metric, f: f.field.clone() }
}

/// `Σ c_a φ_a` on a spectral basis, optionally followed by `k · ln(·)`, minus a shift.
#[derive(Clone, Debug)]
pub struct BasisField {
    pub basis: Arc<SpectralBasis>,
    pub coeffs: Vec<f64>,
    pub log_scale: Option<f64>,
    pub shift: f64,
}

impl ScalarField for BasisField {
    fn jet(&self, p: &ChartPoint) -> Jet {
        let u = self.basis.jet(&self.coeffs, p);
        let v = match self.log_scale {
            Some(k) => u.ln() * k,
            None => u,
        };
        v + (-self.shift)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    MeanZero,
}

/// A conformal factor `f` with `ω_f = e^f ω`, sampled on a grid.
#[derive(Clone)]
pub struct ConformalFactor {
    pub grid: String,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    pub field: Arc<dyn ScalarField>,
}

impl std::fmt::Debug for ConformalFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConformalFactor")
            .field("grid", &self.grid)
            .field("nodes", &self.values.len())
            .field("normalization", &self.normalization)
            .finish()
    }
}

impl ConformalFactor {
    pub fn zero(grid: &QuadratureGrid) -> Self {
        let n = grid.dim();
        ConformalFactor {
            grid: grid.manifold.clone(),
            values: vec![0.0; grid.len()],
            normalization: Normalization::MeanZero,
            field: Arc::new(move |_: &ChartPoint| Jet::real(n, 0.0)),
        }
    }

    /// Samples `field` and subtracts its volume mean under `metric`.
    pub fn from_field<F: ScalarField + 'static>(field: F, metric: &dyn MetricField, grid: &QuadratureGrid) -> Result<Self> {
        let raw: Vec<f64> = grid.nodes.iter().map(|p| field.value(p).re).collect();
        let mean = volume_mean(&raw, metric, grid)?;
        let n = grid.dim();
        let field: Arc<dyn ScalarField> = Arc::new(field);
        let inner = field.clone();
        Ok(ConformalFactor {
            grid: grid.manifold.clone(),
            values: raw.iter().map(|v| v - mean).collect(),
            normalization: Normalization::MeanZero,
            field: Arc::new(move |p: &ChartPoint| inner.jet(p) + Jet::real(n, -mean)),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn variation(&self) -> f64 {
        let lo = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if self.values.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

fn volume_mean(values: &[f64], metric: &dyn MetricField, grid: &QuadratureGrid) -> Result<f64> {
    let vw = grid.volume_weights(metric);
    let vol: f64 = vw.iter().sum();
    Ok(grid.sum_weighted(&vw, |i| values[i])? / vol)
}

fn minor(e: &[Jet], n: usize, skip_r: usize, skip_c: usize) -> Jet {
    let rows: Vec<usize> = (0..n).filter(|&r| r != skip_r).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| c != skip_c).collect();
    match rows.len() {
        0 => Jet::real(n, 1.0),
        1 => e[rows[0] * n + cols[0]],
        2 => e[rows[0] * n + cols[0]] * e[rows[1] * n + cols[1]] - e[rows[0] * n + cols[1]] * e[rows[1] * n + cols[0]],
        _ => unreachable!("dimension above 3"),
    }
}

/// Cofactors `C_{ij} = det h · h^{ij̄}` as jets.
pub fn cofactor_jets(n: usize, entries: &[Jet]) -> Vec<Jet> {
    let mut c = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let m = minor(entries, n, i, j);
            c.push(if (i + j) % 2 == 0 { m } else { -m });
        }
    }
    c
}

/// `(det h)⁻¹ Σ ∂_i∂_j̄ (det h · h^{ij̄})`, the coefficient of `√−1∂∂̄ω^{n−1}`
/// against the volume form (up to a dimensional constant).
pub fn gauduchon_density(metric: &dyn MetricField, p: &ChartPoint) -> Result<f64> {
    let n = metric.dim();
    if !metric.in_domain(p) {
        return Err(CurvError::StencilOutOfDomain(format!("{:?}", p.coords())));
    }
    let e = metric.entries(p);
    let c = cofactor_jets(n, &e);
    let det = metric.value(p).determinant().re;
    if !(det > 0.0) {
        return Err(CurvError::SingularMetric);
    }
    let mut s = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += c[i * n + j].dz_dzb(i, j);
        }
    }
    Ok(s.re / det)
}

/// Max over grid nodes of `|gauduchon_density|`.
pub fn gauduchon_residual(metric: &dyn MetricField, grid: &QuadratureGrid) -> Result<f64> {
    let mut m: f64 = 0.0;
    for p in &grid.nodes {
        m = m.max(gauduchon_density(metric, p)?.abs());
    }
    Ok(m)
}

/// Pointwise densities for charts without a global quadrature.
pub fn gauduchon_densities(metric: &dyn MetricField, points: &[ChartPoint]) -> Result<Vec<f64>> {
    points.iter().map(|p| gauduchon_density(metric, p)).collect()
}

/// Discretization used by the Gauduchon solver.
#[derive(Clone, Debug)]
pub struct GauduchonSetup {
    pub basis: Arc<SpectralBasis>,
    /// Grid on which the basis and the metric are integrated exactly enough.
    pub grid: QuadratureGrid,
    /// Residual below which the input is accepted as already Gauduchon.
    pub already_tol: f64,
    pub max_iter: usize,
}

impl GauduchonSetup {
    pub fn new(basis: SpectralBasis, grid: QuadratureGrid) -> Self {
        GauduchonSetup { basis: Arc::new(basis), grid, already_tol: 1e-12, max_iter: 60 }
    }
}

#[derive(Clone, Debug)]
pub struct GauduchonSolution {
    pub factor: ConformalFactor,
    /// `gauduchon_residual` of `e^f ω` on the setup grid.
    pub residual: f64,
    pub iterations: usize,
    /// `min u / max u` over the grid nodes.
    pub positivity: f64,
    pub already_gauduchon: bool,
}

/// Galerkin stiffness `B_ab = −Re ∫ h^{ij̄} ∂_j̄φ_a (∂_iφ_b + φ_b τ_i) dV` and mass matrix.
fn assemble(metric: &dyn MetricField, setup: &GauduchonSetup) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = metric.dim();
    let basis = &setup.basis;
    let m = basis.len();
    let engine = DerivativeEngine::analytic();
    let mut b = DMatrix::<f64>::zeros(m, m);
    let mut mass = DMatrix::<f64>::zeros(m, m);
    let c = 2f64.powi(n as i32);
    for (p, &w0) in setup.grid.nodes.iter().zip(&setup.grid.weights) {
        let geom = PointGeometry::at(&engine, metric, p)?;
        let tau = tensor::torsion_trace(&geom, &tensor::torsion_components(&geom));
        let w = w0 * c * geom.det;
        let (q, qv) = basis.local_values(p);
        let (vals, grads) = basis.eval(&qv);
        let mut wr = DMatrix::<f64>::zeros(m, n);
        let mut wi = DMatrix::<f64>::zeros(m, n);
        let mut vr = DMatrix::<f64>::zeros(n, m);
        let mut vi = DMatrix::<f64>::zeros(n, m);
        for a in 0..m {
            let dz: Vec<num_complex::Complex64> = (0..n).map(|i| grads[a].iter().zip(&q).map(|(g, qc)| qc.dz(i) * *g).sum()).collect();
            let dzb: Vec<num_complex::Complex64> = (0..n).map(|j| grads[a].iter().zip(&q).map(|(g, qc)| qc.dzb(j) * *g).sum()).collect();
            for i in 0..n {
                let wv: num_complex::Complex64 = (0..n).map(|j| geom.hinv(i, j) * dzb[j]).sum();
                wr[(a, i)] = wv.re;
                wi[(a, i)] = wv.im;
                let v = dz[i] + tau[i] * vals[a];
                vr[(i, a)] = v.re;
                vi[(i, a)] = v.im;
            }
        }
        b.gemm(-w, &wr, &vr, 1.0);
        b.gemm(w, &wi, &vi, 1.0);
        let phi = DVector::from_vec(vals);
        mass.ger(w, &phi, &phi, 1.0);
    }
    Ok((b, mass))
}

/// Finds `f` with `e^f ω` Gauduchon, normalized to volume mean zero on the setup grid.
pub fn solve_gauduchon_factor(metric: Arc<dyn MetricField>, setup: &GauduchonSetup) -> Result<GauduchonSolution> {
    let n = metric.dim();
    let grid = &setup.grid;
    if n == 1 {
        return Ok(GauduchonSolution {
            factor: ConformalFactor::zero(grid),
            residual: 0.0,
            iterations: 0,
            positivity: 1.0,
            already_gauduchon: true,
        });
    }
    let base_res = gauduchon_residual(metric.as_ref(), grid)?;
    if base_res <= setup.already_tol {
        return Ok(GauduchonSolution {
            factor: ConformalFactor::zero(grid),
            residual: base_res,
            iterations: 0,
            positivity: 1.0,
            already_gauduchon: true,
        });
    }

    let (b, mass) = assemble(metric.as_ref(), setup)?;
    let scale = b.amax().max(1e-300);
    let sigma = 1e-10 * scale / mass.amax().max(1e-300);
    let lu = (&b - &mass * sigma).lu();
    let m = setup.basis.len();
    let mut x = DVector::<f64>::zeros(m);
    x[0] = 1.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < setup.max_iter {
        iterations += 1;
        let mut y = lu.solve(&(&mass * &x)).ok_or(CurvError::SingularMetric)?;
        let k = y.iamax();
        let s = y[k].signum() / y.norm();
        y *= s;
        let diff = (&y - &x).amax();
        x = y;
        if diff < 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(CurvError::NonConvergence { what: "gauduchon inverse iteration".into(), iters: iterations });
    }

    let coeffs: Vec<f64> = x.iter().cloned().collect();
    let mut u: Vec<f64> = grid
        .nodes
        .iter()
        .map(|p| {
            let (_, q) = setup.basis.local_values(p);
            setup.basis.combine(&coeffs, &q).0
        })
        .collect();
    let big = u.iter().cloned().fold(0.0, |a: f64, v| if v.abs() > a.abs() { v } else { a });
    let sign = big.signum();
    for v in u.iter_mut() {
        *v *= sign;
    }
    let (lo, hi) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if !(lo > 0.0) {
        return Err(CurvError::NoPositiveNullVector(lo / hi));
    }
    let k = 1.0 / (n as f64 - 1.0);
    let raw: Vec<f64> = u.iter().map(|v| v.ln() * k).collect();
    let mean = volume_mean(&raw, metric.as_ref(), grid)?;
    let field = BasisField {
        basis: setup.basis.clone(),
        coeffs: coeffs.iter().map(|c| c * sign).collect(),
        log_scale: Some(k),
        shift: mean,
    };
    let factor = ConformalFactor {
        grid: grid.manifold.clone(),
        values: raw.iter().map(|v| v - mean).collect(),
        normalization: Normalization::MeanZero,
        field: Arc::new(field),
    };
    let residual = gauduchon_residual(&conformal_metric(metric, &factor), grid)?;
    Ok(GauduchonSolution { factor, residual, iterations, positivity: lo / hi, already_gauduchon: false })
}

/// `∫ s_C dV` for a metric that passes the Gauduchon test at `tol`.
pub fn total_chern_scalar(metric: &dyn MetricField, grid: &QuadratureGrid, tol: f64) -> Result<f64> {
    let r = gauduchon_residual(metric, grid)?;
    if r > tol {
        return Err(CurvError::NotGauduchon(r));
    }
    total_chern_scalar_unchecked(metric, grid)
}

fn total_chern_scalar_unchecked(metric: &dyn MetricField, grid: &QuadratureGrid) -> Result<f64> {
    let engine = DerivativeEngine::analytic();
    let mut sc = Vec::with_capacity(grid.len());
    for p in &grid.nodes {
        sc.push(tensor::chern_ricci(&engine, metric, p)?.1);
    }
    grid.integrate(metric, |i, _| sc[i])
}

#[derive(Clone, Debug)]
pub struct TheoremTReport {
    /// `∫ s_C(ω_f) dV_f`, recomputed from `e^f h`.
    pub lhs: f64,
    /// `∫ e^{(n−1)f}(s/2 + |T|²/4) dV + (n−1)² ‖∂f‖²_{ω_f}`.
    pub rhs: f64,
    pub gradient_term: f64,
    pub residual: f64,
    pub solution: GauduchonSolution,
}

pub fn theorem_t_check(metric: Arc<dyn MetricField>, setup: &GauduchonSetup) -> Result<TheoremTReport> {
    let sol = solve_gauduchon_factor(metric.clone(), setup)?;
    theorem_t_with(metric, setup, sol)
}

pub fn theorem_t_with(metric: Arc<dyn MetricField>, setup: &GauduchonSetup, sol: GauduchonSolution) -> Result<TheoremTReport> {
    let n = metric.dim();
    let grid = &setup.grid;
    let cm = conformal_metric(metric.clone(), &sol.factor);
    let lhs = total_chern_scalar_unchecked(&cm, grid)?;
    let engine = DerivativeEngine::analytic();
    let k = n as f64 - 1.0;
    let mut main = Vec::with_capacity(grid.len());
    let mut grad = Vec::with_capacity(grid.len());
    for p in &grid.nodes {
        let geom = PointGeometry::at(&engine, metric.as_ref(), p)?;
        let rep = tensor::scalar_report_at(&geom)?;
        let f = sol.factor.field.jet(p);
        let u = (f.re() * k).exp();
        let mut g2 = num_complex::Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                g2 += geom.hinv(i, j) * f.dz(i) * f.dzb(j);
            }
        }
        main.push(u * (0.5 * rep.s + 0.25 * rep.torsion_norm_sq));
        grad.push(k * k * u * g2.re);
    }
    let a = grid.integrate(metric.as_ref(), |i, _| main[i])?;
    let gradient_term = grid.integrate(metric.as_ref(), |i, _| grad[i])?;
    let rhs = a + gradient_term;
    Ok(TheoremTReport { lhs, rhs, gradient_term, residual: (lhs - rhs).abs() / (1.0 + lhs.abs()), solution: sol })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Positive,
    Zero,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[allow(non_camel_case_types)]
pub enum KodairaStatement {
    NotPseudoEffective_KappaMinusInfinity,
    KahlerCalabiYau_RicciFlat,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub manifold: String,
    pub total_chern_scalar: f64,
    pub sign: Sign,
    pub kodaira_statement: KodairaStatement,
    pub notes: Vec<String>,
}

/// Relative width of the "zero" band for the total curvature.
pub const SIGN_BAND: f64 = 1e-6;

pub fn sign_of(total: f64, volume: f64) -> Sign {
    let eps = SIGN_BAND * volume;
    if total > eps {
        Sign::Positive
    } else if total < -eps {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

pub fn classify(
    manifold: &str,
    metric: Arc<dyn MetricField>,
    setup: &GauduchonSetup,
    kahler_flag: bool,
    torsion_max: f64,
) -> Result<Verdict> {
    let sol = solve_gauduchon_factor(metric.clone(), setup)?;
    let grid = &setup.grid;
    let cm = conformal_metric(metric.clone(), &sol.factor);
    let total = total_chern_scalar_unchecked(&cm, grid)?;
    let volume: f64 = grid.volume_weights(&cm).iter().sum();
    let sign = sign_of(total, volume);
    // torsion and Ricci of the Gauduchon representative, so the verdict only sees the conformal class
    let engine = DerivativeEngine::analytic();
    let mut tmax: f64 = 0.0;
    let mut ric_max: f64 = 0.0;
    for p in &grid.nodes {
        let geom = PointGeometry::at(&engine, &cm, p)?;
        tmax = tmax.max(tensor::torsion_norm_sq(&geom, &tensor::torsion_components(&geom)).sqrt());
        let (r, _) = tensor::chern_ricci_at(&geom);
        ric_max = ric_max.max(crate::geometry::cmax(&r));
    }
    let kahler_rep = tmax <= torsion_max;
    let mut notes = vec![format!("gauduchon residual {:e}", sol.residual)];
    let statement = match sign {
        Sign::Positive => KodairaStatement::NotPseudoEffective_KappaMinusInfinity,
        Sign::Zero if kahler_rep => {
            notes.push(format!("max |Chern Ricci| {ric_max:e}"));
            KodairaStatement::KahlerCalabiYau_RicciFlat
        }
        Sign::Zero => {
            notes.push(format!("zero total curvature but the Gauduchon representative has torsion {tmax:e}"));
            KodairaStatement::Indeterminate
        }
        Sign::Negative => {
            notes.push("negative total curvature: no conclusion".into());
            KodairaStatement::Indeterminate
        }
    };
    if kahler_flag && !kahler_rep {
        notes.push(format!("kahler flag set but the Gauduchon representative has torsion {tmax:e}"));
    }
    Ok(Verdict { manifold: manifold.into(), total_chern_scalar: total, sign, kodaira_statement: statement, notes })
}

/// Verdict for a chart with no global quadrature: the sign cannot be
/// integrated, so only pointwise facts are recorded.
pub fn classify_pointwise(manifold: &str, metric: &dyn MetricField, points: &[ChartPoint]) -> Result<Verdict> {
    let engine = DerivativeEngine::analytic();
    let mut dens: f64 = 0.0;
    let mut top = f64::NEG_INFINITY;
    for p in points {
        dens = dens.max(gauduchon_density(metric, p)?.abs());
        let (r, _) = tensor::chern_ricci(&engine, metric, p)?;
        let ev = r.symmetric_eigenvalues();
        top = top.max(ev.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    }
    Ok(Verdict {
        manifold: manifold.into(),
        total_chern_scalar: f64::NAN,
        sign: Sign::Zero,
        kodaira_statement: KodairaStatement::Indeterminate,
        notes: vec![
            "no global quadrature on this chart".into(),
            format!("max gauduchon density {dens:e} over {} points", points.len()),
            format!("largest Chern Ricci eigenvalue {top:e} (non-positive: {})", top <= 1e-12),
        ],
    })
}
