//! Named manifolds with their metrics, grids and solver settings.

use crate::conformal::GauduchonSetup;
use crate::error::{CurvError, Result};
use crate::geometry::{is_positive_definite, ChartPoint, MetricField};
use crate::metrics::{FlatMetric, HopfMetric, InoueMetric, KahlerPotentialTorus, PerturbedTorus};
use crate::quadrature::QuadratureGrid;
use crate::rng;
use crate::spectral::{Family, LocalCoords, SpectralBasis};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifoldId {
    TorusFlat,
    TorusKahlerPotential,
    TorusHermitianPerturbed,
    HopfStandard,
    HopfConformal,
    InoueChart,
}

impl ManifoldId {
    pub const ALL: [ManifoldId; 6] = [
        ManifoldId::TorusFlat,
        ManifoldId::TorusKahlerPotential,
        ManifoldId::TorusHermitianPerturbed,
        ManifoldId::HopfStandard,
        ManifoldId::HopfConformal,
        ManifoldId::InoueChart,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ManifoldId::TorusFlat => "torus-flat",
            ManifoldId::TorusKahlerPotential => "torus-kahler-potential",
            ManifoldId::TorusHermitianPerturbed => "torus-hermitian-perturbed",
            ManifoldId::HopfStandard => "hopf-standard",
            ManifoldId::HopfConformal => "hopf-conformal",
            ManifoldId::InoueChart => "inoue-chart",
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, ManifoldId::TorusFlat | ManifoldId::TorusKahlerPotential | ManifoldId::TorusHermitianPerturbed)
    }

    pub fn is_hopf(&self) -> bool {
        matches!(self, ManifoldId::HopfStandard | ManifoldId::HopfConformal)
    }
}

impl fmt::Display for ManifoldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ManifoldId {
    type Err = CurvError;
    fn from_str(s: &str) -> Result<Self> {
        ManifoldId::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| CurvError::UnknownId(s.to_string()))
    }
}

/// Parameters shared by the catalog entries; each entry reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManifoldParams {
    /// Complex dimension of the tori (Hopf and Inoue are surfaces).
    pub n: usize,
    /// Potential amplitude for `torus-kahler-potential`.
    pub amplitude: f64,
    /// Diagonal and off-diagonal perturbation sizes for `torus-hermitian-perturbed`.
    pub a: f64,
    pub b: f64,
    /// Conformal exponent for `hopf-conformal`.
    pub t: f64,
    pub period: f64,
    /// Resolution of the screening grid: lattice points per real direction on
    /// tori, `τ` nodes on Hopf.
    pub grid: Option<usize>,
}

impl Default for ManifoldParams {
    fn default() -> Self {
        ManifoldParams { n: 2, amplitude: 0.5, a: 0.2, b: 0.15, t: 0.2, period: 1.0, grid: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldSpec {
    pub id: ManifoldId,
    pub params: ManifoldParams,
}

impl ManifoldSpec {
    pub fn new(id: ManifoldId) -> Self {
        ManifoldSpec { id, params: ManifoldParams::default() }
    }

    pub fn parse(id: &str) -> Result<Self> {
        Ok(Self::new(id.parse()?))
    }
}

pub struct Manifold {
    pub spec: ManifoldSpec,
    pub metric: Arc<dyn MetricField>,
    /// Screening and integration grid; `None` for pointwise-only charts.
    pub grid: Option<QuadratureGrid>,
    pub kahler: bool,
    /// A metric known to be Gauduchon in the same conformal class, when one is available in closed form.
    pub gauduchon_metric: Option<Arc<dyn MetricField>>,
    pub gauduchon: Option<GauduchonSetup>,
    pub adjoint_grid: Option<QuadratureGrid>,
    pub yamabe: Option<(QuadratureGrid, Arc<SpectralBasis>)>,
    /// Conformal factor `t·g` whose removal makes the metric Gauduchon, if known.
    pub planted_factor: Option<f64>,
}

impl fmt::Debug for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Manifold").field("spec", &self.spec).field("grid", &self.grid.as_ref().map(|g| g.len())).finish()
    }
}

fn hopf_solver_setup() -> GauduchonSetup {
    let basis = SpectralBasis::tensor(LocalCoords::HopfTauS, vec![Family::Fourier { kmax: 10, period: 1.0 }, Family::Legendre { degree: 8 }]);
    GauduchonSetup::new(basis, QuadratureGrid::hopf("hopf", 32, 16, 1))
}

fn torus_l1_setup(n: usize, period: f64, per_dim: usize) -> GauduchonSetup {
    GauduchonSetup::new(SpectralBasis::fourier_l1((0..2 * n).collect(), 1, period), QuadratureGrid::torus("torus", n, per_dim, period))
}

fn torus_yamabe(n: usize, period: f64) -> (QuadratureGrid, Arc<SpectralBasis>) {
    (QuadratureGrid::torus("torus", n, 8, period), Arc::new(SpectralBasis::fourier_l1((0..2 * n).collect(), 1, period)))
}

fn hopf_yamabe() -> (QuadratureGrid, Arc<SpectralBasis>) {
    let basis = SpectralBasis::tensor(LocalCoords::HopfTauS, vec![Family::Fourier { kmax: 2, period: 1.0 }, Family::Legendre { degree: 3 }]);
    (QuadratureGrid::hopf("hopf", 16, 8, 1), Arc::new(basis))
}

fn screen(metric: &dyn MetricField, nodes: &[ChartPoint]) -> Result<()> {
    for (i, p) in nodes.iter().enumerate() {
        if !metric.in_domain(p) || !is_positive_definite(&metric.value(p)) {
            return Err(CurvError::NotPositiveDefinite(i));
        }
    }
    Ok(())
}

pub fn build_manifold(spec: &ManifoldSpec) -> Result<Manifold> {
    let p = &spec.params;
    let name = spec.id.as_str();
    if spec.id.is_torus() && p.n == 0 {
        return Err(CurvError::Config("complex dimension must be at least 1".into()));
    }
    if !(p.period.is_finite() && p.period > 0.0) {
        return Err(CurvError::Config(format!("period must be positive, got {}", p.period)));
    }
    let torus_grid = |per: usize| QuadratureGrid::torus(name, p.n, per, p.period);
    let hopf_grid = |nt: usize| QuadratureGrid::hopf(name, nt, (nt / 2).max(2), 1);
    let m = match spec.id {
        ManifoldId::TorusFlat => {
            let metric: Arc<dyn MetricField> = Arc::new(FlatMetric { n: p.n });
            Manifold {
                spec: spec.clone(),
                metric: metric.clone(),
                grid: Some(torus_grid(p.grid.unwrap_or(8))),
                kahler: true,
                gauduchon_metric: Some(metric),
                gauduchon: Some(torus_l1_setup(p.n, p.period, 6)),
                adjoint_grid: Some(torus_grid(10)),
                yamabe: Some(torus_yamabe(p.n, p.period)),
                planted_factor: None,
            }
        }
        ManifoldId::TorusKahlerPotential => {
            let metric: Arc<dyn MetricField> = Arc::new(KahlerPotentialTorus::standard(p.n, p.amplitude, p.period));
            Manifold {
                spec: spec.clone(),
                metric: metric.clone(),
                grid: Some(torus_grid(p.grid.unwrap_or(16))),
                kahler: true,
                gauduchon_metric: Some(metric),
                gauduchon: Some(torus_l1_setup(p.n, p.period, 16)),
                adjoint_grid: Some(torus_grid(10)),
                yamabe: Some(torus_yamabe(p.n, p.period)),
                planted_factor: None,
            }
        }
        ManifoldId::TorusHermitianPerturbed => {
            let pt = PerturbedTorus { n: p.n, a: p.a, b: p.b, period: p.period };
            let act = pt.active_coords();
            let basis = SpectralBasis::tensor(LocalCoords::Real(act.clone()), vec![Family::Fourier { kmax: 12, period: p.period }; act.len()]);
            let setup = GauduchonSetup::new(basis, QuadratureGrid::torus_active(name, p.n, 48, p.period, act));
            Manifold {
                spec: spec.clone(),
                metric: Arc::new(pt),
                grid: Some(torus_grid(p.grid.unwrap_or(8))),
                kahler: false,
                gauduchon_metric: None,
                gauduchon: Some(setup),
                adjoint_grid: Some(torus_grid(10)),
                yamabe: Some(torus_yamabe(p.n, p.period)),
                planted_factor: None,
            }
        }
        ManifoldId::HopfStandard | ManifoldId::HopfConformal => {
            let t = if spec.id == ManifoldId::HopfStandard { 0.0 } else { p.t };
            Manifold {
                spec: spec.clone(),
                metric: Arc::new(HopfMetric::conformal(t)),
                grid: Some(hopf_grid(p.grid.unwrap_or(16))),
                kahler: false,
                gauduchon_metric: Some(Arc::new(HopfMetric::standard())),
                gauduchon: Some(hopf_solver_setup()),
                adjoint_grid: Some(QuadratureGrid::hopf(name, 16, 10, 8)),
                yamabe: Some(hopf_yamabe()),
                planted_factor: Some(t),
            }
        }
        ManifoldId::InoueChart => Manifold {
            spec: spec.clone(),
            metric: Arc::new(InoueMetric),
            grid: None,
            kahler: false,
            gauduchon_metric: None,
            gauduchon: None,
            adjoint_grid: None,
            yamabe: None,
            planted_factor: None,
        },
    };
    match &m.grid {
        Some(g) => screen(m.metric.as_ref(), &g.nodes)?,
        None => screen(m.metric.as_ref(), &sample_points(spec.id, m.metric.dim(), 0, 100))?,
    }
    Ok(m)
}

impl Manifold {
    pub fn name(&self) -> &'static str {
        self.spec.id.as_str()
    }

    pub fn sample_points(&self, seed: u64, count: usize) -> Vec<ChartPoint> {
        let period = self.spec.params.period;
        let pts = sample_points(self.spec.id, self.metric.dim(), seed, count);
        if self.spec.id.is_torus() {
            pts.into_iter().map(|p| ChartPoint::new(&p.coords().iter().map(|z| z * period).collect::<Vec<_>>())).collect()
        } else {
            pts
        }
    }

    pub fn quadrature_grid(&self) -> Result<&QuadratureGrid> {
        self.grid.as_ref().ok_or_else(|| CurvError::QuadratureUnsupported(self.name().into()))
    }
}

/// Seeded points inside the fundamental domain (unit period for tori).
pub fn sample_points(id: ManifoldId, n: usize, seed: u64, count: usize) -> Vec<ChartPoint> {
    let mut r = rng::stream(seed, rng::STREAM_POINTS);
    (0..count)
        .map(|_| match id {
            ManifoldId::HopfStandard | ManifoldId::HopfConformal => {
                let tau: f64 = r.gen_range(0.0..1.0);
                let s: f64 = r.gen_range(0.02..0.98);
                let rad = 2f64.powf(tau);
                let (a, b): (f64, f64) = (r.gen_range(0.0..2.0 * PI), r.gen_range(0.0..2.0 * PI));
                ChartPoint::new(&[C64::from_polar(rad * s.sqrt(), a), C64::from_polar(rad * (1.0 - s).sqrt(), b)])
            }
            ManifoldId::InoueChart => {
                let w = C64::new(r.gen_range(0.0..1.0), r.gen_range(0.5..2.0));
                let z = C64::new(r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
                ChartPoint::new(&[w, z])
            }
            _ => {
                let z: Vec<C64> = (0..n).map(|_| C64::new(r.gen_range(0.0..1.0), r.gen_range(0.0..1.0))).collect();
                ChartPoint::new(&z)
            }
        })
        .collect()
}
