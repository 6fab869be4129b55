mod support;

use curvlab_core::conformal::{self, ConformalFactor, ConformalMetric, GauduchonSetup, KodairaStatement, Sign};
use curvlab_core::geometry::{ChartPoint, DerivativeEngine, MetricField};
use curvlab_core::jet::Jet;
use curvlab_core::metrics::{hopf_profile, FlatMetric, HopfMetric, KahlerPotentialTorus, PerturbedTorus, ScaledMetric};
use curvlab_core::quadrature::QuadratureGrid;
use curvlab_core::spectral::{Family, LocalCoords, SpectralBasis};
use curvlab_core::tensor::{self, Christoffel, PointGeometry};
use curvlab_core::{forms, rng};
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

fn hopf_setup() -> GauduchonSetup {
    let basis = SpectralBasis::tensor(
        LocalCoords::HopfTauS,
        vec![Family::Fourier { kmax: 10, period: 1.0 }, Family::Legendre { degree: 8 }],
    );
    GauduchonSetup::new(basis, QuadratureGrid::hopf("hopf", 32, 16, 1))
}

fn torus_setup(m: &PerturbedTorus, kmax: usize, per_dim: usize) -> GauduchonSetup {
    let act = m.active_coords();
    let basis = SpectralBasis::tensor(
        LocalCoords::Real(act.clone()),
        vec![Family::Fourier { kmax, period: m.period }; act.len()],
    );
    GauduchonSetup::new(basis, QuadratureGrid::torus_active("torus", m.n, per_dim, m.period, act))
}

#[test]
fn cofactor_density_equals_adjoint_term() {
    let mut r = rng::stream(21, 0);
    for n in 2..=3 {
        for _ in 0..5 {
            let m = support::random_trig_metric(&mut r, n, 3, 0.5);
            let p = support::random_point(&mut r, n);
            let g = PointGeometry::at(&DerivativeEngine::analytic(), &m, &p).unwrap();
            let a = tensor::adjoint_term_at(&g, &Christoffel::compute(&g)).re;
            let d = conformal::gauduchon_density(&m, &p).unwrap();
            assert!((a - d).abs() < 1e-10 * (1.0 + a.abs()), "{a} vs {d}");
            assert!(a.abs() > 1e-4);
        }
    }
}

#[test]
fn residual_on_known_metrics() {
    let hopf = QuadratureGrid::hopf("hopf", 8, 6, 4);
    assert!(conformal::gauduchon_residual(&HopfMetric::standard(), &hopf).unwrap() < 1e-12);
    let torus = QuadratureGrid::torus("torus", 2, 6, 1.0);
    assert!(conformal::gauduchon_residual(&KahlerPotentialTorus::standard(2, 0.5, 1.0), &torus).unwrap() < 1e-8);
    let bumped = conformal::gauduchon_residual(&HopfMetric::conformal(0.5), &hopf).unwrap();
    assert!(bumped > 1e-3, "{bumped}");
}

#[test]
fn conformal_chern_scalar_matches_transformation_law() {
    let m = PerturbedTorus { n: 2, a: 0.2, b: 0.15, period: 1.0 };
    let f = |p: &ChartPoint| (p.x(0) * (2.0 * PI)).sin() * 0.3 + (p.y(1) * (2.0 * PI) + p.x(1) * (4.0 * PI)).cos() * 0.2;
    let cm = ConformalMetric { base: Arc::new(m.clone()), f: Arc::new(f) };
    let e = DerivativeEngine::analytic();
    let mut r = rng::stream(4, 0);
    for _ in 0..20 {
        let p = support::random_point(&mut r, 2);
        let direct = tensor::chern_ricci(&e, &cm, &p).unwrap().1;
        let g = PointGeometry::at(&e, &m, &p).unwrap();
        let fj = f(&p);
        let law = (-fj.re()).exp() * (tensor::chern_ricci_at(&g).1.re - 2.0 * forms::trace_ddbar(&g, &fj).re);
        assert!((direct - law).abs() < 1e-8, "{direct} vs {law}");
    }
    // constant factor: det scales by e^{nc}, Chern Ricci form unchanged
    let c = 0.7;
    let k = ConformalMetric { base: Arc::new(m.clone()), f: Arc::new(move |_: &ChartPoint| Jet::real(2, c)) };
    let p = ChartPoint::new(&[curvlab_core::C64::new(0.3, 0.1), curvlab_core::C64::new(0.2, 0.9)]);
    let d0 = m.value(&p).determinant().re;
    assert!((k.value(&p).determinant().re - (2.0 * c).exp() * d0).abs() < 1e-12);
    let (r0, _) = tensor::chern_ricci(&e, &m, &p).unwrap();
    let (r1, _) = tensor::chern_ricci(&e, &k, &p).unwrap();
    assert!(curvlab_core::geometry::cmax(&(r0 - r1)) < 1e-12);
}

#[test]
fn already_gauduchon_gives_zero_factor() {
    let s = conformal::solve_gauduchon_factor(Arc::new(HopfMetric::standard()), &hopf_setup()).unwrap();
    assert!(s.factor.max_abs() <= 1e-6);
    let m = KahlerPotentialTorus::standard(2, 0.5, 1.0);
    let setup = GauduchonSetup::new(
        SpectralBasis::fourier_l1(vec![0, 1, 2, 3], 1, 1.0),
        QuadratureGrid::torus("torus", 2, 6, 1.0),
    );
    let s = conformal::solve_gauduchon_factor(Arc::new(m), &setup).unwrap();
    assert!(s.factor.max_abs() <= 1e-8);
}

#[test]
fn planted_factor_is_recovered_on_hopf() {
    // e^{−g} · (standard Hopf) is conformal to a Gauduchon metric via f = g
    let setup = hopf_setup();
    let metric = Arc::new(HopfMetric::conformal(1.0));
    let s = conformal::solve_gauduchon_factor(metric.clone(), &setup).unwrap();
    let planted = ConformalFactor::from_field(hopf_profile, metric.as_ref(), &setup.grid).unwrap();
    let err = s.factor.values.iter().zip(&planted.values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err <= 1e-3, "max error {err}");
    assert!(s.residual <= 1e-6, "residual {}", s.residual);
    assert!(s.positivity > 0.0);
    // off-grid evaluation of the field agrees with the planted profile too
    let p = ChartPoint::new(&[curvlab_core::C64::new(0.9, 0.4), curvlab_core::C64::new(-0.3, 0.8)]);
    let shift = hopf_profile(&p).re() - planted.field.value(&p).re;
    assert!((s.factor.field.value(&p).re - (hopf_profile(&p).re() - shift)).abs() < 1e-3);
}

#[test]
fn solver_is_gauge_invariant() {
    let setup = hopf_setup();
    let a = conformal::solve_gauduchon_factor(Arc::new(HopfMetric::conformal(0.5)), &setup).unwrap();
    let scaled = ScaledMetric { base: HopfMetric::conformal(0.5), c: 1.3f64.exp() };
    let b = conformal::solve_gauduchon_factor(Arc::new(scaled), &setup).unwrap();
    let d = a.factor.values.iter().zip(&b.factor.values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    assert!(d <= 1e-10, "{d}");
}

#[test]
fn perturbed_torus_solution() {
    let m = PerturbedTorus { n: 2, a: 0.2, b: 0.15, period: 1.0 };
    let setup = torus_setup(&m, 12, 48);
    let before = conformal::gauduchon_residual(&m, &setup.grid).unwrap();
    let s = conformal::solve_gauduchon_factor(Arc::new(m), &setup).unwrap();
    assert!(before > 1e-3);
    assert!(s.residual <= 1e-8, "residual {} (was {before})", s.residual);
    assert!(s.factor.variation() > 1e-3);
}

#[test]
fn total_chern_scalar_values() {
    let hopf = QuadratureGrid::hopf("hopf", 16, 8, 1);
    let t = conformal::total_chern_scalar(&HopfMetric::standard(), &hopf, 1e-6).unwrap();
    let want = 16.0 * PI * PI * LN_2;
    assert!((t - want).abs() / want <= 1e-3, "{t} vs {want}");
    let torus = QuadratureGrid::torus("torus", 2, 6, 1.0);
    assert_eq!(conformal::total_chern_scalar(&FlatMetric { n: 2 }, &torus, 1e-6).unwrap(), 0.0);
    // a Kähler potential perturbation has s_C a total divergence
    let k = conformal::total_chern_scalar(&KahlerPotentialTorus::standard(2, 0.5, 1.0), &QuadratureGrid::torus("torus", 2, 16, 1.0), 1e-6).unwrap();
    assert!(k.abs() < 1e-8, "{k}");
    assert!(matches!(
        conformal::total_chern_scalar(&HopfMetric::conformal(0.5), &hopf, 1e-6),
        Err(curvlab_core::CurvError::NotGauduchon(_))
    ));
}

#[test]
fn theorem_t_on_hopf_family() {
    let setup = hopf_setup();
    for t in [0.0, 0.1, 0.2] {
        let r = conformal::theorem_t_check(Arc::new(HopfMetric::conformal(t)), &setup).unwrap();
        assert!(r.residual <= 1e-3, "t={t}: {r:?}");
        if t > 0.0 {
            assert!(r.gradient_term > 1e-6, "t={t}: gradient term {}", r.gradient_term);
        } else {
            assert_eq!(r.gradient_term, 0.0);
        }
    }
}

#[test]
fn theorem_t_on_flat_and_perturbed_torus() {
    let m = PerturbedTorus { n: 2, a: 0.2, b: 0.15, period: 1.0 };
    let setup = torus_setup(&m, 8, 40);
    let r = conformal::theorem_t_check(Arc::new(m), &setup).unwrap();
    assert!(r.residual <= 1e-3, "{r:?}");
    assert!(r.gradient_term > 0.0);
    let flat = conformal::theorem_t_check(Arc::new(FlatMetric { n: 2 }), &setup).unwrap();
    assert_eq!((flat.lhs, flat.rhs), (0.0, 0.0));
}

#[test]
fn classification_verdicts() {
    let setup = hopf_setup();
    let v = conformal::classify("hopf-standard", Arc::new(HopfMetric::standard()), &setup, false, 1e-10).unwrap();
    assert_eq!(v.sign, Sign::Positive);
    assert_eq!(v.kodaira_statement, KodairaStatement::NotPseudoEffective_KappaMinusInfinity);
    for t in [0.1, 0.2] {
        let w = conformal::classify("hopf-conformal", Arc::new(HopfMetric::conformal(t)), &setup, false, 1e-10).unwrap();
        assert_eq!(w.kodaira_statement, v.kodaira_statement);
    }
    let flat = FlatMetric { n: 2 };
    let setup = GauduchonSetup::new(SpectralBasis::fourier_l1(vec![0, 1, 2, 3], 1, 1.0), QuadratureGrid::torus("torus", 2, 4, 1.0));
    let v = conformal::classify("torus-flat", Arc::new(flat), &setup, true, 1e-10).unwrap();
    assert_eq!(v.sign, Sign::Zero);
    assert_eq!(v.kodaira_statement, KodairaStatement::KahlerCalabiYau_RicciFlat);
}

#[test]
fn verdicts_ignore_conformal_rescaling() {
    let setup = hopf_setup();
    let scaled = ScaledMetric { base: HopfMetric::standard(), c: 3.0 };
    let v = conformal::classify("hopf-standard", Arc::new(scaled), &setup, false, 1e-10).unwrap();
    assert_eq!(v.kodaira_statement, KodairaStatement::NotPseudoEffective_KappaMinusInfinity);
    // e^f times the flat metric, f depending on x¹ only
    let f = |p: &ChartPoint| (p.x(0) * (2.0 * PI)).cos() * 0.2;
    let m = ConformalMetric { base: Arc::new(FlatMetric { n: 2 }), f: Arc::new(f) };
    let basis = SpectralBasis::tensor(LocalCoords::Real(vec![0]), vec![Family::Fourier { kmax: 12, period: 1.0 }]);
    let setup = GauduchonSetup::new(basis, QuadratureGrid::torus_active("torus", 2, 48, 1.0, vec![0]));
    let v = conformal::classify("torus-flat", Arc::new(m), &setup, false, 1e-8).unwrap();
    assert_eq!(v.sign, Sign::Zero, "{v:?}");
    assert_eq!(v.kodaira_statement, KodairaStatement::KahlerCalabiYau_RicciFlat, "{v:?}");
}

#[test]
fn inoue_pointwise_classification() {
    let pts: Vec<ChartPoint> = (1..=10)
        .map(|k| ChartPoint::new(&[curvlab_core::C64::new(0.1 * k as f64, 0.3 * k as f64), curvlab_core::C64::new(0.2, -0.1)]))
        .collect();
    let v = conformal::classify_pointwise("inoue-chart", &curvlab_core::metrics::InoueMetric, &pts).unwrap();
    assert_eq!(v.kodaira_statement, KodairaStatement::Indeterminate);
    assert!(v.notes.iter().any(|n| n.contains("non-positive: true")), "{:?}", v.notes);
    let d = conformal::gauduchon_densities(&curvlab_core::metrics::InoueMetric, &pts).unwrap();
    assert!(d.iter().all(|x| x.abs() < 1e-10));
}
