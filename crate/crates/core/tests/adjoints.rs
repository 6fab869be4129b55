use curvlab_core::adjoints::{self, FieldFamily};
use curvlab_core::geometry::MetricField;
use curvlab_core::metrics::{FlatMetric, HopfMetric, KahlerPotentialTorus, PerturbedTorus};
use curvlab_core::quadrature::QuadratureGrid;
use curvlab_core::rng;
use std::sync::Arc;

fn run(metric: Arc<dyn MetricField>, gauduchon: Option<Arc<dyn MetricField>>, grid: &QuadratureGrid, tol: f64, triples: usize) {
    let rep = adjoints::verify_adjoint_identities(metric, gauduchon, grid, 17, triples, 16).unwrap();
    for r in &rep.residuals {
        println!("{} pointwise {:.3e} weak {:.3e}", r.label, r.pointwise, r.weak);
    }
    assert!(rep.max() <= tol, "{rep:?}");
}

#[test]
fn flat_torus_suite() {
    let flat: Arc<dyn MetricField> = Arc::new(FlatMetric { n: 2 });
    run(flat.clone(), Some(flat), &QuadratureGrid::torus("torus-flat", 2, 10, 1.0), 1e-6, 4);
}

#[test]
fn kahler_torus_suite() {
    let m: Arc<dyn MetricField> = Arc::new(KahlerPotentialTorus::standard(2, 0.5, 1.0));
    run(m.clone(), Some(m), &QuadratureGrid::torus("torus-kahler-potential", 2, 10, 1.0), 1e-6, 3);
}

#[test]
fn perturbed_torus_suite() {
    let m: Arc<dyn MetricField> = Arc::new(PerturbedTorus { n: 2, a: 0.2, b: 0.15, period: 1.0 });
    run(m, None, &QuadratureGrid::torus("torus-hermitian-perturbed", 2, 10, 1.0), 1e-6, 3);
}

#[test]
fn hopf_suite() {
    let std: Arc<dyn MetricField> = Arc::new(HopfMetric::standard());
    let grid = QuadratureGrid::hopf("hopf-standard", 16, 10, 8);
    run(std.clone(), Some(std.clone()), &grid, 1e-5, 3);
    run(Arc::new(HopfMetric::conformal(0.2)), Some(std), &grid, 1e-5, 3);
}

#[test]
fn constant_factor_reduces_c1() {
    // with f constant, ∂f = 0 and c1 is f ∂̄*ω = ∂̄*(fω)
    let fam = FieldFamily::Torus { n: 2, period: 1.0 };
    let t = fam.triple(&mut rng::stream(1, 2));
    assert_eq!(t.eta.len(), 2);
}
