mod support;

use curvlab_core::geometry::{ChartPoint, DerivativeEngine, MetricField};
use curvlab_core::metrics::{
    FlatMetric, FubiniStudyChart, HopfMetric, InoueMetric, KahlerPotentialTorus, PerturbedTorus, ScaledMetric,
};
use curvlab_core::rng;
use curvlab_core::tensor::{self, Christoffel, ComplexCurvature, PointGeometry};
use curvlab_core::C64;
use proptest::prelude::*;
use rand::Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn geom(m: &dyn MetricField, p: &ChartPoint) -> PointGeometry {
    PointGeometry::at(&DerivativeEngine::analytic(), m, p).unwrap()
}

fn hopf_point(rng: &mut rand_chacha::ChaCha8Rng) -> ChartPoint {
    let r = rng.gen_range(1.0..2.0);
    let s: f64 = rng.gen_range(0.0..1.0);
    let (a, b) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
    ChartPoint::new(&[C64::from_polar(r * s.sqrt(), a), C64::from_polar(r * (1.0 - s).sqrt(), b)])
}

#[test]
fn flat_torus_everything_vanishes() {
    let m = FlatMetric { n: 2 };
    let p = ChartPoint::new(&[c(0.3, 0.1), c(0.7, 0.2)]);
    let e = DerivativeEngine::analytic();
    assert_eq!(tensor::christoffel(&e, &m, &p).unwrap().max_abs(), 0.0);
    let (b, _) = tensor::curvature_complexified(&e, &m, &p).unwrap();
    assert_eq!(b.max_abs(), 0.0);
    let r = tensor::scalar_identity_residual(&e, &m, &p).unwrap();
    assert_eq!(r.identity_residual, 0.0);
    assert_eq!(r.s, 0.0);
    assert_eq!(r.s_c, 0.0);
    let ric = tensor::riemannian_ricci(&e, &m, &p, &[1.0, 0.0, 2.0, 0.5], &[0.3, 1.0, 0.0, -1.0]).unwrap();
    assert_eq!(ric, 0.0);
}

#[test]
fn hopf_christoffel_torsion_and_chern_closed_forms() {
    let m = HopfMetric::standard();
    for z in [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.6, -0.8), c(0.9, 0.4)]] {
        let p = ChartPoint::new(&z);
        let g = geom(&m, &p);
        let ch = Christoffel::compute(&g);
        let rho: f64 = z.iter().map(|w| w.norm_sqr()).sum();
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let hol = -0.5 * (d(i, k) * z[j].conj() + d(j, k) * z[i].conj()) / rho;
                    let mixed = 0.5 * (z[k] * d(i, j) - z[i] * d(j, k)) / rho;
                    assert!((ch.hol(k, i, j) - hol).norm() < 1e-13);
                    assert!((ch.mixed(k, i, j) - mixed).norm() < 1e-13);
                }
            }
        }
        let t = tensor::torsion_components(&g);
        assert!((tensor::torsion_norm_sq(&g, &t) - 2.0).abs() < 1e-12);
        let (ric, sc) = tensor::chern_ricci_at(&g);
        assert!((sc - 2.0).norm() < 1e-12);
        for i in 0..2 {
            for j in 0..2 {
                let want = 2.0 * (d(i, j) * rho - z[i].conj() * z[j]) / (rho * rho);
                assert!((ric[(i, j)] - want).norm() < 1e-12);
            }
        }
        // ∂̄*ω = √−1(1 − n) z̄_i / |z|² dz^i
        let th = tensor::dbar_star_omega_at(&g, &ch);
        for i in 0..2 {
            assert!((th.c[i] - c(0.0, -1.0) * z[i].conj() / rho).norm() < 1e-13);
        }
        let rep = tensor::scalar_report_at(&g).unwrap();
        assert!((rep.s - 3.0).abs() < 1e-10, "s = {}", rep.s);
        assert!(rep.adjoint_term.abs() < 1e-12);
    }
}

#[test]
fn fubini_study_is_einstein_with_known_scalars() {
    let m = FubiniStudyChart { n: 2 };
    let p = ChartPoint::new(&[c(0.4, -0.3), c(-0.2, 0.5)]);
    let rep = tensor::scalar_report_at(&geom(&m, &p)).unwrap();
    assert!((rep.s_c - 6.0).abs() < 1e-10);
    assert!((rep.s - 12.0).abs() < 1e-9);
    assert!((rep.s_complexified - 12.0).abs() < 1e-9);
    assert!(rep.torsion_norm_sq < 1e-20);
}

#[test]
fn kahler_potential_specialization() {
    let m = KahlerPotentialTorus::standard(2, 0.5, 1.0);
    let mut r = rng::stream(11, 0);
    for _ in 0..20 {
        let p = support::random_point(&mut r, 2);
        let g = geom(&m, &p);
        let ch = Christoffel::compute(&g);
        assert!(ch.mixed.iter().all(|x| x.norm() < 1e-8));
        let rep = tensor::scalar_report_at(&g).unwrap();
        assert!(rep.torsion_norm_sq <= 1e-10);
        assert!(rep.adjoint_term.abs() <= 1e-8);
        assert!((rep.s - 2.0 * rep.s_c).abs() <= 1e-6);
        assert!(rep.s_c.abs() > 1e-3, "potential should produce curvature");
    }
}

#[test]
fn complexified_curvature_matches_full_alphabet_curvature() {
    let mut r = rng::stream(5, 0);
    for n in 1..=3 {
        let m = support::random_trig_metric(&mut r, n, 3, 0.5);
        let p = support::random_point(&mut r, n);
        let g = geom(&m, &p);
        let ch = Christoffel::compute(&g);
        let cc = ComplexCurvature::compute(&g, &ch);
        let full = tensor::full_curvature_lowered(&g).unwrap();
        let w = 2 * n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let a = cc.low[cc.ix(i, j, k, l)];
                        let b = full[((i * w + n + j) * w + k) * w + n + l];
                        assert!((a - b).norm() < 1e-10, "n={n}: {a} vs {b}");
                    }
                }
            }
        }
        assert!(cc.hermitian_defect() < 1e-10);
        // structural zeros of the Christoffel block against the full connection
        let blk = ch.to_block(p);
        assert_eq!(blk.get(&[n, 0, 0]), C64::new(0.0, 0.0));
        assert_eq!(blk.get(&[0, n, n]), C64::new(0.0, 0.0));
    }
}

#[test]
fn riemannian_ricci_matches_real_oracle_and_is_symmetric() {
    let mut r = rng::stream(7, 0);
    for n in 1..=3 {
        let m = support::random_trig_metric(&mut r, n, 3, 0.6);
        let p = support::random_point(&mut r, n);
        let g = geom(&m, &p);
        let x: Vec<f64> = (0..2 * n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..2 * n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let a = tensor::riemannian_ricci_at(&g, &x, &y).unwrap();
        let b = tensor::riemannian_ricci_at(&g, &y, &x).unwrap();
        let o = tensor::real_oracle::ricci_xy(&g, &x, &y).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((a - o).abs() < 1e-6 * (1.0 + o.abs()), "{a} vs {o}");
    }
}

#[test]
fn scalar_identity_on_catalog_charts() {
    let mut r = rng::stream(3, 0);
    let inoue = InoueMetric;
    for _ in 0..50 {
        let p = ChartPoint::new(&[c(r.gen_range(-1.0..1.0), r.gen_range(0.3..3.0)), c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))]);
        let rep = tensor::scalar_report_at(&geom(&inoue, &p)).unwrap();
        assert!(rep.relative_residual() < 1e-6, "{rep:?}");
        assert!((rep.s - rep.s_complexified).abs() < 1e-6 * (1.0 + rep.s.abs()));
        let p = hopf_point(&mut r);
        for m in [HopfMetric::standard(), HopfMetric::conformal(0.3)] {
            let rep = tensor::scalar_report_at(&geom(&m, &p)).unwrap();
            assert!(rep.relative_residual() < 1e-6, "{rep:?}");
            assert!(rep.max_imag < 1e-10);
        }
        let m = PerturbedTorus { n: 2, a: 0.2, b: 0.15, period: 1.0 };
        let rep = tensor::scalar_report_at(&geom(&m, &support::random_point(&mut r, 2))).unwrap();
        assert!(rep.relative_residual() < 1e-6, "{rep:?}");
        assert!(rep.torsion_norm_sq > 1e-6);
    }
}

#[test]
fn inoue_bundle_curvature_closed_form() {
    for v in [0.5, 1.0, 2.0, 3.7] {
        let p = ChartPoint::new(&[c(0.2, v), c(0.0, 0.0)]);
        let k = InoueMetric::bundle_curvature_coefficient(&p);
        assert!((k - c(-0.5 / (v * v), 0.0)).norm() < 1e-14);
    }
}

#[test]
fn finite_difference_engine_reproduces_identity() {
    let m = support::random_trig_metric(&mut rng::stream(9, 0), 2, 3, 0.5);
    let p = ChartPoint::new(&[c(0.31, 0.77), c(0.12, 0.45)]);
    let fd = tensor::scalar_identity_residual(&DerivativeEngine::finite_difference(1e-3), &m, &p).unwrap();
    let an = tensor::scalar_identity_residual(&DerivativeEngine::analytic(), &m, &p).unwrap();
    assert!(fd.relative_residual() < 1e-4);
    assert!((fd.s - an.s).abs() < 1e-4);
    let cross = DerivativeEngine::analytic().with_cross_check(1e-6);
    assert!(tensor::chern_ricci(&cross, &m, &p).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_oracles_agree_on_random_metrics(seed in 0u64..1_000_000, n in 1usize..=3) {
        let mut r = rng::stream(seed, 0);
        let m = support::random_trig_metric(&mut r, n, 4, 0.7);
        let p = support::random_point(&mut r, n);
        let rep = tensor::scalar_report_at(&geom(&m, &p)).unwrap();
        prop_assert!((rep.s - rep.s_complexified).abs() <= 1e-6 * (1.0 + rep.s.abs()));
        prop_assert!(rep.relative_residual() <= 1e-6);
        prop_assert!(rep.torsion_norm_sq >= 0.0);
        prop_assert!(rep.max_imag <= 1e-10);
    }

    #[test]
    fn torsion_norm_scales_inversely(seed in 0u64..1_000_000, c in 0.2f64..5.0) {
        let mut r = rng::stream(seed, 0);
        let m = support::random_trig_metric(&mut r, 2, 3, 0.6);
        let p = support::random_point(&mut r, 2);
        let e = DerivativeEngine::analytic();
        let (t1, n1) = tensor::torsion(&e, &m, &p).unwrap();
        let (t2, n2) = tensor::torsion(&e, &ScaledMetric { base: m.clone(), c }, &p).unwrap();
        prop_assert!((n2 - n1 / c).abs() <= 1e-10 * (1.0 + n1));
        for (a, b) in t1.data.iter().zip(&t2.data) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
        // antisymmetry in the lower indices
        for k in 0..2 { for i in 0..2 { for j in 0..2 {
            prop_assert!((t1.get(&[k, i, j]) + t1.get(&[k, j, i])).norm() <= 1e-14);
        }}}
    }
}
