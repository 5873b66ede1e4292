use std::f64::consts::TAU;

use proptest::prelude::*;
use qlct_core::gabor::{gabor_analyze, AnalyzeOptions};
use qlct_core::lct1d::LCTParams;
use qlct_core::qlct2d::QLCTParams;
use qlct_core::signal::{Grid2D, QSignal2D};
use qlct_core::uncertainty::{
    am_gm, concentration_check, epsilon_concentration_check, heisenberg_check, lieb_check, log_check, young_sup_check,
    RegionMask,
};
use qlct_core::Quaternion;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(n: usize) -> Grid2D<f64> {
    Grid2D::square(n, (TAU / n as f64).sqrt()).unwrap()
}

fn smooth(n: usize, c: [f64; 8]) -> QSignal2D<f64> {
    let f = QSignal2D::sample(grid(n), |a, b| {
        Quaternion::new(c[0] + c[4] * a, c[1] + c[5] * b, c[2] + c[6] * a * b, c[3] + c[7] * a * a).scale((-(a * a + b * b) / 2.0).exp())
    })
    .unwrap();
    let norm = f.l2_norm();
    f.scaled(1.0 / norm)
}

fn window(n: usize) -> QSignal2D<f64> {
    smooth(n, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
}

fn coeffs() -> impl Strategy<Value = [f64; 8]> {
    prop::array::uniform8(-1.0f64..1.0).prop_filter("nonzero constant part", |c| c[..4].iter().map(|v| v.abs()).sum::<f64>() > 0.1)
}

fn params() -> impl Strategy<Value = QLCTParams<f64>> {
    (0.2f64..1.4, 0.5f64..2.0, prop::bool::ANY).prop_map(|(th, b, neg)| {
        let b = if neg { -b } else { b };
        QLCTParams::new(LCTParams::fractional(th), LCTParams::new(1.0, b, 0.0, 1.0).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn am_gm_step_is_exact(la in -6.0f64..6.0, lb in -6.0f64..6.0, s in 0.05f64..4.0) {
        let r = am_gm(la.exp(), lb.exp(), s);
        prop_assert!(r.rel_err <= 1e-10);
        prop_assert!(r.is_local_min);
    }

    #[test]
    fn report_identities(c in coeffs(), p in params()) {
        let (f, phi) = (smooth(10, c), window(10));
        for r in [
            heisenberg_check(&f, &phi, &p, 1.0).unwrap(),
            log_check(&f, &phi, &p).unwrap(),
            lieb_check(&f, &phi, &p, 1.7).unwrap(),
            young_sup_check(&f, &phi, &p, 2.0).unwrap(),
        ] {
            prop_assert!((r.margin - r.direction.margin(r.lhs, r.rhs)).abs() <= 1e-12);
            prop_assert!((r.ratio * r.rhs - r.lhs).abs() <= 1e-12 * r.lhs.abs().max(1.0));
        }
    }

    #[test]
    fn young_holds(c in coeffs(), p in params(), hp in 1.0f64..6.0) {
        let r = young_sup_check(&smooth(10, c), &window(10), &p, hp).unwrap();
        prop_assert!(r.margin >= -1e-6, "{:?}", r);
    }

    #[test]
    fn lieb_constant_is_homogeneous(c in coeffs(), alpha in 0.1f64..10.0, beta in 0.1f64..10.0, pp in 1.05f64..2.0) {
        let (f, phi) = (smooth(8, c), window(8));
        let p = QLCTParams::fourier();
        let a = lieb_check(&f, &phi, &p, pp).unwrap();
        let b = lieb_check(&f.scaled(alpha), &phi.scaled(beta), &p, pp).unwrap();
        prop_assert!((a.empirical_constant - b.empirical_constant).abs() <= 1e-10 * a.empirical_constant);
    }

    #[test]
    fn concentration_margins_hold(c in coeffs(), seed in 0u64..1000, m in 0.05f64..0.95, eps in 0.05f64..0.6) {
        let (f, phi) = (smooth(10, c), window(10));
        let g = gabor_analyze(&f, &phi, &QLCTParams::fourier(), AnalyzeOptions::default()).unwrap();
        let cell = RegionMask::empty(&g).cell_volume();
        let k = ((m / cell).round() as usize).max(1);
        prop_assume!((k as f64) * cell < 1.0);
        let mask = RegionMask::random(&g, k as f64 * cell, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(concentration_check(&g, &mask, 1.0, 1.0).unwrap().margin >= -1e-6);
        let greedy = RegionMask::greedy_capture(&g, 1.0 - eps).unwrap();
        prop_assert!(epsilon_concentration_check(&g, &greedy, eps).unwrap().margin >= -1e-6);
    }
}
