use proptest::prelude::*;
use qlct_core::lct1d::LCTParams;
use qlct_core::qlct2d::{qlct_forward, qlct_forward_direct, qlct_forward_fast, qlct_inverse, Method, QLCTParams};
use qlct_core::signal::{Grid2D, QSignal2D};
use qlct_core::Quaternion;

fn matrix() -> impl Strategy<Value = LCTParams<f64>> {
    (0.3f64..2.0, prop::bool::ANY, 0.3f64..3.0, prop::bool::ANY, -2.0f64..2.0).prop_map(|(a, sa, b, sb, c)| {
        let a = if sa { a } else { -a };
        let b = if sb { b } else { -b };
        LCTParams::new(a, b, c, (1.0 + b * c) / a).unwrap()
    })
}

fn params() -> impl Strategy<Value = QLCTParams<f64>> {
    (matrix(), matrix()).prop_map(|(a1, a2)| QLCTParams::new(a1, a2).unwrap())
}

fn signal(n1: usize, n2: usize) -> impl Strategy<Value = QSignal2D<f64>> {
    prop::collection::vec(prop::array::uniform4(-1.0f64..1.0), n1 * n2).prop_map(move |v| {
        let g = Grid2D::centered(n1, n2, 0.5, 0.7).unwrap();
        QSignal2D::new(g, v.into_iter().map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fast_matches_direct(f in signal(6, 5), p in params()) {
        let a = qlct_forward_fast(&f, &p).unwrap();
        let b = qlct_forward_direct(&f, &p).unwrap();
        prop_assert!(a.max_abs_diff(&b) <= 1e-9);
    }

    #[test]
    fn discrete_plancherel_and_round_trip(f in signal(8, 6), p in params()) {
        let big = qlct_forward(&f, &p, Method::Fast).unwrap();
        prop_assert!((big.norm_sqr() / f.norm_sqr() - 1.0).abs() <= 1e-10);
        let back = qlct_inverse(&big, &p, f.grid(), Method::Fast).unwrap();
        prop_assert!(back.rel_l2_error(&f) <= 1e-10);
    }

    #[test]
    fn additive_and_real_homogeneous(f in signal(5, 5), g in signal(5, 5), s in -3.0f64..3.0, p in params()) {
        let sum = f.zip_with(&g, |a, b| a + b).unwrap();
        let lhs = qlct_forward(&sum.scaled(s), &p, Method::Fast).unwrap();
        let (ff, gg) = (qlct_forward(&f, &p, Method::Fast).unwrap(), qlct_forward(&g, &p, Method::Fast).unwrap());
        let rhs = ff.zip_with(&gg, |a, b| (a + b) * s).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-11);
    }
}
