//! Two-sided quaternion linear canonical transform (QLCT) on sampled 2D
//! grids together with its windowed (Gabor) variant. The `uncertainty` and
//! `suite` modules evaluate the associated uncertainty inequalities numerically.
//!
//! Everything is generic over the scalar through [`Real`]; the `*64`
//! aliases below fix it to `f64`.
//!
//! ```
//! use qlct_core::{qlct_forward, qlct_inverse, Grid2D64, Method, QLCTParams64, QSignal2D64, Quaternion64};
//!
//! let grid = Grid2D64::square(16, 0.6).unwrap();
//! let f = QSignal2D64::sample(grid, |a, b| Quaternion64::new(1.0, a, b, 0.0).scale((-(a * a + b * b)).exp())).unwrap();
//! let p = QLCTParams64::fourier();
//! let big = qlct_forward(&f, &p, Method::Fast).unwrap();
//! let back = qlct_inverse(&big, &p, f.grid(), Method::Fast).unwrap();
//! assert!(back.rel_l2_error(&f) < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gabor;
pub mod lct1d;
pub mod qlct2d;
pub mod quat;
pub mod scalar;
pub mod signal;
pub mod suite;
pub mod uncertainty;

pub use error::{Error, Result};
pub use gabor::{
    gabor_analyze, gabor_plancherel_check, gabor_synthesize, read_coefficients, spectrogram, write_coefficients,
    write_spectrogram_csv, write_spectrogram_pgm, AnalyzeOptions, GaborCoefficients, Spectrogram, SpectrogramSlice,
};
pub use lct1d::{lct_direct, lct_fast, KernelSign, LCTParams};
pub use qlct2d::{qlct_forward, qlct_inverse, qlct_plancherel_check, Method, QLCTParams, QlctOperator};
pub use quat::{Axis, ComplexPair, Quaternion};
pub use scalar::Real;
pub use signal::{Grid1D, Grid2D, QSignal2D, WindowSpec};
pub use suite::{run_suite, SuiteConfig, SuiteName, SuiteOutcome};
pub use uncertainty::{Direction, InequalityReport, RegionMask};

pub type Quaternion64 = Quaternion<f64>;
pub type Quaternion32 = Quaternion<f32>;
pub type Grid2D64 = Grid2D<f64>;
pub type QSignal2D64 = QSignal2D<f64>;
pub type QSignal2D32 = QSignal2D<f32>;
pub type LCTParams64 = LCTParams<f64>;
pub type QLCTParams64 = QLCTParams<f64>;
pub type GaborCoefficients64 = GaborCoefficients<f64>;
