//! Uncertainty inequalities for the quaternion Gabor field, each evaluated
//! numerically into an [`InequalityReport`].

mod checks;
mod mask;
mod report;

pub use checks::{
    am_gm, concentration_check, epsilon_concentration_check, hausdorff_young_check, heisenberg_check,
    lemma_log_identity_check, lieb_check, log_check, log_constant_d, moment, moment_concentration_check,
    young_sup_check, AmGm, MomentKind, EULER_GAMMA,
};
pub use mask::RegionMask;
pub use report::{ratio_of, Direction, InequalityReport};
