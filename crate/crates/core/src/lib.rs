//! Generalized hypergeometric series `m+1Fm`, intersection numbers of twisted
//! (co)cycles on the associated local system, and numerical checks of the
//! twisted period relation.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the scalar to `f64`.

pub mod error;
pub mod intersection;
pub mod params;
pub mod periods;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use intersection::{
    cohomology_matrix, cohomology_pairing, det_c_closed_form, epsilon, homology_factors,
    homology_matrix, homology_self, subset_sum_oracle, CocycleRef, CohomologyBasis, Family,
    HomologyFactors, IntersectionMatrix, MatrixKind,
};
pub use params::{ExponentSet, ParameterDocument, ParameterSet, Sign, Violation, ViolationKind};
pub use periods::{
    corollary_residual, dual_period_entry, gamma_prefactor, period_entry, period_row,
    tpr_residual_00, tpr_rhs_00, x_max, PeriodRow,
};
pub use quadrature::{beta_product_check, cube_integral, euler_integral_check, CubeIntegrand};
pub use report::{Identity, VerificationReport};
pub use scalar::{relative_residual, Real, DEFAULT_DELTA};
pub use series::{fundamental_solution, ghf, ghf_with, SeriesOptions, SeriesValue};
pub use special::{gamma, log_gamma, pochhammer};

pub use num_complex::Complex64;

pub type Params = ParameterSet<f64>;
pub type Params32 = ParameterSet<f32>;
pub type Matrix = IntersectionMatrix<f64>;
pub type Matrix32 = IntersectionMatrix<f32>;
pub type Report = VerificationReport<f64>;
pub type Report32 = VerificationReport<f32>;
pub type Row = PeriodRow<f64>;
pub type Series = SeriesValue<f64>;
pub type Integrand = CubeIntegrand<f64>;
