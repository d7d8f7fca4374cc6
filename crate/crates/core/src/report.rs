use num_complex::Complex;
use serde::Serialize;

use crate::scalar::{relative_residual, Real};

/// Identity checked by a [`VerificationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Identity {
    #[serde(rename = "tpr_00")]
    Tpr00,
    #[serde(rename = "corollary_52")]
    Quadratic,
    #[serde(rename = "euler_integral")]
    EulerIntegral,
    #[serde(rename = "beta_product")]
    BetaProduct,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::Tpr00 => "tpr_00",
            Identity::Quadratic => "corollary_52",
            Identity::EulerIntegral => "euler_integral",
            Identity::BetaProduct => "beta_product",
        }
    }

    /// Relative-residual threshold a double-precision run must meet.
    pub fn default_threshold(self, m: usize) -> f64 {
        match self {
            Identity::Tpr00 => 1e-8,
            Identity::Quadratic => 1e-9,
            Identity::EulerIntegral if m <= 2 => 1e-6,
            Identity::EulerIntegral => 1e-5,
            Identity::BetaProduct => 1e-7,
        }
    }
}

/// Both sides of one identity evaluation and the verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport<T> {
    pub identity: Identity,
    pub m: usize,
    pub x: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    pub abs_residual: T,
    pub rel_residual: T,
    pub tol: T,
    pub pass: bool,
}

impl<T: Real> VerificationReport<T> {
    /// Builds a report judged against the identity's default threshold.
    pub fn new(identity: Identity, m: usize, x: T, lhs: Complex<T>, rhs: Complex<T>) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let rel_residual = relative_residual(lhs, rhs);
        let mut r = Self {
            identity,
            m,
            x,
            seed: None,
            n: None,
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            tol: T::zero(),
            pass: false,
        };
        r.judge(T::lit(identity.default_threshold(m)));
        r
    }

    /// Re-judges the report against `tol`.
    pub fn judge(&mut self, tol: T) {
        self.tol = tol;
        self.pass = self.rel_residual <= tol;
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn residual_bookkeeping() {
        let r = VerificationReport::new(
            Identity::Tpr00,
            2,
            0.1,
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0 + 1e-9, 0.0),
        );
        assert!(r.pass);
        assert_eq!(r.tol, 1e-8);
        assert!((r.rel_residual - 1e-9).abs() < 1e-15);

        let mut strict = r.clone();
        strict.judge(1e-10);
        assert!(!strict.pass);
    }

    #[test]
    fn zero_sides_do_not_divide_by_zero() {
        let z = Complex64::new(0.0, 0.0);
        let r = VerificationReport::new(Identity::BetaProduct, 1, 0.0, z, z);
        assert_eq!(r.rel_residual, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn thresholds() {
        assert_eq!(Identity::EulerIntegral.default_threshold(2), 1e-6);
        assert_eq!(Identity::EulerIntegral.default_threshold(3), 1e-5);
        assert_eq!(Identity::Quadratic.default_threshold(4), 1e-9);
    }
}
