use num_complex::Complex64;
use thiserror::Error;

use crate::params::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at argument {argument}")]
    Pole { argument: Complex64 },

    #[error("gamma function overflows at argument {argument} (log magnitude {log_magnitude})")]
    Overflow {
        argument: Complex64,
        log_magnitude: f64,
    },

    #[error("lower parameter {index} = {value} is a nonpositive integer")]
    LowerParameterPole { index: usize, value: Complex64 },

    #[error("series did not reach tolerance within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("multi-valued factor needs real x in (0, 1), got {x}")]
    Branch { x: Complex64 },

    #[error("degenerate parameters: {factor} = {value} vanishes")]
    Degenerate { factor: String, value: Complex64 },

    #[error("subset enumeration limited to m <= {max}, got m = {m}")]
    Size { m: usize, max: usize },

    #[error("no generic parameter set found after {attempts} attempts")]
    Exhaustion { attempts: usize },

    #[error("cube quadrature supports dimension 1..={max}, got {m}")]
    Dimension { m: usize, max: usize },

    #[error("integrand is not integrable: {0}")]
    Integrability(String),

    #[error("parameters out of range for the quadrature path: {0}")]
    ParameterRange(String),

    #[error("parameters violate the non-integrality condition: {}", format_violations(.0))]
    Condition(Vec<Violation>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}
