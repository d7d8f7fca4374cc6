//! Truncated evaluation of `pFq` sums with a rigorous tail bound, and the
//! fundamental solution system `f_0, ..., f_m` around `x = 0`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::{default_delta, is_near_nonpositive_integer, real, to_c64, Real};

/// Default absolute tolerance on the discarded tail.
pub const DEFAULT_TOL: f64 = 1e-14;
/// Default cap on the number of summed terms.
pub const DEFAULT_MAX_TERMS: usize = 100_000;
/// Largest `|x|` accepted by the series evaluator.
pub const MAX_ABS_X: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    pub terms_used: usize,
    /// Absolute bound on the sum of the discarded terms.
    pub tail_bound: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions<T> {
    pub tol: T,
    pub max_terms: usize,
    pub delta: T,
}

impl<T: Real> Default for SeriesOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(DEFAULT_TOL),
            max_terms: DEFAULT_MAX_TERMS,
            delta: default_delta(),
        }
    }
}

impl<T: Real> SeriesOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// `Σ_n Π(upper_i, n) / (Π(lower_j, n) n!) xⁿ` to absolute tail tolerance `tol`.
pub fn ghf<T: Real>(
    upper: &[Complex<T>],
    lower: &[Complex<T>],
    x: Complex<T>,
    tol: T,
) -> Result<SeriesValue<T>> {
    ghf_with(upper, lower, x, &SeriesOptions::with_tol(tol))
}

pub fn ghf_with<T: Real>(
    upper: &[Complex<T>],
    lower: &[Complex<T>],
    x: Complex<T>,
    opts: &SeriesOptions<T>,
) -> Result<SeriesValue<T>> {
    check_series_args(upper, lower, opts.delta)?;
    if x.norm() > T::lit(MAX_ABS_X) {
        return Err(Error::InvalidArgument(format!(
            "|x| = {} exceeds {MAX_ABS_X}",
            x.norm()
        )));
    }
    if !(opts.tol > T::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }

    let one = T::one();
    let zero = real(T::zero());
    if x == zero {
        return Ok(SeriesValue {
            value: real(one),
            terms_used: 1,
            tail_bound: T::zero(),
        });
    }

    let max_upper = upper.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    let max_lower = lower.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    let x_abs = x.norm();
    let (p, q) = (upper.len() as i32, lower.len() as i32);

    let mut term = real(one);
    let mut sum = term;
    let mut n = 0usize;
    loop {
        // `term` is t_n and already summed.
        let nf = T::count(n);
        let mut ratio_num = x;
        let mut terminated = false;
        for &a in upper {
            let f = a + nf;
            if f == zero {
                terminated = true;
            }
            ratio_num = ratio_num * f;
        }
        if terminated {
            return Ok(SeriesValue {
                value: sum,
                terms_used: n + 1,
                tail_bound: T::zero(),
            });
        }

        if n >= 1 && nf > max_lower + max_lower {
            let rho = x_abs * (one + max_upper / nf).powi(p) / (one - max_lower / nf).powi(q);
            if rho < one {
                let tail = term.norm() * rho / (one - rho);
                if tail <= opts.tol {
                    return Ok(SeriesValue {
                        value: sum,
                        terms_used: n + 1,
                        tail_bound: tail,
                    });
                }
            }
        }

        if n + 1 >= opts.max_terms {
            return Err(Error::NonConvergence {
                terms: opts.max_terms,
            });
        }
        let mut ratio_den = real(T::count(n + 1));
        for &b in lower {
            ratio_den = ratio_den * (b + nf);
        }
        term = term * ratio_num / ratio_den;
        sum = sum + term;
        n += 1;
    }
}

fn check_series_args<T: Real>(upper: &[Complex<T>], lower: &[Complex<T>], delta: T) -> Result<()> {
    if upper.len() > lower.len() + 1 {
        return Err(Error::InvalidArgument(format!(
            "{}F{} diverges for x != 0",
            upper.len(),
            lower.len()
        )));
    }
    for (index, &b) in lower.iter().enumerate() {
        if is_near_nonpositive_integer(b, delta) {
            return Err(Error::LowerParameterPole {
                index,
                value: to_c64(b),
            });
        }
    }
    Ok(())
}

/// Taylor coefficients `c_0..c_{count-1}` of the series, generated by the
/// same term-ratio recurrence as [`ghf`].
pub fn coefficients<T: Real>(
    upper: &[Complex<T>],
    lower: &[Complex<T>],
    count: usize,
) -> Result<Vec<Complex<T>>> {
    check_series_args(upper, lower, default_delta())?;
    let mut out = Vec::with_capacity(count);
    let mut c = real(T::one());
    for n in 0..count {
        out.push(c);
        let nf = T::count(n);
        let num = upper.iter().fold(real(T::one()), |acc, &a| acc * (a + nf));
        let den = lower
            .iter()
            .fold(real(T::count(n + 1)), |acc, &b| acc * (b + nf));
        c = c * num / den;
    }
    Ok(out)
}

/// Exponent `s_k` with `f_k = x^{s_k} · (power series)`: `0` for `k = 0`,
/// `1 - b_k` otherwise.
pub fn leading_exponent<T: Real>(k: usize, p: &ParameterSet<T>) -> Complex<T> {
    if k == 0 {
        real(T::zero())
    } else {
        real(T::one()) - p.b()[k]
    }
}

/// `f_k(x)`: `k = 0` is the plain series, `k = r >= 1` carries the factor
/// `x^{1 - b_r}` on the principal branch and needs real `x` in `(0, 1)`.
pub fn fundamental_solution<T: Real>(
    k: usize,
    p: &ParameterSet<T>,
    x: Complex<T>,
    tol: T,
) -> Result<SeriesValue<T>> {
    p.require_generic(default_delta())?;
    let (upper, lower) = p.solution_parameters(k)?;
    if k == 0 {
        return ghf(&upper, &lower, x, tol);
    }
    if x.im != T::zero() || !(x.re > T::zero() && x.re < T::one()) {
        return Err(Error::Branch { x: to_c64(x) });
    }
    let s = ghf(&upper, &lower, x, tol)?;
    let factor = (leading_exponent(k, p) * x.re.ln()).exp();
    Ok(SeriesValue {
        value: factor * s.value,
        terms_used: s.terms_used,
        tail_bound: factor.norm() * s.tail_bound,
    })
}

/// Termwise residuals of `θ Π_i(θ + b_i - 1) f = x Π_j(θ + a_j) f` on `f_k`
/// for the coefficients of `x^{s_k + n}`, `1 <= n <= n_max`, each relative to
/// the larger of its two sides.
pub fn ode_residuals<T: Real>(k: usize, p: &ParameterSet<T>, n_max: usize) -> Result<Vec<T>> {
    let (upper, lower) = p.solution_parameters(k)?;
    let coeffs = coefficients(&upper, &lower, n_max + 1)?;
    let s = leading_exponent(k, p);
    let one = real(T::one());
    let out = (1..=n_max)
        .map(|n| {
            let e = s + T::count(n);
            let left = p.b()[1..].iter().fold(e, |acc, &b| acc * (e + b - one)) * coeffs[n];
            let right = p
                .a()
                .iter()
                .fold(real(T::one()), |acc, &a| acc * (e - one + a))
                * coeffs[n - 1];
            crate::scalar::relative_residual(left, right)
        })
        .collect();
    Ok(out)
}
