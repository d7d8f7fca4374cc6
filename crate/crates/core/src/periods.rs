//! Closed-form period integrals of `φ_0` over the cycles `Δ_0, ..., Δ_m`,
//! their duals, and the checks built on top of them.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intersection::{cohomology_pairing, homology_self, CocycleRef};
use crate::params::{ParameterSet, Sign};
use crate::report::{Identity, VerificationReport};
use crate::scalar::{default_delta, real, to_c64, Real};
use crate::series::{fundamental_solution, ghf};
use crate::special::{log_gamma, unit_circle_exp};

/// Largest admissible evaluation point for `m` variables: `(1/3)(3/4)^{m-1}`.
pub fn x_max<T: Real>(m: usize) -> T {
    T::lit(1.0 / 3.0) * T::lit(0.75).powi(m.saturating_sub(1) as i32)
}

/// Period values for one fixed `x`, indexed by cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodRow<T> {
    pub entries: Vec<Complex<T>>,
    /// `true` for the row built from negated parameters.
    pub dual: bool,
    pub x: T,
    pub tail_bound: T,
}

fn check_point<T: Real>(m: usize, x: T) -> Result<()> {
    let hi = x_max::<T>(m);
    if x > T::zero() && x <= hi {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "x = {x} outside (0, {hi}] for m = {m}"
        )))
    }
}

/// Γ-factor (with phase) multiplying `f_k` in `∫_{Δ_k} u φ_0`.
pub fn gamma_prefactor<T: Real>(k: usize, p: &ParameterSet<T>) -> Result<Complex<T>> {
    p.require_generic(default_delta())?;
    let m = p.m();
    if k > m {
        return Err(Error::InvalidArgument(format!("cycle index {k} > m = {m}")));
    }
    let (a, b) = (p.a(), p.b());
    let one = real(T::one());
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut phase = one;
    if k == 0 {
        for i in 1..=m {
            num.push(a[i]);
            num.push(b[i] - a[i]);
            den.push(b[i]);
        }
    } else {
        let r = k;
        phase = unit_circle_exp(-(b[r] - a[r] - one) * T::lit(0.5));
        num.push(b[r] - one);
        num.push(one - a[0]);
        den.push(b[r] - a[0]);
        for j in (1..=m).filter(|&j| j != r) {
            num.push(a[j] - b[r] + one);
            num.push(b[j] - a[j]);
            den.push(b[j] - b[r] + one);
        }
    }
    let mut log = real(T::zero());
    for z in num {
        log = log + log_gamma(z)?;
    }
    for z in den {
        log = log - log_gamma(z)?;
    }
    Ok(phase * log.exp())
}

fn entry_with_tail<T: Real>(
    k: usize,
    p: &ParameterSet<T>,
    x: T,
    tol: T,
) -> Result<(Complex<T>, T)> {
    check_point(p.m(), x)?;
    let g = gamma_prefactor(k, p)?;
    let f = fundamental_solution(k, p, real(x), tol)?;
    Ok((g * f.value, g.norm() * f.tail_bound))
}

/// `∫_{Δ_k} u φ_0` at `x`.
pub fn period_entry<T: Real>(k: usize, p: &ParameterSet<T>, x: T, tol: T) -> Result<Complex<T>> {
    entry_with_tail(k, p, x, tol).map(|(v, _)| v)
}

/// `∫_{Δ_k^∨} u^{-1} φ_0` at `x`, i.e. [`period_entry`] with negated parameters.
pub fn dual_period_entry<T: Real>(
    k: usize,
    p: &ParameterSet<T>,
    x: T,
    tol: T,
) -> Result<Complex<T>> {
    period_entry(k, &p.negate(), x, tol)
}

/// All `m + 1` entries of the `φ_0` row, or of its dual.
pub fn period_row<T: Real>(p: &ParameterSet<T>, x: T, tol: T, dual: bool) -> Result<PeriodRow<T>> {
    let q = if dual { p.negate() } else { p.clone() };
    let mut entries = Vec::with_capacity(q.m() + 1);
    let mut tail_bound = T::zero();
    for k in 0..=q.m() {
        let (v, t) = entry_with_tail(k, &q, x, tol)?;
        entries.push(v);
        tail_bound = tail_bound.max(t);
    }
    Ok(PeriodRow {
        entries,
        dual,
        x,
        tail_bound,
    })
}

/// Right side of the period relation at entry `(0, 0)`:
/// `Σ_k ∫_{Δ_k} uφ_0 · ∫_{Δ_k^∨} u^{-1}φ_0 / I_h(Δ_k, Δ_k^∨)`.
pub fn tpr_rhs_00<T: Real>(p: &ParameterSet<T>, x: T, tol: T) -> Result<Complex<T>> {
    p.require_generic(default_delta())?;
    let primal = period_row(p, x, tol, false)?;
    let dual = period_row(p, x, tol, true)?;
    let mut sum = real(T::zero());
    for k in 0..=p.m() {
        sum = sum + primal.entries[k] * dual.entries[k] / homology_self(k, p)?;
    }
    Ok(sum)
}

/// `I_c(φ_0, φ_0)` against [`tpr_rhs_00`].
pub fn tpr_residual_00<T: Real>(
    p: &ParameterSet<T>,
    x: T,
    tol: T,
) -> Result<VerificationReport<T>> {
    let lhs = cohomology_pairing(CocycleRef::phi(0), CocycleRef::phi(0), p)?;
    let rhs = tpr_rhs_00(p, x, tol)?;
    Ok(VerificationReport::new(Identity::Tpr00, p.m(), x, lhs, rhs))
}

/// Quadratic relation between `F(a;b;x)`, `F(-a;-b;x)` and the shifted
/// pairs `F(1 ± (a - b_r); 1 ± (b - b_r); x)` implied by the `(0, 0)` period
/// relation.
pub fn corollary_residual<T: Real>(
    p: &ParameterSet<T>,
    x: T,
    tol: T,
) -> Result<VerificationReport<T>> {
    p.require_generic(default_delta())?;
    let m = p.m();
    check_point(m, x)?;
    let (a, b) = (p.a(), p.b());
    let one = real(T::one());
    let delta = default_delta::<T>();
    for r in 1..=m {
        for (label, v) in [("b", b[r]), ("b - 1", b[r] - one), ("b + 1", b[r] + one)] {
            if v.norm() < delta {
                return Err(Error::Degenerate {
                    factor: format!("{label} at index {r}"),
                    value: to_c64(v),
                });
            }
        }
    }
    let xc = real(x);

    let mut lhs = one;
    for l in 1..=m {
        lhs = lhs * (b[l] - b[0]) / (a[l] - b[0]);
    }

    let (up, lo) = p.solution_parameters(0)?;
    let (nup, nlo) = p.negate().solution_parameters(0)?;
    let mut rhs = one;
    for l in 1..=m {
        rhs = rhs * b[l] / a[l];
    }
    rhs = rhs * ghf(&up, &lo, xc, tol)?.value * ghf(&nup, &nlo, xc, tol)?.value;

    for r in 1..=m {
        let br = b[r];
        let mut coeff = xc * xc * a[0] * (a[0] - br) * (br - a[r]) / (br * (br * br - one));
        for l in (1..=m).filter(|&l| l != r) {
            coeff = coeff * (a[l] - br) / (b[l] - br);
        }
        let (pu, pl) = p.corollary_parameters(r, Sign::Plus)?;
        let (mu, ml) = p.corollary_parameters(r, Sign::Minus)?;
        rhs = rhs + coeff * ghf(&pu, &pl, xc, tol)?.value * ghf(&mu, &ml, xc, tol)?.value;
    }
    Ok(VerificationReport::new(Identity::Quadratic, m, x, lhs, rhs))
}
