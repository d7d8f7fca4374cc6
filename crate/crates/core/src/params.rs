//! Parameter vectors `a_0..a_m`, `b_0..b_m` (with `b_0 = 0`), derived
//! exponents and the parameter transforms used by the period formulas.

use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{is_near_integer, real, Real};
use crate::special::unit_circle_exp;

const MAX_SAMPLING_ATTEMPTS: usize = 10_000;

/// Which non-integrality constraint a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `a_i - b_j` is an integer.
    UpperLower,
    /// `b_i - b_j` is an integer (`i < j`).
    LowerLower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::UpperLower => write!(f, "a_{} - b_{} is an integer", self.i, self.j),
            ViolationKind::LowerLower => write!(f, "b_{} - b_{} is an integer", self.i, self.j),
        }
    }
}

/// Sign selecting the `+` or `-` shifted parameter vectors of the quadratic
/// relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply<T: Real>(self, z: Complex<T>) -> Complex<T> {
        match self {
            Sign::Plus => z,
            Sign::Minus => -z,
        }
    }
}

/// Upper and lower parameter vectors of one hypergeometric series.
pub type SeriesParameters<T> = (Vec<Complex<T>>, Vec<Complex<T>>);

/// Complex parameters `a = (a_0, ..., a_m)` and `b = (b_0, ..., b_m)` with
/// `b_0 = 0`. Subscripts are cyclic modulo `m + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet<T> {
    a: Vec<Complex<T>>,
    b: Vec<Complex<T>>,
}

/// Exponents of the multi-valued integrand and their unit-circle images.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentSet<T> {
    /// `λ_j = a_j - b_{j+1}`
    pub lambda: Vec<Complex<T>>,
    /// `μ_j = b_j - a_j`
    pub mu: Vec<Complex<T>>,
    /// `α_j = e^{2πi a_j}`
    pub alpha: Vec<Complex<T>>,
    /// `β_j = e^{2πi b_j}`
    pub beta: Vec<Complex<T>>,
}

impl<T: Real> ParameterSet<T> {
    /// Builds a parameter set from full vectors; `b[0]` must be exactly zero.
    pub fn new(a: Vec<Complex<T>>, b: Vec<Complex<T>>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "need m >= 1, i.e. at least two upper parameters (got {})",
                a.len()
            )));
        }
        if a.len() != b.len() {
            return Err(Error::InvalidArgument(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        if b[0] != Complex::new(T::zero(), T::zero()) {
            return Err(Error::InvalidArgument("b_0 must be 0".into()));
        }
        if a.iter()
            .chain(&b)
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidArgument("parameters must be finite".into()));
        }
        Ok(Self { a, b })
    }

    /// Builds a parameter set from `a_0..a_m` and `b_1..b_m`.
    pub fn from_lower(a: Vec<Complex<T>>, lower: Vec<Complex<T>>) -> Result<Self> {
        let mut b = Vec::with_capacity(lower.len() + 1);
        b.push(Complex::new(T::zero(), T::zero()));
        b.extend(lower);
        Self::new(a, b)
    }

    pub fn m(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self) -> &[Complex<T>] {
        &self.a
    }

    pub fn b(&self) -> &[Complex<T>] {
        &self.b
    }

    /// `a_j` with `j` taken modulo `m + 1`.
    pub fn a_at(&self, j: usize) -> Complex<T> {
        self.a[j % self.a.len()]
    }

    /// `b_j` with `j` taken modulo `m + 1`.
    pub fn b_at(&self, j: usize) -> Complex<T> {
        self.b[j % self.b.len()]
    }

    /// Lists every pair breaking `a_i - b_j ∉ ℤ` or `b_i - b_j ∉ ℤ` at
    /// integer-proximity tolerance `delta`.
    pub fn validate(&self, delta: T) -> Vec<Violation> {
        let n = self.a.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if is_near_integer(self.a[i] - self.b[j], delta) {
                    out.push(Violation {
                        kind: ViolationKind::UpperLower,
                        i,
                        j,
                    });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if is_near_integer(self.b[i] - self.b[j], delta) {
                    out.push(Violation {
                        kind: ViolationKind::LowerLower,
                        i,
                        j,
                    });
                }
            }
        }
        out
    }

    /// Errors with [`Error::Condition`] unless [`validate`](Self::validate)
    /// is empty.
    pub fn require_generic(&self, delta: T) -> Result<()> {
        let v = self.validate(delta);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Condition(v))
        }
    }

    pub fn exponents(&self) -> ExponentSet<T> {
        let n = self.a.len();
        ExponentSet {
            lambda: (0..n).map(|j| self.a[j] - self.b_at(j + 1)).collect(),
            mu: (0..n).map(|j| self.b[j] - self.a[j]).collect(),
            alpha: self.a.iter().map(|&z| unit_circle_exp(z)).collect(),
            beta: self.b.iter().map(|&z| unit_circle_exp(z)).collect(),
        }
    }

    /// Parameters of `u^{-1}`: every `a_j` and `b_j` negated.
    pub fn negate(&self) -> Self {
        Self {
            a: self.a.iter().map(|&z| -z).collect(),
            b: self
                .b
                .iter()
                .enumerate()
                .map(|(j, &z)| if j == 0 { z } else { -z })
                .collect(),
        }
    }

    /// Series parameters of the solution `f_r` around `x = 0`.
    ///
    /// `r = 0` gives `(a_1, ..., a_m, a_0; b_1, ..., b_m)`. For `r >= 1` the
    /// upper entries are `a_j - b_r + 1` and the lower ones `b_j - b_r + 1`,
    /// with `2 - b_r` in slot `r`.
    pub fn solution_parameters(&self, r: usize) -> Result<SeriesParameters<T>> {
        let m = self.m();
        if r > m {
            return Err(Error::InvalidArgument(format!(
                "solution index {r} > m = {m}"
            )));
        }
        let one = T::one();
        if r == 0 {
            let upper = (1..=m + 1).map(|j| self.a_at(j)).collect();
            let lower = self.b[1..].to_vec();
            return Ok((upper, lower));
        }
        let br = self.b[r];
        let upper = self.a.iter().map(|&aj| aj - br + one).collect();
        let lower = (1..=m)
            .map(|j| {
                if j == r {
                    real(T::lit(2.0)) - br
                } else {
                    self.b[j] - br + one
                }
            })
            .collect();
        Ok((upper, lower))
    }

    /// The shifted vectors `1 ± (a_1 - b_r, ..., a_{m+1} - b_r)` and
    /// `1 ± (b_1 - b_r, ..., ±1 - b_r, ..., b_m - b_r)` of the quadratic
    /// relation, `1 <= r <= m`.
    pub fn corollary_parameters(&self, r: usize, sign: Sign) -> Result<SeriesParameters<T>> {
        let m = self.m();
        if r == 0 || r > m {
            return Err(Error::InvalidArgument(format!(
                "corollary index must lie in 1..={m}, got {r}"
            )));
        }
        let one = real(T::one());
        let br = self.b[r];
        let upper = (1..=m + 1)
            .map(|j| one + sign.apply(self.a_at(j) - br))
            .collect();
        let lower = (1..=m)
            .map(|j| {
                let entry = if j == r { sign.apply(one) } else { self.b[j] };
                one + sign.apply(entry - br)
            })
            .collect();
        Ok((upper, lower))
    }

    /// Deterministic generic parameters: real parts from `(-1, 1)`,
    /// imaginary parts from `(-0.3, 0.3)`, redrawn until the non-integrality
    /// condition holds and additionally `a_i - a_j ∉ ℤ`.
    pub fn random_generic(m: usize, seed: u64, delta: T) -> Result<Self> {
        Self::random_generic_where(m, seed, delta, |_| true)
    }

    /// As [`random_generic`](Self::random_generic), also redrawing until
    /// `accept` holds.
    pub fn random_generic_where<F>(m: usize, seed: u64, delta: T, accept: F) -> Result<Self>
    where
        F: Fn(&Self) -> bool,
    {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-0.3..0.3);
            Complex::new(T::lit(re), T::lit(im))
        };
        for _ in 0..MAX_SAMPLING_ATTEMPTS {
            let a: Vec<_> = (0..=m).map(|_| draw(&mut rng)).collect();
            let lower: Vec<_> = (0..m).map(|_| draw(&mut rng)).collect();
            let p = Self::from_lower(a, lower)?;
            if p.validate(delta).is_empty() && p.upper_differences_generic(delta) && accept(&p) {
                return Ok(p);
            }
        }
        Err(Error::Exhaustion {
            attempts: MAX_SAMPLING_ATTEMPTS,
        })
    }

    /// `a_i - a_j ∉ ℤ` for all `i < j`.
    pub fn upper_differences_generic(&self, delta: T) -> bool {
        let n = self.a.len();
        (0..n).all(|i| (i + 1..n).all(|j| !is_near_integer(self.a[i] - self.a[j], delta)))
    }
}

/// JSON form of a parameter set plus an optional evaluation point:
/// `{"m": int, "a": [[re, im], ...], "b": [[re, im], ...], "x": [re, im]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterDocument {
    pub m: usize,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<[f64; 2]>,
}

impl ParameterDocument {
    pub fn from_parameters<T: Real>(p: &ParameterSet<T>, x: Option<Complex<T>>) -> Self {
        let pair = |z: &Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
        Self {
            m: p.m(),
            a: p.a().iter().map(pair).collect(),
            b: p.b().iter().map(pair).collect(),
            x: x.as_ref().map(pair),
        }
    }

    pub fn parameters<T: Real>(&self) -> Result<ParameterSet<T>> {
        if self.a.len() != self.m + 1 || self.b.len() != self.m + 1 {
            return Err(Error::InvalidArgument(format!(
                "m = {} needs {} entries in a and b (got {} and {})",
                self.m,
                self.m + 1,
                self.a.len(),
                self.b.len()
            )));
        }
        let conv = |v: &[[f64; 2]]| {
            v.iter()
                .map(|&[re, im]| Complex::new(T::lit(re), T::lit(im)))
                .collect::<Vec<_>>()
        };
        ParameterSet::new(conv(&self.a), conv(&self.b))
    }

    pub fn point<T: Real>(&self) -> Option<Complex<T>> {
        self.x.map(|[re, im]| Complex::new(T::lit(re), T::lit(im)))
    }
}
