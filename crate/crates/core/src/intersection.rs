//! Closed-form intersection numbers of the logarithmic cocycles `φ_k`, `ψ_k`
//! and of the twisted cycles `Δ_k`, with determinant formulas and the
//! subset-enumeration cross-check.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::{default_delta, real, to_c64, Real};
use crate::special::two_pi_i_pow;

/// Largest `m` accepted by [`subset_sum_oracle`] (`2^m` subsets).
pub const MAX_SUBSET_M: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Phi,
    Psi,
}

/// One of the cocycles `φ_k` or `ψ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CocycleRef {
    pub family: Family,
    pub index: usize,
}

impl CocycleRef {
    pub fn phi(index: usize) -> Self {
        Self {
            family: Family::Phi,
            index,
        }
    }

    pub fn psi(index: usize) -> Self {
        Self {
            family: Family::Psi,
            index,
        }
    }
}

/// Which basis pairing a cohomology matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomologyBasis {
    /// `I_c(φ_i, φ_j)`
    Phi,
    /// `I_c(ψ_i, ψ_j)`
    Psi,
    /// `I_c(φ_i, ψ_j)`
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    CohomologyPhi,
    CohomologyPsi,
    CohomologyMixed,
    Homology,
}

impl From<CohomologyBasis> for MatrixKind {
    fn from(b: CohomologyBasis) -> Self {
        match b {
            CohomologyBasis::Phi => MatrixKind::CohomologyPhi,
            CohomologyBasis::Psi => MatrixKind::CohomologyPsi,
            CohomologyBasis::Mixed => MatrixKind::CohomologyMixed,
        }
    }
}

/// Square `(m+1)×(m+1)` matrix of intersection numbers, stored by rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionMatrix<T> {
    pub kind: MatrixKind,
    pub entries: Vec<Vec<Complex<T>>>,
}

impl<T: Real> IntersectionMatrix<T> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[i][j]
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.size()).map(|i| self.entries[i][i]).collect()
    }

    /// `true` when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let zero = real(T::zero());
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &z)| i == j || z == zero))
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Complex<T> {
        determinant(&self.entries)
    }

    /// Inverse of a diagonal matrix as the entrywise reciprocal of its
    /// diagonal; `None` if the matrix is not diagonal or has a zero pivot.
    pub fn diagonal_inverse(&self) -> Option<Self> {
        if !self.is_diagonal() {
            return None;
        }
        let zero = real(T::zero());
        let n = self.size();
        let mut entries = vec![vec![zero; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            let d = self.entries[i][i];
            if d == zero {
                return None;
            }
            row[i] = d.inv();
        }
        Some(Self {
            kind: self.kind,
            entries,
        })
    }
}

/// Determinant of a square complex matrix by Gaussian elimination with
/// partial pivoting.
pub fn determinant<T: Real>(rows: &[Vec<Complex<T>>]) -> Complex<T> {
    let n = rows.len();
    let mut a: Vec<Vec<Complex<T>>> = rows.to_vec();
    let mut det = real(T::one());
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r][col]
                    .norm()
                    .partial_cmp(&a[s][col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if a[pivot][col] == real(T::zero()) {
            return real(T::zero());
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det = det * p;
        for r in col + 1..n {
            let factor = a[r][col] / p;
            if factor == real(T::zero()) {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - factor * v;
            }
        }
    }
    det
}

/// `-1` when `i ≠ j` and one of them is `0`, `+1` otherwise.
pub fn epsilon(i: usize, j: usize) -> i32 {
    if i != j && (i == 0 || j == 0) {
        -1
    } else {
        1
    }
}

fn check_index(k: usize, m: usize) -> Result<()> {
    if k > m {
        Err(Error::InvalidArgument(format!("index {k} > m = {m}")))
    } else {
        Ok(())
    }
}

fn nonzero<T: Real>(value: Complex<T>, factor: impl FnOnce() -> String) -> Result<Complex<T>> {
    if value.norm() < default_delta() {
        Err(Error::Degenerate {
            factor: factor(),
            value: to_c64(value),
        })
    } else {
        Ok(value)
    }
}

/// `Π_{l≠k} (b_l - b_k) / ((a_l - b_k)(b_l - a_l))`
fn phi_self_product<T: Real>(k: usize, p: &ParameterSet<T>) -> Result<Complex<T>> {
    let (a, b) = (p.a(), p.b());
    let mut acc = real(T::one());
    for l in (0..=p.m()).filter(|&l| l != k) {
        let d1 = nonzero(a[l] - b[k], || format!("a_{l} - b_{k}"))?;
        let d2 = nonzero(b[l] - a[l], || format!("b_{l} - a_{l}"))?;
        acc = acc * (b[l] - b[k]) / (d1 * d2);
    }
    Ok(acc)
}

/// `Π_{l≠k} (a_l - a_k) / ((b_l - a_k)(b_l - a_l))`
fn psi_self_product<T: Real>(k: usize, p: &ParameterSet<T>) -> Result<Complex<T>> {
    let (a, b) = (p.a(), p.b());
    let mut acc = real(T::one());
    for l in (0..=p.m()).filter(|&l| l != k) {
        let d1 = nonzero(b[l] - a[k], || format!("b_{l} - a_{k}"))?;
        let d2 = nonzero(b[l] - a[l], || format!("b_{l} - a_{l}"))?;
        acc = acc * (a[l] - a[k]) / (d1 * d2);
    }
    Ok(acc)
}

/// Cohomology intersection number `I_c(ci, cj)`.
pub fn cohomology_pairing<T: Real>(
    ci: CocycleRef,
    cj: CocycleRef,
    p: &ParameterSet<T>,
) -> Result<Complex<T>> {
    let m = p.m();
    check_index(ci.index, m)?;
    check_index(cj.index, m)?;
    p.require_generic(default_delta())?;
    let scale = two_pi_i_pow::<T>(m);
    match (ci.family, cj.family) {
        (Family::Phi, Family::Phi) | (Family::Psi, Family::Psi) if ci.index != cj.index => {
            Ok(real(T::zero()))
        }
        (Family::Phi, Family::Phi) => Ok(scale * phi_self_product(ci.index, p)?),
        (Family::Psi, Family::Psi) => Ok(scale * psi_self_product(ci.index, p)?),
        (Family::Phi, Family::Psi) => mixed_pairing(ci.index, cj.index, p),
        (Family::Psi, Family::Phi) => mixed_pairing(cj.index, ci.index, p),
    }
}

/// `I_c(φ_i, ψ_j) = ε_ij (2πi)^m (b_i - a_i)(b_j - a_j)/(b_i - a_j) Π_l 1/(b_l - a_l)`
fn mixed_pairing<T: Real>(i: usize, j: usize, p: &ParameterSet<T>) -> Result<Complex<T>> {
    let (a, b) = (p.a(), p.b());
    let mut acc = two_pi_i_pow::<T>(p.m()) * T::lit(f64::from(epsilon(i, j)));
    let d = nonzero(b[i] - a[j], || format!("b_{i} - a_{j}"))?;
    acc = acc * (b[i] - a[i]) * (b[j] - a[j]) / d;
    for l in 0..=p.m() {
        let d = nonzero(b[l] - a[l], || format!("b_{l} - a_{l}"))?;
        acc = acc / d;
    }
    Ok(acc)
}

/// Full cohomology intersection matrix in the requested basis.
pub fn cohomology_matrix<T: Real>(
    p: &ParameterSet<T>,
    basis: CohomologyBasis,
) -> Result<IntersectionMatrix<T>> {
    let n = p.m() + 1;
    let (left, right): (fn(usize) -> CocycleRef, fn(usize) -> CocycleRef) = match basis {
        CohomologyBasis::Phi => (CocycleRef::phi, CocycleRef::phi),
        CohomologyBasis::Psi => (CocycleRef::psi, CocycleRef::psi),
        CohomologyBasis::Mixed => (CocycleRef::phi, CocycleRef::psi),
    };
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| cohomology_pairing(left(i), right(j), p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntersectionMatrix {
        kind: basis.into(),
        entries,
    })
}

/// `(2πi)^{m(m+1)} Π_l (b_l - a_l)^{-m} Π_{i≠j} (b_i - b_j)/(a_i - b_j)`
pub fn det_c_closed_form<T: Real>(p: &ParameterSet<T>) -> Result<Complex<T>> {
    p.require_generic(default_delta())?;
    let m = p.m();
    let (a, b) = (p.a(), p.b());
    let mut acc = two_pi_i_pow::<T>(m * (m + 1));
    for l in 0..=m {
        let d = nonzero(b[l] - a[l], || format!("b_{l} - a_{l}"))?;
        acc = acc / d.powu(m as u32);
    }
    for i in 0..=m {
        for j in (0..=m).filter(|&j| j != i) {
            let d = nonzero(a[i] - b[j], || format!("a_{i} - b_{j}"))?;
            acc = acc * (b[i] - b[j]) / d;
        }
    }
    Ok(acc)
}

/// Labelled numerator and denominator factors of `I_h(Δ_k, Δ_k^∨)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyFactors<T> {
    pub numerators: Vec<Complex<T>>,
    pub denominators: Vec<(String, Complex<T>)>,
}

/// Factors of the homology self-intersection number of `Δ_k`.
pub fn homology_factors<T: Real>(k: usize, p: &ParameterSet<T>) -> Result<HomologyFactors<T>> {
    let m = p.m();
    check_index(k, m)?;
    let e = p.exponents();
    let (al, be) = (&e.alpha, &e.beta);
    let one = real(T::one());
    let mut numerators = Vec::new();
    let mut denominators = Vec::new();
    if k == 0 {
        for i in 1..=m {
            numerators.push(al[i] * (one - be[i]));
            denominators.push((format!("1 - alpha_{i}"), one - al[i]));
            denominators.push((format!("alpha_{i} - beta_{i}"), al[i] - be[i]));
        }
    } else {
        let r = k;
        for j in (1..=m).filter(|&j| j != r) {
            numerators.push(al[j] * (be[r] - be[j]));
            denominators.push((format!("beta_{r} - alpha_{j}"), be[r] - al[j]));
            denominators.push((format!("alpha_{j} - beta_{j}"), al[j] - be[j]));
        }
        numerators.push(al[0] - be[r]);
        denominators.push((format!("1 - beta_{r}"), one - be[r]));
        denominators.push(("alpha_0 - 1".to_string(), al[0] - one));
    }
    Ok(HomologyFactors {
        numerators,
        denominators,
    })
}

/// `I_h(Δ_k, Δ_k^∨)`; the cross terms `I_h(Δ_k, Δ_l^∨)`, `k ≠ l`, vanish.
pub fn homology_self<T: Real>(k: usize, p: &ParameterSet<T>) -> Result<Complex<T>> {
    let f = homology_factors(k, p)?;
    let mut acc = f.numerators.iter().fold(real(T::one()), |acc, &z| acc * z);
    for (label, d) in f.denominators {
        acc = acc / nonzero(d, || label)?;
    }
    Ok(acc)
}

pub fn homology_matrix<T: Real>(p: &ParameterSet<T>) -> Result<IntersectionMatrix<T>> {
    p.require_generic(default_delta())?;
    let n = p.m() + 1;
    let zero = real(T::zero());
    let mut entries = vec![vec![zero; n]; n];
    for (k, row) in entries.iter_mut().enumerate() {
        row[k] = homology_self(k, p)?;
    }
    Ok(IntersectionMatrix {
        kind: MatrixKind::Homology,
        entries,
    })
}

/// Explicit sum over all subsets `I` of `{0..m} \ {k}` of
/// `Π_{i∈I} 1/(b_i - a_i) · Π_{j∉I} 1/(a_j - b_k)`.
pub fn subset_sum_oracle<T: Real>(k: usize, p: &ParameterSet<T>) -> Result<Complex<T>> {
    let m = p.m();
    if m > MAX_SUBSET_M {
        return Err(Error::Size {
            m,
            max: MAX_SUBSET_M,
        });
    }
    check_index(k, m)?;
    p.require_generic(default_delta())?;
    let (a, b) = (p.a(), p.b());
    let others: Vec<usize> = (0..=m).filter(|&l| l != k).collect();
    let in_set: Vec<Complex<T>> = others.iter().map(|&l| (b[l] - a[l]).inv()).collect();
    let out_set: Vec<Complex<T>> = others.iter().map(|&l| (a[l] - b[k]).inv()).collect();
    let mut total = real(T::zero());
    for mask in 0u32..(1u32 << m) {
        let mut term = real(T::one());
        for (bit, (&inside, &outside)) in in_set.iter().zip(&out_set).enumerate() {
            term = term
                * if mask >> bit & 1 == 1 {
                    inside
                } else {
                    outside
                };
        }
        total = total + term;
    }
    Ok(total)
}
