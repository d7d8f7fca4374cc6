//! Tensor-product tanh-sinh quadrature on the unit cube for integrands
//! `Π z_j^{p_j} (1 - z_j)^{q_j} · (1 - x Π z_j)^s`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::report::{Identity, VerificationReport};
use crate::scalar::{real, Real};
use crate::series::ghf;
use crate::special::log_gamma;

/// Highest supported cube dimension.
pub const MAX_DIMENSION: usize = 3;
/// Finest supported level.
pub const MAX_LEVEL: u32 = 12;
/// Level used by the identity checks.
pub const DEFAULT_LEVEL: u32 = 12;

const NODE_CUTOFF: f64 = 1e-18;
const T_CAP: f64 = 12.0;

/// Integrand on `(0, 1)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeIntegrand<T> {
    /// Exponent pair `(p_j, q_j)` per axis.
    pub axes: Vec<(Complex<T>, Complex<T>)>,
    /// `(x, s)` of the factor `(1 - x Π z_j)^s`.
    pub coupling: Option<(T, Complex<T>)>,
}

impl<T: Real> CubeIntegrand<T> {
    pub fn separable(axes: Vec<(Complex<T>, Complex<T>)>) -> Self {
        Self {
            axes,
            coupling: None,
        }
    }

    pub fn m(&self) -> usize {
        self.axes.len()
    }

    fn check(&self) -> Result<()> {
        let m = self.m();
        if m == 0 || m > MAX_DIMENSION {
            return Err(Error::Dimension {
                m,
                max: MAX_DIMENSION,
            });
        }
        let minus_one = -T::one();
        for (j, (p, q)) in self.axes.iter().enumerate() {
            if !(p.re > minus_one && q.re > minus_one) {
                return Err(Error::Integrability(format!(
                    "axis {j}: need Re p > -1 and Re q > -1, got p = {p}, q = {q}"
                )));
            }
        }
        if let Some((x, _)) = self.coupling {
            if !(x > T::zero() && x < T::one()) {
                return Err(Error::Integrability(format!(
                    "coupling point x = {x} outside (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Step size of a level.
pub fn step<T: Real>(level: u32) -> T {
    T::lit(2.0) / T::lit(f64::from(level))
}

/// `ln(1 + e^y)` without overflow.
fn softplus<T: Real>(y: T) -> T {
    y.max(T::zero()) + (-y.abs()).exp().ln_1p()
}

struct Node<T> {
    ln_z: T,
    /// `ln(w z^p (1-z)^q)`
    log_term: Complex<T>,
}

fn axis_nodes<T: Real>(h: T, p: Complex<T>, q: Complex<T>) -> Vec<Node<T>> {
    let cutoff = T::lit(NODE_CUTOFF).ln();
    let cap = T::lit(T_CAP);
    let half_pi = T::FRAC_PI_2();
    let ln_scale = (h * T::PI()).ln();
    let make = |t: T| {
        let u = half_pi * t.sinh();
        let ln_z = -softplus(-(u + u));
        let ln_1mz = -softplus(u + u);
        let ln_w = ln_scale + t.cosh().ln() + ln_z + ln_1mz;
        Node {
            ln_z,
            log_term: p * ln_z + q * ln_1mz + ln_w,
        }
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in 1.. {
        let t = h * T::count(k);
        if t > cap {
            break;
        }
        let (n_neg, n_pos) = (make(-t), make(t));
        let neg_live = n_neg.log_term.re >= cutoff;
        let pos_live = n_pos.log_term.re >= cutoff;
        if neg_live {
            left.push(n_neg);
        }
        if pos_live {
            right.push(n_pos);
        }
        if !neg_live && !pos_live && t > T::one() {
            break;
        }
    }
    left.reverse();
    left.push(make(T::zero()));
    left.extend(right);
    left
}

/// Level-`level` tanh-sinh estimate of `∫_{(0,1)^m} f`, with step `2 / level`.
pub fn cube_integral<T: Real>(f: &CubeIntegrand<T>, level: u32) -> Result<Complex<T>> {
    f.check()?;
    if level == 0 || level > MAX_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "level {level} outside 1..={MAX_LEVEL}"
        )));
    }
    let h = step::<T>(level);
    let grids: Vec<Vec<Node<T>>> = f.axes.iter().map(|&(p, q)| axis_nodes(h, p, q)).collect();
    let mut total = Neumaier::default();
    accumulate(
        &grids,
        0,
        real(T::zero()),
        T::zero(),
        f.coupling,
        &mut total,
    );
    Ok(total.value())
}

/// Compensated complex sum.
#[derive(Default)]
struct Neumaier<T> {
    re: (T, T),
    im: (T, T),
}

impl<T: Real> Neumaier<T> {
    fn add(&mut self, z: Complex<T>) {
        step_sum(&mut self.re, z.re);
        step_sum(&mut self.im, z.im);
    }

    fn value(&self) -> Complex<T> {
        Complex::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

fn step_sum<T: Real>(acc: &mut (T, T), v: T) {
    let t = acc.0 + v;
    acc.1 = acc.1
        + if acc.0.abs() >= v.abs() {
            (acc.0 - t) + v
        } else {
            (v - t) + acc.0
        };
    acc.0 = t;
}

fn accumulate<T: Real>(
    grids: &[Vec<Node<T>>],
    axis: usize,
    log_term: Complex<T>,
    ln_prod: T,
    coupling: Option<(T, Complex<T>)>,
    total: &mut Neumaier<T>,
) {
    if axis == grids.len() {
        let mut log = log_term;
        if let Some((x, s)) = coupling {
            log = log + s * (-(x * ln_prod.exp())).ln_1p();
        }
        total.add(log.exp());
        return;
    }
    for node in &grids[axis] {
        accumulate(
            grids,
            axis + 1,
            log_term + node.log_term,
            ln_prod + node.ln_z,
            coupling,
            total,
        );
    }
}

fn log_beta_product<T: Real>(p: &ParameterSet<T>, n: usize) -> Result<Complex<T>> {
    let (a, b) = (p.a(), p.b());
    let shift = T::count(n);
    let mut log = real(T::zero());
    for i in 1..=p.m() {
        log = log + log_gamma(a[i] + shift)? + log_gamma(b[i] - a[i])? - log_gamma(b[i] + shift)?;
    }
    Ok(log)
}

fn check_real_parts<T: Real>(p: &ParameterSet<T>, n: usize) -> Result<()> {
    let m = p.m();
    if m > MAX_DIMENSION {
        return Err(Error::Dimension {
            m,
            max: MAX_DIMENSION,
        });
    }
    let shift = T::count(n);
    for i in 1..=m {
        let (ai, bi) = (p.a()[i], p.b()[i]);
        if !((ai.re + shift) > T::zero() && (bi - ai).re > T::zero()) {
            return Err(Error::ParameterRange(format!(
                "index {i}: need Re(a + {n}) > 0 and Re(b - a) > 0, got a = {ai}, b = {bi}"
            )));
        }
    }
    Ok(())
}

/// `∫ Π z_i^{a_i+n-1} (1-z_i)^{b_i-a_i-1} dz` against `Π Γ(a_i+n)Γ(b_i-a_i)/Γ(b_i+n)`.
pub fn beta_product_check<T: Real>(p: &ParameterSet<T>, n: usize) -> Result<VerificationReport<T>> {
    beta_product_check_at(p, n, DEFAULT_LEVEL)
}

pub fn beta_product_check_at<T: Real>(
    p: &ParameterSet<T>,
    n: usize,
    level: u32,
) -> Result<VerificationReport<T>> {
    check_real_parts(p, n)?;
    let one = real(T::one());
    let shift = T::count(n);
    let axes = (1..=p.m())
        .map(|i| (p.a()[i] + shift - one, p.b()[i] - p.a()[i] - one))
        .collect();
    let lhs = cube_integral(&CubeIntegrand::separable(axes), level)?;
    let rhs = log_beta_product(p, n)?.exp();
    let mut r = VerificationReport::new(Identity::BetaProduct, p.m(), T::zero(), lhs, rhs);
    r.n = Some(n);
    Ok(r)
}

/// Cube integral of `Π z_i^{a_i-1}(1-z_i)^{b_i-a_i-1} (1 - x Π z_i)^{-a_0}`
/// against `Π Γ(a_i)Γ(b_i-a_i)/Γ(b_i) · F(a; b; x)`.
pub fn euler_integral_check<T: Real>(p: &ParameterSet<T>, x: T) -> Result<VerificationReport<T>> {
    euler_integral_check_at(p, x, DEFAULT_LEVEL)
}

pub fn euler_integral_check_at<T: Real>(
    p: &ParameterSet<T>,
    x: T,
    level: u32,
) -> Result<VerificationReport<T>> {
    check_real_parts(p, 0)?;
    if !(x >= T::zero() && x < T::one()) {
        return Err(Error::ParameterRange(format!("x = {x} outside [0, 1)")));
    }
    let one = real(T::one());
    let axes = (1..=p.m())
        .map(|i| (p.a()[i] - one, p.b()[i] - p.a()[i] - one))
        .collect();
    let coupling = (x > T::zero()).then(|| (x, -p.a()[0]));
    let lhs = cube_integral(&CubeIntegrand { axes, coupling }, level)?;
    let (up, lo) = p.solution_parameters(0)?;
    let series = ghf(&up, &lo, real(x), T::lit(1e-15))?;
    let rhs = log_beta_product(p, 0)?.exp() * series.value;
    Ok(VerificationReport::new(
        Identity::EulerIntegral,
        p.m(),
        x,
        lhs,
        rhs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::relative_residual;
    use crate::special::gamma;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(v: f64) -> Complex64 {
        cx(v, 0.0)
    }

    fn beta(a: f64, b: f64) -> f64 {
        (gamma(r(a)).unwrap() * gamma(r(b)).unwrap() / gamma(r(a + b)).unwrap()).re
    }

    #[test]
    fn unit_length() {
        let f = CubeIntegrand::separable(vec![(r(0.0), r(0.0))]);
        let v = cube_integral(&f, 12).unwrap();
        assert!((v - r(1.0)).norm() < 1e-14);
    }

    #[test]
    fn euler_beta_with_singular_ends() {
        for &(a, b) in &[(0.5, 1.2), (0.15, 0.3), (0.9, 1.1)] {
            let f = CubeIntegrand::separable(vec![(r(a - 1.0), r(b - a - 1.0))]);
            let v = cube_integral(&f, 12).unwrap();
            let expect = beta(a, b - a);
            assert!(
                (v.re - expect).abs() / expect < 1e-12,
                "a={a} b={b}: {v} vs {expect}"
            );
        }
    }

    #[test]
    fn complex_exponents() {
        let (p, q) = (cx(-0.4, 0.3), cx(-0.2, -0.1));
        let f = CubeIntegrand::separable(vec![(p, q)]);
        let v = cube_integral(&f, 12).unwrap();
        let one = r(1.0);
        let expect =
            gamma(p + one).unwrap() * gamma(q + one).unwrap() / gamma(p + q + 2.0).unwrap();
        assert!(relative_residual(v, expect) < 1e-12);
    }

    #[test]
    fn separable_matches_product() {
        let axes = vec![(r(-0.3), r(0.2)), (r(-0.6), r(-0.5)), (r(0.4), r(-0.1))];
        let joint = cube_integral(&CubeIntegrand::separable(axes.clone()), 10).unwrap();
        let product = axes
            .iter()
            .map(|&ax| cube_integral(&CubeIntegrand::separable(vec![ax]), 10).unwrap())
            .fold(r(1.0), |acc, v| acc * v);
        assert!(relative_residual(joint, product) < 1e-12);
    }

    #[test]
    fn permuted_axes() {
        let same = vec![(r(-0.3), r(0.2)); 3];
        let f = CubeIntegrand {
            axes: same,
            coupling: Some((0.4, r(-0.7))),
        };
        let v1 = cube_integral(&f, 8).unwrap();
        let v2 = cube_integral(&f.clone(), 8).unwrap();
        assert_eq!(v1, v2);

        let f = CubeIntegrand {
            axes: vec![(r(-0.3), r(0.2)), (r(-0.6), r(-0.5))],
            coupling: Some((0.4, r(-0.7))),
        };
        let g = CubeIntegrand {
            axes: vec![f.axes[1], f.axes[0]],
            coupling: f.coupling,
        };
        let (vf, vg) = (
            cube_integral(&f, 10).unwrap(),
            cube_integral(&g, 10).unwrap(),
        );
        assert!(relative_residual(vf, vg) < 1e-14);
    }

    #[test]
    fn level_differences_shrink() {
        let f = CubeIntegrand {
            axes: vec![(r(-0.75), r(-0.6)), (r(-0.4), r(-0.8))],
            coupling: Some((0.25, r(-0.55))),
        };
        let est: Vec<_> = (5..=12).map(|l| cube_integral(&f, l).unwrap()).collect();
        let diffs: Vec<f64> = est.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let floor = 1e-14 * est[0].norm();
        for w in diffs.windows(2) {
            assert!(w[1] < w[0] || w[1] < floor, "{diffs:?}");
        }
    }

    #[test]
    fn input_errors() {
        let f = CubeIntegrand::separable(vec![(r(0.0), r(0.0)); 4]);
        assert!(matches!(
            cube_integral(&f, 5),
            Err(Error::Dimension { m: 4, .. })
        ));
        let f = CubeIntegrand::separable(vec![(r(-1.0), r(0.0))]);
        assert!(matches!(cube_integral(&f, 5), Err(Error::Integrability(_))));
        let f = CubeIntegrand {
            axes: vec![(r(0.0), r(0.0))],
            coupling: Some((1.0, r(1.0))),
        };
        assert!(matches!(cube_integral(&f, 5), Err(Error::Integrability(_))));
        let f = CubeIntegrand::separable(vec![(r(0.0), r(0.0))]);
        assert!(cube_integral(&f, 0).is_err());
        assert!(cube_integral(&f, 13).is_err());
    }

    fn set(a: &[f64], b: &[f64]) -> ParameterSet<f64> {
        ParameterSet::new(
            a.iter().map(|&v| r(v)).collect(),
            b.iter().map(|&v| r(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn beta_examples() {
        let p = set(&[0.3, 0.5], &[0.0, 1.2]);
        for n in [0, 3] {
            let rep = beta_product_check(&p, n).unwrap();
            assert!(rep.rel_residual <= 1e-8, "{rep:?}");
            assert_eq!(rep.n, Some(n));
        }
        let rep = beta_product_check(&p, 0).unwrap();
        assert!((rep.rhs.re - beta(0.5, 0.7)).abs() < 1e-13);

        let p = set(&[0.3, 0.5, 0.35], &[0.0, 1.2, 0.8]);
        assert!(beta_product_check(&p, 1).unwrap().rel_residual <= 1e-7);
    }

    #[test]
    fn euler_examples() {
        let p = set(&[0.4, 0.5], &[0.0, 1.3]);
        assert!(euler_integral_check(&p, 0.25).unwrap().rel_residual <= 1e-7);
        assert!(euler_integral_check(&p, 0.0).unwrap().rel_residual <= 1e-8);
        let p = set(&[0.4, 0.5, 0.7], &[0.0, 1.3, 1.1]);
        assert!(euler_integral_check(&p, 0.1).unwrap().rel_residual <= 1e-6);
    }

    #[test]
    fn euler_range_errors() {
        let p = set(&[0.4, -0.5], &[0.0, 1.3]);
        assert!(matches!(
            euler_integral_check(&p, 0.1),
            Err(Error::ParameterRange(_))
        ));
        let p = set(&[0.4, 0.5], &[0.0, 0.3]);
        assert!(matches!(
            euler_integral_check(&p, 0.1),
            Err(Error::ParameterRange(_))
        ));
        let p = set(&[0.4, 0.5], &[0.0, 1.3]);
        assert!(euler_integral_check(&p, 1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn one_dimensional_beta(p in -0.8f64..1.5, q in -0.8f64..1.5) {
            let f = CubeIntegrand::separable(vec![(r(p), r(q))]);
            let v = cube_integral(&f, 12).unwrap();
            let expect = beta(p + 1.0, q + 1.0);
            prop_assert!((v.re - expect).abs() / expect < 1e-11);
            prop_assert!(v.im == 0.0);
        }
    }
}
