//! Complex gamma machinery and small complex helpers.
//!
//! `log_gamma` uses a 14-term Lanczos-type rational approximation
//! (g = 671/128) on `Re z >= 1/2` and the reflection formula elsewhere.

#![allow(clippy::excessive_precision)]

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{default_delta, is_near_nonpositive_integer, real, to_c64, Real};

const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Principal-branch logarithm of `Γ(z)`: the imaginary part is reduced to
/// `(-π, π]`.
pub fn log_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if is_near_nonpositive_integer(z, default_delta()) {
        return Err(Error::Pole {
            argument: to_c64(z),
        });
    }
    Ok(principal(log_gamma_unreduced(z)))
}

fn log_gamma_unreduced<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let ln_pi = real(T::PI().ln());
        ln_pi - ln_sin_pi(z) - lanczos(Complex::new(T::one(), T::zero()) - z)
    } else {
        lanczos(z)
    }
}

fn lanczos<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let shifted = z + T::lit(LANCZOS_SHIFT);
    let head = (z + half) * shifted.ln() - shifted;
    let mut series = real(T::lit(LANCZOS_C0));
    let mut denom = z;
    for &coef in LANCZOS_COEFFS.iter() {
        denom = denom + T::one();
        series = series + real(T::lit(coef)) / denom;
    }
    head + (series * T::lit(SQRT_TWO_PI) / z).ln()
}

/// `ln sin(πz)` up to a multiple of `2πi`, stable for large `|Im z|` and
/// accurate near the integers.
fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let pi = T::PI();
    let n = z.re.round();
    let w = Complex::new(z.re - n, z.im);
    let parity = if (n / T::lit(2.0)).fract() == T::zero() {
        T::zero()
    } else {
        pi
    };
    let i = Complex::new(T::zero(), T::one());
    let ln_half = real(T::lit(0.5).ln());
    let core = if w.im > T::lit(10.0) {
        // sin(πw) = (i/2) e^{-iπw} (1 - e^{2iπw})
        -i * w * pi
            + (real(T::one()) - (i * w * (pi + pi)).exp()).ln()
            + ln_half
            + i * (pi * T::lit(0.5))
    } else if w.im < T::lit(-10.0) {
        // sin(πw) = (-i/2) e^{iπw} (1 - e^{-2iπw})
        i * w * pi + (real(T::one()) - (-i * w * (pi + pi)).exp()).ln() + ln_half
            - i * (pi * T::lit(0.5))
    } else {
        (w * pi).sin().ln()
    };
    core + i * parity
}

fn principal<T: Real>(z: Complex<T>) -> Complex<T> {
    let two_pi = T::PI() + T::PI();
    let mut im = z.im - two_pi * (z.im / two_pi).round();
    if im <= -T::PI() {
        im = im + two_pi;
    }
    Complex::new(z.re, im)
}

/// `Γ(z)`; errors rather than returning an infinite or flushed-to-zero value.
pub fn gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    let lg = log_gamma(z)?;
    let limit = T::max_value().ln();
    if lg.re.abs() > limit {
        return Err(Error::Overflow {
            argument: to_c64(z),
            log_magnitude: lg.re.to_f64_lossy(),
        });
    }
    Ok(lg.exp())
}

/// Rising factorial `c (c+1) ... (c+n-1)`, evaluated as a direct product.
pub fn pochhammer<T: Real>(c: Complex<T>, n: usize) -> Complex<T> {
    (0..n).fold(real(T::one()), |acc, k| acc * (c + T::count(k)))
}

/// `e^{2πi c}`, exact at multiples of `1/4` for real `c` and periodic in
/// `Re c` with period one.
pub fn unit_circle_exp<T: Real>(c: Complex<T>) -> Complex<T> {
    let turns = c.re - c.re.round();
    let quarters = turns * T::lit(4.0);
    let q = quarters.round();
    let rest = quarters - q;
    let (s, co) = (rest * T::FRAC_PI_2()).sin_cos();
    let modulus = (-(T::PI() + T::PI()) * c.im).exp();
    let base = rotate_quarter(Complex::new(co, s), q.to_i64().unwrap_or(0));
    base * modulus
}

/// `(2πi)^m` with the power of `i` applied exactly.
pub fn two_pi_i_pow<T: Real>(m: usize) -> Complex<T> {
    let magnitude = (T::PI() + T::PI()).powi(m as i32);
    rotate_quarter(real(magnitude), (m % 4) as i64)
}

fn rotate_quarter<T: Real>(z: Complex<T>, q: i64) -> Complex<T> {
    match q.rem_euclid(4) {
        0 => z,
        1 => Complex::new(-z.im, z.re),
        2 => Complex::new(-z.re, -z.im),
        _ => Complex::new(z.im, -z.re),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn log_gamma_small_integers_and_half() {
        assert!(log_gamma(cx(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(cx(2.0, 0.0)).unwrap().norm() < 1e-14);
        let lg5 = log_gamma(cx(5.0, 0.0)).unwrap();
        assert!((lg5 - cx(24f64.ln(), 0.0)).norm() < 1e-13);
        let lg_half = log_gamma(cx(0.5, 0.0)).unwrap();
        assert!((lg_half - cx(0.5 * PI.ln(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gamma_matches_reference_values() {
        // mpmath, 30 digits
        let cases = [
            (cx(2.5, 3.0), cx(-0.2181189710811229, 0.072034763407175034)),
            (cx(-1.3, 0.7), cx(0.33564153989846106, 0.58860803646763073)),
            (
                cx(0.2, -4.0),
                cx(0.0014751198542645232, -0.0027150029215016553),
            ),
            (cx(10.0, 10.0), cx(1423.8519417891831, -3496.0819733079446)),
            (
                cx(-7.5, 0.25),
                cx(0.00014722297154272457, 8.4306614174034005e-5),
            ),
            (cx(0.75, 0.0), cx(1.2254167024651776, 0.0)),
        ];
        for (z, want) in cases {
            let got = gamma(z).unwrap();
            assert!(rel(got, want) < 1e-13, "Γ({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn gamma_recurrence_example() {
        let g35 = gamma(cx(3.5, 0.0)).unwrap();
        let g05 = gamma(cx(0.5, 0.0)).unwrap();
        assert!(rel(g35, g05 * 2.5 * 1.5 * 0.5) < 1e-14);
        assert!(rel(g05, cx(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(cx(1.0, 0.0)).unwrap(), cx(1.0, 0.0)) < 1e-14);
    }

    #[test]
    fn poles_and_overflow() {
        for z in [cx(0.0, 0.0), cx(-3.0, 0.0), cx(-5.0 + 1e-9, -1e-9)] {
            assert!(matches!(log_gamma(z), Err(Error::Pole { .. })));
        }
        assert!(log_gamma(cx(-3.0 + 1e-6, 0.0)).is_ok());
        assert!(matches!(gamma(cx(200.0, 0.0)), Err(Error::Overflow { .. })));
        assert!(matches!(
            gamma(cx(-200.5, 0.0)),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn ln_sin_asymptotic_branches_agree_with_direct() {
        for z in [cx(0.3, 12.0), cx(-2.7, -15.0), cx(5.45, 10.5)] {
            let got = ln_sin_pi(z).exp();
            let want = (z * PI).sin();
            assert!(rel(got, want) < 1e-13, "{z}: {got} vs {want}");
        }
        assert!(log_gamma(cx(-2.5, 300.0)).unwrap().re.is_finite());
    }

    #[test]
    fn pochhammer_examples() {
        let z = cx(0.3, -0.2);
        assert_eq!(pochhammer(z, 0), cx(1.0, 0.0));
        assert_eq!(pochhammer(cx(1.0, 0.0), 4), cx(24.0, 0.0));
        assert_eq!(pochhammer(cx(-2.0, 0.0), 3), cx(0.0, 0.0));
    }

    #[test]
    fn unit_circle_exact_quadrants() {
        assert_eq!(unit_circle_exp(cx(0.0, 0.0)), cx(1.0, 0.0));
        assert_eq!(unit_circle_exp(cx(0.5, 0.0)), cx(-1.0, 0.0));
        assert_eq!(unit_circle_exp(cx(0.25, 0.0)), cx(0.0, 1.0));
        assert_eq!(unit_circle_exp(cx(-0.25, 0.0)), cx(0.0, -1.0));
        let z = unit_circle_exp(cx(0.1, 0.2));
        let want = (cx(0.0, 2.0 * PI) * cx(0.1, 0.2)).exp();
        assert!(rel(z, want) < 1e-15);
    }

    #[test]
    fn two_pi_i_powers() {
        let tp = 2.0 * PI;
        assert_eq!(two_pi_i_pow::<f64>(0), cx(1.0, 0.0));
        assert_eq!(two_pi_i_pow::<f64>(1), cx(0.0, tp));
        assert_eq!(two_pi_i_pow::<f64>(2), cx(-tp * tp, 0.0));
        assert_eq!(two_pi_i_pow::<f64>(3).re, 0.0);
        assert!(two_pi_i_pow::<f64>(3).im < 0.0);
    }

    #[test]
    fn single_precision_gamma() {
        let g = gamma(Complex::new(4.0f32, 0.0)).unwrap();
        assert!((g.re - 6.0).abs() < 1e-4 && g.im.abs() < 1e-5);
    }

    fn away_from_poles() -> impl Strategy<Value = Complex64> {
        (-20.0f64..20.0, -20.0f64..20.0)
            .prop_map(|(re, im)| cx(re, im))
            .prop_filter("bounded away from poles", |z| {
                z.norm() <= 20.0
                    && !(z.im.abs() < 1e-3 && (z.re - z.re.round()).abs() < 1e-3 && z.re < 1.5)
            })
    }

    proptest! {
        #[test]
        fn gamma_recurrence(z in away_from_poles()) {
            let g1 = gamma(z + 1.0).unwrap();
            let g = gamma(z).unwrap();
            prop_assert!((g1 - z * g).norm() / g1.norm() <= 1e-12);
        }

        #[test]
        fn gamma_reflection(z in away_from_poles()) {
            prop_assume!((z.re - z.re.round()).abs() > 1e-3 || z.im.abs() > 1e-3);
            let prod = gamma(z).unwrap() * gamma(cx(1.0, 0.0) - z).unwrap();
            let want = cx(PI, 0.0) / (z * PI).sin();
            prop_assert!((prod - want).norm() / want.norm() <= 1e-12);
        }

        #[test]
        fn pochhammer_step(re in -5.0f64..5.0, im in -2.0f64..2.0, n in 0usize..30) {
            let z = cx(re, im);
            prop_assert_eq!(pochhammer(z, n + 1), pochhammer(z, n) * (z + n as f64));
        }

        #[test]
        fn unit_circle_periodic(re in -3.0f64..3.0, im in -0.5f64..0.5) {
            let a = unit_circle_exp(cx(re, im));
            let b = unit_circle_exp(cx(re + 1.0, im));
            prop_assert!((a - b).norm() / a.norm() <= 1e-14);
        }
    }
}
