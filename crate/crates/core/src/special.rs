//! Special-function values used by the ensemble results: harmonic sums,
//! Gaussian moments, the error function and folded-normal quantities.

use std::f64::consts::{FRAC_2_SQRT_PI, LN_2, PI};

use crate::error::{Error, Result};
use crate::numeric::simpson;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `H_n = Σ_{k=1}^n 1/k`, summed smallest terms first.
pub fn harmonic(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroHarmonicIndex);
    }
    Ok((1..=n).rev().map(|k| 1.0 / k as f64).sum())
}

/// `Σ_{j=0}^n 1/(2j+1) = H_{2n+1} − H_n/2`: the ensemble mean of `|P|²` over
/// the unit disc under the radial measure, for standard normal coefficients.
pub fn odd_harmonic_sum(n: u64) -> f64 {
    (0..=n).rev().map(|j| 1.0 / (2 * j + 1) as f64).sum()
}

/// `ln(2√n)`, the leading growth of [`odd_harmonic_sum`]. The gap between the
/// two tends to `γ/2` from above.
pub fn disc_asymptotic(n: u64) -> f64 {
    LN_2 + 0.5 * (n as f64).ln()
}

/// `Γ(k + 1/2) = √π · (2k)! / (4^k k!)`, built by the upward recurrence.
fn gamma_half_integer(k: u64) -> f64 {
    (0..k).fold(PI.sqrt(), |g, i| g * (i as f64 + 0.5))
}

/// `∫_{−∞}^{∞} x^m e^{−ax²} dx`.
///
/// Zero for odd `m`; `Γ((m+1)/2) / a^{(m+1)/2}` for even `m`.
pub fn gaussian_moment(m: u32, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::NonPositive {
            name: "a",
            value: a,
        });
    }
    if m % 2 == 1 {
        return Ok(0.0);
    }
    let k = u64::from(m / 2);
    Ok(gamma_half_integer(k) / a.powf(k as f64 + 0.5))
}

// Rational approximations from the FreeBSD/fdlibm `s_erf.c`, accurate to
// well under 1e-15 on each range.
const ERX: f64 = 8.45062911510467529297e-01;
const EFX: f64 = 1.28379167095512586316e-01;
const PP: [f64; 5] = [
    1.28379167095512558561e-01,
    -3.25042107247001499370e-01,
    -2.84817495755985104766e-02,
    -5.77027029648944159157e-03,
    -2.37630166566501626084e-05,
];
const QQ: [f64; 6] = [
    1.0,
    3.97917223959155352819e-01,
    6.50222499887672944485e-02,
    5.08130628187576562776e-03,
    1.32494738004321644526e-04,
    -3.96022827877536812320e-06,
];
const PA: [f64; 7] = [
    -2.36211856075265944077e-03,
    4.14856118683748331666e-01,
    -3.72207876035701323847e-01,
    3.18346619901161753674e-01,
    -1.10894694282396677476e-01,
    3.54783043256182359371e-02,
    -2.16637559486879084300e-03,
];
const QA: [f64; 7] = [
    1.0,
    1.06420880400844228286e-01,
    5.40397917702171048937e-01,
    7.18286544141962662868e-02,
    1.26171219808761642112e-01,
    1.36370839120290507362e-02,
    1.19844998467991074170e-02,
];
const RA: [f64; 8] = [
    -9.86494403484714822705e-03,
    -6.93858572707181764372e-01,
    -1.05586262253232909814e+01,
    -6.23753324503260060396e+01,
    -1.62396669462573470355e+02,
    -1.84605092906711035994e+02,
    -8.12874355063065934246e+01,
    -9.81432934416914548592e+00,
];
const SA: [f64; 9] = [
    1.0,
    1.96512716674392571292e+01,
    1.37657754143519042600e+02,
    4.34565877475229228821e+02,
    6.45387271733267880336e+02,
    4.29008140027567833386e+02,
    1.08635005541779435134e+02,
    6.57024977031928170135e+00,
    -6.04244152148580987438e-02,
];
const RB: [f64; 7] = [
    -9.86494292470009928597e-03,
    -7.99283237680523006574e-01,
    -1.77579549177547519889e+01,
    -1.60636384855821916062e+02,
    -6.37566443368389627722e+02,
    -1.02509513161107724954e+03,
    -4.83519191608651397019e+02,
];
const SB: [f64; 8] = [
    1.0,
    3.03380607434824582924e+01,
    3.25792512996573918826e+02,
    1.53672958608443695994e+03,
    3.19985821950859553908e+03,
    2.55305040643316442583e+03,
    4.74528541206955367215e+02,
    -2.24409524465858183362e+01,
];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// The error function `erf(x) = (2/√π) ∫₀ˣ e^{−t²} dt`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let magnitude = if ax < 0.84375 {
        if ax < 3.725_290_298_461_914e-9 {
            ax + EFX * ax
        } else {
            let z = ax * ax;
            ax + ax * (horner(&PP, z) / horner(&QQ, z))
        }
    } else if ax < 1.25 {
        let s = ax - 1.0;
        ERX + horner(&PA, s) / horner(&QA, s)
    } else if ax >= 6.0 {
        1.0
    } else {
        let s = 1.0 / (ax * ax);
        let (r, q) = if ax < 1.0 / 0.35 {
            (horner(&RA, s), horner(&SA, s))
        } else {
            (horner(&RB, s), horner(&SB, s))
        };
        1.0 - (-ax * ax - 0.5625 + r / q).exp() / ax
    };
    magnitude.copysign(x)
}

/// `E|G| = √(2/π)` for a standard normal `G`.
pub fn folded_normal_mean() -> f64 {
    (2.0 / PI).sqrt()
}

/// Density of `|G₁| + |G₂|` for independent standard normals:
/// `(2/√π) e^{−x²/4} erf(x/2)` for `x ≥ 0`, zero below.
pub fn folded_sum_pdf(x: f64) -> f64 {
    if !(x > 0.0) {
        return 0.0;
    }
    FRAC_2_SQRT_PI * (-x * x / 4.0).exp() * erf(x / 2.0)
}

/// Width past the lower limit beyond which the folded-sum density is
/// below 1e-27 and is dropped from the tail integral.
const TAIL_SPAN: f64 = 16.0;

/// `P(|G₁| + |G₂| ≥ c)`, by composite Simpson on the density.
pub fn folded_sum_tail(c: f64) -> f64 {
    let lo = c.max(0.0);
    simpson(folded_sum_pdf, lo, lo + TAIL_SPAN, 8000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::SQRT_2;

    /// Exact `H_n` as a reduced fraction, for small n.
    fn harmonic_rational(n: u64) -> (u128, u128) {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        (1..=n as u128).fold((0u128, 1u128), |(p, q), k| {
            let (np, nq) = (p * k + q, q * k);
            let g = gcd(np, nq);
            (np / g, nq / g)
        })
    }

    /// Adaptive Simpson on a finite interval.
    fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        fn step<F: Fn(f64) -> f64 + Copy>(
            f: F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        step(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    /// Maclaurin series of erf, adequate for |x| ≤ 3.
    fn erf_taylor(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..80 {
            term *= -x * x / n as f64;
            sum += term / (2 * n + 1) as f64;
        }
        FRAC_2_SQRT_PI * sum
    }

    /// Asymptotic expansion of erfc for large x.
    fn erfc_asymptotic(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..6 {
            term *= -((2 * n - 1) as f64) / (2.0 * x * x);
            sum += term;
        }
        (-x * x).exp() / (x * PI.sqrt()) * sum
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(1).unwrap(), 1.0);
        assert_relative_eq!(harmonic(3).unwrap(), 11.0 / 6.0, max_relative = 1e-15);
        let (p, q) = harmonic_rational(10);
        assert_eq!((p, q), (7381, 2520));
        assert_relative_eq!(harmonic(10).unwrap(), 7381.0 / 2520.0, max_relative = 1e-15);
        assert_relative_eq!(
            harmonic(10).unwrap(),
            2.928_968_253_968_254,
            max_relative = 1e-15
        );
        assert_eq!(harmonic(0), Err(Error::ZeroHarmonicIndex));
    }

    #[test]
    fn harmonic_matches_exact_fractions() {
        for n in 1..=30 {
            let (p, q) = harmonic_rational(n);
            assert_relative_eq!(
                harmonic(n).unwrap(),
                p as f64 / q as f64,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn odd_harmonic_examples() {
        assert_eq!(odd_harmonic_sum(0), 1.0);
        assert_relative_eq!(odd_harmonic_sum(1), 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(
            harmonic(3).unwrap() - harmonic(1).unwrap() / 2.0,
            4.0 / 3.0,
            max_relative = 1e-15
        );
        let identity = harmonic(101).unwrap() - harmonic(50).unwrap() / 2.0;
        assert!((odd_harmonic_sum(50) - identity).abs() < 1e-14);
    }

    #[test]
    fn odd_harmonic_identity_holds_across_range() {
        // running sums: H_{2n+1} and H_n built incrementally as an independent route
        let mut h = vec![0.0f64; 20_002];
        for k in 1..h.len() {
            h[k] = h[k - 1] + 1.0 / k as f64;
        }
        for n in 1..=10_000u64 {
            let direct = odd_harmonic_sum(n);
            let identity = h[2 * n as usize + 1] - h[n as usize] / 2.0;
            assert_relative_eq!(direct, identity, max_relative = 1e-12);
        }
    }

    #[test]
    fn disc_asymptotic_examples() {
        assert_relative_eq!(disc_asymptotic(1), LN_2, max_relative = 1e-15);
        assert_relative_eq!(disc_asymptotic(100), 20f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(disc_asymptotic(10_000), 200f64.ln(), max_relative = 1e-15);
        let gap = odd_harmonic_sum(10_000) - disc_asymptotic(10_000) - 0.5 * 0.5772156649;
        assert!(gap.abs() < 1e-4, "gap = {gap}");
    }

    #[test]
    fn asymptotic_gap_decreases_towards_half_gamma() {
        let mut previous = f64::INFINITY;
        let mut sum = 0.0;
        for n in 0..=100_000u64 {
            sum += 1.0 / (2 * n + 1) as f64;
            if n == 0 {
                continue;
            }
            let gap = sum - disc_asymptotic(n);
            assert!(gap > EULER_GAMMA / 2.0, "n={n}");
            assert!(gap < previous, "n={n}");
            if n >= 8 {
                assert!(gap < 0.35, "n={n} gap={gap}");
            }
            previous = gap;
        }
        // the 0.35 ceiling does not hold for the first few indices
        assert!(odd_harmonic_sum(1) - disc_asymptotic(1) > 0.35);
    }

    #[test]
    fn gaussian_moment_examples() {
        assert_relative_eq!(
            gaussian_moment(0, 1.0).unwrap(),
            PI.sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(gaussian_moment(1, 1.0).unwrap(), 0.0);
        assert_relative_eq!(
            gaussian_moment(2, 0.5).unwrap(),
            (2.0 * PI).sqrt(),
            max_relative = 1e-15
        );
        // E[A²] for a standard normal
        assert_relative_eq!(
            gaussian_moment(2, 0.5).unwrap() / (2.0 * PI).sqrt(),
            1.0,
            max_relative = 1e-15
        );
        assert!(gaussian_moment(2, 0.0).is_err());
        assert!(gaussian_moment(2, -1.0).is_err());
        assert!(gaussian_moment(2, f64::NAN).is_err());
    }

    #[test]
    fn gaussian_moment_matches_quadrature() {
        for m in [0u32, 2, 4, 6] {
            for a in [0.25, 0.5, 1.0, 2.0] {
                let f = |x: f64| x.powi(m as i32) * (-a * x * x).exp();
                // integrand is below 1e-30 past |x| = 20 for a ≥ 0.25; unit panels
                // keep the adaptive rule from stopping on an all-tiny first sample
                let oracle: f64 = 2.0
                    * (0..20)
                        .map(|i| adaptive_simpson(f, f64::from(i), f64::from(i + 1), 1e-14))
                        .sum::<f64>();
                let value = gaussian_moment(m, a).unwrap();
                assert_relative_eq!(value, oracle, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn erf_examples() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(1.0) - 0.8427008).abs() < 1e-7);
        assert!((erf(3.0) - 0.9999779).abs() < 1e-7);
        assert_eq!(erf(f64::INFINITY), 1.0);
        assert_eq!(erf(f64::NEG_INFINITY), -1.0);
        assert!(erf(f64::NAN).is_nan());
    }

    #[test]
    fn erf_matches_series_oracles() {
        let mut x = -3.0;
        while x <= 3.0 {
            assert!((erf(x) - erf_taylor(x)).abs() < 1e-10, "x={x}");
            x += 0.01;
        }
        let mut x = 3.0;
        while x <= 8.0 {
            let oracle = 1.0 - erfc_asymptotic(x);
            assert!((erf(x) - oracle).abs() < 1e-7, "x={x}");
            assert!((erf(-x) + oracle).abs() < 1e-7, "x={x}");
            x += 0.05;
        }
    }

    #[test]
    fn erf_is_odd_monotone_and_bounded() {
        let mut previous = -1.0;
        for i in -6000..=6000 {
            let x = f64::from(i) * 1e-3;
            let v = erf(x);
            assert_eq!(erf(-x), -v);
            assert!(v >= previous, "x={x}");
            assert!(v.abs() <= 1.0);
            previous = v;
        }
    }

    #[test]
    fn folded_normal_mean_value() {
        assert!((folded_normal_mean() - 0.7978845608).abs() < 1e-10);
        assert!((2.0 * folded_normal_mean() - 1.5957691216).abs() < 1e-9);
        assert_relative_eq!(
            folded_normal_mean(),
            SQRT_2 / PI.sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn folded_sum_pdf_normalisation_and_mean() {
        assert_eq!(folded_sum_pdf(0.0), 0.0);
        assert_eq!(folded_sum_pdf(-1.0), 0.0);
        let mass = adaptive_simpson(folded_sum_pdf, 0.0, 12.0, 1e-12);
        assert!((mass - 1.0).abs() < 1e-6, "mass={mass}");
        let mean = adaptive_simpson(|x| x * folded_sum_pdf(x), 0.0, 12.0, 1e-12);
        assert!(
            (mean - 2.0 * folded_normal_mean()).abs() < 1e-5,
            "mean={mean}"
        );
        let mut x = 0.0;
        while x < 20.0 {
            assert!(folded_sum_pdf(x) >= 0.0);
            x += 0.01;
        }
        let head = adaptive_simpson(folded_sum_pdf, 0.0, 12.0, 1e-12);
        assert!(head >= 1.0 - 1e-6);
    }

    #[test]
    fn folded_sum_tail_values() {
        assert!((folded_sum_tail(0.0) - 1.0).abs() < 1e-9);
        assert!((folded_sum_tail(-2.0) - 1.0).abs() < 1e-9);
        // reference values from an independent adaptive quadrature (scipy quad)
        let at_four = folded_sum_tail(4.0);
        assert!(
            (at_four - 0.009_333_588_757_527).abs() < 1e-10,
            "tail(4)={at_four}"
        );
        assert!((folded_sum_tail(3.0) - 0.066_640_845_953_918).abs() < 1e-10);
        let oracle = adaptive_simpson(folded_sum_pdf, 3.0, 20.0, 1e-13);
        assert!((folded_sum_tail(3.0) - oracle).abs() < 1e-10);
    }
}
