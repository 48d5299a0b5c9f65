//! Real-coefficient polynomials and their modulus on circles `|z| = r`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `P(z) = a₀ + a₁z + … + aₙzⁿ` with real coefficients.
///
/// The degree is structural: it is `coefficients.len() - 1` and trailing
/// zeros are kept, because ensembles are indexed by a fixed `n` even when a
/// sampled top coefficient happens to vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPolynomial {
    coefficients: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        if let Some((index, &value)) = coefficients
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite())
        {
            return Err(Error::NonFiniteCoefficient { index, value });
        }
        Ok(Self { coefficients })
    }

    /// The monomial `zⁿ`.
    pub fn monomial(degree: usize) -> Self {
        let mut coefficients = vec![0.0; degree + 1];
        coefficients[degree] = 1.0;
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Leading coefficient `aₙ` (possibly zero).
    pub fn leading(&self) -> f64 {
        self.coefficients[self.degree()]
    }

    pub fn constant(&self) -> f64 {
        self.coefficients[0]
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `|P(e^{it})|` via Horner; the fast path next to [`Self::modulus_sq_circle`].
    pub fn abs_on_circle(&self, theta: f64) -> f64 {
        self.eval_complex(Complex64::from_polar(1.0, theta)).norm()
    }

    /// `|P(e^{it})|² = Σ_{j,k} a_j a_k cos((j−k)t)`, evaluated literally as the
    /// O(n²) double sum. Tiny negative round-off is clamped to zero.
    pub fn modulus_sq_circle(&self, t: CirclePoint) -> f64 {
        let a = &self.coefficients;
        let theta = t.theta();
        let mut sum = 0.0;
        for (j, aj) in a.iter().enumerate() {
            for (k, ak) in a.iter().enumerate() {
                sum += aj * ak * ((j as f64 - k as f64) * theta).cos();
            }
        }
        sum.max(0.0)
    }

    /// `|P(re^{it})|² = Σ_{j,k} a_j a_k r^{j+k} cos((j−k)t)` for `0 ≤ r ≤ 1`.
    pub fn modulus_sq_radius(&self, r: f64, t: CirclePoint) -> Result<f64> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::RadiusOutOfRange(r));
        }
        let scaled: Vec<f64> = self
            .coefficients
            .iter()
            .zip(powers(r, self.coefficients.len()))
            .map(|(a, rj)| a * rj)
            .collect();
        let theta = t.theta();
        let mut sum = 0.0;
        for (j, bj) in scaled.iter().enumerate() {
            for (k, bk) in scaled.iter().enumerate() {
                sum += bj * bk * ((j as f64 - k as f64) * theta).cos();
            }
        }
        Ok(sum.max(0.0))
    }

    /// `P′`, with `k·a_k` shifted down. A constant maps to the zero constant.
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self {
                coefficients: vec![0.0],
            };
        }
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| k as f64 * a)
            .collect();
        Self { coefficients }
    }

    /// `Σ a_j²`.
    pub fn coeff_norm_sq(&self) -> f64 {
        self.coefficients.iter().map(|a| a * a).sum()
    }

    /// `Σ |a_j|`.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.coefficients.iter().map(|a| a.abs()).sum()
    }

    /// `P(rz)` as a polynomial in `z`.
    pub fn scaled(&self, r: f64) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .zip(powers(r, self.coefficients.len()))
            .map(|(a, rj)| a * rj)
            .collect();
        Self { coefficients }
    }

    /// `αp + βq`, padding the shorter coefficient vector with zeros.
    pub fn linear_combination(alpha: f64, p: &Self, beta: f64, q: &Self) -> Self {
        let len = p.coefficients.len().max(q.coefficients.len());
        let coefficients = (0..len)
            .map(|i| {
                let a = p.coefficients.get(i).copied().unwrap_or(0.0);
                let b = q.coefficients.get(i).copied().unwrap_or(0.0);
                alpha * a + beta * b
            })
            .collect();
        Self { coefficients }
    }
}

fn powers(r: f64, count: usize) -> impl Iterator<Item = f64> {
    std::iter::successors(Some(1.0), move |p| Some(p * r)).take(count)
}

/// A point `e^{it}` on the unit circle, stored by its angle reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite {
                name: "theta",
                value: theta,
            });
        }
        let reduced = theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        Ok(Self(if reduced >= TAU { 0.0 } else { reduced }))
    }

    pub fn theta(self) -> f64 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}
