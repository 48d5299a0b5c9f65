//! Seeded, counter-addressed coefficient sampling.
//!
//! Every variate is a pure function of `(master_seed, stream_index, k)`, so a
//! Monte Carlo run gives the same numbers however its samples are split
//! across threads. The raw generator is SplitMix64 evaluated at an arbitrary
//! counter position, with a per-stream key derived by hashing the seed and
//! the stream index.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RealPolynomial;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const STREAM_SALT: u64 = 0xd1b5_4a32_d192_ed03;

/// Raw counter reserved for auxiliary draws such as a random angle; coefficient
/// draws use small counters and never reach it.
pub const AUX_COUNTER: u64 = u64::MAX;

/// SplitMix64 output mixer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientDistribution {
    /// `N(0, 1)`.
    #[serde(rename = "gaussian")]
    StandardNormal,
    /// Uniform on `[−1, 1]`.
    #[serde(rename = "uniform")]
    UniformSymmetric,
}

impl CoefficientDistribution {
    pub fn name(self) -> &'static str {
        match self {
            Self::StandardNormal => "gaussian",
            Self::UniformSymmetric => "uniform",
        }
    }

    /// `E[A²]`.
    pub fn second_moment(self) -> f64 {
        match self {
            Self::StandardNormal => 1.0,
            Self::UniformSymmetric => 1.0 / 3.0,
        }
    }

    /// `E|A|`.
    pub fn abs_mean(self) -> f64 {
        match self {
            Self::StandardNormal => crate::special::folded_normal_mean(),
            Self::UniformSymmetric => 0.5,
        }
    }
}

impl fmt::Display for CoefficientDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoefficientDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Self::StandardNormal),
            "uniform" => Ok(Self::UniformSymmetric),
            _ => Err(Error::UnknownDistribution(s.to_owned())),
        }
    }
}

/// One addressable random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleStream {
    master_seed: u64,
    stream_index: u64,
    key: u64,
}

impl SampleStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let key = mix64(mix64(master_seed) ^ stream_index.wrapping_mul(STREAM_SALT));
        Self {
            master_seed,
            stream_index,
            key,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// The `k`-th raw 64-bit output.
    #[inline]
    pub fn raw(&self, k: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(k.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit(&self, k: u64) -> f64 {
        (self.raw(k) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`, safe as a logarithm argument.
    #[inline]
    fn unit_open_below(&self, k: u64) -> f64 {
        ((self.raw(k) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// The `k`-th standard normal variate.
    ///
    /// Basic Box–Muller: variates `2m` and `2m + 1` share raw draws `2m` and
    /// `2m + 1` and are the cosine and sine branches respectively.
    pub fn standard_normal(&self, k: u64) -> f64 {
        let pair = k & !1;
        let u1 = self.unit_open_below(pair);
        let u2 = self.unit(pair | 1);
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = TAU * u2;
        if k & 1 == 0 {
            radius * angle.cos()
        } else {
            radius * angle.sin()
        }
    }

    /// The `k`-th variate uniform on `[−1, 1)`.
    pub fn uniform_symmetric(&self, k: u64) -> f64 {
        2.0 * self.unit(k) - 1.0
    }

    pub fn draw(&self, dist: CoefficientDistribution, k: u64) -> f64 {
        match dist {
            CoefficientDistribution::StandardNormal => self.standard_normal(k),
            CoefficientDistribution::UniformSymmetric => self.uniform_symmetric(k),
        }
    }
}

/// A polynomial with `degree + 1` i.i.d. coefficients; coefficient `j` is
/// variate `j` of the stream.
pub fn sample_polynomial(
    degree: usize,
    dist: CoefficientDistribution,
    stream: &SampleStream,
) -> RealPolynomial {
    let coefficients = (0..=degree as u64).map(|j| stream.draw(dist, j)).collect();
    RealPolynomial::new(coefficients).expect("sampled coefficients are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(values: &[f64]) -> (f64, f64) {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn polynomial_shape_and_determinism() {
        let s = SampleStream::new(7, 3);
        for dist in [
            CoefficientDistribution::StandardNormal,
            CoefficientDistribution::UniformSymmetric,
        ] {
            assert_eq!(sample_polynomial(0, dist, &s).coefficients().len(), 1);
        }
        let s = SampleStream::new(42, 0);
        let a = sample_polynomial(5, CoefficientDistribution::StandardNormal, &s);
        let b = sample_polynomial(5, CoefficientDistribution::StandardNormal, &s);
        assert_eq!(a.coefficients().len(), 6);
        let bits = |p: &RealPolynomial| {
            p.coefficients()
                .iter()
                .map(|c| c.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn draws_are_addressable() {
        let s = SampleStream::new(99, 12);
        let forward: Vec<f64> = (0..64).map(|k| s.standard_normal(k)).collect();
        let backward: Vec<f64> = (0..64).rev().map(|k| s.standard_normal(k)).collect();
        assert!(forward.iter().eq(backward.iter().rev()));
    }

    #[test]
    fn degree_zero_gaussian_moments() {
        let values: Vec<f64> = (0..100_000u64)
            .map(|i| {
                sample_polynomial(
                    0,
                    CoefficientDistribution::StandardNormal,
                    &SampleStream::new(42, i),
                )
                .constant()
            })
            .collect();
        let (mean, var) = moments(&values);
        assert!(mean.abs() <= 0.01, "mean={mean}");
        assert!((0.99..=1.01).contains(&var), "var={var}");
    }

    #[test]
    fn standard_normal_distributional_checks() {
        let m = 1_000_000u64;
        let s = SampleStream::new(2024, 0);
        let values: Vec<f64> = (0..m).map(|k| s.standard_normal(k)).collect();
        let (mean, _) = moments(&values);
        assert!(mean.abs() <= 0.003, "mean={mean}");

        let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        let (abs_mean, abs_var) = moments(&abs);
        let se = (abs_var / m as f64).sqrt();
        assert!((abs_mean - (2.0 / std::f64::consts::PI).sqrt()).abs() <= 3.0 * se);

        let inside = values.iter().filter(|v| v.abs() <= 1.96).count() as f64 / m as f64;
        let p = 0.950_004_209_703_559_3; // P(|G| ≤ 1.96)
        let se = (p * (1.0 - p) / m as f64).sqrt();
        assert!((inside - p).abs() <= 3.0 * se, "inside={inside}");
        assert!(values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn box_muller_extremes_are_finite() {
        // raw draw 0 maps to the smallest open-interval uniform, not zero
        let tiny = 1.0 / (1u64 << 53) as f64;
        let radius = (-2.0 * tiny.ln()).sqrt();
        assert!(radius.is_finite() && radius < 8.6);
        let s = SampleStream::new(0, 0);
        for k in [0u64, 1, u64::MAX - 1, u64::MAX] {
            assert!(s.standard_normal(k).is_finite());
        }
    }

    #[test]
    fn uniform_symmetric_checks() {
        let m = 1_000_000u64;
        let s = SampleStream::new(5, 1);
        let values: Vec<f64> = (0..m).map(|k| s.uniform_symmetric(k)).collect();
        assert!(values.iter().all(|v| (-1.0..=1.0).contains(v)));

        let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        let (abs_mean, abs_var) = moments(&abs);
        assert!((abs_mean - 0.5).abs() <= 3.0 * (abs_var / m as f64).sqrt());

        let (_, var) = moments(&values);
        // Var of the sample variance for U(−1,1): (μ₄ − σ⁴)/m with μ₄ = 1/5
        let se = ((0.2 - 1.0 / 9.0) / m as f64).sqrt();
        assert!((var - 1.0 / 3.0).abs() <= 3.0 * se, "var={var}");
    }

    #[test]
    fn streams_are_uncorrelated() {
        let m = 100_000u64;
        for (i, j) in [(0u64, 1u64), (1, 2), (7, 1000)] {
            let a = SampleStream::new(42, i);
            let b = SampleStream::new(42, j);
            let xs: Vec<f64> = (0..m).map(|k| a.standard_normal(k)).collect();
            let ys: Vec<f64> = (0..m).map(|k| b.standard_normal(k)).collect();
            let (mx, vx) = moments(&xs);
            let (my, vy) = moments(&ys);
            let cov = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| (x - mx) * (y - my))
                .sum::<f64>()
                / (m as f64 - 1.0);
            let corr = cov / (vx * vy).sqrt();
            assert!(corr.abs() <= 0.01, "streams {i},{j}: corr={corr}");
        }
    }

    #[test]
    fn distribution_names_round_trip() {
        for d in [
            CoefficientDistribution::StandardNormal,
            CoefficientDistribution::UniformSymmetric,
        ] {
            assert_eq!(d.name().parse::<CoefficientDistribution>().unwrap(), d);
        }
        assert_eq!(
            "normal".parse::<CoefficientDistribution>().unwrap(),
            CoefficientDistribution::StandardNormal
        );
        assert!("cauchy".parse::<CoefficientDistribution>().is_err());
    }
}
