//! Averages and maxima of `|P|` for one fixed polynomial on the unit circle
//! and the unit disc.
//!
//! Angular means use the uniform grid `t_m = 2πm/N`, which integrates any
//! trigonometric polynomial of degree below `N` exactly; `|P|²` has degree
//! `n`, so `N ≥ 2n + 1` is enforced as a hard precondition. Radial integrals
//! use composite Simpson.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{golden_section_max, pairwise_mean, pairwise_sum, simpson_weights};
use crate::poly::RealPolynomial;

/// Minimum angular nodes for [`circle_mean_abs`].
pub const MIN_ABS_NODES: usize = 64;
/// Minimum angular nodes for [`max_modulus`].
pub const MIN_MAX_NODES: usize = 256;
/// Default radial Simpson nodes.
pub const DEFAULT_RADIAL_NODES: usize = 65;

const GOLDEN_ITERATIONS: usize = 40;
/// Relative slack within which the sandwich bounds are snapped onto the value.
const ROUNDING_SLACK: f64 = 1e-12;

/// Uniform angular grid plus an optional radial Simpson grid on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureGrid {
    node_count: usize,
    radial_node_count: usize,
}

impl QuadratureGrid {
    pub fn new(node_count: usize, radial_node_count: usize) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::GridTooSmall {
                what: "angular grid",
                required: 1,
                actual: 0,
            });
        }
        Ok(Self {
            node_count,
            radial_node_count,
        })
    }

    /// Angular-only grid with the default radial count.
    pub fn circle(node_count: usize) -> Result<Self> {
        Self::new(node_count, DEFAULT_RADIAL_NODES)
    }

    /// Smallest grid for which [`disc_mean_sq`] integrates every `r^{2j}`,
    /// `j ≤ degree`, to about 1e-9 relative accuracy under `measure`.
    ///
    /// Simpson's error on `∫₀¹ r^m dr` is `h⁴ m(m−1)(m−2)/180` to leading
    /// order, which fixes the step size.
    pub fn for_disc(degree: usize, measure: DiscMeasure) -> Self {
        let m = (2 * degree + measure.weight_power()) as f64;
        let growth = m * (m - 1.0) * (m - 2.0) * (m + 1.0) / 180.0;
        let intervals = if growth <= 0.0 {
            DEFAULT_RADIAL_NODES - 1
        } else {
            // factor 2 of headroom over the leading-order estimate
            let h = (0.5e-9 / growth).powf(0.25);
            ((1.0 / h).ceil() as usize).max(DEFAULT_RADIAL_NODES - 1)
        };
        let intervals = intervals + intervals % 2;
        Self {
            node_count: 2 * degree + 1,
            radial_node_count: intervals + 1,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn radial_node_count(&self) -> usize {
        self.radial_node_count
    }

    pub fn with_radial(self, radial_node_count: usize) -> Self {
        Self {
            radial_node_count,
            ..self
        }
    }

    fn angle(&self, m: usize) -> f64 {
        TAU * m as f64 / self.node_count as f64
    }

    fn require(&self, what: &'static str, required: usize) -> Result<()> {
        if self.node_count < required {
            return Err(Error::GridTooSmall {
                what,
                required,
                actual: self.node_count,
            });
        }
        Ok(())
    }

    fn require_radial(&self) -> Result<()> {
        if self.radial_node_count < 2 {
            return Err(Error::GridTooSmall {
                what: "radial grid",
                required: 2,
                actual: self.radial_node_count,
            });
        }
        Ok(())
    }
}

/// Measure used for averages over the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscMeasure {
    /// `dr·dt/(2π)` on `[0,1]×[0,2π]`: uniform in the radius.
    #[default]
    Radial,
    /// `r·dr·dt/π`: uniform in area.
    Area,
}

impl DiscMeasure {
    fn weight_power(self) -> usize {
        match self {
            Self::Radial => 0,
            Self::Area => 1,
        }
    }

    /// Density in `r` after the angular average.
    fn radial_weight(self, r: f64) -> f64 {
        match self {
            Self::Radial => 1.0,
            Self::Area => 2.0 * r,
        }
    }

    /// Exact disc mean of `r^{2j}` under this measure.
    pub fn monomial_mean(self, j: usize) -> f64 {
        match self {
            Self::Radial => 1.0 / (2 * j + 1) as f64,
            Self::Area => 1.0 / (j + 1) as f64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Radial => "radial",
            Self::Area => "area",
        }
    }
}

impl fmt::Display for DiscMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiscMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "radial" => Ok(Self::Radial),
            "area" => Ok(Self::Area),
            _ => Err(Error::UnknownMeasure(s.to_owned())),
        }
    }
}

fn circle_values(p: &RealPolynomial, grid: &QuadratureGrid) -> Vec<Complex64> {
    (0..grid.node_count)
        .map(|m| p.eval_complex(Complex64::from_polar(1.0, grid.angle(m))))
        .collect()
}

/// `(1/N) Σ_m |P(e^{it_m})|²`, which equals `Σ a_j²` exactly when `N ≥ 2n + 1`.
pub fn circle_mean_sq(p: &RealPolynomial, grid: &QuadratureGrid) -> Result<f64> {
    grid.require("circle_mean_sq", 2 * p.degree() + 1)?;
    let sq: Vec<f64> = circle_values(p, grid)
        .iter()
        .map(|v| v.norm_sqr())
        .collect();
    Ok(pairwise_mean(&sq))
}

/// Uniform-grid mean of `|P(e^{it})|`. Not exact, since `|P|` is not a
/// trigonometric polynomial; the error decays with `N`.
pub fn circle_mean_abs(p: &RealPolynomial, grid: &QuadratureGrid) -> Result<f64> {
    Ok(circle_means(p, grid)?.0)
}

/// Grid means of `|P|` and `|P|²` from one set of evaluations, so that
/// `mean_abs ≤ √mean_sq` can be checked on the same values.
pub fn circle_means(p: &RealPolynomial, grid: &QuadratureGrid) -> Result<(f64, f64)> {
    grid.require("circle_mean_abs", (2 * p.degree() + 1).max(MIN_ABS_NODES))?;
    let values = circle_values(p, grid);
    let abs: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let sq: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    // summing N equal values can round the mean one ulp past the maximum
    let max_abs = abs.iter().copied().fold(0.0, f64::max);
    Ok((pairwise_mean(&abs).min(max_abs), pairwise_mean(&sq)))
}

fn radial_nodes(grid: &QuadratureGrid) -> impl Iterator<Item = (f64, f64)> {
    let count = grid.radial_node_count;
    let weights = simpson_weights(count, 1.0);
    weights
        .into_iter()
        .enumerate()
        .map(move |(i, w)| (i as f64 / (count - 1) as f64, w))
}

/// Disc average of `|P|²` by quadrature: the exact angular rule at each
/// radial node, then composite Simpson in `r` under `measure`.
pub fn disc_mean_sq(
    p: &RealPolynomial,
    grid: &QuadratureGrid,
    measure: DiscMeasure,
) -> Result<f64> {
    grid.require("disc_mean_sq", 2 * p.degree() + 1)?;
    grid.require_radial()?;
    let terms = radial_nodes(grid)
        .map(|(r, w)| {
            let ring = circle_mean_sq(&p.scaled(r), grid)?;
            Ok(w * measure.radial_weight(r) * ring)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// Closed-form disc average of `|P|²`: `Σ a_j²/(2j+1)` under the radial
/// measure, `Σ a_j²/(j+1)` under the area measure.
pub fn disc_mean_sq_closed(p: &RealPolynomial, measure: DiscMeasure) -> f64 {
    p.coefficients()
        .iter()
        .enumerate()
        .map(|(j, a)| a * a * measure.monomial_mean(j))
        .sum()
}

/// Disc average of `|P|` by quadrature (uniform angular grid, Simpson in `r`).
pub fn disc_mean_abs(
    p: &RealPolynomial,
    grid: &QuadratureGrid,
    measure: DiscMeasure,
) -> Result<f64> {
    grid.require("disc_mean_abs", (2 * p.degree() + 1).max(MIN_ABS_NODES))?;
    grid.require_radial()?;
    let terms = radial_nodes(grid)
        .map(|(r, w)| {
            let ring = circle_mean_abs(&p.scaled(r), grid)?;
            Ok(w * measure.radial_weight(r) * ring)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&terms))
}

/// `(1/n) Σ_{j<n} P(ωʲz)` with `ω = e^{2πi/n}`; equals `a₀ + aₙzⁿ`.
pub fn roots_of_unity_average(p: &RealPolynomial, z: Complex64) -> Result<Complex64> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidDegree(
            "roots-of-unity average needs degree at least 1",
        ));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite {
            name: "z",
            value: if z.re.is_finite() { z.im } else { z.re },
        });
    }
    let sum = (0..n)
        .map(|j| p.eval_complex(Complex64::from_polar(1.0, TAU * j as f64 / n as f64) * z))
        .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v);
    Ok(sum / n as f64)
}

/// Estimated maximum of `|P|` on the unit circle together with the
/// classical bounds that sandwich it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxModulusEstimate {
    pub value: f64,
    pub arg_theta: f64,
    /// `|a₀| + |aₙ|` (just `|a₀|` for a constant).
    pub lower_bound: f64,
    /// `√(n+1) · √Σa_j²`.
    pub upper_bound: f64,
}

/// `|a₀| + |aₙ|` for `n ≥ 1`, `|a₀|` for a constant.
pub fn endpoint_lower_bound(p: &RealPolynomial) -> f64 {
    if p.degree() == 0 {
        p.constant().abs()
    } else {
        p.constant().abs() + p.leading().abs()
    }
}

/// Maximum of `|P(e^{it})|` over the uniform grid, the `n` angles where
/// `|a₀ + aₙe^{int}| = |a₀| + |aₙ|`, and golden-section refinement around every
/// grid-local maximum.
///
/// Including those `n` angles makes the result at least `|a₀| + |aₙ|`: they
/// form one orbit `ωʲz*`, and the mean of `P` over it is `a₀ + aₙz*ⁿ`.
pub fn max_modulus(p: &RealPolynomial, grid: &QuadratureGrid) -> Result<MaxModulusEstimate> {
    let n = p.degree();
    grid.require("max_modulus", (2 * n + 1).max(MIN_MAX_NODES))?;
    let lower_bound = endpoint_lower_bound(p);
    let upper_bound = ((n + 1) as f64).sqrt() * p.coeff_norm_sq().sqrt();

    let values: Vec<f64> = circle_values(p, grid).iter().map(|v| v.norm()).collect();
    let (mut arg_theta, mut value) =
        values
            .iter()
            .enumerate()
            .fold((0.0, f64::NEG_INFINITY), |(bt, bv), (m, &v)| {
                if v > bv {
                    (grid.angle(m), v)
                } else {
                    (bt, bv)
                }
            });

    if n >= 1 {
        let phase = if p.constant() * p.leading() >= 0.0 {
            0.0
        } else {
            PI
        };
        for k in 0..n {
            let t = (TAU * k as f64 + phase) / n as f64;
            let v = p.abs_on_circle(t);
            if v > value {
                value = v;
                arg_theta = t;
            }
        }

        let count = values.len();
        let h = TAU / count as f64;
        for m in 0..count {
            let prev = values[(m + count - 1) % count];
            let next = values[(m + 1) % count];
            if values[m] >= prev && values[m] >= next {
                let t0 = grid.angle(m);
                let (t, v) =
                    golden_section_max(|t| p.abs_on_circle(t), t0 - h, t0 + h, GOLDEN_ITERATIONS);
                if v > value {
                    value = v;
                    arg_theta = t.rem_euclid(TAU);
                }
            }
        }
    }

    // rounding can leave the value a few ulps outside the sandwich
    let slack = ROUNDING_SLACK * upper_bound.max(f64::MIN_POSITIVE);
    if value < lower_bound && lower_bound - value <= slack {
        value = lower_bound;
    }
    if value > upper_bound && value - upper_bound <= slack {
        value = upper_bound;
    }

    Ok(MaxModulusEstimate {
        value,
        arg_theta,
        lower_bound,
        upper_bound,
    })
}

/// `max|P′| / max|P|` on the unit circle, both estimated with [`max_modulus`]
/// on the same grid. Bernstein's inequality bounds it by `n`.
pub fn bernstein_ratio(p: &RealPolynomial, grid: &QuadratureGrid) -> Result<f64> {
    if p.degree() == 0 {
        return Err(Error::UndefinedRatio("constant polynomial"));
    }
    let max_p = max_modulus(p, grid)?.value;
    if max_p == 0.0 {
        return Err(Error::UndefinedRatio("zero polynomial"));
    }
    let max_dp = max_modulus(&p.derivative(), grid)?.value;
    Ok(max_dp / max_p)
}
