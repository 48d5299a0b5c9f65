//! Seeded Monte Carlo over ensembles of random polynomials.
//!
//! Sample `i` of an ensemble always draws from stream `(seed, i)`, and
//! per-sample values are collected in index order before a pairwise
//! reduction, so results do not depend on the number of worker threads.
//! Parallel work runs on the current rayon pool; callers pick the worker
//! count with `ThreadPool::install`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{
    circle_means, disc_mean_abs, disc_mean_sq_closed, max_modulus, DiscMeasure, QuadratureGrid,
    DEFAULT_RADIAL_NODES, MIN_ABS_NODES, MIN_MAX_NODES,
};
use crate::numeric::pairwise_mean;
use crate::poly::RealPolynomial;
use crate::sampling::{sample_polynomial, CoefficientDistribution, SampleStream, AUX_COUNTER};
use crate::special::{folded_normal_mean, folded_sum_tail, harmonic, odd_harmonic_sum};

/// Pass/fail slack, in standard errors.
pub const SIGMA_SLACK: f64 = 3.0;

/// Degree, coefficient law, sample count and master seed of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub degree: usize,
    pub dist: CoefficientDistribution,
    pub samples: u64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(
        degree: usize,
        dist: CoefficientDistribution,
        samples: u64,
        seed: u64,
    ) -> Result<Self> {
        if samples < 2 {
            return Err(Error::TooFewSamples(samples));
        }
        Ok(Self {
            degree,
            dist,
            samples,
            seed,
        })
    }

    pub fn with_samples(self, samples: u64) -> Result<Self> {
        Self::new(self.degree, self.dist, samples, self.seed)
    }

    pub fn with_dist(self, dist: CoefficientDistribution) -> Self {
        Self { dist, ..self }
    }

    pub fn stream(&self, index: u64) -> SampleStream {
        SampleStream::new(self.seed, index)
    }

    pub fn polynomial(&self, index: u64) -> RealPolynomial {
        sample_polynomial(self.degree, self.dist, &self.stream(index))
    }

    /// `E|P(z)|²` for fixed `z` on the unit circle: `(n+1)·E[A²]`.
    fn circle_second_moment(&self) -> f64 {
        (self.degree + 1) as f64 * self.dist.second_moment()
    }

    fn extension_note(&self) -> Option<String> {
        match self.dist {
            CoefficientDistribution::StandardNormal => None,
            CoefficientDistribution::UniformSymmetric => {
                Some("extension: uniform coefficients, targets scaled by E[A^2] = 1/3".to_owned())
            }
        }
    }
}

/// Monte Carlo point estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: u64,
}

impl Estimate {
    /// Panics on fewer than two values.
    pub fn from_values(values: &[f64]) -> Self {
        assert!(values.len() >= 2, "an estimate needs at least two samples");
        let mean = pairwise_mean(values);
        let deviations: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let variance = pairwise_mean(&deviations) * values.len() as f64 / (values.len() - 1) as f64;
        Self {
            mean,
            std_error: (variance / values.len() as f64).sqrt(),
            samples: values.len() as u64,
        }
    }

    /// Sample variance recovered from the standard error.
    pub fn sample_variance(&self) -> f64 {
        self.std_error * self.std_error * self.samples as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// The empirical value should not exceed the bound.
    Upper,
    /// The empirical value should not fall below the bound.
    Lower,
    /// The empirical value should match the bound (an exact expectation).
    Equal,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
            Self::Equal => "equal",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A side quantity reported next to the main comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Companion {
    pub label: &'static str,
    pub value: f64,
}

/// An empirical estimate checked against a theoretical value.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub estimate: Estimate,
    pub bound: f64,
    pub kind: BoundKind,
    /// `bound − empirical` (upper), `empirical − bound` (lower) or
    /// `−|empirical − bound|` (equal); negative means on the wrong side.
    pub margin: f64,
    /// `margin ≥ −3·std_error`.
    pub pass: bool,
    pub companions: Vec<Companion>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(estimate: Estimate, bound: f64, kind: BoundKind) -> Self {
        let empirical = estimate.mean;
        let margin = match kind {
            BoundKind::Upper => bound - empirical,
            BoundKind::Lower => empirical - bound,
            BoundKind::Equal => -(empirical - bound).abs(),
        };
        Self {
            estimate,
            bound,
            kind,
            margin,
            pass: margin >= -SIGMA_SLACK * estimate.std_error,
            companions: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn empirical(&self) -> f64 {
        self.estimate.mean
    }

    pub fn companion(&self, label: &str) -> Option<f64> {
        self.companions
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.value)
    }

    fn with_companion(mut self, label: &'static str, value: f64) -> Self {
        self.companions.push(Companion { label, value });
        self
    }

    fn with_note(mut self, note: Option<String>) -> Self {
        self.notes.extend(note);
        self
    }
}

fn per_sample<F>(samples: u64, f: F) -> Vec<f64>
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    (0..samples).into_par_iter().map(f).collect()
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// Mean over the ensemble of the exact circle average `Σ A_j²`.
pub fn expected_circle_sq(spec: &EnsembleSpec) -> Estimate {
    let values = per_sample(spec.samples, |i| spec.polynomial(i).coeff_norm_sq());
    Estimate::from_values(&values)
}

/// [`expected_circle_sq`] against `(n+1)·E[A²]`, which is `n + 1` for
/// standard normal coefficients.
pub fn circle_sq_report(spec: &EnsembleSpec) -> BoundReport {
    BoundReport::new(
        expected_circle_sq(spec),
        spec.circle_second_moment(),
        BoundKind::Equal,
    )
    .with_note(spec.extension_note())
}

/// Per-sample grid means `(mean|P|, mean|P|²)` on the unit circle.
pub fn circle_abs_samples(spec: &EnsembleSpec, grid: &QuadratureGrid) -> Result<Vec<(f64, f64)>> {
    (0..spec.samples)
        .into_par_iter()
        .map(|i| circle_means(&spec.polynomial(i), grid))
        .collect()
}

/// Ensemble mean of the circle average of `|P|` against `√((n+1)·E[A²])`.
pub fn expected_circle_abs(spec: &EnsembleSpec, grid: &QuadratureGrid) -> Result<BoundReport> {
    let pairs = circle_abs_samples(spec, grid)?;
    let abs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let sq: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let violations = pairs.iter().filter(|(a, s)| *a > s.sqrt()).count();
    let mean_sq = pairwise_mean(&sq);
    Ok(BoundReport::new(
        Estimate::from_values(&abs),
        spec.circle_second_moment().sqrt(),
        BoundKind::Upper,
    )
    .with_companion("sqrt of ensemble mean |P|^2", mean_sq.sqrt())
    .with_companion("per-sample Cauchy-Schwarz violations", violations as f64)
    .with_note(spec.extension_note()))
}

/// Frequency of `|P(e^{iθ})| > c·√((n+1)·E[A²])` over pairs `(P, θ)` with one
/// uniform `θ` per sampled polynomial, against Markov's `1/c²`.
pub fn markov_tail_circle(spec: &EnsembleSpec, c: f64) -> Result<BoundReport> {
    require_positive("threshold", c)?;
    let level = c * spec.circle_second_moment().sqrt();
    let hits = per_sample(spec.samples, |i| {
        let stream = spec.stream(i);
        let p = sample_polynomial(spec.degree, spec.dist, &stream);
        let theta = std::f64::consts::TAU * stream.unit(AUX_COUNTER);
        if p.abs_on_circle(theta) > level {
            1.0
        } else {
            0.0
        }
    });
    Ok(BoundReport::new(
        Estimate::from_values(&hits),
        1.0 / (c * c),
        BoundKind::Upper,
    )
    .with_companion("threshold c", c)
    .with_note(spec.extension_note()))
}

/// Exact disc mean of `r^{2j}`-weighted second moments: `E[A²]·Σ_j mean(r^{2j})`.
fn disc_target(spec: &EnsembleSpec, measure: DiscMeasure) -> f64 {
    let n = spec.degree as u64;
    let sum = match measure {
        DiscMeasure::Radial => odd_harmonic_sum(n),
        DiscMeasure::Area => harmonic(n + 1).expect("n + 1 ≥ 1"),
    };
    spec.dist.second_moment() * sum
}

fn measure_note(measure: DiscMeasure) -> Option<String> {
    match measure {
        DiscMeasure::Radial => None,
        DiscMeasure::Area => Some("area-uniform disc measure: target E[A^2]*H_{n+1}".to_owned()),
    }
}

/// Ensemble mean of the closed-form disc average `Σ A_j²/(2j+1)`, checked for
/// equality against `H_{2n+1} − H_n/2` (radial measure, Gaussian coefficients).
pub fn expected_disc_sq(spec: &EnsembleSpec, measure: DiscMeasure) -> BoundReport {
    let values = per_sample(spec.samples, |i| {
        disc_mean_sq_closed(&spec.polynomial(i), measure)
    });
    BoundReport::new(
        Estimate::from_values(&values),
        disc_target(spec, measure),
        BoundKind::Equal,
    )
    .with_note(spec.extension_note())
    .with_note(measure_note(measure))
}

/// Ensemble mean of the quadrature disc average of `|P|`, against the square
/// root of the disc second moment.
pub fn expected_disc_abs(
    spec: &EnsembleSpec,
    grid: &QuadratureGrid,
    measure: DiscMeasure,
) -> Result<BoundReport> {
    let values = (0..spec.samples)
        .into_par_iter()
        .map(|i| disc_mean_abs(&spec.polynomial(i), grid, measure))
        .collect::<Result<Vec<f64>>>()?;
    Ok(BoundReport::new(
        Estimate::from_values(&values),
        disc_target(spec, measure).sqrt(),
        BoundKind::Upper,
    )
    .with_note(spec.extension_note())
    .with_note(measure_note(measure)))
}

fn endpoint_sum(spec: &EnsembleSpec, index: u64) -> f64 {
    let stream = spec.stream(index);
    stream.draw(spec.dist, 0).abs() + stream.draw(spec.dist, spec.degree as u64).abs()
}

fn require_endpoints(spec: &EnsembleSpec) -> Result<()> {
    if spec.degree == 0 {
        return Err(Error::InvalidDegree(
            "|A_0| + |A_n| needs two distinct coefficients (degree at least 1)",
        ));
    }
    Ok(())
}

/// `E[|A₀| + |Aₙ|]`; exactly `2·E|A|`.
///
/// Only the two end coefficients are drawn, at the same counters as in the
/// full polynomial of each sample.
pub fn endpoint_sum_mean(spec: &EnsembleSpec) -> Result<Estimate> {
    require_endpoints(spec)?;
    Ok(Estimate::from_values(&per_sample(spec.samples, |i| {
        endpoint_sum(spec, i)
    })))
}

fn endpoint_tail(spec: &EnsembleSpec, c: f64) -> Result<Estimate> {
    require_positive("threshold", c)?;
    require_endpoints(spec)?;
    let hits = per_sample(spec.samples, |i| {
        if endpoint_sum(spec, i) >= c {
            1.0
        } else {
            0.0
        }
    });
    Ok(Estimate::from_values(&hits))
}

const MAX_TAIL_NOTE: &str =
    "bound is Markov on |A_0|+|A_n| (a lower bound for max|P|); no upper bound is claimed for P(max|P| >= c)";

/// `P(|A₀| + |Aₙ| ≥ c) ≤ 1/c` for coefficients uniform on `[−1, 1]`.
///
/// With `grid`, the frequency of `max_{|z|=1}|P| ≥ c` is reported alongside,
/// without a bound.
pub fn max_tail_uniform(
    spec: &EnsembleSpec,
    c: f64,
    grid: Option<&QuadratureGrid>,
) -> Result<BoundReport> {
    if spec.dist != CoefficientDistribution::UniformSymmetric {
        return Err(Error::WrongDistribution {
            experiment: "max-uniform",
            expected: "uniform",
        });
    }
    let tail = endpoint_tail(spec, c)?;
    let mut report = BoundReport::new(tail, 1.0 / c, BoundKind::Upper)
        .with_companion("threshold c", c)
        .with_note(Some(MAX_TAIL_NOTE.to_owned()));
    if let Some(grid) = grid {
        let hits = (0..spec.samples)
            .into_par_iter()
            .map(|i| {
                let est = max_modulus(&spec.polynomial(i), grid)?;
                Ok(if est.value >= c { 1.0 } else { 0.0 })
            })
            .collect::<Result<Vec<f64>>>()?;
        report = report.with_companion(
            "frequency of grid max|P| >= c (no bound)",
            pairwise_mean(&hits),
        );
    }
    Ok(report)
}

/// `P(|A₀| + |Aₙ| ≥ c) ≤ 2√(2/π)/c` for standard normal coefficients, with
/// the tail integral of the folded-sum density as a cross-check.
pub fn max_tail_gaussian(spec: &EnsembleSpec, c: f64) -> Result<BoundReport> {
    if spec.dist != CoefficientDistribution::StandardNormal {
        return Err(Error::WrongDistribution {
            experiment: "max-gaussian",
            expected: "gaussian",
        });
    }
    let tail = endpoint_tail(spec, c)?;
    Ok(
        BoundReport::new(tail, 2.0 * folded_normal_mean() / c, BoundKind::Upper)
            .with_companion("threshold c", c)
            .with_companion("folded-sum density tail integral", folded_sum_tail(c))
            .with_note(Some(MAX_TAIL_NOTE.to_owned())),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    CircleSq,
    CircleAbs,
    MarkovTail,
    DiscSq,
    DiscAbs,
    MaxUniform,
    MaxGaussian,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Self::CircleSq,
        Self::CircleAbs,
        Self::MarkovTail,
        Self::DiscSq,
        Self::DiscAbs,
        Self::MaxUniform,
        Self::MaxGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::CircleSq => "circle-sq",
            Self::CircleAbs => "circle-abs",
            Self::MarkovTail => "markov-tail",
            Self::DiscSq => "disc-sq",
            Self::DiscAbs => "disc-abs",
            Self::MaxUniform => "max-uniform",
            Self::MaxGaussian => "max-gaussian",
        }
    }

    fn valid_identifiers() -> String {
        let mut names: Vec<&str> = Self::ALL.iter().map(|e| e.name()).collect();
        names.push("all");
        names.join(", ")
    }

    /// Resolves an identifier, with `all` expanding to every experiment.
    pub fn parse_selection(name: &str) -> Result<Vec<Experiment>> {
        if name == "all" {
            return Ok(Self::ALL.to_vec());
        }
        name.parse().map(|e| vec![e])
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExperiment {
                name: s.to_owned(),
                valid: Self::valid_identifiers(),
            })
    }
}

/// Thresholds and quadrature settings shared by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    /// Tail threshold `c`; defaults to [`DEFAULT_THRESHOLD`].
    pub threshold: Option<f64>,
    /// Angular nodes; defaults to the smallest valid grid for each experiment.
    pub grid_nodes: Option<usize>,
    pub radial_nodes: usize,
    pub measure: DiscMeasure,
    /// Sample cap for `circle-abs` (one grid per sample).
    pub circle_abs_cap: u64,
    /// Sample cap for `disc-abs` (one 2-D quadrature per sample).
    pub disc_abs_cap: u64,
    /// Also report the grid-max frequency in `max-uniform`.
    pub grid_max_companion: bool,
    /// Fill `wall_time_ms`; off by default so output is reproducible byte for byte.
    pub timing: bool,
}

pub const DEFAULT_THRESHOLD: f64 = 2.0;

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            threshold: None,
            grid_nodes: None,
            radial_nodes: DEFAULT_RADIAL_NODES,
            measure: DiscMeasure::Radial,
            circle_abs_cap: 10_000,
            disc_abs_cap: 1_000,
            grid_max_companion: true,
            timing: false,
        }
    }
}

impl ExperimentParams {
    fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(DEFAULT_THRESHOLD)
    }

    fn grid(&self, minimum: usize) -> Result<QuadratureGrid> {
        QuadratureGrid::new(self.grid_nodes.unwrap_or(minimum), self.radial_nodes)
    }
}

/// One experiment outcome in the machine-readable report format.
///
/// Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub experiment: String,
    pub degree: usize,
    pub distribution: CoefficientDistribution,
    pub samples: u64,
    pub seed: u64,
    pub empirical: f64,
    pub std_error: f64,
    pub bound: f64,
    pub bound_kind: BoundKind,
    pub pass: bool,
    pub wall_time_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ReportRecord {
    pub fn from_report(experiment: Experiment, spec: &EnsembleSpec, report: &BoundReport) -> Self {
        let mut notes: Vec<String> = report
            .companions
            .iter()
            .map(|c| format!("{}: {}", c.label, c.value))
            .collect();
        notes.extend(report.notes.iter().cloned());
        Self {
            experiment: experiment.name().to_owned(),
            degree: spec.degree,
            distribution: spec.dist,
            samples: report.estimate.samples,
            seed: spec.seed,
            empirical: report.estimate.mean,
            std_error: report.estimate.std_error,
            bound: report.bound,
            bound_kind: report.kind,
            pass: report.pass,
            wall_time_ms: None,
            notes,
        }
    }
}

/// Runs one experiment and returns its report and the spec it actually used.
pub fn run_single(
    experiment: Experiment,
    spec: &EnsembleSpec,
    params: &ExperimentParams,
) -> Result<(EnsembleSpec, BoundReport)> {
    let n = spec.degree;
    match experiment {
        Experiment::CircleSq => Ok((*spec, circle_sq_report(spec))),
        Experiment::CircleAbs => {
            let spec = spec.with_samples(spec.samples.min(params.circle_abs_cap))?;
            let grid = params.grid((2 * n + 1).max(MIN_ABS_NODES))?;
            Ok((spec, expected_circle_abs(&spec, &grid)?))
        }
        Experiment::MarkovTail => Ok((*spec, markov_tail_circle(spec, params.threshold())?)),
        Experiment::DiscSq => Ok((*spec, expected_disc_sq(spec, params.measure))),
        Experiment::DiscAbs => {
            let spec = spec.with_samples(spec.samples.min(params.disc_abs_cap))?;
            let grid = params.grid((2 * n + 1).max(MIN_ABS_NODES))?;
            Ok((spec, expected_disc_abs(&spec, &grid, params.measure)?))
        }
        Experiment::MaxUniform => {
            let grid = params.grid((2 * n + 1).max(MIN_MAX_NODES))?;
            let grid = params.grid_max_companion.then_some(&grid);
            Ok((*spec, max_tail_uniform(spec, params.threshold(), grid)?))
        }
        Experiment::MaxGaussian => Ok((*spec, max_tail_gaussian(spec, params.threshold())?)),
    }
}

/// Runs `which` (an experiment identifier or `all`) and returns one record
/// per experiment.
///
/// Under `all` the two maximum-modulus experiments use their own coefficient
/// law; every other experiment uses `spec.dist`.
pub fn run_experiment(
    spec: &EnsembleSpec,
    which: &str,
    params: &ExperimentParams,
) -> Result<Vec<ReportRecord>> {
    let selection = Experiment::parse_selection(which)?;
    let whole_suite = selection.len() > 1;
    selection
        .into_iter()
        .map(|experiment| {
            let spec = match experiment {
                Experiment::MaxUniform if whole_suite => {
                    spec.with_dist(CoefficientDistribution::UniformSymmetric)
                }
                Experiment::MaxGaussian if whole_suite => {
                    spec.with_dist(CoefficientDistribution::StandardNormal)
                }
                _ => *spec,
            };
            let start = Instant::now();
            let (used, report) = run_single(experiment, &spec, params)?;
            let mut record = ReportRecord::from_report(experiment, &used, &report);
            if params.timing {
                record.wall_time_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(record)
        })
        .collect()
}
