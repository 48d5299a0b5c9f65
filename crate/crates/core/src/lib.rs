//! Expected moduli of random polynomials on the unit circle and the unit disc.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: real-coefficient polynomials, Horner evaluation and the
//!   cosine double-sum formula for `|P(re^{it})|²`.
//! - [`special`]: harmonic sums, Gaussian moment integrals, `erf` and the
//!   folded-normal quantities used by the tail bounds.
//! - [`sampling`]: counter-addressed random streams and coefficient laws.
//! - [`norms`]: circle/disc averages, maximum modulus and the classical
//!   inequality checks for one fixed polynomial.
//! - [`ensemble`]: seeded Monte Carlo over polynomial ensembles with
//!   standard errors and bound reports.
//!
//! ```
//! use rpnorm::poly::RealPolynomial;
//! use rpnorm::norms::{circle_mean_sq, QuadratureGrid};
//!
//! let p = RealPolynomial::new(vec![1.0, -2.0, 2.0]).unwrap();
//! let grid = QuadratureGrid::circle(5).unwrap();
//! let mean = circle_mean_sq(&p, &grid).unwrap();
//! assert!((mean - 9.0).abs() < 1e-12);
//! ```

pub mod ensemble;
pub mod error;
pub mod norms;
pub mod numeric;
pub mod poly;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
