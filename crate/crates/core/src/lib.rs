//! Linearization on monomial ideals of commuting families of holomorphic germs.
//!
//! The crate works on truncated Taylor data: every map is known modulo degree
//! `N + 1` and every statement is checked up to that degree. Coefficients live
//! either in exact Gaussian rationals or in big floats with an explicit zero
//! tolerance (see [`scalar`]).
//!
//! * [`powerseries`]: sparse truncated series and maps, composition, inversion.
//! * [`resonance`]: small divisors `δ^i_{Q,j}`, resonant pairs, invariant monomials.
//! * [`ideal`]: monomial ideals and their compatibility with linear maps.
//! * [`smalldivisors`]: `ω_k`, Brjuno partial sums, `θ` and majorant certificates.
//! * [`linearizer`]: the degree-by-degree conjugacy solver and its verification.
//! * [`realmanifolds`]: anti-holomorphic involutions and the straightening pipeline.
//! * [`cli`]: job files and reports behind the `germlin` binary.

pub mod cli;
pub mod error;
pub mod ideal;
pub mod linearizer;
pub mod powerseries;
pub mod realmanifolds;
pub mod resonance;
pub mod scalar;
pub mod smalldivisors;

pub use error::{Error, Result};
pub use ideal::MonomialIdeal;
pub use powerseries::{CoefficientSet, Matrix, Multiindex, TruncatedMap, TruncatedSeries};
pub use resonance::DiagonalFamily;
pub use scalar::{ExactCtx, FloatComplex, FloatCtx, GaussianRational, Mode, Scalar};
