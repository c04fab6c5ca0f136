//! Numerical toolkit for point distributions (zero sets) of entire functions
//! of exponential type.
//!
//! The crate works with finite multisets of complex points and the entire
//! functions built from them as factored products. It provides:
//!
//! * [`points`] — multiset algebra, counting measures and the radial counting
//!   function of a point distribution;
//! * [`logchar`] — the right/left characteristic logarithms and the
//!   logarithmic interval measures and submeasure, served from a prefix-sum
//!   profile so interval queries are `O(log n)`;
//! * [`separation`] — strict and asymptotic angle-separation of a
//!   distribution from the imaginary axis;
//! * [`entire`] — factored models of entire functions (canonical products,
//!   polynomials, sine atoms) with stable log-modulus evaluation;
//! * [`quadrature`] — the boundary functional
//!   `J(r,R;v) = (1/2pi) ∫_r^R (v(-iy)+v(iy))/y^2 dy` with singularity-aware
//!   adaptive panels;
//! * [`mrcheck`] — grid reports for the Malliavin-Rubel condition
//!   `l_Z(r,R) <= l_W(r,R) + C`, the bounded-discrepancy lemma relating `J`
//!   to the characteristic logarithms, domination checks on the imaginary
//!   axis, and the constructive witness assembly from the theorem's proof.
//!
//! All asymptotic statements of the underlying theory quantify over infinite
//! distributions; this crate works with finite truncations and reports
//! estimates together with the sampling scheme used, never certified limits.

pub mod entire;
mod error;
mod interval;
pub mod logchar;
pub mod mrcheck;
pub mod points;
pub mod quadrature;
pub mod separation;
mod sum;

pub use entire::{EntireFunctionModel, Factor};
pub use error::Error;
pub use interval::IntervalQuery;
pub use logchar::LogProfile;
pub use mrcheck::{DominationReport, GridConfig, GridReport, Verdict};
pub use points::{PointDistribution, RegionPredicate};
pub use quadrature::QuadratureResult;
pub use separation::SeparationReport;

/// Convenience alias used throughout the crate.
pub type Complex = num_complex::Complex64;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
