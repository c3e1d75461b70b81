//! Numerics for the scalar neutral delay differential equation
//!
//! ```text
//! y'(t) + c y'(t-1) + f(y(t)) + g(y(t-1)) = s(t),   t > 0,   c = ±1
//! ```
//!
//! in the critical regime `|c| = 1`, where the characteristic roots of the
//! linearization accumulate on the imaginary axis and exponential stability
//! is lost.
//!
//! The crate is `no_std` (it needs `alloc`) and does no IO. It provides:
//!
//! * [`nonlinearity`] and [`source`]: the catalog of `f`, `g` and forcing
//!   terms with exact derivatives, antiderivatives and inverses;
//! * [`problem`]: the problem model, hypothesis validation and equilibria;
//! * [`stepper`]: method-of-steps integration on a delay-aligned grid;
//! * [`energy`]: energy functionals and identities as diagnostics;
//! * [`spectrum`]: characteristic roots, argument-principle counting and the
//!   `(a, b)` stability diagram;
//! * [`divisors`]: small-divisor sequences, rational periods and the
//!   Diophantine margin;
//! * [`periodic`]: Fourier-multiplier, reduced-ODE and fixed-point periodic
//!   solvers.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod divisors;
pub mod energy;
pub mod error;
mod math;
pub mod nonlinearity;
pub mod periodic;
pub mod problem;
pub mod source;
pub mod spectrum;
pub mod stepper;

pub use error::{Error, Result};
pub use math::Complex;
pub use nonlinearity::{MonotoneSpline, Nonlinearity};
pub use problem::{History, Interval, Neutral, NddeProblem};
pub use source::{FourierSeries, SourceSpec};
pub use spectrum::LinearCoefficients;
