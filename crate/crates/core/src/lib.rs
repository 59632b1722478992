//! Exact algebra and desk-scale simulation for the hidden polynomial
//! function graph problem over prime fields.
//!
//! * [`ff`] and [`poly`]: arithmetic in `F_p` and `F_p[X]`.
//! * [`systems`]: the power-map systems `Phi^(n)(b) x = w` with brute-force,
//!   quadratic and cubic solvers.
//! * [`analysis`]: eta histograms, exact success probabilities, fidelity and
//!   query-count bounds, classical collision statistics.
//! * [`qsim`]: dense density-matrix pipeline and sampled end-to-end runs.

pub mod analysis;
pub mod error;
pub mod ff;
pub mod poly;
pub mod qsim;
pub mod systems;

pub use error::{Error, Result};
pub use ff::{FieldElement, PrimeModulus};
pub use poly::{RootStrategy, UniPoly};
