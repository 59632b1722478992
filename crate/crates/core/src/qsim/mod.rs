//! Dense simulation of the quantum side at small `p`.
//!
//! Single-copy registers are `(r, s)` with index `r * p + s`; `k` copies are
//! ordered `(r_1, s_1, ..., r_k, s_k)`. After the Fourier transform on the
//! value register the second index of each copy is the label `x_j`.

pub mod dense;
pub mod detect;
pub mod oracle;
pub mod relabel;
pub mod run;

pub use dense::{
    coset_state, fourier_conjugate, measure_x_block, off_block_residual, polynomial_state,
    DensityOperator, DENSE_DIM_LIMIT,
};
pub use detect::{outcome_distribution, validate_pipeline, DensePipeline, PipelineValidation};
pub use oracle::BlackBox;
pub use relabel::{build_ux, psi_state, reduced_state_from_solutions, CompletionOrder};
pub use run::{run_algorithm, MeasurementOutcome, RunTranscript};
