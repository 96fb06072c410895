//! Computation with subsets of F₂ⁿ: sumsets, exact Walsh–Hadamard spectra,
//! subspace search, and a constructive density-increment search for large
//! subspaces inside `A + A`.

pub mod concentration;
pub mod dyadic;
pub mod error;
pub mod fourier;
pub mod increment;
pub mod niveau;
pub mod rng;
pub mod search;
pub mod set;
pub mod subspace;

pub use dyadic::DyadicRational;
pub use error::{Error, Result};
pub use fourier::{convolve, Character, Convolution, Spectrum};
pub use increment::{
    codim_bound, find_subspace, iteration_step, metsch_step_bound, verify_report, FinderReport, IterationStep,
    StepOutcome, StoppingRule, Verification,
};
pub use niveau::{NiveauParams, WitnessOutcome};
pub use rng::{RandomSetSpec, SplitMix64};
pub use search::{max_subspace_in, metsch_bound, metsch_witness, subspace_of_dim_in, MetschOutcome};
pub use set::{weight, DenseSet, GroupElement, MAX_DIM};
pub use subspace::{CosetIndex, Subspace};
