//! Sampling kernels, the multi-chain driver and convergence diagnostics.

mod chains;
mod conjugate;
pub mod diagnostics;
mod slice;

pub use chains::{derive_seed, run_chains, ChainConfig, ChainRng, ChainRun, ChainTrace, Kernel, PosteriorDraws, MIN_TOTAL_KEEP};
pub use conjugate::{gibbs_inverse_gamma_var, gibbs_normal_mean, normal_mean_posterior};
pub(crate) use conjugate::{inverse_gamma_draw, normal_draw};
pub use diagnostics::{ChainDiagnostics, ParamDiagnostic, RHAT_THRESHOLD};
pub use slice::slice_sample_1d;
pub(crate) use slice::slice_step;
