//! Random sampling of normalized products and multi-start Nelder–Mead
//! estimates of `sup S` and `inf T`.
//!
//! Each restart draws from its own ChaCha stream keyed by the master seed
//! and the restart index, and restarts are merged in index order, so results
//! are bitwise reproducible regardless of the number of worker threads.

mod estimate;
mod nelder_mead;
mod sample;

pub use estimate::{
    disk_from_plane, estimate, estimate_kn, estimate_ln, plane_from_disk, product_from_params,
    Objective, SearchConfig, SearchResult, MAX_SEARCH_DEGREE,
};
pub use nelder_mead::{minimize, Minimum, NelderMeadConfig};
pub use sample::{sample_blaschke, sample_blaschke_with, stream_rng, SamplerConfig};
