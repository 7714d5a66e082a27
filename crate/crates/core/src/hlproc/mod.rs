//! Hall–Littlewood measures, Markov kernels and processes.

pub mod kernel;
pub mod measures;
pub mod sampler;
pub mod specialization;
pub mod uniform;

pub use kernel::{cauchy_kernel_prob, interlacing_extensions, kernel_law, kernel_prob_product_form, kernel_prob_ratio_form};
pub use measures::{
    branch_projection_limit, branch_projection_measure, cauchy_projection_limit, cauchy_projection_measure,
    corners_kernel_dist, ginibre_law, product_convolution_dist, truncated_haar_law, CornerMode, ExactLaw,
};
pub use sampler::{
    draw_arrays, draw_arrays_truncated, gx_pmf, insert, noninteracting_step, run_coupled, run_process, sample_gx,
    step_generalized, Arrays,
};
pub use specialization::{GeneralizedVariable, Length, Specialization};
pub use uniform::LazyUniform;
