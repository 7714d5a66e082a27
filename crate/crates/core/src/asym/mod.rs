//! Closed-form asymptotics: per-step jump moments, law-of-large-numbers
//! centerings, CLT scalings and Lyapunov exponents.

mod jumps;
mod lyapunov;

pub use jumps::{clt_scale, clt_variance, lln_center, mean_jump, rescale_path, var_jump, FluctuationPath};
pub use lyapunov::{lyapunov_predict, LyapunovRow};
