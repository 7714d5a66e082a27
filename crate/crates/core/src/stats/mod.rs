//! Comparing samples with exact laws.

pub mod diagnostics;
pub mod empirical;
pub mod gof;

pub use diagnostics::{independence_report, normality_report, IndependenceReport, NormalityReport};
pub use empirical::EmpiricalDist;
pub use gof::{chi_square, chi_square_two_sample, tv_distance, tv_report, tv_two_sample, GofReport, Statistic};
