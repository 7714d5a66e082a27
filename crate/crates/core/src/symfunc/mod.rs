//! Hall–Littlewood and Macdonald symmetric functions with exact rational
//! arithmetic.

pub mod branching;
pub mod expand;
pub mod factorization;
pub mod hl;
pub mod kernel;
pub mod laurent;
pub mod signature;

pub use branching::{branch_coefficient, Params, SkewKind};
pub use expand::{expand_in_p, structure_coeffs};
pub use factorization::{verify_factorization, Block, FactorizationReport};
pub use hl::{
    b_lambda, p_eval, p_monomial_coefficient, p_poly, principal_p, principal_q, principal_q_infinite, q_eval,
    skew_eval, skew_poly,
};
pub use kernel::{cauchy_kernel, pochhammer, Count, Value};
pub use laurent::LaurentPoly;
pub use signature::{signatures_of_size, Signature};
