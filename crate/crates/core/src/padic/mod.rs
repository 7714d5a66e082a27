//! Matrices over `Z/p^D`: Haar sampling, Smith normal form with precision
//! censoring, and product chains.

pub mod chain;
pub mod extsig;
pub mod matrix;
mod ring;
mod smith;

pub use chain::{auto_precision, corner_factor, product_chain_with, sn_product_chain, Dim, Precision};
pub use extsig::{ExtendedSignature, SnPart};
pub use matrix::{uses_word_storage, PadicMatrix};
pub(crate) use ring::is_prime;
