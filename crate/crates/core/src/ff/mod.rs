//! Arithmetic over prime fields and their finite extensions.

mod binom;
mod ext;
mod factor;
mod mpoly;
mod poly;
mod prime;

pub use binom::{binomial_mod_p, BinomTable};
pub use ext::{ext_roots, ExtElem, ExtField};
pub use factor::{factor, distinct_root_count, is_irreducible, square_free, Factorization};
pub use mpoly::MultiPoly;
pub use poly::UniPoly;
pub use prime::{is_prime_u64, PrimeField};
