//! Hasse-Witt data for cyclic covers of the projective line over finite fields.
//!
//! The crate is split along the computation:
//!
//! * [`ff`] prime fields, dense and sparse polynomials, factorization
//! * [`monodromy`] monodromy data, signatures, Frobenius orbits
//! * [`fabc`] the one-variable family `f(a,b,c)` and the `D_{p^k}` operator
//! * [`hassewitt`] matrix entries, chains along an orbit, `h0` and `h1`
//! * [`strata`] Newton polygons, stratum census and prime surveys
//! * [`cli`] configuration, cache and the command surface of the binary

pub mod cli;
pub mod error;
pub mod fabc;
pub mod ff;
pub mod hassewitt;
pub mod monodromy;
pub mod strata;

pub use error::{Error, Result};
