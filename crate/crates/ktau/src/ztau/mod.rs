//! Arithmetic in the ring `Z[tau]` and the one-dimensional scalar recoders.
//!
//! `tau = (mu + sqrt(-7))/2` satisfies `tau^2 = mu*tau - 2`, so every element
//! is written `a + b*tau` with integer coefficients.  The recoders rewrite
//! scalars as digit strings over powers of `tau`.

mod kleinian;
mod params;
mod recode;

pub use kleinian::{bit_length, tau_pow, Coeff, Kleinian, Mu};
pub(crate) use kleinian::tau_powers;
pub use params::CurveParams;
pub use recode::{
    delta, reduce_mod_delta, tau_expand_unsigned, tjsf, tnaf, TauExpansion, TauJsf, TauNaf,
};

use std::fmt;

/// Errors from `Z[tau]` operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZtauError {
    /// Exact division by `tau` requested on an element with odd rational part.
    NotDivisible,
    /// The unsigned `{0,1}` tau-adic expansion did not reach zero within the
    /// iteration cap (possible for mu = -1; never observed for mu = +1).
    NonTerminating,
    /// Integer scalar outside `[1, n-1]`.
    OutOfRange,
}

impl fmt::Display for ZtauError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZtauError::NotDivisible => write!(f, "element is not divisible by tau"),
            ZtauError::NonTerminating => {
                write!(f, "unsigned tau-adic expansion did not terminate")
            }
            ZtauError::OutOfRange => write!(f, "scalar outside [1, n-1]"),
        }
    }
}

impl std::error::Error for ZtauError {}
