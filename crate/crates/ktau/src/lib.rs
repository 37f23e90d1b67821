//! Scalar recoding and double scalar multiplication on Koblitz curves.
//!
//! Koblitz curves `y^2 + xy = x^3 + a*x^2 + 1` over binary fields admit the
//! Frobenius endomorphism `tau: (x, y) -> (x^2, y^2)`, which satisfies
//! `tau^2 - mu*tau + 2 = 0` with `mu = (-1)^(1-a)`.  Scalars recoded over the
//! ring `Z[tau]` turn point doublings into cheap coordinate squarings.
//!
//! The crate provides:
//!
//! - [`ztau`]: arbitrary-precision arithmetic in `Z[tau]`, reduction modulo
//!   `delta = (tau^m - 1)/(tau - 1)`, and the one-dimensional recoders
//!   (unsigned tau-adic, tau-NAF, tau-JSF).
//! - [`tdfe`]: `{tau, tau-1}`-term expansions: the greedy two-dimensional
//!   expansion, window lookup tables built by exhaustive search, and the
//!   joint blocking recoder for scalar pairs.
//! - [`gf163`]: `GF(2^163)` polynomial-basis field arithmetic with an
//!   operation-counting channel.
//! - [`curve`]: point arithmetic (affine, Lopez-Dahab, mixed) and the
//!   scalar-multiplication strategies, with operation accounting.
//!
//! The core `Z[tau]` layer is generic over its integer coefficient type; the
//! aliases below fix the two instantiations used in practice.

pub mod curve;
pub mod gf163;
pub mod tdfe;
pub mod ztau;

/// Arbitrary-precision Kleinian integer `a + b*tau`; the universal scalar
/// representation for full-width (163-bit) work.
pub type KleinianInt = ztau::Kleinian<num_bigint::BigInt>;

/// Machine-word Kleinian integer for small values (window-table search,
/// per-block arithmetic).  Norms must stay below `2^62`.
pub type Kleinian64 = ztau::Kleinian<i64>;
