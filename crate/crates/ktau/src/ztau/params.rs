//! Koblitz-curve domain parameters.

use num_bigint::BigInt;

use super::{Mu, ZtauError};

/// Domain parameters of a Koblitz curve `y^2 + xy = x^3 + a*x^2 + 1` over
/// `GF(2^m)`.
///
/// `n = h * r` is the group order; it equals `N(tau^m - 1)`, which the curve
/// loader checks.  `mu = +1` iff `a = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveParams {
    /// Curve coefficient, 0 or 1.
    pub a: u8,
    /// Trace sign of the Frobenius characteristic equation.
    pub mu: Mu,
    /// Extension degree.
    pub m: u32,
    /// Group order `h * r`.
    pub n: BigInt,
    /// Prime subgroup order.
    pub r: BigInt,
    /// Cofactor: 2 when `a = 1`, 4 when `a = 0`.
    pub h: u32,
    /// Reduction-polynomial exponents, descending, e.g. `[163, 7, 6, 3, 0]`.
    pub field_poly: Vec<u32>,
}

impl CurveParams {
    pub fn new(a: u8, m: u32, r: BigInt, h: u32, field_poly: Vec<u32>) -> Result<Self, ZtauError> {
        if a > 1 || m < 2 || r <= BigInt::from(0) {
            return Err(ZtauError::OutOfRange);
        }
        let n = BigInt::from(h) * &r;
        Ok(CurveParams {
            a,
            mu: Mu::from_curve_a(a),
            m,
            n,
            r,
            h,
            field_poly,
        })
    }
}
