//! Kleinian integers `a + b*tau` with generic integer coefficients.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use super::ZtauError;

/// Coefficient type for `Z[tau]`: any signed integer type from the `num`
/// family.  `BigInt` is the universal choice; `i64` covers small values.
pub trait Coeff:
    Integer + Signed + FromPrimitive + ToPrimitive + Clone + fmt::Debug + fmt::Display + 'static
{
}

impl<T> Coeff for T where
    T: Integer + Signed + FromPrimitive + ToPrimitive + Clone + fmt::Debug + fmt::Display + 'static
{
}

/// Trace sign `mu = (-1)^(1-a)` of the Frobenius characteristic equation
/// `tau^2 - mu*tau + 2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mu {
    Plus,
    Minus,
}

impl Mu {
    /// `mu` for curve coefficient `a` (must be 0 or 1).
    pub fn from_curve_a(a: u8) -> Mu {
        if a == 1 {
            Mu::Plus
        } else {
            Mu::Minus
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Mu::Plus => 1,
            Mu::Minus => -1,
        }
    }

    /// `v` multiplied by `mu`.
    pub fn apply<C: Coeff>(self, v: C) -> C {
        match self {
            Mu::Plus => v,
            Mu::Minus => -v,
        }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mu::Plus => write!(f, "+1"),
            Mu::Minus => write!(f, "-1"),
        }
    }
}

/// Element `a + b*tau` of `Z[tau]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Kleinian<C> {
    pub a: C,
    pub b: C,
}

impl<C: Coeff> Kleinian<C> {
    pub fn new(a: C, b: C) -> Self {
        Kleinian { a, b }
    }

    pub fn zero() -> Self {
        Kleinian::new(C::zero(), C::zero())
    }

    pub fn one() -> Self {
        Kleinian::new(C::one(), C::zero())
    }

    pub fn tau() -> Self {
        Kleinian::new(C::zero(), C::one())
    }

    pub fn from_int(a: C) -> Self {
        Kleinian::new(a, C::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Ring product using `tau^2 = mu*tau - 2`:
    /// `(a + b*tau)(c + d*tau) = (ac - 2bd) + (ad + bc + mu*bd)*tau`.
    pub fn mul(&self, rhs: &Self, mu: Mu) -> Self {
        let two = C::one() + C::one();
        let bd = self.b.clone() * rhs.b.clone();
        let a = self.a.clone() * rhs.a.clone() - two * bd.clone();
        let b = self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.a.clone() + mu.apply(bd);
        Kleinian::new(a, b)
    }

    /// Conjugate `a + b*conj(tau)` with `conj(tau) = mu - tau`.
    pub fn conj(&self, mu: Mu) -> Self {
        Kleinian::new(self.a.clone() + mu.apply(self.b.clone()), -self.b.clone())
    }

    /// Norm `N(a + b*tau) = a^2 + mu*a*b + 2*b^2`; nonnegative, zero only at 0.
    pub fn norm(&self, mu: Mu) -> C {
        let two = C::one() + C::one();
        self.a.clone() * self.a.clone()
            + mu.apply(self.a.clone() * self.b.clone())
            + two * self.b.clone() * self.b.clone()
    }

    /// True when `tau` divides the element (the rational part is even).
    pub fn divisible_by_tau(&self) -> bool {
        self.a.is_even()
    }

    /// Exact division by `tau`: `(a + b*tau)/tau = (b + mu*a/2) - (a/2)*tau`.
    pub fn div_tau(&self, mu: Mu) -> Result<Self, ZtauError> {
        if !self.a.is_even() {
            return Err(ZtauError::NotDivisible);
        }
        let two = C::one() + C::one();
        let half = self.a.clone() / two;
        Ok(Kleinian::new(self.b.clone() + mu.apply(half.clone()), -half))
    }
}

impl<C: Coeff> Add for &Kleinian<C> {
    type Output = Kleinian<C>;
    fn add(self, rhs: &Kleinian<C>) -> Kleinian<C> {
        Kleinian::new(self.a.clone() + rhs.a.clone(), self.b.clone() + rhs.b.clone())
    }
}

impl<C: Coeff> Sub for &Kleinian<C> {
    type Output = Kleinian<C>;
    fn sub(self, rhs: &Kleinian<C>) -> Kleinian<C> {
        Kleinian::new(self.a.clone() - rhs.a.clone(), self.b.clone() - rhs.b.clone())
    }
}

impl<C: Coeff> Neg for &Kleinian<C> {
    type Output = Kleinian<C>;
    fn neg(self) -> Kleinian<C> {
        Kleinian::new(-self.a.clone(), -self.b.clone())
    }
}

impl<C: Coeff> fmt::Display for Kleinian<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}*tau", self.a, self.b.abs())
        } else {
            write!(f, "{} + {}*tau", self.a, self.b)
        }
    }
}

impl<C: Coeff> fmt::Debug for Kleinian<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// `tau^i` computed by the linear recurrence
/// `tau^(i+1) = mu*tau^i - 2*tau^(i-1)` from `tau^0 = 1`, `tau^1 = tau`.
pub fn tau_pow<C: Coeff>(i: u32, mu: Mu) -> Kleinian<C> {
    let mut powers = tau_powers(i, mu);
    powers.pop().expect("nonempty")
}

/// `tau^0 .. tau^i` inclusive.
pub(crate) fn tau_powers<C: Coeff>(i: u32, mu: Mu) -> Vec<Kleinian<C>> {
    let two = C::one() + C::one();
    let mut out: Vec<Kleinian<C>> = Vec::with_capacity(i as usize + 1);
    out.push(Kleinian::one());
    if i >= 1 {
        out.push(Kleinian::tau());
    }
    for k in 2..=i as usize {
        let a = mu.apply(out[k - 1].a.clone()) - two.clone() * out[k - 2].a.clone();
        let b = mu.apply(out[k - 1].b.clone()) - two.clone() * out[k - 2].b.clone();
        out.push(Kleinian::new(a, b));
    }
    out.truncate(i as usize + 1);
    out
}

/// Bit length of `|x|` (0 for zero).
pub fn bit_length<C: Coeff>(x: &C) -> u64 {
    let two = C::one() + C::one();
    let mut v = x.abs();
    let mut n = 0;
    while !v.is_zero() {
        v = v / two.clone();
        n += 1;
    }
    n
}
