//! `{tau, tau-1}`-Kleinian-integer expansions.
//!
//! A term is `sign * tau^x * (tau-1)^y`.  Single scalars get the greedy
//! two-dimensional expansion; scalar pairs go through the joint blocking
//! recoder backed by a window lookup table found by exhaustive search.

mod ktab;
mod lut;

pub use ktab::{parse_ktab, write_ktab, KtabError};
pub use lut::{gen_lut, joint_blocking, Lut, LutConfig};

use std::fmt;

use crate::ztau::{bit_length, tau_pow, Coeff, Kleinian, Mu, ZtauError};

/// Errors from expansion and table generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdfeError {
    /// Window configuration outside the supported bounds.
    InvalidConfig(String),
    /// Propagated recoding failure.
    Ztau(ZtauError),
}

impl fmt::Display for TdfeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdfeError::InvalidConfig(msg) => write!(f, "invalid table config: {msg}"),
            TdfeError::Ztau(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TdfeError {}

impl From<ZtauError> for TdfeError {
    fn from(e: ZtauError) -> Self {
        TdfeError::Ztau(e)
    }
}

/// One term `sign * tau^x * (tau-1)^y` with `sign` in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KTerm {
    pub sign: i8,
    pub x: u32,
    pub y: u32,
}

impl KTerm {
    pub fn new(sign: i8, x: u32, y: u32) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        KTerm { sign, x, y }
    }

    /// Exact value in `Z[tau]`.
    pub fn value<C: Coeff>(&self, mu: Mu) -> Kleinian<C> {
        let mut v: Kleinian<C> = tau_pow(self.x, mu);
        let tm1 = Kleinian::new(-C::one(), C::one());
        for _ in 0..self.y {
            v = v.mul(&tm1, mu);
        }
        if self.sign < 0 {
            -&v
        } else {
            v
        }
    }

    /// Ordering key: ascending `(x, y)`, positive sign first.
    fn key(&self) -> (u32, u32, u8) {
        (self.x, self.y, u8::from(self.sign < 0))
    }
}

impl PartialOrd for KTerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KTerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for KTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign < 0 { '-' } else { '+' })?;
        match (self.x, self.y) {
            (0, 0) => write!(f, "1"),
            (x, 0) => write!(f, "tau^{x}"),
            (0, y) => write!(f, "(tau-1)^{y}"),
            (x, y) => write!(f, "tau^{x}*(tau-1)^{y}"),
        }
    }
}

/// Exact evaluation of a term list.
pub fn eval_terms<C: Coeff>(terms: &[KTerm], mu: Mu) -> Kleinian<C> {
    let mut acc = Kleinian::<C>::zero();
    for t in terms {
        acc = &acc + &t.value(mu);
    }
    acc
}

/// Two-dimensional expansion of a single scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tdfe {
    pub terms: Vec<KTerm>,
}

impl Tdfe {
    /// Expansion length (the paper-facing `d`).
    pub fn d(&self) -> usize {
        self.terms.len()
    }

    pub fn eval<C: Coeff>(&self, mu: Mu) -> Kleinian<C> {
        eval_terms(&self.terms, mu)
    }

    pub fn max_y(&self) -> u32 {
        self.terms.iter().map(|t| t.y).max().unwrap_or(0)
    }
}

/// Joint expansion of a scalar pair: one term list per scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointTdfe {
    pub l0: Vec<KTerm>,
    pub l1: Vec<KTerm>,
}

impl JointTdfe {
    pub fn empty() -> Self {
        JointTdfe {
            l0: Vec::new(),
            l1: Vec::new(),
        }
    }

    pub fn eval<C: Coeff>(&self, mu: Mu) -> (Kleinian<C>, Kleinian<C>) {
        (eval_terms(&self.l0, mu), eval_terms(&self.l1, mu))
    }

    pub fn max_y(&self) -> u32 {
        self.l0
            .iter()
            .chain(self.l1.iter())
            .map(|t| t.y)
            .max()
            .unwrap_or(0)
    }
}

/// Cost of a joint expansion: the number of distinct `(x, y)` exponent pairs
/// across both lists.  A column holding digits for both scalars still costs a
/// single addition of a precomputed combination.
pub fn joint_cost(j: &JointTdfe) -> usize {
    let mut seen: Vec<(u32, u32)> = j
        .l0
        .iter()
        .chain(j.l1.iter())
        .map(|t| (t.x, t.y))
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// The in-bounds term closest to `v` by norm of the difference.
///
/// Ties break toward smaller `y`, then smaller `x`, then positive sign.
pub fn closest_kterm<C: Coeff>(v: &Kleinian<C>, x_max: u32, y_max: u32, mu: Mu) -> KTerm {
    debug_assert!(!v.is_zero());
    let mut best: Option<(C, KTerm)> = None;
    let tm1 = Kleinian::new(-C::one(), C::one());
    let mut level: Vec<Kleinian<C>> = crate::ztau::tau_powers(x_max, mu);
    for y in 0..=y_max {
        for (x, pv) in level.iter().enumerate() {
            for sign in [1i8, -1] {
                let cand = if sign > 0 { pv.clone() } else { -pv };
                let dist = (v - &cand).norm(mu);
                if best.as_ref().map_or(true, |(d, _)| dist < *d) {
                    best = Some((dist, KTerm::new(sign, x as u32, y)));
                }
            }
        }
        for p in level.iter_mut() {
            *p = p.mul(&tm1, mu);
        }
    }
    best.expect("bounds are nonempty").1
}

/// Greedy two-dimensional expansion: repeatedly subtract the closest
/// in-bounds term while that strictly decreases the remainder norm.
///
/// If no in-bounds term makes progress, the remainder is flushed as its
/// tau-NAF written with `y = 0` terms, which always exists; the expansion
/// therefore never fails.
pub fn greedy_tdfe<C: Coeff>(v: &Kleinian<C>, y_max: u32, mu: Mu) -> Tdfe {
    let mut terms = Vec::new();
    let mut rem = v.clone();
    while !rem.is_zero() {
        let x_max = (bit_length(&rem.norm(mu)) / 2 + y_max as u64 + 4) as u32;
        let t = closest_kterm(&rem, x_max, y_max, mu);
        let next = &rem - &t.value(mu);
        if next.norm(mu) < rem.norm(mu) {
            terms.push(t);
            rem = next;
        } else {
            for (i, &d) in crate::ztau::tnaf(&rem, mu).digits().iter().enumerate() {
                if d != 0 {
                    terms.push(KTerm::new(d, i as u32, 0));
                }
            }
            break;
        }
    }
    Tdfe { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ztau::tnaf;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type K = Kleinian<i64>;

    #[test]
    fn term_values() {
        // -(tau-1)^4 = 1 - 3*tau
        assert_eq!(KTerm::new(-1, 0, 4).value::<i64>(Mu::Plus), K::new(1, -3));
        // tau^3 + tau*(tau-1)^2 = -3*tau
        let v = eval_terms::<i64>(&[KTerm::new(1, 3, 0), KTerm::new(1, 1, 2)], Mu::Plus);
        assert_eq!(v, K::new(0, -3));
        assert_eq!(eval_terms::<i64>(&[], Mu::Plus), K::zero());
    }

    #[test]
    fn closest_examples() {
        // exact hits have distance zero
        let t8: K = tau_pow(8, Mu::Plus);
        assert_eq!(closest_kterm(&t8, 10, 4, Mu::Plus), KTerm::new(1, 8, 0));
        assert_eq!(
            closest_kterm(&K::new(1, -3), 10, 4, Mu::Plus),
            KTerm::new(-1, 0, 4)
        );
        assert_eq!(closest_kterm(&K::one(), 10, 4, Mu::Plus), KTerm::new(1, 0, 0));
    }

    #[test]
    fn greedy_examples() {
        let t = greedy_tdfe(&K::one(), 4, Mu::Plus);
        assert_eq!(t.terms, vec![KTerm::new(1, 0, 0)]);
        let t = greedy_tdfe(&K::new(-14, -3), 4, Mu::Plus);
        assert_eq!(t.terms, vec![KTerm::new(1, 8, 0)]);
        let x = K::new(-5, -18);
        let t = greedy_tdfe(&x, 4, Mu::Plus);
        assert_eq!(t.eval::<i64>(Mu::Plus), x);
        assert!(t.d() <= tnaf(&x, Mu::Plus).weight());
    }

    #[test]
    fn greedy_round_trip_and_progress() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let x = Kleinian::<BigInt>::new(
                BigInt::from(rng.gen::<i64>()),
                BigInt::from(rng.gen::<i64>()),
            );
            let t = greedy_tdfe(&x, 4, Mu::Plus);
            assert_eq!(t.eval::<BigInt>(Mu::Plus), x);
            assert!(t.max_y() <= 4);
            // replay: every greedy step strictly decreases the remainder norm
            let mut rem = x.clone();
            for term in &t.terms {
                let next = &rem - &term.value(Mu::Plus);
                assert!(next.norm(Mu::Plus) < rem.norm(Mu::Plus));
                rem = next;
            }
            assert!(rem.is_zero());
        }
    }

    #[test]
    fn joint_cost_counting() {
        assert_eq!(joint_cost(&JointTdfe::empty()), 0);
        let j = JointTdfe {
            l0: vec![KTerm::new(1, 0, 0)],
            l1: vec![KTerm::new(-1, 0, 0)],
        };
        assert_eq!(joint_cost(&j), 1);
        let j = JointTdfe {
            l0: vec![KTerm::new(1, 8, 0), KTerm::new(1, 6, 2), KTerm::new(-1, 0, 4)],
            l1: vec![
                KTerm::new(1, 8, 0),
                KTerm::new(-1, 6, 2),
                KTerm::new(-1, 1, 0),
                KTerm::new(-1, 0, 4),
            ],
        };
        assert_eq!(joint_cost(&j), 4);
    }

    #[test]
    fn conjecture_length_statistic() {
        // measurement only: mean d / (log2 N / log2 log2 N) over random inputs
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut ratio_sum = 0.0;
        let n = 40;
        for _ in 0..n {
            let x = Kleinian::<BigInt>::new(
                BigInt::from(rng.gen::<i64>()),
                BigInt::from(rng.gen::<i64>()),
            );
            let t = greedy_tdfe(&x, 4, Mu::Plus);
            let log_n = bit_length(&x.norm(Mu::Plus)) as f64;
            ratio_sum += t.d() as f64 / (log_n / log_n.log2());
        }
        println!(
            "conjecture statistic: mean d / (log2 N / log2 log2 N) = {:.3} over {} inputs",
            ratio_sum / n as f64,
            n
        );
    }
}
