//! `GF(2^163)` in polynomial basis with an operation-counting channel.
//!
//! Reduction polynomial: `t^163 + t^7 + t^6 + t^3 + 1` (the standard K-163
//! pentanomial; the curve loader checks the configured polynomial against
//! it).  Elements are held reduced, little-endian bit order: coefficient `i`
//! of the residue polynomial is bit `i % 64` of limb `i / 64`.

use std::cell::Cell;
use std::fmt;

/// Extension degree.
pub const M: u32 = 163;

/// Reduction-polynomial exponents, descending.
pub const FIELD_POLY: [u32; 5] = [163, 7, 6, 3, 0];

const TOP_MASK: u64 = (1 << 35) - 1; // valid bits of limb 2 (bits 128..=162)

/// Field-operation counters for one measurement scope.
///
/// Counters only grow; take [`OpCounter::snapshot`] before and after a region
/// and subtract to measure it.  Each scope owns its counter, so independent
/// scopes never interfere.
#[derive(Debug, Default)]
pub struct OpCounter {
    mul: Cell<u64>,
    sqr: Cell<u64>,
    inv: Cell<u64>,
    add: Cell<u64>,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            mul: self.mul.get(),
            sqr: self.sqr.get(),
            inv: self.inv.get(),
            add: self.add.get(),
        }
    }
}

/// Immutable counter snapshot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub mul: u64,
    pub sqr: u64,
    pub inv: u64,
    pub add: u64,
}

impl OpCounts {
    /// Counts accumulated since `earlier`.
    pub fn since(&self, earlier: &OpCounts) -> OpCounts {
        OpCounts {
            mul: self.mul - earlier.mul,
            sqr: self.sqr - earlier.sqr,
            inv: self.inv - earlier.inv,
            add: self.add - earlier.add,
        }
    }
}

impl fmt::Display for OpCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mul={} sqr={} inv={} add={}",
            self.mul, self.sqr, self.inv, self.add
        )
    }
}

/// Errors from field-element construction and inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    /// Hex input malformed or encoding a value of degree >= 163.
    InvalidHex(String),
    /// Inverse of zero requested.
    DivisionByZero,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::InvalidHex(s) => write!(f, "invalid field-element hex: {s}"),
            FieldError::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

impl std::error::Error for FieldError {}

/// Element of `GF(2^163)`, always reduced (degree < 163).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    limbs: [u64; 3],
}

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement { limbs: [0, 0, 0] };
    pub const ONE: FieldElement = FieldElement { limbs: [1, 0, 0] };

    pub fn is_zero(&self) -> bool {
        self.limbs == [0, 0, 0]
    }

    /// Coefficient of `t^i`.
    pub fn bit(&self, i: u32) -> bool {
        debug_assert!(i < M);
        (self.limbs[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    /// The monomial `t^i`.
    pub fn monomial(i: u32) -> FieldElement {
        assert!(i < M);
        let mut limbs = [0u64; 3];
        limbs[(i / 64) as usize] = 1 << (i % 64);
        FieldElement { limbs }
    }

    pub(crate) fn from_limbs(limbs: [u64; 3]) -> FieldElement {
        debug_assert_eq!(limbs[2] & !TOP_MASK, 0);
        FieldElement { limbs }
    }

    /// Parse big-endian hex (no prefix, at most 41 digits, leading zeros
    /// allowed).  Rejects values of degree >= 163.
    pub fn from_hex(s: &str) -> Result<FieldElement, FieldError> {
        if s.is_empty() || s.len() > 41 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(FieldError::InvalidHex(s.to_string()));
        }
        let mut limbs = [0u64; 3];
        for (i, b) in s.bytes().rev().enumerate() {
            let v = (b as char).to_digit(16).unwrap() as u64;
            let bitpos = 4 * i;
            if bitpos >= 164 {
                if v != 0 {
                    return Err(FieldError::InvalidHex(s.to_string()));
                }
                continue;
            }
            limbs[bitpos / 64] |= v << (bitpos % 64);
        }
        if limbs[2] & !TOP_MASK != 0 {
            return Err(FieldError::InvalidHex(s.to_string()));
        }
        Ok(FieldElement { limbs })
    }

    /// Canonical big-endian hex: no leading zeros, `"0"` for zero.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let s = format!("{:x}{:016x}{:016x}", self.limbs[2], self.limbs[1], self.limbs[0]);
        s.trim_start_matches('0').to_string()
    }

    /// Addition is coefficientwise XOR.
    pub fn add(&self, rhs: &FieldElement, ops: &OpCounter) -> FieldElement {
        ops.add.set(ops.add.get() + 1);
        FieldElement {
            limbs: [
                self.limbs[0] ^ rhs.limbs[0],
                self.limbs[1] ^ rhs.limbs[1],
                self.limbs[2] ^ rhs.limbs[2],
            ],
        }
    }

    /// Polynomial product reduced by the pentanomial.
    pub fn mul(&self, rhs: &FieldElement, ops: &OpCounter) -> FieldElement {
        ops.mul.set(ops.mul.get() + 1);
        let mut wide = [0u64; 6];
        let mut sh = [self.limbs[0], self.limbs[1], self.limbs[2], 0, 0, 0];
        for i in 0..163u32 {
            if (rhs.limbs[(i / 64) as usize] >> (i % 64)) & 1 == 1 {
                for k in 0..6 {
                    wide[k] ^= sh[k];
                }
            }
            shl1(&mut sh);
        }
        FieldElement::from_limbs(reduce_wide(wide))
    }

    /// Squaring (linear over addition); counted separately from `mul`.
    pub fn sqr(&self, ops: &OpCounter) -> FieldElement {
        ops.sqr.set(ops.sqr.get() + 1);
        let mut wide = [0u64; 6];
        for i in 0..3 {
            let (lo, hi) = spread_u64(self.limbs[i]);
            wide[2 * i] = lo;
            wide[2 * i + 1] = hi;
        }
        FieldElement::from_limbs(reduce_wide(wide))
    }

    /// Inverse by the Itoh-Tsujii addition chain for 162:
    /// `1, 2, 4, 5, 10, 20, 40, 80, 81, 162` (exactly 9 multiplications),
    /// then one final squaring gives `x^(2^163 - 2)`.
    pub fn inv(&self, ops: &OpCounter) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        ops.inv.set(ops.inv.get() + 1);
        // beta_k = x^(2^k - 1); beta_{i+j} = beta_i^(2^j) * beta_j
        let sq_k = |mut v: FieldElement, k: u32| {
            for _ in 0..k {
                v = v.sqr(ops);
            }
            v
        };
        let b1 = *self;
        let b2 = sq_k(b1, 1).mul(&b1, ops);
        let b4 = sq_k(b2, 2).mul(&b2, ops);
        let b5 = sq_k(b4, 1).mul(&b1, ops);
        let b10 = sq_k(b5, 5).mul(&b5, ops);
        let b20 = sq_k(b10, 10).mul(&b10, ops);
        let b40 = sq_k(b20, 20).mul(&b20, ops);
        let b80 = sq_k(b40, 40).mul(&b40, ops);
        let b81 = sq_k(b80, 1).mul(&b1, ops);
        let b162 = sq_k(b81, 81).mul(&b81, ops);
        Ok(b162.sqr(ops))
    }

    /// Trace map `Tr(x) = sum x^(2^i)`, with values in `{0, 1}`.
    pub fn trace(&self, ops: &OpCounter) -> u8 {
        let mut acc = *self;
        let mut v = *self;
        for _ in 0..(M - 1) {
            v = v.sqr(ops);
            acc = acc.add(&v, ops);
        }
        debug_assert!(acc == FieldElement::ZERO || acc == FieldElement::ONE);
        u8::from(acc == FieldElement::ONE)
    }

    /// Half-trace `H(c) = sum_{i=0}^{(m-1)/2} c^(2^(2i))`; solves
    /// `z^2 + z = c` when `Tr(c) = 0`.
    pub fn half_trace(&self, ops: &OpCounter) -> FieldElement {
        let mut acc = *self;
        let mut v = *self;
        for _ in 0..(M - 1) / 2 {
            v = v.sqr(ops).sqr(ops);
            acc = acc.add(&v, ops);
        }
        acc
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.to_hex())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

/// Shift a 6-limb value left by one bit in place.
fn shl1(v: &mut [u64; 6]) {
    for i in (1..6).rev() {
        v[i] = (v[i] << 1) | (v[i - 1] >> 63);
    }
    v[0] <<= 1;
}

/// Spread the bits of a word to even positions: bit i -> bit 2i.
fn spread_u64(w: u64) -> (u64, u64) {
    fn spread32(mut x: u64) -> u64 {
        x &= 0xffff_ffff;
        x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
        x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
        x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
        x = (x | (x << 2)) & 0x3333_3333_3333_3333;
        x = (x | (x << 1)) & 0x5555_5555_5555_5555;
        x
    }
    (spread32(w), spread32(w >> 32))
}

/// Reduce a 326-bit product modulo `t^163 + t^7 + t^6 + t^3 + 1`.
///
/// `t^(163+s) = (t^7 + t^6 + t^3 + 1) * t^s`, folded limb by limb from the
/// top, then the partial limb holding bits 163..191.
fn reduce_wide(mut w: [u64; 6]) -> [u64; 3] {
    for i in (3..6).rev() {
        let t = w[i];
        if t == 0 {
            continue;
        }
        w[i] = 0;
        let base = 64 * i as u32 - 163;
        for off in [0u32, 3, 6, 7] {
            xor_at(&mut w, t, base + off);
        }
    }
    let t = w[2] >> 35;
    if t != 0 {
        w[0] ^= t ^ (t << 3) ^ (t << 6) ^ (t << 7);
        w[2] &= TOP_MASK;
    }
    [w[0], w[1], w[2]]
}

/// XOR a 64-bit word into a 6-limb value at bit offset `pos`.
fn xor_at(w: &mut [u64; 6], word: u64, pos: u32) {
    let limb = (pos / 64) as usize;
    let sh = pos % 64;
    w[limb] ^= word << sh;
    if sh != 0 && limb + 1 < 6 {
        w[limb + 1] ^= word >> (64 - sh);
    }
}
