//! Window lookup tables of optimal joint expansions, and the blocking
//! recoder that applies them.
//!
//! For every pair of `w`-bit unsigned tau-adic blocks the table stores a
//! joint expansion of minimal cost (distinct `(x, y)` columns), found by
//! exhaustive search over column sets.  Generation is per-key independent
//! and runs in parallel.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::ztau::{tau_expand_unsigned, tau_powers, Coeff, Kleinian, Mu, ZtauError};
use crate::Kleinian64;

use super::{JointTdfe, KTerm, TdfeError};

/// Window-table configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LutConfig {
    /// Window size (bits per block).
    pub w: u32,
    /// Maximum `(tau - 1)` exponent in emitted terms.
    pub b_max: u32,
    /// Maximum `tau` exponent inside a block.
    pub x_max: u32,
    /// Trace sign.
    pub mu: Mu,
}

impl LutConfig {
    /// Defaults `x_max` to `w + 2`.
    pub fn new(w: u32, b_max: u32, mu: Mu) -> Result<Self, TdfeError> {
        LutConfig::with_x_max(w, b_max, w + 2, mu)
    }

    pub fn with_x_max(w: u32, b_max: u32, x_max: u32, mu: Mu) -> Result<Self, TdfeError> {
        let cfg = LutConfig { w, b_max, x_max, mu };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), TdfeError> {
        if self.w < 1 || self.w > 8 {
            return Err(TdfeError::InvalidConfig(format!(
                "window size {} outside 1..=8",
                self.w
            )));
        }
        if self.b_max > 6 {
            return Err(TdfeError::InvalidConfig(format!(
                "b_max {} outside 0..=6",
                self.b_max
            )));
        }
        if self.x_max < self.w.saturating_sub(1) {
            return Err(TdfeError::InvalidConfig(format!(
                "x_max {} below w - 1",
                self.x_max
            )));
        }
        Ok(())
    }

    /// Number of table entries, `2^(2w)`.
    pub fn entry_count(&self) -> usize {
        1usize << (2 * self.w)
    }
}

/// Complete lookup table: an optimal joint expansion for every pair of
/// `w`-bit blocks.  Immutable once built; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lut {
    config: LutConfig,
    entries: Vec<JointTdfe>,
}

impl Lut {
    pub(crate) fn from_parts(config: LutConfig, entries: Vec<JointTdfe>) -> Lut {
        debug_assert_eq!(entries.len(), config.entry_count());
        Lut { config, entries }
    }

    pub fn config(&self) -> &LutConfig {
        &self.config
    }

    /// Entry for block bits `(b0, b1)`; bit `j` is the coefficient of
    /// `tau^j` within the block.
    pub fn lookup(&self, b0: u32, b1: u32) -> &JointTdfe {
        &self.entries[((b0 << self.config.w) | b1) as usize]
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &JointTdfe)> {
        let w = self.config.w;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, e)| (((i as u32) >> w, (i as u32) & ((1 << w) - 1)), e))
    }

    /// Histogram of entry costs, indexed by cost.
    pub fn cost_histogram(&self) -> Vec<usize> {
        let mut h = Vec::new();
        for e in &self.entries {
            let c = super::joint_cost(e);
            if h.len() <= c {
                h.resize(c + 1, 0);
            }
            h[c] += 1;
        }
        h
    }
}

/// Value of a `w`-bit block, `sum_{j} bit_j * tau^j`.
pub(crate) fn block_value(bits: u32, w: u32, mu: Mu) -> Kleinian64 {
    let powers: Vec<Kleinian64> = tau_powers(w.saturating_sub(1), mu);
    let mut v = Kleinian64::zero();
    for (j, p) in powers.iter().enumerate().take(w as usize) {
        if (bits >> j) & 1 == 1 {
            v = &v + p;
        }
    }
    v
}

/// One search column: an `(x, y)` exponent pair with a digit for each scalar.
#[derive(Clone, Copy)]
struct Column {
    xy: u16, // x * 16 + y, used for distinctness checks
    term_x: u32,
    term_y: u32,
    d0: i8,
    d1: i8,
    v0: (i64, i64),
    v1: (i64, i64),
}

type ValKey = [i64; 4];

fn val_key(v0: &Kleinian64, v1: &Kleinian64) -> ValKey {
    [v0.a, v0.b, v1.a, v1.b]
}

struct SearchSpace {
    cols: Vec<Column>,
    /// value -> single columns realizing it
    table1: HashMap<ValKey, Vec<u16>>,
    /// value -> unordered column pairs (distinct `(x,y)`) realizing it
    table2: HashMap<ValKey, Vec<(u16, u16)>>,
}

impl SearchSpace {
    fn build(cfg: &LutConfig) -> SearchSpace {
        let mut cols = Vec::new();
        let tm1 = Kleinian64::new(-1, 1);
        let mut level: Vec<Kleinian64> = tau_powers(cfg.x_max, cfg.mu);
        for y in 0..=cfg.b_max {
            for (x, pv) in level.iter().enumerate() {
                for d0 in [-1i8, 0, 1] {
                    for d1 in [-1i8, 0, 1] {
                        if d0 == 0 && d1 == 0 {
                            continue;
                        }
                        let scale = |d: i8| (d as i64 * pv.a, d as i64 * pv.b);
                        cols.push(Column {
                            xy: (x as u16) * 16 + y as u16,
                            term_x: x as u32,
                            term_y: y,
                            d0,
                            d1,
                            v0: scale(d0),
                            v1: scale(d1),
                        });
                    }
                }
            }
            for p in level.iter_mut() {
                *p = p.mul(&tm1, cfg.mu);
            }
        }
        let mut table1: HashMap<ValKey, Vec<u16>> = HashMap::new();
        for (i, c) in cols.iter().enumerate() {
            table1
                .entry([c.v0.0, c.v0.1, c.v1.0, c.v1.1])
                .or_default()
                .push(i as u16);
        }
        let mut table2: HashMap<ValKey, Vec<(u16, u16)>> = HashMap::new();
        for i in 0..cols.len() {
            for j in (i + 1)..cols.len() {
                if cols[i].xy == cols[j].xy {
                    continue;
                }
                let k = [
                    cols[i].v0.0 + cols[j].v0.0,
                    cols[i].v0.1 + cols[j].v0.1,
                    cols[i].v1.0 + cols[j].v1.0,
                    cols[i].v1.1 + cols[j].v1.1,
                ];
                table2.entry(k).or_default().push((i as u16, j as u16));
            }
        }
        SearchSpace {
            cols,
            table1,
            table2,
        }
    }

    fn entry_from(&self, set: &[u16]) -> JointTdfe {
        let mut l0 = Vec::new();
        let mut l1 = Vec::new();
        for &i in set {
            let c = &self.cols[i as usize];
            if c.d0 != 0 {
                l0.push(KTerm::new(c.d0, c.term_x, c.term_y));
            }
            if c.d1 != 0 {
                l1.push(KTerm::new(c.d1, c.term_x, c.term_y));
            }
        }
        l0.sort_unstable();
        l1.sort_unstable();
        JointTdfe { l0, l1 }
    }

    /// Tie-break key among equal-cost candidates: fewer total terms, smaller
    /// max `y`, smaller max `x`, then the lexicographically smallest sorted
    /// term lists.  (The max-`x` step keeps chosen entries inside `x < w`
    /// whenever possible, so blocks shifted by `tau^(i*w)` never share a
    /// column.)
    fn tie_key(&self, set: &[u16]) -> (usize, u32, u32, Vec<(u32, u32, u8)>, Vec<(u32, u32, u8)>) {
        let e = self.entry_from(set);
        let total = e.l0.len() + e.l1.len();
        let max_y = e.max_y();
        let max_x = e
            .l0
            .iter()
            .chain(e.l1.iter())
            .map(|t| t.x)
            .max()
            .unwrap_or(0);
        let key = |l: &[KTerm]| -> Vec<(u32, u32, u8)> {
            l.iter().map(|t| (t.x, t.y, u8::from(t.sign < 0))).collect()
        };
        (total, max_y, max_x, key(&e.l0), key(&e.l1))
    }

    fn best_of(&self, mut cands: Vec<Vec<u16>>) -> Option<Vec<u16>> {
        for c in cands.iter_mut() {
            c.sort_unstable();
        }
        cands.sort_unstable();
        cands.dedup();
        cands.into_iter().min_by_key(|s| self.tie_key(s))
    }

    /// Minimal-cost column set for target value pair `t`, or `None` if cost
    /// `<= 4` does not reach it.
    fn solve_to_four(&self, t: &ValKey) -> Option<Vec<u16>> {
        if *t == [0, 0, 0, 0] {
            return Some(Vec::new());
        }
        if let Some(singles) = self.table1.get(t) {
            return self.best_of(singles.iter().map(|&i| vec![i]).collect());
        }
        if let Some(pairs) = self.table2.get(t) {
            return self.best_of(pairs.iter().map(|&(i, j)| vec![i, j]).collect());
        }
        // cost 3: single + pair
        let mut cands = Vec::new();
        for (i, c) in self.cols.iter().enumerate() {
            let rem = [t[0] - c.v0.0, t[1] - c.v0.1, t[2] - c.v1.0, t[3] - c.v1.1];
            if let Some(pairs) = self.table2.get(&rem) {
                for &(a, b) in pairs {
                    if self.cols[a as usize].xy != c.xy && self.cols[b as usize].xy != c.xy {
                        cands.push(vec![i as u16, a, b]);
                    }
                }
            }
        }
        if !cands.is_empty() {
            return self.best_of(cands);
        }
        // cost 4: pair + pair (meet in the middle)
        let mut cands = Vec::new();
        for (v, sets1) in &self.table2 {
            let rem = [t[0] - v[0], t[1] - v[1], t[2] - v[2], t[3] - v[3]];
            if let Some(sets2) = self.table2.get(&rem) {
                for &(a, b) in sets1 {
                    let (xa, xb) = (self.cols[a as usize].xy, self.cols[b as usize].xy);
                    for &(c, d) in sets2 {
                        let (xc, xd) = (self.cols[c as usize].xy, self.cols[d as usize].xy);
                        if xc != xa && xc != xb && xd != xa && xd != xb {
                            cands.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        if !cands.is_empty() {
            return self.best_of(cands);
        }
        None
    }

    /// Exhaustive depth-first search for a minimal set of exactly `depth`
    /// columns (used beyond cost 4; rare).  Norm pruning only discards
    /// branches that provably cannot reach the target: `depth` remaining
    /// columns change each row by at most `depth * 2^((x_max+b_max)/2)` in
    /// absolute value, so `N(rem) <= depth^2 * 2^(x_max+b_max)` is required.
    fn solve_depth(&self, t: &ValKey, depth: usize, cfg: &LutConfig) -> Option<Vec<u16>> {
        let mut cands = Vec::new();
        let mut chosen = Vec::new();
        self.dfs(t, depth, 0, &mut chosen, &mut cands, cfg);
        if cands.is_empty() {
            None
        } else {
            self.best_of(cands)
        }
    }

    fn dfs(
        &self,
        rem: &ValKey,
        depth: usize,
        start: usize,
        chosen: &mut Vec<u16>,
        out: &mut Vec<Vec<u16>>,
        cfg: &LutConfig,
    ) {
        if depth == 0 {
            if *rem == [0, 0, 0, 0] {
                out.push(chosen.clone());
            }
            return;
        }
        let bound = (depth as i64).pow(2) << (cfg.x_max + cfg.b_max);
        let n0 = Kleinian64::new(rem[0], rem[1]).norm(cfg.mu);
        let n1 = Kleinian64::new(rem[2], rem[3]).norm(cfg.mu);
        if n0 > bound || n1 > bound {
            return;
        }
        for i in start..self.cols.len() {
            let c = &self.cols[i];
            if chosen.iter().any(|&p| self.cols[p as usize].xy == c.xy) {
                continue;
            }
            let next = [rem[0] - c.v0.0, rem[1] - c.v0.1, rem[2] - c.v1.0, rem[3] - c.v1.1];
            chosen.push(i as u16);
            self.dfs(&next, depth - 1, i + 1, chosen, out, cfg);
            chosen.pop();
        }
    }

    /// Columnwise fallback: one `y = 0` column per nonzero bit pair.  Always
    /// valid for targets that are block-value pairs.
    fn fallback(&self, b0: u32, b1: u32, cfg: &LutConfig) -> Option<Vec<u16>> {
        let mut set = Vec::new();
        for j in 0..cfg.w {
            let d0 = ((b0 >> j) & 1) as i8;
            let d1 = ((b1 >> j) & 1) as i8;
            if d0 == 0 && d1 == 0 {
                continue;
            }
            let idx = self
                .cols
                .iter()
                .position(|c| c.term_x == j && c.term_y == 0 && c.d0 == d0 && c.d1 == d1)?;
            set.push(idx as u16);
        }
        Some(set)
    }
}

/// Generate the complete table for `config` by exhaustive search.
///
/// Deterministic: entries depend only on the configuration and the fixed
/// tie-break order, regardless of thread scheduling or search strategy.
pub fn gen_lut(config: &LutConfig) -> Result<Lut, TdfeError> {
    config.validate()?;
    let space = SearchSpace::build(config);
    let w = config.w;
    let keys: Vec<u32> = (0..config.entry_count() as u32).collect();
    let entries: Vec<JointTdfe> = keys
        .par_iter()
        .map(|&key| {
            let b0 = key >> w;
            let b1 = key & ((1 << w) - 1);
            let v0 = block_value(b0, w, config.mu);
            let v1 = block_value(b1, w, config.mu);
            let t = val_key(&v0, &v1);
            let set = space.solve_to_four(&t).or_else(|| {
                (5..=2 * w as usize)
                    .find_map(|d| space.solve_depth(&t, d, config))
                    .or_else(|| space.fallback(b0, b1, config))
            });
            // the columnwise fallback always exists for block pairs
            let set = set.expect("search fallback must cover every block pair");
            space.entry_from(&set)
        })
        .collect();
    Ok(Lut::from_parts(*config, entries))
}

/// Joint blocking: recode a pair of Kleinian integers through the table.
///
/// Computes both unsigned tau-adic expansions, zero-pads the shorter to the
/// longer, splits into `ceil(l/w)` blocks starting from the least significant
/// bits, looks each block pair up, and shifts block `i`'s terms by
/// `tau^(i*w)`.
pub fn joint_blocking<C: Coeff>(
    e0: &Kleinian<C>,
    e1: &Kleinian<C>,
    lut: &Lut,
) -> Result<JointTdfe, ZtauError> {
    let mu = lut.config.mu;
    let w = lut.config.w;
    let x0 = tau_expand_unsigned(e0, mu)?;
    let x1 = tau_expand_unsigned(e1, mu)?;
    let l = x0.len().max(x1.len());
    let mut out = JointTdfe::empty();
    let digit = |e: &crate::ztau::TauExpansion, i: usize| -> u32 {
        e.digits().get(i).copied().unwrap_or(0) as u32
    };
    let mut i = 0;
    while i * (w as usize) < l {
        let base = i * w as usize;
        let mut b0 = 0u32;
        let mut b1 = 0u32;
        for j in 0..w as usize {
            b0 |= digit(&x0, base + j) << j;
            b1 |= digit(&x1, base + j) << j;
        }
        let entry = lut.lookup(b0, b1);
        let shift = (i as u32) * w;
        out.l0
            .extend(entry.l0.iter().map(|t| KTerm::new(t.sign, t.x + shift, t.y)));
        out.l1
            .extend(entry.l1.iter().map(|t| KTerm::new(t.sign, t.x + shift, t.y)));
        i += 1;
    }
    Ok(out)
}
