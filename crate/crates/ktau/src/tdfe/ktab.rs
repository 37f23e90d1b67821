//! Line-oriented text persistence for lookup tables (KTAB format).
//!
//! ```text
//! KTAB 1 mu=+1 w=5 bmax=4 xmax=7
//! <block0 bits MSB-first> <block1 bits MSB-first> : <terms0> | <terms1>
//! ```
//!
//! Term lists are `s,x,y` triples joined by `;` with the sign written `+` or
//! `-`; an empty list is `.`.  Keys appear in deterministic order: block0
//! major, both ascending as MSB-first binary integers.  ASCII, LF endings.

use std::fmt;
use std::io::{self, BufRead, Write};

use crate::ztau::Mu;

use super::lut::block_value;
use super::{JointTdfe, KTerm, Lut, LutConfig};

/// Parse failure with the 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtabError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for KtabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ktab parse error at line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for KtabError {}

fn fail<T>(line: usize, msg: impl Into<String>) -> Result<T, KtabError> {
    Err(KtabError {
        line,
        msg: msg.into(),
    })
}

fn bits_msb_first(v: u32, w: u32) -> String {
    (0..w).rev().map(|j| if (v >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

fn terms_to_string(terms: &[KTerm]) -> String {
    if terms.is_empty() {
        return ".".to_string();
    }
    terms
        .iter()
        .map(|t| format!("{},{},{}", if t.sign < 0 { '-' } else { '+' }, t.x, t.y))
        .collect::<Vec<_>>()
        .join(";")
}

/// Write a table in canonical KTAB form.
pub fn write_ktab(lut: &Lut, out: &mut dyn Write) -> io::Result<()> {
    let c = lut.config();
    write!(
        out,
        "KTAB 1 mu={} w={} bmax={} xmax={}\n",
        c.mu, c.w, c.b_max, c.x_max
    )?;
    for ((b0, b1), e) in lut.entries() {
        write!(
            out,
            "{} {} : {} | {}\n",
            bits_msb_first(b0, c.w),
            bits_msb_first(b1, c.w),
            terms_to_string(&e.l0),
            terms_to_string(&e.l1),
        )?;
    }
    Ok(())
}

fn parse_bits(s: &str, w: u32, line: usize) -> Result<u32, KtabError> {
    if s.len() != w as usize || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return fail(line, format!("bad {w}-bit block `{s}`"));
    }
    let mut v = 0;
    for (j, c) in s.bytes().rev().enumerate() {
        if c == b'1' {
            v |= 1 << j;
        }
    }
    Ok(v)
}

fn parse_terms(s: &str, cfg: &LutConfig, line: usize) -> Result<Vec<KTerm>, KtabError> {
    if s == "." {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in s.split(';') {
        let fields: Vec<&str> = part.split(',').collect();
        if fields.len() != 3 {
            return fail(line, format!("bad term `{part}`"));
        }
        let sign = match fields[0] {
            "+" => 1i8,
            "-" => -1i8,
            other => return fail(line, format!("bad sign `{other}`")),
        };
        let x: u32 = fields[1]
            .parse()
            .map_err(|_| KtabError {
                line,
                msg: format!("bad exponent `{}`", fields[1]),
            })?;
        let y: u32 = fields[2]
            .parse()
            .map_err(|_| KtabError {
                line,
                msg: format!("bad exponent `{}`", fields[2]),
            })?;
        if x > cfg.x_max || y > cfg.b_max {
            return fail(line, format!("term exponents ({x},{y}) outside table bounds"));
        }
        out.push(KTerm::new(sign, x, y));
    }
    Ok(out)
}

/// Parse a KTAB stream, validating completeness, canonical key order, and
/// that every entry evaluates to its block values.
pub fn parse_ktab(reader: impl BufRead) -> Result<Lut, KtabError> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| KtabError {
            line: 1,
            msg: "empty file".into(),
        })
        .and_then(|(i, r)| r.map(|s| (i, s)).map_err(|e| KtabError {
            line: 1,
            msg: e.to_string(),
        }))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != "KTAB" || fields[1] != "1" {
        return fail(1, format!("bad header `{header}`"));
    }
    let take = |f: &str, key: &str| -> Result<String, KtabError> {
        f.strip_prefix(&format!("{key}="))
            .map(str::to_string)
            .ok_or_else(|| KtabError {
                line: 1,
                msg: format!("expected `{key}=...`, found `{f}`"),
            })
    };
    let mu = match take(fields[2], "mu")?.as_str() {
        "+1" => Mu::Plus,
        "-1" => Mu::Minus,
        other => return fail(1, format!("bad mu `{other}`")),
    };
    let parse_u32 = |s: String| -> Result<u32, KtabError> {
        s.parse().map_err(|_| KtabError {
            line: 1,
            msg: format!("bad integer `{s}`"),
        })
    };
    let w = parse_u32(take(fields[3], "w")?)?;
    let b_max = parse_u32(take(fields[4], "bmax")?)?;
    let x_max = parse_u32(take(fields[5], "xmax")?)?;
    let cfg = LutConfig::with_x_max(w, b_max, x_max, mu).map_err(|e| KtabError {
        line: 1,
        msg: e.to_string(),
    })?;

    let mut entries: Vec<JointTdfe> = Vec::with_capacity(cfg.entry_count());
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| KtabError {
            line: lineno,
            msg: e.to_string(),
        })?;
        if line.is_empty() {
            continue;
        }
        let (keypart, terms) = line
            .split_once(" : ")
            .ok_or_else(|| KtabError {
                line: lineno,
                msg: "missing ` : ` separator".into(),
            })?;
        let (s0, s1) = keypart.split_once(' ').ok_or_else(|| KtabError {
            line: lineno,
            msg: "missing block separator".into(),
        })?;
        let b0 = parse_bits(s0, w, lineno)?;
        let b1 = parse_bits(s1, w, lineno)?;
        let expect = entries.len() as u32;
        if (b0 << w | b1) != expect {
            return fail(
                lineno,
                format!(
                    "key out of order: expected ({}, {})",
                    bits_msb_first(expect >> w, w),
                    bits_msb_first(expect & ((1 << w) - 1), w)
                ),
            );
        }
        let (t0, t1) = terms.split_once(" | ").ok_or_else(|| KtabError {
            line: lineno,
            msg: "missing ` | ` separator".into(),
        })?;
        let entry = JointTdfe {
            l0: parse_terms(t0, &cfg, lineno)?,
            l1: parse_terms(t1, &cfg, lineno)?,
        };
        let (v0, v1) = entry.eval::<i64>(mu);
        if v0 != block_value(b0, w, mu) || v1 != block_value(b1, w, mu) {
            return fail(lineno, "entry does not evaluate to its block values");
        }
        entries.push(entry);
    }
    if entries.len() != cfg.entry_count() {
        return fail(
            0,
            format!(
                "incomplete table: {} of {} keys present",
                entries.len(),
                cfg.entry_count()
            ),
        );
    }
    Ok(Lut::from_parts(cfg, entries))
}
