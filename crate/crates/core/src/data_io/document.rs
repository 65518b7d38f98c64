//! The `ScdDocument` text format.
//!
//! ```text
//! # optional comment / provenance lines
//! 5 3
//! 000000 100000 101000 101001 111001 111101 111111 111112
//! 110100 110101
//! ```
//!
//! The first non-comment line is `k n`; each following non-empty line is
//! one chain. Elements are written compactly as k binary digits plus one
//! level digit (`110102`) when `n ≤ 10`, and otherwise in the general form
//! `1,1,0,1,0;2`. Output is 7-bit ASCII with `\n` line endings.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::cuboid::{ChainProduct, CuboidElement};
use crate::poset::PosetError;
use crate::scd::{Chain, Scd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("missing `k n` header line")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: header says `{found}` but `{expected}` was requested")]
    HeaderMismatch {
        line: usize,
        found: String,
        expected: String,
    },
    #[error("line {line}: malformed element `{token}`: {reason}")]
    BadElement {
        line: usize,
        token: String,
        reason: String,
    },
    #[error("line {line}: compact element `{token}` is ambiguous for n = {n} > 10; use the `b1,...,bk;c` form")]
    CompactRefused { line: usize, token: String, n: usize },
    #[error("element {0} appears in more than one chain")]
    Duplicate(String),
    #[error("host is not a cuboid Q_k x n")]
    NotCuboid,
    #[error("element {0} does not belong to the host")]
    OutsideHost(String),
    #[error("element id {0} is outside the host")]
    ForeignElement(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A parsed SCD of `P(k, n)` in element coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScdDocument {
    pub k: usize,
    pub n: usize,
    pub notes: Vec<String>,
    pub chains: Vec<Vec<CuboidElement>>,
}

impl ScdDocument {
    pub fn from_scd(host: &ChainProduct, scd: &Scd, notes: Vec<String>) -> Result<Self, FormatError> {
        let k = host.cube_dim().ok_or(FormatError::NotCuboid)?;
        let chains = scd
            .chains()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&x| host.cuboid_element(x).ok_or(FormatError::ForeignElement(x)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ScdDocument {
            k,
            n: host.n(),
            notes,
            chains,
        })
    }

    pub fn host(&self) -> Result<ChainProduct, FormatError> {
        Ok(ChainProduct::cuboid(self.k, self.n)?)
    }

    /// Chains as element ids of `host`, which must be `P(k, n)`.
    pub fn to_scd(&self, host: &ChainProduct) -> Result<Scd, FormatError> {
        if host.cube_dim() != Some(self.k) || host.n() != self.n {
            return Err(FormatError::NotCuboid);
        }
        let chains = self
            .chains
            .iter()
            .map(|c| {
                c.iter()
                    .map(|e| host.cuboid_id(e).ok_or_else(|| FormatError::OutsideHost(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Chain::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Scd::new(chains))
    }

    /// Parses a full document, header included.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse_lines(text, None, false)
    }

    /// Rejects elements that occur in two chains.
    pub fn parse_strict(text: &str) -> Result<Self, FormatError> {
        parse_lines(text, None, true)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ScdDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for note in &self.notes {
            writeln!(f, "# {note}")?;
        }
        writeln!(f, "{} {}", self.k, self.n)?;
        let compact = self.n <= 10;
        for chain in &self.chains {
            let tokens: Vec<String> = chain
                .iter()
                .map(|e| if compact { e.compact() } else { e.general() })
                .collect();
            writeln!(f, "{}", tokens.join(" "))?;
        }
        Ok(())
    }
}

/// `parse_scd(text, k, n)`: chains of `P(k, n)`. A leading `k n` header is
/// accepted when it matches.
pub fn parse_scd(text: &str, k: usize, n: usize, strict: bool) -> Result<Scd, FormatError> {
    let doc = parse_lines(text, Some((k, n)), strict)?;
    doc.to_scd(&ChainProduct::cuboid(k, n)?)
}

/// Serializes an SCD of a cuboid host.
pub fn serialize_scd(host: &ChainProduct, scd: &Scd, notes: Vec<String>) -> Result<String, FormatError> {
    Ok(ScdDocument::from_scd(host, scd, notes)?.to_text())
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize), FormatError> {
    let bad = || FormatError::BadHeader {
        line,
        text: text.to_string(),
    };
    let mut it = text.split_whitespace();
    let k = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let n: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    if it.next().is_some() || n == 0 || k >= 32 {
        return Err(bad());
    }
    Ok((k, n))
}

fn parse_lines(text: &str, expect: Option<(usize, usize)>, strict: bool) -> Result<ScdDocument, FormatError> {
    let mut notes = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut chains = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if let Some(note) = line.strip_prefix('#') {
            notes.push(note.trim().to_string());
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let (k, n) = match (header, expect) {
            (Some(h), _) => h,
            (None, Some((k, n))) => {
                header = Some((k, n));
                if line == format!("{k} {n}") {
                    continue;
                }
                let as_chain: Result<Vec<_>, _> = line
                    .split_whitespace()
                    .map(|token| parse_element(line_no, token, k, n))
                    .collect();
                if let (Err(_), Ok(found)) = (&as_chain, parse_header(line_no, line)) {
                    return Err(FormatError::HeaderMismatch {
                        line: line_no,
                        found: format!("{} {}", found.0, found.1),
                        expected: format!("{k} {n}"),
                    });
                }
                (k, n)
            }
            (None, None) => {
                header = Some(parse_header(line_no, line)?);
                continue;
            }
        };
        let mut chain = line
            .split_whitespace()
            .map(|token| parse_element(line_no, token, k, n))
            .collect::<Result<Vec<_>, _>>()?;
        chain.sort_by_key(CuboidElement::rank);
        if strict {
            for e in &chain {
                if !seen.insert(*e) {
                    return Err(FormatError::Duplicate(e.to_string()));
                }
            }
        }
        chains.push(chain);
    }
    let (k, n) = header.or(expect).ok_or(FormatError::MissingHeader)?;
    Ok(ScdDocument { k, n, notes, chains })
}

fn parse_element(line: usize, token: &str, k: usize, n: usize) -> Result<CuboidElement, FormatError> {
    let bad = |reason: String| FormatError::BadElement {
        line,
        token: token.to_string(),
        reason,
    };
    if !token.is_ascii() {
        return Err(bad("non-ASCII characters".into()));
    }
    let (digits, level): (Vec<char>, &str) = match token.split_once(';') {
        Some((bits, level)) => {
            let digits: Vec<char> = if bits.is_empty() {
                Vec::new()
            } else {
                bits.split(',')
                    .map(|d| {
                        let mut cs = d.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => Ok(c),
                            _ => Err(bad(format!("`{d}` is not a single binary digit"))),
                        }
                    })
                    .collect::<Result<_, _>>()?
            };
            (digits, level)
        }
        None => {
            if n > 10 {
                return Err(FormatError::CompactRefused {
                    line,
                    token: token.to_string(),
                    n,
                });
            }
            if token.len() != k + 1 {
                return Err(bad(format!("expected {} characters, found {}", k + 1, token.len())));
            }
            (token[..k].chars().collect(), &token[k..])
        }
    };
    if digits.len() != k {
        return Err(bad(format!("expected {k} binary digits, found {}", digits.len())));
    }
    let mut bits = 0u64;
    for c in digits {
        bits = bits << 1
            | match c {
                '0' => 0,
                '1' => 1,
                other => return Err(bad(format!("`{other}` is not a binary digit"))),
            };
    }
    if level.is_empty() || !level.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(format!("`{level}` is not a decimal level")));
    }
    let level: usize = level.parse().map_err(|_| bad("level out of range".into()))?;
    if level >= n {
        return Err(bad(format!("level {level} is not below n = {n}")));
    }
    Ok(CuboidElement { k, bits, level })
}
