// SPDX-License-Identifier: Apache-2.0

//! Recovery of the field polynomial from per-bit expressions.
//!
//! The products `a_i b_j` with `i + j = m` form the coefficient of `x^m`
//! before reduction. Reducing `x^m` by `P(x) = x^m + P'(x)` sends that
//! whole group to every column `k` where `x^k` occurs in `P'(x)`, so bit
//! `k` contains all `m - 1` of these products exactly when `x^k` is a
//! term of `P(x)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bitpoly::BitPoly;
use crate::gfpoly::Monomial;
use crate::netlist::{input_a, input_b};
use crate::rewriter::RewriteReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("field width must be at least 2, got {0}")]
    TooNarrow(usize),
    #[error("malformed polynomial: {0}")]
    Malformed(String),
    #[error(
        "not recognized as a GF(2^{m}) multiplier over polynomial basis: no output bit contains all {} out-field products (hits per bit: {hits:?})",
        m - 1
    )]
    NotRecognized { m: usize, hits: Vec<usize> },
}

/// A degree-`m` polynomial over GF(2), stored as its exponent set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IrrPoly {
    m: usize,
    exponents: BTreeSet<usize>,
}

impl IrrPoly {
    /// `x^m` plus the given lower terms.
    pub fn new(m: usize, exponents: impl IntoIterator<Item = usize>) -> Result<IrrPoly, ExtractError> {
        if m < 2 {
            return Err(ExtractError::TooNarrow(m));
        }
        let mut set: BTreeSet<usize> = exponents.into_iter().collect();
        if let Some(&e) = set.iter().find(|&&e| e > m) {
            return Err(ExtractError::Malformed(format!("exponent {e} exceeds degree {m}")));
        }
        set.insert(m);
        Ok(IrrPoly { m, exponents: set })
    }

    /// Parses a strictly descending exponent list such as `"233,74,0"`.
    pub fn parse_list(s: &str) -> Result<IrrPoly, ExtractError> {
        let exps = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| ExtractError::Malformed(format!("'{}' is not an exponent", t.trim())))
            })
            .collect::<Result<Vec<usize>, _>>()?;
        if exps.windows(2).any(|w| w[0] <= w[1]) {
            return Err(ExtractError::Malformed(format!("exponents of '{s}' are not strictly descending")));
        }
        if exps.last() != Some(&0) {
            return Err(ExtractError::Malformed(format!("'{s}' has no constant term")));
        }
        IrrPoly::new(exps[0], exps)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Exponents, highest first.
    pub fn exponents(&self) -> Vec<usize> {
        self.exponents.iter().rev().copied().collect()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.exponents.contains(&e)
    }

    pub fn has_constant(&self) -> bool {
        self.contains(0)
    }

    /// Terms below `x^m`, i.e. the residue of `x^m`.
    pub fn lower(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents.iter().copied().filter(move |&e| e < self.m)
    }

    pub fn term_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn to_bitpoly(&self) -> BitPoly {
        BitPoly::from_exponents(self.exponents.iter().copied())
    }

    /// The `"m,a,...,0"` form accepted by [`IrrPoly::parse_list`].
    pub fn to_list(&self) -> String {
        self.exponents().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for IrrPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                e => format!("x^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for IrrPoly {
    type Err = ExtractError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IrrPoly::parse_list(s)
    }
}

fn small_irreducible(p: u64, m: usize) -> bool {
    // Trial division by every polynomial of degree 1..=m/2.
    let rem = |mut a: u64, b: u64| {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            a ^= b << (63 - a.leading_zeros() - db);
        }
        a
    };
    (1..=m / 2).all(|d| (1u64 << d..1u64 << (d + 1)).all(|q| rem(p, q) != 0))
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(2^k) mod p`
fn frobenius(k: usize, p: &BitPoly) -> BitPoly {
    let mut r = BitPoly::monomial(1).rem(p);
    for _ in 0..k {
        r = r.mulmod(&r, p);
    }
    r
}

/// Whether `p` is irreducible over GF(2).
pub fn validate_irreducible(p: &IrrPoly) -> bool {
    let m = p.m();
    if m <= 20 {
        let word = p.exponents.iter().fold(0u64, |w, &e| w | 1 << e);
        return small_irreducible(word, m);
    }
    // Rabin: x^(2^m) = x mod p, and gcd(x^(2^(m/q)) - x, p) = 1 for prime q | m.
    let poly = p.to_bitpoly();
    let x = BitPoly::monomial(1);
    if frobenius(m, &poly) != x {
        return false;
    }
    prime_factors(m).into_iter().all(|q| {
        let h = frobenius(m / q, &poly).add(&x);
        h.gcd(&poly) == BitPoly::one()
    })
}

/// The products `a_i b_j` with `i + j = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutFieldSet {
    pub m: usize,
    /// `a_{m-1} b_1, a_{m-2} b_2, ..., a_1 b_{m-1}`
    pub products: Vec<Monomial>,
}

pub fn out_field_set(m: usize) -> Result<OutFieldSet, ExtractError> {
    if m < 2 {
        return Err(ExtractError::TooNarrow(m));
    }
    let products = (1..m)
        .map(|j| Monomial::from_vars([input_a(m, m - j), input_b(m, j)]))
        .collect();
    Ok(OutFieldSet { m, products })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionReport {
    pub recovered: IrrPoly,
    /// Bit `i` contains every out-field product.
    pub membership: Vec<bool>,
    /// Out-field products found in bit `i`.
    pub hits: Vec<usize>,
    pub diagnostics: Vec<String>,
}

/// Reads the field polynomial off the rewritten expressions.
pub fn extract_irreducible(report: &RewriteReport) -> Result<ExtractionReport, ExtractError> {
    let m = report.m;
    let set = out_field_set(m)?;
    let hits: Vec<usize> = report
        .expressions()
        .map(|e| set.products.iter().filter(|p| e.contains(p)).count())
        .collect();
    let membership: Vec<bool> = hits.iter().map(|&h| h == m - 1).collect();
    if !membership.contains(&true) {
        return Err(ExtractError::NotRecognized { m, hits });
    }
    let recovered = IrrPoly::new(m, membership.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))?;

    let mut diagnostics = Vec::new();
    for (i, &h) in hits.iter().enumerate() {
        if h > 0 && h < m - 1 {
            diagnostics.push(format!(
                "bit {i} contains {h} of {} out-field products; not counted",
                m - 1
            ));
        }
    }
    if !recovered.has_constant() {
        diagnostics.push(format!(
            "recovered {recovered} has no constant term and is not a legal field polynomial"
        ));
    }
    if !matches!(recovered.term_count(), 3 | 5) {
        diagnostics.push(format!(
            "recovered polynomial has {} terms; field polynomials are usually trinomials or pentanomials",
            recovered.term_count()
        ));
    }
    Ok(ExtractionReport {
        recovered,
        membership,
        hits,
        diagnostics,
    })
}
