// SPDX-License-Identifier: Apache-2.0

//! Equivalence checks against a golden multiplier, and the full
//! rewrite / extract / verify pipeline.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;
use web_time::Instant;

use crate::bitpoly::{gf_mul_u64, BitPoly};
use crate::extractor::{extract_irreducible, validate_irreducible, ExtractionReport, IrrPoly};
use crate::generator::spec_expressions;
use crate::gfpoly::Poly2;
use crate::netlist::Netlist;
use crate::rewriter::{rewrite_all, RewriteError, RewriteReport};

/// Widest netlist checked exhaustively without `force`.
pub const EXHAUSTIVE_LIMIT: usize = 8;
/// Widest netlist checked exhaustively at all.
pub const EXHAUSTIVE_HARD_LIMIT: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("m = {m} needs 2^{} simulations; pass force to run anyway (limit {limit})", 2 * m)]
    TooWide { m: usize, limit: usize },
    #[error("netlist has width {netlist}, polynomial has degree {poly}")]
    WidthMismatch { netlist: usize, poly: usize },
    #[error("netlist reads undriven wire {0}")]
    Undriven(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Equivalent,
    Mismatch,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Equivalent => "equivalent",
            Status::Mismatch => "mismatch",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Random,
    Symbolic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Random => "random",
            Method::Symbolic => "symbolic",
        }
    }
}

/// An input pair on which the netlist and the golden multiplier differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Operand bits, LSB first.
    pub a: Vec<bool>,
    pub b: Vec<bool>,
    pub expected: Vec<bool>,
    pub actual: Vec<bool>,
}

/// Difference between an extracted bit expression and its specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitDiff {
    pub bit: usize,
    /// Symmetric difference: `extracted = spec + difference`.
    pub difference: Poly2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub method: Method,
    pub witness: Option<Witness>,
    pub diffs: Vec<BitDiff>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn inconclusive(method: Method, note: String) -> Verdict {
        Verdict {
            status: Status::Inconclusive,
            method,
            witness: None,
            diffs: Vec::new(),
            notes: vec![note],
        }
    }
}

fn check_widths(n: &Netlist, p: &IrrPoly) -> Result<(), VerifyError> {
    if n.m() != p.m() {
        return Err(VerifyError::WidthMismatch {
            netlist: n.m(),
            poly: p.m(),
        });
    }
    if let Some(&w) = n.free_wires().first() {
        return Err(VerifyError::Undriven(n.name(w).to_string()));
    }
    Ok(())
}

fn bits_of(x: u64, m: usize) -> Vec<bool> {
    (0..m).map(|i| x >> i & 1 == 1).collect()
}

/// Golden product of two operands given as LSB-first bit vectors.
pub fn reference_mul(a: &[bool], b: &[bool], p: &IrrPoly) -> Vec<bool> {
    BitPoly::from_bits(a)
        .mulmod(&BitPoly::from_bits(b), &p.to_bitpoly())
        .to_bits(p.m())
}

fn witness(n: &Netlist, p: &IrrPoly, a: Vec<bool>, b: Vec<bool>) -> Witness {
    let expected = reference_mul(&a, &b, p);
    let actual = n.simulate(&a, &b);
    Witness {
        a,
        b,
        expected,
        actual,
    }
}

/// Lowest failing pair index among `words` blocks of 64 pairs.
fn scan_block(n: &Netlist, modulus: u64, words: std::ops::Range<u64>, total: u64) -> Option<u64> {
    let m = n.m();
    let mask = (1u64 << m) - 1;
    let mut a = vec![0u64; m];
    let mut b = vec![0u64; m];
    for w in words {
        let base = w * 64;
        let lanes = (total - base).min(64);
        a.iter_mut().for_each(|x| *x = 0);
        b.iter_mut().for_each(|x| *x = 0);
        let mut want = vec![0u64; m];
        for l in 0..lanes {
            let x = base + l;
            let (av, bv) = (x & mask, x >> m);
            let z = gf_mul_u64(av, bv, modulus, m);
            for i in 0..m {
                a[i] |= (av >> i & 1) << l;
                b[i] |= (bv >> i & 1) << l;
                want[i] |= (z >> i & 1) << l;
            }
        }
        let got = n.simulate_words(&a, &b);
        let lane_mask = if lanes == 64 { !0 } else { (1u64 << lanes) - 1 };
        let bad = got.iter().zip(&want).fold(0u64, |acc, (g, w)| acc | (g ^ w)) & lane_mask;
        if bad != 0 {
            return Some(base + bad.trailing_zeros() as u64);
        }
    }
    None
}

/// Simulates all `2^(2m)` operand pairs against the golden multiplier.
pub fn exhaustive_check(n: &Netlist, p: &IrrPoly, force: bool, threads: usize) -> Result<Verdict, VerifyError> {
    check_widths(n, p)?;
    let m = n.m();
    if m > EXHAUSTIVE_HARD_LIMIT || (m > EXHAUSTIVE_LIMIT && !force) {
        let limit = if force { EXHAUSTIVE_HARD_LIMIT } else { EXHAUSTIVE_LIMIT };
        return Err(VerifyError::TooWide { m, limit });
    }
    let modulus = p.exponents().iter().fold(0u64, |w, &e| w | 1 << e);
    let total = 1u64 << (2 * m);
    let words = total.div_ceil(64);
    let workers = (threads.max(1) as u64).min(words);
    let first_bad = if workers == 1 {
        scan_block(n, modulus, 0..words, total)
    } else {
        let chunk = words.div_ceil(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|t| {
                    let range = t * chunk..((t + 1) * chunk).min(words);
                    s.spawn(move || scan_block(n, modulus, range, total))
                })
                .collect();
            handles.into_iter().filter_map(|h| h.join().unwrap()).min()
        })
    };
    Ok(match first_bad {
        None => Verdict {
            status: Status::Equivalent,
            method: Method::Exhaustive,
            witness: None,
            diffs: Vec::new(),
            notes: Vec::new(),
        },
        Some(x) => {
            let mask = (1u64 << m) - 1;
            Verdict {
                status: Status::Mismatch,
                method: Method::Exhaustive,
                witness: Some(witness(n, p, bits_of(x & mask, m), bits_of(x >> m, m))),
                diffs: Vec::new(),
                notes: Vec::new(),
            }
        }
    })
}

/// Simulates `vectors` random operand pairs (rounded up to a multiple of 64).
/// Equivalence here means no sampled pair disagreed.
pub fn random_check(n: &Netlist, p: &IrrPoly, vectors: usize, seed: u64) -> Result<Verdict, VerifyError> {
    check_widths(n, p)?;
    let m = n.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..vectors.div_ceil(64) {
        let a: Vec<u64> = (0..m).map(|_| rng.random()).collect();
        let b: Vec<u64> = (0..m).map(|_| rng.random()).collect();
        let got = n.simulate_words(&a, &b);
        for l in 0..64 {
            let lane = |words: &[u64]| words.iter().map(|w| w >> l & 1 == 1).collect::<Vec<bool>>();
            let (av, bv) = (lane(&a), lane(&b));
            if reference_mul(&av, &bv, p) != lane(&got) {
                return Ok(Verdict {
                    status: Status::Mismatch,
                    method: Method::Random,
                    witness: Some(witness(n, p, av, bv)),
                    diffs: Vec::new(),
                    notes: Vec::new(),
                });
            }
        }
    }
    Ok(Verdict {
        status: Status::Equivalent,
        method: Method::Random,
        witness: None,
        diffs: Vec::new(),
        notes: vec![format!("{} random vectors agree", vectors.div_ceil(64) * 64)],
    })
}

/// Compares each extracted bit expression with the golden expression for `p`.
/// Canonical forms are unique, so set equality decides equivalence.
pub fn symbolic_check(report: &RewriteReport, p: &IrrPoly) -> Result<Verdict, VerifyError> {
    if report.m != p.m() {
        return Err(VerifyError::WidthMismatch {
            netlist: report.m,
            poly: p.m(),
        });
    }
    let spec = spec_expressions(p);
    let diffs: Vec<BitDiff> = report
        .bits
        .iter()
        .zip(&spec.bits)
        .map(|(got, want)| BitDiff {
            bit: got.bit,
            difference: &got.expr + want,
        })
        .filter(|d| !d.difference.is_zero())
        .collect();
    Ok(Verdict {
        status: if diffs.is_empty() { Status::Equivalent } else { Status::Mismatch },
        method: Method::Symbolic,
        witness: None,
        diffs,
        notes: Vec::new(),
    })
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub rewrite: RewriteReport,
    pub extraction: Option<ExtractionReport>,
    pub irreducible: Option<bool>,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
    pub total_time: Duration,
}

impl PipelineReport {
    pub fn recovered(&self) -> Option<&IrrPoly> {
        self.extraction.as_ref().map(|e| &e.recovered)
    }
}

/// Rewrites every bit, extracts `P(x)`, checks irreducibility and compares
/// the design with the golden multiplier built from the recovered polynomial.
pub fn full_pipeline(n: &Netlist, threads: usize) -> Result<PipelineReport, RewriteError> {
    let start = Instant::now();
    let rewrite = rewrite_all(n, threads)?;
    let mut diagnostics = Vec::new();
    let (extraction, irreducible, verdict) = match extract_irreducible(&rewrite) {
        Ok(ex) => {
            diagnostics.extend(ex.diagnostics.iter().cloned());
            let irreducible = validate_irreducible(&ex.recovered);
            if !irreducible {
                diagnostics.push(format!("recovered {} is reducible over GF(2)", ex.recovered));
            }
            let verdict = symbolic_check(&rewrite, &ex.recovered).expect("widths agree by construction");
            (Some(ex), Some(irreducible), verdict)
        }
        Err(e) => {
            diagnostics.push(e.to_string());
            (None, None, Verdict::inconclusive(Method::Symbolic, e.to_string()))
        }
    };
    Ok(PipelineReport {
        rewrite,
        extraction,
        irreducible,
        verdict,
        diagnostics,
        total_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{gen_mastrovito, GenOptions};
    use crate::netlist::parse_netlist;

    fn p(s: &str) -> IrrPoly {
        IrrPoly::parse_list(s).unwrap()
    }

    #[test]
    fn golden_netlist_is_equivalent() {
        let n = gen_mastrovito(&p("4,1,0"), GenOptions::default());
        let v = exhaustive_check(&n, &p("4,1,0"), false, 1).unwrap();
        assert_eq!(v.status, Status::Equivalent);
        assert_eq!(v.method, Method::Exhaustive);
    }

    #[test]
    fn wrong_polynomial_yields_witness() {
        let n = gen_mastrovito(&p("4,1,0"), GenOptions::default());
        let v = exhaustive_check(&n, &p("4,3,0"), false, 3).unwrap();
        assert_eq!(v.status, Status::Mismatch);
        let w = v.witness.unwrap();
        assert_ne!(w.expected, w.actual);
        assert_eq!(n.simulate(&w.a, &w.b), w.actual);
        // first failing pair in scan order: a = 8 (x^3), b = 2 (x), x^4 reduces differently
        assert_eq!(w.a, vec![false, false, false, true]);
        assert_eq!(w.b, vec![false, true, false, false]);
    }

    #[test]
    fn two_bit_example_netlist() {
        let n = parse_netlist(include_str!("../testdata/gf4_two_bit.eqn")).unwrap();
        let v = exhaustive_check(&n, &p("2,1,0"), false, 1).unwrap();
        assert_eq!(v.status, Status::Equivalent);
        let r = full_pipeline(&n, 2).unwrap();
        assert_eq!(r.recovered(), Some(&p("2,1,0")));
        assert_eq!(r.verdict.status, Status::Equivalent);
        assert_eq!(r.irreducible, Some(true));
    }

    #[test]
    fn limits_and_widths() {
        let n = gen_mastrovito(&p("9,4,0"), GenOptions::default());
        assert_eq!(
            exhaustive_check(&n, &p("9,4,0"), false, 1),
            Err(VerifyError::TooWide { m: 9, limit: 8 })
        );
        assert!(matches!(
            exhaustive_check(&n, &p("4,1,0"), false, 1),
            Err(VerifyError::WidthMismatch { netlist: 9, poly: 4 })
        ));
        let r = rewrite_all(&n, 1).unwrap();
        assert!(symbolic_check(&r, &p("4,1,0")).is_err());
        assert_eq!(random_check(&n, &p("9,4,0"), 1000, 1).unwrap().status, Status::Equivalent);
        assert_eq!(random_check(&n, &p("9,1,0"), 1000, 1).unwrap().status, Status::Mismatch);
    }

    #[test]
    fn symbolic_diffs_rebuild_extracted() {
        let n = gen_mastrovito(&p("8,4,3,1,0"), GenOptions::default());
        let r = rewrite_all(&n, 4).unwrap();
        assert_eq!(symbolic_check(&r, &p("8,4,3,1,0")).unwrap().status, Status::Equivalent);
        let other = p("8,4,3,2,0");
        let v = symbolic_check(&r, &other).unwrap();
        assert_eq!(v.status, Status::Mismatch);
        assert!(!v.diffs.is_empty());
        let spec = spec_expressions(&other);
        for d in &v.diffs {
            assert_eq!(&spec.bits[d.bit] + &d.difference, r.bits[d.bit].expr);
        }
    }

    #[test]
    fn unrecognized_design_is_inconclusive() {
        // no bit carries a1*b1
        let n = parse_netlist("z0 = AND(a0, b0)\nz1 = XOR(a1, b1)").unwrap();
        let r = full_pipeline(&n, 1).unwrap();
        assert_eq!(r.verdict.status, Status::Inconclusive);
        assert!(r.extraction.is_none());
        assert!(r.diagnostics[0].contains("not recognized"));
    }

    #[test]
    fn undriven_wire_blocks_simulation() {
        let n = parse_netlist("z0 = AND(a0, w)\nz1 = AND(a1, b1)\nt = BUF(b0)").unwrap();
        assert_eq!(
            exhaustive_check(&n, &p("2,1,0"), false, 1),
            Err(VerifyError::Undriven("w".into()))
        );
    }
}
