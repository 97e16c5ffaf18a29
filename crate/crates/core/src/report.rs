// SPDX-License-Identifier: Apache-2.0

//! Report documents shared by the CLI and the browser demo. Each document
//! serializes to JSON (the structured form) and renders to text with the
//! same fields.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::netlist::io_name;
use crate::verify::{PipelineReport, Verdict};

pub const TOOL: &str = "gfextract";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Expressions are embedded by default up to this width.
pub const EXPRESSION_WIDTH_LIMIT: usize = 16;

pub fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ConfigEcho {
    pub command: String,
    pub input: Option<String>,
    pub threads: usize,
    pub polynomial: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BitRecord {
    pub index: usize,
    pub monomials: usize,
    pub steps: usize,
    pub peak_monomials: usize,
    pub wall_time_ms: f64,
    /// Out-field products present in this bit.
    pub out_field_hits: Option<usize>,
    /// Whether this bit contributes `x^index` to the recovered polynomial.
    pub in_polynomial: Option<bool>,
    pub expression: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct WitnessRecord {
    /// Operand and result bits, most significant first.
    pub a: String,
    pub b: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DiffRecord {
    pub bit: usize,
    pub monomials: usize,
    pub difference: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerdictRecord {
    pub status: String,
    pub method: String,
    pub witness: Option<WitnessRecord>,
    pub diffs: Vec<DiffRecord>,
    pub notes: Vec<String>,
}

impl VerdictRecord {
    pub fn from_verdict(v: &Verdict, m: usize) -> VerdictRecord {
        VerdictRecord {
            status: v.status.as_str().into(),
            method: v.method.as_str().into(),
            witness: v.witness.as_ref().map(|w| WitnessRecord {
                a: bit_string(&w.a),
                b: bit_string(&w.b),
                expected: bit_string(&w.expected),
                actual: bit_string(&w.actual),
            }),
            diffs: v
                .diffs
                .iter()
                .map(|d| DiffRecord {
                    bit: d.bit,
                    monomials: d.difference.len(),
                    difference: d.difference.render(|x| io_name(m, x)),
                })
                .collect(),
            notes: v.notes.clone(),
        }
    }

    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "verdict: {} ({})", self.status, self.method);
        if let Some(w) = &self.witness {
            let _ = writeln!(
                out,
                "  witness: a={} b={} expected={} actual={}",
                w.a, w.b, w.expected, w.actual
            );
        }
        for d in &self.diffs {
            let _ = writeln!(out, "  diff bit {} ({} monomials): {}", d.bit, d.monomials, d.difference);
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Timings {
    pub rewrite_ms: f64,
    pub total_ms: f64,
}

/// Output of `extract`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct ExtractDocument {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub m: usize,
    pub gates: usize,
    pub threads_used: usize,
    pub bits: Vec<BitRecord>,
    pub recovered: Option<String>,
    pub exponents: Option<Vec<usize>>,
    pub irreducible: Option<bool>,
    pub verdict: VerdictRecord,
    pub diagnostics: Vec<String>,
    pub timings: Timings,
    pub peak_monomials: usize,
}

impl ExtractDocument {
    pub fn new(r: &PipelineReport, gates: usize, config: ConfigEcho, with_expressions: bool) -> ExtractDocument {
        let m = r.rewrite.m;
        let show = with_expressions || m <= EXPRESSION_WIDTH_LIMIT;
        let bits = r
            .rewrite
            .bits
            .iter()
            .map(|b| BitRecord {
                index: b.bit,
                monomials: b.expr.len(),
                steps: b.stats.steps,
                peak_monomials: b.stats.peak_monomials,
                wall_time_ms: millis(b.stats.wall_time),
                out_field_hits: r.extraction.as_ref().map(|e| e.hits[b.bit]),
                in_polynomial: r.extraction.as_ref().map(|e| e.membership[b.bit]),
                expression: show.then(|| b.expr.render(|x| io_name(m, x))),
            })
            .collect();
        ExtractDocument {
            tool: TOOL.into(),
            version: VERSION.into(),
            config,
            m,
            gates,
            threads_used: r.rewrite.threads,
            bits,
            recovered: r.recovered().map(|p| p.to_string()),
            exponents: r.recovered().map(|p| p.exponents()),
            irreducible: r.irreducible,
            verdict: VerdictRecord::from_verdict(&r.verdict, m),
            diagnostics: r.diagnostics.clone(),
            timings: Timings {
                rewrite_ms: millis(r.rewrite.wall_time),
                total_ms: millis(r.total_time),
            },
            peak_monomials: r.rewrite.peak_monomials(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.tool, self.version);
        let _ = writeln!(
            s,
            "command: {} input: {} threads: {}",
            self.config.command,
            self.config.input.as_deref().unwrap_or("-"),
            self.config.threads
        );
        let _ = writeln!(s, "m: {} gates: {} threads used: {}", self.m, self.gates, self.threads_used);
        let _ = writeln!(s, "per-bit profile:");
        for b in &self.bits {
            let _ = write!(
                s,
                "  bit {}: monomials={} steps={} peak_monomials={} wall_time_ms={}",
                b.index, b.monomials, b.steps, b.peak_monomials, b.wall_time_ms
            );
            if let (Some(h), Some(inp)) = (b.out_field_hits, b.in_polynomial) {
                let _ = write!(s, " out_field_hits={h} in_polynomial={inp}");
            }
            s.push('\n');
            if let Some(e) = &b.expression {
                let _ = writeln!(s, "    z{} = {}", b.index, e);
            }
        }
        match (&self.recovered, &self.exponents) {
            (Some(p), Some(e)) => {
                let list: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "recovered P(x) = {p}  [{}]", list.join(","));
            }
            _ => {
                let _ = writeln!(s, "recovered P(x): none");
            }
        }
        if let Some(irr) = self.irreducible {
            let _ = writeln!(s, "irreducible: {irr}");
        }
        self.verdict.render(&mut s);
        for d in &self.diagnostics {
            let _ = writeln!(s, "diagnostic: {d}");
        }
        let _ = writeln!(
            s,
            "timings: rewrite_ms={} total_ms={}",
            self.timings.rewrite_ms, self.timings.total_ms
        );
        let _ = writeln!(s, "peak_monomials: {}", self.peak_monomials);
        s
    }
}

/// Output of `verify`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerifyDocument {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub m: usize,
    pub polynomial: String,
    pub verdicts: Vec<VerdictRecord>,
    pub total_ms: f64,
}

impl VerifyDocument {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.tool, self.version);
        let _ = writeln!(
            s,
            "command: {} input: {} threads: {}",
            self.config.command,
            self.config.input.as_deref().unwrap_or("-"),
            self.config.threads
        );
        let _ = writeln!(s, "m: {} polynomial: {}", self.m, self.polynomial);
        for v in &self.verdicts {
            v.render(&mut s);
        }
        let _ = writeln!(s, "total_ms: {}", self.total_ms);
        s
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub polynomial: String,
    pub m: usize,
    pub irreducible: bool,
    pub xor_cost: usize,
    pub and_gates: usize,
    pub xor_gates: usize,
    pub total_gates: usize,
    pub extract_ms: Option<f64>,
    pub peak_monomials: Option<usize>,
    pub recovered: Option<bool>,
}

/// Output of `stats`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct StatsDocument {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub rows: Vec<StatsRow>,
}

impl StatsDocument {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.tool, self.version);
        let _ = writeln!(
            s,
            "{:<32} {:>5} {:>11} {:>8} {:>7} {:>7} {:>7} {:>12} {:>14} {:>9}",
            "polynomial", "m", "irreducible", "xor_cost", "and", "xor", "gates", "extract_ms", "peak_monomials", "recovered"
        );
        let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<32} {:>5} {:>11} {:>8} {:>7} {:>7} {:>7} {:>12} {:>14} {:>9}",
                r.polynomial,
                r.m,
                r.irreducible,
                r.xor_cost,
                r.and_gates,
                r.xor_gates,
                r.total_gates,
                opt(r.extract_ms.map(|x| x.to_string())),
                opt(r.peak_monomials.map(|x| x.to_string())),
                opt(r.recovered.map(|x| x.to_string())),
            );
        }
        s
    }
}
