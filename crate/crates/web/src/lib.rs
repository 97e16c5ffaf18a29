// SPDX-License-Identifier: Apache-2.0

//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Every export returns a JSON string. Rewriting runs on the calling thread
//! because the page is single-threaded.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use gfextract::extractor::{validate_irreducible, IrrPoly};
use gfextract::generator::{gen_mastrovito, obfuscate, reduction_matrix, xor_cost, GenOptions};
use gfextract::netlist::{parse_netlist, GateKind, Netlist};
use gfextract::report::{ConfigEcho, ExtractDocument};
use gfextract::verify::full_pipeline;

pub const SAMPLE_NETLIST: &str = include_str!("../../core/testdata/gf4_two_bit.eqn");

/// Largest width the page will generate; rewriting above this gets slow in a tab.
pub const MAX_DEMO_WIDTH: usize = 64;

#[derive(Serialize)]
struct ReductionTable {
    polynomial: String,
    m: usize,
    irreducible: bool,
    xor_cost: usize,
    /// `rows[k]`: output columns receiving `s_k`.
    rows: Vec<Vec<usize>>,
    /// `columns[i]`: partial sums folded into `z_i`.
    columns: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct RoundTrip {
    polynomial: String,
    gates: usize,
    and_gates: usize,
    xor_gates: usize,
    netlist: String,
    matches: bool,
    report: ExtractDocument,
}

fn parse_poly(list: &str) -> Result<IrrPoly, String> {
    IrrPoly::parse_list(list).map_err(|e| e.to_string())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo documents serialize")
}

fn extract_doc(n: &Netlist, command: &str, poly: Option<&IrrPoly>) -> Result<ExtractDocument, String> {
    let r = full_pipeline(n, 1).map_err(|e| e.to_string())?;
    let config = ConfigEcho {
        command: command.into(),
        input: None,
        threads: 1,
        polynomial: poly.map(|p| p.to_list()),
        seed: None,
    };
    Ok(ExtractDocument::new(&r, n.gates().len(), config, false))
}

pub fn reduction_table_json(poly: &str) -> Result<String, String> {
    let p = parse_poly(poly)?;
    let rm = reduction_matrix(p.m(), &p).map_err(|e| e.to_string())?;
    Ok(json(&ReductionTable {
        polynomial: p.to_string(),
        m: p.m(),
        irreducible: validate_irreducible(&p),
        xor_cost: xor_cost(&rm),
        columns: (0..p.m()).map(|i| rm.column(i)).collect(),
        rows: rm.rows,
    }))
}

pub fn round_trip_json(poly: &str, share: bool, seed: Option<u64>, budget: usize) -> Result<String, String> {
    let p = parse_poly(poly)?;
    if p.m() > MAX_DEMO_WIDTH {
        return Err(format!("the demo is limited to m <= {MAX_DEMO_WIDTH}"));
    }
    let mut n = gen_mastrovito(&p, GenOptions { share });
    if let Some(seed) = seed {
        n = obfuscate(&n, seed, budget);
    }
    let report = extract_doc(&n, "round-trip", Some(&p))?;
    Ok(json(&RoundTrip {
        polynomial: p.to_string(),
        gates: n.gates().len(),
        and_gates: n.count_kind(GateKind::And),
        xor_gates: n.count_kind(GateKind::Xor),
        netlist: n.to_text(),
        matches: report.recovered.as_deref() == Some(p.to_string().as_str()),
        report,
    }))
}

pub fn extract_json(text: &str) -> Result<String, String> {
    let n = parse_netlist(text).map_err(|e| e.to_string())?;
    extract_doc(&n, "extract", None).map(|d| json(&d))
}

/// Reduction matrix and XOR cost for a descending exponent list like `"4,1,0"`.
#[wasm_bindgen]
pub fn reduction_table(poly: &str) -> Result<String, JsValue> {
    reduction_table_json(poly).map_err(|e| JsValue::from_str(&e))
}

/// Generates a multiplier for `poly`, optionally obfuscates it (`seed < 0`
/// skips that), and extracts the polynomial back.
#[wasm_bindgen]
pub fn round_trip(poly: &str, share: bool, seed: f64, budget: u32) -> Result<String, JsValue> {
    let seed = (seed >= 0.0).then_some(seed as u64);
    round_trip_json(poly, share, seed, budget as usize).map_err(|e| JsValue::from_str(&e))
}

/// Runs the full pipeline on pasted netlist text.
#[wasm_bindgen]
pub fn extract(text: &str) -> Result<String, JsValue> {
    extract_json(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_netlist() -> String {
    SAMPLE_NETLIST.to_string()
}
