// SPDX-License-Identifier: Apache-2.0

//! Backward rewriting of each output bit into a polynomial over the
//! primary inputs.
//!
//! Bit `i` starts from the one-variable polynomial `z_i` and substitutes
//! each gate of its cone, outputs first, by the gate's polynomial model.
//! Monomials only cancel inside one bit's polynomial, so the bits are
//! rewritten independently and in parallel.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use thiserror::Error;
use web_time::Instant;

use crate::gfpoly::{gate_to_poly, IndexedPoly, Poly2};
use crate::netlist::{output_z, Cone, Netlist, VarId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("bit {bit}: rewriting left non-input signals {}", .vars.join(", "))]
    Residual { bit: usize, vars: Vec<String> },
    #[error("thread count must be at least 1")]
    NoThreads,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitStats {
    /// Substitutions performed, one per cone gate.
    pub steps: usize,
    pub peak_monomials: usize,
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct BitExpression {
    pub bit: usize,
    pub expr: Poly2,
    pub stats: BitStats,
}

#[derive(Clone, Debug)]
pub struct RewriteReport {
    pub m: usize,
    /// Ordered by bit index.
    pub bits: Vec<BitExpression>,
    pub wall_time: Duration,
    pub threads: usize,
}

impl RewriteReport {
    pub fn expressions(&self) -> impl Iterator<Item = &Poly2> {
        self.bits.iter().map(|b| &b.expr)
    }

    pub fn peak_monomials(&self) -> usize {
        self.bits.iter().map(|b| b.stats.peak_monomials).max().unwrap_or(0)
    }

    /// Same expressions and step counts, ignoring timings and thread count.
    pub fn same_result(&self, other: &RewriteReport) -> bool {
        self.m == other.m
            && self.bits.len() == other.bits.len()
            && self.bits.iter().zip(&other.bits).all(|(x, y)| {
                x.bit == y.bit
                    && x.expr == y.expr
                    && x.stats.steps == y.stats.steps
                    && x.stats.peak_monomials == y.stats.peak_monomials
            })
    }
}

fn rewrite_cone(n: &Netlist, cone: &Cone) -> Result<BitExpression, RewriteError> {
    let start = Instant::now();
    let m = n.m();
    let first_tracked = VarId((2 * m) as u32);
    let mut f = IndexedPoly::new(Poly2::var(output_z(m, cone.root)), first_tracked);
    let mut peak = f.len();
    let mut ins = Vec::with_capacity(2);
    for &gi in &cone.gates {
        let gate = &n.gates()[gi];
        ins.clear();
        ins.extend(gate.inputs.iter().map(|&v| Poly2::var(v)));
        let model = gate_to_poly(gate.kind, &ins).expect("netlist arity is validated");
        f.substitute(gate.out, &model);
        peak = peak.max(f.len());
    }
    let expr = f.into_poly();
    let residual: Vec<String> = expr
        .vars()
        .into_iter()
        .filter(|&v| v >= first_tracked)
        .map(|v| n.name(v).to_string())
        .collect();
    if !residual.is_empty() {
        return Err(RewriteError::Residual {
            bit: cone.root,
            vars: residual,
        });
    }
    Ok(BitExpression {
        bit: cone.root,
        expr,
        stats: BitStats {
            steps: cone.gates.len(),
            peak_monomials: peak,
            wall_time: start.elapsed(),
        },
    })
}

/// Rewrites output `z_i` down to the primary inputs.
pub fn rewrite_bit(n: &Netlist, i: usize) -> Result<BitExpression, RewriteError> {
    rewrite_cone(n, &n.cone_of(i))
}

/// Rewrites every output bit on `threads` workers, largest cone first.
/// The result does not depend on the thread count.
pub fn rewrite_all(n: &Netlist, threads: usize) -> Result<RewriteReport, RewriteError> {
    if threads == 0 {
        return Err(RewriteError::NoThreads);
    }
    let start = Instant::now();
    let m = n.m();
    let mut cones: Vec<Cone> = (0..m).map(|i| n.cone_of(i)).collect();
    cones.sort_by(|x, y| y.gates.len().cmp(&x.gates.len()).then(x.root.cmp(&y.root)));
    let workers = threads.min(m).max(1);

    let mut results: Vec<Option<Result<BitExpression, RewriteError>>> = vec![None; m];
    if workers == 1 {
        for cone in &cones {
            results[cone.root] = Some(rewrite_cone(n, cone));
        }
    } else {
        let next = AtomicUsize::new(0);
        let slots = Mutex::new(&mut results);
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let job = next.fetch_add(1, Ordering::Relaxed);
                    let Some(cone) = cones.get(job) else { break };
                    let r = rewrite_cone(n, cone);
                    slots.lock().unwrap()[cone.root] = Some(r);
                });
            }
        });
    }

    let bits = results
        .into_iter()
        .map(|r| r.expect("every bit was scheduled"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RewriteReport {
        m,
        bits,
        wall_time: start.elapsed(),
        threads: workers,
    })
}
