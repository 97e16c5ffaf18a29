// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use gfextract::extractor::{validate_irreducible, IrrPoly};
use gfextract::netlist::{GateDef, GateKind, Netlist};

/// Trinomials and pentanomials of degree `m` that pass the irreducibility test.
pub fn sparse_irreducibles(m: usize) -> Vec<IrrPoly> {
    let mut out = Vec::new();
    for k in 1..m {
        out.push(IrrPoly::new(m, [k, 0]).unwrap());
    }
    for a in 3..m {
        for b in 2..a {
            for c in 1..b {
                out.push(IrrPoly::new(m, [a, b, c, 0]).unwrap());
            }
        }
    }
    out.retain(validate_irreducible);
    out
}

/// Every irreducible trinomial and pentanomial with degree in `lo..=hi`.
pub fn corpus(lo: usize, hi: usize) -> Vec<IrrPoly> {
    (lo..=hi).flat_map(sparse_irreducibles).collect()
}

pub fn poly(s: &str) -> IrrPoly {
    IrrPoly::parse_list(s).unwrap()
}

pub fn max_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).max(4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    Retype(GateKind),
    DropInverter,
}

/// Applies a single-gate mutation to gate `idx` of the netlist's definition list.
pub fn mutate(n: &Netlist, idx: usize, mutation: Mutation) -> Netlist {
    let mut defs: Vec<GateDef> = n.gate_defs();
    match mutation {
        Mutation::Retype(k) => defs[idx].kind = k,
        Mutation::DropInverter => {
            defs[idx].kind = match defs[idx].kind {
                GateKind::Not => GateKind::Buf,
                GateKind::Nand => GateKind::And,
                GateKind::Nor => GateKind::Or,
                GateKind::Xnor => GateKind::Xor,
                k => k,
            }
        }
    }
    Netlist::from_gate_defs(defs).unwrap()
}

/// Mutations that change the gate's type, the kind the fault-injection suite uses.
pub fn candidate_mutations(n: &Netlist) -> Vec<(usize, Mutation)> {
    let mut out = Vec::new();
    for (i, g) in n.gate_defs().iter().enumerate() {
        match g.kind {
            GateKind::Xor => out.push((i, Mutation::Retype(GateKind::Or))),
            GateKind::Or => out.push((i, Mutation::Retype(GateKind::Xor))),
            GateKind::And => out.push((i, Mutation::Retype(GateKind::Or))),
            GateKind::Not | GateKind::Nand | GateKind::Nor | GateKind::Xnor => out.push((i, Mutation::DropInverter)),
            _ => {}
        }
    }
    out
}
