// SPDX-License-Identifier: Apache-2.0

//! Gate-level netlists: parsing, validation, topological ordering and
//! per-output logic cones.
//!
//! The text format is one gate per line:
//!
//! ```text
//! # comment
//! s0 = NAND(a0, b0)
//! z0 = XOR(s0, s2)
//! ```
//!
//! Signals `a<i>`, `b<i>` are primary inputs and `z<i>` primary outputs.
//! Everything else is an internal wire. The field width `m` is inferred
//! from the highest index of each family and all three must agree.
//!
//! Variable ids are laid out so that primary inputs and outputs get the
//! same id in every netlist of a given width: `a_i = i`, `b_i = m + i`,
//! `z_i = 2m + i`, and internal wires follow in order of first appearance.
//! Expressions over primary inputs are therefore comparable across netlists.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Dense handle of a signal inside one netlist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Role of a signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    InputA(usize),
    InputB(usize),
    OutputZ(usize),
    Internal,
}

impl VarKind {
    pub fn is_primary_input(self) -> bool {
        matches!(self, VarKind::InputA(_) | VarKind::InputB(_))
    }
}

/// Id of `a_i` in a width-`m` netlist.
pub fn input_a(_m: usize, i: usize) -> VarId {
    VarId(i as u32)
}

/// Id of `b_i` in a width-`m` netlist.
pub fn input_b(m: usize, i: usize) -> VarId {
    VarId((m + i) as u32)
}

/// Id of `z_i` in a width-`m` netlist.
pub fn output_z(m: usize, i: usize) -> VarId {
    VarId((2 * m + i) as u32)
}

/// Kind of a primary-input or output id, independent of any netlist.
pub fn io_kind(m: usize, v: VarId) -> VarKind {
    let i = v.index();
    if i < m {
        VarKind::InputA(i)
    } else if i < 2 * m {
        VarKind::InputB(i - m)
    } else if i < 3 * m {
        VarKind::OutputZ(i - 2 * m)
    } else {
        VarKind::Internal
    }
}

/// Name of a primary-input or output id; internal ids render as `w<id>`.
pub fn io_name(m: usize, v: VarId) -> String {
    match io_kind(m, v) {
        VarKind::InputA(i) => format!("a{i}"),
        VarKind::InputB(i) => format!("b{i}"),
        VarKind::OutputZ(i) => format!("z{i}"),
        VarKind::Internal => format!("w{}", v.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Not,
    Buf,
    And,
    Or,
    Xor,
    Nand,
    Nor,
    Xnor,
    Const0,
    Const1,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::Not,
        GateKind::Buf,
        GateKind::And,
        GateKind::Or,
        GateKind::Xor,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xnor,
        GateKind::Const0,
        GateKind::Const1,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Xor => "XOR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Xnor => "XNOR",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
        }
    }

    pub fn from_keyword(s: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.keyword() == s)
    }

    /// Whether `n` inputs is a legal arity for this kind.
    pub fn accepts_arity(self, n: usize) -> bool {
        match self {
            GateKind::Not | GateKind::Buf => n == 1,
            GateKind::Const0 | GateKind::Const1 => n == 0,
            _ => n >= 2,
        }
    }

    fn arity_text(self) -> &'static str {
        match self {
            GateKind::Not | GateKind::Buf => "exactly 1",
            GateKind::Const0 | GateKind::Const1 => "no",
            _ => "at least 2",
        }
    }

    /// The binary kind used for the inner nodes when an n-ary gate is folded.
    fn fold_inner(self) -> GateKind {
        match self {
            GateKind::Nand => GateKind::And,
            GateKind::Nor => GateKind::Or,
            GateKind::Xnor => GateKind::Xor,
            k => k,
        }
    }

    /// Evaluates the gate on 64 input vectors at once.
    pub fn eval_word(self, ins: &[u64]) -> u64 {
        let fold = |f: fn(u64, u64) -> u64| ins[1..].iter().fold(ins[0], |acc, &x| f(acc, x));
        match self {
            GateKind::Not => !ins[0],
            GateKind::Buf => ins[0],
            GateKind::And => fold(|x, y| x & y),
            GateKind::Or => fold(|x, y| x | y),
            GateKind::Xor => fold(|x, y| x ^ y),
            GateKind::Nand => !fold(|x, y| x & y),
            GateKind::Nor => !fold(|x, y| x | y),
            GateKind::Xnor => !fold(|x, y| x ^ y),
            GateKind::Const0 => 0,
            GateKind::Const1 => !0,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub out: VarId,
    pub kind: GateKind,
    pub inputs: Vec<VarId>,
}

/// A gate definition by signal name, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateDef {
    pub out: String,
    pub kind: GateKind,
    pub inputs: Vec<String>,
    /// Source line, 0 when the definition was built programmatically.
    pub line: usize,
}

impl GateDef {
    pub fn new(out: impl Into<String>, kind: GateKind, inputs: &[&str]) -> GateDef {
        GateDef {
            out: out.into(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            line: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("output {0} is not driven")]
    UndrivenOutput(String),
    #[error("signal {name} is driven more than once (lines {first} and {second})")]
    MultipleDrivers {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("primary input {0} cannot be driven by a gate")]
    DrivenInput(String),
    #[error("combinational cycle through {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("line {line}: {kind} takes {expected} inputs, got {got}")]
    Arity {
        line: usize,
        kind: GateKind,
        expected: &'static str,
        got: usize,
    },
    #[error("inconsistent operand widths: a has {a} bits, b has {b}, z has {z}")]
    WidthMismatch { a: usize, b: usize, z: usize },
}

/// Validated, immutable gate-level netlist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Netlist {
    m: usize,
    names: Vec<String>,
    ids: HashMap<String, VarId>,
    gates: Vec<Gate>,
    driver: Vec<Option<usize>>,
    topo: Vec<usize>,
}

/// Transitive fan-in of one output bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub root: usize,
    /// Gate indices, reverse topological order.
    pub gates: Vec<usize>,
}

fn io_family(name: &str) -> Option<(char, usize)> {
    let mut chars = name.chars();
    let family = chars.next()?;
    if !matches!(family, 'a' | 'b' | 'z') {
        return None;
    }
    let digits = &name[1..];
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok().map(|i| (family, i))
}

/// Folds n-ary AND/OR/XOR (and their inversions) into chains of binary gates.
fn fold_nary(defs: Vec<GateDef>) -> Vec<GateDef> {
    let mut taken: HashSet<String> = HashSet::new();
    for d in &defs {
        taken.insert(d.out.clone());
        taken.extend(d.inputs.iter().cloned());
    }
    let mut out = Vec::with_capacity(defs.len());
    for d in defs {
        if d.inputs.len() <= 2 || !d.kind.accepts_arity(d.inputs.len()) {
            out.push(d);
            continue;
        }
        let inner = d.kind.fold_inner();
        let mut acc = d.inputs[0].clone();
        let last = d.inputs.len() - 1;
        for (k, next) in d.inputs[1..last].iter().enumerate() {
            let mut fresh = format!("{}_f{}", d.out, k);
            while taken.contains(&fresh) {
                fresh.push('_');
            }
            taken.insert(fresh.clone());
            out.push(GateDef {
                out: fresh.clone(),
                kind: inner,
                inputs: vec![acc, next.clone()],
                line: d.line,
            });
            acc = fresh;
        }
        out.push(GateDef {
            out: d.out,
            kind: d.kind,
            inputs: vec![acc, d.inputs[last].clone()],
            line: d.line,
        });
    }
    out
}

impl Netlist {
    /// Builds and validates a netlist from named gate definitions.
    pub fn from_gate_defs(defs: Vec<GateDef>) -> Result<Netlist, NetlistError> {
        for d in &defs {
            if !d.kind.accepts_arity(d.inputs.len()) {
                return Err(NetlistError::Arity {
                    line: d.line,
                    kind: d.kind,
                    expected: d.kind.arity_text(),
                    got: d.inputs.len(),
                });
            }
        }
        let defs = fold_nary(defs);

        let (mut wa, mut wb, mut wz) = (0, 0, 0);
        for d in &defs {
            for name in std::iter::once(&d.out).chain(&d.inputs) {
                match io_family(name) {
                    Some(('a', i)) => wa = wa.max(i + 1),
                    Some(('b', i)) => wb = wb.max(i + 1),
                    Some(('z', i)) => wz = wz.max(i + 1),
                    _ => {}
                }
            }
        }
        if wa != wb || wb != wz || wz == 0 {
            return Err(NetlistError::WidthMismatch { a: wa, b: wb, z: wz });
        }
        let m = wz;

        let mut names: Vec<String> = Vec::with_capacity(3 * m + defs.len());
        for fam in ['a', 'b', 'z'] {
            names.extend((0..m).map(|i| format!("{fam}{i}")));
        }
        let mut ids: HashMap<String, VarId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VarId(i as u32)))
            .collect();
        let mut intern = |name: &str, names: &mut Vec<String>| -> VarId {
            if let Some(&id) = ids.get(name) {
                return id;
            }
            let id = VarId(names.len() as u32);
            names.push(name.to_string());
            ids.insert(name.to_string(), id);
            id
        };

        let mut gates = Vec::with_capacity(defs.len());
        let mut lines = Vec::with_capacity(defs.len());
        for d in &defs {
            let out = intern(&d.out, &mut names);
            let inputs = d.inputs.iter().map(|s| intern(s, &mut names)).collect();
            gates.push(Gate {
                out,
                kind: d.kind,
                inputs,
            });
            lines.push(d.line);
        }

        let mut driver: Vec<Option<usize>> = vec![None; names.len()];
        for (gi, g) in gates.iter().enumerate() {
            if g.out.index() < 2 * m {
                return Err(NetlistError::DrivenInput(names[g.out.index()].clone()));
            }
            if let Some(prev) = driver[g.out.index()] {
                return Err(NetlistError::MultipleDrivers {
                    name: names[g.out.index()].clone(),
                    first: lines[prev],
                    second: lines[gi],
                });
            }
            driver[g.out.index()] = Some(gi);
        }
        for i in 0..m {
            if driver[2 * m + i].is_none() {
                return Err(NetlistError::UndrivenOutput(format!("z{i}")));
            }
        }

        let mut n = Netlist {
            m,
            names,
            ids,
            gates,
            driver,
            topo: Vec::new(),
        };
        n.topo = n.topo_order()?;
        Ok(n)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gate indices in topological order, ties broken by declaration index.
    pub fn topo(&self) -> &[usize] {
        &self.topo
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.ids.get(name).copied()
    }

    pub fn kind(&self, v: VarId) -> VarKind {
        io_kind(self.m, v)
    }

    pub fn driver(&self, v: VarId) -> Option<usize> {
        self.driver[v.index()]
    }

    /// Internal wires that are read but never driven.
    pub fn free_wires(&self) -> Vec<VarId> {
        (3 * self.m..self.names.len())
            .map(|i| VarId(i as u32))
            .filter(|&v| self.driver[v.index()].is_none())
            .collect()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Recomputes a deterministic topological order (Kahn, smallest index first).
    pub fn topo_order(&self) -> Result<Vec<usize>, NetlistError> {
        let n = self.gates.len();
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut pending = vec![0usize; n];
        for (gi, g) in self.gates.iter().enumerate() {
            for v in &g.inputs {
                if let Some(d) = self.driver[v.index()] {
                    users[d].push(gi);
                    pending[gi] += 1;
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&g| pending[g] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(g)) = ready.pop() {
            order.push(g);
            for &u in &users[g] {
                pending[u] -= 1;
                if pending[u] == 0 {
                    ready.push(Reverse(u));
                }
            }
        }
        if order.len() == n {
            return Ok(order);
        }
        Err(NetlistError::Cycle(self.find_cycle(&pending)))
    }

    fn find_cycle(&self, pending: &[usize]) -> Vec<String> {
        // Every gate still pending has at least one pending driver, so
        // walking backwards must revisit a gate.
        let start = pending.iter().position(|&p| p > 0).expect("a pending gate");
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut path = Vec::new();
        let mut g = start;
        loop {
            if let Some(&pos) = seen.get(&g) {
                let mut cycle: Vec<String> = path[pos..]
                    .iter()
                    .map(|&gi: &usize| self.names[self.gates[gi].out.index()].clone())
                    .collect();
                cycle.reverse();
                cycle.push(cycle[0].clone());
                return cycle;
            }
            seen.insert(g, path.len());
            path.push(g);
            g = self.gates[g]
                .inputs
                .iter()
                .filter_map(|v| self.driver[v.index()])
                .find(|&d| pending[d] > 0)
                .expect("pending gate has a pending driver");
        }
    }

    /// Gates in the transitive fan-in of output `z_i`, reverse topological order.
    pub fn cone_of(&self, i: usize) -> Cone {
        assert!(i < self.m, "output index {i} out of range for m = {}", self.m);
        let mut in_cone = vec![false; self.gates.len()];
        let mut stack = vec![self.driver[2 * self.m + i].expect("validated output")];
        while let Some(g) = stack.pop() {
            if std::mem::replace(&mut in_cone[g], true) {
                continue;
            }
            for v in &self.gates[g].inputs {
                if let Some(d) = self.driver[v.index()] {
                    if !in_cone[d] {
                        stack.push(d);
                    }
                }
            }
        }
        Cone {
            root: i,
            gates: self.topo.iter().rev().copied().filter(|&g| in_cone[g]).collect(),
        }
    }

    fn eval_gates(&self, order: impl Iterator<Item = usize>, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m;
        assert_eq!(a.len(), m);
        assert_eq!(b.len(), m);
        let mut val = vec![0u64; self.names.len()];
        val[..m].copy_from_slice(a);
        val[m..2 * m].copy_from_slice(b);
        let mut ins = Vec::with_capacity(2);
        for gi in order {
            let g = &self.gates[gi];
            ins.clear();
            ins.extend(g.inputs.iter().map(|v| val[v.index()]));
            val[g.out.index()] = g.kind.eval_word(&ins);
        }
        val
    }

    /// Bit-parallel simulation: lane `l` of `a[i]` is bit `a_i` of vector `l`.
    /// Returns one word per output bit. Free wires read as 0.
    pub fn simulate_words(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let val = self.eval_gates(self.topo.iter().copied(), a, b);
        val[2 * self.m..3 * self.m].to_vec()
    }

    /// Simulates only the gates of `cone`, returning the word of its root output.
    pub fn simulate_cone(&self, cone: &Cone, a: &[u64], b: &[u64]) -> u64 {
        let val = self.eval_gates(cone.gates.iter().rev().copied(), a, b);
        val[2 * self.m + cone.root]
    }

    /// Simulates one input pair given as bit vectors (LSB first).
    pub fn simulate(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let w = |bits: &[bool]| bits.iter().map(|&x| if x { 1 } else { 0 }).collect::<Vec<u64>>();
        self.simulate_words(&w(a), &w(b))
            .into_iter()
            .map(|x| x & 1 == 1)
            .collect()
    }

    /// Named gate definitions in declaration order.
    pub fn gate_defs(&self) -> Vec<GateDef> {
        self.gates
            .iter()
            .map(|g| GateDef {
                out: self.name(g.out).to_string(),
                kind: g.kind,
                inputs: g.inputs.iter().map(|&v| self.name(v).to_string()).collect(),
                line: 0,
            })
            .collect()
    }

    /// Canonical text form; `parse_netlist` inverts it exactly.
    pub fn to_text(&self) -> String {
        let mut s = format!("# GF(2^{}) netlist, {} gates\n", self.m, self.gates.len());
        for g in &self.gates {
            let ins: Vec<&str> = g.inputs.iter().map(|&v| self.name(v)).collect();
            s.push_str(&format!("{} = {}({})\n", self.name(g.out), g.kind, ins.join(", ")));
        }
        s
    }
}

struct LineCursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> LineCursor<'a> {
    fn err(&self, message: impl Into<String>) -> NetlistError {
        NetlistError::Syntax {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, NetlistError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            return Err(self.err(format!("expected {what}")));
        }
        self.pos += end;
        Ok(&rest[..end])
    }

    fn expect(&mut self, c: char) -> Result<(), NetlistError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }
}

fn parse_gate_line(text: &str, line: usize) -> Result<GateDef, NetlistError> {
    let mut cur = LineCursor { text, pos: 0, line };
    let out = cur.ident("signal name")?.to_string();
    cur.expect('=')?;
    let kind_pos = {
        cur.skip_ws();
        cur.pos
    };
    let kw = cur.ident("gate kind")?;
    let kind = GateKind::from_keyword(kw).ok_or_else(|| {
        cur.pos = kind_pos;
        cur.err(format!("unknown gate kind '{kw}'"))
    })?;
    cur.expect('(')?;
    let mut inputs = Vec::new();
    if !cur.eat(')') {
        loop {
            inputs.push(cur.ident("signal name")?.to_string());
            if cur.eat(')') {
                break;
            }
            cur.expect(',')?;
        }
    }
    if !cur.at_end() {
        return Err(cur.err("unexpected trailing text"));
    }
    Ok(GateDef {
        out,
        kind,
        inputs,
        line,
    })
}

/// Parses the line-oriented netlist format and validates the result.
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let mut defs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if body.trim().is_empty() {
            continue;
        }
        defs.push(parse_gate_line(body, i + 1)?);
    }
    Netlist::from_gate_defs(defs)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TWO_BIT: &str = include_str!("../testdata/gf4_two_bit.eqn");

    #[test]
    fn parses_two_bit_multiplier() {
        let n = parse_netlist(TWO_BIT).unwrap();
        assert_eq!(n.m(), 2);
        assert_eq!(n.gates().len(), 7);
        assert_eq!(n.lookup("a1"), Some(VarId(1)));
        assert_eq!(n.lookup("b0"), Some(VarId(2)));
        assert_eq!(n.lookup("z1"), Some(VarId(5)));
    }

    #[test]
    fn topo_order_respects_drivers() {
        let n = parse_netlist(TWO_BIT).unwrap();
        let mut pos = vec![0; n.gates().len()];
        for (p, &g) in n.topo().iter().enumerate() {
            pos[g] = p;
        }
        for (gi, g) in n.gates().iter().enumerate() {
            for v in &g.inputs {
                if let Some(d) = n.driver(*v) {
                    assert!(pos[d] < pos[gi]);
                }
            }
        }
    }

    #[test]
    fn single_gate() {
        let n = parse_netlist("z0 = AND(a0, b0)").unwrap();
        assert_eq!(n.m(), 1);
        assert_eq!(n.topo(), &[0]);
        assert_eq!(n.cone_of(0).gates, vec![0]);
    }

    #[test]
    fn cone_of_z0_skips_z1_logic() {
        let n = parse_netlist(TWO_BIT).unwrap();
        let c0 = n.cone_of(0);
        let outs: HashSet<&str> = c0.gates.iter().map(|&g| n.name(n.gates()[g].out)).collect();
        assert_eq!(outs, HashSet::from(["z0", "s0", "s2"]));
        assert_eq!(n.cone_of(1).gates.len(), 5);
    }

    #[test]
    fn const_output_cone() {
        let n = parse_netlist("t = AND(a0, b0)\nz0 = CONST0()").unwrap();
        assert_eq!(n.cone_of(0).gates.len(), 1);
    }

    #[test]
    fn nary_gates_fold_left() {
        let n = parse_netlist("z0 = XNOR(a0, b0, a0)\n").unwrap();
        assert_eq!(n.gates().len(), 2);
        assert_eq!(n.gates()[0].kind, GateKind::Xor);
        assert_eq!(n.gates()[1].kind, GateKind::Xnor);
        assert_eq!(n.gates()[1].inputs[0], n.gates()[0].out);
        for (a, b) in [(false, false), (true, false), (false, true), (true, true)] {
            let z = n.simulate(&[a], &[b]);
            assert_eq!(z[0], !(a ^ b ^ a));
        }
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_netlist("z0 = AND(a0, b0)\nz1 = FOO(a1, b1)").unwrap_err();
        assert_eq!(
            err,
            NetlistError::Syntax {
                line: 2,
                column: 6,
                message: "unknown gate kind 'FOO'".into()
            }
        );
        let err = parse_netlist("z0 = AND(a0 b0)").unwrap_err();
        assert!(matches!(err, NetlistError::Syntax { line: 1, column: 13, .. }), "{err}");
    }

    #[test]
    fn rejects_structural_errors() {
        assert!(matches!(
            parse_netlist("z0 = AND(a0, b0)\nt = AND(a1, b1)\nz1 = t2"),
            Err(NetlistError::Syntax { .. })
        ));
        assert!(matches!(
            parse_netlist("z1 = AND(a1, b1)\nt = AND(a0, b0)"),
            Err(NetlistError::UndrivenOutput(name)) if name == "z0"
        ));
        assert!(matches!(
            parse_netlist("z0 = AND(a0, b0)\nz0 = OR(a0, b0)"),
            Err(NetlistError::MultipleDrivers { first: 1, second: 2, .. })
        ));
        assert!(matches!(
            parse_netlist("z0 = NOT(a0, b0)"),
            Err(NetlistError::Arity { got: 2, .. })
        ));
        assert!(matches!(
            parse_netlist("z0 = AND(a0)"),
            Err(NetlistError::Arity { got: 1, .. })
        ));
        assert!(matches!(
            parse_netlist("z0 = AND(a0, b1)\nz1 = BUF(a0)"),
            Err(NetlistError::WidthMismatch { a: 1, b: 2, z: 2 })
        ));
        assert!(matches!(
            parse_netlist("a0 = AND(b0, z0)\nz0 = BUF(b0)"),
            Err(NetlistError::DrivenInput(_))
        ));
    }

    #[test]
    fn reports_cycle_signals() {
        let err = parse_netlist("x = AND(a0, y)\ny = XOR(x, b0)\nz0 = BUF(x)").unwrap_err();
        match err {
            NetlistError::Cycle(names) => {
                assert_eq!(names.first(), names.last());
                assert!(names.contains(&"x".to_string()));
                assert!(names.contains(&"y".to_string()));
            }
            other => panic!("expected cycle, got {other}"),
        }
    }

    #[test]
    fn io_families() {
        assert_eq!(io_family("a12"), Some(('a', 12)));
        assert_eq!(io_family("a012"), None);
        assert_eq!(io_family("ab1"), None);
        assert_eq!(io_family("z"), None);
    }

    #[test]
    fn text_round_trip() {
        let n = parse_netlist(TWO_BIT).unwrap();
        assert_eq!(parse_netlist(&n.to_text()).unwrap(), n);
    }
}
