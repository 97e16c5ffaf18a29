// SPDX-License-Identifier: Apache-2.0

//! Golden Mastrovito multipliers and their specification expressions.
//!
//! A product `A(x) B(x)` is first formed as the partial sums
//! `s_k = sum_{i+j=k} a_i b_j` for `k in 0..=2m-2`, then every `s_k` with
//! `k >= m` is folded into the output columns given by `x^k mod P(x)`.

use std::collections::{HashMap, HashSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::extractor::IrrPoly;
use crate::gfpoly::{Monomial, Poly2};
use crate::netlist::{input_a, input_b, GateDef, GateKind, Netlist};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("polynomial has degree {poly}, expected {m}")]
    WidthMismatch { m: usize, poly: usize },
}

/// Output columns receiving each partial sum `s_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMatrix {
    pub m: usize,
    /// `rows[k]` lists, ascending, the `i` with `x^i` in `x^k mod P(x)`.
    pub rows: Vec<Vec<usize>>,
}

impl ReductionMatrix {
    /// Partial sums landing in output column `i`, ascending.
    pub fn column(&self, i: usize) -> Vec<usize> {
        (0..self.rows.len()).filter(|&k| self.rows[k].contains(&i)).collect()
    }
}

pub fn reduction_matrix(m: usize, p: &IrrPoly) -> Result<ReductionMatrix, GenError> {
    if p.m() != m {
        return Err(GenError::WidthMismatch { m, poly: p.m() });
    }
    let mut rows: Vec<Vec<usize>> = (0..m).map(|k| vec![k]).collect();
    let residue: Vec<bool> = (0..m).map(|i| p.contains(i)).collect();
    let mut cur = residue.clone();
    for _ in m..=2 * m - 2 {
        rows.push((0..m).filter(|&i| cur[i]).collect());
        // multiply by x, folding x^m back in as the residue
        let overflow = cur[m - 1];
        cur.rotate_right(1);
        cur[0] = false;
        if overflow {
            for (c, r) in cur.iter_mut().zip(&residue) {
                *c ^= r;
            }
        }
    }
    Ok(ReductionMatrix { m, rows })
}

/// Expected per-bit expressions of a polynomial-basis multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecExpressions {
    pub m: usize,
    pub bits: Vec<Poly2>,
}

/// `s_k` as a polynomial in the primary inputs.
pub fn partial_sum(m: usize, k: usize) -> Poly2 {
    Poly2::from_monomials(
        (0..m)
            .filter(|&i| k >= i && k - i < m)
            .map(|i| Monomial::from_vars([input_a(m, i), input_b(m, k - i)])),
    )
}

pub fn spec_expressions(p: &IrrPoly) -> SpecExpressions {
    let m = p.m();
    let rm = reduction_matrix(m, p).expect("degree matches by construction");
    let sums: Vec<Poly2> = (0..rm.rows.len()).map(|k| partial_sum(m, k)).collect();
    let bits = (0..m)
        .map(|i| {
            let mut z = Poly2::zero();
            for k in rm.column(i) {
                z.add_assign(&sums[k]);
            }
            z
        })
        .collect();
    SpecExpressions { m, bits }
}

/// XOR gates needed to fold the partial sums into the output columns.
pub fn xor_cost(rm: &ReductionMatrix) -> usize {
    (0..rm.m).map(|i| rm.column(i).len().saturating_sub(1)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenOptions {
    /// One XOR tree per partial sum, reused by every column. When false,
    /// each column builds private copies of the partial-sum trees.
    pub share: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { share: true }
    }
}

/// Emits a balanced XOR tree over `terms` whose root is named `root`.
/// The left half takes the extra term when the count is odd.
/// A single term is buffered into `root` unless `root` already names it.
fn xor_tree(defs: &mut Vec<GateDef>, terms: &[String], root: &str, inner: &str) {
    fn build(defs: &mut Vec<GateDef>, terms: &[String], name: String, inner: &str, next: &mut usize) {
        let mid = terms.len().div_ceil(2);
        let mut side = |part: &[String], defs: &mut Vec<GateDef>| -> String {
            if part.len() == 1 {
                return part[0].clone();
            }
            let n = format!("{inner}_t{}", *next);
            *next += 1;
            build(defs, part, n.clone(), inner, next);
            n
        };
        let l = side(&terms[..mid], defs);
        let r = side(&terms[mid..], defs);
        defs.push(GateDef::new(name, GateKind::Xor, &[&l, &r]));
    }
    match terms.len() {
        0 => defs.push(GateDef::new(root, GateKind::Const0, &[])),
        1 if terms[0] == root => {}
        1 => defs.push(GateDef::new(root, GateKind::Buf, &[&terms[0]])),
        _ => build(defs, terms, root.to_string(), inner, &mut 0),
    }
}

/// Name prefix of the gates that fold partial sums into the output columns.
pub const REDUCTION_PREFIX: &str = "red";

/// Builds a Mastrovito multiplier for `p`: `m^2` AND gates, partial-sum XOR
/// trees, then one XOR tree per output column.
pub fn gen_mastrovito(p: &IrrPoly, opts: GenOptions) -> Netlist {
    let m = p.m();
    let rm = reduction_matrix(m, p).expect("degree matches by construction");
    let mut defs = Vec::new();
    let pp = |i: usize, j: usize| format!("pp{i}_{j}");
    for i in 0..m {
        for j in 0..m {
            defs.push(GateDef::new(pp(i, j), GateKind::And, &[&format!("a{i}"), &format!("b{j}")]));
        }
    }
    let products = |k: usize| -> Vec<String> {
        (0..m).filter(|&i| k >= i && k - i < m).map(|i| pp(i, k - i)).collect()
    };
    let emit_sum = |defs: &mut Vec<GateDef>, k: usize, name: String| -> String {
        let terms = products(k);
        if terms.len() == 1 {
            return terms[0].clone();
        }
        xor_tree(defs, &terms, &name, &name);
        name
    };

    let mut shared: Vec<String> = Vec::new();
    if opts.share {
        for k in 0..rm.rows.len() {
            shared.push(emit_sum(&mut defs, k, format!("s{k}")));
        }
    }
    for i in 0..m {
        let terms: Vec<String> = rm
            .column(i)
            .into_iter()
            .map(|k| {
                if opts.share {
                    shared[k].clone()
                } else {
                    emit_sum(&mut defs, k, format!("c{i}_s{k}"))
                }
            })
            .collect();
        xor_tree(&mut defs, &terms, &format!("z{i}"), &format!("{REDUCTION_PREFIX}{i}"));
    }
    Netlist::from_gate_defs(defs).expect("generated netlist is well formed")
}

/// Random local rewrites that preserve the function of a netlist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rewrite {
    XorToNotXnor,
    AndToNotNand,
    DeMorgan,
    XnorToXorNot,
    Reassociate,
    InsertDoubleNot,
    RemoveDoubleNot,
}

const REWRITES: [Rewrite; 7] = [
    Rewrite::XorToNotXnor,
    Rewrite::AndToNotNand,
    Rewrite::DeMorgan,
    Rewrite::XnorToXorNot,
    Rewrite::Reassociate,
    Rewrite::InsertDoubleNot,
    Rewrite::RemoveDoubleNot,
];

struct Obfuscator {
    defs: Vec<GateDef>,
    taken: HashSet<String>,
    counter: usize,
}

impl Obfuscator {
    fn fresh(&mut self) -> String {
        loop {
            let name = format!("ob{}", self.counter);
            self.counter += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }

    fn drivers(&self) -> HashMap<&str, usize> {
        self.defs.iter().enumerate().map(|(i, d)| (d.out.as_str(), i)).collect()
    }

    fn fanout(&self, name: &str) -> usize {
        self.defs.iter().flat_map(|d| &d.inputs).filter(|x| *x == name).count()
    }

    fn is_io(name: &str) -> bool {
        name.len() > 1
            && matches!(name.as_bytes()[0], b'a' | b'b' | b'z')
            && name[1..].bytes().all(|c| c.is_ascii_digit())
    }

    /// Applies `rw` to gate `gi` if it fits; returns whether anything changed.
    fn apply(&mut self, rw: Rewrite, gi: usize, rng: &mut ChaCha8Rng) -> bool {
        let g = self.defs[gi].clone();
        match rw {
            Rewrite::XorToNotXnor | Rewrite::AndToNotNand => {
                let (from, to) = if rw == Rewrite::XorToNotXnor {
                    (GateKind::Xor, GateKind::Xnor)
                } else {
                    (GateKind::And, GateKind::Nand)
                };
                if g.kind != from {
                    return false;
                }
                let t = self.fresh();
                self.defs[gi] = GateDef { out: t.clone(), kind: to, ..g.clone() };
                self.defs.push(GateDef::new(g.out, GateKind::Not, &[&t]));
                true
            }
            Rewrite::DeMorgan => {
                let to = match g.kind {
                    GateKind::And => GateKind::Nor,
                    GateKind::Or => GateKind::Nand,
                    GateKind::Nand => GateKind::Or,
                    GateKind::Nor => GateKind::And,
                    _ => return false,
                };
                let mut inputs = Vec::with_capacity(g.inputs.len());
                for x in &g.inputs {
                    let n = self.fresh();
                    self.defs.push(GateDef::new(n.clone(), GateKind::Not, &[x]));
                    inputs.push(n);
                }
                self.defs[gi] = GateDef { kind: to, inputs, ..g };
                true
            }
            Rewrite::XnorToXorNot => {
                if g.kind != GateKind::Xnor {
                    return false;
                }
                let n = self.fresh();
                self.defs.push(GateDef::new(n.clone(), GateKind::Not, &[&g.inputs[0]]));
                let mut inputs = g.inputs.clone();
                inputs[0] = n;
                self.defs[gi] = GateDef { kind: GateKind::Xor, inputs, ..g };
                true
            }
            Rewrite::Reassociate => {
                // out = XOR(t, y), t = XOR(p, q) used once  =>  out = XOR(p, XOR(q, y))
                if g.kind != GateKind::Xor || g.inputs.len() != 2 {
                    return false;
                }
                let drivers = self.drivers();
                let side = (0..2).find(|&s| {
                    let t = &g.inputs[s];
                    !Self::is_io(t)
                        && drivers.get(t.as_str()).is_some_and(|&ti| {
                            self.defs[ti].kind == GateKind::Xor && self.defs[ti].inputs.len() == 2
                        })
                        && self.fanout(t) == 1
                });
                let Some(s) = side else { return false };
                let ti = drivers[g.inputs[s].as_str()];
                let inner = self.defs[ti].clone();
                let y = g.inputs[1 - s].clone();
                let (p, q) = (inner.inputs[0].clone(), inner.inputs[1].clone());
                self.defs[ti] = GateDef::new(inner.out.clone(), GateKind::Xor, &[&q, &y]);
                self.defs[gi] = GateDef::new(g.out, GateKind::Xor, &[&p, &inner.out]);
                true
            }
            Rewrite::InsertDoubleNot => {
                if g.inputs.is_empty() {
                    return false;
                }
                let pos = rng.random_range(0..g.inputs.len());
                let (n1, n2) = (self.fresh(), self.fresh());
                self.defs.push(GateDef::new(n1.clone(), GateKind::Not, &[&g.inputs[pos]]));
                self.defs.push(GateDef::new(n2.clone(), GateKind::Not, &[&n1]));
                self.defs[gi].inputs[pos] = n2;
                true
            }
            Rewrite::RemoveDoubleNot => {
                let drivers = self.drivers();
                let not_input = |name: &str| -> Option<String> {
                    let d = &self.defs[*drivers.get(name)?];
                    (d.kind == GateKind::Not).then(|| d.inputs[0].clone())
                };
                let found = g.inputs.iter().enumerate().find_map(|(pos, x)| {
                    let inner = not_input(x)?;
                    let src = not_input(&inner)?;
                    Some((pos, src))
                });
                let Some((pos, src)) = found else { return false };
                self.defs[gi].inputs[pos] = src;
                true
            }
        }
    }

    /// Drops gates that no primary output depends on.
    fn sweep(&mut self) {
        let drivers = self.drivers();
        let mut live = vec![false; self.defs.len()];
        let mut stack: Vec<usize> = self
            .defs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.out.starts_with('z') && Self::is_io(&d.out))
            .map(|(i, _)| i)
            .collect();
        while let Some(g) = stack.pop() {
            if std::mem::replace(&mut live[g], true) {
                continue;
            }
            for x in &self.defs[g].inputs {
                if let Some(&d) = drivers.get(x.as_str()) {
                    stack.push(d);
                }
            }
        }
        let mut it = live.into_iter();
        self.defs.retain(|_| it.next().unwrap());
    }
}

/// Applies `budget` random function-preserving rewrites, seeded by `seed`.
/// A zero budget returns the netlist unchanged.
pub fn obfuscate(n: &Netlist, seed: u64, budget: usize) -> Netlist {
    if budget == 0 {
        return n.clone();
    }
    let defs = n.gate_defs();
    let mut taken: HashSet<String> = HashSet::new();
    for d in &defs {
        taken.insert(d.out.clone());
        taken.extend(d.inputs.iter().cloned());
    }
    let mut ob = Obfuscator {
        defs,
        taken,
        counter: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut applied = 0;
    let mut attempts = 0;
    while applied < budget && attempts < budget * 50 {
        attempts += 1;
        let gi = rng.random_range(0..ob.defs.len());
        let rw = *REWRITES.choose(&mut rng).expect("nonempty");
        if ob.apply(rw, gi, &mut rng) {
            applied += 1;
        }
    }
    ob.sweep();
    Netlist::from_gate_defs(ob.defs).expect("rewrites keep the netlist well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IrrPoly {
        IrrPoly::parse_list(s).unwrap()
    }

    #[test]
    fn reduction_rows_for_both_quartics() {
        let p2 = reduction_matrix(4, &p("4,1,0")).unwrap();
        assert_eq!(p2.rows[4], vec![0, 1]);
        assert_eq!(p2.rows[5], vec![1, 2]);
        assert_eq!(p2.rows[6], vec![2, 3]);
        let p1 = reduction_matrix(4, &p("4,3,0")).unwrap();
        assert_eq!(p1.rows[4], vec![0, 3]);
        assert_eq!(p1.rows[5], vec![0, 1, 3]);
        assert_eq!(p1.rows[6], vec![0, 1, 2, 3]);
        assert_eq!(reduction_matrix(2, &p("2,1,0")).unwrap().rows, vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(
            reduction_matrix(5, &p("4,1,0")),
            Err(GenError::WidthMismatch { m: 5, poly: 4 })
        );
    }

    #[test]
    fn reduction_rows_match_dense_remainder() {
        let poly = p("16,5,3,1,0");
        let rm = reduction_matrix(16, &poly).unwrap();
        for (k, row) in rm.rows.iter().enumerate() {
            let r = crate::bitpoly::BitPoly::monomial(k).rem(&poly.to_bitpoly());
            assert_eq!(&r.exponents(), row, "k = {k}");
        }
    }

    #[test]
    fn xor_costs() {
        assert_eq!(xor_cost(&reduction_matrix(4, &p("4,3,0")).unwrap()), 9);
        assert_eq!(xor_cost(&reduction_matrix(4, &p("4,1,0")).unwrap()), 6);
        assert_eq!(xor_cost(&reduction_matrix(2, &p("2,1,0")).unwrap()), 2);
    }

    #[test]
    fn two_bit_generator_shape() {
        for share in [true, false] {
            let n = gen_mastrovito(&p("2,1,0"), GenOptions { share });
            assert_eq!(n.count_kind(GateKind::And), 4);
            assert_eq!(n.count_kind(GateKind::Xor), 3);
            assert_eq!(n.gates().len(), 7);
        }
    }

    #[test]
    fn reduction_stage_costs_match_xor_cost() {
        for s in ["4,3,0", "4,1,0", "8,4,3,1,0", "13,4,3,1,0"] {
            let poly = p(s);
            let cost = xor_cost(&reduction_matrix(poly.m(), &poly).unwrap());
            for share in [true, false] {
                let n = gen_mastrovito(&poly, GenOptions { share });
                let red = n
                    .gates()
                    .iter()
                    .filter(|g| g.kind == GateKind::Xor)
                    .filter(|g| {
                        let name = n.name(g.out);
                        name.starts_with(REDUCTION_PREFIX) || name.starts_with('z')
                    })
                    .count();
                assert_eq!(red, cost, "{s} share={share}");
            }
        }
    }

    #[test]
    fn spec_expressions_for_x4_x_1() {
        let poly = p("4,1,0");
        let spec = spec_expressions(&poly);
        let names = |v: crate::netlist::VarId| crate::netlist::io_name(4, v);
        let s = |k| partial_sum(4, k);
        assert_eq!(spec.bits[0], &s(0) + &s(4));
        assert_eq!(spec.bits[1], &(&s(1) + &s(4)) + &s(5));
        assert_eq!(
            spec.bits[2].render(names),
            "a0*b2 + a1*b1 + a2*b0 + a2*b3 + a3*b2 + a3*b3"
        );
        assert_eq!(spec.bits[3].render(names), "a0*b3 + a1*b2 + a2*b1 + a3*b0 + a3*b3");
    }

    #[test]
    fn obfuscation_is_seeded() {
        let n = gen_mastrovito(&p("4,1,0"), GenOptions::default());
        assert_eq!(obfuscate(&n, 7, 0), n);
        let x = obfuscate(&n, 7, 40);
        assert_eq!(x, obfuscate(&n, 7, 40));
        assert_ne!(x, n);
        assert_ne!(x, obfuscate(&n, 8, 40));
    }
}
