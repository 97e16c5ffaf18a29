// SPDX-License-Identifier: Apache-2.0

//! Square-free polynomials over GF(2) in Boolean variables.
//!
//! Coefficients are never stored: a monomial is either present (coefficient 1)
//! or absent. Addition is symmetric difference and `x * x = x`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul};
use std::sync::Arc;

use thiserror::Error;

use crate::netlist::{GateKind, VarId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable {0:?} has no value in the assignment")]
    Unassigned(VarId),
    #[error("{kind} cannot take {got} inputs")]
    Arity { kind: GateKind, got: usize },
}

/// Product of distinct variables; the empty product is the constant 1.
#[derive(Clone)]
pub struct Monomial {
    vars: Arc<[VarId]>,
    hash: u64,
}

impl Monomial {
    fn from_sorted(vars: Vec<VarId>) -> Monomial {
        let mut h = DefaultHasher::new();
        vars.hash(&mut h);
        Monomial {
            vars: vars.into(),
            hash: h.finish(),
        }
    }

    pub fn one() -> Monomial {
        Monomial::from_sorted(Vec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial::from_sorted(vec![v])
    }

    pub fn from_vars(vars: impl IntoIterator<Item = VarId>) -> Monomial {
        let mut v: Vec<VarId> = vars.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Monomial::from_sorted(v)
    }

    /// Variables in ascending id order.
    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    pub fn without(&self, v: VarId) -> Monomial {
        Monomial::from_sorted(self.vars.iter().copied().filter(|&x| x != v).collect())
    }

    /// Square-free product: the sorted union of both variable sets.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.vars, &other.vars);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial::from_sorted(out)
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.vars == other.vars
    }
}

impl Eq for Monomial {}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vars.cmp(&other.vars)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.vars.iter().map(|v| format!("v{}", v.0)).collect();
        f.write_str(&parts.join("*"))
    }
}

/// A polynomial over GF(2): a set of monomials, empty set is zero.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: HashSet<Monomial>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn one() -> Poly2 {
        Poly2::from_monomials([Monomial::one()])
    }

    pub fn var(v: VarId) -> Poly2 {
        Poly2::from_monomials([Monomial::var(v)])
    }

    /// Sums the monomials mod 2, so repeated monomials cancel in pairs.
    pub fn from_monomials(monos: impl IntoIterator<Item = Monomial>) -> Poly2 {
        let mut p = Poly2::zero();
        for m in monos {
            p.toggle(m);
        }
        p
    }

    /// Adds one monomial mod 2.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    /// Monomials in ascending variable-id order.
    pub fn sorted(&self) -> Vec<&Monomial> {
        let mut v: Vec<&Monomial> = self.terms.iter().collect();
        v.sort();
        v
    }

    /// All variables occurring in the polynomial, ascending.
    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self
            .terms
            .iter()
            .flat_map(|m| m.vars().iter().copied())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        v.sort_unstable();
        v
    }

    pub fn add_assign(&mut self, other: &Poly2) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    /// Replaces every occurrence of `v` with `g`. `g` must not mention `v`.
    pub fn substitute(&self, v: VarId, g: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for m in &self.terms {
            if m.contains(v) {
                let rest = m.without(v);
                for gm in &g.terms {
                    out.toggle(rest.mul(gm));
                }
            } else {
                out.toggle(m.clone());
            }
        }
        out
    }

    /// XOR over monomials of the AND of their variables.
    pub fn evaluate(&self, assign: impl Fn(VarId) -> Option<bool>) -> Result<bool, PolyError> {
        let mut acc = false;
        for m in &self.terms {
            let mut prod = true;
            for &v in m.vars() {
                prod &= assign(v).ok_or(PolyError::Unassigned(v))?;
            }
            acc ^= prod;
        }
        Ok(acc)
    }

    /// Evaluates 64 assignments at once; lane `l` of `val(v)` is `v` in assignment `l`.
    pub fn evaluate_words(&self, val: impl Fn(VarId) -> u64) -> u64 {
        self.terms.iter().fold(0, |acc, m| {
            acc ^ m.vars().iter().fold(!0u64, |p, &v| p & val(v))
        })
    }

    /// Canonical text: variables and monomials sorted by name, `*` within a
    /// monomial and ` + ` between monomials.
    pub fn render(&self, name: impl Fn(VarId) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut monos: Vec<Vec<String>> = self
            .terms
            .iter()
            .map(|m| {
                let mut names: Vec<String> = m.vars().iter().map(|&v| name(v)).collect();
                names.sort();
                names
            })
            .collect();
        monos.sort();
        monos
            .iter()
            .map(|n| if n.is_empty() { "1".to_string() } else { n.join("*") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.sorted().iter().map(|m| format!("{m:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        out.add_assign(small);
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for x in &self.terms {
            for y in &rhs.terms {
                out.toggle(x.mul(y));
            }
        }
        out
    }
}

/// Polynomial model of a gate applied to its input polynomials.
/// n-ary gates fold left: `XNOR(a, b, c) = 1 + (a + b + c)`.
pub fn gate_to_poly(kind: GateKind, ins: &[Poly2]) -> Result<Poly2, PolyError> {
    if !kind.accepts_arity(ins.len()) {
        return Err(PolyError::Arity {
            kind,
            got: ins.len(),
        });
    }
    let and = |p: &Poly2, q: &Poly2| p * q;
    let or = |p: &Poly2, q: &Poly2| &(p + q) + &(p * q);
    let xor = |p: &Poly2, q: &Poly2| p + q;
    let fold = |f: &dyn Fn(&Poly2, &Poly2) -> Poly2| {
        ins[1..].iter().fold(ins[0].clone(), |acc, x| f(&acc, x))
    };
    let not = |p: Poly2| &p + &Poly2::one();
    Ok(match kind {
        GateKind::Not => not(ins[0].clone()),
        GateKind::Buf => ins[0].clone(),
        GateKind::And => fold(&and),
        GateKind::Or => fold(&or),
        GateKind::Xor => fold(&xor),
        GateKind::Nand => not(fold(&and)),
        GateKind::Nor => not(fold(&or)),
        GateKind::Xnor => not(fold(&xor)),
        GateKind::Const0 => Poly2::zero(),
        GateKind::Const1 => Poly2::one(),
    })
}

/// A polynomial under repeated substitution, with an occurrence index from
/// each substitutable variable to the monomials that mention it.
///
/// Variables below `first_tracked` are never indexed and must not be
/// substituted. Index entries go stale when monomials cancel; they are
/// checked against the term set when consumed.
pub struct IndexedPoly {
    terms: HashSet<Monomial>,
    occurrences: HashMap<VarId, Vec<Monomial>>,
    first_tracked: VarId,
}

impl IndexedPoly {
    pub fn new(p: Poly2, first_tracked: VarId) -> IndexedPoly {
        let mut ip = IndexedPoly {
            terms: HashSet::with_capacity(p.len()),
            occurrences: HashMap::new(),
            first_tracked,
        };
        for m in p.terms {
            ip.toggle(m);
        }
        ip
    }

    fn toggle(&mut self, m: Monomial) {
        if self.terms.remove(&m) {
            return;
        }
        for &v in m.vars().iter().rev() {
            if v < self.first_tracked {
                break;
            }
            self.occurrences.entry(v).or_default().push(m.clone());
        }
        self.terms.insert(m);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same result as [`Poly2::substitute`], touching only monomials with `v`.
    pub fn substitute(&mut self, v: VarId, g: &Poly2) {
        debug_assert!(v >= self.first_tracked);
        let Some(list) = self.occurrences.remove(&v) else {
            return;
        };
        let hits: Vec<Monomial> = list.into_iter().filter(|m| self.terms.remove(m)).collect();
        for m in hits {
            let rest = m.without(v);
            for gm in &g.terms {
                self.toggle(rest.mul(gm));
            }
        }
    }

    pub fn into_poly(self) -> Poly2 {
        Poly2 { terms: self.terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Poly2 {
        Poly2::var(VarId(i))
    }

    fn mono(ids: &[u32]) -> Monomial {
        Monomial::from_vars(ids.iter().map(|&i| VarId(i)))
    }

    fn poly(monos: &[&[u32]]) -> Poly2 {
        Poly2::from_monomials(monos.iter().map(|m| mono(m)))
    }

    /// Truth table of `p` over variables `0..n`, computed by direct evaluation.
    fn table(p: &Poly2, n: u32) -> Vec<bool> {
        (0..1u32 << n)
            .map(|x| p.evaluate(|v| Some(x >> v.0 & 1 == 1)).unwrap())
            .collect()
    }

    #[test]
    fn add_cancels_mod_two() {
        // (a0b0 + a1b1) + a1b1 with a0=0, a1=1, b0=2, b1=3
        let p = poly(&[&[0, 2], &[1, 3]]);
        let q = poly(&[&[1, 3]]);
        assert_eq!(&p + &q, poly(&[&[0, 2]]));
        assert_eq!(&p + &Poly2::zero(), p);
        // (s1 + s4 + s5) + (s0 + s4) = s0 + s1 + s5
        let lhs = &poly(&[&[1], &[4], &[5]]) + &poly(&[&[0], &[4]]);
        assert_eq!(lhs, poly(&[&[0], &[1], &[5]]));
    }

    #[test]
    fn mul_is_square_free() {
        assert_eq!(&(&v(0) + &v(1)) * &v(2), poly(&[&[0, 2], &[1, 2]]));
        assert_eq!(&v(0) * &v(0), v(0));
        let one_a = &Poly2::one() + &v(0);
        assert_eq!(&one_a * &one_a, one_a);
    }

    #[test]
    fn gate_models() {
        let (a, b) = (v(0), v(1));
        assert_eq!(gate_to_poly(GateKind::Xor, &[a.clone(), b.clone()]).unwrap(), &a + &b);
        let nc = gate_to_poly(GateKind::Not, &[gate_to_poly(GateKind::Const0, &[]).unwrap()]);
        assert_eq!(nc.unwrap(), Poly2::one());
        let bc = gate_to_poly(GateKind::And, &[v(1), v(2)]).unwrap();
        let or = gate_to_poly(GateKind::Or, &[v(0), bc]).unwrap();
        assert_eq!(or, poly(&[&[0], &[1, 2], &[0, 1, 2]]));
        // truth table of a | (b & c)
        let expect: Vec<bool> = (0..8u32).map(|x| x & 1 == 1 || (x >> 1 & 1 == 1 && x >> 2 & 1 == 1)).collect();
        assert_eq!(table(&or, 3), expect);
        assert!(matches!(
            gate_to_poly(GateKind::Not, &[a.clone(), b.clone()]),
            Err(PolyError::Arity { got: 2, .. })
        ));
    }

    #[test]
    fn every_gate_kind_matches_its_truth_table() {
        for kind in GateKind::ALL {
            let arities: &[usize] = match kind {
                GateKind::Not | GateKind::Buf => &[1],
                GateKind::Const0 | GateKind::Const1 => &[0],
                _ => &[2, 3],
            };
            for &n in arities {
                let ins: Vec<Poly2> = (0..n as u32).map(v).collect();
                let p = gate_to_poly(kind, &ins).unwrap();
                for x in 0..1u64 << n {
                    let words: Vec<u64> = (0..n).map(|i| if x >> i & 1 == 1 { !0 } else { 0 }).collect();
                    let want = kind.eval_word(&words) & 1 == 1;
                    let got = p.evaluate(|v| Some(x >> v.0 & 1 == 1)).unwrap();
                    assert_eq!(got, want, "{kind} arity {n} input {x:b}");
                }
            }
        }
    }

    #[test]
    fn substitute_expands() {
        // f = s1 + s4 with s1 <- a1b0 + a0b1; ids: a0=0 a1=1 b0=2 b1=3 s1=10 s4=11
        let f = poly(&[&[10], &[11]]);
        let g = poly(&[&[1, 2], &[0, 3]]);
        let r = f.substitute(VarId(10), &g);
        assert_eq!(r, poly(&[&[1, 2], &[0, 3], &[11]]));
        for x in 0..1u32 << 5 {
            let bit = |i: u32| x >> i & 1 == 1;
            let assign = |v: VarId| match v.0 {
                0..=3 => Some(bit(v.0)),
                11 => Some(bit(4)),
                _ => None,
            };
            let s1 = g.evaluate(assign).unwrap();
            let lhs = f.evaluate(|v| if v.0 == 10 { Some(s1) } else { assign(v) }).unwrap();
            assert_eq!(lhs, r.evaluate(assign).unwrap());
        }
        assert_eq!(f.substitute(VarId(99), &g), f);
    }

    #[test]
    fn substitute_cancels_constants() {
        // 1 + a0b1 + p0 + s2 + 1 -> a0b1 + p0 + s2
        let p = Poly2::from_monomials([mono(&[]), mono(&[0, 3]), mono(&[7]), mono(&[8]), mono(&[])]);
        assert_eq!(p, poly(&[&[0, 3], &[7], &[8]]));
    }

    #[test]
    fn evaluate_examples() {
        let f = poly(&[&[0, 2], &[1, 3]]);
        assert!(!f.evaluate(|_| Some(true)).unwrap());
        assert!(Poly2::one().evaluate(|_| None).unwrap());
        assert!(matches!(f.evaluate(|v| (v.0 < 2).then_some(true)), Err(PolyError::Unassigned(v)) if v.0 >= 2));
    }

    #[test]
    fn render_sorts_by_name() {
        let names = ["a0", "a1", "b0", "b1"];
        let name = |v: VarId| names[v.index()].to_string();
        let z1 = poly(&[&[1, 3], &[1, 2], &[0, 3]]);
        assert_eq!(z1.render(name), "a0*b1 + a1*b0 + a1*b1");
        assert_eq!(Poly2::zero().render(name), "0");
        assert_eq!(Poly2::one().render(name), "1");
        assert_eq!((&Poly2::one() + &v(2)).render(name), "1 + b0");
    }

    #[test]
    fn indexed_substitution_matches_plain() {
        let f = poly(&[&[10, 11], &[10], &[0, 11], &[2]]);
        let g10 = poly(&[&[0, 1], &[11], &[]]);
        let g11 = poly(&[&[1], &[2, 3]]);
        let plain = f.substitute(VarId(10), &g10).substitute(VarId(11), &g11);
        let mut ip = IndexedPoly::new(f, VarId(10));
        ip.substitute(VarId(10), &g10);
        ip.substitute(VarId(11), &g11);
        assert_eq!(ip.into_poly(), plain);
    }
}
