// SPDX-License-Identifier: Apache-2.0

//! Dense univariate polynomials over GF(2), one bit per coefficient.

use std::fmt;

/// Coefficient `i` is bit `i % 64` of word `i / 64`. No trailing zero words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitPoly {
    words: Vec<u64>,
}

impl BitPoly {
    pub fn zero() -> BitPoly {
        BitPoly::default()
    }

    pub fn one() -> BitPoly {
        BitPoly::monomial(0)
    }

    /// `x^k`
    pub fn monomial(k: usize) -> BitPoly {
        let mut p = BitPoly::zero();
        p.flip(k);
        p
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = usize>) -> BitPoly {
        let mut p = BitPoly::zero();
        for e in exps {
            p.flip(e);
        }
        p
    }

    /// LSB-first coefficient vector.
    pub fn from_bits(bits: &[bool]) -> BitPoly {
        BitPoly::from_exponents(bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    pub fn from_u64(x: u64) -> BitPoly {
        let mut p = BitPoly { words: vec![x] };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.trim();
    }

    /// Coefficients `0..n`, LSB first.
    pub fn to_bits(&self, n: usize) -> Vec<bool> {
        (0..n).map(|i| self.bit(i)).collect()
    }

    pub fn exponents(&self) -> Vec<usize> {
        let Some(d) = self.degree() else { return Vec::new() };
        (0..=d).filter(|&i| self.bit(i)).collect()
    }

    pub fn add(&self, other: &BitPoly) -> BitPoly {
        let n = self.words.len().max(other.words.len());
        let mut words = vec![0u64; n];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = BitPoly { words };
        p.trim();
        p
    }

    fn xor_shifted(&mut self, other: &BitPoly, shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.trim();
    }

    /// Carry-less product.
    pub fn mul(&self, other: &BitPoly) -> BitPoly {
        let mut out = BitPoly::zero();
        let Some(d) = other.degree() else { return out };
        for i in 0..=d {
            if other.bit(i) {
                out.xor_shifted(self, i);
            }
        }
        out
    }

    /// Remainder of division by `modulus` (nonzero).
    pub fn rem(&self, modulus: &BitPoly) -> BitPoly {
        let dm = modulus.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            r.xor_shifted(modulus, dr - dm);
        }
        r
    }

    pub fn mulmod(&self, other: &BitPoly, modulus: &BitPoly) -> BitPoly {
        self.mul(other).rem(modulus)
    }

    pub fn gcd(&self, other: &BitPoly) -> BitPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

impl fmt::Debug for BitPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.exponents();
        if e.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = e.iter().rev().map(|k| format!("x^{k}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Carry-less product of two words reduced modulo `modulus` of degree `m < 32`.
pub fn gf_mul_u64(a: u64, b: u64, modulus: u64, m: usize) -> u64 {
    let mut prod = 0u64;
    for i in 0..m {
        if b >> i & 1 == 1 {
            prod ^= a << i;
        }
    }
    for k in (m..2 * m).rev() {
        if prod >> k & 1 == 1 {
            prod ^= modulus << (k - m);
        }
    }
    prod
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_rem() {
        // (x + 1)^2 = x^2 + 1
        let x1 = BitPoly::from_exponents([1, 0]);
        assert_eq!(x1.mul(&x1), BitPoly::from_exponents([2, 0]));
        // x^4 mod (x^4 + x + 1) = x + 1
        let p = BitPoly::from_exponents([4, 1, 0]);
        assert_eq!(BitPoly::monomial(4).rem(&p), x1);
        let big = BitPoly::from_exponents([200, 130, 64, 63, 1]);
        assert_eq!(big.degree(), Some(200));
        assert_eq!(big.mul(&BitPoly::one()), big);
        let q = BitPoly::from_exponents([70, 3]);
        assert_eq!(big.mul(&q).rem(&q), BitPoly::zero());
        assert_eq!(big.mul(&q).rem(&big), BitPoly::zero());
    }

    #[test]
    fn gcd_finds_common_factor() {
        let f = BitPoly::from_exponents([2, 1, 0]);
        let g = BitPoly::from_exponents([3, 1, 0]);
        let h = BitPoly::from_exponents([1, 0]);
        assert_eq!(f.mul(&h).gcd(&g.mul(&h)), h);
        assert_eq!(f.gcd(&g), BitPoly::one());
    }

    #[test]
    fn word_multiplier_agrees_with_dense() {
        let p = BitPoly::from_exponents([8, 4, 3, 1, 0]);
        for a in (0..256u64).step_by(7) {
            for b in (0..256u64).step_by(5) {
                let dense = BitPoly::from_u64(a).mulmod(&BitPoly::from_u64(b), &p);
                assert_eq!(BitPoly::from_u64(gf_mul_u64(a, b, 0x11b, 8)), dense);
            }
        }
        // AES: 0x57 * 0x83 = 0xc1
        assert_eq!(gf_mul_u64(0x57, 0x83, 0x11b, 8), 0xc1);
    }
}
