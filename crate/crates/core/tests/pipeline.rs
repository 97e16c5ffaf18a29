// SPDX-License-Identifier: Apache-2.0

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{candidate_mutations, corpus, mutate, poly};
use gfextract::bitpoly::BitPoly;
use gfextract::extractor::{extract_irreducible, out_field_set};
use gfextract::generator::{gen_mastrovito, obfuscate, reduction_matrix, spec_expressions, GenOptions};
use gfextract::netlist::{Netlist, VarId};
use gfextract::rewriter::{rewrite_all, rewrite_bit, RewriteReport};
use gfextract::verify::{exhaustive_check, random_check, symbolic_check, Status};

/// Checks every bit expression against simulation on the given operand words.
fn expressions_match_simulation(n: &Netlist, r: &RewriteReport, a: &[u64], b: &[u64]) {
    let m = n.m();
    let sim = n.simulate_words(a, b);
    let val = |v: VarId| {
        let i = v.index();
        if i < m {
            a[i]
        } else {
            b[i - m]
        }
    };
    for (i, bit) in r.bits.iter().enumerate() {
        assert_eq!(bit.expr.evaluate_words(val), sim[i], "bit {i}");
    }
}

#[test]
fn rewriting_matches_simulation_exhaustively_up_to_m6() {
    for p in corpus(2, 6) {
        let m = p.m();
        let n = obfuscate(&gen_mastrovito(&p, GenOptions::default()), m as u64, 30);
        let r = rewrite_all(&n, 2).unwrap();
        let total = 1u64 << (2 * m);
        let mut x = 0;
        while x < total {
            let mut a = vec![0u64; m];
            let mut b = vec![0u64; m];
            for l in 0..64.min(total - x) {
                let v = x + l;
                for i in 0..m {
                    a[i] |= (v >> i & 1) << l;
                    b[i] |= (v >> (m + i) & 1) << l;
                }
            }
            expressions_match_simulation(&n, &r, &a, &b);
            x += 64;
        }
    }
}

#[test]
fn rewriting_matches_simulation_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in ["8,4,3,1,0", "11,2,0", "16,5,3,1,0", "23,5,0"] {
        let p = poly(s);
        let n = obfuscate(&gen_mastrovito(&p, GenOptions { share: false }), 11, 100);
        let r = rewrite_all(&n, 3).unwrap();
        // 160 words: 10240 vectors
        for _ in 0..160 {
            let a: Vec<u64> = (0..p.m()).map(|_| rng.random()).collect();
            let b: Vec<u64> = (0..p.m()).map(|_| rng.random()).collect();
            expressions_match_simulation(&n, &r, &a, &b);
        }
    }
}

#[test]
fn step_count_equals_cone_size() {
    let n = gen_mastrovito(&poly("8,4,3,1,0"), GenOptions::default());
    let r = rewrite_all(&n, 2).unwrap();
    for (i, bit) in r.bits.iter().enumerate() {
        assert_eq!(bit.stats.steps, n.cone_of(i).gates.len());
        assert_eq!(rewrite_bit(&n, i).unwrap().expr, bit.expr);
    }
}

#[test]
fn generated_expressions_match_golden() {
    let p = poly("8,4,3,1,0");
    for share in [true, false] {
        let r = rewrite_all(&gen_mastrovito(&p, GenOptions { share }), 4).unwrap();
        let golden = spec_expressions(&p);
        for (i, bit) in r.bits.iter().enumerate() {
            assert_eq!(bit.expr, golden.bits[i], "bit {i}");
        }
    }
}

#[test]
fn simulation_matches_bitpoly_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in ["8,4,3,1,0", "13,4,3,1,0", "32,7,3,2,0"] {
        let p = poly(s);
        let m = p.m();
        let n = gen_mastrovito(&p, GenOptions::default());
        let modulus = p.to_bitpoly();
        for _ in 0..200 {
            let a: Vec<bool> = (0..m).map(|_| rng.random()).collect();
            let b: Vec<bool> = (0..m).map(|_| rng.random()).collect();
            let want = BitPoly::from_bits(&a).mulmod(&BitPoly::from_bits(&b), &modulus).to_bits(m);
            assert_eq!(n.simulate(&a, &b), want);
        }
    }
}

#[test]
fn golden_bits_contain_out_field_set_iff_row_m() {
    for p in corpus(2, 12) {
        let m = p.m();
        let rows = reduction_matrix(m, &p).unwrap().rows;
        let set = out_field_set(m).unwrap();
        let spec = spec_expressions(&p);
        for (k, row) in rows.iter().enumerate().take(m) {
            assert_eq!(row, &vec![k]);
        }
        for (i, e) in spec.bits.iter().enumerate() {
            assert!(!e.is_zero());
            let full = set.products.iter().all(|t| e.contains(t));
            assert_eq!(full, rows[m].contains(&i), "{p} bit {i}");
        }
    }
}

#[test]
fn out_field_products_index_sums() {
    let set = out_field_set(8).unwrap();
    assert_eq!(set.products.len(), 7);
    for t in &set.products {
        let [x, y] = t.vars() else { panic!("degree 2 expected") };
        assert_eq!(x.index() + (y.index() - 8), 8);
        assert!(x.index() < 8 && y.index() >= 8);
    }
}

#[test]
fn membership_flags_are_recomputable() {
    let p = poly("16,5,3,1,0");
    let r = rewrite_all(&gen_mastrovito(&p, GenOptions::default()), 2).unwrap();
    let e = extract_irreducible(&r).unwrap();
    let set = out_field_set(16).unwrap();
    for (i, bit) in r.bits.iter().enumerate() {
        let hits = set.products.iter().filter(|t| bit.expr.contains(t)).count();
        assert_eq!(e.hits[i], hits);
        assert_eq!(e.membership[i], hits == 15);
        assert_eq!(e.recovered.contains(i), e.membership[i]);
    }
    assert_eq!(e.membership.len(), 16);
}

#[test]
fn extraction_from_the_other_quartic() {
    let p = poly("4,3,0");
    let r = rewrite_all(&gen_mastrovito(&p, GenOptions::default()), 1).unwrap();
    assert_eq!(extract_irreducible(&r).unwrap().recovered.exponents(), vec![4, 3, 0]);
}

#[test]
fn obfuscation_does_not_change_extraction() {
    for s in ["4,1,0", "8,4,3,1,0", "16,5,3,1,0"] {
        let p = poly(s);
        let plain = rewrite_all(&gen_mastrovito(&p, GenOptions::default()), 1).unwrap();
        let reference = extract_irreducible(&plain).unwrap();
        for seed in 0..20 {
            let n = obfuscate(&gen_mastrovito(&p, GenOptions::default()), seed, 200);
            let r = rewrite_all(&n, 2).unwrap();
            assert!(r.expressions().eq(plain.expressions()), "{s} seed {seed}");
            assert_eq!(extract_irreducible(&r).unwrap(), reference);
        }
    }
}

#[test]
fn oracles_agree_on_small_corpus() {
    for p in corpus(2, 8) {
        let n = gen_mastrovito(&p, GenOptions::default());
        let ex = exhaustive_check(&n, &p, false, 2).unwrap();
        let sy = symbolic_check(&rewrite_all(&n, 2).unwrap(), &p).unwrap();
        assert_eq!(ex.status, Status::Equivalent, "{p}");
        assert_eq!(sy.status, ex.status, "{p}");
    }
}

#[test]
fn mismatch_witness_resimulates() {
    let n = gen_mastrovito(&poly("8,4,3,1,0"), GenOptions::default());
    let wrong = poly("8,4,3,2,0");
    for v in [
        exhaustive_check(&n, &wrong, false, 2).unwrap(),
        random_check(&n, &wrong, 1000, 5).unwrap(),
    ] {
        assert_eq!(v.status, Status::Mismatch);
        let w = v.witness.unwrap();
        assert_eq!(n.simulate(&w.a, &w.b), w.actual);
        assert_ne!(w.actual, w.expected);
    }
}

#[test]
fn injected_faults_are_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa17);
    let mut detected = 0;
    for (s, seed) in [
        ("4,1,0", None),
        ("4,3,0", Some(1)),
        ("4,3,2,1,0", Some(2)),
        ("8,4,3,1,0", None),
        ("8,5,3,1,0", Some(3)),
    ] {
        let p = poly(s);
        let mut n = gen_mastrovito(&p, GenOptions::default());
        if let Some(seed) = seed {
            n = obfuscate(&n, seed, n.gates().len());
        }
        let mut cands = candidate_mutations(&n);
        for _ in 0..cands.len().min(40) {
            let (idx, mutation) = cands.swap_remove(rng.random_range(0..cands.len()));
            let bad = mutate(&n, idx, mutation);
            let sim = exhaustive_check(&bad, &p, false, 1).unwrap();
            let sym = symbolic_check(&rewrite_all(&bad, 1).unwrap(), &p).unwrap();
            assert_eq!(sim.status, Status::Mismatch, "{s} gate {idx} {mutation:?}");
            assert_eq!(sym.status, Status::Mismatch, "{s} gate {idx} {mutation:?}");
            detected += 1;
        }
    }
    assert!(detected >= 100);
}

#[test]
fn isolated_bits_equal_batch() {
    let p = poly("12,3,0");
    let n = gen_mastrovito(&p, GenOptions::default());
    let batch = rewrite_all(&n, 3).unwrap();
    for i in 0..12 {
        assert_eq!(rewrite_bit(&n, i).unwrap().expr, batch.bits[i].expr);
    }
}

#[test]
fn desk_scale_round_trip_m233() {
    let p = poly("233,74,0");
    let n = gen_mastrovito(&p, GenOptions::default());
    let r = rewrite_all(&n, common::max_threads()).unwrap();
    assert_eq!(extract_irreducible(&r).unwrap().recovered, p);
    assert_eq!(symbolic_check(&r, &p).unwrap().status, Status::Equivalent);
}
