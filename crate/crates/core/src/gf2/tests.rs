use super::*;
use crate::games::RandomStream;
use crate::games::Seed;
use proptest::prelude::*;
use std::collections::HashSet;

fn rng(label: &str) -> RandomStream {
    RandomStream::derive(Seed(7), label, 0)
}

fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

#[test]
fn hamming_single_errors_have_distinct_nonzero_syndromes() {
    let h = BinaryLinearCode::hamming_7_4();
    let mut seen = HashSet::new();
    for i in 0..7 {
        let e = BitVector::indicator(7, [i]);
        let s = syndrome(&h, &e).unwrap();
        assert!(!s.is_zero());
        assert!(seen.insert(s.to_string()));
    }
    assert_eq!(h.min_distance(), Some(3));
    assert_eq!(h.correctable_weight(), 1);
}

#[test]
fn hamming_corrects_every_single_error_on_every_codeword() {
    let h = BinaryLinearCode::hamming_7_4();
    for c in h.codewords() {
        assert_eq!(decode_to_codeword(&h, &c).unwrap(), c);
        for i in 0..7 {
            let mut w = c.clone();
            w.flip(i);
            assert_eq!(decode_to_codeword(&h, &w).unwrap(), c);
        }
    }
}

#[test]
fn hamming_leaders_have_weight_at_most_one() {
    let h = BinaryLinearCode::hamming_7_4();
    for s in 0..8u64 {
        let leader = coset_leader(&h, &BitVector::from_u64(s, 3)).unwrap();
        assert_eq!(leader.weight(), usize::from(s != 0));
    }
}

#[test]
fn leaders_prefer_lexicographically_first() {
    // repetition(3): syndrome of 110 equals that of 001; weight wins
    let r = BinaryLinearCode::repetition(3);
    let s = r.syndrome(&bv("110")).unwrap();
    assert_eq!(r.coset_leader(&s).unwrap(), bv("001"));
    // repetition(2): 10 and 01 share a syndrome; 01 sorts first
    let r2 = BinaryLinearCode::repetition(2);
    let s2 = r2.syndrome(&bv("01")).unwrap();
    assert_eq!(r2.coset_leader(&s2).unwrap(), bv("01"));
}

#[test]
fn oversized_table_rejected() {
    let big = BinaryLinearCode::repetition(21);
    let s = BitVector::zeros(20);
    assert!(matches!(big.coset_leader(&s), Err(CodeError::TooLarge(21))));
}

#[test]
fn nested_toy_pair_labels_three_bits() {
    let pair = NestedCodePair::toy();
    assert!(verify_nesting(&pair));
    assert_eq!(pair.key_len(), 3);
    let mut labels = HashSet::new();
    let h = pair.c1();
    for c in h.codewords() {
        let k = key_from_coset(&pair, &c).unwrap();
        assert_eq!(k.len(), 3);
        let shifted = &c ^ &BitVector::ones(7);
        assert_eq!(key_from_coset(&pair, &shifted).unwrap(), k);
        labels.insert(k.to_string());
    }
    assert_eq!(labels.len(), 8);
}

#[test]
fn key_from_non_codeword_fails() {
    let pair = NestedCodePair::toy();
    assert!(matches!(
        pair.key_from_coset(&bv("1000000")),
        Err(CodeError::NotACodeword)
    ));
}

#[test]
fn nesting_violations_detected() {
    let h = BinaryLinearCode::hamming_7_4();
    let odd = BinaryLinearCode::from_rows(&["1000000"]).unwrap();
    let bad = NestedCodePair::unchecked(h.clone(), odd.clone()).unwrap();
    assert!(!bad.verify_nesting());
    assert!(NestedCodePair::new(h.clone(), odd).is_err());
    assert!(NestedCodePair::new(h.clone(), h.clone()).is_err());

    let rep = BinaryLinearCode::repetition(7);
    assert!(!DualContainingPair::unchecked(rep.clone(), rep).unwrap().verify_nesting());
    assert!(verify_nesting(&DualContainingPair::toy()));
}

#[test]
fn ue_pair_round_trips_single_payload_bit() {
    let pair = DualContainingPair::toy();
    assert_eq!(pair.payload_len(), 1);
    assert_eq!(pair.syndrome_len(), 3);
    assert_eq!(pair.kernel_dimension(), 3);
    let mut r = rng("ue");
    for y in [bv("0"), bv("1")] {
        for s in 0..8 {
            let syn = BitVector::from_u64(s, 3);
            let z = encode_ue_codeword(&pair, &syn, &y, &mut r).unwrap();
            assert_eq!(pair.c1().syndrome(&z).unwrap(), syn);
            assert_eq!(pair.quotient_checks().mul_vec(&z).unwrap(), y);
            assert_eq!(pair.decode_ue_codeword(&syn, &z).unwrap(), y);
            for i in 0..7 {
                let mut w = z.clone();
                w.flip(i);
                assert_eq!(pair.decode_ue_codeword(&syn, &w).unwrap(), y);
            }
        }
    }
}

#[test]
fn linear_algebra_basics() {
    let g = BinaryLinearCode::hamming_7_4();
    let gen = g.generator();
    assert_eq!(gen.rank(), 4);
    for v in gen.nullspace() {
        assert!(gen.mul_vec(&v).unwrap().is_zero());
    }
    assert_eq!(gen.nullspace().len(), 3);
    assert!(gen.transpose().nullspace().is_empty());
    assert!(gen.spans(&bv("1101001")).unwrap() == g.is_codeword(&bv("1101001")).unwrap());
    let m = BitMatrix::new(vec![bv("11"), bv("11")], 2).unwrap();
    assert!(matches!(m.solve(&bv("10")), Err(CodeError::Inconsistent)));
}

#[test]
fn code_text_round_trip() {
    let h = BinaryLinearCode::hamming_7_4();
    let parsed = BinaryLinearCode::parse(&h.to_text()).unwrap();
    assert_eq!(parsed, h);
    assert!(BinaryLinearCode::parse("3 2\n110\n").is_err());
    assert!(BinaryLinearCode::parse("# comment\n3 1\n111\n").is_ok());
}

#[test]
fn bit_vector_conversions() {
    let v = bv("1011001");
    assert_eq!(v.to_u64(), 0b1011001);
    assert_eq!(BitVector::from_u64(0b1011001, 7), v);
    assert_eq!(BitVector::from_bytes(&v.to_bytes(), 7).unwrap(), v);
    assert_eq!(BitVector::from_hex(&v.to_hex(), 7).unwrap(), v);
    assert_eq!(v.support(), vec![0, 2, 3, 6]);
    assert_eq!(v.chunks(3).len(), 2);
}

proptest! {
    #[test]
    fn syndrome_is_linear(a in 0u64..128, b in 0u64..128) {
        let h = BinaryLinearCode::hamming_7_4();
        let (x, y) = (BitVector::from_u64(a, 7), BitVector::from_u64(b, 7));
        let lhs = h.syndrome(&(&x ^ &y)).unwrap();
        let rhs = &h.syndrome(&x).unwrap() ^ &h.syndrome(&y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sampled_codewords_are_codewords(seed in any::<u64>()) {
        let h = BinaryLinearCode::hamming_7_4();
        let mut r = RandomStream::derive(Seed(seed as u128), "cw", 0);
        prop_assert!(h.is_codeword(&sample_codeword(&h, &mut r)).unwrap());
    }

    #[test]
    fn solve_finds_preimage(rows in proptest::collection::vec(0u64..64, 1..6), x in 0u64..64) {
        let m = BitMatrix::new(rows.iter().map(|&r| BitVector::from_u64(r, 6)).collect(), 6).unwrap();
        let b = m.mul_vec(&BitVector::from_u64(x, 6)).unwrap();
        let sol = m.solve(&b).unwrap();
        prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
    }
}
