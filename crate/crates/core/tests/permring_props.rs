mod common;

use common::*;
use cosetcodes::permring::{class_concat_rank, stripe_scale};
use cosetcodes::{BitMatrix, GroupElement, Parity, PermSum};
use proptest::prelude::*;
use rand::Rng;

fn sum_from(dim: u32, seed: u64, density: f64) -> PermSum {
    PermSum::from_values(dim, random_subset(&mut rng(seed), dim, density)).unwrap()
}

fn odd_sum(dim: u32, seed: u64) -> PermSum {
    let a = sum_from(dim, seed, 0.5);
    if a.parity() == Parity::Odd {
        a
    } else {
        let v = rng(seed ^ 0xabc).random_range(0..1u64 << dim);
        a.add(&PermSum::gamma(GroupElement::new(dim, v).unwrap())).unwrap()
    }
}

fn elem(dim: u32, v: u64) -> GroupElement {
    GroupElement::new(dim, v & ((1u64 << dim) - 1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(dim in 1u32..=8, s1: u64, s2: u64, s3: u64) {
        let (a, b, c) = (sum_from(dim, s1, 0.3), sum_from(dim, s2, 0.3), sum_from(dim, s3, 0.3));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&PermSum::gamma(GroupElement::zero(dim))).unwrap(), a.clone());
        prop_assert!(a.add(&a).unwrap().is_zero());
    }

    #[test]
    fn translations_compose(dim in 1u32..=8, v: u64, w: u64) {
        let (v, w) = (elem(dim, v), elem(dim, w));
        prop_assert_eq!(
            PermSum::gamma(v).mul(&PermSum::gamma(w)).unwrap(),
            PermSum::gamma(v.add(w).unwrap())
        );
    }

    #[test]
    fn odd_sums_are_involutions_of_full_rank(dim in 1u32..=8, seed: u64) {
        let a = odd_sum(dim, seed);
        prop_assert_eq!(a.mul(&a).unwrap(), PermSum::identity(dim));
        prop_assert!(a.self_inverse_check().unwrap());
        prop_assert_eq!(a.materialize().unwrap().rank().unwrap(), 1usize << dim);
        let b = odd_sum(dim, seed ^ 5);
        prop_assert_eq!(a.mul(&b).unwrap().parity(), Parity::Odd);
    }

    #[test]
    fn even_sums_are_singular(dim in 1u32..=7, seed: u64) {
        let a = sum_from(dim, seed, 0.5);
        prop_assume!(a.parity() == Parity::Even);
        prop_assert!(a.materialize().unwrap().rank().unwrap() < 1usize << dim);
        prop_assert!(a.self_inverse_check().is_err());
        prop_assert!(a.divide(&PermSum::identity(dim)).is_err());
    }

    #[test]
    fn division_undoes_multiplication(dim in 1u32..=8, s1: u64, s2: u64) {
        let b = odd_sum(dim, s1);
        let c = sum_from(dim, s2, 0.4);
        let q = b.divide(&c).unwrap();
        prop_assert_eq!(b.mul(&q).unwrap(), c.clone());
        prop_assert_eq!(q.mul(&b).unwrap(), c.clone());
        prop_assert_eq!(b.divide(&b.mul(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn materialize_is_a_homomorphism(dim in 1u32..=6, s1: u64, s2: u64) {
        let (a, b) = (sum_from(dim, s1, 0.3), sum_from(dim, s2, 0.3));
        let (ma, mb) = (a.materialize().unwrap(), b.materialize().unwrap());
        prop_assert_eq!(to_dense(&ma), translation_sum(dim, a.support()));
        prop_assert_eq!(a.add(&b).unwrap().materialize().unwrap(), ma.add(&mb).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().materialize().unwrap(), ma.mat_mul(&mb).unwrap());
    }

    #[test]
    fn shifting_keeps_rank(dim in 1u32..=8, seed: u64, u: u64) {
        let a = sum_from(dim, seed, 0.3);
        let u = elem(dim, u);
        let shifted = a.mul(&PermSum::gamma(u)).unwrap();
        prop_assert_eq!(shifted.clone(), a.shift(u).unwrap());
        prop_assert_eq!(
            shifted.materialize().unwrap().rank().unwrap(),
            a.materialize().unwrap().rank().unwrap()
        );
    }

    #[test]
    fn stripe_scaling_keeps_row_space(dim in 1u32..=6, stripes in 1usize..=4, seed: u64) {
        let blocks: Vec<PermSum> = (0..stripes).map(|i| sum_from(dim, seed ^ i as u64, 0.4)).collect();
        let b = odd_sum(dim, seed ^ 99);
        let scaled = stripe_scale(&blocks, &b).unwrap();
        let stack = |bs: &[PermSum]| {
            BitMatrix::hstack(&bs.iter().map(|x| x.materialize().unwrap()).collect::<Vec<_>>()).unwrap()
        };
        let (lhs, rhs) = (stack(&blocks), stack(&scaled));
        prop_assert!(lhs.row_space_equal(&rhs).unwrap());
        if dim <= 3 {
            prop_assert_eq!(row_span(&lhs), row_span(&rhs));
        }
        prop_assert!(stripe_scale(&blocks, &PermSum::zero(dim)).is_err());
    }

    #[test]
    fn shifted_concatenation_keeps_rank(dim in 1u32..=7, seed: u64, shifts in proptest::collection::vec(any::<u64>(), 1..5)) {
        let a = sum_from(dim, seed, 0.3);
        let shifts: Vec<GroupElement> = shifts.into_iter().map(|u| elem(dim, u)).collect();
        prop_assert_eq!(
            class_concat_rank(&a, &shifts).unwrap(),
            naive_rank(&translation_sum(dim, a.support()))
        );
    }
}

#[test]
fn translation_products_exhaustive_to_order_four() {
    for dim in 1..=4u32 {
        let n = 1u64 << dim;
        for v in 0..n {
            for w in 0..n {
                let gv = PermSum::gamma(elem(dim, v)).materialize().unwrap();
                let gw = PermSum::gamma(elem(dim, w)).materialize().unwrap();
                let expected = from_dense(&translation_sum(dim, &[v ^ w]), 1 << dim);
                assert_eq!(gv.mat_mul(&gw).unwrap(), expected, "dim {dim}, v {v}, w {w}");
            }
        }
    }
}

#[test]
fn translation_matrices() {
    assert_eq!(PermSum::gamma(GroupElement::zero(3)).materialize().unwrap(), BitMatrix::identity(8));
    let anti2 = BitMatrix::from_strs(&["01", "10"]).unwrap();
    assert_eq!(PermSum::gamma(elem(1, 1)).materialize().unwrap(), anti2);
    let anti4 = BitMatrix::from_strs(&["0001", "0010", "0100", "1000"]).unwrap();
    assert_eq!(PermSum::gamma(elem(2, 0b11)).materialize().unwrap(), anti4);
}
