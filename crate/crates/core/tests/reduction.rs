mod common;

use common::*;
use ncdb::freealg::{cyclic_normal_form, reduce_mod_commutators, Element, GenId, Letter, Word};
use ncdb::Q;
use proptest::prelude::*;
use rand::Rng;

fn rotations(w: &[Letter]) -> Vec<Vec<Letter>> {
    (0..w.len().max(1)).map(|k| w[k.min(w.len())..].iter().chain(&w[..k.min(w.len())]).copied().collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduction_is_confluent(codes in prop::collection::vec(0u8..6, 0..24), seed in any::<u64>()) {
        let ls: Vec<Letter> = codes.iter().map(|&c| letter(c)).collect();
        let w = Word::from_letters(ls.iter().copied());
        let naive = naive_reduce(ls.clone());
        prop_assert_eq!(w.letters(), &naive[..]);
        let mut r = rng(seed);
        prop_assert_eq!(random_order_reduce(ls.clone(), &mut r), naive.clone());
        // splitting anywhere and concatenating gives the same word
        let cut = if ls.is_empty() { 0 } else { r.gen_range(0..=ls.len()) };
        let left = Word::from_letters(ls[..cut].iter().copied());
        let right = Word::from_letters(ls[cut..].iter().copied());
        prop_assert_eq!(left.concat(&right), w);
    }

    #[test]
    fn cyclic_normal_form_is_rotation_invariant(codes in prop::collection::vec(0u8..6, 0..12)) {
        let w = Word::from_letters(codes.iter().map(|&c| letter(c)));
        let n = cyclic_normal_form(&w);
        for rot in rotations(w.letters()) {
            let rw = Word::from_letters(rot);
            prop_assert_eq!(cyclic_normal_form(&rw), n.clone());
        }
        // x w x^-1 has the class of w
        let x = letter(codes.first().copied().unwrap_or(0) ^ 2);
        let conj = Word::from_letters([x].into_iter().chain(w.letters().iter().copied()).chain([x.inverse()]));
        prop_assert_eq!(cyclic_normal_form(&conj), n);
    }
}

#[test]
fn commutators_vanish_in_h0() {
    let mut r = rng(3);
    let alg = ncdb::freealg::Algebra::free(3).localized(&[GenId(1)]).unwrap();
    for _ in 0..200 {
        let a = random_word(&mut r, &alg, 4);
        let b = random_word(&mut r, &alg, 4);
        let mut c = Element::word(a.concat(&b));
        c.add_term(b.concat(&a), -Q::one());
        assert!(reduce_mod_commutators(&c).is_zero());
    }
    let mut e = Element::word(Word::gens(&[0, 1]));
    e.add_term(Word::gens(&[1, 1]), Q::one());
    assert!(!reduce_mod_commutators(&e).is_zero());
}
