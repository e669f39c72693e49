mod common;

use common::{corpus, relabeled};
use mdshift::dynamics::{count_tables_dp, count_tables_naive, neutral_zeta_product};
use mdshift::families::{
    build_family_i, build_family_ii, classify, CanonicalParams, FamilyIIParams, FamilyIParams,
};
use mdshift::graph::{contracting_forest, DirectedMultigraph};
use mdshift::invariants::{compare, fingerprint, Verdict};
use mdshift::semigroup::{
    classify_powers, invert, multiply, reduce, Element, Letter, PowerClass, Word,
};
use mdshift::series::zeta_series;
use proptest::prelude::*;

fn graphs() -> Vec<DirectedMultigraph> {
    corpus().into_iter().map(|(_, g)| g).collect()
}

/// Words are drawn as letter indices and taken modulo the alphabet size.
fn word(g: &DirectedMultigraph, idx: &[usize]) -> Word {
    let alphabet = Letter::alphabet(g);
    Word::new(idx.iter().map(|&i| alphabet[i % alphabet.len()]).collect())
}

/// A word that stays admissible: at each step the index picks among the
/// letters that keep the product nonzero.
fn admissible(g: &DirectedMultigraph, idx: &[usize]) -> Word {
    let alphabet = Letter::alphabet(g);
    let mut acc = Element::Identity;
    let mut out = Vec::new();
    for &i in idx {
        let ok: Vec<Letter> = alphabet
            .iter()
            .copied()
            .filter(|&l| !acc.push(l, g).is_zero())
            .collect();
        if ok.is_empty() {
            break;
        }
        let l = ok[i % ok.len()];
        acc = acc.push(l, g);
        out.push(l);
    }
    Word::new(out)
}

fn letters(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn associativity(gi in 0usize..7, a in letters(8), b in letters(8), c in letters(8)) {
        let g = &graphs()[gi];
        let x = reduce(&admissible(g, &a), g).unwrap();
        let y = reduce(&admissible(g, &b), g).unwrap();
        let z = reduce(&word(g, &c), g).unwrap();
        prop_assert_eq!(
            multiply(&multiply(&x, &y, g), &z, g),
            multiply(&x, &multiply(&y, &z, g), g)
        );
    }

    #[test]
    fn inverse_law(gi in 0usize..7, a in letters(12)) {
        let g = &graphs()[gi];
        let w = admissible(g, &a);
        let x = reduce(&w, g).unwrap();
        let xi = reduce(&invert(&w), g).unwrap();
        prop_assert_eq!(multiply(&multiply(&x, &xi, g), &x, g), x.clone());
        prop_assert_eq!(multiply(&multiply(&xi, &x, g), &xi, g), xi);
    }

    #[test]
    fn reduce_is_a_homomorphism(gi in 0usize..7, a in letters(10), b in letters(10), mix in any::<bool>()) {
        let g = &graphs()[gi];
        let (w1, w2) = if mix { (admissible(g, &a), admissible(g, &b)) } else { (word(g, &a), word(g, &b)) };
        prop_assert_eq!(
            reduce(&w1.concat(&w2), g).unwrap(),
            multiply(&reduce(&w1, g).unwrap(), &reduce(&w2, g).unwrap(), g)
        );
    }

    #[test]
    fn normal_form_round_trips(gi in 0usize..7, a in letters(12)) {
        let g = &graphs()[gi];
        let x = reduce(&admissible(g, &a), g).unwrap();
        // vertex idempotents have no word of their own
        prop_assume!(x.vertex_idempotent().is_none());
        if let Some(w) = x.to_word() {
            prop_assert_eq!(reduce(&w, g).unwrap(), x);
        }
    }

    #[test]
    fn power_classes_match_powers(gi in 0usize..7, a in letters(10)) {
        let g = &graphs()[gi];
        let x = reduce(&admissible(g, &a), g).unwrap();
        prop_assume!(!x.is_zero());
        let xx = multiply(&x, &x, g);
        match classify_powers(&x, g) {
            PowerClass::Nilpotent => prop_assert!(xx.is_zero()),
            PowerClass::Idempotent => prop_assert_eq!(xx, x),
            PowerClass::DownExcess(cycle) | PowerClass::UpExcess(cycle) => {
                let base = x.to_word().unwrap().len();
                for k in 1..=5 {
                    let p = x.pow(k, g);
                    prop_assert!(!p.is_zero());
                    prop_assert_eq!(p.to_word().unwrap().len(), base + (k - 1) * cycle.len());
                }
            }
        }
    }

    #[test]
    fn factors_of_admissible_words_are_admissible(gi in 0usize..7, a in letters(12), i in 0usize..12, j in 0usize..12) {
        let g = &graphs()[gi];
        let w = admissible(g, &a);
        let (i, j) = (i.min(j).min(w.len()), i.max(j).min(w.len()));
        let factor = Word::new(w.letters()[i..j].to_vec());
        prop_assert!(!reduce(&factor, g).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn family_i_dp_matches_naive(s in prop::collection::btree_map(1usize..4, 1usize..3, 1..3)) {
        let p = FamilyIParams::new(s.clone());
        prop_assume!(p.is_ok());
        let g = build_family_i(&p.unwrap()).unwrap();
        let cd = contracting_forest(&g).unwrap();
        prop_assert_eq!(count_tables_dp(&g, &cd, 6).unwrap(), count_tables_naive(&g, &cd, 6).unwrap());
    }

    #[test]
    fn family_ii_round_trip_and_zeta(r in 0usize..3, q in prop::collection::btree_map(1usize..3, 1usize..3, 0..3)) {
        let p = FamilyIIParams::new(r, q.clone());
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let g = build_family_ii(&p).unwrap();
        prop_assert_eq!(classify(&g).unwrap().family_ii, Some(p));
        let cd = contracting_forest(&g).unwrap();
        let ct = count_tables_dp(&g, &cd, 8).unwrap();
        let z = zeta_series(&ct.neutral_fixed[1..], 8).unwrap();
        prop_assert!(z.is_integral());
        prop_assert_eq!(z, neutral_zeta_product(&g, 8).unwrap());
    }

    #[test]
    fn params_text_round_trips(r in 0usize..4, q in prop::collection::btree_map(1usize..4, 1usize..4, 0..3)) {
        let p = FamilyIIParams::new(r, q);
        prop_assume!(p.is_ok());
        let c = CanonicalParams::II(p.unwrap());
        prop_assert_eq!(c.to_string().parse::<CanonicalParams>().unwrap(), c);
    }
}

#[test]
fn relabeling_leaves_invariants_alone() {
    for g in graphs() {
        let h = relabeled(&g);
        let v = compare(&fingerprint(&g, 8).unwrap(), &fingerprint(&h, 8).unwrap()).unwrap();
        assert_eq!(v, Verdict::InvariantsAgree);
    }
}

#[test]
fn graph_json_round_trips() {
    for g in graphs() {
        let h = DirectedMultigraph::from_json_str(&g.to_json_string()).unwrap();
        assert_eq!(g.to_spec(), h.to_spec());
    }
}
