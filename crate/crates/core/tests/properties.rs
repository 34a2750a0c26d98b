use fano_index2::basket::{all_types, Basket, SingularityType};
use fano_index2::classifier::{enumerate_candidates, Candidate};
use fano_index2::exactnum::{degree_from_form, expand, numerator_wrt_weights, Poly, Rational, RationalForm};
use fano_index2::genrings::{corrected_inference, infer_generators};
use fano_index2::rr::{hilbert_series, periodic_term, plurigenus};
use proptest::prelude::*;
use std::sync::OnceLock;

fn candidates() -> &'static [Candidate] {
    static ALL: OnceLock<Vec<Candidate>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_candidates(30))
}

fn odd_index() -> impl Strategy<Value = i64> {
    (1i64..=11).prop_map(|k| 2 * k + 1)
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5i64..=5, 1..8).prop_map(|c| Poly::from_i64s(&c))
}

fn weights() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=7, 1..6)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn expansion_is_multiplicative(p in small_poly(), q in small_poly(), v in weights(), w in weights()) {
        let cutoff = 25;
        let a = RationalForm::new(p.clone(), v.clone());
        let b = RationalForm::new(q.clone(), w.clone());
        let ab = RationalForm::new(&p * &q, v.iter().chain(&w).copied().collect());
        prop_assert_eq!(expand(&a, cutoff).mul(&expand(&b, cutoff)), expand(&ab, cutoff));
    }

    #[test]
    fn numerator_round_trip(p in small_poly(), w in weights()) {
        let cutoff = p.degree().unwrap_or(0) + w.iter().sum::<u32>() as usize + 8;
        let s = expand(&RationalForm::new(p.clone(), w.clone()), cutoff);
        prop_assert_eq!(numerator_wrt_weights(&s, &w).unwrap(), p);
    }

    #[test]
    fn ci_degree_is_product_ratio(rel in prop::collection::vec(1u32..=9, 0..3), extra in prop::collection::vec(1u32..=5, 4)) {
        let mut ws = extra.clone();
        ws.extend(rel.iter().map(|d| d + 1));
        let form = RationalForm::complete_intersection(&rel, ws.clone());
        let num: i64 = rel.iter().map(|&d| d as i64).product();
        let den: i64 = ws.iter().map(|&w| w as i64).product();
        prop_assert_eq!(degree_from_form(&form).unwrap(), Rational::new(num, den));
    }

    #[test]
    fn degree_matches_growth_of_coefficients(i in 0usize..1492) {
        // h0(nA) = A^3 n^3 / 6 + ..., so summed over a full period of length L
        // starting at mL it is a cubic in m with leading coefficient L^4 A^3 / 6
        let c = &candidates()[i % candidates().len()];
        let period: i64 = c.basket.entries().iter().map(|s| s.r() as i64).fold(1, |l, r| l / gcd(l, r) * r);
        let chi = |n: i64| plurigenus(&c.basket, &c.a3, n);
        let block = |m: i64| (0..period).fold(Rational::zero(), |acc, k| acc + chi(m * period + k));
        // third finite difference of a cubic is 6 * leading coefficient
        let third = block(3) - block(2) * Rational::from(3) + block(1) * Rational::from(3) - block(0);
        let l4 = Rational::from(period.pow(4));
        prop_assert_eq!(third, c.a3.clone() * l4);
    }

    #[test]
    fn normalize_fuzz(r in odd_index(), a_raw in -200i64..200) {
        match SingularityType::normalize(r, a_raw) {
            Ok(s) => {
                prop_assert_eq!(gcd(a_raw, r), 1);
                prop_assert!(s.a() >= 1 && 2 * s.a() < s.r());
                let a = s.a() as i64;
                prop_assert!((a - a_raw).rem_euclid(r) == 0 || (a + a_raw).rem_euclid(r) == 0);
                prop_assert_eq!((a * s.b() as i64).rem_euclid(r), 2 % r);
            }
            Err(_) => prop_assert!(r < 3 || gcd(a_raw, r) != 1),
        }
    }

    #[test]
    fn local_index_properties(t in 0usize..1000, n in -100i64..100) {
        let s = all_types()[t % all_types().len()];
        let r = s.r() as i64;
        let i = s.local_index(n) as i64;
        prop_assert!(i < r);
        prop_assert_eq!((2 * i + n).rem_euclid(r), 0);
        prop_assert_eq!(s.local_index(n + r), s.local_index(n));
        prop_assert_eq!(periodic_term(&s, n), periodic_term(&s, n + r));
    }

    #[test]
    fn basket_text_round_trip(idx in prop::collection::vec(0usize..1000, 0..4)) {
        let b = Basket::new(idx.iter().map(|&i| all_types()[i % all_types().len()]).collect());
        prop_assert_eq!(b.to_string().parse::<Basket>().unwrap(), b);
    }

    #[test]
    fn rational_text_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = Rational::new(p, q);
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
    }

    #[test]
    fn ci_inference_round_trip(ws in prop::collection::vec(1u32..=4, 4..7), rel in prop::collection::vec(5u32..=9, 1..3)) {
        let mut sorted = ws.clone();
        sorted.sort_unstable();
        let form = RationalForm::complete_intersection(&rel, sorted.clone());
        let cutoff = sorted.iter().sum::<u32>() as usize + rel.iter().sum::<u32>() as usize + 10;
        let s = expand(&form, cutoff);
        let (found, _) = infer_generators(&s).unwrap();
        prop_assert_eq!(&found, &sorted);
        prop_assert_eq!(numerator_wrt_weights(&s, &found).unwrap(), Poly::denominator(&rel));
    }

    #[test]
    fn corrected_inference_keeps_greedy_weights(i in 0usize..1492) {
        let c = &candidates()[i % candidates().len()];
        let s = hilbert_series(&c.basket, c.genus, 120).unwrap();
        if let Ok(model) = corrected_inference(&s, &c.basket) {
            let (greedy, _) = infer_generators(&s).unwrap();
            let mut rest = model.weights.clone();
            for w in greedy.iter().chain(&model.seeded) {
                let pos = rest.iter().position(|x| x == w);
                prop_assert!(pos.is_some(), "weight {} dropped", w);
                rest.remove(pos.unwrap());
            }
            let back = expand(&RationalForm::new(model.numerator.clone(), model.weights.clone()), 120);
            prop_assert!(back.coeffs().iter().all(|x| !x.is_negative()));
            prop_assert_eq!(back, s);
        }
    }
}
