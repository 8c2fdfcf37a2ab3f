use num_bigint::BigInt;
use proptest::prelude::*;

use cobham_core::growth::{growth_types, image_lengths};
use cobham_core::independence::{integer_mult_indep, perron_mult_indep, perron_search, IndependenceVerdict};
use cobham_core::language::{occurrences, return_words};
use cobham_core::periodicity::{detect_ultimate_periodicity, primitive_root, verify_periodicity_prefix, PeriodicityCertificate};
use cobham_core::spectral::incidence_matrix;
use cobham_core::{compose, parse_substitution_file, power, Letter, Morphism, PerronValue, SubstitutionSystem};

fn images(k: usize, min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<Letter>>> {
    prop::collection::vec(prop::collection::vec(0..k as Letter, min_len..=max_len), k)
}

fn endo(min_len: usize) -> impl Strategy<Value = Morphism> {
    (1usize..=4).prop_flat_map(move |k| images(k, min_len, 4)).prop_map(|im| Morphism::from_images(im).unwrap())
}

fn endo_triple() -> impl Strategy<Value = (Morphism, Morphism, Morphism)> {
    (1usize..=4).prop_flat_map(|k| (images(k, 0, 3), images(k, 0, 3), images(k, 0, 3))).prop_map(|(a, b, c)| {
        (
            Morphism::from_images(a).unwrap(),
            Morphism::from_images(b).unwrap(),
            Morphism::from_images(c).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_is_associative((f, g, h) in endo_triple()) {
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn incidence_is_functorial((f, g, _h) in endo_triple()) {
        let m = incidence_matrix(&compose(&f, &g).unwrap());
        prop_assert_eq!(m, incidence_matrix(&g).mul(&incidence_matrix(&f)));
    }

    #[test]
    fn powers_add(sigma in endo(0), a in 1u32..4, b in 1u32..4) {
        let lhs = power(&sigma, a + b).unwrap();
        let rhs = compose(&power(&sigma, a).unwrap(), &power(&sigma, b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn image_lengths_are_column_sums(sigma in endo(0), n in 0usize..8) {
        let m = incidence_matrix(&sigma).pow(n as u32);
        let lens = image_lengths(&sigma, n);
        for a in sigma.domain().letters() {
            prop_assert_eq!(&lens[n][a as usize], &m.col_sum(a as usize));
        }
    }

    #[test]
    fn growth_type_of_a_power(sigma in endo(1), k in 1u32..4) {
        let base = growth_types(&sigma).unwrap();
        let pow = growth_types(&power(&sigma, k).unwrap()).unwrap();
        for (t, tk) in base.iter().zip(&pow) {
            prop_assert_eq!(t.d, tk.d);
            prop_assert!(t.theta.pow(k).unwrap().eq_value(&tk.theta));
        }
    }

    #[test]
    fn occurrences_match_a_scan(x in prop::collection::vec(0u8..2, 0..200), u in prop::collection::vec(0u8..2, 1..5)) {
        let scan: Vec<usize> = (0..x.len()).filter(|&i| x[i..].starts_with(&u)).collect();
        prop_assert_eq!(occurrences(&x, &u).unwrap(), scan);
    }

    #[test]
    fn return_words_tile_the_prefix(x in prop::collection::vec(0u8..3, 10..300), u in prop::collection::vec(0u8..3, 1..3)) {
        if let Ok(r) = return_words(&x, &u) {
            let mut joined = Vec::new();
            for w in r.occurrences.windows(2) {
                let piece = &x[w[0]..w[1]];
                prop_assert!(r.return_words.iter().any(|rw| &rw[..] == piece));
                joined.extend_from_slice(piece);
            }
            prop_assert_eq!(&joined[..], &x[r.occurrences[0]..*r.occurrences.last().unwrap()]);
            for w in &r.return_words {
                let wu: Vec<u8> = w.iter().chain(&r.u[..]).copied().collect();
                prop_assert!(wu.starts_with(&r.u));
                prop_assert_eq!(occurrences(&wu, &r.u).unwrap().len(), 2);
            }
        }
    }

    #[test]
    fn primitive_root_is_idempotent(v in prop::collection::vec(0u8..2, 1..12), k in 1usize..5) {
        let (root, e) = primitive_root(&v).unwrap();
        let repeated = v.repeat(k);
        let (root2, e2) = primitive_root(&repeated).unwrap();
        prop_assert_eq!(&root2, &root);
        prop_assert_eq!(e2, e * k);
        prop_assert_eq!(primitive_root(&root).unwrap().1, 1);
    }

    #[test]
    fn detector_agrees_with_verifier(
        u in prop::collection::vec(0u8..3, 0..=50),
        v in prop::collection::vec(0u8..3, 1..=30),
    ) {
        let x: Vec<u8> = u.iter().copied().chain(v.iter().copied().cycle()).take(1000).collect();
        let (root, _) = primitive_root(&v).unwrap();
        match detect_ultimate_periodicity(&x, None, None).unwrap() {
            PeriodicityCertificate::Periodic { preperiod, period, .. } => {
                prop_assert!(verify_periodicity_prefix(&x, preperiod, period));
                prop_assert_eq!(period, root.len());
                prop_assert!(preperiod <= u.len());
                prop_assert!(preperiod == 0 || !verify_periodicity_prefix(&x, preperiod - 1, period));
            }
            c => prop_assert!(false, "{:?}", c),
        }
    }

    #[test]
    fn integer_independence_is_symmetric(p in 2u64..10_000, q in 2u64..10_000) {
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        prop_assert_eq!(integer_mult_indep(&p, &q).unwrap().swapped(), integer_mult_indep(&q, &p).unwrap());
    }

    #[test]
    fn integer_and_algebraic_paths_agree(p in 2u64..10_000, q in 2u64..10_000) {
        let exact = integer_mult_indep(&BigInt::from(p), &BigInt::from(q)).unwrap();
        let searched = perron_search(&PerronValue::from_integer(p), &PerronValue::from_integer(q), 64).unwrap();
        match exact {
            IndependenceVerdict::Dependent { k, l, .. } => {
                let ok = matches!(searched, IndependenceVerdict::Dependent { k: k2, l: l2, .. } if (k2, l2) == (k, l));
                prop_assert!(ok);
            }
            _ => prop_assert_eq!(searched, IndependenceVerdict::IndependentUpTo { bound: 64 }),
        }
    }

    #[test]
    fn perron_independence_is_symmetric(sigma in endo(2), tau in endo(2)) {
        let a = cobham_core::spectral::dominant_eigenvalue(&incidence_matrix(&sigma)).unwrap();
        let b = cobham_core::spectral::dominant_eigenvalue(&incidence_matrix(&tau)).unwrap();
        let ab = perron_mult_indep(&a, &b, 16).unwrap();
        let ba = perron_mult_indep(&b, &a, 16).unwrap();
        match (&ab, &ba) {
            (IndependenceVerdict::Dependent { k, l, .. }, IndependenceVerdict::Dependent { k: k2, l: l2, .. }) => {
                prop_assert_eq!((k, l), (l2, k2));
            }
            _ => prop_assert_eq!(ab, ba),
        }
        let self_dep = matches!(perron_mult_indep(&a, &a, 16).unwrap(), IndependenceVerdict::Dependent { k: 1, l: 1, .. });
        prop_assert!(self_dep);
    }

    #[test]
    fn dependent_certificates_survive_more_bits(sigma in endo(2), k in 1u32..4) {
        let a = cobham_core::spectral::dominant_eigenvalue(&incidence_matrix(&sigma)).unwrap();
        let b = a.pow(k).unwrap();
        if let IndependenceVerdict::Dependent { k, l, .. } = perron_mult_indep(&a, &b, 16).unwrap() {
            let a2 = a.refined(a.bits() * 2);
            let b2 = b.refined(b.bits() * 2);
            prop_assert!(a2.pow(k).unwrap().eq_value(&b2.pow(l).unwrap()));
        } else {
            prop_assert!(false, "a and a^k must be dependent");
        }
    }

    #[test]
    fn file_round_trip(sigma in endo(1)) {
        let start = sigma.domain().letters().find(|&a| {
            cobham_core::system::is_prolongable(&sigma, a)
        });
        if let Some(start) = start {
            if let Ok(sys) = SubstitutionSystem::new(sigma.clone(), start, None, "p") {
                let back = parse_substitution_file(&sys.to_file_string()).unwrap();
                prop_assert_eq!(back.sigma(), sys.sigma());
                prop_assert_eq!(back.start(), sys.start());
            }
        }
    }
}
