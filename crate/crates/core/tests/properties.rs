//! Invariants checked on random inputs.

use germlab::algebra::rational::q_int;
use germlab::algebra::{factor, is_irreducible, is_squarefree, Field, Poly, Q};
use germlab::germs::solve_germs;
use germlab::quadrics::torsion_sizes;
use germlab::weyl::orbital_closed_form;
use germlab::zeta::{weil_polynomial, CurveModel};
use proptest::prelude::*;

const ORDERS: [u64; 6] = [3, 5, 7, 9, 25, 27];

fn field_and_elems(count: usize) -> impl Strategy<Value = (u64, Vec<u32>)> {
    prop::sample::select(&ORDERS[..])
        .prop_flat_map(move |q| (Just(q), prop::collection::vec(0..q as u32, count)))
}

fn monic(q: u64, max_degree: usize) -> impl Strategy<Value = Vec<u32>> {
    (1..=max_degree)
        .prop_flat_map(move |n| prop::collection::vec(0..q as u32, n))
        .prop_map(|mut c| {
            c.push(1);
            c
        })
}

fn field_monic(orders: &[u64], max_degree: usize) -> impl Strategy<Value = (u64, Vec<u32>)> {
    prop::sample::select(orders.to_vec()).prop_flat_map(move |q| (Just(q), monic(q, max_degree)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((q, v) in field_and_elems(3)) {
        let f = Field::cached(q).unwrap();
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn quadratic_character_is_multiplicative((q, v) in field_and_elems(2)) {
        let f = Field::cached(q).unwrap();
        prop_assert_eq!(f.chi(f.mul(v[0], v[1])), f.chi(v[0]) * f.chi(v[1]));
        prop_assert_eq!(f.chi(v[0]) == 1, v[0] != 0 && f.is_square(v[0]));
    }

    #[test]
    fn factorization_recomposes((q, c) in field_monic(&ORDERS[..4], 9)) {
        let f = Field::cached(q).unwrap();
        let p = Poly::new(c);
        let fac = factor(&f, &p).unwrap();
        prop_assert_eq!(fac.recompose(&f), p.clone());
        for (g, _) in &fac.factors {
            prop_assert!(is_irreducible(&f, g).unwrap());
        }
        prop_assert_eq!(fac.is_squarefree(), is_squarefree(&f, &p).unwrap());
    }

    #[test]
    fn division_with_remainder((q, a, d) in field_monic(&ORDERS, 8).prop_flat_map(|(q, a)| (Just(q), Just(a), monic(q, 4)))) {
        let f = Field::cached(q).unwrap();
        let a = Poly::new(a);
        let d = Poly::new(d);
        let (quo, rem) = a.divrem(&f, &d).unwrap();
        prop_assert_eq!(quo.mul(&f, &d).add(&f, &rem), a);
        prop_assert!(rem.degree().is_none_or(|r| r < d.degree().unwrap()));
    }

    #[test]
    fn germ_solve_inverts_the_orbital_matrix(g in 0usize..6, q in prop::sample::select(vec![3i128, 5, 7, 9]), raw in prop::collection::vec(-50i64..50, 6)) {
        let gamma: Vec<Q> = raw[..=g].iter().map(|&x| q_int(x)).collect();
        let j: Vec<Q> = (0..=g)
            .map(|m| (0..=m).map(|mp| &gamma[mp] * q_int(orbital_closed_form(g, m, mp, q) as i64)).sum())
            .collect();
        prop_assert_eq!(solve_germs(&j, g, q), gamma);
    }

    #[test]
    fn torsion_cohomology_sizes_agree(degrees in prop::collection::vec(1usize..5, 1..6)) {
        let t = torsion_sizes(&degrees);
        prop_assert_eq!(t.h0, t.h1);
        prop_assert!(t.stabilizer.is_power_of_two());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weil_data_is_consistent((q, c) in field_monic(&[3, 5, 7], 6)) {
        let f = Field::cached(q).unwrap();
        let p = Poly::new(c);
        prop_assume!(p.degree().unwrap_or(0) >= 1 && is_squarefree(&f, &p).unwrap());
        let curve = CurveModel::new(&f, p).unwrap();
        let w = weil_polynomial(&curve).unwrap();
        prop_assert!(w.functional_equation_holds());
        prop_assert!(w.lemma_expansion_holds());
        prop_assert!(w.p_at_one() > 0);
        let twist = curve.quadratic_twist();
        for d in 1..=3u32 {
            let n = curve.count_points(d).unwrap() as i128;
            let nt = twist.count_points(d).unwrap() as i128;
            let base = w.q.pow(d) + 1;
            prop_assert_eq!(w.count_from_weil(d as usize), n);
            prop_assert_eq!(base - nt, if d % 2 == 0 { base - n } else { n - base });
        }
    }
}
