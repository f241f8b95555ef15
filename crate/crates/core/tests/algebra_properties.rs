mod common;

use closure_core::closure::{phantom_test, ClosureOp, PhantomInstance};
use closure_core::fpmod::{FPModule, Submodule};
use closure_core::gb::FreeElem;
use closure_core::modify::{containment_modification, parameter_modification, BadRelation};
use closure_core::polyarith::{Field, MonomialOrder, PolyRing, Polynomial};
use closure_core::ring::QuotientRing;
use common::random;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn term() -> impl Strategy<Value = (i64, [u32; 3])> {
    (-5i64..=5, [0u32..3, 0u32..3, 0u32..3])
}

fn poly_text() -> impl Strategy<Value = String> {
    prop::collection::vec(term(), 0..5).prop_map(|ts| {
        let parts: Vec<String> = ts
            .iter()
            .filter(|(c, _)| *c != 0)
            .map(|(c, e)| format!("({c})*x^{}*y^{}*z^{}", e[0], e[1], e[2]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    })
}

fn ring(field: Field) -> std::sync::Arc<PolyRing> {
    PolyRing::new(common::names(&["x", "y", "z"]), field)
}

fn parse(r: &std::sync::Arc<PolyRing>, s: &str) -> Polynomial {
    Polynomial::parse(r, s).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in poly_text(), b in poly_text(), c in poly_text()) {
        let r = ring(Field::Rationals);
        let (a, b, c) = (parse(&r, &a), parse(&r, &b), parse(&r, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leading_terms_multiply(a in poly_text(), b in poly_text()) {
        let r = ring(Field::Rationals);
        let (a, b) = (parse(&r, &a), parse(&r, &b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        for ord in [MonomialOrder::Lex, MonomialOrder::DegRevLex, MonomialOrder::WeightedDegRevLex(vec![3, 1, 2])] {
            let (ma, ca) = a.leading_term(&ord).unwrap();
            let (mb, cb) = b.leading_term(&ord).unwrap();
            let (mp, cp) = (&a * &b).leading_term(&ord).unwrap();
            prop_assert_eq!(mp, ma.mul(&mb));
            prop_assert_eq!(cp, r.field().mul(&ca, &cb));
        }
    }

    #[test]
    fn prime_field_agrees_with_rationals(a in poly_text(), b in poly_text()) {
        let q = ring(Field::Rationals);
        let p = ring(Field::prime(7).unwrap());
        let over_q = &parse(&q, &a) * &parse(&q, &b);
        let over_p = &parse(&p, &a) * &parse(&p, &b);
        prop_assert_eq!(parse(&p, &over_q.to_string()), over_p);
    }

    #[test]
    fn print_parse_round_trip(a in poly_text()) {
        let r = ring(Field::Rationals);
        let f = parse(&r, &a);
        prop_assert_eq!(parse(&r, &f.to_string()), f.clone());
        prop_assert_eq!(parse(&r, &f.to_string()).to_string(), f.to_string());
    }

    #[test]
    fn ring_elements_respect_normal_forms(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = common::conic();
        let e: Vec<_> = (0..3)
            .map(|_| {
                let d = 2 * g.gen_range(0..3);
                r.elem(&random::poly(&mut g, &r, d, 3)).unwrap()
            })
            .collect();
        prop_assert_eq!(e[0].mul(&e[1]).mul(&e[2]), e[0].mul(&e[1].mul(&e[2])));
        prop_assert_eq!(e[0].mul(&e[1]), e[1].mul(&e[0]));
        let prod = e[0].mul(&e[1]);
        prop_assert_eq!(prod.rep(), &r.reduce(prod.rep()));
    }

    #[test]
    fn hyperplane_sections_drop_dimension(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = if seed % 2 == 0 { common::conic() } else { QuotientRing::standard(&["x", "y", "z"], Field::Rationals) };
        let w = r.weights()[0];
        let d = w * g.gen_range(1..=2);
        let x = random::nonzero_poly(&mut g, &r, d, 3);
        prop_assert_eq!(r.dim_modulo(&[x]).unwrap(), r.dim() - 1);
    }

    #[test]
    fn tensor_is_right_exact(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = common::properties::ring(seed);
        let s = random::module(&mut g, &r);
        let m = FPModule::free(&r, vec![0, 0]);
        let n = random::submodule(&mut g, &m, 2, 2);
        let lhs = s.tensor(&n.quotient_module().unwrap()).unwrap();
        let sm = s.tensor(&m).unwrap();
        let image: Vec<FreeElem> = (0..s.ngens())
            .flat_map(|k| n.gens().iter().map(move |v| (k, v)))
            .map(|(k, v)| s.tensor_gen_elem(k, &m, v))
            .collect();
        let rhs = sm.quotient(&Submodule::new(&sm, image).unwrap()).unwrap();
        prop_assert!(lhs.presentation_equivalent(&rhs));
        for d in 0..=5 {
            prop_assert_eq!(lhs.hilbert_function(d), rhs.hilbert_function(d));
        }
    }

    #[test]
    fn resolutions_compose_to_zero(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = common::properties::ring(seed);
        let m = FPModule::cyclic(&r, &random::ideal_gens(&mut g, &r, 3, 2)).unwrap();
        let res = m.free_resolution(3).unwrap();
        prop_assert!(res.composites_vanish());
        prop_assert!(res.is_minimal());
    }

    #[test]
    fn parameter_modification_resolves_relation(seed in 0u64..16) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = common::veronese();
        let rr = FPModule::ring_module(&r);
        // d u = a u_1 for u = b^2 times a random multiplier
        let d = 4 * g.gen_range(0..2);
        let mult = random::nonzero_poly(&mut g, &r, d, 2);
        let u = FreeElem::from_poly(&r.parse("b^2").unwrap() * &mult);
        let u1 = FreeElem::from_poly(&r.parse("c^2").unwrap() * &mult);
        let Ok(rel) = BadRelation::new(&rr, common::polys(&r, &["a", "d"]), u.clone(), vec![u1]) else {
            return Ok(());
        };
        let (m1, map) = parameter_modification(&rel).unwrap();
        let image = map.apply(&u);
        prop_assert!(Submodule::ideal_times(&m1, &common::polys(&r, &["a"])).contains(&image));
    }

    #[test]
    fn containment_modifications_keep_phantom(seed in 0u64..12) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = common::veronese();
        let s = common::s2ification(&r);
        let cl = ClosureOp::module_closure(&s).unwrap();
        let rr = FPModule::ring_module(&r);
        let ga = Submodule::ideal(&r, &common::polys(&r, &["a"])).unwrap();
        let v = common::elem(&r, "b^2");
        let (m1, _) = containment_modification(&cl, &rr, &ga, &v, &rr.gen(0)).unwrap();
        prop_assert!(phantom_test(&cl, &PhantomInstance::from_module(&m1).unwrap()).unwrap());
        // a second modification relative to a random element of the new module
        let gd = Submodule::ideal(&r, &common::polys(&r, &["d"])).unwrap();
        let w = common::elem(&r, "c^2");
        let x = FreeElem::new(
            r.poly(),
            m1.degrees().iter().map(|deg| random::poly(&mut g, &r, 4 - deg.min(&4), 2)).collect(),
        )
        .unwrap();
        prop_assume!(m1.is_homogeneous_elem(&x) && !x.is_zero());
        let (m2, _) = containment_modification(&cl, &m1, &gd, &w, &x).unwrap();
        prop_assert!(phantom_test(&cl, &PhantomInstance::from_module(&m2).unwrap()).unwrap());
    }
}
