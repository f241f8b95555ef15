mod common;

use closure_core::closure::{
    check_colon_capturing, check_faithfulness, check_functoriality, check_generalized_colon_capturing,
    dietz_obstruction, is_trivial_on_sample, phantom_test, Closure, ClosureCertificate, ClosureOp, ColonVariant,
    PhantomInstance,
};
use closure_core::fpmod::{FPModule, ModuleMap, Submodule};
use closure_core::modify::{
    containment_holds, containment_modification, find_bad_relation, image_of_one_in_m, parameter_modification,
    BadRelation, ModificationTrace,
};
use closure_core::polyarith::Field;
use closure_core::ring::{ParameterSequence, QuotientRing};
use common::*;

#[test]
fn conic_ideal_closure_collapses_pair() {
    for field in [Field::Rationals, Field::prime(5).unwrap()] {
        let r = conic_over(field);
        let m = FPModule::ideal(&r, &polys(&r, &["a", "b"])).unwrap();
        let cl = ClosureOp::module_closure(&m).unwrap();
        let i = Submodule::ideal(&r, &polys(&r, &["a^2", "a*b", "b*c", "c^2"])).unwrap();
        let j = i.with(&[elem(&r, "a*c")]).unwrap();
        let ci = cl.compute(&i).unwrap();
        let cj = cl.compute(&j).unwrap();
        assert!(ci.equals(&cj));
        assert!(ci.contains(&elem(&r, "a*c")));
        assert!(!i.contains(&elem(&r, "a*c")));
        let mem = cl.membership(&i, &elem(&r, "a*c")).unwrap();
        assert!(mem.member);
        match mem.certificate {
            Some(ClosureCertificate::PerGenerator(c)) => assert_eq!(c.len(), 2),
            other => panic!("unexpected certificate {other:?}"),
        }
    }
}

#[test]
fn hypersurface_second_pair() {
    let r = hypersurface();
    let m = FPModule::ideal(&r, &polys(&r, &["x", "u"])).unwrap();
    let cl = ClosureOp::module_closure(&m).unwrap();
    let i = Submodule::ideal(&r, &polys(&r, &["x^2", "u^2"])).unwrap();
    assert!(cl.compute(&i).unwrap().contains(&elem(&r, "x*u")));
    assert!(!i.contains(&elem(&r, "x*u")));
}

#[test]
fn s2ification_closure() {
    let r = veronese();
    let s = s2ification(&r);
    let cl = ClosureOp::module_closure(&s).unwrap();
    let a = Submodule::ideal(&r, &polys(&r, &["a"])).unwrap();
    let d = Submodule::ideal(&r, &polys(&r, &["d"])).unwrap();
    assert!(cl.contains(&a, &elem(&r, "b^2")).unwrap());
    assert!(cl.contains(&d, &elem(&r, "c^2")).unwrap());
    assert!(!ClosureOp::Trivial.contains(&a, &elem(&r, "b^2")).unwrap());
    let ca = cl.compute(&a).unwrap();
    assert!(ca.contains(&elem(&r, "b^2")));
    assert!(!ca.contains(&elem(&r, "b")));
    assert!(check_faithfulness(&cl, &r).unwrap().holds);
}

#[test]
fn integral_closure_obstruction() {
    let x = QuotientRing::standard(&["x", "y"], Field::Rationals);
    let xs = ParameterSequence::parse(&x, &["x", "y"]).unwrap();
    assert_eq!(dietz_obstruction(&ClosureOp::MonomialIntegralClosure, &xs, 3).unwrap(), Some(1));
    assert_eq!(dietz_obstruction(&ClosureOp::Trivial, &xs, 3).unwrap(), None);
    let n = Submodule::ideal(&x, &polys(&x, &["x^2", "y^2"])).unwrap();
    let c = ClosureOp::MonomialIntegralClosure.compute(&n).unwrap();
    assert!(c.contains(&elem(&x, "x*y")));
    assert!(!ClosureOp::Trivial.contains(&n, &elem(&x, "x")).unwrap());
    assert!(check_faithfulness(&ClosureOp::MonomialIntegralClosure, &x).unwrap().holds);
}

#[test]
fn veronese_colon_capturing() {
    let r = veronese();
    let s = s2ification(&r);
    let cl = ClosureOp::module_closure(&s).unwrap();
    let xs = ParameterSequence::parse(&r, &["a", "d"]).unwrap();
    let triv = check_colon_capturing(&ClosureOp::Trivial, &xs, &ColonVariant::Plain).unwrap();
    assert!(!triv.holds);
    assert_eq!(triv.witness.unwrap().comp(0), &r.parse("b^2").unwrap());
    assert!(check_colon_capturing(&cl, &xs, &ColonVariant::Plain).unwrap().holds);
    assert!(check_colon_capturing(&cl, &xs, &ColonVariant::StrongB).unwrap().holds);
    assert!(check_colon_capturing(&cl, &xs, &ColonVariant::StrongA { t: 2, a: 1 }).unwrap().holds);
    assert_eq!(dietz_obstruction(&cl, &xs, 2).unwrap(), None);
}

#[test]
fn generalized_colon_capturing_regular_case() {
    let x = QuotientRing::standard(&["x", "y"], Field::Rationals);
    let xs = ParameterSequence::parse(&x, &["x", "y"]).unwrap();
    let r = FPModule::ring_module(&x);
    let q = FPModule::cyclic(&x, &polys(&x, &["x"])).unwrap();
    let f = ModuleMap::new(&r, &q, vec![q.gen(0)]).unwrap();
    let out = check_generalized_colon_capturing(&ClosureOp::Trivial, &xs, &f, &elem(&x, "y")).unwrap();
    assert!(out.holds);
}

/// Identity on modules with one generator; on larger modules it also adds the
/// last basis vector whenever `N ⊄ m^2 M`. Not a closure operation.
struct Broken;

impl Closure for Broken {
    fn close(&self, n: &Submodule) -> closure_core::Result<Submodule> {
        let m = n.module();
        if m.ngens() < 2 {
            return Ok(n.clone());
        }
        let vars = m.ring().variables();
        let sq: Vec<_> = vars.iter().flat_map(|a| vars.iter().map(move |b| a * b)).collect();
        let deep = Submodule::ideal_times(m, &sq);
        if n.is_subset_of(&deep) {
            Ok(n.clone())
        } else {
            n.with(&[m.gen(m.ngens() - 1)])
        }
    }

    fn name(&self) -> String {
        "broken".into()
    }
}

#[test]
fn generalized_colon_capturing_negative_control() {
    let x = QuotientRing::standard(&["x", "y"], Field::Rationals);
    let xs = ParameterSequence::parse(&x, &["x", "y"]).unwrap();
    let m = FPModule::free(&x, vec![0, 0]);
    let q = FPModule::cyclic(&x, &polys(&x, &["x"])).unwrap();
    let f = ModuleMap::new(&m, &q, vec![q.gen(0), q.zero_elem()]).unwrap();
    let v = vector(&x, &["y", "0"]);
    assert!(check_generalized_colon_capturing(&ClosureOp::Trivial, &xs, &f, &v).unwrap().holds);
    let out = check_generalized_colon_capturing(&Broken, &xs, &f, &v).unwrap();
    assert!(!out.holds);
    assert_eq!(out.witness.unwrap(), vector(&x, &["0", "1"]));
}

#[test]
fn functoriality_instance() {
    let r = conic();
    let m = FPModule::ideal(&r, &polys(&r, &["a", "b"])).unwrap();
    let cl = ClosureOp::module_closure(&m).unwrap();
    let rr = FPModule::ring_module(&r);
    let q = FPModule::cyclic(&r, &polys(&r, &["a"])).unwrap();
    let f = ModuleMap::new(&rr, &q, vec![q.gen(0)]).unwrap();
    let i = Submodule::ideal(&r, &polys(&r, &["a^2", "a*b", "b*c", "c^2"])).unwrap();
    assert!(check_functoriality(&cl, &f, &i).unwrap().holds);
}

#[test]
fn triviality_samples() {
    let r = conic();
    let m = FPModule::ideal(&r, &polys(&r, &["a", "b"])).unwrap();
    let cl = ClosureOp::module_closure(&m).unwrap();
    let sample = vec![
        Submodule::ideal(&r, &polys(&r, &["a"])).unwrap(),
        Submodule::ideal(&r, &polys(&r, &["a^2", "a*b", "b*c", "c^2"])).unwrap(),
    ];
    let out = is_trivial_on_sample(&cl, &sample).unwrap();
    assert!(!out.holds);
    let free = ClosureOp::module_closure(&FPModule::free(&r, vec![0, 1])).unwrap();
    assert!(is_trivial_on_sample(&free, &sample).unwrap().holds);
}

#[test]
fn phantom_and_modification_chain() {
    let r = veronese();
    let s = s2ification(&r);
    let cl = ClosureOp::module_closure(&s).unwrap();
    let xs = ParameterSequence::parse(&r, &["a", "d"]).unwrap();
    let rr = FPModule::ring_module(&r);
    let rel = find_bad_relation(&rr, &xs, 12).unwrap().expect("Veronese ring is not Cohen-Macaulay");
    assert_eq!(rel.u().comp(0), &r.parse("b^2").unwrap());
    let (m1, _) = parameter_modification(&rel).unwrap();
    assert_eq!(m1.ngens(), 2);
    assert!(Submodule::ideal_times(&m1, &polys(&r, &["a"])).contains(&vector(&r, &["b^2", "0"])));
    let inst = PhantomInstance::from_module(&m1).unwrap();
    assert!(phantom_test(&cl, &inst).unwrap());
    assert!(!phantom_test(&ClosureOp::Trivial, &inst).unwrap());
    let again = find_bad_relation(&m1, &xs, 12).unwrap();
    if let Some(again) = again {
        assert_ne!(again.u(), &vector(&r, &["b^2", "0"]));
    }

    let trace = ModificationTrace::root(&rr);
    assert!(!image_of_one_in_m(&trace));
    let t1 = trace.apply_parameter(&rel, &cl).unwrap();
    assert_eq!(t1.stages()[1].phantom, Some(true));
    assert!(!image_of_one_in_m(&t1));
    let bad = trace.apply_parameter(&rel, &ClosureOp::Trivial).unwrap();
    assert_eq!(bad.stages()[1].phantom, Some(false));
    assert!(!image_of_one_in_m(&bad));
    assert_eq!(trace.len(), 0);
    assert!(t1.to_json().unwrap()["stages"].as_array().unwrap().len() == 2);

    let g = Submodule::ideal(&r, &polys(&r, &["a"])).unwrap();
    let v = elem(&r, "b^2");
    let (m2, _) = containment_modification(&cl, &rr, &g, &v, &rr.gen(0)).unwrap();
    assert!(containment_holds(&m2, &g, &v, &m2.gen(0)).unwrap());
    assert!(!containment_holds(&rr, &g, &v, &rr.gen(0)).unwrap());
    assert!(containment_modification(&cl, &rr, &g, &elem(&r, "a*b"), &rr.gen(0)).is_err());
}

#[test]
fn regular_ring_has_no_bad_relation() {
    let x = QuotientRing::standard(&["x", "y"], Field::Rationals);
    let xs = ParameterSequence::parse(&x, &["x", "y"]).unwrap();
    let rr = FPModule::ring_module(&x);
    assert!(find_bad_relation(&rr, &xs, 10).unwrap().is_none());
    let bogus = BadRelation::new(&rr, polys(&x, &["x", "y"]), elem(&x, "x"), vec![elem(&x, "y")]);
    assert!(bogus.is_err());
}

#[test]
fn split_extension_is_phantom() {
    let x = QuotientRing::standard(&["x", "y"], Field::Rationals);
    let m = FPModule::free(&x, vec![0, 0]);
    let inst = PhantomInstance::from_module(&m).unwrap();
    assert!(phantom_test(&ClosureOp::Trivial, &inst).unwrap());
    let m = FPModule::new(&x, vec![0, 1], vec![vector(&x, &["0", "x"])]).unwrap();
    assert!(phantom_test(&ClosureOp::Trivial, &PhantomInstance::from_module(&m).unwrap()).unwrap());
}
