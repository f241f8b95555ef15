//! Seeded random instances of the closure properties. Each check returns
//! `Err` with a description of the counterexample.

use closure_core::closure::{
    check_closure_axioms, check_faithfulness, check_functoriality, check_semi_residuality, dietz_obstruction,
    ClosureOp,
};
use closure_core::fpmod::{FPModule, ModuleMap, Submodule};
use closure_core::gb::FreeElem;
use closure_core::polyarith::Field;
use closure_core::ring::{ParameterSequence, QuotientRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::random;

pub type Check = fn(u64) -> Result<(), String>;

pub const ALL: &[(&str, Check)] = &[
    ("closure axioms", closure_axioms),
    ("semi-primeness", semi_primeness),
    ("direct sums of closures", direct_sums),
    ("closure within N + mM", within_max_ideal),
    ("sum closure equals intersection", sum_is_intersection),
    ("quotients of powers close more", containment_monotonicity),
    ("no obstruction for the trivial closure", trivial_never_obstructed),
];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k[x,y]`, `k[x,y,z]` or the conic `k[a,b,c]/(ac - b^2)`.
pub fn ring(seed: u64) -> QuotientRing {
    match seed % 4 {
        0 => QuotientRing::standard(&["x", "y"], Field::Rationals),
        1 => QuotientRing::standard(&["x", "y", "z"], Field::Rationals),
        2 => super::conic(),
        _ => QuotientRing::standard(&["x", "y"], Field::prime(5).unwrap()),
    }
}

fn ambient<R: Rng>(rng: &mut R, r: &QuotientRing) -> FPModule {
    if rng.gen_bool(0.7) {
        FPModule::ring_module(r)
    } else {
        FPModule::free(r, vec![0, 0])
    }
}

fn err<T: std::fmt::Display>(what: &str, w: Option<T>) -> Result<(), String> {
    match w {
        None => Ok(()),
        Some(w) => Err(format!("{what}: witness {w}")),
    }
}

fn fail(e: closure_core::Error) -> String {
    e.to_string()
}

fn closure_op<R: Rng>(rng: &mut R, r: &QuotientRing, kind: u64) -> ClosureOp {
    match kind % 4 {
        0 => ClosureOp::Trivial,
        1 => ClosureOp::module_closure(&random::module(rng, r)).unwrap(),
        2 => ClosureOp::intersect(
            &ClosureOp::module_closure(&random::module(rng, r)).unwrap(),
            &ClosureOp::module_closure(&random::module(rng, r)).unwrap(),
        ),
        _ => ClosureOp::MonomialIntegralClosure,
    }
}

pub fn closure_axioms(seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let kind = seed / 4;
    let r = if kind % 4 == 3 && seed % 4 == 2 { ring(seed + 1) } else { ring(seed) };
    let cl = closure_op(&mut g, &r, kind);
    let (small, large) = if matches!(cl, ClosureOp::MonomialIntegralClosure) {
        let w = r.weights()[0];
        let gens: Vec<_> = (0..g.gen_range(1..=3))
            .map(|_| {
                let d = w * g.gen_range(1..=4);
                random::monomial_poly(&mut g, &r, d)
            })
            .collect();
        let small = Submodule::ideal(&r, &gens).map_err(fail)?;
        let extra = random::monomial_poly(&mut g, &r, w * 2);
        let large = small.with(&[FreeElem::from_poly(extra)]).map_err(fail)?;
        (small, large)
    } else {
        let m = ambient(&mut g, &r);
        let small = random::submodule(&mut g, &m, 2, 2);
        let large = small.sum(&random::submodule(&mut g, &m, 1, 2)).map_err(fail)?;
        (small, large)
    };
    let out = check_closure_axioms(&cl, &small, &large).map_err(fail)?;
    if !out.holds {
        return Err(format!("{cl} on {small} ⊆ {large}: {out}"));
    }
    if let ClosureOp::ModuleClosure(_) = cl {
        let m = small.module();
        let w = r.weights()[0];
        let x = random::nonzero_poly(&mut g, &r, w, 2);
        let f = ModuleMap::new(m, m, (0..m.ngens()).map(|i| m.gen(i).scale(&x)).collect()).map_err(fail)?;
        let out = check_functoriality(&cl, &f, &small).map_err(fail)?;
        if !out.holds {
            return Err(format!("{cl} on {small}: {out}"));
        }
        let closed = cl.compute(&small).map_err(fail)?;
        let out = check_semi_residuality(&cl, &closed).map_err(fail)?;
        if !out.holds {
            return Err(format!("{cl} on {closed}: {out}"));
        }
    }
    Ok(())
}

/// `I^cl N^cl ⊆ (I N)^cl` for module closures.
pub fn semi_primeness(seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let r = ring(seed);
    let cl = ClosureOp::module_closure(&random::module(&mut g, &r)).map_err(fail)?;
    let i = random::ideal_gens(&mut g, &r, 2, 2);
    let ci = cl.compute(&Submodule::ideal(&r, &i).map_err(fail)?).map_err(fail)?;
    let m = ambient(&mut g, &r);
    let n = random::submodule(&mut g, &m, 2, 1);
    let cn = cl.compute(&n).map_err(fail)?;
    let rhs = cl.compute(&n.scale_by_ideal(&i)).map_err(fail)?;
    let lhs = cn.scale_by_ideal(&ci.ideal_gens());
    err("semi-primeness", rhs.missing_from(&lhs))
}

/// The closure of `N_1 ⊕ N_2` in `M_1 ⊕ M_2` is the sum of the closures.
pub fn direct_sums(seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let r = ring(seed);
    let cl = ClosureOp::module_closure(&random::module(&mut g, &r)).map_err(fail)?;
    let m1 = FPModule::ring_module(&r);
    let m2 = if g.gen_bool(0.5) {
        FPModule::ring_module(&r)
    } else {
        FPModule::cyclic(&r, &random::ideal_gens(&mut g, &r, 1, 2)).map_err(fail)?
    };
    let n1 = random::submodule(&mut g, &m1, 2, 2);
    let n2 = random::submodule(&mut g, &m2, 2, 2);
    let m = m1.direct_sum(&m2).map_err(fail)?;
    let embed = |v: &FreeElem, first: bool| if first { v.embed(0, m2.ngens()) } else { v.embed(m1.ngens(), 0) };
    let mut gens: Vec<FreeElem> = n1.gens().iter().map(|v| embed(v, true)).collect();
    gens.extend(n2.gens().iter().map(|v| embed(v, false)));
    let whole = cl.compute(&Submodule::new(&m, gens).map_err(fail)?).map_err(fail)?;
    let mut parts: Vec<FreeElem> = cl.compute(&n1).map_err(fail)?.gens().iter().map(|v| embed(v, true)).collect();
    parts.extend(cl.compute(&n2).map_err(fail)?.gens().iter().map(|v| embed(v, false)));
    let parts = Submodule::new(&m, parts).map_err(fail)?;
    err("closure not inside sum of closures", parts.missing_from(&whole))?;
    err("sum of closures not inside closure", whole.missing_from(&parts))
}

/// `N^cl ⊆ N + mM` whenever the maximal ideal is closed.
pub fn within_max_ideal(seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let r = ring(seed);
    let cl = ClosureOp::module_closure(&random::module(&mut g, &r)).map_err(fail)?;
    if !check_faithfulness(&cl, &r).map_err(fail)?.holds {
        return Ok(());
    }
    let m = ambient(&mut g, &r);
    let n = random::submodule(&mut g, &m, 2, 2);
    let bound = n.sum(&Submodule::max_ideal_times(&m)).map_err(fail)?;
    err("closure escapes N + mM", bound.missing_from(&cl.compute(&n).map_err(fail)?))
}

/// `cl_(S ⊕ T)` and `cl_S ∩ cl_T` compute the same submodule.
pub fn sum_is_intersection(seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let r = ring(seed);
    let s = random::module(&mut g, &r);
    let t = random::module(&mut g, &r);
    let direct = ClosureOp::direct_sum_closure(&s, &t).map_err(fail)?;
    let meet = ClosureOp::intersect(
        &ClosureOp::module_closure(&s).map_err(fail)?,
        &ClosureOp::module_closure(&t).map_err(fail)?,
    );
    let m = ambient(&mut g, &r);
    let n = random::submodule(&mut g, &m, 2, 2);
    let a = direct.compute(&n).map_err(fail)?;
    let b = meet.compute(&n).map_err(fail)?;
    err("direct sum closure larger", b.missing_from(&a))?;
    err("intersection larger", a.missing_from(&b))
}

/// For `T` a quotient of `S^r`, `N^(cl_S) ⊆ N^(cl_T)`.
pub fn containment_monotonicity(seed: u64) -> Result<(), String> {
    let mut g = rng(seed);
    let r = ring(seed);
    let s = random::module(&mut g, &r);
    let copies = g.gen_range(1..=2);
    let power = FPModule::direct_sum_all(&r, &vec![s.clone(); copies]).map_err(fail)?;
    let t = power.quotient(&random::submodule(&mut g, &power, 1, 1)).map_err(fail)?;
    let cs = ClosureOp::module_closure(&s).map_err(fail)?;
    let ct = ClosureOp::module_closure(&t).map_err(fail)?;
    let m = ambient(&mut g, &r);
    let n = random::submodule(&mut g, &m, 2, 2);
    let a = cs.compute(&n).map_err(fail)?;
    let b = ct.compute(&n).map_err(fail)?;
    err("quotient closure misses an element", b.missing_from(&a))
}

/// `(x_1 ⋯ x_k)^t ∉ (x_1^(t+1), …)` over polynomial rings.
pub fn trivial_never_obstructed(seed: u64) -> Result<(), String> {
    let r = if seed.is_multiple_of(2) {
        QuotientRing::standard(&["x", "y"], Field::Rationals)
    } else {
        QuotientRing::standard(&["x", "y", "z"], Field::Rationals)
    };
    let k = 1 + (seed as usize / 2) % r.nvars();
    let xs = ParameterSequence::new(&r, r.variables()[..k].to_vec());
    match dietz_obstruction(&ClosureOp::Trivial, &xs, 3).map_err(fail)? {
        None => Ok(()),
        Some(t) => Err(format!("trivial closure obstructed at t = {t}")),
    }
}
