//! Acceptance criteria with runtime limits. Prints one line per criterion and
//! exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use closure_core::closure::{
    check_colon_capturing, dietz_obstruction, is_trivial_on_sample, phantom_test, ClosureOp, ColonVariant,
    PhantomInstance,
};
use closure_core::fpmod::{FPModule, ModuleMap, Submodule};
use closure_core::gb::FreeElem;
use closure_core::modify::{image_of_one_in_m, BadRelation, ModificationTrace};
use closure_core::polyarith::Field;
use closure_core::ring::{ParameterSequence, QuotientRing};
use common::oracle::{closure_component, component, member};
use common::{elem, polys, random};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

fn conic_pair() -> Outcome {
    for field in [Field::Rationals, Field::prime(5).unwrap()] {
        let r = common::conic_over(field.clone());
        let m = FPModule::ideal(&r, &polys(&r, &["a", "b"])).map_err(e)?;
        let i = polys(&r, &["a^2", "a*b", "b*c", "c^2"]);
        let mut j = i.clone();
        j.push(r.parse("a*c").map_err(e)?);
        ensure(
            Submodule::ideal_times(&m, &i).equals(&Submodule::ideal_times(&m, &j)),
            "IM != JM",
        )?;
        let cl = ClosureOp::module_closure(&m).map_err(e)?;
        let ci = cl.compute(&Submodule::ideal(&r, &i).map_err(e)?).map_err(e)?;
        let cj = cl.compute(&Submodule::ideal(&r, &j).map_err(e)?).map_err(e)?;
        ensure(ci.equals(&cj), "closures of I and J differ")?;
        ensure(ci.contains(&elem(&r, "a*c")), "ac not in the closure")?;
    }
    Ok("IM = JM and cl(I) = cl(J) contains ac over Q and F5".into())
}

fn times_ideal_in_ring(m: &FPModule, inclusion: &ModuleMap, ideal: &[closure_core::polyarith::Polynomial]) -> Submodule {
    inclusion.image_of(&Submodule::ideal_times(m, ideal))
}

fn hypersurface_pairs() -> Outcome {
    let r = common::hypersurface();
    let gens = polys(&r, &["x", "u"]);
    let m = FPModule::ideal(&r, &gens).map_err(e)?;
    let rr = FPModule::ring_module(&r);
    let inclusion = ModuleMap::new(&m, &rr, gens.iter().cloned().map(FreeElem::from_poly).collect()).map_err(e)?;
    let i = polys(&r, &["x^2", "u^2"]);
    let j = polys(&r, &["x^2", "x*u", "u^2"]);
    let im = times_ideal_in_ring(&m, &inclusion, &i);
    let jm = times_ideal_in_ring(&m, &inclusion, &j);
    let printed = Submodule::ideal(&r, &polys(&r, &["x^3", "x^2*u", "x*u^2", "u^3"])).map_err(e)?;
    ensure(im.equals(&printed), "IM differs from (x^3, x^2u, xu^2, u^3)")?;
    ensure(jm.equals(&printed), "JM differs from (x^3, x^2u, xu^2, u^3)")?;
    ensure(
        Submodule::ideal_times(&m, &i).equals(&Submodule::ideal_times(&m, &j)),
        "IM != JM inside M",
    )?;
    let i1 = times_ideal_in_ring(&m, &inclusion, &polys(&r, &["y^2", "v^2"]));
    let j1 = times_ideal_in_ring(&m, &inclusion, &polys(&r, &["y*v"]));
    let report = match (i1.missing_from(&j1), j1.missing_from(&i1)) {
        (None, None) => "first pair (y^2,v^2) vs (yv): IM = JM".to_string(),
        (a, b) => format!(
            "first pair (y^2,v^2) vs (yv): IM != JM (in JM not IM: {}; in IM not JM: {})",
            a.map_or("none".into(), |w| w.to_string()),
            b.map_or("none".into(), |w| w.to_string()),
        ),
    };
    Ok(format!("IM = JM = (x^3, x^2u, xu^2, u^3); {report}"))
}

fn s2_examples() -> Outcome {
    let r = common::veronese();
    let cl = ClosureOp::module_closure(&common::s2ification(&r)).map_err(e)?;
    let a = Submodule::ideal(&r, &polys(&r, &["a"])).map_err(e)?;
    let d = Submodule::ideal(&r, &polys(&r, &["d"])).map_err(e)?;
    ensure(cl.membership(&a, &elem(&r, "b^2")).map_err(e)?.member, "b^2 not in (a)^cl")?;
    ensure(cl.membership(&d, &elem(&r, "c^2")).map_err(e)?.member, "c^2 not in (d)^cl")?;
    Ok("b^2 in (a)^cl and c^2 in (d)^cl".into())
}

fn obstruction() -> Outcome {
    let r = QuotientRing::standard(&["x", "y"], Field::Rationals);
    let xs = ParameterSequence::parse(&r, &["x", "y"]).map_err(e)?;
    let t = dietz_obstruction(&ClosureOp::MonomialIntegralClosure, &xs, 3).map_err(e)?;
    ensure(t == Some(1), &format!("expected t = 1, got {t:?}"))?;
    Ok("t = 1".into())
}

fn colon_suite() -> Outcome {
    let r = common::veronese();
    let cl = ClosureOp::module_closure(&common::s2ification(&r)).map_err(e)?;
    let xs = ParameterSequence::parse(&r, &["a", "d"]).map_err(e)?;
    let triv = check_colon_capturing(&ClosureOp::Trivial, &xs, &ColonVariant::Plain).map_err(e)?;
    ensure(!triv.holds, "trivial closure passed plain colon-capturing")?;
    let w = triv.witness.ok_or("no witness")?;
    ensure(w.comp(0) == &r.parse("b^2").map_err(e)?, &format!("witness {w} is not b^2"))?;
    let mut passed = 2;
    for v in [ColonVariant::Plain, ColonVariant::StrongB] {
        ensure(check_colon_capturing(&cl, &xs, &v).map_err(e)?.holds, &format!("{v:?} fails"))?;
    }
    for t in 1..=3 {
        for a in 0..t {
            let v = ColonVariant::StrongA { t, a };
            ensure(check_colon_capturing(&cl, &xs, &v).map_err(e)?.holds, &format!("{v:?} fails"))?;
            passed += 1;
        }
    }
    Ok(format!("trivial fails with witness {w}; cl_S passes {passed} instances"))
}

fn phantom_chain() -> Outcome {
    let r = common::veronese();
    let cl = ClosureOp::module_closure(&common::s2ification(&r)).map_err(e)?;
    let rr = FPModule::ring_module(&r);
    let rel = BadRelation::new(&rr, polys(&r, &["a", "d"]), elem(&r, "b^2"), vec![elem(&r, "c^2")]).map_err(e)?;
    let root = ModificationTrace::root(&rr);
    let good = root.apply_parameter(&rel, &cl).map_err(e)?;
    let bad = root.apply_parameter(&rel, &ClosureOp::Trivial).map_err(e)?;
    let inst = PhantomInstance::from_module(good.current()).map_err(e)?;
    ensure(phantom_test(&cl, &inst).map_err(e)?, "not phantom under cl_S")?;
    ensure(!phantom_test(&ClosureOp::Trivial, &inst).map_err(e)?, "phantom under the trivial closure")?;
    ensure(good.stages()[1].phantom == Some(true), "trace records non-phantom step")?;
    ensure(bad.stages()[1].phantom == Some(false), "trace records phantom step for trivial closure")?;
    ensure(!image_of_one_in_m(&good), "image of 1 lies in mM_1")?;
    Ok("phantom under cl_S, not under trivial; image of 1 not in mM_1".into())
}

fn property_suite() -> Outcome {
    let seeds = 50;
    for (name, check) in common::properties::ALL {
        for seed in 0..seeds {
            check(seed).map_err(|w| format!("{name}, seed {seed}: {w}"))?;
        }
    }
    Ok(format!("{} properties x {seeds} seeds", common::properties::ALL.len()))
}

fn oracle_ring(seed: u64) -> QuotientRing {
    match seed % 3 {
        0 => QuotientRing::standard(&["x", "y"], Field::Rationals),
        1 => QuotientRing::standard(&["x", "y", "z"], Field::Rationals),
        _ => QuotientRing::standard(&["x", "y", "z"], Field::prime(7).unwrap()),
    }
}

fn oracle_equivalence() -> Outcome {
    let mut memberships = 0;
    let mut components = 0;
    for seed in 0..30u64 {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = oracle_ring(seed);
        let gens = random::ideal_gens(&mut g, &r, 3, 3);
        let n = Submodule::ideal(&r, &gens).map_err(e)?;
        let gvec: Vec<FreeElem> = gens.iter().cloned().map(FreeElem::from_poly).collect();
        for _ in 0..8 {
            let d = g.gen_range(1..=6);
            let u = FreeElem::from_poly(random::poly(&mut g, &r, d, 3));
            ensure(
                n.contains(&u) == member(&r, &[0], &gvec, &u),
                &format!("membership of {u} in {n}, seed {seed}"),
            )?;
            memberships += 1;
        }
        let s = random::module(&mut g, &r);
        let small = random::ideal_gens(&mut g, &r, 3, 2);
        let c = ClosureOp::module_closure(&s)
            .map_err(e)?
            .compute(&Submodule::ideal(&r, &small).map_err(e)?)
            .map_err(e)?;
        for d in 0..=6 {
            let (_, oracle) = closure_component(&s, &small, d);
            let (_, engine) = component(&r, &[0], c.gens(), d);
            ensure(
                engine.rank() == oracle.rank() && engine.vectors().all(|v| oracle.contains(v)),
                &format!("closure degree {d}, seed {seed}, S = {s}"),
            )?;
            components += 1;
        }
    }
    Ok(format!("{memberships} memberships and {components} closure components agree"))
}

fn triviality_sample(r: &QuotientRing, seed: u64) -> Vec<Submodule> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    (0..20)
        .map(|_| Submodule::ideal(r, &random::ideal_gens(&mut g, r, 3, 3)).unwrap())
        .collect()
}

fn regular_triviality() -> Outcome {
    let mut count = 0;
    for names in [&["x", "y"][..], &["x", "y", "z"][..]] {
        let r = QuotientRing::standard(names, Field::Rationals);
        let sample = triviality_sample(&r, names.len() as u64);
        let k = FPModule::residue_field(&r);
        let mut ops = vec![
            ClosureOp::module_closure(&FPModule::free(&r, vec![0])).map_err(e)?,
            ClosureOp::module_closure(&FPModule::free(&r, vec![0, 1])).map_err(e)?,
        ];
        // the syzygy at the dimension is free; earlier ones are not
        let syz = k.syzygy(names.len()).map_err(e)?;
        ensure(syz.relations().iter().all(|v| syz.is_zero_elem(v)), "top syzygy of k is not free")?;
        ops.push(ClosureOp::module_closure(&syz).map_err(e)?);
        for cl in &ops {
            let out = is_trivial_on_sample(cl, &sample).map_err(e)?;
            ensure(out.holds, &format!("{cl} over {names:?}: {out}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} closures trivial on 20 ideals each"))
}

fn conic_nontriviality() -> Outcome {
    let r = common::conic();
    let syz = FPModule::residue_field(&r).syzygy(2).map_err(e)?;
    let cl = ClosureOp::module_closure(&syz).map_err(e)?;
    let sample: Vec<Submodule> = [
        &["a"][..],
        &["a", "c"][..],
        &["a^2", "a*b", "b*c", "c^2"][..],
        &["a^2", "c^2"][..],
    ]
    .iter()
    .map(|g| Submodule::ideal(&r, &polys(&r, g)).unwrap())
    .collect();
    let out = is_trivial_on_sample(&cl, &sample).map_err(e)?;
    ensure(!out.holds, "closure trivial on the sample")?;
    Ok(format!(
        "syz^2(k) has {} generators; witness {} ({})",
        syz.ngens(),
        out.witness.map_or("none".into(), |w| w.to_string()),
        out.note
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, Duration, fn() -> Outcome)> = vec![
        (1, Duration::from_secs(5), conic_pair),
        (2, Duration::from_secs(5), hypersurface_pairs),
        (3, Duration::from_secs(10), s2_examples),
        (4, Duration::from_secs(1), obstruction),
        (5, Duration::from_secs(30), colon_suite),
        (6, Duration::from_secs(10), phantom_chain),
        (7, Duration::from_secs(120), property_suite),
        (8, Duration::from_secs(120), oracle_equivalence),
        (9, Duration::from_secs(30), regular_triviality),
        (10, Duration::from_secs(60), conic_nontriviality),
    ];
    let mut failures = 0;
    for (n, limit, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("too slow; {d}")),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {n}: {} ({:.2}s / {}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
