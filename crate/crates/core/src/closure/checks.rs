//! Instance-level checkers for closure axioms and colon-capturing.
//!
//! Each checker either confirms a property on the given data or returns an
//! element witnessing its failure. None of them proves anything beyond the
//! instance.

use std::fmt;

use super::Closure;
use crate::error::{Error, Result};
use crate::fpmod::{ModuleMap, Submodule};
use crate::gb::FreeElem;
use crate::polyarith::Polynomial;
use crate::ring::{ParameterSequence, QuotientRing};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub holds: bool,
    pub witness: Option<FreeElem>,
    pub note: String,
}

impl CheckOutcome {
    fn pass(note: impl Into<String>) -> Self {
        CheckOutcome {
            holds: true,
            witness: None,
            note: note.into(),
        }
    }

    fn fail(witness: FreeElem, note: impl Into<String>) -> Self {
        CheckOutcome {
            holds: false,
            witness: Some(witness),
            note: note.into(),
        }
    }

    /// `lhs ⊆ rhs`, with the first generator of `lhs` outside `rhs` as witness.
    fn inclusion(lhs: &Submodule, rhs: &Submodule, note: impl Into<String>) -> Self {
        match rhs.missing_from(lhs) {
            None => Self::pass(note),
            Some(w) => Self::fail(w, note),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "holds-on-instance" } else { "fails-with-witness" };
        write!(f, "{verdict}")?;
        if let Some(w) = &self.witness {
            write!(f, " {w}")?;
        }
        if !self.note.is_empty() {
            write!(f, " [{}]", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColonVariant {
    /// `(x_1..x_k) : x_(k+1) ⊆ (x_1..x_k)^cl`.
    Plain,
    /// `(x_1^t, x_2..x_k)^cl : x_1^a ⊆ (x_1^(t-a), x_2..x_k)^cl`, `a < t`.
    StrongA { t: u32, a: u32 },
    /// `(x_1..x_k)^cl : x_(k+1) ⊆ (x_1..x_k)^cl`.
    StrongB,
}

/// Extension, idempotence and order preservation for `small ⊆ large`.
pub fn check_closure_axioms(cl: &dyn Closure, small: &Submodule, large: &Submodule) -> Result<CheckOutcome> {
    if !small.is_subset_of(large) {
        return Err(Error::Precondition("first submodule must lie in the second".into()));
    }
    let c_small = cl.close(small)?;
    if let Some(w) = c_small.missing_from(small) {
        return Ok(CheckOutcome::fail(w, "extension"));
    }
    let cc = cl.close(&c_small)?;
    if let Some(w) = c_small.missing_from(&cc) {
        return Ok(CheckOutcome::fail(w, "idempotence"));
    }
    let c_large = cl.close(large)?;
    if let Some(w) = c_large.missing_from(&c_small) {
        return Ok(CheckOutcome::fail(w, "order preservation"));
    }
    Ok(CheckOutcome::pass("extension, idempotence, order preservation"))
}

/// `f(N^cl_M) ⊆ f(N)^cl_W`.
pub fn check_functoriality(cl: &dyn Closure, f: &ModuleMap, n: &Submodule) -> Result<CheckOutcome> {
    if !n.module().same(f.source()) {
        return Err(Error::Context("submodule does not live in the map's source".into()));
    }
    let lhs = f.image_of(&cl.close(n)?);
    let rhs = cl.close(&f.image_of(n))?;
    Ok(CheckOutcome::inclusion(&lhs, &rhs, "functoriality"))
}

/// When `N` is closed in `M`, `0` is closed in `M/N`. Holds vacuously when
/// `N` is not closed.
pub fn check_semi_residuality(cl: &dyn Closure, n: &Submodule) -> Result<CheckOutcome> {
    let c = cl.close(n)?;
    if c.missing_from(n).is_some() {
        return Ok(CheckOutcome::pass("vacuous: submodule is not closed"));
    }
    let q = n.quotient_module()?;
    let zero = Submodule::zero(&q);
    let c0 = cl.close(&zero)?;
    match c0.gens().iter().find(|g| !q.is_zero_elem(g)) {
        None => Ok(CheckOutcome::pass("semi-residuality")),
        Some(w) => Ok(CheckOutcome::fail(w.clone(), "semi-residuality")),
    }
}

/// The maximal ideal is closed in the ring.
pub fn check_faithfulness(cl: &dyn Closure, ring: &QuotientRing) -> Result<CheckOutcome> {
    let m = Submodule::ideal(ring, &ring.variables())?;
    let c = cl.close(&m)?;
    Ok(CheckOutcome::inclusion(&c, &m, "faithfulness"))
}

fn prefix_ideal(ring: &QuotientRing, xs: &[Polynomial]) -> Result<Submodule> {
    Submodule::ideal(ring, xs)
}

/// Colon-capturing for every prefix of `xs`, on ideals of the ring.
pub fn check_colon_capturing(
    cl: &dyn Closure,
    xs: &ParameterSequence,
    variant: &ColonVariant,
) -> Result<CheckOutcome> {
    xs.require_verified()?;
    let ring = xs.ring();
    let x = xs.elems();
    match variant {
        ColonVariant::Plain | ColonVariant::StrongB => {
            for k in 0..x.len() {
                let base = prefix_ideal(ring, &x[..k])?;
                let closed = cl.close(&base)?;
                let colon = match variant {
                    ColonVariant::Plain => base.colon(&x[k])?,
                    _ => closed.colon(&x[k])?,
                };
                if let Some(w) = closed.missing_from(&colon) {
                    return Ok(CheckOutcome::fail(w, format!("prefix length {k}")));
                }
            }
            Ok(CheckOutcome::pass(format!("{variant:?}")))
        }
        ColonVariant::StrongA { t, a } => {
            if a >= t {
                return Err(Error::Precondition(format!("need a < t, got a = {a}, t = {t}")));
            }
            for k in 1..=x.len() {
                let mut lhs_gens = vec![x[0].pow(*t)];
                lhs_gens.extend(x[1..k].iter().cloned());
                let mut rhs_gens = vec![x[0].pow(t - a)];
                rhs_gens.extend(x[1..k].iter().cloned());
                let lhs = cl.close(&prefix_ideal(ring, &lhs_gens)?)?.colon(&x[0].pow(*a))?;
                let rhs = cl.close(&prefix_ideal(ring, &rhs_gens)?)?;
                if let Some(w) = rhs.missing_from(&lhs) {
                    return Ok(CheckOutcome::fail(w, format!("prefix length {k}, t = {t}, a = {a}")));
                }
            }
            Ok(CheckOutcome::pass(format!("StrongA t = {t}, a = {a}")))
        }
    }
}

/// `(Rv)^cl_M ∩ ker f ⊆ (Jv)^cl_M` where `J` is generated by all but the last
/// element of `xs`, `f: M -> R/J` is surjective and `f(v) = x_last + J`.
pub fn check_generalized_colon_capturing(
    cl: &dyn Closure,
    xs: &ParameterSequence,
    f: &ModuleMap,
    v: &FreeElem,
) -> Result<CheckOutcome> {
    xs.require_verified()?;
    let ring = xs.ring();
    let Some((last, j)) = xs.elems().split_last() else {
        return Err(Error::Precondition("empty parameter sequence".into()));
    };
    let m = f.source();
    let target = f.target();
    m.check_elem(v)?;
    if target.ngens() != 1 {
        return Err(Error::Precondition("target must be cyclic R/J".into()));
    }
    let rels: Vec<Polynomial> = target.relations().iter().map(|r| r.comp(0).clone()).collect();
    if !Submodule::ideal(ring, &rels)?.equals(&Submodule::ideal(ring, j)?) {
        return Err(Error::Precondition("target is not R/J".into()));
    }
    if !f.is_surjective() {
        return Err(Error::Precondition("map onto R/J is not surjective".into()));
    }
    let diff = f.apply(v).sub(&FreeElem::from_poly(last.clone()));
    if !target.is_zero_elem(&diff) {
        return Err(Error::Precondition("f(v) differs from the last parameter modulo J".into()));
    }
    let rv = cl.close(&Submodule::new(m, vec![v.clone()])?)?;
    let lhs = rv.intersect(&f.kernel()?)?;
    let jv = Submodule::new(m, j.iter().map(|x| v.scale(x)).collect())?;
    let rhs = cl.close(&jv)?;
    Ok(CheckOutcome::inclusion(&lhs, &rhs, "generalized colon-capturing"))
}

/// Smallest `t ≤ t_max` with `(x_1 ⋯ x_k)^t ∈ (x_1^(t+1), …, x_k^(t+1))^cl`.
/// Such a `t` rules the closure out as a Dietz closure.
pub fn dietz_obstruction(cl: &dyn Closure, xs: &ParameterSequence, t_max: u32) -> Result<Option<u32>> {
    xs.require_verified()?;
    let ring = xs.ring();
    let x = xs.elems();
    if x.is_empty() {
        return Ok(None);
    }
    let product = x.iter().skip(1).fold(x[0].clone(), |acc, y| &acc * y);
    for t in 1..=t_max {
        let powers: Vec<Polynomial> = x.iter().map(|y| y.pow(t + 1)).collect();
        let n = Submodule::ideal(ring, &powers)?;
        if cl.contains(&n, &FreeElem::from_poly(product.pow(t)))? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Whether `cl` leaves every sample submodule unchanged; on failure the note
/// names the index of the first nontrivial sample.
pub fn is_trivial_on_sample(cl: &dyn Closure, sample: &[Submodule]) -> Result<CheckOutcome> {
    for (i, n) in sample.iter().enumerate() {
        let c = cl.close(n)?;
        if let Some(w) = n.missing_from(&c) {
            return Ok(CheckOutcome::fail(w, format!("sample {i}: {n}")));
        }
    }
    Ok(CheckOutcome::pass(format!("{} samples", sample.len())))
}
