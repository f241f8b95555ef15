//! Closure operations on submodules of finitely presented modules.
//!
//! A module closure `cl_S` puts `u` in `N^cl` when `s ⊗ u` lies in the image
//! of `S ⊗ N -> S ⊗ M` for every `s` in `S`. Since `s -> s ⊗ u` is linear,
//! it is enough to test the module generators of `S`: if `s_i ⊗ u` is in the
//! image for each `i`, so is `(sum r_i s_i) ⊗ u = sum r_i (s_i ⊗ u)`.

mod checks;
mod integral;
mod phantom;

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fpmod::{FPModule, MembershipCertificate, Submodule};
use crate::gb::{kernel_mod, FreeElem};
use crate::polyarith::Monomial;

pub use checks::{
    check_closure_axioms, check_colon_capturing, check_faithfulness, check_functoriality,
    check_generalized_colon_capturing, check_semi_residuality, dietz_obstruction,
    is_trivial_on_sample, CheckOutcome, ColonVariant,
};
pub use integral::{in_newton_polyhedron, integral_closure_generators, newton_certificate};
pub use phantom::{phantom_test, PhantomInstance};

/// Anything that closes submodules. Implemented by [`ClosureOp`]; tests
/// supply deliberately broken implementations as negative controls.
pub trait Closure {
    /// Generators of `N^cl` inside `N`'s ambient module.
    fn close(&self, n: &Submodule) -> Result<Submodule>;

    fn contains(&self, n: &Submodule, u: &FreeElem) -> Result<bool> {
        Ok(self.close(n)?.contains(u))
    }

    fn name(&self) -> String;
}

/// A closure operation value.
#[derive(Clone, Debug)]
pub enum ClosureOp {
    Trivial,
    ModuleClosure(FPModule),
    Intersection(Vec<ClosureOp>),
    MonomialIntegralClosure,
}

/// Evidence attached to a closure membership answer.
#[derive(Clone, Debug)]
pub enum ClosureCertificate {
    /// Plain membership of `u` in `N`.
    Plain(MembershipCertificate),
    /// One certificate per generator `s_i` of `S`, expressing `s_i ⊗ u`
    /// through the generators `s_k ⊗ g_j` (index `k * |gens N| + j`).
    PerGenerator(Vec<MembershipCertificate>),
    /// For each term of `u`, convex weights on the generators of `N`
    /// whose combination lies below the term's exponent.
    Newton(Vec<Vec<BigRational>>),
    All(Vec<ClosureCertificate>),
}

#[derive(Clone, Debug)]
pub struct ClosureMembership {
    pub member: bool,
    pub certificate: Option<ClosureCertificate>,
    /// For a failed module-closure test, the first generator of `S` that fails.
    pub failing_generator: Option<usize>,
}

impl ClosureOp {
    /// `cl_S`; `S` must be nonzero.
    pub fn module_closure(s: &FPModule) -> Result<ClosureOp> {
        if s.is_zero_module() {
            return Err(Error::Precondition("module closure of the zero module".into()));
        }
        Ok(ClosureOp::ModuleClosure(s.clone()))
    }

    pub fn intersect(a: &ClosureOp, b: &ClosureOp) -> ClosureOp {
        ClosureOp::Intersection(vec![a.clone(), b.clone()])
    }

    /// `cl_(S ⊕ T)`.
    pub fn direct_sum_closure(s: &FPModule, t: &FPModule) -> Result<ClosureOp> {
        Self::module_closure(&s.direct_sum(t)?)
    }

    /// Membership with certificates.
    pub fn membership(&self, n: &Submodule, u: &FreeElem) -> Result<ClosureMembership> {
        n.module().check_elem(u)?;
        match self {
            ClosureOp::Trivial => {
                let cert = n.lift(u)?;
                Ok(ClosureMembership {
                    member: cert.is_some(),
                    certificate: cert.map(ClosureCertificate::Plain),
                    failing_generator: None,
                })
            }
            ClosureOp::ModuleClosure(s) => module_closure_membership(s, n, u),
            ClosureOp::Intersection(parts) => {
                let mut certs = Vec::new();
                for p in parts {
                    let r = p.membership(n, u)?;
                    if !r.member {
                        return Ok(r);
                    }
                    certs.extend(r.certificate);
                }
                Ok(ClosureMembership {
                    member: true,
                    certificate: Some(ClosureCertificate::All(certs)),
                    failing_generator: None,
                })
            }
            ClosureOp::MonomialIntegralClosure => {
                let gens = monomial_ideal_data(n)?;
                let mut certs = Vec::new();
                for (m, _) in u.comp(0).terms() {
                    match newton_certificate(&gens, m) {
                        Some(c) => certs.push(c),
                        None => {
                            return Ok(ClosureMembership {
                                member: false,
                                certificate: None,
                                failing_generator: None,
                            })
                        }
                    }
                }
                Ok(ClosureMembership {
                    member: true,
                    certificate: Some(ClosureCertificate::Newton(certs)),
                    failing_generator: None,
                })
            }
        }
    }

    /// `N^cl` in `N`'s ambient module, computed exactly.
    pub fn compute(&self, n: &Submodule) -> Result<Submodule> {
        match self {
            ClosureOp::Trivial => Ok(n.trimmed()),
            ClosureOp::ModuleClosure(s) => module_closure_compute(s, n),
            ClosureOp::Intersection(parts) => {
                let mut acc: Option<Submodule> = None;
                for p in parts {
                    let c = p.compute(n)?;
                    acc = Some(match acc {
                        None => c,
                        Some(a) => a.intersect(&c)?,
                    });
                }
                acc.ok_or_else(|| Error::Domain("intersection of no closures".into()))
            }
            ClosureOp::MonomialIntegralClosure => {
                let gens = monomial_ideal_data(n)?;
                let ring = n.ring();
                let polys: Vec<_> = integral_closure_generators(&gens)
                    .into_iter()
                    .map(|m| crate::polyarith::Polynomial::monomial(ring.poly(), m, ring.field().one()))
                    .collect();
                Submodule::ideal_in(n.module(), &polys)
            }
        }
    }
}

impl Closure for ClosureOp {
    fn close(&self, n: &Submodule) -> Result<Submodule> {
        self.compute(n)
    }

    fn contains(&self, n: &Submodule, u: &FreeElem) -> Result<bool> {
        Ok(self.membership(n, u)?.member)
    }

    fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ClosureOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureOp::Trivial => write!(f, "trivial"),
            ClosureOp::ModuleClosure(s) => write!(f, "module_closure({s})"),
            ClosureOp::Intersection(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "intersect({})", names.join(", "))
            }
            ClosureOp::MonomialIntegralClosure => write!(f, "integral_closure"),
        }
    }
}

fn monomial_ideal_data(n: &Submodule) -> Result<Vec<Monomial>> {
    let ring = n.ring();
    if !ring.is_polynomial_ring() {
        return Err(Error::Unsupported(
            "monomial integral closure needs a polynomial ring".into(),
        ));
    }
    let m = n.module();
    if m.ngens() != 1 || !m.relations().is_empty() {
        return Err(Error::Unsupported(
            "monomial integral closure applies to ideals of the ring".into(),
        ));
    }
    n.gens()
        .iter()
        .map(|g| {
            let p = g.comp(0);
            if p.is_monomial() {
                Ok(p.terms()[0].0.clone())
            } else {
                Err(Error::Unsupported(format!("{p} is not a monomial")))
            }
        })
        .collect()
}

/// The submodule `im(S ⊗ N)` of `S ⊗ M`, with generator `s_k ⊗ g_j` at index
/// `k * |gens N| + j`.
fn tensor_image(s: &FPModule, n: &Submodule) -> Result<(FPModule, Submodule)> {
    let m = n.module();
    let sm = s.tensor(m)?;
    let gens: Vec<FreeElem> = (0..s.ngens())
        .flat_map(|k| n.gens().iter().map(move |g| (k, g)))
        .map(|(k, g)| s.tensor_gen_elem(k, m, g))
        .collect();
    let image = Submodule::new(&sm, gens)?;
    Ok((sm, image))
}

fn module_closure_membership(s: &FPModule, n: &Submodule, u: &FreeElem) -> Result<ClosureMembership> {
    s.ring().check_same(n.ring())?;
    let m = n.module();
    let (_, image) = tensor_image(s, n)?;
    let mut certs = Vec::with_capacity(s.ngens());
    for i in 0..s.ngens() {
        match image.lift(&s.tensor_gen_elem(i, m, u))? {
            Some(c) => certs.push(c),
            None => {
                return Ok(ClosureMembership {
                    member: false,
                    certificate: None,
                    failing_generator: Some(i),
                })
            }
        }
    }
    Ok(ClosureMembership {
        member: true,
        certificate: Some(ClosureCertificate::PerGenerator(certs)),
        failing_generator: None,
    })
}

/// Kernel of `M -> ⊕_i (S ⊗ M)/im(S ⊗ N)`, `u -> (s_i ⊗ u)_i`.
fn module_closure_compute(s: &FPModule, n: &Submodule) -> Result<Submodule> {
    s.ring().check_same(n.ring())?;
    let m = n.module();
    let ring = m.ring();
    let (sm, image) = tensor_image(s, n)?;
    let block = sm.ngens();
    let ns = s.ngens();
    let base = sm.relations_with_quotient(image.gens());
    let mut rels = Vec::with_capacity(base.len() * ns);
    for i in 0..ns {
        for g in &base {
            rels.push(g.embed(i * block, (ns - i - 1) * block));
        }
    }
    let images: Vec<FreeElem> = (0..m.ngens())
        .map(|k| {
            (0..ns).fold(FreeElem::zero(ring.poly(), 0), |acc, i| {
                acc.concat(&s.tensor_gen_elem(i, m, &m.gen(k)))
            })
        })
        .collect();
    if images.is_empty() {
        return Ok(n.clone());
    }
    let ker = kernel_mod(ring.poly(), ring.order(), ns * block, &images, &rels, &[])?;
    Ok(Submodule::new(m, ker)?.with(n.gens())?.trimmed())
}
