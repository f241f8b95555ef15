//! Graded quotient rings `R = P/I` with weighted gradings.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gb::{kernel_of_ring_map, FreeElem, GroebnerBasis, ModuleOrder};
use crate::polyarith::{Field, MonomialOrder, PolyRing, Polynomial};

/// Whether the ring is known to be a domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainStatus {
    /// Polynomial rings and monomial subrings.
    ByConstruction,
    /// User-entered quotient; primality is an unchecked assumption.
    Assumed,
}

#[derive(Debug)]
struct RingInner {
    poly: Arc<PolyRing>,
    weights: Vec<i64>,
    order: MonomialOrder,
    relations: Vec<Polynomial>,
    gb: GroebnerBasis,
    dim: usize,
    domain: DomainStatus,
    subring_images: Option<Vec<Polynomial>>,
}

/// A graded quotient `P/I` of a weighted polynomial ring by a homogeneous ideal.
///
/// Elements are handled as polynomials of `P`; [`QuotientRing::reduce`] gives
/// the canonical normal form. The maximal ideal `m` is generated by the variables.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    inner: Arc<RingInner>,
}

/// Krull dimension of `P/I` from the leading monomials of a Groebner basis of
/// `I`: the largest set of variables containing the support of no leading monomial.
fn dimension_from_leads(nvars: usize, leads: &[Vec<usize>]) -> usize {
    if leads.iter().any(|s| s.is_empty()) {
        return 0;
    }
    let mut best = 0;
    for mask in 0u64..(1u64 << nvars) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        if leads.iter().all(|s| s.iter().any(|&i| mask & (1 << i) == 0)) {
            best = size;
        }
    }
    best
}

impl QuotientRing {
    /// `poly / (gens)` graded by `weights`; the generators must be homogeneous.
    pub fn new(
        poly: &Arc<PolyRing>,
        weights: Vec<i64>,
        order: MonomialOrder,
        gens: Vec<Polynomial>,
    ) -> Result<QuotientRing> {
        Self::build(poly, weights, order, gens, DomainStatus::Assumed, None)
    }

    pub fn polynomial(poly: &Arc<PolyRing>, weights: Vec<i64>, order: MonomialOrder) -> Result<QuotientRing> {
        Self::build(poly, weights, order, Vec::new(), DomainStatus::ByConstruction, None)
    }

    /// Standard-graded polynomial ring with degrevlex.
    pub fn standard(vars: &[&str], field: Field) -> QuotientRing {
        let poly = PolyRing::new(vars.iter().map(|s| s.to_string()).collect(), field);
        let n = poly.nvars();
        Self::polynomial(&poly, vec![1; n], MonomialOrder::DegRevLex).expect("valid standard ring")
    }

    /// Presents the subring of `images[0].ring()` generated by the monomials
    /// `images`, one new variable (named by `names`) per image, graded by the
    /// degrees of the images.
    pub fn presented_subring(names: &[&str], images: &[Polynomial]) -> Result<QuotientRing> {
        let target = images
            .first()
            .ok_or_else(|| Error::Domain("a subring needs at least one generator".into()))?
            .ring()
            .clone();
        if names.len() != images.len() {
            return Err(Error::Context(format!(
                "{} variable names for {} images",
                names.len(),
                images.len()
            )));
        }
        let poly = PolyRing::new(
            names.iter().map(|s| s.to_string()).collect(),
            target.field().clone(),
        );
        let rels = kernel_of_ring_map(&poly, images)?;
        let weights: Vec<i64> = images
            .iter()
            .map(|m| m.terms()[0].0.total_degree() as i64)
            .collect();
        let order = MonomialOrder::WeightedDegRevLex(weights.clone());
        Self::build(
            &poly,
            weights,
            order,
            rels,
            DomainStatus::ByConstruction,
            Some(images.to_vec()),
        )
    }

    fn build(
        poly: &Arc<PolyRing>,
        weights: Vec<i64>,
        order: MonomialOrder,
        gens: Vec<Polynomial>,
        domain: DomainStatus,
        subring_images: Option<Vec<Polynomial>>,
    ) -> Result<QuotientRing> {
        let n = poly.nvars();
        if weights.len() != n || weights.iter().any(|&w| w <= 0) {
            return Err(Error::Domain(format!(
                "grading needs {n} positive weights, got {weights:?}"
            )));
        }
        if !order.validate(n) {
            return Err(Error::Domain(format!("monomial order {order:?} is invalid on {n} variables")));
        }
        for g in &gens {
            if !crate::polyarith::same_ring(g.ring(), poly) {
                return Err(Error::Context(format!("relation {g} lives in another ring")));
            }
            if !g.is_homogeneous(&weights) {
                return Err(Error::Inhomogeneous(format!(
                    "relation {g} is not homogeneous for weights {weights:?}"
                )));
            }
        }
        let relations: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let elems: Vec<FreeElem> = relations.iter().cloned().map(FreeElem::from_poly).collect();
        let gb = GroebnerBasis::compute(poly, 1, &elems, &ModuleOrder::new(order.clone()))?;
        let leads: Vec<Vec<usize>> = gb.leading_terms().iter().map(|(_, m)| m.support()).collect();
        if leads.iter().any(|s| s.is_empty()) {
            return Err(Error::Domain("the defining ideal is the unit ideal".into()));
        }
        let dim = dimension_from_leads(n, &leads);
        Ok(QuotientRing {
            inner: Arc::new(RingInner {
                poly: poly.clone(),
                weights,
                order,
                relations,
                gb,
                dim,
                domain,
                subring_images,
            }),
        })
    }

    pub fn poly(&self) -> &Arc<PolyRing> {
        &self.inner.poly
    }

    pub fn field(&self) -> &Field {
        self.inner.poly.field()
    }

    pub fn nvars(&self) -> usize {
        self.inner.poly.nvars()
    }

    pub fn vars(&self) -> &[String] {
        self.inner.poly.vars()
    }

    pub fn weights(&self) -> &[i64] {
        &self.inner.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.inner.order
    }

    pub fn module_order(&self) -> ModuleOrder {
        ModuleOrder::new(self.inner.order.clone())
    }

    /// The defining relations as entered.
    pub fn relations(&self) -> &[Polynomial] {
        &self.inner.relations
    }

    pub fn ideal_gb(&self) -> &GroebnerBasis {
        &self.inner.gb
    }

    /// Reduced Groebner basis of the defining ideal.
    pub fn ideal_gens(&self) -> Vec<Polynomial> {
        self.inner
            .gb
            .generators()
            .into_iter()
            .map(|v| v.comp(0).clone())
            .collect()
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.inner.gb.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn domain_status(&self) -> DomainStatus {
        self.inner.domain
    }

    /// The monomials this ring presents, when built by [`QuotientRing::presented_subring`].
    pub fn subring_images(&self) -> Option<&[Polynomial]> {
        self.inner.subring_images.as_deref()
    }

    pub fn same(&self, other: &QuotientRing) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (crate::polyarith::same_ring(self.poly(), other.poly())
                && self.inner.weights == other.inner.weights
                && self.inner.gb == other.inner.gb)
    }

    pub fn check_same(&self, other: &QuotientRing) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::Context("objects live over different rings".into()))
        }
    }

    /// Canonical normal form modulo the defining ideal.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if self.is_polynomial_ring() {
            return p.clone();
        }
        self.inner
            .gb
            .normal_form(&FreeElem::from_poly(p.clone()))
            .comp(0)
            .clone()
    }

    pub fn reduce_vec(&self, v: &FreeElem) -> FreeElem {
        v.map_comps(|p| self.reduce(p))
    }

    pub fn is_zero(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(self.poly(), text)
    }

    pub fn elem(&self, p: &Polynomial) -> Result<RingElem> {
        if !crate::polyarith::same_ring(p.ring(), self.poly()) {
            return Err(Error::Context(format!("{p} is not an element of this ring")));
        }
        Ok(RingElem {
            ring: self.clone(),
            rep: self.reduce(p),
        })
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.poly(), i)
    }

    /// Generators of the homogeneous maximal ideal.
    pub fn variables(&self) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.poly())
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.poly())
    }

    /// Weighted degree of a nonzero homogeneous polynomial.
    pub fn degree(&self, p: &Polynomial) -> Option<i64> {
        p.degree(self.weights())
    }

    pub fn is_homogeneous(&self, p: &Polynomial) -> bool {
        p.is_homogeneous(self.weights())
    }

    /// Krull dimension of `R/(extra)`.
    pub fn dim_modulo(&self, extra: &[Polynomial]) -> Result<usize> {
        let mut gens: Vec<FreeElem> = self
            .ideal_gens()
            .into_iter()
            .map(FreeElem::from_poly)
            .collect();
        gens.extend(extra.iter().filter(|p| !p.is_zero()).cloned().map(FreeElem::from_poly));
        if gens.is_empty() {
            return Ok(self.nvars());
        }
        let gb = GroebnerBasis::compute(self.poly(), 1, &gens, &self.module_order())?;
        let leads: Vec<Vec<usize>> = gb.leading_terms().iter().map(|(_, m)| m.support()).collect();
        Ok(dimension_from_leads(self.nvars(), &leads))
    }

    /// True iff the elements are homogeneous of positive degree and
    /// `dim R/(xs) = dim R - |xs|`.
    pub fn is_partial_sop(&self, xs: &[Polynomial]) -> bool {
        if xs
            .iter()
            .any(|x| !matches!(self.degree(&self.reduce(x)), Some(d) if d > 0))
        {
            return false;
        }
        if xs.len() > self.dim() {
            return false;
        }
        matches!(self.dim_modulo(xs), Ok(d) if d == self.dim() - xs.len())
    }

    pub fn descriptor(&self) -> Value {
        let order = match self.order() {
            MonomialOrder::Lex => "lex".to_string(),
            MonomialOrder::DegRevLex => "degrevlex".to_string(),
            MonomialOrder::WeightedDegRevLex(w) => format!("wdegrevlex{w:?}"),
            MonomialOrder::Block { .. } => "block".to_string(),
        };
        json!({
            "vars": self.vars(),
            "weights": self.weights(),
            "field": self.field().to_string(),
            "order": order,
            "relations": self.ideal_gens().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "dim": self.dim(),
            "domain": match self.domain_status() {
                DomainStatus::ByConstruction => "by construction",
                DomainStatus::Assumed => "assumed",
            },
        })
    }
}

impl fmt::Display for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field(), self.vars().join(","))?;
        let rels = self.ideal_gens();
        if !rels.is_empty() {
            let parts: Vec<String> = rels.iter().map(|p| p.to_string()).collect();
            write!(f, "/({})", parts.join(", "))?;
        }
        Ok(())
    }
}

/// An element of a quotient ring, stored in normal form.
#[derive(Clone, Debug)]
pub struct RingElem {
    ring: QuotientRing,
    rep: Polynomial,
}

impl RingElem {
    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn rep(&self) -> &Polynomial {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn wrap(&self, p: Polynomial) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            rep: self.ring.reduce(&p),
        }
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        self.wrap(&self.rep + &other.rep)
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.wrap(&self.rep - &other.rep)
    }

    pub fn mul(&self, other: &RingElem) -> RingElem {
        self.wrap(&self.rep * &other.rep)
    }

    pub fn neg(&self) -> RingElem {
        self.wrap(self.rep.neg())
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.rep == other.rep
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// A sequence of homogeneous elements, with a record of whether it was
/// verified to be part of a system of parameters.
#[derive(Clone, Debug)]
pub struct ParameterSequence {
    ring: QuotientRing,
    elems: Vec<Polynomial>,
    verified: bool,
}

impl ParameterSequence {
    pub fn new(ring: &QuotientRing, elems: Vec<Polynomial>) -> ParameterSequence {
        let verified = ring.is_partial_sop(&elems);
        ParameterSequence {
            ring: ring.clone(),
            elems,
            verified,
        }
    }

    /// Parses each element in the ring's syntax.
    pub fn parse(ring: &QuotientRing, elems: &[&str]) -> Result<ParameterSequence> {
        let elems = elems.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ring, elems))
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn elems(&self) -> &[Polynomial] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            let parts: Vec<String> = self.elems.iter().map(|p| p.to_string()).collect();
            Err(Error::Precondition(format!(
                "({}) is not part of a system of parameters",
                parts.join(", ")
            )))
        }
    }
}
