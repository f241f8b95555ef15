use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use super::submodule::Submodule;
use crate::error::{Error, Result};
use crate::gb::{kernel_mod, monomial_module_relations, FreeElem, GroebnerBasis};
use crate::polyarith::{same_ring, Polynomial};
use crate::ring::QuotientRing;

#[derive(Debug)]
struct ModInner {
    ring: QuotientRing,
    degrees: Vec<i64>,
    relations: Vec<FreeElem>,
    zero_basis: OnceLock<GroebnerBasis>,
    // differentials d_1, d_2, ... of the minimal resolution, computed on demand
    resolution: Mutex<Option<super::resolution::ResolutionState>>,
}

/// A finitely presented graded module `coker(R^r -> R^n)` over a quotient ring.
///
/// Elements are vectors in `P^n` over the ambient polynomial ring; two vectors
/// name the same element when their difference lies in the span of the
/// relation columns plus `I P^n`. Generator `i` has degree `degrees[i]`.
#[derive(Clone, Debug)]
pub struct FPModule {
    inner: Arc<ModInner>,
}

impl FPModule {
    /// Module with the given generator degrees and relation columns; every
    /// column must be homogeneous for the ring's weights shifted by the degrees.
    pub fn new(ring: &QuotientRing, degrees: Vec<i64>, relations: Vec<FreeElem>) -> Result<FPModule> {
        let n = degrees.len();
        let mut rels = Vec::with_capacity(relations.len());
        for r in relations {
            if r.rank() != n {
                return Err(Error::Context(format!(
                    "relation of rank {} for a module with {n} generators",
                    r.rank()
                )));
            }
            if !same_ring(r.ring(), ring.poly()) {
                return Err(Error::Context("relation from another ring".into()));
            }
            let r = ring.reduce_vec(&r);
            if r.is_zero() {
                continue;
            }
            if !r.is_homogeneous(ring.weights(), &degrees) {
                return Err(Error::Inhomogeneous(format!(
                    "relation {r} is not homogeneous for generator degrees {degrees:?}"
                )));
            }
            rels.push(r);
        }
        Ok(Self::from_parts(ring, degrees, rels))
    }

    fn from_parts(ring: &QuotientRing, degrees: Vec<i64>, relations: Vec<FreeElem>) -> FPModule {
        FPModule {
            inner: Arc::new(ModInner {
                ring: ring.clone(),
                degrees,
                relations,
                zero_basis: OnceLock::new(),
                resolution: Mutex::new(None),
            }),
        }
    }

    pub fn free(ring: &QuotientRing, degrees: Vec<i64>) -> FPModule {
        Self::from_parts(ring, degrees, Vec::new())
    }

    /// The ring as a module over itself.
    pub fn ring_module(ring: &QuotientRing) -> FPModule {
        Self::free(ring, vec![0])
    }

    /// The zero module.
    pub fn zero(ring: &QuotientRing) -> FPModule {
        Self::free(ring, Vec::new())
    }

    /// The ideal generated by `gens`, presented by its syzygies.
    pub fn ideal(ring: &QuotientRing, gens: &[Polynomial]) -> Result<FPModule> {
        let mut degrees = Vec::with_capacity(gens.len());
        for g in gens {
            let g = ring.reduce(g);
            match ring.degree(&g) {
                Some(d) => degrees.push(d),
                None if g.is_zero() => {
                    return Err(Error::Domain("ideal generator is zero in the ring".into()))
                }
                None => return Err(Error::Inhomogeneous(format!("ideal generator {g} is not homogeneous"))),
            }
        }
        if gens.is_empty() {
            return Ok(Self::zero(ring));
        }
        let cols = [FreeElem::new(ring.poly(), gens.to_vec())?];
        let images: Vec<FreeElem> = (0..gens.len())
            .map(|k| FreeElem::from_poly(cols[0].comp(k).clone()))
            .collect();
        let syz = kernel_mod(ring.poly(), ring.order(), 1, &images, &[], &ring.ideal_gens())?;
        let m = Self::new(ring, degrees, syz)?;
        Ok(m.trim_relations())
    }

    /// `R/(gens)`.
    pub fn cyclic(ring: &QuotientRing, gens: &[Polynomial]) -> Result<FPModule> {
        Self::new(ring, vec![0], gens.iter().cloned().map(FreeElem::from_poly).collect())
    }

    /// The residue field `R/m`.
    pub fn residue_field(ring: &QuotientRing) -> FPModule {
        Self::cyclic(ring, &ring.variables()).expect("variables are homogeneous")
    }

    /// The module over a monomial subring spanned by monomials `gens` of the
    /// ambient ring the subring was built from (for instance `1` and `x^2 y^2`).
    pub fn monomial_module(ring: &QuotientRing, gens: &[Polynomial]) -> Result<FPModule> {
        let images = ring.subring_images().ok_or_else(|| {
            Error::Precondition("monomial modules need a ring presented as a monomial subring".into())
        })?;
        let degrees = gens
            .iter()
            .map(|g| {
                if !g.is_monomial() {
                    return Err(Error::Unsupported(format!("{g} is not a monomial")));
                }
                Ok(g.terms()[0].0.total_degree() as i64)
            })
            .collect::<Result<Vec<_>>>()?;
        let rels = monomial_module_relations(ring.poly(), images, gens)?;
        Ok(Self::new(ring, degrees, rels)?.trim_relations())
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.inner.ring
    }

    pub fn ngens(&self) -> usize {
        self.inner.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.inner.degrees
    }

    pub fn relations(&self) -> &[FreeElem] {
        &self.inner.relations
    }

    /// Identical presentations over the same ring.
    pub fn same(&self, other: &FPModule) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.ring().same(other.ring())
                && self.degrees() == other.degrees()
                && self.relations() == other.relations())
    }

    pub(super) fn resolution_state(&self) -> &Mutex<Option<super::resolution::ResolutionState>> {
        &self.inner.resolution
    }

    /// Basis vector `e_i`.
    pub fn gen(&self, i: usize) -> FreeElem {
        FreeElem::unit(self.ring().poly(), self.ngens(), i)
    }

    pub fn zero_elem(&self) -> FreeElem {
        FreeElem::zero(self.ring().poly(), self.ngens())
    }

    /// Vector with the given coordinates.
    pub fn elem(&self, comps: Vec<Polynomial>) -> Result<FreeElem> {
        if comps.len() != self.ngens() {
            return Err(Error::Context(format!(
                "element with {} coordinates in a module with {} generators",
                comps.len(),
                self.ngens()
            )));
        }
        FreeElem::new(self.ring().poly(), comps)
    }

    pub fn check_elem(&self, u: &FreeElem) -> Result<()> {
        if u.rank() != self.ngens() || !same_ring(u.ring(), self.ring().poly()) {
            return Err(Error::Context(format!(
                "element {u} does not belong to a module with {} generators",
                self.ngens()
            )));
        }
        Ok(())
    }

    /// Degree of a nonzero homogeneous element.
    pub fn degree_of(&self, u: &FreeElem) -> Option<i64> {
        self.ring().reduce_vec(u).degree(self.ring().weights(), self.degrees())
    }

    pub fn is_homogeneous_elem(&self, u: &FreeElem) -> bool {
        self.ring()
            .reduce_vec(u)
            .is_homogeneous(self.ring().weights(), self.degrees())
    }

    /// Groebner basis of the relations together with `I P^n`.
    pub fn zero_basis(&self) -> &GroebnerBasis {
        self.inner.zero_basis.get_or_init(|| {
            let gens = self.relations_with_quotient(&[]);
            GroebnerBasis::compute(self.ring().poly(), self.ngens(), &gens, &self.ring().module_order())
                .expect("relations share the module's rank")
        })
    }

    /// `extra`, the relation columns and `q e_l` for generators `q` of the defining ideal.
    pub(crate) fn relations_with_quotient(&self, extra: &[FreeElem]) -> Vec<FreeElem> {
        let n = self.ngens();
        let mut gens: Vec<FreeElem> = extra.to_vec();
        gens.extend(self.relations().iter().cloned());
        for q in self.ring().ideal_gens() {
            for l in 0..n {
                gens.push(FreeElem::single(q.clone(), n, l));
            }
        }
        gens.retain(|g| !g.is_zero());
        gens
    }

    /// Canonical representative of an element.
    pub fn normal_form(&self, u: &FreeElem) -> FreeElem {
        if self.relations().is_empty() {
            return self.ring().reduce_vec(u);
        }
        self.zero_basis().normal_form(u)
    }

    pub fn is_zero_elem(&self, u: &FreeElem) -> bool {
        self.normal_form(u).is_zero()
    }

    pub fn is_zero_module(&self) -> bool {
        (0..self.ngens()).all(|i| self.is_zero_elem(&self.gen(i)))
    }

    /// `M/N` for a submodule `N` of this module.
    pub fn quotient(&self, n: &Submodule) -> Result<FPModule> {
        if !n.module().same(self) {
            return Err(Error::Context("quotient by a submodule of another module".into()));
        }
        let mut rels = self.relations().to_vec();
        rels.extend(n.gens().iter().cloned());
        Self::new(self.ring(), self.degrees().to_vec(), rels)
    }

    /// `A ⊕ B`.
    pub fn direct_sum(&self, other: &FPModule) -> Result<FPModule> {
        self.ring().check_same(other.ring())?;
        let (na, nb) = (self.ngens(), other.ngens());
        let mut degrees = self.degrees().to_vec();
        degrees.extend_from_slice(other.degrees());
        let mut rels: Vec<FreeElem> = self.relations().iter().map(|r| r.embed(0, nb)).collect();
        rels.extend(other.relations().iter().map(|r| r.embed(na, 0)));
        Ok(Self::from_parts(self.ring(), degrees, rels))
    }

    pub fn direct_sum_all(ring: &QuotientRing, parts: &[FPModule]) -> Result<FPModule> {
        let mut acc = Self::zero(ring);
        for p in parts {
            acc = acc.direct_sum(p)?;
        }
        Ok(acc)
    }

    /// `A ⊗ B` with generator `e_i ⊗ f_j` at index `i * ngens(B) + j`.
    pub fn tensor(&self, other: &FPModule) -> Result<FPModule> {
        self.ring().check_same(other.ring())?;
        let poly = self.ring().poly();
        let (na, nb) = (self.ngens(), other.ngens());
        let mut degrees = Vec::with_capacity(na * nb);
        for da in self.degrees() {
            for db in other.degrees() {
                degrees.push(da + db);
            }
        }
        let mut rels = Vec::new();
        for r in self.relations() {
            for j in 0..nb {
                let mut comps = vec![Polynomial::zero(poly); na * nb];
                for i in 0..na {
                    comps[i * nb + j] = r.comp(i).clone();
                }
                rels.push(FreeElem::new(poly, comps)?);
            }
        }
        for s in other.relations() {
            for i in 0..na {
                let mut comps = vec![Polynomial::zero(poly); na * nb];
                for j in 0..nb {
                    comps[i * nb + j] = s.comp(j).clone();
                }
                rels.push(FreeElem::new(poly, comps)?);
            }
        }
        Ok(Self::from_parts(self.ring(), degrees, rels))
    }

    /// `e_i ⊗ u` inside `tensor(self, other)` for `u` an element of `other`.
    pub fn tensor_gen_elem(&self, i: usize, other: &FPModule, u: &FreeElem) -> FreeElem {
        let nb = other.ngens();
        FreeElem::zero(self.ring().poly(), i * nb)
            .concat(u)
            .concat(&FreeElem::zero(self.ring().poly(), (self.ngens() - i - 1) * nb))
    }

    /// `a ⊗ b` inside `tensor(self, other)`.
    pub fn tensor_elems(&self, a: &FreeElem, other: &FPModule, b: &FreeElem) -> FreeElem {
        let poly = self.ring().poly();
        let nb = other.ngens();
        let mut comps = vec![Polynomial::zero(poly); self.ngens() * nb];
        for i in 0..self.ngens() {
            for j in 0..nb {
                comps[i * nb + j] = a.comp(i) * b.comp(j);
            }
        }
        FreeElem::new(poly, comps).expect("same ring")
    }

    /// The same module with a greedily minimized set of relation columns.
    pub fn trim_relations(&self) -> FPModule {
        let rels = minimal_generators(self.ring(), self.ngens(), self.degrees(), self.relations(), &[]);
        Self::from_parts(self.ring(), self.degrees().to_vec(), rels)
    }

    /// Isomorphic module whose relation entries all lie in the maximal ideal
    /// and whose generators are minimal.
    pub fn minimal_presentation(&self) -> FPModule {
        let ring = self.ring();
        let field = ring.field();
        let mut degrees = self.degrees().to_vec();
        let mut rels: Vec<FreeElem> = self.relations().to_vec();
        loop {
            let pivot = rels.iter().enumerate().find_map(|(k, r)| {
                r.comps()
                    .iter()
                    .position(|p| !p.is_zero() && p.is_constant())
                    .map(|i| (k, i))
            });
            let Some((k, i)) = pivot else { break };
            let r = rels.swap_remove(k);
            let c = r.comp(i).constant_term();
            let cinv = field.inv(&c);
            rels = rels
                .into_iter()
                .map(|s| {
                    let factor = s.comp(i).scalar_mul(&cinv);
                    let s = if factor.is_zero() { s } else { s.sub(&r.scale(&factor)) };
                    let mut comps = s.into_comps();
                    comps.remove(i);
                    ring.reduce_vec(&FreeElem::new(ring.poly(), comps).expect("same ring"))
                })
                .filter(|s| !s.is_zero())
                .collect();
            degrees.remove(i);
        }
        let n = degrees.len();
        let rels = minimal_generators(ring, n, &degrees, &rels, &[]);
        Self::from_parts(ring, degrees, rels)
    }

    /// Same generator degrees and the same relation module modulo the defining ideal.
    pub fn same_presentation(&self, other: &FPModule) -> bool {
        self.ring().same(other.ring())
            && self.degrees() == other.degrees()
            && self.zero_basis() == other.zero_basis()
    }

    /// Minimal presentations agree in the sense of [`FPModule::same_presentation`].
    pub fn presentation_equivalent(&self, other: &FPModule) -> bool {
        self.minimal_presentation()
            .same_presentation(&other.minimal_presentation())
    }

    /// `dim_k M_d`, counted from standard monomials of the relation module.
    pub fn hilbert_function(&self, d: i64) -> usize {
        let weights = self.ring().weights();
        let leads = self.zero_basis().leading_terms();
        let mut count = 0;
        for (i, &di) in self.degrees().iter().enumerate() {
            let t = d - di;
            if t < 0 {
                continue;
            }
            let pos_leads: Vec<_> = leads.iter().filter(|(p, _)| *p == i).map(|(_, m)| m).collect();
            for_each_monomial(weights, t, &mut |e| {
                if !pos_leads.iter().any(|l| l.exponents().iter().zip(e).all(|(a, b)| a <= b)) {
                    count += 1;
                }
            });
        }
        count
    }

    pub fn descriptor(&self) -> Value {
        json!({
            "ngens": self.ngens(),
            "gen_degrees": self.degrees(),
            "relations": self
                .relations()
                .iter()
                .map(|r| r.comps().iter().map(|p| p.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "module generated in degrees {:?}", self.degrees())?;
        if self.relations().is_empty() {
            write!(f, ", free")
        } else {
            let cols: Vec<String> = self.relations().iter().map(|r| r.to_string()).collect();
            write!(f, ", relations {}", cols.join(" "))
        }
    }
}

/// Calls `f` on every exponent vector of weighted degree exactly `t`.
pub(crate) fn for_each_monomial(weights: &[i64], t: i64, f: &mut dyn FnMut(&[u32])) {
    fn rec(weights: &[i64], i: usize, left: i64, e: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if i == weights.len() {
            if left == 0 {
                f(e);
            }
            return;
        }
        let mut k = 0;
        while k as i64 * weights[i] <= left {
            e[i] = k;
            rec(weights, i + 1, left - k as i64 * weights[i], e, f);
            k += 1;
        }
        e[i] = 0;
    }
    let mut e = vec![0; weights.len()];
    rec(weights, 0, t, &mut e, f);
}

/// A minimal homogeneous generating set of the span of `vecs` modulo
/// `I P^n + span(base)`, chosen greedily by increasing degree.
pub(crate) fn minimal_generators(
    ring: &QuotientRing,
    n: usize,
    degrees: &[i64],
    vecs: &[FreeElem],
    base: &[FreeElem],
) -> Vec<FreeElem> {
    let mut items: Vec<(i64, usize, FreeElem)> = vecs
        .iter()
        .enumerate()
        .filter_map(|(k, v)| {
            let v = ring.reduce_vec(v);
            v.degree(ring.weights(), degrees).map(|d| (d, k, v))
        })
        .collect();
    items.sort_by_key(|(d, k, _)| (*d, *k));
    let mut kept: Vec<FreeElem> = Vec::new();
    let mut span: Vec<FreeElem> = base.to_vec();
    for q in ring.ideal_gens() {
        for l in 0..n {
            span.push(FreeElem::single(q.clone(), n, l));
        }
    }
    let mut basis = if span.is_empty() {
        None
    } else {
        Some(GroebnerBasis::compute(ring.poly(), n, &span, &ring.module_order()).expect("vectors share a rank"))
    };
    for (_, _, v) in items {
        let inside = match &basis {
            Some(gb) => gb.contains(&v),
            None => v.is_zero(),
        };
        if inside {
            continue;
        }
        span.push(v.clone());
        kept.push(v);
        basis = Some(
            GroebnerBasis::compute(ring.poly(), n, &span, &ring.module_order())
                .expect("vectors share a rank"),
        );
    }
    kept
}
