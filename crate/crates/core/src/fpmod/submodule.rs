use std::fmt;
use std::sync::{Arc, OnceLock};

use super::module::{minimal_generators, FPModule};
use crate::error::{Error, Result};
use crate::gb::{kernel_mod, FreeElem, GroebnerBasis, LiftBasis};
use crate::polyarith::Polynomial;
use crate::ring::QuotientRing;

/// Witness that `u` lies in a submodule: `u = sum coeffs_j g_j + sum relation_coeffs_k r_k`
/// modulo the defining ideal, over generators `g_j` and module relations `r_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipCertificate {
    pub coeffs: Vec<Polynomial>,
    pub relation_coeffs: Vec<Polynomial>,
}

impl MembershipCertificate {
    /// `sum coeffs_j g_j + sum relation_coeffs_k r_k`.
    pub fn recombine(&self, sub: &Submodule) -> FreeElem {
        let m = sub.module();
        let mut acc = m.zero_elem();
        for (c, g) in self.coeffs.iter().zip(sub.gens()) {
            acc = acc.add(&g.scale(c));
        }
        for (c, r) in self.relation_coeffs.iter().zip(m.relations()) {
            acc = acc.add(&r.scale(c));
        }
        acc
    }
}

/// A submodule of a finitely presented module, given by generators.
#[derive(Clone, Debug)]
pub struct Submodule {
    module: FPModule,
    gens: Vec<FreeElem>,
    basis: Arc<OnceLock<GroebnerBasis>>,
}

impl Submodule {
    pub fn new(module: &FPModule, gens: Vec<FreeElem>) -> Result<Submodule> {
        for g in &gens {
            module.check_elem(g)?;
        }
        let gens = gens
            .into_iter()
            .map(|g| module.ring().reduce_vec(&g))
            .filter(|g| !g.is_zero())
            .collect();
        Ok(Submodule {
            module: module.clone(),
            gens,
            basis: Arc::new(OnceLock::new()),
        })
    }

    pub fn zero(module: &FPModule) -> Submodule {
        Submodule::new(module, Vec::new()).expect("no generators")
    }

    pub fn whole(module: &FPModule) -> Submodule {
        Submodule::new(module, (0..module.ngens()).map(|i| module.gen(i)).collect()).expect("basis vectors")
    }

    /// The ideal `(gens)` as a submodule of the ring itself.
    pub fn ideal(ring: &QuotientRing, gens: &[Polynomial]) -> Result<Submodule> {
        Self::ideal_in(&FPModule::ring_module(ring), gens)
    }

    /// The ideal `(gens)` inside a given rank-one free module.
    pub fn ideal_in(module: &FPModule, gens: &[Polynomial]) -> Result<Submodule> {
        if module.ngens() != 1 {
            return Err(Error::Context("ideals live in a module with one generator".into()));
        }
        Submodule::new(module, gens.iter().cloned().map(FreeElem::from_poly).collect())
    }

    /// `I M` for the ideal generated by `ideal`.
    pub fn ideal_times(module: &FPModule, ideal: &[Polynomial]) -> Submodule {
        let gens = ideal
            .iter()
            .flat_map(|x| (0..module.ngens()).map(move |k| (x, k)))
            .map(|(x, k)| module.gen(k).scale(x))
            .collect();
        Submodule::new(module, gens).expect("built from basis vectors")
    }

    /// `m M`.
    pub fn max_ideal_times(module: &FPModule) -> Submodule {
        Self::ideal_times(module, &module.ring().variables())
    }

    pub fn module(&self) -> &FPModule {
        &self.module
    }

    pub fn ring(&self) -> &QuotientRing {
        self.module.ring()
    }

    pub fn gens(&self) -> &[FreeElem] {
        &self.gens
    }

    /// Generators of an ideal (rank-one ambient module).
    pub fn ideal_gens(&self) -> Vec<Polynomial> {
        self.gens.iter().map(|g| g.comp(0).clone()).collect()
    }

    /// Groebner basis of generators, relations and `I P^n`.
    pub fn basis(&self) -> &GroebnerBasis {
        self.basis.get_or_init(|| {
            let gens = self.module.relations_with_quotient(&self.gens);
            GroebnerBasis::compute(
                self.ring().poly(),
                self.module.ngens(),
                &gens,
                &self.ring().module_order(),
            )
            .expect("generators share the module's rank")
        })
    }

    pub fn contains(&self, u: &FreeElem) -> bool {
        self.module.check_elem(u).is_ok() && self.basis().contains(u)
    }

    /// Canonical representative of `u` modulo this submodule.
    pub fn normal_form(&self, u: &FreeElem) -> FreeElem {
        self.basis().normal_form(u)
    }

    /// Membership with an explicit certificate.
    pub fn lift(&self, u: &FreeElem) -> Result<Option<MembershipCertificate>> {
        self.module.check_elem(u)?;
        if !self.basis().contains(u) {
            return Ok(None);
        }
        let mut images = self.gens.clone();
        images.extend(self.module.relations().iter().cloned());
        let lb = LiftBasis::new(
            self.ring().poly(),
            self.ring().order(),
            self.module.ngens(),
            &images,
            &[],
            &self.ring().ideal_gens(),
        )?;
        let Some(coeffs) = lb.lift(u) else {
            return Ok(None);
        };
        let coeffs: Vec<Polynomial> = coeffs.iter().map(|c| self.ring().reduce(c)).collect();
        let (a, b) = coeffs.split_at(self.gens.len());
        Ok(Some(MembershipCertificate {
            coeffs: a.to_vec(),
            relation_coeffs: b.to_vec(),
        }))
    }

    /// First generator of `other` outside `self`, if any.
    pub fn missing_from(&self, other: &Submodule) -> Option<FreeElem> {
        other.gens.iter().find(|g| !self.contains(g)).cloned()
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        other.missing_from(self).is_none()
    }

    pub fn equals(&self, other: &Submodule) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    fn check_same_module(&self, other: &Submodule) -> Result<()> {
        if self.module.same(&other.module) {
            Ok(())
        } else {
            Err(Error::Context("submodules of different modules".into()))
        }
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same_module(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::new(&self.module, gens)
    }

    pub fn with(&self, extra: &[FreeElem]) -> Result<Submodule> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Submodule::new(&self.module, gens)
    }

    /// `N ∩ N'` as the kernel of `M -> M/N ⊕ M/N'`.
    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same_module(other)?;
        let m = &self.module;
        let n = m.ngens();
        let poly = self.ring().poly();
        let images: Vec<FreeElem> = (0..n).map(|k| m.gen(k).concat(&m.gen(k))).collect();
        let mut rels: Vec<FreeElem> = m.relations_with_quotient(&self.gens).iter().map(|g| g.embed(0, n)).collect();
        rels.extend(m.relations_with_quotient(&other.gens).iter().map(|g| g.embed(n, 0)));
        let ker = kernel_mod(poly, self.ring().order(), 2 * n, &images, &rels, &[])?;
        Ok(Submodule::new(m, ker)?.trimmed())
    }

    /// `I N` for an ideal given by generators.
    pub fn scale_by_ideal(&self, ideal: &[Polynomial]) -> Submodule {
        let gens = ideal
            .iter()
            .flat_map(|x| self.gens.iter().map(move |g| g.scale(x)))
            .collect();
        Submodule::new(&self.module, gens).expect("same module")
    }

    /// `(N :_M x) = {m in M : x m in N}`.
    pub fn colon(&self, x: &Polynomial) -> Result<Submodule> {
        let m = &self.module;
        let n = m.ngens();
        let images: Vec<FreeElem> = (0..n).map(|k| m.gen(k).scale(x)).collect();
        let rels = m.relations_with_quotient(&self.gens);
        let ker = kernel_mod(self.ring().poly(), self.ring().order(), n, &images, &rels, &[])?;
        Ok(Submodule::new(m, ker)?.trimmed())
    }

    /// `(N :_R M') = {r : r M' ⊆ N}` for another submodule `M'`, as an ideal of `R`.
    pub fn annihilator_colon(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same_module(other)?;
        let ring = self.ring();
        let n = self.module.ngens();
        let r = other.gens.len();
        if r == 0 {
            return Submodule::ideal(ring, &[ring.one()]);
        }
        let image = other.gens.iter().fold(FreeElem::zero(ring.poly(), 0), |acc, g| acc.concat(g));
        let base = self.module.relations_with_quotient(&self.gens);
        let rels: Vec<FreeElem> = (0..r)
            .flat_map(|j| base.iter().map(move |g| g.embed(j * n, (r - j - 1) * n)))
            .collect();
        let ker = kernel_mod(ring.poly(), ring.order(), r * n, &[image], &rels, &[])?;
        let gens: Vec<Polynomial> = ker.into_iter().map(|v| v.comp(0).clone()).collect();
        Ok(Submodule::ideal(ring, &gens)?.trimmed())
    }

    /// The same submodule with a minimal homogeneous generating set, when
    /// generators are homogeneous; otherwise unchanged.
    pub fn trimmed(&self) -> Submodule {
        let m = &self.module;
        if !self.gens.iter().all(|g| m.is_homogeneous_elem(g)) {
            return self.clone();
        }
        let gens = minimal_generators(m.ring(), m.ngens(), m.degrees(), &self.gens, m.relations());
        Submodule {
            module: m.clone(),
            gens,
            basis: self.basis.clone(),
        }
    }

    /// Canonical generator list: reduced Groebner basis elements outside the
    /// relation module, for display and comparison.
    pub fn canonical_gens(&self) -> Vec<FreeElem> {
        let zero = self.module.zero_basis();
        self.basis()
            .generators()
            .into_iter()
            .filter(|g| !zero.contains(g))
            .collect()
    }

    /// `M/N`.
    pub fn quotient_module(&self) -> Result<FPModule> {
        self.module.quotient(self)
    }

    /// The submodule as a module in its own right, presented by the
    /// relations among its generators.
    pub fn as_module(&self) -> Result<FPModule> {
        let m = &self.module;
        let gens = self.trimmed();
        let mut degrees = Vec::new();
        for g in gens.gens() {
            degrees.push(m.degree_of(g).ok_or_else(|| {
                Error::Inhomogeneous(format!("submodule generator {g} is not homogeneous"))
            })?);
        }
        let rels = m.relations_with_quotient(&[]);
        let ker = kernel_mod(self.ring().poly(), self.ring().order(), m.ngens(), gens.gens(), &rels, &[])?;
        Ok(FPModule::new(self.ring(), degrees, ker)?.trim_relations())
    }

    /// Transfers generators into a module with the same number of generators
    /// (for instance a quotient of the ambient module).
    pub fn transfer(&self, target: &FPModule) -> Result<Submodule> {
        Submodule::new(target, self.gens.clone())
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = if self.module.ngens() == 1 {
            self.gens.iter().map(|g| g.comp(0).to_string()).collect()
        } else {
            self.gens.iter().map(|g| g.to_string()).collect()
        };
        write!(f, "({})", parts.join(", "))
    }
}

/// A homomorphism of finitely presented modules, given by the images of the
/// source generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FPModule,
    target: FPModule,
    matrix: Vec<FreeElem>,
}

impl ModuleMap {
    /// Checks that every source relation maps to zero in the target.
    pub fn new(source: &FPModule, target: &FPModule, matrix: Vec<FreeElem>) -> Result<ModuleMap> {
        source.ring().check_same(target.ring())?;
        if matrix.len() != source.ngens() {
            return Err(Error::Context(format!(
                "{} images for a module with {} generators",
                matrix.len(),
                source.ngens()
            )));
        }
        for v in &matrix {
            target.check_elem(v)?;
        }
        let map = ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix,
        };
        for r in source.relations() {
            let img = map.apply(r);
            if !target.is_zero_elem(&img) {
                return Err(Error::Precondition(format!(
                    "map is not well defined: relation {r} maps to nonzero {img}"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(module: &FPModule) -> ModuleMap {
        ModuleMap {
            source: module.clone(),
            target: module.clone(),
            matrix: (0..module.ngens()).map(|i| module.gen(i)).collect(),
        }
    }

    /// `M -> M/N`.
    pub fn quotient_map(n: &Submodule) -> Result<ModuleMap> {
        let m = n.module();
        let q = m.quotient(n)?;
        let matrix = (0..m.ngens()).map(|i| q.gen(i)).collect();
        Ok(ModuleMap {
            source: m.clone(),
            target: q,
            matrix,
        })
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn matrix(&self) -> &[FreeElem] {
        &self.matrix
    }

    pub fn apply(&self, u: &FreeElem) -> FreeElem {
        let mut acc = self.target.zero_elem();
        for (c, img) in u.comps().iter().zip(&self.matrix) {
            if !c.is_zero() {
                acc = acc.add(&img.scale(c));
            }
        }
        self.target.ring().reduce_vec(&acc)
    }

    pub fn image(&self) -> Submodule {
        Submodule::new(&self.target, self.matrix.clone()).expect("checked at construction")
    }

    pub fn image_of(&self, n: &Submodule) -> Submodule {
        Submodule::new(&self.target, n.gens().iter().map(|g| self.apply(g)).collect())
            .expect("images live in the target")
    }

    pub fn kernel(&self) -> Result<Submodule> {
        let t = &self.target;
        let rels = t.relations_with_quotient(&[]);
        let ker = kernel_mod(
            t.ring().poly(),
            t.ring().order(),
            t.ngens(),
            &self.matrix,
            &rels,
            &[],
        )?;
        if self.matrix.is_empty() {
            return Ok(Submodule::zero(&self.source));
        }
        Ok(Submodule::new(&self.source, ker)?.trimmed())
    }

    pub fn is_surjective(&self) -> bool {
        let img = self.image();
        (0..self.target.ngens()).all(|i| img.contains(&self.target.gen(i)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if !self.target.same(&other.source) {
            return Err(Error::Context("maps do not compose".into()));
        }
        Ok(ModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: self.matrix.iter().map(|v| other.apply(v)).collect(),
        })
    }
}
