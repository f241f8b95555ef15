use std::sync::Arc;

use super::buchberger::GroebnerBasis;
use super::vector::{FreeElem, ModuleOrder};
use crate::error::{Error, Result};
use crate::polyarith::{Monomial, MonomialOrder, PolyRing, Polynomial};

/// Groebner basis of the graph of a map `P^a -> P^b / T`, used for lifting
/// elements through the map and for reading off its kernel.
///
/// The basis lives in `P^(b+a)` and is computed from `(image_k, e_k)`,
/// `(t_j, 0)` and `(q e_l, 0)` for `q` in the quotient ideal, under an order
/// that eliminates the first `b` positions.
#[derive(Clone, Debug)]
pub struct LiftBasis {
    target_rank: usize,
    source_rank: usize,
    gb: GroebnerBasis,
}

impl LiftBasis {
    pub fn new(
        ring: &Arc<PolyRing>,
        order: &MonomialOrder,
        target_rank: usize,
        images: &[FreeElem],
        relations: &[FreeElem],
        quotient: &[Polynomial],
    ) -> Result<LiftBasis> {
        let a = images.len();
        let b = target_rank;
        for v in images.iter().chain(relations) {
            if v.rank() != b {
                return Err(Error::Context(format!(
                    "vector of rank {} where rank {b} was expected",
                    v.rank()
                )));
            }
        }
        let mut gens = Vec::with_capacity(a + relations.len() + quotient.len() * b);
        for (k, img) in images.iter().enumerate() {
            gens.push(img.concat(&FreeElem::unit(ring, a, k)));
        }
        for t in relations {
            gens.push(t.embed(0, a));
        }
        for q in quotient {
            for l in 0..b {
                gens.push(FreeElem::single(q.clone(), b + a, l));
            }
        }
        gens.retain(|g| !g.is_zero());
        let ord = ModuleOrder::new(order.clone()).eliminating(b);
        let gb = GroebnerBasis::compute(ring, b + a, &gens, &ord)?;
        Ok(LiftBasis {
            target_rank: b,
            source_rank: a,
            gb,
        })
    }

    /// Coefficients `c` with `sum c_k image_k = u` modulo the relations, if any exist.
    pub fn lift(&self, u: &FreeElem) -> Option<Vec<Polynomial>> {
        let r = self.gb.normal_form(&u.embed(0, self.source_rank));
        if r.comps()[..self.target_rank].iter().any(|p| !p.is_zero()) {
            return None;
        }
        Some(
            r.comps()[self.target_rank..]
                .iter()
                .map(|p| p.neg())
                .collect(),
        )
    }

    pub fn contains(&self, u: &FreeElem) -> bool {
        self.lift(u).is_some()
    }

    /// Generators of the kernel of the map, as vectors in `P^a`.
    pub fn kernel(&self) -> Vec<FreeElem> {
        let b = self.target_rank;
        self.gb
            .svecs()
            .iter()
            .filter(|g| g.lead().expect("nonzero").pos >= b)
            .map(|g| {
                g.to_free(self.gb.ring(), b + self.source_rank)
                    .slice(b, b + self.source_rank)
            })
            .collect()
    }
}

/// Generators of `{c in P^a : sum c_k images[k] in span(relations) + quotient * P^b}`.
pub fn kernel_mod(
    ring: &Arc<PolyRing>,
    order: &MonomialOrder,
    target_rank: usize,
    images: &[FreeElem],
    relations: &[FreeElem],
    quotient: &[Polynomial],
) -> Result<Vec<FreeElem>> {
    if images.is_empty() {
        return Ok(Vec::new());
    }
    Ok(LiftBasis::new(ring, order, target_rank, images, relations, quotient)?.kernel())
}

/// Syzygies of `gens` modulo the ideal generated by `quotient`.
pub fn syzygy_module(
    gens: &[FreeElem],
    quotient: &[Polynomial],
    order: &MonomialOrder,
) -> Result<Vec<FreeElem>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    kernel_mod(first.ring(), order, first.rank(), gens, &[], quotient)
}

fn ideal_ring(i: &[Polynomial], j: &[Polynomial]) -> Result<Arc<PolyRing>> {
    i.iter()
        .chain(j)
        .next()
        .map(|p| p.ring().clone())
        .ok_or_else(|| Error::Domain("ideal operation on two empty generator lists".into()))
}

/// Generators of `I ∩ J` modulo `quotient`.
pub fn ideal_intersect(
    i: &[Polynomial],
    j: &[Polynomial],
    quotient: &[Polynomial],
    order: &MonomialOrder,
) -> Result<Vec<Polynomial>> {
    let ring = ideal_ring(i, j)?;
    let one = Polynomial::one(&ring);
    let image = FreeElem::new(&ring, vec![one.clone(), one])?;
    let mut rels: Vec<FreeElem> = i.iter().map(|g| FreeElem::single(g.clone(), 2, 0)).collect();
    rels.extend(j.iter().map(|g| FreeElem::single(g.clone(), 2, 1)));
    Ok(kernel_mod(&ring, order, 2, &[image], &rels, quotient)?
        .into_iter()
        .map(|v| v.comp(0).clone())
        .collect())
}

/// Generators of `(I : J) = {r : rJ ⊆ I}` modulo `quotient`.
pub fn ideal_colon(
    i: &[Polynomial],
    j: &[Polynomial],
    quotient: &[Polynomial],
    order: &MonomialOrder,
) -> Result<Vec<Polynomial>> {
    let ring = ideal_ring(i, j)?;
    if j.is_empty() {
        return Ok(vec![Polynomial::one(&ring)]);
    }
    let b = j.len();
    let image = FreeElem::new(&ring, j.to_vec())?;
    let rels: Vec<FreeElem> = (0..b)
        .flat_map(|l| i.iter().map(move |g| FreeElem::single(g.clone(), b, l)))
        .collect();
    Ok(kernel_mod(&ring, order, b, &[image], &rels, quotient)?
        .into_iter()
        .map(|v| v.comp(0).clone())
        .collect())
}

fn image_degrees(images: &[Polynomial]) -> Result<Vec<i64>> {
    images
        .iter()
        .map(|m| {
            if !m.is_monomial() {
                return Err(Error::Unsupported(format!(
                    "ring map image {m} is not a monomial; only toric maps are supported"
                )));
            }
            let d = m.terms()[0].0.total_degree() as i64;
            if d == 0 {
                return Err(Error::Domain(format!("ring map image {m} has degree 0")));
            }
            Ok(d)
        })
        .collect()
}

/// Relations among monomials `gens` of the target ring viewed as a module
/// over the subring generated by the monomials `images`.
///
/// The subring is presented by `source` (one variable per image) and the
/// result lives in `source^gens.len()`. Elimination happens in
/// `target ⊗ source` with the target variables in the first block.
pub fn monomial_module_relations(
    source: &Arc<PolyRing>,
    images: &[Polynomial],
    gens: &[Polynomial],
) -> Result<Vec<FreeElem>> {
    if images.len() != source.nvars() {
        return Err(Error::Context(format!(
            "{} images for a ring with {} variables",
            images.len(),
            source.nvars()
        )));
    }
    let weights = image_degrees(images)?;
    let Some(target) = images.first().map(|p| p.ring().clone()) else {
        return Err(Error::Domain("monomial subring needs at least one generator".into()));
    };
    if gens.iter().any(|g| !g.is_monomial()) {
        return Err(Error::Unsupported(
            "module generators must be monomials of the target ring".into(),
        ));
    }
    let m = target.nvars();
    let n = source.nvars();
    let mut names: Vec<String> = target.vars().to_vec();
    names.extend(source.vars().iter().cloned());
    let big = PolyRing::new(names, target.field().clone());
    let lift_target = |p: &Polynomial| -> Polynomial {
        Polynomial::from_terms(
            &big,
            p.terms().iter().map(|(mon, c)| {
                let mut e = mon.exponents().to_vec();
                e.extend(std::iter::repeat_n(0, n));
                (Monomial::new(e), c.clone())
            }),
        )
    };
    let r = gens.len();
    let mut vecs = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        let mut comps = vec![Polynomial::zero(&big); 1 + r];
        comps[0] = lift_target(g);
        comps[1 + j] = Polynomial::one(&big);
        vecs.push(FreeElem::new(&big, comps)?);
    }
    for (i, img) in images.iter().enumerate() {
        let a = Polynomial::var(&big, m + i);
        vecs.push(FreeElem::single(&a - &lift_target(img), 1 + r, 0));
    }
    let order = MonomialOrder::Block {
        split: m,
        first: Box::new(MonomialOrder::DegRevLex),
        second: Box::new(MonomialOrder::WeightedDegRevLex(weights)),
    };
    let ord = ModuleOrder::new(order).eliminating(1);
    let gb = GroebnerBasis::compute(&big, 1 + r, &vecs, &ord)?;
    let mut out = Vec::new();
    for g in gb.generators() {
        if !g.comp(0).is_zero() {
            continue;
        }
        let x_free = g
            .comps()
            .iter()
            .all(|p| p.terms().iter().all(|(mon, _)| mon.exponents()[..m].iter().all(|&e| e == 0)));
        if !x_free {
            continue;
        }
        let comps = g.comps()[1..]
            .iter()
            .map(|p| {
                Polynomial::from_terms(
                    source,
                    p.terms()
                        .iter()
                        .map(|(mon, c)| (Monomial::new(mon.exponents()[m..].to_vec()), c.clone())),
                )
            })
            .collect();
        out.push(FreeElem::new(source, comps)?);
    }
    Ok(out)
}

/// Generators of the kernel of `source -> target`, `var_i -> images[i]`,
/// for monomial images.
pub fn kernel_of_ring_map(source: &Arc<PolyRing>, images: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let Some(first) = images.first() else {
        return Ok(Vec::new());
    };
    let one = Polynomial::one(first.ring());
    Ok(monomial_module_relations(source, images, &[one])?
        .into_iter()
        .map(|v| v.comp(0).clone())
        .collect())
}
