use std::collections::HashSet;
use std::sync::Arc;

use super::vector::{FreeElem, ModuleOrder, SVec, Term};
use crate::error::{Error, Result};
use crate::polyarith::{Field, Monomial, PolyRing};

/// A reduced Groebner basis of a submodule of `P^rank`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    rank: usize,
    order: ModuleOrder,
    elems: Vec<SVec>,
}

struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Monomial,
}

fn find_reducer<'a>(t: &Term, basis: &'a [SVec]) -> Option<&'a SVec> {
    basis.iter().find(|g| {
        let l = g.lead().expect("basis elements are nonzero");
        l.pos == t.pos && l.mon.divides(&t.mon)
    })
}

/// Full normal form of `f` with respect to `basis` (elements need not be monic).
pub(crate) fn reduce(f: SVec, basis: &[SVec], ord: &ModuleOrder, field: &Field) -> SVec {
    let mut rem: Vec<Term> = Vec::new();
    let mut p = f;
    while let Some(lt) = p.terms.last() {
        match find_reducer(lt, basis) {
            Some(g) => {
                let gl = g.lead().expect("nonzero");
                let m = gl.mon.quotient_of(&lt.mon).expect("divides");
                let c = field.div(&lt.coeff, &gl.coeff);
                p = p.sub_scaled(&c, &m, g, ord, field);
            }
            None => rem.push(p.terms.pop().expect("nonempty")),
        }
    }
    rem.reverse();
    SVec { terms: rem }
}

fn s_vector(f: &SVec, g: &SVec, ord: &ModuleOrder, field: &Field) -> SVec {
    let (lf, lg) = (f.lead().expect("nonzero"), g.lead().expect("nonzero"));
    let lcm = lf.mon.lcm(&lg.mon);
    let mf = lf.mon.quotient_of(&lcm).expect("lcm");
    let mg = lg.mon.quotient_of(&lcm).expect("lcm");
    let zero = SVec::default();
    let fm = zero.sub_scaled(&field.neg(&field.inv(&lf.coeff)), &mf, f, ord, field);
    fm.sub_scaled(&field.inv(&lg.coeff), &mg, g, ord, field)
}

/// Buchberger's algorithm with normal pair selection, the product criterion
/// (for ideals) and the chain criterion; returns the reduced basis sorted by
/// decreasing leading term.
pub(crate) fn groebner(gens: Vec<SVec>, ord: &ModuleOrder, field: &Field, rank: usize) -> Vec<SVec> {
    let mut basis: Vec<SVec> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |h: SVec, basis: &mut Vec<SVec>, pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        let lh = h.lead().expect("nonzero").clone();
        for (i, g) in basis.iter().enumerate() {
            let lg = g.lead().expect("nonzero");
            if lg.pos != lh.pos {
                continue;
            }
            pairs.push(Pair {
                i,
                j: k,
                pos: lh.pos,
                lcm: lg.mon.lcm(&lh.mon),
            });
            pending.insert((i, k));
        }
        basis.push(h);
    };

    for g in gens {
        let mut h = reduce(g, &basis, ord, field);
        if !h.is_zero() {
            h.make_monic(field);
            add(h, &mut basis, &mut pairs, &mut pending);
        }
    }

    while !pairs.is_empty() {
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            if ord.cmp_terms(a.pos, &a.lcm, b.pos, &b.lcm) == std::cmp::Ordering::Less {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));
        let (li, lj) = (
            basis[pair.i].lead().expect("nonzero"),
            basis[pair.j].lead().expect("nonzero"),
        );
        if rank == 1 && li.mon.is_coprime(&lj.mon) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            if k == pair.i || k == pair.j {
                return false;
            }
            let lk = basis[k].lead().expect("nonzero");
            let key = |a: usize, b: usize| (a.min(b), a.max(b));
            lk.pos == pair.pos
                && lk.mon.divides(&pair.lcm)
                && !pending.contains(&key(pair.i, k))
                && !pending.contains(&key(pair.j, k))
        });
        if chain {
            continue;
        }
        let s = s_vector(&basis[pair.i], &basis[pair.j], ord, field);
        let mut h = reduce(s, &basis, ord, field);
        if !h.is_zero() {
            h.make_monic(field);
            add(h, &mut basis, &mut pairs, &mut pending);
        }
    }

    // minimalize, then interreduce tails
    let mut keep: Vec<SVec> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = g.lead().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let lh = h.lead().expect("nonzero");
            l != k
                && lh.pos == lg.pos
                && lh.mon.divides(&lg.mon)
                && (lh.mon != lg.mon || l < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let mut g = keep[k].clone();
        let lead = g.terms.pop().expect("nonzero");
        let others: Vec<SVec> = keep
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, h)| h.clone())
            .collect();
        let mut tail = reduce(g, &others, ord, field);
        tail.terms.push(lead);
        tail.make_monic(field);
        reduced.push(tail);
    }
    reduced.sort_by(|a, b| {
        let (la, lb) = (a.lead().expect("nonzero"), b.lead().expect("nonzero"));
        ord.cmp_terms(lb.pos, &lb.mon, la.pos, &la.mon)
    });
    reduced
}

impl GroebnerBasis {
    /// Reduced Groebner basis of the submodule of `P^rank` generated by `gens`.
    pub fn compute(
        ring: &Arc<PolyRing>,
        rank: usize,
        gens: &[FreeElem],
        order: &ModuleOrder,
    ) -> Result<GroebnerBasis> {
        if let Some(bad) = gens.iter().find(|g| g.rank() != rank) {
            return Err(Error::Context(format!(
                "generator of rank {} in a free module of rank {rank}",
                bad.rank()
            )));
        }
        let svecs = gens.iter().map(|g| SVec::from_free(g, order)).collect();
        let elems = groebner(svecs, order, ring.field(), rank);
        Ok(GroebnerBasis {
            ring: ring.clone(),
            rank,
            order: order.clone(),
            elems,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub(crate) fn svecs(&self) -> &[SVec] {
        &self.elems
    }

    pub fn generators(&self) -> Vec<FreeElem> {
        self.elems
            .iter()
            .map(|g| g.to_free(&self.ring, self.rank))
            .collect()
    }

    /// Leading terms `(position, monomial)` of the basis elements.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems
            .iter()
            .map(|g| {
                let l = g.lead().expect("nonzero");
                (l.pos, l.mon.clone())
            })
            .collect()
    }

    pub fn normal_form(&self, f: &FreeElem) -> FreeElem {
        let r = reduce(
            SVec::from_free(f, &self.order),
            &self.elems,
            &self.order,
            self.ring.field(),
        );
        r.to_free(&self.ring, self.rank)
    }

    pub fn contains(&self, f: &FreeElem) -> bool {
        reduce(
            SVec::from_free(f, &self.order),
            &self.elems,
            &self.order,
            self.ring.field(),
        )
        .is_zero()
    }

    /// Buchberger's criterion: every S-vector reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let field = self.ring.field();
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                let (a, b) = (&self.elems[i], &self.elems[j]);
                if a.lead().expect("nonzero").pos != b.lead().expect("nonzero").pos {
                    continue;
                }
                let s = s_vector(a, b, &self.order, field);
                if !reduce(s, &self.elems, &self.order, field).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.order == other.order && self.elems == other.elems
    }
}

/// Reduced Groebner basis of `gens` (all of one rank, at least one generator).
pub fn buchberger(gens: &[FreeElem], ord: &ModuleOrder) -> Result<GroebnerBasis> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Domain("buchberger needs at least one generator to fix the free module".into()))?;
    GroebnerBasis::compute(first.ring(), first.rank(), gens, ord)
}
