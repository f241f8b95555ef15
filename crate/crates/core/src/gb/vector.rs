use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyarith::{same_ring, Coeff, Field, Monomial, MonomialOrder, PolyRing, Polynomial};

/// How a monomial order is extended to terms `m * e_i` of a free module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extension {
    TermOverPosition,
    PositionOverTerm,
}

/// A term order on a free module `P^r`.
///
/// Positions are ranked `e_0 > e_1 > ...`. When `eliminate > 0`, every term in
/// a position below `eliminate` dominates every term in a later position, which
/// makes the order an elimination order for the leading block of components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleOrder {
    pub monomial: MonomialOrder,
    pub extension: Extension,
    pub eliminate: usize,
}

impl ModuleOrder {
    pub fn new(monomial: MonomialOrder) -> Self {
        ModuleOrder {
            monomial,
            extension: Extension::TermOverPosition,
            eliminate: 0,
        }
    }

    pub fn with_extension(mut self, extension: Extension) -> Self {
        self.extension = extension;
        self
    }

    pub fn eliminating(mut self, leading_positions: usize) -> Self {
        self.eliminate = leading_positions;
        self
    }

    pub fn cmp_terms(&self, pa: usize, ma: &Monomial, pb: usize, mb: &Monomial) -> Ordering {
        if self.eliminate > 0 {
            let (ba, bb) = (pa >= self.eliminate, pb >= self.eliminate);
            if ba != bb {
                return if ba { Ordering::Less } else { Ordering::Greater };
            }
        }
        match self.extension {
            Extension::TermOverPosition => self
                .monomial
                .cmp(ma, mb)
                .then_with(|| pb.cmp(&pa)),
            Extension::PositionOverTerm => pb
                .cmp(&pa)
                .then_with(|| self.monomial.cmp(ma, mb)),
        }
    }
}

/// An element of a free module `P^s` over the ambient polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeElem {
    ring: Arc<PolyRing>,
    comps: Vec<Polynomial>,
}

impl FreeElem {
    pub fn new(ring: &Arc<PolyRing>, comps: Vec<Polynomial>) -> Result<Self> {
        if comps.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::Context("vector component from another ring".into()));
        }
        Ok(FreeElem {
            ring: ring.clone(),
            comps,
        })
    }

    pub fn zero(ring: &Arc<PolyRing>, rank: usize) -> Self {
        FreeElem {
            ring: ring.clone(),
            comps: vec![Polynomial::zero(ring); rank],
        }
    }

    /// The basis vector `e_i` of `P^rank`.
    pub fn unit(ring: &Arc<PolyRing>, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.comps[i] = Polynomial::one(ring);
        v
    }

    pub fn from_poly(p: Polynomial) -> Self {
        FreeElem {
            ring: p.ring().clone(),
            comps: vec![p],
        }
    }

    /// `p * e_i` in `P^rank`.
    pub fn single(p: Polynomial, rank: usize, i: usize) -> Self {
        let ring = p.ring().clone();
        let mut v = Self::zero(&ring, rank);
        v.comps[i] = p;
        v
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub fn into_comps(self) -> Vec<Polynomial> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    fn check(&self, other: &FreeElem) -> Result<()> {
        if self.rank() != other.rank() || !same_ring(&self.ring, &other.ring) {
            return Err(Error::Context(format!(
                "free module elements of rank {} and {}",
                self.rank(),
                other.rank()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FreeElem) -> Result<FreeElem> {
        self.check(other)?;
        Ok(FreeElem {
            ring: self.ring.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn add(&self, other: &FreeElem) -> FreeElem {
        self.try_add(other).expect("free module elements must match")
    }

    pub fn sub(&self, other: &FreeElem) -> FreeElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FreeElem {
        FreeElem {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn scale(&self, f: &Polynomial) -> FreeElem {
        FreeElem {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|p| p * f).collect(),
        }
    }

    /// Direct-sum concatenation `(self, other)`.
    pub fn concat(&self, other: &FreeElem) -> FreeElem {
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        FreeElem {
            ring: self.ring.clone(),
            comps,
        }
    }

    /// Pads with `before` zero components in front and `after` behind.
    pub fn embed(&self, before: usize, after: usize) -> FreeElem {
        let mut comps = vec![Polynomial::zero(&self.ring); before];
        comps.extend(self.comps.iter().cloned());
        comps.extend(std::iter::repeat_n(Polynomial::zero(&self.ring), after));
        FreeElem {
            ring: self.ring.clone(),
            comps,
        }
    }

    /// Components `range` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> FreeElem {
        FreeElem {
            ring: self.ring.clone(),
            comps: self.comps[start..end].to_vec(),
        }
    }

    pub fn map_comps(&self, f: impl Fn(&Polynomial) -> Polynomial) -> FreeElem {
        FreeElem {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(f).collect(),
        }
    }

    /// Degree of a nonzero homogeneous element, where component `i` carries
    /// the shift `shifts[i]`.
    pub fn degree(&self, weights: &[i64], shifts: &[i64]) -> Option<i64> {
        let mut deg = None;
        for (i, p) in self.comps.iter().enumerate() {
            for (m, _) in p.terms() {
                let d = m.weighted_degree(weights) + shifts[i];
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn is_homogeneous(&self, weights: &[i64], shifts: &[i64]) -> bool {
        self.is_zero() || self.degree(weights, shifts).is_some()
    }

    pub fn transport(&self, ring: &Arc<PolyRing>) -> Result<FreeElem> {
        Ok(FreeElem {
            ring: ring.clone(),
            comps: self
                .comps
                .iter()
                .map(|p| p.transport(ring))
                .collect::<Result<_>>()?,
        })
    }
}

impl fmt::Display for FreeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub pos: usize,
    pub mon: Monomial,
    pub coeff: Coeff,
}

/// Sparse module vector used inside the Groebner engine; terms ascending in
/// the active module order so the leading term is last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct SVec {
    pub terms: Vec<Term>,
}

impl SVec {
    pub fn from_free(v: &FreeElem, ord: &ModuleOrder) -> SVec {
        let mut terms: Vec<Term> = v
            .comps()
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| {
                p.terms().iter().map(move |(m, c)| Term {
                    pos,
                    mon: m.clone(),
                    coeff: c.clone(),
                })
            })
            .collect();
        terms.sort_by(|a, b| ord.cmp_terms(a.pos, &a.mon, b.pos, &b.mon));
        SVec { terms }
    }

    pub fn to_free(&self, ring: &Arc<PolyRing>, rank: usize) -> FreeElem {
        let mut buckets: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.pos].push((t.mon.clone(), t.coeff.clone()));
        }
        FreeElem {
            ring: ring.clone(),
            comps: buckets
                .into_iter()
                .map(|b| Polynomial::from_terms(ring, b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.last()
    }

    pub fn make_monic(&mut self, field: &Field) {
        if let Some(lt) = self.terms.last() {
            if !field.is_one(&lt.coeff) {
                let inv = field.inv(&lt.coeff);
                for t in &mut self.terms {
                    t.coeff = field.mul(&t.coeff, &inv);
                }
            }
        }
    }

    /// `self - c * m * g`.
    pub fn sub_scaled(
        &self,
        c: &Coeff,
        m: &Monomial,
        g: &SVec,
        ord: &ModuleOrder,
        field: &Field,
    ) -> SVec {
        let a = &self.terms;
        let b = &g.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Term> = None;
        loop {
            if bj.is_none() && j < b.len() {
                let t = &b[j];
                bj = Some(Term {
                    pos: t.pos,
                    mon: t.mon.mul(m),
                    coeff: field.neg(&field.mul(&t.coeff, c)),
                });
            }
            match (a.get(i), bj.as_ref()) {
                (None, None) => break,
                (Some(ta), None) => {
                    out.push(ta.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(bj.take().expect("pending term"));
                    j += 1;
                }
                (Some(ta), Some(tb)) => match ord.cmp_terms(ta.pos, &ta.mon, tb.pos, &tb.mon) {
                    Ordering::Less => {
                        out.push(ta.clone());
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push(bj.take().expect("pending term"));
                        j += 1;
                    }
                    Ordering::Equal => {
                        let s = field.add(&ta.coeff, &tb.coeff);
                        if !field.is_zero(&s) {
                            out.push(Term {
                                pos: ta.pos,
                                mon: ta.mon.clone(),
                                coeff: s,
                            });
                        }
                        bj = None;
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
        SVec { terms: out }
    }
}
