//! Degree-by-degree linear algebra over the coefficient field, independent of
//! the Groebner machinery. Only for free modules over polynomial rings.

use std::collections::HashMap;

use closure_core::fpmod::FPModule;
use closure_core::gb::FreeElem;
use closure_core::polyarith::{Coeff, Field, Monomial, Polynomial};
use closure_core::ring::QuotientRing;

use super::random::monomials_of_degree;

/// Monomial basis of the degree-`d` part of `P^n` with the given shifts.
pub struct Basis {
    pub elems: Vec<(usize, Vec<u32>)>,
    index: HashMap<(usize, Vec<u32>), usize>,
}

impl Basis {
    pub fn new(weights: &[i64], shifts: &[i64], d: i64) -> Basis {
        let mut elems = Vec::new();
        for (pos, s) in shifts.iter().enumerate() {
            for e in monomials_of_degree(weights, d - s) {
                elems.push((pos, e));
            }
        }
        let index = elems.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Basis { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn coords(&self, field: &Field, v: &FreeElem) -> Vec<Coeff> {
        let mut out = vec![field.zero(); self.len()];
        for (pos, p) in v.comps().iter().enumerate() {
            for (m, c) in p.terms() {
                let i = self.index[&(pos, m.exponents().to_vec())];
                out[i] = c.clone();
            }
        }
        out
    }
}

/// A subspace kept in reduced row echelon form.
pub struct Span {
    field: Field,
    rows: Vec<(usize, Vec<Coeff>)>,
}

impl Span {
    pub fn new(field: &Field) -> Span {
        Span {
            field: field.clone(),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &[Coeff]) -> Vec<Coeff> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !f.is_zero(&v[*p]) {
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Coeff]) -> bool {
        self.reduce(v).iter().all(|c| self.field.is_zero(c))
    }

    pub fn insert(&mut self, v: &[Coeff]) -> bool {
        let f = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|c| !f.is_zero(c)) else {
            return false;
        };
        let inv = f.inv(&r[p]);
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec<Coeff>> {
        self.rows.iter().map(|(_, r)| r)
    }
}

/// Span of all monomial multiples of `gens` in degree `d` of `P^n`.
pub fn component(r: &QuotientRing, shifts: &[i64], gens: &[FreeElem], d: i64) -> (Basis, Span) {
    let basis = Basis::new(r.weights(), shifts, d);
    let mut span = Span::new(r.field());
    for g in gens {
        let Some(dg) = g.degree(r.weights(), shifts) else {
            continue;
        };
        for e in monomials_of_degree(r.weights(), d - dg) {
            let m = Polynomial::monomial(r.poly(), Monomial::new(e), r.field().one());
            span.insert(&basis.coords(r.field(), &g.scale(&m)));
        }
    }
    (basis, span)
}

/// `u ∈ (gens)` by linear algebra in `u`'s degree.
pub fn member(r: &QuotientRing, shifts: &[i64], gens: &[FreeElem], u: &FreeElem) -> bool {
    if u.is_zero() {
        return true;
    }
    let d = u.degree(r.weights(), shifts).expect("homogeneous");
    let (basis, span) = component(r, shifts, gens, d);
    span.contains(&basis.coords(r.field(), u))
}

/// Nullspace of the linear map whose column `j` is `cols[j]`.
fn nullspace(field: &Field, cols: &[Vec<Coeff>]) -> Vec<Vec<Coeff>> {
    let n = cols.len();
    let rows = cols.first().map_or(0, |c| c.len());
    // rref of the transposed system
    let mut a: Vec<Vec<Coeff>> = (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !field.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = field.inv(&a[r][c]);
        for x in a[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !field.is_zero(&row[c]) {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); n];
        v[free] = field.one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(&a[i][free]);
        }
        out.push(v);
    }
    out
}

/// Degree-`d` part of `N^cl_R` for the module closure of `S` over a
/// polynomial ring, where `N = (ideal)`: the `u` with `u s_i ∈ N S` for every
/// generator `s_i`, i.e. `u e_i` in the span of `S`'s relations and `N e_k`.
pub fn closure_component(s: &FPModule, ideal: &[Polynomial], d: i64) -> (Basis, Span) {
    let r = s.ring();
    let field = r.field();
    let mut gens: Vec<FreeElem> = s.relations().to_vec();
    for k in 0..s.ngens() {
        for f in ideal {
            gens.push(s.gen(k).scale(f));
        }
    }
    let source = Basis::new(r.weights(), &[0], d);
    let mut cols: Vec<Vec<Coeff>> = vec![Vec::new(); source.len()];
    for i in 0..s.ngens() {
        let di = d + s.degrees()[i];
        let (basis, span) = component(r, s.degrees(), &gens, di);
        for (j, (_, e)) in source.elems.iter().enumerate() {
            let m = Polynomial::monomial(r.poly(), Monomial::new(e.clone()), field.one());
            let image = s.gen(i).scale(&m);
            cols[j].extend(span.reduce(&basis.coords(field, &image)));
        }
    }
    let mut out = Span::new(field);
    for v in nullspace(field, &cols) {
        out.insert(&v);
    }
    (source, out)
}

/// `dim_k` of the degree-`d` part of `P^n / (rels)`.
pub fn quotient_dimension(r: &QuotientRing, shifts: &[i64], rels: &[FreeElem], d: i64) -> usize {
    let (basis, span) = component(r, shifts, rels, d);
    basis.len() - span.rank()
}
