//! Integral closure of monomial ideals through the Newton polyhedron.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polyarith::Monomial;

/// Feasibility of `A x = b, x >= 0` with `b >= 0`, by phase one of the
/// simplex method with Bland's rule in exact arithmetic. Returns a feasible
/// point when one exists.
pub(crate) fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    // tableau columns: original, artificial, rhs
    let width = cols + rows + 1;
    let mut t: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row = vec![BigRational::zero(); width];
            row[..cols].clone_from_slice(&a[i]);
            row[cols + i] = BigRational::one();
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    // objective: minimize sum of artificials, written as reduced costs
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..cols {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    loop {
        let Some(enter) = (0..cols + rows).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else { break };
        let piv = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        basis[p] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &j) in basis.iter().enumerate() {
        if j < cols {
            x[j] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Convex weights `λ` on `gens` with `sum λ_j gens_j <= v` coordinatewise,
/// i.e. a certificate that `v` lies in the Newton polyhedron.
pub fn newton_certificate(gens: &[Monomial], v: &Monomial) -> Option<Vec<BigRational>> {
    if gens.is_empty() {
        return None;
    }
    let n = v.nvars();
    let r = gens.len();
    let int = |e: u32| BigRational::from_integer(BigInt::from(e));
    // rows: one per variable (with slack), then sum λ = 1
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row: Vec<BigRational> = gens.iter().map(|g| int(g.exponents()[i])).collect();
        row.extend((0..n).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        a.push(row);
        b.push(int(v.exponents()[i]));
    }
    let mut last = vec![BigRational::one(); r];
    last.extend(std::iter::repeat_n(BigRational::zero(), n));
    a.push(last);
    b.push(BigRational::one());
    feasible_point(&a, &b).map(|x| x[..r].to_vec())
}

pub fn in_newton_polyhedron(gens: &[Monomial], v: &Monomial) -> bool {
    newton_certificate(gens, v).is_some()
}

/// Minimal monomial generators of the integral closure of `(gens)`.
///
/// Every minimal generator lies in the box bounded by the largest exponent of
/// each variable among `gens`, so enumerating that box is exhaustive.
pub fn integral_closure_generators(gens: &[Monomial]) -> Vec<Monomial> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let n = first.nvars();
    let bounds: Vec<u32> = (0..n)
        .map(|i| gens.iter().map(|g| g.exponents()[i]).max().unwrap_or(0))
        .collect();
    let mut members: Vec<Monomial> = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        let m = Monomial::new(e.clone());
        if in_newton_polyhedron(gens, &m) {
            members.push(m);
        }
        let mut i = 0;
        while i < n {
            if e[i] < bounds[i] {
                e[i] += 1;
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut minimal: Vec<Monomial> = members
        .iter()
        .filter(|m| !members.iter().any(|o| o != *m && o.divides(m)))
        .cloned()
        .collect();
    minimal.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| b.cmp(a)));
    minimal
}
