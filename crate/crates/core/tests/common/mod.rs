#![allow(dead_code)]

pub mod oracle;
pub mod properties;

use closure_core::fpmod::FPModule;
use closure_core::gb::FreeElem;
use closure_core::polyarith::{Field, MonomialOrder, PolyRing, Polynomial};
use closure_core::ring::QuotientRing;

pub fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn subring(field: Field, names: &[&str], images: &[&str]) -> QuotientRing {
    let xy = QuotientRing::standard(&["x", "y"], field);
    let images: Vec<Polynomial> = images.iter().map(|s| xy.parse(s).unwrap()).collect();
    QuotientRing::presented_subring(names, &images).unwrap()
}

/// `k[a,b,c]/(ac - b^2)`, the second Veronese of `k[x,y]`.
pub fn conic_over(field: Field) -> QuotientRing {
    subring(field, &["a", "b", "c"], &["x^2", "x*y", "y^2"])
}

pub fn conic() -> QuotientRing {
    conic_over(Field::Rationals)
}

/// `k[x^4, x^3 y, x y^3, y^4]`.
pub fn veronese() -> QuotientRing {
    subring(Field::Rationals, &["a", "b", "c", "d"], &["x^4", "x^3*y", "x*y^3", "y^4"])
}

/// The module `R + R x^2 y^2` over the Veronese ring.
pub fn s2ification(r: &QuotientRing) -> FPModule {
    let xy = QuotientRing::standard(&["x", "y"], r.field().clone());
    let gens = vec![xy.parse("1").unwrap(), xy.parse("x^2*y^2").unwrap()];
    FPModule::monomial_module(r, &gens).unwrap()
}

/// `k[x,y,u,v]/(xy - uv)`.
pub fn hypersurface() -> QuotientRing {
    let p = PolyRing::new(names(&["x", "y", "u", "v"]), Field::Rationals);
    let f = Polynomial::parse(&p, "x*y - u*v").unwrap();
    QuotientRing::new(&p, vec![1; 4], MonomialOrder::DegRevLex, vec![f]).unwrap()
}

pub fn polys(r: &QuotientRing, s: &[&str]) -> Vec<Polynomial> {
    s.iter().map(|t| r.parse(t).unwrap()).collect()
}

pub fn elem(r: &QuotientRing, s: &str) -> FreeElem {
    FreeElem::from_poly(r.parse(s).unwrap())
}

pub fn vector(r: &QuotientRing, s: &[&str]) -> FreeElem {
    FreeElem::new(r.poly(), polys(r, s)).unwrap()
}

pub mod random {
    use closure_core::fpmod::{FPModule, Submodule};
    use closure_core::gb::FreeElem;
    use closure_core::polyarith::{Monomial, Polynomial};
    use closure_core::ring::QuotientRing;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// Exponent vectors of weighted degree `d`.
    pub fn monomials_of_degree(weights: &[i64], d: i64) -> Vec<Vec<u32>> {
        fn go(w: &[i64], d: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if w.is_empty() {
                if d == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut e = 0;
            while (e as i64) * w[0] <= d {
                cur.push(e);
                go(&w[1..], d - e as i64 * w[0], cur, out);
                cur.pop();
                e += 1;
            }
        }
        let mut out = Vec::new();
        if d >= 0 {
            go(weights, d, &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn monomial(r: &QuotientRing, e: &[u32]) -> Polynomial {
        Polynomial::monomial(r.poly(), Monomial::new(e.to_vec()), r.field().one())
    }

    /// Random homogeneous polynomial of degree `d` with up to `terms` terms
    /// and small integer coefficients; may be zero when `d < 0`.
    pub fn poly<R: Rng>(rng: &mut R, r: &QuotientRing, d: i64, terms: usize) -> Polynomial {
        let mons = monomials_of_degree(r.weights(), d);
        let mut p = r.zero();
        for e in mons.choose_multiple(rng, terms.min(mons.len())) {
            let c = [-2i64, -1, 1, 2, 3][rng.gen_range(0..5)];
            p = &p + &Polynomial::monomial(r.poly(), Monomial::new(e.clone()), r.field().from_i64(c));
        }
        p
    }

    pub fn nonzero_poly<R: Rng>(rng: &mut R, r: &QuotientRing, d: i64, terms: usize) -> Polynomial {
        loop {
            let p = r.reduce(&poly(rng, r, d, terms));
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn monomial_poly<R: Rng>(rng: &mut R, r: &QuotientRing, d: i64) -> Polynomial {
        let mons = monomials_of_degree(r.weights(), d);
        monomial(r, mons.choose(rng).expect("degree has monomials"))
    }

    /// Ideal with `1..=max_gens` homogeneous generators of degree `1..=max_deg`.
    pub fn ideal_gens<R: Rng>(rng: &mut R, r: &QuotientRing, max_gens: usize, max_deg: i64) -> Vec<Polynomial> {
        let n = rng.gen_range(1..=max_gens);
        (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=max_deg) * r.weights()[0];
                nonzero_poly(rng, r, d, 2)
            })
            .collect()
    }

    /// A random nonzero module of a few shapes: free, cyclic, or an ideal.
    pub fn module<R: Rng>(rng: &mut R, r: &QuotientRing) -> FPModule {
        let w = r.weights()[0];
        match rng.gen_range(0..4) {
            0 => FPModule::free(r, vec![0]),
            1 => FPModule::free(r, vec![0, w]),
            2 => {
                let g = ideal_gens(rng, r, 2, 2);
                FPModule::cyclic(r, &g).unwrap()
            }
            _ => {
                let g: Vec<Polynomial> = (0..2)
                    .map(|_| {
                        let d = w * rng.gen_range(1..=2);
                        monomial_poly(rng, r, d)
                    })
                    .collect();
                FPModule::ideal(r, &g).unwrap()
            }
        }
    }

    /// Submodule of `M` spanned by `1..=max_gens` random homogeneous elements.
    pub fn submodule<R: Rng>(rng: &mut R, m: &FPModule, max_gens: usize, max_deg: i64) -> Submodule {
        let r = m.ring();
        let w = r.weights()[0];
        let n = rng.gen_range(1..=max_gens);
        let gens: Vec<FreeElem> = (0..n)
            .map(|_| {
                let top = m.degrees().iter().copied().max().unwrap_or(0);
                let d = top + w * rng.gen_range(1..=max_deg);
                let comps = m.degrees().iter().map(|s| poly(rng, r, d - s, 2)).collect();
                FreeElem::new(r.poly(), comps).unwrap()
            })
            .collect();
        Submodule::new(m, gens).unwrap()
    }
}
