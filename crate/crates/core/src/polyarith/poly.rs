use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed};

use super::field::{Coeff, Field};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// The ambient polynomial ring: variable names and coefficient field.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    field: Field,
}

impl PolyRing {
    pub fn new(vars: Vec<String>, field: Field) -> Arc<PolyRing> {
        Arc::new(PolyRing { vars, field })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An exact multivariate polynomial.
///
/// Terms are kept strictly decreasing in the lexicographic storage order of
/// [`Monomial`] with no zero coefficients, so structural equality is equality
/// of polynomials. Orders that matter mathematically (leading terms, normal
/// forms) are always passed explicitly.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, mon: Monomial, c: Coeff) -> Self {
        assert_eq!(mon.nvars(), ring.nvars(), "monomial arity mismatch");
        let terms = if ring.field().is_zero(&c) {
            Vec::new()
        } else {
            vec![(mon, c)]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let field = ring.field();
        let mut acc: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity mismatch");
            match acc.get_mut(&m) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Trusted constructor for terms already strictly decreasing and nonzero.
    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Coeff)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// The constant coefficient (zero if absent).
    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.field().zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// True for a single term with coefficient one.
    pub fn is_monic_monomial(&self) -> bool {
        self.terms.len() == 1 && self.field().is_one(&self.terms[0].1)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "polynomials over [{}] and [{}]",
                self.ring.vars().join(","),
                other.ring.vars().join(",")
            )))
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let field = self.field();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = field.add(&a[i].1, &b[j].1);
                    if !field.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Polynomial::from_sorted_terms(&self.ring, out))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let field = self.field();
        let mut acc: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = field.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = field.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        Ok(Polynomial::from_sorted_terms(&self.ring, terms))
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.field();
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        )
    }

    pub fn scalar_mul(&self, c: &Coeff) -> Polynomial {
        let field = self.field();
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(a, c)))
                .collect(),
        )
    }

    /// Multiplies by the term `c * mon`.
    pub fn mul_term(&self, mon: &Monomial, c: &Coeff) -> Polynomial {
        let field = self.field();
        if field.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        // multiplication by a monomial preserves lex order
        Polynomial::from_sorted_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, a)| (m.mul(mon), field.mul(a, c)))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The maximal term under `ord`.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(Monomial, Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(&a.0, &b.0))
            .cloned()
            .ok_or_else(|| Error::Domain("leading term of the zero polynomial".into()))
    }

    /// True iff all terms share one weighted degree (the zero polynomial is homogeneous).
    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| m.weighted_degree(weights));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Weighted degree of a nonzero homogeneous polynomial.
    pub fn degree(&self, weights: &[i64]) -> Option<i64> {
        if self.is_zero() || !self.is_homogeneous(weights) {
            None
        } else {
            Some(self.terms[0].0.weighted_degree(weights))
        }
    }

    /// Largest weighted degree of a term.
    pub fn max_degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms.iter().map(|(m, _)| m.weighted_degree(weights)).max()
    }

    /// Divides by the leading coefficient under `ord`.
    pub fn make_monic(&self, ord: &MonomialOrder) -> Polynomial {
        match self.leading_term(ord) {
            Ok((_, c)) => self.scalar_mul(&self.field().inv(&c)),
            Err(_) => self.clone(),
        }
    }

    /// Substitutes `images[i]` for the i-th variable; images share a target ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Context(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| !same_ring(&p.ring, &target)) {
            return Err(Error::Context("substitution images in different rings".into()));
        }
        if target.field() != self.field() {
            return Err(Error::Context("substitution changes the coefficient field".into()));
        }
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Moves the polynomial into an isomorphic copy of its ring (same field and
    /// variable count), e.g. a ring obtained by renaming variables.
    pub fn transport(&self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        if ring.nvars() != self.ring.nvars() || ring.field() != self.field() {
            return Err(Error::Context("cannot transport polynomial between rings".into()));
        }
        Ok(Polynomial::from_sorted_terms(ring, self.terms.clone()))
    }

    /// Formats with terms sorted by `ord` (largest first).
    pub fn to_string_with_order(&self, ord: &MonomialOrder) -> String {
        let mut idx: Vec<usize> = (0..self.terms.len()).collect();
        idx.sort_by(|&a, &b| ord.cmp(&self.terms[b].0, &self.terms[a].0));
        self.format_terms(&idx)
    }

    fn format_terms(&self, idx: &[usize]) -> String {
        if idx.is_empty() {
            return "0".to_string();
        }
        let field = self.field();
        let mut out = String::new();
        for (k, &i) in idx.iter().enumerate() {
            let (m, c) = &self.terms[i];
            let q = field.representative(c);
            let neg = q.is_negative();
            let a = q.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mon = format_monomial(m, self.ring.vars());
            if m.is_one() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mon);
            } else {
                out.push_str(&format!("{a}*{mon}"));
            }
        }
        out
    }
}

pub(crate) fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    /// Terms are printed by total degree, then lexicographically, largest first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut idx: Vec<usize> = (0..self.terms.len()).collect();
        idx.sort_by(|&a, &b| {
            let (ma, mb) = (&self.terms[a].0, &self.terms[b].0);
            mb.total_degree()
                .cmp(&ma.total_degree())
                .then_with(|| mb.cmp(ma))
        });
        f.write_str(&self.format_terms(&idx))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition across rings")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction across rings")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication across rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str], field: Field) -> Arc<PolyRing> {
        PolyRing::new(vars.iter().map(|s| s.to_string()).collect(), field)
    }

    #[test]
    fn cancellation_and_difference_of_squares() {
        let r = ring(&["x", "y"], Field::Rationals);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let s = &(&x + &y) + &(&x - &y);
        assert_eq!(s, x.scalar_mul(&r.field().from_i64(2)));
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &(&x * &x) - &(&y * &y));
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn frobenius_in_characteristic_two() {
        let r = ring(&["x", "y"], Field::prime(2).unwrap());
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let s = &x + &y;
        assert_eq!(&s * &s, &(&x * &x) + &(&y * &y));
    }

    #[test]
    fn leading_terms() {
        let r = ring(&["x", "y"], Field::Rationals);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = &(&(&x * &x) * &y) + &(&x * &(&y * &y));
        let (m, _) = f.leading_term(&MonomialOrder::Lex).unwrap();
        assert_eq!(m.exponents(), &[2, 1]);
        assert!(matches!(
            Polynomial::zero(&r).leading_term(&MonomialOrder::Lex),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn homogeneity_under_weights() {
        let r = ring(&["x", "y"], Field::Rationals);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        assert!((&(&x * &x) + &(&x * &y)).is_homogeneous(&[1, 1]));
        assert!(!(&(&x * &x) + &x).is_homogeneous(&[1, 1]));
    }

    #[test]
    fn mismatched_rings_are_context_errors() {
        let r1 = ring(&["x"], Field::Rationals);
        let r2 = ring(&["y"], Field::Rationals);
        let e = Polynomial::var(&r1, 0).try_add(&Polynomial::var(&r2, 0));
        assert!(matches!(e, Err(Error::Context(_))));
    }
}
