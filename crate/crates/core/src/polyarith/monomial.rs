use std::cmp::Ordering;

/// A power product `x_1^e_1 ... x_n^e_n` stored as a dense exponent vector.
///
/// The derived `Ord` is plain lexicographic comparison of exponent vectors and
/// is only used as the canonical storage order of polynomial terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(
                other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }
}

/// A monomial order on a fixed number of variables.
///
/// `Block` is the product order used for elimination: the first `split`
/// variables are compared with `first`, ties broken by `second` on the rest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    WeightedDegRevLex(Vec<i64>),
    Block {
        split: usize,
        first: Box<MonomialOrder>,
        second: Box<MonomialOrder>,
    },
}

fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // the smaller exponent in the last differing variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_exps(&a.0, &b.0)
    }

    pub fn cmp_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                da.cmp(&db).then_with(|| revlex(a, b))
            }
            MonomialOrder::WeightedDegRevLex(w) => {
                let da: i64 = a.iter().zip(w).map(|(&e, &w)| e as i64 * w).sum();
                let db: i64 = b.iter().zip(w).map(|(&e, &w)| e as i64 * w).sum();
                da.cmp(&db).then_with(|| revlex(a, b))
            }
            MonomialOrder::Block {
                split,
                first,
                second,
            } => first
                .cmp_exps(&a[..*split], &b[..*split])
                .then_with(|| second.cmp_exps(&a[*split..], &b[*split..])),
        }
    }

    /// Grading weights implied by the order, if it is degree-compatible.
    pub fn weights(&self, nvars: usize) -> Option<Vec<i64>> {
        match self {
            MonomialOrder::Lex | MonomialOrder::Block { .. } => None,
            MonomialOrder::DegRevLex => Some(vec![1; nvars]),
            MonomialOrder::WeightedDegRevLex(w) => Some(w.clone()),
        }
    }

    /// Checks the order is usable on `nvars` variables (positive weights of the right length).
    pub fn validate(&self, nvars: usize) -> bool {
        match self {
            MonomialOrder::Lex | MonomialOrder::DegRevLex => true,
            MonomialOrder::WeightedDegRevLex(w) => w.len() == nvars && w.iter().all(|&x| x > 0),
            MonomialOrder::Block {
                split,
                first,
                second,
            } => *split <= nvars && first.validate(*split) && second.validate(nvars - split),
        }
    }
}
