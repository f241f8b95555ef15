use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field of every ring in the engine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    PrimeField(u64),
}

/// An exact field element.
///
/// Elements of a prime field are stored as their residue in `[0, p)`; rationals
/// are kept normalized by `num-rational`. A `Coeff` is only meaningful together
/// with the [`Field`] that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(BigRational),
    Modular(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The prime field with `p` elements; rejects composite `p`.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::Unsupported(format!(
                "prime {p} too large (must be below 2^31)"
            )));
        }
        Ok(Field::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rational(BigRational::zero()),
            Field::PrimeField(_) => Coeff::Modular(0),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::PrimeField(p) => Coeff::Modular(n.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rational(BigRational::from_integer(n.clone())),
            Field::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Coeff::Modular(r.to_u64().expect("residue fits in u64"))
            }
        }
    }

    /// Maps a rational number into the field; fails when the denominator
    /// vanishes modulo the characteristic.
    pub fn from_rational(&self, q: &BigRational) -> Result<Coeff> {
        match self {
            Field::Rationals => Ok(Coeff::Rational(q.clone())),
            Field::PrimeField(p) => {
                let den = self.from_bigint(q.denom());
                if self.is_zero(&den) {
                    return Err(Error::Domain(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                Ok(self.mul(&self.from_bigint(q.numer()), &self.inv(&den)))
            }
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rational(q) => q.is_zero(),
            Coeff::Modular(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rational(q) => q.is_one(),
            Coeff::Modular(v) => *v == 1,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Rationals, Coeff::Rational(x), Coeff::Rational(y)) => Coeff::Rational(x + y),
            (Field::PrimeField(p), Coeff::Modular(x), Coeff::Modular(y)) => {
                Coeff::Modular((x + y) % p)
            }
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Rationals, Coeff::Rational(x)) => Coeff::Rational(-x),
            (Field::PrimeField(p), Coeff::Modular(x)) => Coeff::Modular((p - x) % p),
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Rationals, Coeff::Rational(x), Coeff::Rational(y)) => Coeff::Rational(x * y),
            (Field::PrimeField(p), Coeff::Modular(x), Coeff::Modular(y)) => {
                Coeff::Modular(x * y % p)
            }
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Coeff) -> Coeff {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self, a) {
            (Field::Rationals, Coeff::Rational(x)) => Coeff::Rational(x.recip()),
            (Field::PrimeField(p), Coeff::Modular(x)) => Coeff::Modular(pow_mod(*x, p - 2, *p)),
            _ => panic!("coefficient does not belong to {self:?}"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    /// Signed rational representative used for printing: prime-field residues
    /// above `p/2` are shown as negative integers.
    pub fn representative(&self, a: &Coeff) -> BigRational {
        match a {
            Coeff::Rational(q) => q.clone(),
            Coeff::Modular(v) => {
                let p = self.characteristic();
                let signed = if *v > p / 2 {
                    *v as i64 - p as i64
                } else {
                    *v as i64
                };
                BigRational::from_integer(BigInt::from(signed))
            }
        }
    }

    pub fn is_negative(&self, a: &Coeff) -> bool {
        self.representative(a).is_negative()
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::PrimeField(p) => write!(f, "Fp({p})"),
        }
    }
}
