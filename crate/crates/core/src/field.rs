//! Exact scalar fields: arbitrary-precision rationals and prime fields `F_p`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { characteristic: u32 },
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField { characteristic } => *characteristic,
        }
    }
}

/// A field together with its element representation.
///
/// Field objects are small values (`Rationals` is a unit struct, `PrimeField`
/// carries its modulus); every container stores a copy of the field it lives
/// over so that no global state is needed.
pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Parses a decimal integer or an `a/b` fraction.
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    /// Canonical decimal rendering (`a/b` for non-integral rationals).
    fn render(&self, a: &Self::Elem) -> String;
    /// A pseudo-random element; over the rationals a small integer.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a + c * b`
    fn mul_add(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.mul(c, b))
    }

    /// `(-1)^odd * a`
    fn signed(&self, odd: bool, a: Self::Elem) -> Self::Elem {
        if odd {
            self.neg(&a)
        } else {
            a
        }
    }

    /// `(-1)^k` as a field element.
    fn sign(&self, k: i64) -> Self::Elem {
        if k.rem_euclid(2) == 1 {
            self.neg(&self.one())
        } else {
            self.one()
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("{s:?} is not a scalar"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// The rational numbers, with elements kept in lowest terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-3..=3))
    }
}

/// The prime field `F_p` for a prime `p < 2^31`; elements live in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^31")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let p = self.p as u64;
        let mut acc = 1u64;
        base %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    fn reduce_big(&self, n: &BigInt) -> u32 {
        let p = BigInt::from(self.p);
        let r = ((n % &p) + &p) % &p;
        u32::try_from(r).expect("residue fits in u32")
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField { characteristic: self.p }
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a as u64, self.p as u64 - 2) as u32)
        }
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn parse(&self, s: &str) -> Result<u32> {
        let q = parse_rational(s)?;
        let num = self.reduce_big(q.numer());
        let den = self.reduce_big(q.denom());
        let den_inv = self.inv(&den).ok_or_else(|| Error::Parse(format!("{s:?} has a denominator divisible by the characteristic")))?;
        Ok(self.mul(&num, &den_inv))
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn mul_add(&self, a: &u32, c: &u32, b: &u32) -> u32 {
        ((*a as u64 + *c as u64 * *b as u64) % self.p as u64) as u32
    }
}

/// Bitwise sign helper used by Koszul sign rules: `(-1)^(a*b)` is odd iff both are odd.
pub fn koszul_odd(a: i64, b: i64) -> bool {
    a.rem_euclid(2) == 1 && b.rem_euclid(2) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(100).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2147483659u64 as u32).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.neg(&0), 0);
        assert_eq!(f.sub(&1, &3), 3);
        assert_eq!(f.parse("-1").unwrap(), 4);
        assert_eq!(f.parse("1/2").unwrap(), 3);
        assert!(f.parse("1/5").is_err());
        assert!(f.parse("x").is_err());
    }

    #[test]
    fn rationals_are_canonical() {
        let q = Rationals;
        let a = q.parse("6/4").unwrap();
        assert_eq!(q.render(&a), "3/2");
        assert_eq!(q.render(&q.parse("-8/2").unwrap()), "-4");
        assert!(q.parse("1/0").is_err());
        assert_eq!(q.mul(&a, &q.inv(&a).unwrap()), q.one());
        assert!(a.is_positive());
    }
}
