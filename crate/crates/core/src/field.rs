//! Exact coefficient fields: the rationals and prime fields `GF(p)` with `p < 2^31`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Builds `GF(p)`, checking that `p` is a prime below `2^31`.
    pub fn prime(p: u32) -> Result<Field> {
        if p >= (1 << 31) || !is_prime(p as u64) {
            return Err(Error::InvalidInput(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::zero()),
            Field::Prime(p) => FieldElem::Mod { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElem::Mod { v: n.rem_euclid(*p as i64) as u32, p: *p },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                FieldElem::Mod { v: r.to_u32().expect("residue fits"), p: *p }
            }
        }
    }

    /// Maps a rational number into the field; fails in `GF(p)` when `p` divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElem> {
        match self {
            Field::Rational => Ok(FieldElem::Rat(q.clone())),
            Field::Prime(p) => {
                let den = self.from_bigint(q.denom());
                if den.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "denominator of {q} is not invertible mod {p}"
                    )));
                }
                Ok(self.from_bigint(q.numer()).div(&den))
            }
        }
    }

    /// Enumerates the field elements; only meaningful for prime fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let p = match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        };
        (0..p).map(move |v| FieldElem::Mod { v, p })
    }

    /// Binomial coefficient `C(n, k)` mapped into the field.
    pub fn binomial(&self, n: u32, k: u32) -> FieldElem {
        if k > n {
            return self.zero();
        }
        match self {
            Field::Prime(p) => {
                // Lucas: product of digit binomials in base p.
                let p64 = *p as u64;
                let (mut n, mut k) = (n as u64, k as u64);
                let mut acc = self.one();
                while k > 0 || n > 0 {
                    let (nd, kd) = (n % p64, k % p64);
                    if kd > nd {
                        return self.zero();
                    }
                    acc = acc.mul(&self.from_bigint(&BigInt::from(small_binomial(nd, kd))));
                    n /= p64;
                    k /= p64;
                }
                acc
            }
            Field::Rational => self.from_bigint(&BigInt::from(small_binomial(n as u64, k as u64))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn small_binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`Field`]. Residues carry their modulus so that arithmetic is self-contained.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    Mod { v: u32, p: u32 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rat(_) => Field::Rational,
            FieldElem::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Mod { v: a, p }, FieldElem::Mod { v: b, p: q }) => {
                debug_assert_eq!(p, q);
                let s = *a as u64 + *b as u64;
                FieldElem::Mod { v: (s % *p as u64) as u32, p: *p }
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod { v, p } => FieldElem::Mod { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        match (self, o) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Mod { v: a, p }, FieldElem::Mod { v: b, .. }) => {
                FieldElem::Mod { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> FieldElem {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(a.recip()),
            FieldElem::Mod { v, p } => FieldElem::Mod { v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32, p: *p },
        }
    }

    pub fn div(&self, o: &FieldElem) -> FieldElem {
        self.mul(&o.inv())
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Residue as an integer in `[0, p)`; `None` for rationals.
    pub fn residue(&self) -> Option<u32> {
        match self {
            FieldElem::Mod { v, .. } => Some(*v),
            FieldElem::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rat(r) => Some(r),
            FieldElem::Mod { .. } => None,
        }
    }

    /// Reduces a rational into `GF(p)`; residues must already live in `GF(p)`.
    pub fn reduce_into(&self, target: Field) -> Result<FieldElem> {
        match (self, target) {
            (FieldElem::Rat(r), _) => target.from_rational(r),
            (FieldElem::Mod { p, .. }, Field::Prime(q)) if *p == q => Ok(self.clone()),
            _ => Err(Error::InvalidInput(format!("cannot map {self} into {target}"))),
        }
    }

    /// True when the element prints with a leading minus sign.
    pub fn is_negative_display(&self) -> bool {
        matches!(self, FieldElem::Rat(r) if r.is_negative())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic_is_canonical() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(-3);
        assert_eq!(a.residue(), Some(4));
        assert_eq!(a.mul(&a.inv()), f.one());
        assert_eq!(f.from_i64(5).add(&f.from_i64(4)).residue(), Some(2));
    }

    #[test]
    fn rejects_non_primes() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn binomials_reduce_by_lucas() {
        let f2 = Field::Prime(2);
        assert!(f2.binomial(2, 1).is_zero());
        assert!(f2.binomial(2, 2).is_one());
        let f5 = Field::Prime(5);
        // C(10, 5) = 252 = 2 mod 5
        assert_eq!(f5.binomial(10, 5).residue(), Some(2));
        assert_eq!(Field::Rational.binomial(6, 2), Field::Rational.from_i64(15));
    }

    #[test]
    fn rational_into_prime() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(Field::Prime(7).from_rational(&q).unwrap().residue(), Some(4));
        assert!(Field::Prime(2).from_rational(&q).is_err());
    }
}
