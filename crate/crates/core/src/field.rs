//! Exact scalars over the rationals and prime fields.
//!
//! Rationals keep a machine-word fast path and promote to arbitrary precision
//! only when a numerator or denominator leaves the `i64` range. Every value is
//! kept in lowest terms with a positive denominator, so structural equality is
//! numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds a prime field, rejecting composite or tiny moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(Rational::ZERO),
            Field::Prime(p) => Scalar::Fp { r: 0, p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(Rational::from_int(n)),
            Field::Prime(p) => Scalar::Fp { r: n.rem_euclid(p as i64) as u64, p },
        }
    }

    /// `num/den` in this field. Panics when `den` vanishes in the field.
    pub fn frac(&self, num: i64, den: i64) -> Scalar {
        self.from_i64(num).div(&self.from_i64(den))
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Parses a field descriptor: `Q` or `F<p>`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" || s == "q" {
            return Ok(Field::Rational);
        }
        if let Some(rest) = s.strip_prefix('F').or_else(|| s.strip_prefix('f')) {
            let p: u64 = rest.parse().map_err(|_| Error::Parse { line: 0, msg: format!("bad field descriptor `{s}`") })?;
            return Field::prime(p);
        }
        Err(Error::Parse { line: 0, msg: format!("bad field descriptor `{s}`") })
    }

    /// Parses a scalar printed by `Scalar`'s `Display`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse { line: 0, msg: format!("bad scalar `{s}`") };
        match *self {
            Field::Rational => Ok(Scalar::Q(s.parse::<Rational>().map_err(|_| bad())?)),
            Field::Prime(p) => {
                let (r, m) = match s.split_once("mod") {
                    Some((r, m)) => (r.trim(), Some(m.trim())),
                    None => (s, None),
                };
                if let Some(m) = m {
                    if m.parse::<u64>().map_err(|_| bad())? != p {
                        return Err(bad());
                    }
                }
                let n: i64 = r.parse().map_err(|_| bad())?;
                Ok(self.from_i64(n))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    /// `num/den` with `den > 0` and `gcd(num, den) = 1`.
    Small(i64, i64),
    /// Only used when the reduced value does not fit `Small`.
    Big(Box<BigRational>),
}

impl Rational {
    pub const ZERO: Rational = Rational::Small(0, 1);
    pub const ONE: Rational = Rational::Small(1, 1);

    pub fn from_int(n: i64) -> Rational {
        Rational::Small(n, 1)
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let (mut num, mut den) = (num, den);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = gcd_i128(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(num), BigInt::from(den)))),
        }
    }

    fn from_big(r: BigRational) -> Rational {
        // `BigRational` arithmetic already normalizes.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn add(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(a, 1), Rational::Small(c, 1)) => match a.checked_add(*c) {
                Some(s) => Rational::Small(s, 1),
                None => Rational::from_i128(*a as i128 + *c as i128, 1),
            },
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a * d).checked_add(c * b) {
                    Some(n) => Rational::from_i128(n, b * d),
                    None => Rational::from_big(self.to_big() + o.to_big()),
                }
            }
            _ => Rational::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn neg(&self) -> Rational {
        match self {
            Rational::Small(a, b) => match a.checked_neg() {
                Some(n) => Rational::Small(n, *b),
                None => Rational::from_big(-self.to_big()),
            },
            Rational::Big(r) => Rational::from_big(-(**r).clone()),
        }
    }

    pub fn sub(&self, o: &Rational) -> Rational {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Rational) -> Rational {
        match (self, o) {
            (Rational::Small(0, _), _) | (_, Rational::Small(0, _)) => Rational::ZERO,
            (Rational::Small(a, 1), Rational::Small(c, 1)) => match a.checked_mul(*c) {
                Some(p) => Rational::Small(p, 1),
                None => Rational::from_i128(*a as i128 * *c as i128, 1),
            },
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * c, b * d)
            }
            _ => Rational::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn inv(&self) -> Rational {
        match self {
            Rational::Small(0, _) => panic!("division by zero"),
            Rational::Small(a, b) => Rational::from_i128(*b as i128, *a as i128),
            Rational::Big(r) => Rational::from_big(r.recip()),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rational::Small(a, _) => a.signum() as i32,
            Rational::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_big().cmp(&other.to_big())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let bad = || Error::Parse { line: 0, msg: format!("bad rational `{s}`") };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / &g, d / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Ok(Rational::from_big(BigRational::new_raw(n, d)))
    }
}

/// An exact field element. Both operands of a binary operation must belong
/// to the same field; mixing fields is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    Fp { r: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => *q == Rational::ONE,
            Scalar::Fp { r, .. } => *r == 1,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::Fp { r: a, p }, Scalar::Fp { r: b, p: q }) if p == q => {
                Scalar::Fp { r: ((*a as u128 + *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::Fp { r, p } => Scalar::Fp { r: if *r == 0 { 0 } else { p - r }, p: *p },
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::Fp { r: a, p }, Scalar::Fp { r: b, p: q }) if p == q => {
                Scalar::Fp { r: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => panic!("field mismatch"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.inv()),
            Scalar::Fp { r, p } => {
                assert!(*r != 0, "division by zero");
                Scalar::Fp { r: pow_mod(*r, p - 2, *p), p: *p }
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.mul(&o.inv())
    }

    /// `self += a * b`, the inner-loop operation of elimination.
    #[inline]
    pub fn add_mul_assign(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add(&a.mul(b));
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
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
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { r, p } => write!(f, "{r} mod {p}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_normalizes() {
        let q = Field::Rational;
        assert_eq!(q.frac(2, 4), q.frac(1, 2));
        assert_eq!(q.frac(3, -6), q.frac(-1, 2));
        assert_eq!(q.frac(0, 5), q.zero());
        assert_eq!(q.frac(2, 4).to_string(), "1/2");
    }

    #[test]
    fn promotes_and_demotes_bigints() {
        let q = Field::Rational;
        let big = q.from_i64(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Scalar::Q(Rational::Big(_))));
        let back = sq.div(&big);
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Q(Rational::Small(..))));
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(11).unwrap();
        for n in 1..11 {
            let x = f.from_i64(n);
            assert!(x.mul(&x.inv()).is_one());
        }
        assert_eq!(f.from_i64(-1).to_string(), "10 mod 11");
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(4).is_err());
        assert!(Field::parse("F4").is_err());
        assert_eq!(Field::parse("F7").unwrap(), Field::Prime(7));
        assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
    }

    proptest! {
        #[test]
        fn rational_print_parse_roundtrip(n in any::<i64>(), d in 1i64..i64::MAX, k in -3i64..3) {
            let q = Field::Rational;
            let mut x = q.frac(n, d);
            for _ in 0..k.max(0) { x = x.mul(&x).add(&q.one()); }
            let s = x.to_string();
            prop_assert_eq!(q.parse_scalar(&s).unwrap(), x);
        }

        #[test]
        fn prime_print_parse_roundtrip(n in any::<i64>()) {
            let f = Field::Prime(101);
            let x = f.from_i64(n);
            prop_assert_eq!(f.parse_scalar(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn rational_field_axioms(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let q = Field::Rational;
            let (x, y) = (q.frac(a, b), q.frac(c, d));
            prop_assert_eq!(x.add(&y).sub(&y), x.clone());
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            if !y.is_zero() {
                prop_assert_eq!(x.mul(&y).div(&y), x);
            }
        }
    }
}
