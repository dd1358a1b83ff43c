//! Exact arithmetic for the coefficient rings: the integers, prime fields
//! GF(p), and their fraction fields (the rationals for Z, the field itself
//! for GF(p)).
//!
//! Integer values are arbitrary precision, prime-field values are canonical
//! residues in `[0, p)`. Everything is immutable after construction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A modulus that has passed a deterministic trial-division primality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The ring a value lives in: the integers, or a prime field.
///
/// Composite moduli are rejected at construction; the classification theorems
/// this crate verifies hold over integral domains only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    PrimeField(Prime),
}

/// An exact ring value: an arbitrary-precision integer or a canonical
/// residue. Construct through [`RingSpec`] so residues stay reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElem {
    Int(BigInt),
    Mod { value: u64, modulus: u64 },
}

impl RingElem {
    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Int(v) => v.is_zero(),
            RingElem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingElem::Int(v) => v.is_one(),
            RingElem::Mod { value, .. } => *value == 1,
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Int(v) => write!(f, "{v}"),
            RingElem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<RingSpec> {
        Ok(RingSpec::PrimeField(Prime::new(p)?))
    }

    /// GF(2), the ring of the Boolean bridge.
    pub fn gf2() -> RingSpec {
        RingSpec::PrimeField(Prime(2))
    }

    pub fn contains(&self, x: &RingElem) -> bool {
        match (self, x) {
            (RingSpec::Integers, RingElem::Int(_)) => true,
            (RingSpec::PrimeField(p), RingElem::Mod { value, modulus }) => {
                *modulus == p.get() && *value < p.get()
            }
            _ => false,
        }
    }

    fn require(&self, x: &RingElem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Canonicalizes an arbitrary integer into this ring.
    pub fn elem_from_bigint(&self, v: &BigInt) -> RingElem {
        match self {
            RingSpec::Integers => RingElem::Int(v.clone()),
            RingSpec::PrimeField(p) => {
                let m = BigInt::from(p.get());
                let r = v.mod_floor(&m);
                RingElem::Mod { value: r.to_u64().expect("reduced residue fits u64"), modulus: p.get() }
            }
        }
    }

    pub fn elem(&self, v: i64) -> RingElem {
        self.elem_from_bigint(&BigInt::from(v))
    }

    pub fn zero(&self) -> RingElem {
        self.elem(0)
    }

    pub fn one(&self) -> RingElem {
        self.elem(1)
    }

    /// Parses a decimal string (sign allowed) into a canonical element.
    pub fn parse_elem(&self, s: &str) -> Result<RingElem> {
        let v = BigInt::from_str(s.trim())
            .map_err(|_| Error::InvalidInput(format!("not a decimal integer: {s:?}")))?;
        Ok(self.elem_from_bigint(&v))
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        self.require(x)?;
        self.require(y)?;
        Ok(match (x, y) {
            (RingElem::Int(a), RingElem::Int(b)) => RingElem::Int(a + b),
            (RingElem::Mod { value: a, modulus: p }, RingElem::Mod { value: b, .. }) => {
                RingElem::Mod { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => unreachable!("require() filters mixed operands"),
        })
    }

    pub fn mul(&self, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        self.require(x)?;
        self.require(y)?;
        Ok(match (x, y) {
            (RingElem::Int(a), RingElem::Int(b)) => RingElem::Int(a * b),
            (RingElem::Mod { value: a, modulus: p }, RingElem::Mod { value: b, .. }) => {
                RingElem::Mod { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => unreachable!("require() filters mixed operands"),
        })
    }

    pub fn neg(&self, x: &RingElem) -> Result<RingElem> {
        self.require(x)?;
        Ok(match x {
            RingElem::Int(a) => RingElem::Int(-a),
            RingElem::Mod { value, modulus } => {
                RingElem::Mod { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
        })
    }

    pub fn sub(&self, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        self.add(x, &self.neg(y)?)
    }

    pub fn pow(&self, x: &RingElem, e: u64) -> Result<RingElem> {
        self.require(x)?;
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; prime fields only.
    pub fn inv(&self, x: &RingElem) -> Result<RingElem> {
        self.require(x)?;
        match (self, x) {
            (RingSpec::Integers, _) => Err(Error::RequiresPrimeField),
            (RingSpec::PrimeField(_), RingElem::Mod { value, modulus }) => {
                let v = mod_inverse(*value, *modulus).ok_or(Error::DivisionByZero)?;
                Ok(RingElem::Mod { value: v, modulus: *modulus })
            }
            _ => unreachable!("require() filters mixed operands"),
        }
    }

    /// Embeds a ring element into the field of fractions. For the integers
    /// this is a rational with denominator one; a prime field is its own
    /// fraction field, so the residue passes through unchanged.
    pub fn fraction_elem(&self, x: &RingElem) -> Result<FractionElem> {
        self.require(x)?;
        Ok(match x {
            RingElem::Int(v) => FractionElem::Rational(Rational::from_bigint(v.clone())),
            RingElem::Mod { value, modulus } => FractionElem::Mod { value: *value, modulus: *modulus },
        })
    }

    /// `x / y` in the field of fractions; `y` must be nonzero.
    pub fn fraction_div(&self, x: &RingElem, y: &RingElem) -> Result<FractionElem> {
        self.require(x)?;
        self.require(y)?;
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (x, y) {
            (RingElem::Int(a), RingElem::Int(b)) => {
                Ok(FractionElem::Rational(Rational::new(a.clone(), b.clone())?))
            }
            (RingElem::Mod { .. }, RingElem::Mod { .. }) => {
                let q = self.mul(x, &self.inv(y)?)?;
                self.fraction_elem(&q)
            }
            _ => unreachable!("require() filters mixed operands"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    // extended Euclid on (a, p), p prime
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "gcd(a, p) = 1 for 0 < a < p prime");
    Some(s0.rem_euclid(p as i128) as u64)
}

/// An exact rational in lowest terms with a positive denominator; zero is
/// `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Rational> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut num, mut den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        Ok(Rational { num, den })
    }

    pub fn from_bigint(v: BigInt) -> Rational {
        Rational { num: v, den: BigInt::one() }
    }

    pub fn from_int(v: i64) -> Rational {
        Rational::from_bigint(BigInt::from(v))
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Rational) -> Rational {
        Rational::new(&self.num * &other.den + &other.num * &self.den, &self.den * &other.den)
            .expect("denominators are nonzero")
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational::new(&self.num * &other.num, &self.den * &other.den)
            .expect("denominators are nonzero")
    }

    pub fn neg(&self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }

    pub fn pow(&self, e: u64) -> Rational {
        let mut acc = Rational::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                Rational::new(num, den)
            }
            None => Ok(Rational::from_bigint(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
        }
    }
}

/// A value in the field of fractions of one of the supported rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FractionElem {
    Rational(Rational),
    Mod { value: u64, modulus: u64 },
}

impl FractionElem {
    /// Whether the value lies in the base ring: denominator one over the
    /// integers, always true over a prime field.
    pub fn in_base_ring(&self) -> bool {
        match self {
            FractionElem::Rational(r) => r.is_integer(),
            FractionElem::Mod { .. } => true,
        }
    }

    /// The value as a ring element, when it lies in the base ring.
    pub fn to_ring_elem(&self) -> Option<RingElem> {
        match self {
            FractionElem::Rational(r) if r.is_integer() => Some(RingElem::Int(r.num.clone())),
            FractionElem::Rational(_) => None,
            FractionElem::Mod { value, modulus } => {
                Some(RingElem::Mod { value: *value, modulus: *modulus })
            }
        }
    }

    pub fn equals_ring(&self, x: &RingElem) -> bool {
        self.to_ring_elem().as_ref() == Some(x)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FractionElem::Rational(r) => r.is_zero(),
            FractionElem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn mul(&self, other: &FractionElem) -> Result<FractionElem> {
        match (self, other) {
            (FractionElem::Rational(a), FractionElem::Rational(b)) => {
                Ok(FractionElem::Rational(a.mul(b)))
            }
            (FractionElem::Mod { value: a, modulus: p }, FractionElem::Mod { value: b, modulus: q })
                if p == q =>
            {
                Ok(FractionElem::Mod { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p })
            }
            _ => Err(Error::RingMismatch),
        }
    }

    pub fn sub(&self, other: &FractionElem) -> Result<FractionElem> {
        match (self, other) {
            (FractionElem::Rational(a), FractionElem::Rational(b)) => {
                Ok(FractionElem::Rational(a.sub(b)))
            }
            (FractionElem::Mod { value: a, modulus: p }, FractionElem::Mod { value: b, modulus: q })
                if p == q =>
            {
                let diff = (*a as u128 + (*p - *b) as u128) % *p as u128;
                Ok(FractionElem::Mod { value: diff as u64, modulus: *p })
            }
            _ => Err(Error::RingMismatch),
        }
    }

    pub fn pow(&self, e: u64) -> Result<FractionElem> {
        let mut acc = match self {
            FractionElem::Rational(_) => FractionElem::Rational(Rational::from_int(1)),
            FractionElem::Mod { modulus, .. } => FractionElem::Mod { value: 1 % *modulus, modulus: *modulus },
        };
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for FractionElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FractionElem::Rational(r) => write!(f, "{r}"),
            FractionElem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

// Ring specs serialize as the string "Z" or the object {"prime": p}.

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RingSpec::Integers => serializer.serialize_str("Z"),
            RingSpec::PrimeField(p) => {
                use serde::ser::SerializeStruct;
                let mut s = serializer.serialize_struct("RingSpec", 1)?;
                s.serialize_field("prime", &p.get())?;
                s.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RingSpecRepr {
    Name(String),
    Field { prime: u64 },
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match RingSpecRepr::deserialize(deserializer)? {
            RingSpecRepr::Name(s) if s == "Z" => Ok(RingSpec::Integers),
            RingSpecRepr::Name(s) => Err(D::Error::custom(format!("unknown ring {s:?}"))),
            RingSpecRepr::Field { prime } => {
                RingSpec::prime_field(prime).map_err(D::Error::custom)
            }
        }
    }
}
