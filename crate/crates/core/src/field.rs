//! Exact scalar arithmetic over ℚ and over prime fields GF(p).
//!
//! Hot paths are generic over the [`Field`] trait: a field value is a small
//! context object (`Rationals`, `PrimeField`) and elements are plain data
//! manipulated through it. [`Scalar`] is the self-describing dynamic form
//! used at the edges (text I/O, checked mixed-field arithmetic).

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("operands live in different fields ({0} vs {1})")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside 2 <= p < 2^31")]
    ModulusOutOfRange(u64),
    #[error("cannot parse {text:?} as an element of {field}")]
    Parse { text: String, field: FieldSpec },
}

/// A prime below 2^31, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..1u64 << 31).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(FieldError::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(Prime),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Prime::new(p).map(FieldSpec::PrimeField)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({})", p.0),
        }
    }
}

pub trait Field: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn parse(&self, text: &str) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;
    /// Random element. Over ℚ the draw is restricted to small fractions.
    fn sample(&self, rng: &mut SplitMix64) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a -= f * b`
    fn sub_mul_assign(&self, a: &mut Self::Elem, f: &Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, &self.mul(f, b));
    }
}

fn strip_sign(text: &str) -> (bool, &str) {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = t.strip_prefix('\u{2212}') {
        (true, rest)
    } else {
        (false, t)
    }
}

fn parse_digits(text: &str) -> Option<BigInt> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// The field of rational numbers, elements kept as reduced fractions with
/// positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
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
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn parse(&self, text: &str) -> Result<BigRational, FieldError> {
        let err = || FieldError::Parse { text: text.to_string(), field: FieldSpec::Rationals };
        let (negative, body) = strip_sign(text);
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (parse_digits(n.trim()).ok_or_else(err)?, parse_digits(d.trim()).ok_or_else(err)?),
            None => (parse_digits(body).ok_or_else(err)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(err());
        }
        let value = BigRational::new(num, den);
        Ok(if negative { -value } else { value })
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn sample(&self, rng: &mut SplitMix64) -> BigRational {
        let num = rng.range(0, 8) as i64 - 4;
        let den = if rng.below(4) == 0 { 2 + rng.below(2) as i64 } else { 1 };
        BigRational::new(num.into(), den.into())
    }
}

/// GF(p) with residues stored as `u32` in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        Prime::new(p).map(Self::from_prime)
    }

    pub fn from_prime(p: Prime) -> Self {
        Self { p: p.get() }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_i128(&self, n: i128) -> u32 {
        n.rem_euclid(self.p as i128) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(Prime(self.p))
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i64) as u32)
    }

    fn from_i64(&self, n: i64) -> u32 {
        self.reduce_i128(n as i128)
    }

    fn parse(&self, text: &str) -> Result<u32, FieldError> {
        let err = || FieldError::Parse { text: text.to_string(), field: self.spec() };
        let (negative, body) = strip_sign(text);
        let n = parse_digits(body).ok_or_else(err)?;
        let r = (n % BigInt::from(self.p)).try_into().map_err(|_| err())?;
        Ok(if negative { self.neg(&r) } else { r })
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }

    fn sample(&self, rng: &mut SplitMix64) -> u32 {
        rng.below(self.p as u64) as u32
    }

    #[inline]
    fn sub_mul_assign(&self, a: &mut u32, f: &u32, b: &u32) {
        let prod = ((*f as u64 * *b as u64) % self.p as u64) as u32;
        *a = self.sub(a, &prod);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element that carries its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: Prime },
}

impl Scalar {
    pub fn parse(spec: FieldSpec, text: &str) -> Result<Self, FieldError> {
        match spec {
            FieldSpec::Rationals => Rationals.parse(text).map(Scalar::Rational),
            FieldSpec::PrimeField(p) => {
                PrimeField::from_prime(p).parse(text).map(|value| Scalar::Residue { value, modulus: p })
            }
        }
    }

    pub fn from_i64(spec: FieldSpec, n: i64) -> Self {
        match spec {
            FieldSpec::Rationals => Scalar::Rational(Rationals.from_i64(n)),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: PrimeField::from_prime(p).from_i64(n), modulus: p },
        }
    }

    pub fn spec(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn arith(&self, op: ArithOp, other: &Scalar) -> Result<Scalar, FieldError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(apply(&Rationals, op, a, b)?)),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                let value = apply(&PrimeField::from_prime(*p), op, a, b)?;
                Ok(Scalar::Residue { value, modulus: *p })
            }
            _ => Err(FieldError::MixedFields(self.spec(), other.spec())),
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        match self {
            Scalar::Rational(q) => Rationals.inv(q).map(Scalar::Rational),
            Scalar::Residue { value, modulus } => PrimeField::from_prime(*modulus)
                .inv(value)
                .map(|value| Scalar::Residue { value, modulus: *modulus }),
        }
        .ok_or(FieldError::DivisionByZero)
    }
}

fn apply<F: Field>(field: &F, op: ArithOp, a: &F::Elem, b: &F::Elem) -> Result<F::Elem, FieldError> {
    Ok(match op {
        ArithOp::Add => field.add(a, b),
        ArithOp::Sub => field.sub(a, b),
        ArithOp::Mul => field.mul(a, b),
        ArithOp::Div => field.mul(a, &field.inv(b).ok_or(FieldError::DivisionByZero)?),
    })
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&Rationals.format(q)),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn s(spec: FieldSpec, text: &str) -> Scalar {
        Scalar::parse(spec, text).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(s(gf(5), "3").arith(ArithOp::Add, &s(gf(5), "4")).unwrap(), s(gf(5), "2"));
        let q = FieldSpec::Rationals;
        assert_eq!(s(q, "1/2").arith(ArithOp::Add, &s(q, "1/3")).unwrap(), s(q, "5/6"));
        assert_eq!(s(gf(5), "1").arith(ArithOp::Div, &s(gf(5), "2")).unwrap(), s(gf(5), "3"));
    }

    #[test]
    fn inverse_examples() {
        let q = FieldSpec::Rationals;
        assert_eq!(s(q, "-3/4").inv().unwrap(), s(q, "-4/3"));
        assert_eq!(s(gf(7), "3").inv().unwrap(), s(gf(7), "5"));
        assert_eq!(s(gf(2), "1").inv().unwrap(), s(gf(2), "1"));
        assert_eq!(s(gf(7), "0").inv(), Err(FieldError::DivisionByZero));
        assert_eq!(s(q, "0").inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn errors() {
        let err = s(gf(5), "1").arith(ArithOp::Add, &s(gf(7), "1")).unwrap_err();
        assert!(matches!(err, FieldError::MixedFields(..)));
        let err = s(gf(5), "1").arith(ArithOp::Mul, &s(FieldSpec::Rationals, "1")).unwrap_err();
        assert!(matches!(err, FieldError::MixedFields(..)));
        assert_eq!(
            s(gf(5), "1").arith(ArithOp::Div, &s(gf(5), "5")),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        assert_eq!(FieldSpec::prime(1), Err(FieldError::ModulusOutOfRange(1)));
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
        assert!(Scalar::parse(FieldSpec::Rationals, "1/0").is_err());
        assert!(Scalar::parse(FieldSpec::Rationals, "x").is_err());
        assert!(Scalar::parse(gf(5), "1/2").is_err());
    }

    #[test]
    fn text_forms_are_canonical() {
        let q = FieldSpec::Rationals;
        assert_eq!(s(q, "4/6").to_string(), "2/3");
        assert_eq!(s(q, "\u{2212}4/2").to_string(), "-2");
        assert_eq!(s(q, "-0").to_string(), "0");
        assert_eq!(s(gf(5), "-1").to_string(), "4");
        assert_eq!(s(gf(5), "12").to_string(), "2");
        assert_eq!(s(q, "2/4"), s(q, "1/2"));
    }

    fn rational() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9).prop_map(|(n, d)| {
            Scalar::Rational(BigRational::new(n.into(), d.into()))
        })
    }

    fn residue(p: u32) -> impl Strategy<Value = Scalar> {
        (0..p).prop_map(move |v| Scalar::Residue { value: v, modulus: Prime::new(p as u64).unwrap() })
    }

    fn check_axioms(a: &Scalar, b: &Scalar, c: &Scalar) {
        use ArithOp::*;
        let op = |x: &Scalar, o, y: &Scalar| x.arith(o, y).unwrap();
        assert_eq!(op(&op(a, Add, b), Add, c), op(a, Add, &op(b, Add, c)));
        assert_eq!(op(&op(a, Mul, b), Mul, c), op(a, Mul, &op(b, Mul, c)));
        assert_eq!(op(a, Mul, &op(b, Add, c)), op(&op(a, Mul, b), Add, &op(a, Mul, c)));
        assert_eq!(op(a, Add, b), op(b, Add, a));
        assert_eq!(op(&op(a, Sub, b), Add, b), *a);
        if !a.is_zero() {
            assert_eq!(op(a, Mul, &a.inv().unwrap()), Scalar::from_i64(a.spec(), 1));
            assert_eq!(op(&op(b, Div, a), Mul, a), *b);
        }
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
            check_axioms(&a, &b, &c);
        }

        #[test]
        fn gf7_field_axioms(a in residue(7), b in residue(7), c in residue(7)) {
            check_axioms(&a, &b, &c);
        }

        #[test]
        fn gf_large_prime_axioms(a in residue(2_147_483_647), b in residue(2_147_483_647), c in residue(2_147_483_647)) {
            check_axioms(&a, &b, &c);
        }

        #[test]
        fn canonical_text_round_trips(a in rational()) {
            let back = Scalar::parse(FieldSpec::Rationals, &a.to_string()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
