//! Exact scalars over the coefficient fields used by the arrangements:
//! the rationals, prime fields GF(p), GF(4) = GF(2)(z) and Q(z) with z a
//! primitive third root of unity. In both extension fields the generator
//! satisfies z^2 + z + 1 = 0.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
    GF4,
    CyclotomicQ3,
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

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::BadField(format!("modulus {p} is too large")));
        }
        if !is_prime(p) {
            return Err(Error::BadField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    /// Whether the literal `z` names an element of this field.
    pub fn has_zeta(self) -> bool {
        matches!(self, FieldSpec::GF4 | FieldSpec::CyclotomicQ3)
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Fp { p, v: 0 },
            FieldSpec::GF4 => Scalar::GF4(0),
            FieldSpec::CyclotomicQ3 => Scalar::Q3(BigRational::zero(), BigRational::zero()),
        }
    }

    pub fn one(self) -> Scalar {
        self.from_int(&BigInt::one())
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        self.from_int(&BigInt::from(n))
    }

    pub fn from_int(self, n: &BigInt) -> Scalar {
        self.from_ratio(n, &BigInt::one()).expect("denominator is one")
    }

    /// Image of `num/den` in the field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Q(BigRational::new(num.clone(), den.clone()))),
            FieldSpec::CyclotomicQ3 => Ok(Scalar::Q3(
                BigRational::new(num.clone(), den.clone()),
                BigRational::zero(),
            )),
            FieldSpec::PrimeField(p) => {
                let n = Scalar::Fp { p, v: reduce_mod(num, p) };
                let d = Scalar::Fp { p, v: reduce_mod(den, p) };
                Ok(n.mul(&d.inv()?))
            }
            FieldSpec::GF4 => {
                let n = Scalar::GF4(reduce_mod(num, 2) as u8);
                let d = Scalar::GF4(reduce_mod(den, 2) as u8);
                Ok(n.mul(&d.inv()?))
            }
        }
    }

    /// The generator z (z^2 + z + 1 = 0).
    pub fn zeta(self) -> Option<Scalar> {
        match self {
            FieldSpec::GF4 => Some(Scalar::GF4(0b10)),
            FieldSpec::CyclotomicQ3 => Some(Scalar::Q3(BigRational::zero(), BigRational::one())),
            _ => None,
        }
    }

    /// Every element, for finite fields of manageable size.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::GF4 => Some((0..4).map(Scalar::GF4).collect()),
            FieldSpec::PrimeField(p) if p <= 1 << 16 => {
                Some((0..p).map(|v| Scalar::Fp { p, v }).collect())
            }
            _ => None,
        }
    }
}

fn reduce_mod(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    u64::try_from(r).expect("residue fits")
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
            FieldSpec::GF4 => write!(f, "GF(4)"),
            FieldSpec::CyclotomicQ3 => write!(f, "Q(zeta3)"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "Q" => return Ok(FieldSpec::Rationals),
            "GF(4)" => return Ok(FieldSpec::GF4),
            "Q(zeta3)" => return Ok(FieldSpec::CyclotomicQ3),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            if !inner.is_empty() && inner.bytes().all(|b| b.is_ascii_digit()) {
                let p: u64 = inner
                    .parse()
                    .map_err(|_| Error::BadField(format!("modulus `{inner}` out of range")))?;
                return FieldSpec::prime(p);
            }
        }
        Err(Error::BadField(format!("unknown field `{s}`")))
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field element. The payload is always canonical, so derived
/// equality and hashing agree with field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, v: u64 },
    /// Bit 0 is the constant part, bit 1 the coefficient of z.
    GF4(u8),
    /// a + b z
    Q3(BigRational, BigRational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
}

const GF4_INV: [u8; 4] = [0, 1, 3, 2];

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp { p, .. } => FieldSpec::PrimeField(*p),
            Scalar::GF4(_) => FieldSpec::GF4,
            Scalar::Q3(..) => FieldSpec::CyclotomicQ3,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(a) => a.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::GF4(v) => *v == 0,
            Scalar::Q3(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(a) => a.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::GF4(v) => *v == 1,
            Scalar::Q3(a, b) => a.is_one() && b.is_zero(),
        }
    }

    /// Checked arithmetic: the operands must share a field and `inv` needs a
    /// nonzero argument.
    pub fn arith(op: ArithOp, a: &Scalar, b: Option<&Scalar>) -> Result<Scalar> {
        let need_b = || {
            b.ok_or_else(|| Error::parse(0, "binary operation needs a second operand"))
        };
        match op {
            ArithOp::Add => {
                let b = need_b()?;
                a.same_field(b)?;
                Ok(a.add(b))
            }
            ArithOp::Mul => {
                let b = need_b()?;
                a.same_field(b)?;
                Ok(a.mul(b))
            }
            ArithOp::Neg => Ok(a.neg()),
            ArithOp::Inv => a.inv(),
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::MixedFields(self.field().to_string(), other.field().to_string()));
        }
        Ok(())
    }

    /// Panics if the operands live in different fields.
    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) if p == q => {
                Scalar::Fp { p: *p, v: (v + w) % p }
            }
            (Scalar::GF4(a), Scalar::GF4(b)) => Scalar::GF4(a ^ b),
            (Scalar::Q3(a, b), Scalar::Q3(c, d)) => Scalar::Q3(a + c, b + d),
            _ => panic!("mixed fields: {} and {}", self.field(), other.field()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: (p - v) % p },
            Scalar::GF4(a) => Scalar::GF4(*a),
            Scalar::Q3(a, b) => Scalar::Q3(-a, -b),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v }, Scalar::Fp { p: q, v: w }) if p == q => Scalar::Fp {
                p: *p,
                v: ((*v as u128 * *w as u128) % *p as u128) as u64,
            },
            (Scalar::GF4(x), Scalar::GF4(y)) => {
                let (a, b) = (x & 1, (x >> 1) & 1);
                let (c, d) = (y & 1, (y >> 1) & 1);
                // z^2 = z + 1
                let lo = (a & c) ^ (b & d);
                let hi = (a & d) ^ (b & c) ^ (b & d);
                Scalar::GF4(lo | (hi << 1))
            }
            (Scalar::Q3(a, b), Scalar::Q3(c, d)) => {
                // z^2 = -z - 1
                let bd = b * d;
                Scalar::Q3(a * c - &bd, a * d + b * c - bd)
            }
            _ => panic!("mixed fields: {} and {}", self.field(), other.field()),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: pow_mod(*v, p - 2, *p) },
            Scalar::GF4(a) => Scalar::GF4(GF4_INV[*a as usize]),
            Scalar::Q3(a, b) => {
                // (a + bz)(a - b - bz) = a^2 - ab + b^2
                let norm = a * a - a * b + b * b;
                Scalar::Q3((a - b) / &norm, -(b / &norm))
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Parse a coefficient literal.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        let value = parse_coefficient(&mut cur, field)?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(Error::parse(cur.pos, format!("unexpected `{}`", cur.peek_char())));
        }
        Ok(value)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(a) => write!(f, "{}", fmt_ratio(a)),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::GF4(v) => match v {
                0 => write!(f, "0"),
                1 => write!(f, "1"),
                2 => write!(f, "z"),
                _ => write!(f, "1+z"),
            },
            Scalar::Q3(a, b) => {
                if b.is_zero() {
                    return write!(f, "{}", fmt_ratio(a));
                }
                let zeta_part = |coef: &BigRational| -> String {
                    if coef.is_one() {
                        "z".to_string()
                    } else {
                        format!("{}z", fmt_ratio(coef))
                    }
                };
                if a.is_zero() {
                    if b.is_negative() {
                        write!(f, "-{}", zeta_part(&-b))
                    } else {
                        write!(f, "{}", zeta_part(b))
                    }
                } else if b.is_negative() {
                    write!(f, "{}-{}", fmt_ratio(a), zeta_part(&-b))
                } else {
                    write!(f, "{}+{}", fmt_ratio(a), zeta_part(b))
                }
            }
        }
    }
}

/// Byte cursor shared by the coefficient and linear-form parsers.
pub(crate) struct Cursor<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
    /// Offset added to positions in error messages.
    pub(crate) base: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Cursor { src: text.as_bytes(), pos: 0, base: 0 }
    }

    pub(crate) fn with_base(text: &'a str, base: usize) -> Self {
        Cursor { src: text.as_bytes(), pos: 0, base }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    pub(crate) fn peek_at(&self, k: usize) -> Option<u8> {
        self.src.get(self.pos + k).copied()
    }

    pub(crate) fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or(char::REPLACEMENT_CHARACTER)
    }

    pub(crate) fn abs(&self) -> usize {
        self.base + self.pos
    }

    pub(crate) fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    pub(crate) fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Some(s.parse().expect("digits parse"))
    }

    /// `z` or `z^2` when the next bytes spell a zeta literal (and not an
    /// identifier such as `z1`). Returns the exponent.
    pub(crate) fn zeta_literal(&self) -> Option<(u32, usize)> {
        if self.peek() != Some(b'z') {
            return None;
        }
        if self.peek_at(1) == Some(b'^') {
            return match self.peek_at(2) {
                Some(b'2') if !matches!(self.peek_at(3), Some(b) if b.is_ascii_alphanumeric()) => {
                    Some((2, 3))
                }
                Some(b'1') if !matches!(self.peek_at(3), Some(b) if b.is_ascii_alphanumeric()) => {
                    Some((1, 3))
                }
                _ => None,
            };
        }
        if matches!(self.peek_at(1), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            return None;
        }
        Some((1, 1))
    }
}

/// An unsigned number `INT` or `INT/POSINT`, if present.
pub(crate) fn parse_number(cur: &mut Cursor, field: FieldSpec) -> Result<Option<Scalar>> {
    let start = cur.abs();
    let Some(num) = cur.digits() else {
        return Ok(None);
    };
    if cur.peek() == Some(b'/') {
        cur.pos += 1;
        let den_pos = cur.abs();
        let den = cur.digits().ok_or_else(|| Error::parse(den_pos, "expected denominator"))?;
        if den.is_zero() {
            return Err(Error::parse(den_pos, "zero denominator"));
        }
        return field.from_ratio(&num, &den).map(Some).map_err(|_| {
            Error::parse(start, format!("denominator {den} vanishes in {field}"))
        });
    }
    Ok(Some(field.from_int(&num)))
}

/// Optional `*`, then a zeta literal. Returns z^k when one is present.
pub(crate) fn parse_zeta(cur: &mut Cursor, field: FieldSpec, after_number: bool) -> Result<Option<Scalar>> {
    let save = cur.pos;
    if after_number && cur.eat(b'*')
        && cur.zeta_literal().is_none() {
            cur.pos = save;
            return Ok(None);
        }
    let Some((k, len)) = cur.zeta_literal() else {
        return Ok(None);
    };
    let pos = cur.abs();
    let z = field.zeta().ok_or(Error::FieldMismatch { pos })?;
    cur.pos += len;
    Ok(Some(if k == 2 { z.mul(&z) } else { z }))
}

/// TERM := (INT|FRAC)? ("*"? ZETA)?, nonempty.
fn parse_term(cur: &mut Cursor, field: FieldSpec) -> Result<Scalar> {
    let pos = cur.abs();
    let num = parse_number(cur, field)?;
    let zeta = parse_zeta(cur, field, num.is_some())?;
    match (num, zeta) {
        (Some(n), Some(z)) => Ok(n.mul(&z)),
        (Some(n), None) => Ok(n),
        (None, Some(z)) => Ok(z),
        (None, None) => Err(Error::parse(pos, "expected a number or `z`")),
    }
}

pub(crate) fn parse_coefficient(cur: &mut Cursor, field: FieldSpec) -> Result<Scalar> {
    let mut negate = false;
    if cur.eat(b'-') {
        negate = true;
    } else {
        cur.eat(b'+');
    }
    cur.skip_ws();
    let mut acc = parse_term(cur, field)?;
    if negate {
        acc = acc.neg();
    }
    loop {
        let save = cur.pos;
        cur.skip_ws();
        let neg = match cur.peek() {
            Some(b'+') => false,
            Some(b'-') => true,
            _ => {
                cur.pos = save;
                break;
            }
        };
        cur.pos += 1;
        cur.skip_ws();
        let t = parse_term(cur, field)?;
        acc = if neg { acc.sub(&t) } else { acc.add(&t) };
    }
    Ok(acc)
}
