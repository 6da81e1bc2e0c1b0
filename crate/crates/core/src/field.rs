//! Exact arithmetic in prime fields `F_p` and in the rationals.
//!
//! Every element carries its field, so two elements from different fields
//! never silently combine. Residues are stored canonically in `[0, p)` and
//! rationals fully reduced with a positive denominator, which makes derived
//! equality and hashing structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation unsupported in characteristic zero: {0}")]
    Unsupported(&'static str),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// The ground field: `F_p` for a prime `p`, or `Q` when the characteristic is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub struct FieldSpec {
    characteristic: u64,
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    #[serde(rename = "char")]
    characteristic: u64,
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = FieldError;
    fn try_from(r: FieldSpecRepr) -> Result<Self, FieldError> {
        FieldSpec::new(r.characteristic)
    }
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(f: FieldSpec) -> Self {
        FieldSpecRepr {
            characteristic: f.characteristic,
        }
    }
}

impl FieldSpec {
    /// Characteristic 0 selects the rationals; anything else must be prime.
    pub fn new(characteristic: u64) -> Result<Self, FieldError> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(FieldError::NotPrime(characteristic))
        }
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p == 0 {
            return Err(FieldError::NotPrime(0));
        }
        Self::new(p)
    }

    pub fn rationals() -> Self {
        FieldSpec { characteristic: 0 }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    /// Number of elements, `None` for `Q`.
    pub fn order(&self) -> Option<u64> {
        (self.characteristic > 0).then_some(self.characteristic)
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match self.characteristic {
            0 => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
            p => FieldElement::Residue {
                p,
                v: (v as i128).rem_euclid(p as i128) as u64,
            },
        }
    }

    pub fn from_u64(&self, v: u64) -> FieldElement {
        match self.characteristic {
            0 => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
            p => FieldElement::Residue { p, v: v % p },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match self.characteristic {
            0 => FieldElement::Rational(BigRational::from_integer(v.clone())),
            p => {
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                FieldElement::Residue {
                    p,
                    v: r.to_u64().expect("residue fits in u64"),
                }
            }
        }
    }

    /// `num / den` embedded in the field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Parses `"13"`, `"-2"` or `"3/4"`. Integers are reduced mod `p` in `F_p`.
    pub fn parse(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        let parse_int =
            |t: &str| BigInt::from_str(t.trim()).map_err(|_| FieldError::Parse(s.to_string()));
        match s.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (parse_int(n)?, parse_int(d)?);
                self.from_bigint(&n)
                    .checked_div(&self.from_bigint(&d))
                    .map_err(|_| FieldError::Parse(s.to_string()))
            }
            None => Ok(self.from_bigint(&parse_int(s)?)),
        }
    }

    /// All elements of `F_p` in residue order; `None` for `Q`.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldElement>> {
        let p = self.order()?;
        Some((0..p).map(move |v| FieldElement::Residue { p, v }))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.characteristic {
            0 => write!(f, "Q"),
            p => write!(f, "F_{p}"),
        }
    }
}

/// An element of a [`FieldSpec`] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Residue { p: u64, v: u64 },
    Rational(BigRational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: mismatched fields and division by zero are errors.
pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Residue { p, .. } => FieldSpec { characteristic: *p },
            FieldElement::Rational(_) => FieldSpec::rationals(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Residue { v, .. } => *v == 0,
            FieldElement::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Residue { v, .. } => *v == 1,
            FieldElement::Rational(q) => q.is_one(),
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.spec(), other.spec()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Residue { p, v }, FieldElement::Residue { v: w, .. }) => {
                let s = *v as u128 + *w as u128;
                FieldElement::Residue {
                    p: *p,
                    v: (s % *p as u128) as u64,
                }
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElement::Residue { p, v }, FieldElement::Residue { v: w, .. }) => {
                FieldElement::Residue {
                    p: *p,
                    v: mul_mod(*v, *w, *p),
                }
            }
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Self {
        match self {
            FieldElement::Residue { p, v } => FieldElement::Residue {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
            FieldElement::Rational(q) => FieldElement::Rational(-q),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Residue { p, v } => FieldElement::Residue {
                p: *p,
                v: inv_mod(*v, *p),
            },
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The `k`-fold sum `c + c + ... + c`, i.e. the integer `k` embedded in the field times `c`.
    pub fn times(&self, k: u64) -> Self {
        &self.spec().from_u64(k) * self
    }

    /// Returns `g` with `g^p = self`. On a prime field the Frobenius map is
    /// the identity, so `g` is the element itself.
    pub fn pth_root(&self) -> Result<Self, FieldError> {
        match self {
            FieldElement::Residue { .. } => Ok(self.clone()),
            FieldElement::Rational(_) => Err(FieldError::Unsupported("p-th root")),
        }
    }
}

/// Same as [`FieldElement::pth_root`].
pub fn pth_root_elem(a: &FieldElement) -> Result<FieldElement, FieldError> {
    a.pth_root()
}

// Operator impls panic on mismatched fields; every container in this crate
// checks field agreement at construction, so a panic here is a bug.
impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Residue { v, .. } => write!(f, "{v}"),
            FieldElement::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            FieldElement::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on signed 128-bit
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
