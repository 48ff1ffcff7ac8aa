use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Splits `n = k^2 * s` with `s` squarefree. Returns `(k, s)`; zero maps to `(0, 1)`.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    if let Some(small) = n.to_u64() {
        let (k, s) = squarefree_split_u64(small);
        return (BigUint::from(k), BigUint::from(s));
    }
    let mut rest = n.clone();
    let mut k = BigUint::one();
    let mut s = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= &p;
            }
        }
        p += 1u32;
    }
    s *= rest;
    (k, s)
}

fn squarefree_split_u64(mut n: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut s = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0u32;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (k, s * n)
}

/// An integer multiple of a square root, `coeff * sqrt(radicand)`.
///
/// The radicand is kept squarefree, so two surds are equal exactly when their
/// fields are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: BigInt,
    radicand: BigUint,
}

impl Surd {
    pub fn new(coeff: impl Into<BigInt>, radicand: impl Into<BigUint>) -> Self {
        let coeff = coeff.into();
        let radicand = radicand.into();
        let (k, s) = squarefree_split(&radicand);
        let coeff = coeff * BigInt::from(k);
        if coeff.is_zero() {
            return Surd::zero();
        }
        Surd { coeff, radicand: s }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Surd::new(n, 1u32)
    }

    pub fn zero() -> Self {
        Surd {
            coeff: BigInt::zero(),
            radicand: BigUint::one(),
        }
    }

    pub fn coeff(&self) -> &BigInt {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// `self^2`, always an integer.
    pub fn square(&self) -> BigInt {
        &self.coeff * &self.coeff * BigInt::from(self.radicand.clone())
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        let r = self.radicand.to_f64().unwrap_or(f64::INFINITY);
        c * r.sqrt()
    }
}

pub fn surd_mul(u: &Surd, v: &Surd) -> Surd {
    Surd::new(&u.coeff * &v.coeff, &u.radicand * &v.radicand)
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        surd_mul(self, rhs)
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        surd_mul(&self, &rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

/// A finite sum of surds with distinct squarefree radicands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurdSum {
    terms: BTreeMap<BigUint, BigInt>,
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Surd> + '_ {
        self.terms.iter().map(|(r, c)| Surd {
            coeff: c.clone(),
            radicand: r.clone(),
        })
    }

    pub fn add_surd(&mut self, s: &Surd) {
        if s.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(s.radicand.clone())
            .or_insert_with(BigInt::zero);
        *entry += &s.coeff;
        if entry.is_zero() {
            self.terms.remove(&s.radicand);
        }
    }

    /// The value as an integer, if it has no irrational part.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    /// Returns `y` when the value equals `y * sqrt(n)` for an integer `y`.
    pub fn as_multiple_of_sqrt(&self, n: &BigUint) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() != 1 || n.is_zero() {
            return None;
        }
        // sqrt(n) = k*sqrt(s)
        let (k, s) = squarefree_split(n);
        let c = self.terms.get(&s)?;
        let k = BigInt::from_biguint(Sign::Plus, k);
        let (q, r) = c.div_rem(&k);
        r.is_zero().then_some(q)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms().map(|s| s.to_f64()).sum()
    }
}

impl From<Surd> for SurdSum {
    fn from(s: Surd) -> Self {
        let mut sum = SurdSum::zero();
        sum.add_surd(&s);
        sum
    }
}

impl Add for &SurdSum {
    type Output = SurdSum;
    fn add(self, rhs: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for t in rhs.terms() {
            out.add_surd(&t);
        }
        out
    }
}

impl Mul for &SurdSum {
    type Output = SurdSum;
    fn mul(self, rhs: &SurdSum) -> SurdSum {
        let mut out = SurdSum::zero();
        for u in self.terms() {
            for v in rhs.terms() {
                out.add_surd(&surd_mul(&u, &v));
            }
        }
        out
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Integer square root test: `Some(r)` when `n = r^2`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}
