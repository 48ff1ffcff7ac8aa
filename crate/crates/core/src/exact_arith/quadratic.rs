use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::surd::squarefree_split;
use crate::error::{Error, Result};

/// A real number `x + y*sqrt(disc)` with rational `x`, `y`.
///
/// Canonical form: `disc` is squarefree, and a value with no irrational part
/// has `y = 0` and `disc = 1`. Binary operations require both operands to
/// share `disc` unless one of them is rational; mixing two different fields
/// is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    x: BigRational,
    y: BigRational,
    disc: BigUint,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(f) = q.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    // fall back to scaling for huge numerators/denominators
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        q.numer() / (q.denom() << shift as usize)
    } else {
        (q.numer() << (-shift) as usize) / q.denom()
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

impl QuadraticReal {
    pub fn new(x: BigRational, y: BigRational, disc: impl Into<BigUint>) -> Self {
        let disc = disc.into();
        let (k, s) = squarefree_split(&disc);
        let mut x = x;
        let mut y = y * rat(BigInt::from_biguint(Sign::Plus, k));
        let mut disc = s;
        if disc.is_one() {
            x += &y;
            y = BigRational::zero();
        }
        if y.is_zero() {
            disc = BigUint::one();
        }
        QuadraticReal { x, y, disc }
    }

    pub fn from_rational(x: BigRational) -> Self {
        QuadraticReal {
            x,
            y: BigRational::zero(),
            disc: BigUint::one(),
        }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `sqrt(n)` for a non-negative integer `n`.
    pub fn sqrt_of(n: impl Into<BigUint>) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), n)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.x
    }

    pub fn irrational_coeff(&self) -> &BigRational {
        &self.y
    }

    pub fn disc(&self) -> &BigUint {
        &self.disc
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.x)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    fn common_disc(&self, other: &Self) -> BigUint {
        if self.is_rational() {
            other.disc.clone()
        } else if other.is_rational() || self.disc == other.disc {
            self.disc.clone()
        } else {
            panic!(
                "cannot combine values of Q(sqrt({})) and Q(sqrt({}))",
                self.disc, other.disc
            );
        }
    }

    /// `x - y*sqrt(disc)`.
    pub fn conj(&self) -> Self {
        QuadraticReal {
            x: self.x.clone(),
            y: -self.y.clone(),
            disc: self.disc.clone(),
        }
    }

    /// Field norm `x^2 - y^2 disc`.
    pub fn norm(&self) -> BigRational {
        let d = rat(BigInt::from_biguint(Sign::Plus, self.disc.clone()));
        &self.x * &self.x - &self.y * &self.y * d
    }

    /// Exact sign, decided with rational arithmetic only.
    pub fn signum(&self) -> Ordering {
        let sx = self.x.cmp(&BigRational::zero());
        let sy = self.y.cmp(&BigRational::zero());
        match (sx, sy) {
            (_, Ordering::Equal) => sx,
            (Ordering::Equal, _) => sy,
            _ if sx == sy => sx,
            _ => {
                // opposite signs: the larger of x^2 and y^2*disc wins
                match self.norm().cmp(&BigRational::zero()) {
                    Ordering::Greater => sx,
                    Ordering::Less => sy,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QuadraticReal {
            x: &c.x / &n,
            y: &c.y / &n,
            disc: c.disc,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = QuadraticReal::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QuadraticReal::new(&self.x * q, &self.y * q, self.disc.clone())
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let approx = self.to_f64().floor();
        let mut k = BigInt::from(approx as i128);
        while (self - &QuadraticReal::from_integer(k.clone())).signum() == Ordering::Less {
            k -= 1;
        }
        while (self - &QuadraticReal::from_integer(&k + 1)).signum() != Ordering::Less {
            k += 1;
        }
        k
    }

    /// Nearest `f64`. When `x` and `y*sqrt(disc)` have opposite signs the value
    /// is evaluated as `norm / (x - y*sqrt(disc))` so nothing cancels.
    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return rational_to_f64(&self.x);
        }
        let root = self.disc.to_f64().unwrap_or(f64::INFINITY).sqrt();
        let same_sign = self.x.is_zero() || (self.x.is_positive() == self.y.is_positive());
        if same_sign {
            rational_to_f64(&self.x) + rational_to_f64(&self.y) * root
        } else {
            let n = rational_to_f64(&self.norm());
            let den = rational_to_f64(&self.x) - rational_to_f64(&self.y) * root;
            n / den
        }
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> f64 {
        self.to_f64().ln()
    }
}

pub fn to_float(x: &QuadraticReal) -> f64 {
    x.to_f64()
}

/// The roots `alpha >= beta` of `x^2 - tr*x + det`.
pub fn eigenvalues(tr: &BigInt, det: &BigInt) -> Result<(QuadraticReal, QuadraticReal)> {
    let disc = tr * tr - BigInt::from(4) * det;
    if disc.is_negative() {
        return Err(Error::ComplexEigenvalues {
            tr: tr.clone(),
            det: det.clone(),
        });
    }
    let disc = disc.magnitude().clone();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mid = rat(tr.clone()) * &half;
    let alpha = QuadraticReal::new(mid.clone(), half.clone(), disc.clone());
    let beta = QuadraticReal::new(mid, -half, disc);
    Ok((alpha, beta))
}

impl Neg for &QuadraticReal {
    type Output = QuadraticReal;
    fn neg(self) -> QuadraticReal {
        QuadraticReal {
            x: -self.x.clone(),
            y: -self.y.clone(),
            disc: self.disc.clone(),
        }
    }
}

impl Neg for QuadraticReal {
    type Output = QuadraticReal;
    fn neg(self) -> QuadraticReal {
        -&self
    }
}

impl Add for &QuadraticReal {
    type Output = QuadraticReal;
    fn add(self, rhs: &QuadraticReal) -> QuadraticReal {
        let disc = self.common_disc(rhs);
        QuadraticReal::new(&self.x + &rhs.x, &self.y + &rhs.y, disc)
    }
}

impl Sub for &QuadraticReal {
    type Output = QuadraticReal;
    fn sub(self, rhs: &QuadraticReal) -> QuadraticReal {
        let disc = self.common_disc(rhs);
        QuadraticReal::new(&self.x - &rhs.x, &self.y - &rhs.y, disc)
    }
}

impl Mul for &QuadraticReal {
    type Output = QuadraticReal;
    fn mul(self, rhs: &QuadraticReal) -> QuadraticReal {
        let disc = self.common_disc(rhs);
        let d = rat(BigInt::from_biguint(Sign::Plus, disc.clone()));
        let x = &self.x * &rhs.x + &self.y * &rhs.y * d;
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        QuadraticReal::new(x, y, disc)
    }
}

impl Div for &QuadraticReal {
    type Output = QuadraticReal;
    fn div(self, rhs: &QuadraticReal) -> QuadraticReal {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadraticReal {
            type Output = QuadraticReal;
            fn $m(self, rhs: QuadraticReal) -> QuadraticReal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadraticReal> for QuadraticReal {
            type Output = QuadraticReal;
            fn $m(self, rhs: &QuadraticReal) -> QuadraticReal {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl PartialOrd for QuadraticReal {
    /// Defined for values in a common field; `None` otherwise.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let compatible = self.is_rational() || other.is_rational() || self.disc == other.disc;
        compatible.then(|| (self - other).signum())
    }
}

impl fmt::Display for QuadraticReal {
    /// Writes `(p+q*sqrt(d))/den`, e.g. `(7+3*sqrt(5))/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.x.denom().lcm(self.y.denom());
        let p = self.x.numer() * (&den / self.x.denom());
        let q = self.y.numer() * (&den / self.y.denom());
        let body = if q.is_zero() {
            p.to_string()
        } else {
            let root = if q.abs().is_one() {
                format!("sqrt({})", self.disc)
            } else {
                format!("{}*sqrt({})", q.abs(), self.disc)
            };
            match (p.is_zero(), q.is_negative()) {
                (true, false) => root,
                (true, true) => format!("-{root}"),
                (false, false) => format!("{p}+{root}"),
                (false, true) => format!("{p}-{root}"),
            }
        };
        if den.is_one() {
            write!(f, "{body}")
        } else if q.is_zero() {
            write!(f, "{body}/{den}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}
