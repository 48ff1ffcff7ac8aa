//! The rank-three algebraic Mukai lattice `L = Z + ZH + Z rho` of an abelian
//! surface with `(H^2) = 2D`, its pairing, and the isometric model
//! `Sym2(Z, D)` of symmetric matrices `[[x, y*sqrt(D)], [y*sqrt(D), z]]`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Surface data: `D = (H^2)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceParams {
    d: u64,
}

impl SurfaceParams {
    pub fn new(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("D must be at least 1".into()));
        }
        Ok(SurfaceParams { d })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn d_big(&self) -> BigInt {
        BigInt::from(self.d)
    }
}

/// `r + dH + a rho`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: BigInt,
    pub d: BigInt,
    pub a: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, d: impl Into<BigInt>, a: impl Into<BigInt>) -> Self {
        MukaiVector {
            r: r.into(),
            d: d.into(),
            a: a.into(),
        }
    }

    pub fn zero() -> Self {
        MukaiVector::new(0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.d.is_zero() && self.a.is_zero()
    }

    /// `uu^t` for `u = (p, q*sqrt(D))`, i.e. `(p^2, pq, q^2 D)`.
    pub fn rank_one(p: &BigInt, q: &BigInt, params: SurfaceParams) -> Self {
        MukaiVector {
            r: p * p,
            d: p * q,
            a: q * q * params.d_big(),
        }
    }

    pub fn is_isotropic(&self, params: SurfaceParams) -> bool {
        pairing(self, self, params).is_zero()
    }

    /// Positive rank, or rank zero with positive degree, or a positive multiple of the point class.
    pub fn is_positive(&self) -> bool {
        if !self.r.is_zero() {
            self.r.is_positive()
        } else if !self.d.is_zero() {
            self.d.is_positive()
        } else {
            self.a.is_positive()
        }
    }

    /// Product with `e^{pH} = (1, p, p^2 D)`.
    pub fn twist(&self, p: &BigInt, params: SurfaceParams) -> Self {
        let dd = params.d_big();
        MukaiVector {
            r: self.r.clone(),
            d: &self.d + &self.r * p,
            a: &self.a + &self.r * p * p * &dd + BigInt::from(2) * &dd * p * &self.d,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        MukaiVector {
            r: &self.r * k,
            d: &self.d * k,
            a: &self.a * k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        MukaiVector {
            r: &self.r + &other.r,
            d: &self.d + &other.d,
            a: &self.a + &other.a,
        }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.d, self.a)
    }
}

/// `[[x, y*sqrt(D)], [y*sqrt(D), z]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sym2Matrix {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl Sym2Matrix {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        Sym2Matrix {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }
}

/// `<v, w> = 2D d1 d2 - r1 a2 - r2 a1`.
pub fn pairing(v: &MukaiVector, w: &MukaiVector, params: SurfaceParams) -> BigInt {
    BigInt::from(2 * params.d) * &v.d * &w.d - &v.r * &w.a - &w.r * &v.a
}

pub fn iota(v: &MukaiVector) -> Sym2Matrix {
    Sym2Matrix {
        x: v.r.clone(),
        y: v.d.clone(),
        z: v.a.clone(),
    }
}

pub fn iota_inv(m: &Sym2Matrix) -> MukaiVector {
    MukaiVector {
        r: m.x.clone(),
        d: m.y.clone(),
        a: m.z.clone(),
    }
}

/// `B(X1, X2) = 2D y1 y2 - (x1 z2 + z1 x2)`.
pub fn b_form(m1: &Sym2Matrix, m2: &Sym2Matrix, params: SurfaceParams) -> BigInt {
    BigInt::from(2 * params.d) * &m1.y * &m2.y - (&m1.x * &m2.z + &m1.z * &m2.x)
}

/// Mukai vector of a line bundle with first Chern class `mH`.
pub fn exp_vector(m: impl Into<BigInt>, params: SurfaceParams) -> MukaiVector {
    let m = m.into();
    MukaiVector {
        r: BigInt::from(1),
        a: &m * &m * params.d_big(),
        d: m,
    }
}

/// `chi(v, w) = -<v, w>`.
pub fn euler_chi(v: &MukaiVector, w: &MukaiVector, params: SurfaceParams) -> BigInt {
    -pairing(v, w, params)
}

/// `Z(v) = <e^{zH}, v> = 2Dz d - a - z^2 D r` for `z` in the upper half plane.
pub fn central_charge(z: Complex64, v: &MukaiVector, params: SurfaceParams) -> Result<Complex64> {
    if z.im.is_nan() || z.im <= 0.0 {
        return Err(Error::NotUpperHalfPlane {
            re: z.re.to_string(),
            im: z.im.to_string(),
        });
    }
    let dd = params.d as f64;
    let f = |n: &BigInt| n.to_f64().unwrap_or(f64::NAN);
    Ok(z * (2.0 * dd * f(&v.d)) - f(&v.a) - z * z * (dd * f(&v.r)))
}

/// Exact variant of [`central_charge`] over Gaussian rationals.
pub fn central_charge_exact(
    z: &Complex<BigRational>,
    v: &MukaiVector,
    params: SurfaceParams,
) -> Result<Complex<BigRational>> {
    if !z.im.is_positive() {
        return Err(Error::NotUpperHalfPlane {
            re: z.re.to_string(),
            im: z.im.to_string(),
        });
    }
    let q = |n: BigInt| Complex::new(BigRational::from_integer(n), BigRational::zero());
    let dd = params.d_big();
    let two_d_d = q(BigInt::from(2) * &dd * &v.d);
    let d_r = q(&dd * &v.r);
    Ok(z * two_d_d - q(v.a.clone()) - z * z * d_r)
}

/// Exhaustive search of the box `max(|r|,|d|,|a|) <= bound` for a nonzero
/// isotropic vector orthogonal to `e^{kH}`, `e^{(k+m)H}` and `e^{(k+2m)H}`.
///
/// Orthogonality to `e^{kH}` fixes `a = 2Dkd - Dk^2 r`, so the search runs
/// over `(r, d)` and discards `a` outside the box.
pub fn lemma_d_search(params: SurfaceParams, k: i64, m: i64, bound: i64) -> Option<MukaiVector> {
    if bound < 1 {
        return None;
    }
    let dd = params.d as i128;
    let (k, m, bound) = (k as i128, m as i128, bound as i128);
    let pair =
        |v: (i128, i128, i128), w: (i128, i128, i128)| 2 * dd * v.1 * w.1 - v.0 * w.2 - w.0 * v.2;
    let exps: Vec<_> = [k, k + m, k + 2 * m]
        .iter()
        .map(|&j| (1i128, j, j * j * dd))
        .collect();
    (-bound..=bound).into_par_iter().find_map_first(|r| {
        for d in -bound..=bound {
            let a = 2 * dd * k * d - dd * k * k * r;
            if a.abs() > bound || (r, d, a) == (0, 0, 0) {
                continue;
            }
            let v = (r, d, a);
            if pair(v, v) == 0 && exps.iter().all(|&e| pair(v, e) == 0) {
                return Some(MukaiVector::new(r, d, a));
            }
        }
        None
    })
}

/// Which of `Hom`, `Ext^1`, `Ext^2` are forced to vanish.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VanishingPattern {
    pub hom: bool,
    pub ext1: bool,
    pub ext2: bool,
}

impl VanishingPattern {
    const NONE: VanishingPattern = VanishingPattern {
        hom: false,
        ext1: false,
        ext2: false,
    };

    pub fn is_empty(&self) -> bool {
        *self == Self::NONE
    }
}

/// Vanishing of `Ext^i(E, F)` for semi-homogeneous sheaves `E`, `F` read off
/// their Mukai vectors.
///
/// The vectors are expected to be positive and isotropic; this is not checked.
/// Inside `L` two such locally free classes always pair non-positively, since
/// `<v, w> = -D rE rF (dE/rE - dF/rF)^2`.
pub fn hom_vanishing(
    v_e: &MukaiVector,
    v_f: &MukaiVector,
    e_locally_free: bool,
    f_locally_free: bool,
    params: SurfaceParams,
) -> Result<VanishingPattern> {
    for (v, lf, name) in [(v_e, e_locally_free, "E"), (v_f, f_locally_free, "F")] {
        if lf && !v.r.is_positive() {
            return Err(Error::InvalidInput(format!(
                "{name} is flagged locally free but has rank {}",
                v.r
            )));
        }
        if !lf && !v.r.is_zero() {
            return Err(Error::InvalidInput(format!(
                "{name} is flagged torsion but has rank {}",
                v.r
            )));
        }
    }
    let p = pairing(v_e, v_f, params);
    let positive = VanishingPattern {
        hom: true,
        ext1: false,
        ext2: true,
    };
    let pattern = match (e_locally_free, f_locally_free) {
        (true, true) => {
            if p.is_positive() {
                positive
            } else if p.is_negative() {
                // compare dE/rE with dF/rF; ranks are positive
                match (&v_e.d * &v_f.r).cmp(&(&v_f.d * &v_e.r)) {
                    std::cmp::Ordering::Greater => VanishingPattern {
                        hom: true,
                        ext1: true,
                        ext2: false,
                    },
                    std::cmp::Ordering::Less => VanishingPattern {
                        hom: false,
                        ext1: true,
                        ext2: true,
                    },
                    std::cmp::Ordering::Equal => VanishingPattern::NONE,
                }
            } else {
                VanishingPattern::NONE
            }
        }
        (true, false) => {
            if p.is_positive() {
                positive
            } else if p.is_negative() {
                VanishingPattern {
                    hom: false,
                    ext1: true,
                    ext2: true,
                }
            } else {
                VanishingPattern::NONE
            }
        }
        (false, false) => {
            if p.is_negative() {
                return Err(Error::InvalidInput(format!(
                    "torsion classes {v_e} and {v_f} have negative pairing {p}"
                )));
            }
            if p.is_positive() {
                positive
            } else {
                VanishingPattern::NONE
            }
        }
        (false, true) => VanishingPattern::NONE,
    };
    Ok(pattern)
}

/// `max{ 4|chi(L(pH), E)| : p = 0, +-1, +-2 }`.
pub fn hom_total_bound(v_l: &MukaiVector, v_e: &MukaiVector, params: SurfaceParams) -> BigInt {
    (-2i64..=2)
        .map(|p| {
            let twisted = v_l.twist(&BigInt::from(p), params);
            BigInt::from(4) * euler_chi(&twisted, v_e, params).abs()
        })
        .max()
        .expect("nonempty range")
}
