//! Cohomological Fourier-Mukai actions on `Sym2(Z, D)`.
//!
//! An autoequivalence acts on the Mukai lattice through `M -> g M g^t`, where
//! `g` has entries that are integer multiples of square roots of divisors of
//! `D`. Autoequivalences preserving `L` act by matrices of the shape
//! `[[a, b*sqrt(D)], [c*sqrt(D), d]]`, stored here as [`SqrtDMatrix`].

use std::fmt;
use std::ops::{Deref, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{eigenvalues, exact_sqrt, QuadraticReal, Surd, SurdSum};
use crate::mukai_lattice::{iota, iota_inv, pairing, MukaiVector, SurfaceParams, Sym2Matrix};

/// Integer coefficients of `[[a, b*sqrt(D)], [c*sqrt(D), d]]`.
///
/// Products of such matrices keep the shape, so this also represents powers
/// and other intermediate results that need not have trace `>= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtDMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    params: SurfaceParams,
}

impl SqrtDMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
        params: SurfaceParams,
    ) -> Self {
        SqrtDMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            params,
        }
    }

    pub fn identity(params: SurfaceParams) -> Self {
        SqrtDMatrix::new(1, 0, 0, 1, params)
    }

    pub fn params(&self) -> SurfaceParams {
        self.params
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c * self.params.d_big()
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn neg(&self) -> Self {
        SqrtDMatrix {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
            params: self.params,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// `g M g^t`, expanded so that every `sqrt(D)` pairs up with another.
    pub fn act(&self, m: &Sym2Matrix) -> Sym2Matrix {
        let dd = self.params.d_big();
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (x, y, z) = (&m.x, &m.y, &m.z);
        let two = BigInt::from(2);
        Sym2Matrix {
            x: a * a * x + &two * a * b * &dd * y + b * b * &dd * z,
            y: a * c * x + (a * d + b * c * &dd) * y + b * d * z,
            z: c * c * &dd * x + &two * c * d * &dd * y + d * d * z,
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl Mul for &SqrtDMatrix {
    type Output = SqrtDMatrix;
    fn mul(self, rhs: &SqrtDMatrix) -> SqrtDMatrix {
        assert_eq!(self.params, rhs.params, "matrices over different D");
        let dd = self.params.d_big();
        SqrtDMatrix {
            a: &self.a * &rhs.a + &self.b * &rhs.c * &dd,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b * &dd + &self.d * &rhs.d,
            params: self.params,
        }
    }
}

impl fmt::Display for SqrtDMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

/// A matrix `A = [[a, b*sqrt(D)], [c*sqrt(D), d]]` with `ad - bcD = 1` and
/// `tr A >= 0`, the representative of `+-A` attached to an autoequivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FMMatrix {
    m: SqrtDMatrix,
    negated: bool,
}

impl FMMatrix {
    /// Whether the input to [`make_fm`] was replaced by its negative.
    pub fn negated(&self) -> bool {
        self.negated
    }

    pub fn as_matrix(&self) -> &SqrtDMatrix {
        &self.m
    }

    /// The same transform viewed as an element with square-root entries.
    pub fn to_ghat(&self) -> GhatElement {
        GhatElement::new(
            self.m.a.clone(),
            self.m.c.clone(),
            self.m.b.clone(),
            self.m.d.clone(),
            1,
            self.m.params.d(),
            self.m.params,
        )
        .expect("unimodular FM matrix is a valid G-hat element")
    }
}

impl Deref for FMMatrix {
    type Target = SqrtDMatrix;
    fn deref(&self) -> &SqrtDMatrix {
        &self.m
    }
}

impl fmt::Display for FMMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.m.fmt(f)
    }
}

pub fn make_fm(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    c: impl Into<BigInt>,
    d: impl Into<BigInt>,
    params: SurfaceParams,
) -> Result<FMMatrix> {
    from_matrix(SqrtDMatrix::new(a, b, c, d, params))
}

/// Validates `det = 1` and normalizes to `tr >= 0`.
pub fn from_matrix(m: SqrtDMatrix) -> Result<FMMatrix> {
    let det = m.det();
    if !det.is_one() {
        return Err(Error::NotUnimodular { det });
    }
    if m.trace().is_negative() {
        Ok(FMMatrix {
            m: m.neg(),
            negated: true,
        })
    } else {
        Ok(FMMatrix { m, negated: false })
    }
}

pub fn act_on_vector(a: &SqrtDMatrix, v: &MukaiVector) -> MukaiVector {
    iota_inv(&a.act(&iota(v)))
}

/// One application of `A` to the column `(p, q*sqrt(D))`.
pub fn transform_pq(a: &SqrtDMatrix, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let dd = a.params.d_big();
    (&a.a * p + &a.b * dd * q, &a.c * p + &a.d * q)
}

/// `A^n` by binary exponentiation.
pub fn power(a: &SqrtDMatrix, mut n: u64) -> SqrtDMatrix {
    let mut acc = SqrtDMatrix::identity(a.params);
    let mut base = a.clone();
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

/// Coefficients of `A^n` over `Q(sqrt(tr^2 - 4))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPower {
    pub a: QuadraticReal,
    pub b: QuadraticReal,
    pub c: QuadraticReal,
    pub d: QuadraticReal,
    params: SurfaceParams,
}

impl ClosedPower {
    fn from_integers(m: &SqrtDMatrix) -> Self {
        let q = |n: &BigInt| QuadraticReal::from_integer(n.clone());
        ClosedPower {
            a: q(&m.a),
            b: q(&m.b),
            c: q(&m.c),
            d: q(&m.d),
            params: m.params,
        }
    }

    /// The integer matrix, if every coefficient is an integer.
    pub fn to_integer(&self) -> Option<SqrtDMatrix> {
        Some(SqrtDMatrix::new(
            self.a.as_integer()?,
            self.b.as_integer()?,
            self.c.as_integer()?,
            self.d.as_integer()?,
            self.params,
        ))
    }
}

/// `A^n` from the closed forms: `alpha^n P + beta^n Q` for `tr > 2`,
/// `E + n(A - E)` for `tr = 2`, and periodicity `A^4 = E`, `A^6 = E` for
/// `tr = 0, 1`.
pub fn power_closed(a: &FMMatrix, n: u64) -> ClosedPower {
    let tr = a.trace();
    let coeffs = [&a.a, &a.b, &a.c, &a.d];
    let ident = [1, 0, 0, 1];
    if tr > BigInt::from(2) {
        let (alpha, beta) = eigenvalues(&tr, &BigInt::one()).expect("tr > 2 has real roots");
        let gap = &alpha - &beta;
        let alpha_n = alpha.pow(n);
        let beta_n = beta.pow(n);
        let entry = |k: usize| {
            let ak = QuadraticReal::from_integer(coeffs[k].clone());
            let ek = QuadraticReal::from_integer(ident[k]);
            let p = &(&ak - &(&beta * &ek)) / &gap;
            let q = &(&ak - &(&alpha * &ek)) / &(-&gap);
            &(&alpha_n * &p) + &(&beta_n * &q)
        };
        ClosedPower {
            a: entry(0),
            b: entry(1),
            c: entry(2),
            d: entry(3),
            params: a.params(),
        }
    } else if tr == BigInt::from(2) {
        let n = BigInt::from(n);
        let m = SqrtDMatrix::new(
            BigInt::one() + &n * (&a.a - 1),
            &n * &a.b,
            &n * &a.c,
            BigInt::one() + &n * (&a.d - 1),
            a.params(),
        );
        ClosedPower::from_integers(&m)
    } else {
        let period = if tr.is_zero() { 4 } else { 6 };
        let mut m = SqrtDMatrix::identity(a.params());
        for _ in 0..(n % period) {
            m = &m * a.as_matrix();
        }
        ClosedPower::from_integers(&m)
    }
}

pub type Mat3 = [[BigInt; 3]; 3];

/// Matrix of `v -> A.v` in the coordinates `(r, d, a)`; column `j` is the
/// image of the `j`-th basis vector.
pub fn rep3_matrix(a: &SqrtDMatrix) -> Mat3 {
    let basis = [
        MukaiVector::new(1, 0, 0),
        MukaiVector::new(0, 1, 0),
        MukaiVector::new(0, 0, 1),
    ];
    let cols: Vec<MukaiVector> = basis.iter().map(|e| act_on_vector(a, e)).collect();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| match i {
            0 => cols[j].r.clone(),
            1 => cols[j].d.clone(),
            _ => cols[j].a.clone(),
        })
    })
}

/// Coefficients `[1, c2, c1, c0]` of `det(xI - m) = x^3 + c2 x^2 + c1 x + c0`.
pub fn char_poly3(m: &Mat3) -> [BigInt; 4] {
    let tr = &m[0][0] + &m[1][1] + &m[2][2];
    let minor = |i: usize, j: usize| &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i];
    let c1 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    [BigInt::one(), -tr, c1, -det]
}

/// `(x^2 - (tr^2 - 2 det) x + det^2)(x - det)` expanded.
pub fn expected_char_poly(trace: &BigInt, det: &BigInt) -> [BigInt; 4] {
    let t2 = trace * trace;
    [
        BigInt::one(),
        -(&t2 - det),
        det * (&t2 - det),
        -(det * det * det),
    ]
}

/// `[[p1*sqrt(r1), p2*sqrt(r2)], [q1*sqrt(r2), q2*sqrt(r1)]]` with `r1 r2 = D`
/// and `p1 q2 r1 - p2 q1 r2 = +-1`, up to a global sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GhatElement {
    pub p1: BigInt,
    pub q1: BigInt,
    pub p2: BigInt,
    pub q2: BigInt,
    pub r1: u64,
    pub r2: u64,
}

impl GhatElement {
    /// Validates the invariants and picks the sign whose first nonzero entry
    /// among `(p1, q2, p2)` is positive.
    pub fn new(
        p1: impl Into<BigInt>,
        q1: impl Into<BigInt>,
        p2: impl Into<BigInt>,
        q2: impl Into<BigInt>,
        r1: u64,
        r2: u64,
        params: SurfaceParams,
    ) -> Result<Self> {
        let mut g = GhatElement {
            p1: p1.into(),
            q1: q1.into(),
            p2: p2.into(),
            q2: q2.into(),
            r1,
            r2,
        };
        if r1 == 0 || r2 == 0 || r1.checked_mul(r2) != Some(params.d()) {
            return Err(Error::InvalidInput(format!(
                "r1 = {r1}, r2 = {r2} do not satisfy r1 r2 = D = {}",
                params.d()
            )));
        }
        let det = g.det();
        if !det.abs().is_one() {
            return Err(Error::InvalidInput(format!(
                "p1 q2 r1 - p2 q1 r2 = {det}, expected +-1"
            )));
        }
        let lead = [&g.p1, &g.q2, &g.p2]
            .into_iter()
            .find(|x| !x.is_zero())
            .cloned()
            .unwrap_or_else(BigInt::zero);
        if lead.is_negative() {
            g = GhatElement {
                p1: -g.p1,
                q1: -g.q1,
                p2: -g.p2,
                q2: -g.q2,
                r1,
                r2,
            };
        }
        Ok(g)
    }

    pub fn params(&self) -> SurfaceParams {
        SurfaceParams::new(self.r1 * self.r2).expect("r1 r2 >= 1")
    }

    /// `p1 q2 r1 - p2 q1 r2`.
    pub fn det(&self) -> BigInt {
        &self.p1 * &self.q2 * BigInt::from(self.r1) - &self.p2 * &self.q1 * BigInt::from(self.r2)
    }

    pub fn surd_entries(&self) -> [[Surd; 2]; 2] {
        [
            [
                Surd::new(self.p1.clone(), self.r1),
                Surd::new(self.p2.clone(), self.r2),
            ],
            [
                Surd::new(self.q1.clone(), self.r2),
                Surd::new(self.q2.clone(), self.r1),
            ],
        ]
    }

    /// The images of `O` and the point class: `v1 = (p1^2 r1, p1 q1, q1^2 r2)`,
    /// `v2 = (p2^2 r2, p2 q2, q2^2 r1)`.
    pub fn isotropic_pair(&self) -> (MukaiVector, MukaiVector) {
        let (r1, r2) = (BigInt::from(self.r1), BigInt::from(self.r2));
        (
            MukaiVector::new(
                &self.p1 * &self.p1 * &r1,
                &self.p1 * &self.q1,
                &self.q1 * &self.q1 * &r2,
            ),
            MukaiVector::new(
                &self.p2 * &self.p2 * &r2,
                &self.p2 * &self.q2,
                &self.q2 * &self.q2 * &r1,
            ),
        )
    }
}

impl fmt::Display for GhatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{},{})",
            self.p1, self.q1, self.p2, self.q2, self.r1, self.r2
        )
    }
}

type SurdMatrix = [[SurdSum; 2]; 2];

fn surd_matmul(x: &SurdMatrix, y: &SurdMatrix) -> SurdMatrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]))
    })
}

fn ghat_surd_matrix(g: &GhatElement) -> SurdMatrix {
    let e = g.surd_entries();
    std::array::from_fn(|i| std::array::from_fn(|j| SurdSum::from(e[i][j].clone())))
}

/// `g M g^t` evaluated with surd arithmetic.
pub fn ghat_act(g: &GhatElement, m: &Sym2Matrix) -> Result<Sym2Matrix> {
    let params = g.params();
    let dd = BigUint::from(params.d());
    let gm = ghat_surd_matrix(g);
    let gt: SurdMatrix = std::array::from_fn(|i| std::array::from_fn(|j| gm[j][i].clone()));
    let off = SurdSum::from(Surd::new(m.y.clone(), dd.clone()));
    let mm: SurdMatrix = [
        [SurdSum::from(Surd::integer(m.x.clone())), off.clone()],
        [off, SurdSum::from(Surd::integer(m.z.clone()))],
    ];
    let out = surd_matmul(&surd_matmul(&gm, &mm), &gt);
    let bad = |what: &str, s: &SurdSum| Error::InternalNonIntegral(format!("{what} entry {s}"));
    let x = out[0][0]
        .as_integer()
        .ok_or_else(|| bad("(1,1)", &out[0][0]))?;
    let z = out[1][1]
        .as_integer()
        .ok_or_else(|| bad("(2,2)", &out[1][1]))?;
    let y = out[0][1]
        .as_multiple_of_sqrt(&dd)
        .ok_or_else(|| bad("(1,2)", &out[0][1]))?;
    Ok(Sym2Matrix { x, y, z })
}

/// An autoequivalence modulo translations and `Pic^0`, with an even shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedFM {
    pub matrix: FMMatrix,
    pub shift: i64,
}

/// `g^2` as an integral matrix, with the shift picked up by the square.
///
/// When `p2 = 0` and `p1 + q2 = 0` hold together, the `p2 = 0` rule wins and
/// the shift is 0.
pub fn theta_square(g: &GhatElement) -> Result<ShiftedFM> {
    let params = g.params();
    let dd = BigUint::from(params.d());
    let gm = ghat_surd_matrix(g);
    let sq = surd_matmul(&gm, &gm);
    let closed = |s: &SurdSum| Error::NotClosed(s.to_string());
    let a = sq[0][0].as_integer().ok_or_else(|| closed(&sq[0][0]))?;
    let d = sq[1][1].as_integer().ok_or_else(|| closed(&sq[1][1]))?;
    let b = sq[0][1]
        .as_multiple_of_sqrt(&dd)
        .ok_or_else(|| closed(&sq[0][1]))?;
    let c = sq[1][0]
        .as_multiple_of_sqrt(&dd)
        .ok_or_else(|| closed(&sq[1][0]))?;
    let matrix = make_fm(a, b, c, d, params)?;
    let s = &g.p1 + &g.q2;
    let shift = if g.p2.is_zero() {
        0
    } else if s.is_zero() || (&s * &g.p2).is_negative() {
        -2
    } else {
        0
    };
    Ok(ShiftedFM { matrix, shift })
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..)
        .take_while(|k| k * k <= n)
        .filter(|k| n.is_multiple_of(*k))
        .flat_map(|k| [k, n / k])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `n / k` when `k` divides `n` and the quotient is a perfect square; returns the root.
fn square_quotient(n: &BigInt, k: u64) -> Option<BigInt> {
    let (q, r) = n.div_rem(&BigInt::from(k));
    if !r.is_zero() {
        return None;
    }
    exact_sqrt(&q)
}

/// Recovers `(p1, q1, p2, q2, r1, r2)` from the images `v1`, `v2` of `O` and
/// of the point class.
pub fn factor_isotropic_pair(
    v1: &MukaiVector,
    v2: &MukaiVector,
    params: SurfaceParams,
) -> Result<GhatElement> {
    let reject = |why: String| Err(Error::NotFactorizable(why));
    for (name, v) in [("v1", v1), ("v2", v2)] {
        if !v.is_isotropic(params) || !v.is_positive() {
            return reject(format!("{name} = {v} is not positive isotropic"));
        }
    }
    let p = pairing(v1, v2, params);
    if p != BigInt::from(-1) {
        return reject(format!("<v1, v2> = {p}, expected -1"));
    }
    let dd = params.d();
    for r1 in divisors(dd) {
        let r2 = dd / r1;
        // v1 = (p1^2 r1, p1 q1, q1^2 r2) with p1 > 0
        let Some(p1) = square_quotient(&v1.r, r1).filter(|p| p.is_positive()) else {
            continue;
        };
        let (q1, rem) = v1.d.div_rem(&p1);
        if !rem.is_zero() || &q1 * &q1 * BigInt::from(r2) != v1.a {
            continue;
        }
        // v2 = (p2^2 r2, p2 q2, q2^2 r1), determined up to a joint sign
        let Some(p2) = square_quotient(&v2.r, r2) else {
            continue;
        };
        let q2 = if p2.is_zero() {
            match square_quotient(&v2.a, r1) {
                Some(q) => q,
                None => continue,
            }
        } else {
            let (q, rem) = v2.d.div_rem(&p2);
            if !rem.is_zero() {
                continue;
            }
            q
        };
        if &p2 * &q2 != v2.d || &q2 * &q2 * BigInt::from(r1) != v2.a {
            continue;
        }
        for sign in [1, -1] {
            let (p2s, q2s): (BigInt, BigInt) = (&p2 * sign, &q2 * sign);
            let det: BigInt = &p1 * &q2s * BigInt::from(r1) - &p2s * &q1 * BigInt::from(r2);
            if det.is_one() {
                return GhatElement::new(p1.clone(), q1.clone(), p2s, q2s, r1, r2, params);
            }
        }
    }
    reject(format!("no splitting r1 r2 = {dd} reproduces {v1}, {v2}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(d: u64) -> SurfaceParams {
        SurfaceParams::new(d).unwrap()
    }

    fn fm(a: i64, b: i64, c: i64, d: i64, dd: u64) -> FMMatrix {
        make_fm(a, b, c, d, sp(dd)).unwrap()
    }

    fn mat(a: i64, b: i64, c: i64, d: i64, dd: u64) -> SqrtDMatrix {
        SqrtDMatrix::new(a, b, c, d, sp(dd))
    }

    #[test]
    fn make_fm_examples() {
        let a = fm(2, 1, 1, 1, 1);
        assert_eq!(a.trace(), BigInt::from(3));
        assert!(!a.negated());
        let n = fm(-2, -1, -1, -1, 1);
        assert_eq!(n.as_matrix(), &mat(2, 1, 1, 1, 1));
        assert!(n.negated());
        assert_eq!(
            make_fm(1, 1, 1, 1, sp(1)).unwrap_err(),
            Error::NotUnimodular {
                det: BigInt::zero()
            }
        );
    }

    #[test]
    fn action_examples() {
        let id = SqrtDMatrix::identity(sp(3));
        let m = Sym2Matrix::new(4, -1, 7);
        assert_eq!(id.act(&m), m);
        let a = fm(2, 1, 1, 1, 1);
        assert_eq!(a.act(&Sym2Matrix::new(1, 0, 0)), Sym2Matrix::new(4, 2, 1));
        assert_eq!(
            act_on_vector(&a, &MukaiVector::new(1, 0, 0)),
            MukaiVector::new(4, 2, 1)
        );
        assert_eq!(
            ghat_act(&a.to_ghat(), &Sym2Matrix::new(1, 0, 0)).unwrap(),
            Sym2Matrix::new(4, 2, 1)
        );
    }

    #[test]
    fn transform_pq_examples() {
        let a = fm(2, 1, 1, 1, 1);
        assert_eq!(
            transform_pq(&a, &1.into(), &0.into()),
            (BigInt::from(2), BigInt::from(1))
        );
        let id = SqrtDMatrix::identity(sp(5));
        assert_eq!(
            transform_pq(&id, &3.into(), &(-4).into()),
            (BigInt::from(3), BigInt::from(-4))
        );
    }

    #[test]
    fn power_examples() {
        let a = fm(2, 1, 1, 1, 1);
        assert_eq!(power(&a, 2), mat(5, 3, 3, 2, 1));
        assert_eq!(power(&a, 3), mat(13, 8, 8, 5, 1));
        assert!(power(&a, 0).is_identity());
        assert!(power(&mat(0, 1, -1, 0, 1), 4).is_identity());
    }

    #[test]
    fn closed_power_examples() {
        let par = fm(2, 1, -1, 0, 1);
        assert_eq!(
            power_closed(&par, 5).to_integer().unwrap(),
            mat(6, 5, -5, -4, 1)
        );
        let hyp = fm(2, 1, 1, 1, 1);
        assert_eq!(
            power_closed(&hyp, 3).to_integer().unwrap(),
            mat(13, 8, 8, 5, 1)
        );
        let ell = fm(1, 1, -1, 0, 1);
        assert!(power_closed(&ell, 6).to_integer().unwrap().is_identity());
        assert_eq!(power(&ell, 3), SqrtDMatrix::identity(sp(1)).neg());
    }

    #[test]
    fn rep3_examples() {
        let id = rep3_matrix(&SqrtDMatrix::identity(sp(4)));
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, BigInt::from((i == j) as i64));
            }
        }
        let cp = char_poly3(&rep3_matrix(&fm(2, 1, 1, 1, 1)));
        // (x^2 - 7x + 1)(x - 1) = x^3 - 8x^2 + 8x - 1
        assert_eq!(cp, [1, -8, 8, -1].map(BigInt::from));
        let cp = char_poly3(&rep3_matrix(&fm(0, 1, -1, 0, 1)));
        // roots {-1, -1, 1}: (x + 1)^2 (x - 1) = x^3 + x^2 - x - 1
        assert_eq!(cp, [1, 1, -1, -1].map(BigInt::from));
    }

    #[test]
    fn theta_square_examples() {
        let g = GhatElement::new(1, 1, 1, 1, 2, 1, sp(2)).unwrap();
        let sq = theta_square(&g).unwrap();
        assert_eq!(sq.matrix.as_matrix(), &mat(3, 2, 2, 3, 2));
        assert_eq!(sq.shift, 0);
        // p2 = 0: diag-type [[sqrt(2), 0], [sqrt(2)... ]] with p1 q2 r1 = 1 needs r1 = 1
        let g = GhatElement::new(1, 3, 0, 1, 1, 2, sp(2)).unwrap();
        assert_eq!(theta_square(&g).unwrap().shift, 0);
        // p1 + q2 = 0
        let g = GhatElement::new(1, 0, 1, -1, 1, 1, sp(1)).unwrap();
        assert_eq!(g.det(), BigInt::from(-1));
        assert_eq!(theta_square(&g).unwrap().shift, -2);
        // (p1 + q2) p2 < 0
        let g = GhatElement::new(2, 1, -1, 0, 1, 1, sp(1)).unwrap();
        assert_eq!(theta_square(&g).unwrap().shift, -2);
    }

    #[test]
    fn ghat_sign_normalization() {
        let g = GhatElement::new(-1, -1, -1, -1, 2, 1, sp(2)).unwrap();
        assert_eq!(g, GhatElement::new(1, 1, 1, 1, 2, 1, sp(2)).unwrap());
        assert!(GhatElement::new(1, 1, 1, 1, 2, 2, sp(2)).is_err());
        assert!(GhatElement::new(2, 1, 1, 2, 1, 1, sp(1)).is_err());
    }

    #[test]
    fn factor_examples() {
        let g = factor_isotropic_pair(
            &MukaiVector::new(2, 1, 1),
            &MukaiVector::new(1, 1, 2),
            sp(2),
        )
        .unwrap();
        assert_eq!(
            (g.p1.clone(), g.q1.clone(), g.p2.clone(), g.q2.clone()),
            (1.into(), 1.into(), 1.into(), 1.into())
        );
        assert_eq!((g.r1, g.r2), (2, 1));
        for dd in 1..10 {
            let g = factor_isotropic_pair(
                &MukaiVector::new(1, 0, 0),
                &MukaiVector::new(0, 0, 1),
                sp(dd),
            )
            .unwrap();
            assert_eq!(g, GhatElement::new(1, 0, 0, 1, 1, dd, sp(dd)).unwrap());
        }
        for dd in 2..10i64 {
            let err = factor_isotropic_pair(
                &MukaiVector::new(1, 0, 0),
                &MukaiVector::new(1, 1, dd),
                sp(dd as u64),
            )
            .unwrap_err();
            assert!(matches!(err, Error::NotFactorizable(_)));
        }
    }

    #[test]
    fn factor_recovers_fm_images() {
        // columns of A give the images of O and the point class
        let a = fm(2, 1, 1, 1, 1);
        let v1 = act_on_vector(&a, &MukaiVector::new(1, 0, 0));
        let v2 = act_on_vector(&a, &MukaiVector::new(0, 0, 1));
        let g = factor_isotropic_pair(&v1, &v2, sp(1)).unwrap();
        assert_eq!(g, a.to_ghat());
    }
}
