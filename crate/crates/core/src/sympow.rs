//! Action of `GL(2, Z)` matrices on binary forms of degree `d`.
//!
//! `M = [[a, b], [c, d]]` acts by the substitution `x -> ax + cy`,
//! `y -> bx + dy`. Column `j` of the result holds the coefficients of the image
//! of `x^{d-j} y^j` in the basis `x^d, x^{d-1}y, ..., y^d`, which makes
//! `M -> Sym^d(M)` multiplicative.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{eigenvalues, QuadraticReal};

pub type Mat2 = [[BigInt; 2]; 2];

pub fn mat2(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
    [[a.into(), b.into()], [c.into(), d.into()]]
}

pub fn mat2_mul(m: &Mat2, n: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &m[i][0] * &n[0][j] + &m[i][1] * &n[1][j]))
}

pub fn mat2_det(m: &Mat2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPowerRep {
    pub d: u32,
    /// Row-major, `(d+1) x (d+1)`.
    pub matrix: Vec<Vec<BigInt>>,
}

impl SymPowerRep {
    pub fn size(&self) -> usize {
        self.d as usize + 1
    }

    pub fn mul(&self, other: &SymPowerRep) -> SymPowerRep {
        assert_eq!(self.d, other.d);
        let n = self.size();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| &self.matrix[i][k] * &other.matrix[k][j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        SymPowerRep { d: self.d, matrix }
    }
}

/// Coefficients in `x^{deg-i} y^i` order.
fn poly_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, u) in p.iter().enumerate() {
        for (j, v) in q.iter().enumerate() {
            out[i + j] += u * v;
        }
    }
    out
}

fn poly_pow(p: &[BigInt], k: u32) -> Vec<BigInt> {
    (0..k).fold(vec![BigInt::one()], |acc, _| poly_mul(&acc, p))
}

pub fn sym_power(m: &Mat2, d: u32) -> Result<SymPowerRep> {
    let det = mat2_det(m);
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular { det });
    }
    if d == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let image_x = [m[0][0].clone(), m[1][0].clone()];
    let image_y = [m[0][1].clone(), m[1][1].clone()];
    let n = d as usize + 1;
    let columns: Vec<Vec<BigInt>> = (0..=d)
        .map(|j| poly_mul(&poly_pow(&image_x, d - j), &poly_pow(&image_y, j)))
        .collect();
    let matrix = (0..n)
        .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
        .collect();
    Ok(SymPowerRep { d, matrix })
}

/// `d log|alpha| - d t` for `det M = 1`, `tr M < -2`.
pub fn ppav_entropy(m: &Mat2, d: u32, t: f64) -> Result<f64> {
    let det = mat2_det(m);
    if !det.is_one() {
        return Err(Error::NotUnimodular { det });
    }
    let trace = &m[0][0] + &m[1][1];
    if trace >= BigInt::from(-2) {
        return Err(Error::OutOfScopeTrace { trace });
    }
    let alpha = largest_abs_eigenvalue(m);
    Ok(d as f64 * alpha.ln() - d as f64 * t)
}

/// `|alpha|` for a matrix with real eigenvalues.
pub fn largest_abs_eigenvalue(m: &Mat2) -> QuadraticReal {
    let trace = (&m[0][0] + &m[1][1]).abs();
    let (alpha, _) =
        eigenvalues(&trace, &mat2_det(m).abs()).expect("|tr| > 2 with det 1 has real eigenvalues");
    alpha
}
