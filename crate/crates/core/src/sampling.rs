//! Seeded generators for the randomized suites.
//!
//! Matrices are drawn as short words in the unipotent generators
//! `[[1, +-sqrt(D)], [0, 1]]` and `[[1, 0], [+-sqrt(D), 1]]`, which keeps every
//! sample inside the `ad - bcD = 1` shape without rejection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fm_group::{from_matrix, FMMatrix, GhatElement, SqrtDMatrix};
use crate::mukai_lattice::{MukaiVector, SurfaceParams};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn generator(k: u32, params: SurfaceParams) -> SqrtDMatrix {
    match k % 4 {
        0 => SqrtDMatrix::new(1, 1, 0, 1, params),
        1 => SqrtDMatrix::new(1, -1, 0, 1, params),
        2 => SqrtDMatrix::new(1, 0, 1, 1, params),
        _ => SqrtDMatrix::new(1, 0, -1, 1, params),
    }
}

/// A product of `1..=max_len` generators, optionally negated.
pub fn random_sqrt_d_matrix<R: Rng>(
    rng: &mut R,
    params: SurfaceParams,
    max_len: usize,
) -> SqrtDMatrix {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut m = SqrtDMatrix::identity(params);
    for _ in 0..len {
        m = &m * &generator(rng.gen_range(0..4), params);
    }
    if rng.gen_bool(0.5) {
        m.neg()
    } else {
        m
    }
}

pub fn random_fm<R: Rng>(rng: &mut R, params: SurfaceParams, max_len: usize) -> FMMatrix {
    from_matrix(random_sqrt_d_matrix(rng, params, max_len)).expect("generators are unimodular")
}

/// A matrix with `tr > 2` and `b != 0`.
pub fn random_hyperbolic<R: Rng>(rng: &mut R, params: SurfaceParams, max_len: usize) -> FMMatrix {
    loop {
        let a = random_fm(rng, params, max_len.max(2));
        if a.trace() > BigInt::from(2) && !a.b.is_zero() {
            return a;
        }
    }
}

pub fn random_vector<R: Rng>(rng: &mut R, bound: i64) -> MukaiVector {
    let mut x = || rng.gen_range(-bound..=bound);
    MukaiVector::new(x(), x(), x())
}

/// A valid `(p1, q1, p2, q2, r1, r2)` element with `r1 r2 = D` and `p1 > 0`.
pub fn random_ghat<R: Rng>(rng: &mut R, params: SurfaceParams, bound: i64) -> GhatElement {
    let dd = params.d();
    let divisors: Vec<u64> = (1..=dd).filter(|k| dd.is_multiple_of(*k)).collect();
    loop {
        let r1 = divisors[rng.gen_range(0..divisors.len())];
        let r2 = dd / r1;
        let p1 = BigInt::from(rng.gen_range(1..=bound));
        let p2 = BigInt::from(rng.gen_range(-bound..=bound));
        // solve p1 r1 q2 - p2 r2 q1 = 1
        let (u, w) = (&p1 * r1, &p2 * r2);
        let e = u.extended_gcd(&w);
        if !e.gcd.is_one() {
            continue;
        }
        let (mut q2, mut q1) = (e.x, -e.y);
        // move along the solution line to vary the sample
        let t = BigInt::from(rng.gen_range(-2..=2));
        q2 += &t * &w;
        q1 += &t * &u;
        if q1.abs() > BigInt::from(bound * bound) || q2.abs() > BigInt::from(bound * bound) {
            continue;
        }
        return GhatElement::new(p1, q1, p2, q2, r1, r2, params).expect("constructed with det 1");
    }
}

/// A random element of `SL(2, Z)` as a word in the elementary generators.
pub fn random_sl2<R: Rng>(rng: &mut R, max_len: usize) -> [[BigInt; 2]; 2] {
    let m = random_sqrt_d_matrix(rng, SurfaceParams::new(1).expect("D = 1"), max_len);
    [[m.a, m.b], [m.c, m.d]]
}
