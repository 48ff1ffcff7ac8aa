//! Spectra of symmetric powers against a floating-point eigensolver.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;

use mukai_entropy::sampling::{random_sl2, rng_from_seed};
use mukai_entropy::sympow::{largest_abs_eigenvalue, mat2, ppav_entropy, sym_power, Mat2};

fn expected_spectrum(m: &Mat2, d: u32) -> Vec<Complex64> {
    let tr = (&m[0][0] + &m[1][1]).to_f64().unwrap();
    let root = Complex64::new(tr * tr - 4.0, 0.0).sqrt();
    let alpha = (tr + root) / 2.0;
    let beta = (tr - root) / 2.0;
    (0..=d as i32)
        .map(|i| alpha.powi(i) * beta.powi(d as i32 - i))
        .collect()
}

fn numeric_spectrum(m: &Mat2, d: u32) -> Vec<Complex64> {
    let rep = sym_power(m, d).unwrap();
    let n = rep.size();
    let f = DMatrix::from_fn(n, n, |i, j| rep.matrix[i][j].to_f64().unwrap());
    f.complex_eigenvalues().iter().copied().collect()
}

/// Greedy matching of two multisets of complex numbers.
fn spectra_match(mut got: Vec<Complex64>, want: &[Complex64], tol: f64) -> bool {
    want.iter().all(|w| {
        let (k, dist) = got
            .iter()
            .enumerate()
            .map(|(k, g)| (k, (g - w).norm()))
            .fold(
                (usize::MAX, f64::INFINITY),
                |b, x| if x.1 < b.1 { x } else { b },
            );
        if dist <= tol * w.norm().max(1.0) {
            got.swap_remove(k);
            true
        } else {
            false
        }
    })
}

#[test]
fn eigenvalues_are_products_of_source_eigenvalues() {
    let mut rng = rng_from_seed(31);
    let mut tested = 0;
    while tested < 300 {
        let len = rng.gen_range(1..=8);
        let m = random_sl2(&mut rng, len);
        let tr = (&m[0][0] + &m[1][1]).to_i64().unwrap();
        // |tr| = 2 away from +-E is a Jordan block, ill-conditioned for any eigensolver
        if tr.abs() > 20 || tr.abs() == 2 {
            continue;
        }
        for d in [2, 3] {
            let want = expected_spectrum(&m, d);
            assert!(
                spectra_match(numeric_spectrum(&m, d), &want, 1e-9),
                "{m:?} d = {d}"
            );
            if tr.abs() > 2 {
                let radius = numeric_spectrum(&m, d)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                let alpha = largest_abs_eigenvalue(&m).to_f64();
                assert!((radius - alpha.powi(d as i32)).abs() <= 1e-9 * radius);
            }
        }
        tested += 1;
    }
}

#[test]
fn ppav_entropy_for_negative_trace() {
    let m = mat2(-2, -1, -1, -1);
    let alpha: f64 = (3.0 + 5f64.sqrt()) / 2.0;
    let h = ppav_entropy(&m, 2, 1.0).unwrap();
    assert!((h - (2.0 * alpha.ln() - 2.0)).abs() < 1e-9);
}
