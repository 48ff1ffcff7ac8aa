//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use mukai_entropy::entropy::{
    choose_twist, delta0_sequence, entropy_closed, entropy_estimate, estimate_growth, kt_check,
    mass_growth_estimate, slope_fixed_point, slope_step, SlopeState,
};
use mukai_entropy::exact_arith::{eigenvalues, QuadraticReal, Surd};
use mukai_entropy::fm_group::{
    char_poly3, expected_char_poly, factor_isotropic_pair, make_fm, power, power_closed,
    rep3_matrix, FMMatrix,
};
use mukai_entropy::mukai_lattice::{b_form, iota, lemma_d_search, pairing, SurfaceParams};
use mukai_entropy::sampling::{
    random_fm, random_ghat, random_hyperbolic, random_sl2, random_sqrt_d_matrix, random_vector,
    rng_from_seed,
};
use mukai_entropy::sympow::{mat2, mat2_mul, ppav_entropy, sym_power, Mat2};

const LOG_RHO: f64 = 1.9248473002384139;

fn params(d: u64) -> SurfaceParams {
    SurfaceParams::new(d).unwrap()
}

fn fm(a: i64, b: i64, c: i64, d: i64) -> FMMatrix {
    make_fm(a, b, c, d, params(1)).unwrap()
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn table_coverage() -> Verdict {
    let r = Rational64::new;
    let cases = [
        (fm(1, 0, 0, 1), r(0, 1)),
        (fm(2, 1, 1, 1), r(0, 1)),
        (fm(2, 1, -1, 0), r(0, 1)),
        (fm(1, 1, -1, 0), r(-2, 3)),
        (fm(0, 1, -1, 0), r(-1, 1)),
        (fm(2, -1, -1, 1), r(-2, 1)),
        (fm(1, -1, 1, 0), r(-4, 3)),
        (fm(0, -1, 1, 0), r(-1, 1)),
    ];
    let start = Instant::now();
    let results: Vec<_> = cases.iter().map(|(a, _)| entropy_closed(a)).collect();
    let elapsed = start.elapsed();
    let mut bad = Vec::new();
    for ((a, slope), h) in cases.iter().zip(&results) {
        let rho_ok = if a.trace() <= BigInt::from(2) {
            h.rho == QuadraticReal::one()
        } else {
            !h.rho_is_one()
        };
        if h.slope != *slope || !rho_ok {
            bad.push(a.to_string());
        }
    }
    let fast = elapsed < Duration::from_millis(1);
    verdict(
        bad.is_empty() && fast,
        format!(
            "{} cases, mismatches {bad:?}, {elapsed:?} (< 1 ms)",
            cases.len()
        ),
    )
}

fn random_hyperbolic_suite() -> Vec<FMMatrix> {
    let mut rng = rng_from_seed(2);
    let ds = [1, 2, 3, 6];
    (0..20)
        .map(|i| random_hyperbolic(&mut rng, params(ds[i % 4]), 6))
        .collect()
}

fn growth_matches_spectral_radius() -> Verdict {
    let start = Instant::now();
    let first = (entropy_estimate(&fm(2, 1, 1, 1), 0.0, 40).unwrap() - LOG_RHO).abs();
    let mut worst = 0.0f64;
    let mut failures = 0;
    for a in random_hyperbolic_suite() {
        let report = kt_check(&a, 40, 1e-6).unwrap();
        worst = worst.max(report.difference.abs());
        failures += usize::from(!report.pass);
    }
    let elapsed = start.elapsed();
    verdict(
        first < 1e-6 && failures == 0 && elapsed < Duration::from_secs(10),
        format!("|err| at (2,1,1,1) = {first:.2e}; 20 random: worst {worst:.2e}, {failures} failures; {elapsed:?}"),
    )
}

fn drift_check() -> Verdict {
    let a = fm(2, -1, -1, 1);
    let errs: Vec<f64> = [0.0, 1.0, 2.0]
        .iter()
        .map(|&t| (entropy_estimate(&a, t, 40).unwrap() - (LOG_RHO - 2.0 * t)).abs())
        .collect();
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    verdict(
        worst < 1e-6,
        format!("worst |error| over t = 0, 1, 2: {worst:.2e}"),
    )
}

fn parabolic() -> Verdict {
    let a = fm(2, 1, -1, 0);
    let m = choose_twist(&a).unwrap();
    let seq = delta0_sequence(&a, m, 202).unwrap();
    let v = &seq.delta_values;
    let second: Vec<BigInt> = (10..=200)
        .map(|n| &v[n + 1] - &v[n] * 2 + &v[n - 1])
        .collect();
    let constant = second.windows(2).all(|w| w[0] == w[1]);
    let estimate = estimate_growth(&a, 200).unwrap().growth;
    verdict(
        constant && estimate.abs() < 1e-3,
        format!(
            "m = {m}, second difference constant = {constant} ({}), estimate at n = 200: {estimate:.2e}",
            second[0]
        ),
    )
}

fn isometry() -> Verdict {
    let mut rng = rng_from_seed(5);
    let mut failures = 0;
    for _ in 0..10_000 {
        let p = params(rng.gen_range(1..=12));
        let a = random_sqrt_d_matrix(&mut rng, p, 8);
        let (v, w) = (random_vector(&mut rng, 100), random_vector(&mut rng, 100));
        if b_form(&a.act(&iota(&v)), &a.act(&iota(&w)), p) != pairing(&v, &w, p) {
            failures += 1;
        }
    }
    verdict(failures == 0, format!("{failures} failures in 10000 cases"))
}

fn power_oracle() -> Verdict {
    let mut rng = rng_from_seed(6);
    let mut matrices: Vec<FMMatrix> = [
        (2, 1, 1, 1),
        (2, -1, -1, 1),
        (2, 1, -1, 0),
        (1, 0, 4, 1),
        (1, 1, -1, 0),
        (1, -1, 1, 0),
        (0, 1, -1, 0),
        (0, -1, 1, 0),
    ]
    .iter()
    .map(|&(a, b, c, d)| fm(a, b, c, d))
    .collect();
    for d in 1..=12 {
        for _ in 0..3 {
            matrices.push(random_fm(&mut rng, params(d), 6));
        }
    }
    let mut failures = 0;
    let mut checked = 0u64;
    for a in &matrices {
        let tr = a.trace();
        let top = if tr > BigInt::from(2) {
            50
        } else if tr == BigInt::from(2) {
            1000
        } else if tr.is_zero() {
            400
        } else {
            600
        };
        for n in 0..=top {
            checked += 1;
            if power_closed(a, n).to_integer() != Some(power(a, n)) {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!(
            "{failures} failures over {} matrices, {checked} powers",
            matrices.len()
        ),
    )
}

fn rep3() -> Verdict {
    let mut rng = rng_from_seed(7);
    let mut failures = 0;
    for d in 1..=12 {
        for _ in 0..100 {
            let a = random_sqrt_d_matrix(&mut rng, params(d), 8);
            if char_poly3(&rep3_matrix(&a)) != expected_char_poly(&a.trace(), &BigInt::one()) {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!("{failures} failures in 1200 matrices"),
    )
}

fn lemma_d() -> Verdict {
    let start = Instant::now();
    let mut found = Vec::new();
    for d in 1..=10 {
        for k in -3..=3 {
            for m in 1..=3 {
                if let Some(v) = lemma_d_search(params(d), k, m, 30) {
                    found.push(format!("D={d} k={k} m={m}: {v}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        found.is_empty() && elapsed < Duration::from_secs(5),
        format!("210 searches, {} hits {found:?}, {elapsed:?}", found.len()),
    )
}

fn factorization() -> Verdict {
    let mut rng = rng_from_seed(9);
    let mut failures = 0;
    for _ in 0..1000 {
        let p = params(rng.gen_range(1..=12));
        let g = random_ghat(&mut rng, p, 8);
        let (v1, v2) = g.isotropic_pair();
        let ok = match factor_isotropic_pair(&v1, &v2, p) {
            Ok(back) => {
                let flat = |m: [[Surd; 2]; 2]| m.into_iter().flatten().collect::<Vec<_>>();
                let (x, y) = (flat(back.surd_entries()), flat(g.surd_entries()));
                let neg: Vec<Surd> = y.iter().cloned().map(|s| -s).collect();
                x == y || x == neg
            }
            Err(_) => false,
        };
        failures += usize::from(!ok);
    }
    verdict(failures == 0, format!("{failures} failures in 1000 tuples"))
}

fn spectrum_matches(m: &Mat2, d: u32) -> bool {
    let rep = sym_power(m, d).unwrap();
    let n = rep.size();
    let f = DMatrix::from_fn(n, n, |i, j| rep.matrix[i][j].to_f64().unwrap());
    let mut got: Vec<Complex64> = f.complex_eigenvalues().iter().copied().collect();
    let tr = (&m[0][0] + &m[1][1]).to_f64().unwrap();
    let root = Complex64::new(tr * tr - 4.0, 0.0).sqrt();
    let (alpha, beta) = ((tr + root) / 2.0, (tr - root) / 2.0);
    (0..=d as i32).all(|i| {
        let want = alpha.powi(i) * beta.powi(d as i32 - i);
        let best = (0..got.len())
            .min_by(|&x, &y| (got[x] - want).norm().total_cmp(&(got[y] - want).norm()))
            .unwrap();
        let ok = (got[best] - want).norm() <= 1e-9 * want.norm().max(1.0);
        got.swap_remove(best);
        ok
    })
}

fn symmetric_powers() -> Verdict {
    let mut rng = rng_from_seed(10);
    let mut hom_failures = 0;
    for i in 0..1000 {
        let d = (i % 5) as u32 + 1;
        let (m, n) = (random_sl2(&mut rng, 6), random_sl2(&mut rng, 6));
        let lhs = sym_power(&mat2_mul(&m, &n), d).unwrap();
        let rhs = sym_power(&m, d).unwrap().mul(&sym_power(&n, d).unwrap());
        hom_failures += usize::from(lhs != rhs);
    }
    let mut spec_failures = 0;
    let mut spec_cases = 0;
    while spec_cases < 200 {
        let len = rng.gen_range(1..=8);
        let m = random_sl2(&mut rng, len);
        let tr = (&m[0][0] + &m[1][1]).abs();
        // |tr| = 2 gives a Jordan block, outside the reach of a float eigensolver
        if tr > BigInt::from(20) || tr == BigInt::from(2) {
            continue;
        }
        for d in [2, 3] {
            spec_failures += usize::from(!spectrum_matches(&m, d));
        }
        spec_cases += 1;
    }
    let alpha: f64 = (3.0 + 5f64.sqrt()) / 2.0;
    let ppav_err =
        (ppav_entropy(&mat2(-2, -1, -1, -1), 2, 1.0).unwrap() - (2.0 * alpha.ln() - 2.0)).abs();
    verdict(
        hom_failures == 0 && spec_failures == 0 && ppav_err < 1e-9,
        format!(
            "homomorphism failures {hom_failures}/1000, spectrum failures {spec_failures}/{}, ppav |error| {ppav_err:.1e}",
            2 * spec_cases
        ),
    )
}

fn mass_growth() -> Verdict {
    let a = fm(2, 1, 1, 1);
    let mass = mass_growth_estimate(&a, Complex64::new(0.0, 1.0), 1, 40).unwrap();
    let est = entropy_estimate(&a, 0.0, 40).unwrap();
    let diff = (mass - est).abs();
    verdict(
        diff < 1e-6,
        format!("mass {mass:.15} vs estimate {est:.15}, |diff| {diff:.1e}"),
    )
}

/// A rational point at distance `< radius` from `s`, or `None` when rounding
/// pushed it out.
fn basin_start<R: Rng>(
    rng: &mut R,
    s: &QuadraticReal,
    radius: &QuadraticReal,
) -> Option<QuadraticReal> {
    let u: f64 = rng.gen_range(-0.999..0.999);
    let approx = s.to_f64() + u * radius.to_f64();
    let scale = 1i64 << 40;
    let x = QuadraticReal::from_rational(BigRational::new(
        BigInt::from((approx * scale as f64).round() as i64),
        BigInt::from(scale),
    ));
    ((&x - s).abs() < *radius).then_some(x)
}

fn slope_dynamics() -> Verdict {
    let mut rng = rng_from_seed(12);
    let mut matrices = vec![fm(2, 1, 1, 1), fm(2, -1, -1, 1)];
    matrices.extend(random_hyperbolic_suite());
    let mut failures = 0;
    let mut checked = 0;
    for a in &matrices {
        let s = slope_fixed_point(a).unwrap();
        let (alpha, _) = eigenvalues(&a.trace(), &BigInt::one()).unwrap();
        let bd = BigRational::from_integer((&a.b * a.params().d_big()).abs());
        let radius = (&alpha - &QuadraticReal::one()).scale(&bd.recip());
        let mut done = 0;
        while done < 100 {
            let Some(x) = basin_start(&mut rng, &s, &radius) else {
                continue;
            };
            let next = slope_step(a, &SlopeState::new(x.clone())).unwrap().x;
            let bound = (&x - &s).abs().checked_div(&alpha).unwrap();
            failures += usize::from((&next - &s).abs() > bound);
            done += 1;
            checked += 1;
        }
    }
    let s = slope_fixed_point(&fm(2, 1, 1, 1)).unwrap().to_f64();
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let fixed_err = (s - golden).abs();
    verdict(
        failures == 0 && fixed_err < 1e-12,
        format!("{failures} contraction failures in {checked} starts; |s - (sqrt5-1)/2| = {fixed_err:.1e}"),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        ("closed-form table coverage", table_coverage),
        ("growth estimate equals log spectral radius", growth_matches_spectral_radius),
        ("shift drift", drift_check),
        ("parabolic case", parabolic),
        ("isometry suite", isometry),
        ("power oracle", power_oracle),
        ("rep3 characteristic polynomial", rep3),
        (
            "no isotropic vector orthogonal to three line bundles",
            lemma_d,
        ),
        ("factorization roundtrip", factorization),
        ("symmetric powers", symmetric_powers),
        ("mass growth", mass_growth),
        ("slope dynamics", slope_dynamics),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        all &= v.pass;
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
