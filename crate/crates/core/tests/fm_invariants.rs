//! Randomized checks of the lattice action against independent computations.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use mukai_entropy::fm_group::{
    act_on_vector, char_poly3, expected_char_poly, factor_isotropic_pair, ghat_act, power,
    power_closed, rep3_matrix, theta_square,
};
use mukai_entropy::mukai_lattice::{b_form, iota, iota_inv, pairing, SurfaceParams};
use mukai_entropy::sampling::{
    random_fm, random_ghat, random_sqrt_d_matrix, random_vector, rng_from_seed,
};

fn params(d: u64) -> SurfaceParams {
    SurfaceParams::new(d).unwrap()
}

#[test]
fn action_is_an_isometry() {
    let mut rng = rng_from_seed(11);
    for _ in 0..10_000 {
        let p = params(rng.gen_range(1..=12));
        let a = random_sqrt_d_matrix(&mut rng, p, 8);
        let (v, w) = (random_vector(&mut rng, 100), random_vector(&mut rng, 100));
        assert_eq!(
            b_form(&a.act(&iota(&v)), &a.act(&iota(&w)), p),
            pairing(&v, &w, p)
        );
    }
}

#[test]
fn action_agrees_with_surd_arithmetic() {
    let mut rng = rng_from_seed(12);
    for _ in 0..500 {
        let p = params(rng.gen_range(1..=12));
        let a = random_fm(&mut rng, p, 6);
        let m = iota(&random_vector(&mut rng, 30));
        assert_eq!(ghat_act(&a.to_ghat(), &m).unwrap(), a.act(&m));
    }
}

#[test]
fn action_is_a_group_action() {
    let mut rng = rng_from_seed(13);
    for _ in 0..500 {
        let p = params(rng.gen_range(1..=12));
        let a = random_sqrt_d_matrix(&mut rng, p, 5);
        let b = random_sqrt_d_matrix(&mut rng, p, 5);
        let v = random_vector(&mut rng, 30);
        assert_eq!(
            act_on_vector(&(&a * &b), &v),
            act_on_vector(&a, &act_on_vector(&b, &v))
        );
        assert_eq!(iota_inv(&iota(&v)), v);
    }
}

#[test]
fn closed_powers_match_repeated_squaring() {
    let mut rng = rng_from_seed(14);
    for _ in 0..40 {
        let p = params(rng.gen_range(1..=12));
        let a = random_fm(&mut rng, p, 6);
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
        for n in (0..=top).step_by(if top > 100 { 7 } else { 1 }) {
            assert_eq!(
                power_closed(&a, n).to_integer(),
                Some(power(&a, n)),
                "{a} n = {n}"
            );
        }
    }
    // the periodic and parabolic branches need hand-picked matrices at D = 1
    for (a, b, c, d) in [
        (0, 1, -1, 0),
        (1, 1, -1, 0),
        (0, -1, 1, 0),
        (1, -1, 1, 0),
        (2, 1, -1, 0),
        (1, 0, 3, 1),
    ] {
        let m = mukai_entropy::fm_group::make_fm(a, b, c, d, params(1)).unwrap();
        for n in 0..=600 {
            assert_eq!(power_closed(&m, n).to_integer(), Some(power(&m, n)));
        }
    }
}

#[test]
fn rep3_characteristic_polynomial() {
    let mut rng = rng_from_seed(15);
    for d in 1..=12 {
        for _ in 0..100 {
            let a = random_sqrt_d_matrix(&mut rng, params(d), 8);
            let got = char_poly3(&rep3_matrix(&a));
            assert_eq!(got, expected_char_poly(&a.trace(), &BigInt::one()), "{a}");
        }
    }
}

#[test]
fn factorization_roundtrip() {
    let mut rng = rng_from_seed(16);
    for _ in 0..1000 {
        let p = params(rng.gen_range(1..=12));
        let g = random_ghat(&mut rng, p, 6);
        let (v1, v2) = g.isotropic_pair();
        let back = factor_isotropic_pair(&v1, &v2, p).unwrap();
        assert_eq!(back.isotropic_pair(), (v1, v2));
        // equal as matrices of surds, up to a global sign
        let (x, y) = (back.surd_entries(), g.surd_entries());
        let flat = |m: [[mukai_entropy::exact_arith::Surd; 2]; 2]| {
            m.into_iter().flatten().collect::<Vec<_>>()
        };
        let (x, y) = (flat(x), flat(y));
        let neg: Vec<_> = y.iter().cloned().map(|s| -s).collect();
        assert!(x == y || x == neg, "{g} vs {back}");
    }
}

#[test]
fn squares_have_the_sqrt_d_shape() {
    let mut rng = rng_from_seed(17);
    for _ in 0..500 {
        let p = params(rng.gen_range(1..=12));
        let g = random_ghat(&mut rng, p, 6);
        let sq = theta_square(&g).unwrap();
        assert!(sq.matrix.det().is_one());
        assert!(!sq.matrix.trace().is_negative());
        assert!(sq.shift == 0 || sq.shift == -2);
    }
}
