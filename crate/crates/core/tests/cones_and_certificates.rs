use std::collections::BTreeSet;

use invquartic::certify::{self, random_hyperplane_point};
use invquartic::cones::{self, Position};
use invquartic::exactpoly::InvariantQuartic;
use invquartic::halfdeg::{alpha, beta, p4_max_int, p4_min_int, phi, two_value_point};
use invquartic::rational::{frac, from_u32, int};
use invquartic::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_form(rng: &mut ChaCha8Rng) -> InvariantQuartic {
    InvariantQuartic::new(
        frac(rng.random_range(-60..=60), rng.random_range(1..=12)),
        frac(rng.random_range(-60..=60), rng.random_range(1..=12)),
    )
}

#[test]
fn phi_is_normalized_p4_at_two_value_points() {
    for n in 3..=200u32 {
        for l in 1..=n {
            let p = two_value_point(n, l).unwrap();
            assert_eq!(p.coordinates().iter().sum::<i64>(), 0);
            let p2 = p.p2();
            let big_n = BigInt::from(n) + 1;
            assert_eq!(p2, BigInt::from(l) * (&big_n - l) * &big_n);
            assert_eq!(
                phi(n, l).unwrap(),
                Rational::new(p.p4(), &p2 * &p2),
                "n={n} l={l}"
            );
            assert_eq!(phi(n, l).unwrap(), phi(n, n + 1 - l).unwrap());
        }
    }
}

#[test]
fn exact_inequality_identities() {
    for n in 3..=200u32 {
        let nn = from_u32(n);
        let n1 = &nn + int(1);
        for l in 1..=n {
            let ll = from_u32(l);
            let phi_v = phi(n, l).unwrap();
            let den = &n1 * (&n1 - &ll) * &ll;
            // beta - phi has the sign of (l-1)(n-l)(n+1)^2, zero only at l in {1, n}
            let tight = (&ll - int(1)) * (&nn - &ll) * &n1 * &n1;
            let gap = beta(n) - &phi_v;
            assert_eq!(gap.signum(), tight.signum());
            // phi - 1/(n+1) = (n+1-2l)^2 / ((n+1)(n+1-l)l)
            let sq = (&n1 - int(2) * &ll) * (&n1 - int(2) * &ll);
            assert_eq!(&phi_v - n1.recip(), &sq / &den);
            if n % 2 == 0 {
                // phi - alpha = (n+1)((2l-(n+1))^2 - 1) / (l(n+1-l) n (n+2))
                let num = &n1 * (&sq - int(1));
                let d = &ll * (&n1 - &ll) * &nn * (&nn + int(2));
                assert_eq!(&phi_v - alpha(n), num / d);
                assert!(!(&sq - int(1)).is_negative());
            }
        }
    }
}

#[test]
fn argument_sets_of_extrema() {
    for n in 3..=200u32 {
        let max = p4_max_int(n);
        assert_eq!(max.argmins, BTreeSet::from([1, n]));
        let min = p4_min_int(n);
        let want = if n % 2 == 1 {
            BTreeSet::from([n.div_ceil(2)])
        } else {
            BTreeSet::from([n / 2, n / 2 + 1])
        };
        assert_eq!(min.argmins, want, "n = {n}");
        assert_eq!(min.value == from_u32(n + 1).recip(), n % 2 == 1);
        assert!(min.value >= from_u32(n + 1).recip());
    }
}

#[test]
fn ray_identities() {
    for n in 3..=200u32 {
        let rays = cones::extremal_rays(n).unwrap();
        let gens = cones::sos_generators(n).unwrap();
        let nn = from_u32(n);
        assert_eq!(gens.s2, rays.g.scale(&(int(1) - &nn + &nn * &nn)));
        // S1 is a positive multiple of F exactly when n is odd
        let ratio = &gens.s1.b / &rays.f.b;
        let parallel = gens.s1.a == &rays.f.a * &ratio && ratio.is_positive();
        assert_eq!(parallel, n % 2 == 1, "n = {n}");
        for ray in [&rays.f, &rays.g] {
            assert!((1..=n).any(|l| (&ray.a + &ray.b * phi(n, l).unwrap()).is_zero()));
        }
    }
}

#[test]
fn even_case_raw_coordinate() {
    for n in (4..=200u32).step_by(2) {
        let f = cones::extremal_rays(n).unwrap().f;
        let (_, b) = cones::sos_coordinates_raw(n, &f).unwrap();
        let nb = BigInt::from(n);
        let den = 4 - 6 * &nb + &nb * &nb + nb.pow(4);
        assert_eq!(b, Rational::new(BigInt::from(-4), den));
    }
}

#[test]
fn classification_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4000 {
        let n = rng.random_range(3..=30);
        let f = random_form(&mut rng);
        let m = cones::classify(n, &f).unwrap();
        if m.sos != Position::Outside {
            assert_ne!(m.psd, Position::Outside, "n={n} f={f}");
        }
        assert_eq!(m.witness.is_some(), m.psd == Position::Outside);
        assert_eq!(m.sos_coords.is_some(), m.sos != Position::Outside);
        if let Some(w) = &m.witness {
            let v = f
                .expand(n as usize + 1)
                .evaluate(&w.to_rationals())
                .unwrap();
            assert!(v.is_negative());
        }
        let lambda = frac(rng.random_range(1..=50), rng.random_range(1..=50));
        let scaled = cones::classify(n, &f.scale(&lambda)).unwrap();
        assert_eq!((scaled.psd, scaled.sos), (m.psd, m.sos));
        if cones::global_psd(n, &f).unwrap() {
            assert_ne!(m.psd, Position::Outside);
        }
    }
}

#[test]
fn gap_witness_on_even_n() {
    for n in 3..=60u32 {
        match cones::gap_witness(n).unwrap() {
            Some(f) => {
                assert_eq!(n % 2, 0);
                let m = cones::classify(n, &f).unwrap();
                assert_ne!(m.psd, Position::Outside);
                assert_eq!(m.sos, Position::Outside);
            }
            None => assert_eq!(n % 2, 1),
        }
    }
}

#[test]
fn certificate_soundness_on_many_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for n in 3..=5 {
        for c in [certify::cert_s1(n), certify::cert_s2(n).unwrap()] {
            assert!(certify::verify(&c));
            let nvars = n as usize + 1;
            for _ in 0..1000 {
                let pt = random_hyperplane_point(&mut rng, nvars);
                let rhs: Rational = c
                    .squares
                    .iter()
                    .map(|s| &s.weight * s.base.evaluate(&pt).unwrap().pow(2))
                    .sum();
                assert_eq!(c.target.evaluate(&pt), rhs);
            }
        }
    }
}

/// Builds and fully verifies certificates for `pairs(n)` random nonnegative
/// (a', b') per n.
fn completeness(ns: std::ops::RangeInclusive<u32>, pairs: impl Fn(u32) -> usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in ns {
        let gens = cones::sos_generators(n).unwrap();
        let s1_len = certify::cert_s1(n).squares.len();
        let s2_len = certify::cert_s2(n).unwrap().squares.len();
        for _ in 0..pairs(n) {
            let a = frac(rng.random_range(0..=40), rng.random_range(1..=9));
            let b = frac(rng.random_range(0..=40), rng.random_range(1..=9));
            let f = &gens.s1.scale(&a) + &gens.s2.scale(&b);
            let c = certify::cert_for(n, &f).unwrap();
            assert!(c.squares.iter().all(|s| !s.weight.is_negative()));
            let want = usize::from(!a.is_zero()) * s1_len + usize::from(!b.is_zero()) * s2_len;
            assert_eq!(c.squares.len(), want);
            assert!(certify::verify(&c), "n={n} a={a} b={b}");
        }
    }
}

#[test]
fn certificate_completeness_on_the_cone() {
    // A thousand pairs per n is cheap only for small n; larger n are sampled
    // here and covered in full by the ignored test below.
    completeness(3..=12, |n| if n <= 5 { 1000 } else { 20 });
}

#[test]
#[ignore = "several minutes on one core"]
fn certificate_completeness_on_the_cone_full() {
    completeness(3..=12, |_| 1000);
}

#[test]
fn global_certificates_for_random_globally_psd_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut done = 0;
    while done < 40 {
        let n = rng.random_range(3..=7);
        let f = random_form(&mut rng);
        match certify::cert_global(n, &f) {
            Ok(c) => {
                assert!(certify::verify(&c));
                assert!(!c.modulo_p1);
                done += 1;
            }
            Err(e) => {
                assert_eq!(e, invquartic::Error::NotGloballyPsd);
                assert!(!cones::global_psd(n, &f).unwrap());
            }
        }
    }
}
