//! Property tests for numeric lifting: monodromy against the combinatorial
//! cycles for random curves, residual and distance bookkeeping, homotopy
//! invariance, reversal, concatenation, and the exact sign-action checks.
//!
//! Zero sets live on the quarter-lattice inside |w| <= 1.5 (nonzero ones
//! with |w| >= 0.75), and probe paths stay within |z| <= 2, so |f| stays
//! small enough for 1e-10 absolute residuals.

use fibertop::continuation::{
    check_double_cover_intersection, check_quotient_lemma, cross_validate_monodromy,
    lift_path, numeric_monodromy, z2z2_action, CurvePair, Involution, NumericCurve,
    TriplePoint,
};
use fibertop::covers::SuperellipticSpec;
use fibertop::perm::Permutation;
use fibertop::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

fn random_zero_set(rng: &mut ChaCha8Rng, max_count: usize) -> Vec<Complex64> {
    let count = rng.gen_range(1..=max_count);
    let mut zeros: Vec<Complex64> = Vec::new();
    let mut origin_used = false;
    while zeros.len() < count {
        if !origin_used && rng.gen_bool(0.2) {
            origin_used = true;
            zeros.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let w = Complex64::new(
            rng.gen_range(-6..=6) as f64 / 4.0,
            rng.gen_range(-6..=6) as f64 / 4.0,
        );
        if w.norm() >= 0.75
            && w.norm() <= 1.5
            && !zeros.iter().any(|&u| u == w)
        {
            zeros.push(w);
        }
    }
    zeros
}

fn circle(center: Complex64, radius: f64) -> Vec<Complex64> {
    let sides = 64;
    let base = center + Complex64::new(radius, 0.0);
    (0..=sides)
        .map(|k| {
            if k == 0 || k == sides {
                base
            } else {
                center + Complex64::from_polar(radius, TAU * k as f64 / sides as f64)
            }
        })
        .collect()
}

#[test]
fn numeric_monodromy_matches_combinatorial_cycles_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for q in 2..=5 {
        for _ in 0..8 {
            let zeros = random_zero_set(&mut rng, 8);
            let curve = NumericCurve::from_zeros(q, &zeros).unwrap();
            let spec = SuperellipticSpec::new(q, zeros).unwrap();
            let check = cross_validate_monodromy(&curve, &spec, 1e-10).unwrap();
            assert!(check.all_match, "q={q}: some zero disagreed");
        }
    }
}

#[test]
fn residuals_stay_within_tolerance_on_random_lifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..40 {
        let q = rng.gen_range(2..=5);
        let zeros = random_zero_set(&mut rng, 8);
        let curve = NumericCurve::from_zeros(q, &zeros).unwrap();
        let gap: f64 = zeros
            .iter()
            .map(|&w| {
                zeros
                    .iter()
                    .filter(|&&u| u != w)
                    .map(|&u| (u - w).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min);
        let radius = (gap / 2.0).min(0.2);
        let path = circle(zeros[0], radius);
        let start = curve.fiber(path[0]).unwrap()[0];
        let lift = lift_path(&curve, &path, start, 1e-10).unwrap();
        for &(_, z, w) in &lift.samples {
            let residual = (w.powu(q as u32) - curve.eval(z).unwrap()).norm();
            assert!(residual <= 1e-10, "residual {residual:e}");
        }
        // the 64-gon's closest approach to the center is its apothem
        let apothem = radius * (PI / 64.0).cos();
        assert!((lift.min_branch_distance - apothem).abs() <= radius * 1e-9);
    }
}

#[test]
fn homotopic_detours_agree_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..30 {
        let q = rng.gen_range(2..=4);
        let zeros = random_zero_set(&mut rng, 6);
        let curve = NumericCurve::from_zeros(q, &zeros).unwrap();
        // both paths run along a short arc of the radius-1.9 circle, whose
        // chords stay outside the zero disk; the detour bulges to 1.95
        let theta = rng.gen_range(0.0..TAU);
        let arc = |offset_deg: f64, r: f64| -> Complex64 {
            Complex64::from_polar(r, theta + offset_deg.to_radians())
        };
        let direct = vec![arc(0.0, 1.9), arc(20.0, 1.9), arc(40.0, 1.9)];
        let detour = vec![
            arc(0.0, 1.9),
            arc(10.0, 1.95),
            arc(20.0, 1.9),
            arc(30.0, 1.95),
            arc(40.0, 1.9),
        ];
        let start = curve.fiber(direct[0]).unwrap()[rng.gen_range(0..q)];
        let end_a = lift_path(&curve, &direct, start, 1e-10).unwrap().end_value();
        let end_b = lift_path(&curve, &detour, start, 1e-10).unwrap().end_value();
        assert!((end_a - end_b).norm() < 1e-8);
    }
}

#[test]
fn reversing_a_monodromy_loop_undoes_it() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..30 {
        let q = rng.gen_range(2..=5);
        let zeros = random_zero_set(&mut rng, 6);
        let curve = NumericCurve::from_zeros(q, &zeros).unwrap();
        let forward = circle(zeros[0], 0.12);
        let mut backward = forward.clone();
        backward.reverse();
        let start = curve.fiber(forward[0]).unwrap()[rng.gen_range(0..q)];
        let mid = lift_path(&curve, &forward, start, 1e-10).unwrap().end_value();
        let back = lift_path(&curve, &backward, mid, 1e-10).unwrap().end_value();
        assert!((back - start).norm() < 1e-8);
    }
}

#[test]
fn concatenated_loops_compose_the_monodromy() {
    for q in 3..=5 {
        let curve = NumericCurve::from_zeros(q, &[Complex64::new(0.0, 0.0)]).unwrap();
        let single = circle(Complex64::new(0.0, 0.0), 1.0);
        let mut doubled = single.clone();
        doubled.extend_from_slice(&single[1..]);
        let perm = numeric_monodromy(&curve, Complex64::new(0.0, 0.0), 1.0, 1e-10).unwrap();
        let squared = perm.then(&perm);
        let roots = curve.fiber(single[0]).unwrap();
        for (k, &root) in roots.iter().enumerate() {
            let end = lift_path(&curve, &doubled, root, 1e-10).unwrap().end_value();
            let expected = roots[squared.apply(k)];
            assert!((end - expected).norm() < 1e-8, "q={q} sheet {k}");
        }
    }
}

#[test]
fn expected_cycles_are_the_standard_ones() {
    for q in 2..=5 {
        let curve = NumericCurve::from_zeros(q, &[Complex64::new(0.5, 0.5)]).unwrap();
        let perm = numeric_monodromy(&curve, Complex64::new(0.5, 0.5), 0.3, 1e-10).unwrap();
        let standard =
            Permutation::from_images((0..q).map(|k| (k + 1) % q).collect()).unwrap();
        assert_eq!(perm, standard);
    }
}

fn random_on_curve_sample(
    rng: &mut ChaCha8Rng,
    pair: &CurvePair,
) -> TriplePoint {
    loop {
        let z1 = Complex64::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
        let f = pair.first().eval(z1).unwrap();
        let g = pair.second().eval(z1).unwrap();
        let mut z2 = f.sqrt();
        let mut z3 = g.sqrt();
        if rng.gen_bool(0.5) {
            z2 = -z2;
        }
        if rng.gen_bool(0.5) {
            z3 = -z3;
        }
        if let Ok(sample) = TriplePoint::on_pair(pair, z1, z2, z3, 1e-10) {
            return sample;
        }
    }
}

#[test]
fn quotient_and_intersection_checks_pass_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..10 {
        let f = NumericCurve::from_zeros(2, &random_zero_set(&mut rng, 5)).unwrap();
        let g = NumericCurve::from_zeros(2, &random_zero_set(&mut rng, 5)).unwrap();
        let pair = CurvePair::new(f, g).unwrap();
        let samples: Vec<TriplePoint> =
            (0..10).map(|_| random_on_curve_sample(&mut rng, &pair)).collect();

        let quotient = check_quotient_lemma(&pair, &samples, 1e-10).unwrap();
        assert_eq!(quotient.max_discrepancy, 0.0, "projection must be exact");

        let intersection = check_double_cover_intersection(&pair, &samples, 1e-10).unwrap();
        assert!(intersection.all_exactly_one);
        assert!(intersection.injectivity_ok);

        for sample in &samples {
            let a = z2z2_action(sample, Involution::FlipThird);
            let b = z2z2_action(&a, Involution::FlipThird);
            assert_eq!(&b, sample, "FlipThird must be an exact involution");
            let ab = z2z2_action(&a, Involution::FlipSecond);
            let ba = z2z2_action(
                &z2z2_action(sample, Involution::FlipSecond),
                Involution::FlipThird,
            );
            assert_eq!(ab, ba, "the two flips must commute exactly");
        }
    }
}
