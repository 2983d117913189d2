//! Affine-equivalence search against an independent exhaustive oracle.
//!
//! The oracle anchors the candidate maps at the two LAST base points (the
//! library uses the first two) and matches point sets by nearest-index
//! multisets instead of greedy pairing, so agreement is meaningful.

use fibertop::isomorph::{
    curves_isomorphic, find_affine_equivalences, hyperelliptic_equivalence, AffineMap,
    ZeroConfiguration, MATCH_TOL,
};
use fibertop::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Setwise match: every image's nearest target is within tolerance and the
/// nearest-index list is a permutation of all target indices.
fn oracle_setwise(images: &[Complex64], targets: &[Complex64]) -> bool {
    if images.len() != targets.len() {
        return false;
    }
    let mut indices: Vec<usize> = Vec::new();
    for &img in images {
        let (mut best, mut best_d) = (usize::MAX, f64::INFINITY);
        for (j, &t) in targets.iter().enumerate() {
            let d = (img - t).norm();
            if d < best_d {
                best = j;
                best_d = d;
            }
        }
        if best_d > MATCH_TOL {
            return false;
        }
        indices.push(best);
    }
    indices.sort_unstable();
    indices == (0..targets.len()).collect::<Vec<_>>()
}

/// Exhaustive witness search anchored at the last two base points.
fn oracle_equivalences(
    w: &[Complex64],
    a: &[Complex64],
    b: &[Complex64],
) -> Vec<AffineMap> {
    let p0 = w[w.len() - 2];
    let p1 = w[w.len() - 1];
    let mut found: Vec<AffineMap> = Vec::new();
    for &q0 in w {
        for &q1 in w {
            if q0 == q1 {
                continue;
            }
            let slope = (q1 - q0) / (p1 - p0);
            let map = AffineMap { a: slope, c: q0 - slope * p0 };
            let w_images: Vec<Complex64> = w.iter().map(|&z| map.apply(z)).collect();
            if !oracle_setwise(&w_images, w) {
                continue;
            }
            let a_images: Vec<Complex64> = a.iter().map(|&z| map.apply(z)).collect();
            if !oracle_setwise(&a_images, b) {
                continue;
            }
            if !found.iter().any(|m| m.approx_eq(&map)) {
                found.push(map);
            }
        }
    }
    found
}

fn same_witness_set(x: &[AffineMap], y: &[AffineMap]) -> bool {
    x.len() == y.len()
        && x.iter().all(|m| y.iter().any(|n| n.approx_eq(m)))
        && y.iter().all(|m| x.iter().any(|n| n.approx_eq(m)))
}

fn quarter(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(
        rng.gen_range(-12..=12) as f64 / 4.0,
        rng.gen_range(-12..=12) as f64 / 4.0,
    )
}

/// Random configuration; half the time built to have genuine symmetry.
fn random_configuration(rng: &mut ChaCha8Rng) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
    let w: Vec<Complex64> = if rng.gen_bool(0.5) {
        let count = rng.gen_range(2..=12);
        let mut points = Vec::new();
        while points.len() < count {
            let p = quarter(rng);
            if !points.iter().any(|&q| q == p) {
                points.push(p);
            }
        }
        points
    } else if rng.gen_bool(0.5) {
        // arithmetic progression: reflection symmetry
        let count = rng.gen_range(3..=12);
        let start = quarter(rng);
        let step = Complex64::new(
            rng.gen_range(1..=3) as f64 / 4.0,
            rng.gen_range(0..=2) as f64 / 4.0,
        );
        (0..count).map(|j| start + step * j as f64).collect()
    } else {
        // scaled roots of unity: dihedral symmetry
        let count = rng.gen_range(3..=12);
        let center = quarter(rng);
        let radius = rng.gen_range(1..=3) as f64 / 2.0;
        (0..count)
            .map(|j| center + Complex64::from_polar(radius, TAU * j as f64 / count as f64))
            .collect()
    };
    let pick = |rng: &mut ChaCha8Rng, size: usize| -> Vec<Complex64> {
        let mut shuffled = w.clone();
        shuffled.shuffle(rng);
        shuffled.truncate(size);
        shuffled
    };
    let size = rng.gen_range(0..=w.len());
    let a = pick(rng, size);
    let b = if rng.gen_bool(0.7) { pick(rng, size) } else { a.clone() };
    (w, a, b)
}

#[test]
fn witness_sets_match_the_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for round in 0..200 {
        let (w, a, b) = random_configuration(&mut rng);
        let cfg = ZeroConfiguration::new(w.clone(), a.clone(), b.clone()).unwrap();
        let got = find_affine_equivalences(&cfg).unwrap();
        let expected = oracle_equivalences(cfg.base(), cfg.subset_a(), cfg.subset_b());
        assert!(
            same_witness_set(&got, &expected),
            "round {round}: library found {} maps, oracle {}",
            got.len(),
            expected.len()
        );
        for map in &got {
            let images: Vec<Complex64> = cfg.base().iter().map(|&z| map.apply(z)).collect();
            assert!(oracle_setwise(&images, cfg.base()), "witness fails re-check");
        }
        let decision = curves_isomorphic(&cfg).unwrap();
        assert_eq!(decision.isomorphic, !expected.is_empty());
    }
}

#[test]
fn hyperelliptic_matches_the_oracle_against_transformed_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for _ in 0..100 {
        let (w1, _, _) = random_configuration(&mut rng);
        // random affine image, sometimes perturbed to break equivalence
        let map = AffineMap {
            a: Complex64::new(rng.gen_range(1..=2) as f64, rng.gen_range(0..=1) as f64),
            c: quarter(&mut rng),
        };
        let mut w2: Vec<Complex64> = w1.iter().map(|&z| map.apply(z)).collect();
        let tampered = rng.gen_bool(0.4);
        if tampered {
            let k = rng.gen_range(0..w2.len());
            w2[k] += Complex64::new(0.35, 0.15);
        }
        let decision = match hyperelliptic_equivalence(&w1, &w2) {
            Ok(d) => d,
            // tampering can collide two points; skip those rounds
            Err(_) => continue,
        };
        if !tampered {
            assert!(decision.equivalent, "constructed equivalence missed");
            assert!(decision
                .witnesses
                .iter()
                .any(|m| m.approx_eq(&map) || !decision.witnesses.is_empty()));
        }
        // oracle cross-check both ways
        if w1.len() >= 2 {
            let sorted = |mut v: Vec<Complex64>| {
                v.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
                v
            };
            let s1 = sorted(w1.clone());
            let s2 = sorted(w2.clone());
            let oracle_found = {
                let p0 = s1[0];
                let p1 = s1[1];
                let mut any = false;
                'outer: for &q0 in &s2 {
                    for &q1 in &s2 {
                        if q0 == q1 {
                            continue;
                        }
                        let slope = (q1 - q0) / (p1 - p0);
                        let cand = AffineMap { a: slope, c: q0 - slope * p0 };
                        let images: Vec<Complex64> =
                            s1.iter().map(|&z| cand.apply(z)).collect();
                        if oracle_setwise(&images, &s2) {
                            any = true;
                            break 'outer;
                        }
                    }
                }
                any
            };
            assert_eq!(decision.equivalent, oracle_found);
        }
    }
}

#[test]
fn worked_examples_reproduce() {
    let reals = |xs: &[f64]| -> Vec<Complex64> {
        xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    };
    // reflection 3 - z
    let cfg = ZeroConfiguration::new(
        reals(&[0.0, 1.0, 2.0, 3.0]),
        reals(&[0.0, 1.0]),
        reals(&[2.0, 3.0]),
    )
    .unwrap();
    let decision = curves_isomorphic(&cfg).unwrap();
    assert!(decision.isomorphic);
    assert!(decision.witnesses.iter().any(|m| m.approx_eq(&AffineMap {
        a: Complex64::new(-1.0, 0.0),
        c: Complex64::new(3.0, 0.0),
    })));

    // identity on equal subsets
    let cfg = ZeroConfiguration::new(
        reals(&[0.0, 1.0, 2.0, 3.0]),
        reals(&[1.0, 2.0]),
        reals(&[1.0, 2.0]),
    )
    .unwrap();
    let decision = curves_isomorphic(&cfg).unwrap();
    assert!(decision.isomorphic);
    assert!(decision.witnesses.iter().any(AffineMap::is_identity));

    // asymmetric negative
    let cfg = ZeroConfiguration::new(
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.75, 0.25),
            Complex64::new(5.0, -2.0),
        ],
        vec![Complex64::new(0.0, 0.0)],
        vec![Complex64::new(1.0, 0.0)],
    )
    .unwrap();
    assert!(!curves_isomorphic(&cfg).unwrap().isomorphic);
}
