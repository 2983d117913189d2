//! Property tests for the infinite-cover and infinite-pair models: end
//! partitions against a raw orbit oracle, stabilization of the exterior
//! partition, non-planarity flags, and exhaustion monotonicity.

mod common;

use fibertop::asymptotic::{
    ends_of_infinite_cover, ends_of_infinite_fiber_product, exhaustion_trace,
    exterior_orbit_partition, fiber_exhaustion_trace, InfiniteCoverModel, SecondFactor,
};
use fibertop::covers::BranchedCoverSpec;
use fibertop::perm::Permutation;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_model(rng: &mut ChaCha8Rng) -> InfiniteCoverModel {
    let degree = rng.gen_range(2..=6);
    let prefix = if rng.gen_bool(0.3) {
        BranchedCoverSpec::new(degree, Vec::new()).unwrap()
    } else {
        let count = rng.gen_range(1..=3);
        let entries = common::random_points(rng, count)
            .into_iter()
            .map(|z| (z, common::random_non_identity(rng, degree)))
            .collect();
        BranchedCoverSpec::new(degree, entries).unwrap()
    };
    let tail = (0..rng.gen_range(1..=3))
        .map(|_| common::random_non_identity(rng, degree))
        .collect();
    InfiniteCoverModel::new(degree, prefix, tail).unwrap()
}

/// Orbits of the recurring group (tail generators plus the prefix boundary
/// product) by raw BFS on image arrays.
fn raw_end_partition(model: &InfiniteCoverModel) -> Vec<Vec<usize>> {
    let mut generators: Vec<Vec<usize>> = model
        .tail_generators()
        .iter()
        .map(|g| g.images().to_vec())
        .collect();
    generators.push(model.prefix().infinity_monodromy().images().to_vec());

    let degree = model.degree();
    let mut seen = vec![false; degree];
    let mut orbits = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = vec![start];
        let mut orbit = Vec::new();
        while let Some(s) = queue.pop() {
            orbit.push(s);
            for images in &generators {
                let forward = images[s];
                let backward = images.iter().position(|&t| t == s).unwrap();
                for next in [forward, backward] {
                    if !seen[next] {
                        seen[next] = true;
                        queue.push(next);
                    }
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| o[0]);
    orbits
}

#[test]
fn end_partition_matches_raw_orbit_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let model = random_model(&mut rng);
        let report = ends_of_infinite_cover(&model);
        let got: Vec<Vec<usize>> =
            report.ends.iter().map(|e| e.sheets.clone()).collect();
        assert_eq!(got, raw_end_partition(&model));
    }
}

#[test]
fn non_planar_flag_matches_direct_recursion_test() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let model = random_model(&mut rng);
        for end in ends_of_infinite_cover(&model).ends {
            let moves_inside = model.tail_generators().iter().any(|g| {
                end.sheets.iter().any(|&s| g.apply(s) != s)
            });
            assert_eq!(end.non_planar, moves_inside);
        }
    }
}

#[test]
fn exterior_partition_is_stable_past_reported_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let model = random_model(&mut rng);
        let report = ends_of_infinite_cover(&model);
        let limit: Vec<Vec<usize>> =
            report.ends.iter().map(|e| e.sheets.clone()).collect();
        for offset in [0.0, 0.7, 1.5, 4.0] {
            let rho = report.stabilization_radius + offset;
            assert_eq!(
                exterior_orbit_partition(&model, rho),
                limit,
                "radius {rho}"
            );
        }
    }
}

#[test]
fn exhaustion_interior_genus_is_non_decreasing() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..60 {
        let model = random_model(&mut rng);
        let radii: Vec<f64> = (0..6)
            .map(|k| model.tail_radius() + 0.5 + k as f64 * 2.0)
            .collect();
        let trace = exhaustion_trace(&model, &radii);
        for pair in trace.windows(2) {
            assert!(
                pair[1].interior_genus >= pair[0].interior_genus,
                "genus dropped from {} to {}",
                pair[0].interior_genus,
                pair[1].interior_genus
            );
        }
        let last = trace.last().unwrap();
        assert_eq!(last.exterior_components, ends_of_infinite_cover(&model).ends.len());
    }
}

#[test]
fn truncations_of_the_tail_stay_connected_when_ends_are_one() {
    // hyperelliptic tail over a transposition-only model: one end forces
    // every deep truncation to be connected outside small radii
    let prefix = BranchedCoverSpec::new(2, Vec::new()).unwrap();
    let tail = vec![Permutation::from_images(vec![1, 0]).unwrap()];
    let model = InfiniteCoverModel::new(2, prefix, tail).unwrap();
    let report = ends_of_infinite_cover(&model);
    assert_eq!(report.ends.len(), 1);
    assert!(report.ends[0].non_planar);
    for k in 0..5 {
        let truncation = model.truncate_at(2.5 + 2.0 * k as f64);
        assert!(truncation.is_connected());
    }
}

#[test]
fn shared_zero_pairs_have_one_end_and_connected_truncations() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..40 {
        // f = g: fully shared zeros, both hyperelliptic
        let count = rng.gen_range(0..=2);
        let entries = common::random_points(&mut rng, count)
            .into_iter()
            .map(|z| (z, Permutation::from_images(vec![1, 0]).unwrap()))
            .collect();
        let prefix = BranchedCoverSpec::new(2, entries).unwrap();
        let tail = vec![Permutation::from_images(vec![1, 0]).unwrap()];
        let model = InfiniteCoverModel::new(2, prefix, tail).unwrap();
        let report =
            ends_of_infinite_fiber_product(&model, SecondFactor::Infinite(&model)).unwrap();
        assert_eq!(report.ends.len(), 1, "shared-zero pair has one end");

        let radii: Vec<f64> = (0..5).map(|k| model.tail_radius() + 0.5 + k as f64).collect();
        let trace =
            fiber_exhaustion_trace(&model, SecondFactor::Infinite(&model), &radii).unwrap();
        for step in &trace {
            assert!(step.interior_connected, "radius {}", step.radius);
        }
    }
}

#[test]
fn finite_even_second_factor_gives_two_ends_across_radii() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..40 {
        let count = 2 * rng.gen_range(1..=2);
        let points = common::random_points(&mut rng, count);
        let entries: Vec<_> = points
            .iter()
            .map(|&z| (z, Permutation::from_images(vec![1, 0]).unwrap()))
            .collect();
        let prefix = BranchedCoverSpec::new(2, entries.clone()).unwrap();
        let tail = vec![Permutation::from_images(vec![1, 0]).unwrap()];
        let model = InfiniteCoverModel::new(2, prefix, tail).unwrap();
        let finite = BranchedCoverSpec::new(2, entries).unwrap();
        let report =
            ends_of_infinite_fiber_product(&model, SecondFactor::Finite(&finite)).unwrap();
        assert_eq!(report.ends.len(), 2, "finite even zero set gives q = 2 ends");

        let radii: Vec<f64> = (0..5)
            .map(|k| report.stabilization_radius + k as f64)
            .collect();
        let trace =
            fiber_exhaustion_trace(&model, SecondFactor::Finite(&finite), &radii).unwrap();
        for step in trace {
            assert_eq!(step.exterior_components, 2, "radius {}", step.radius);
        }
    }
}
