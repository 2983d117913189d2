#![allow(dead_code)]

use fibertop::covers::BranchedCoverSpec;
use fibertop::perm::Permutation;
use fibertop::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_permutation<R: Rng>(rng: &mut R, degree: usize) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

pub fn random_non_identity<R: Rng>(rng: &mut R, degree: usize) -> Permutation {
    loop {
        let g = random_permutation(rng, degree);
        if !g.is_identity() {
            return g;
        }
    }
}

/// Distinct lattice points in a small box.
pub fn random_points<R: Rng>(rng: &mut R, count: usize) -> Vec<Complex64> {
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let p = Complex64::new(rng.gen_range(-6..=6) as f64, rng.gen_range(-6..=6) as f64);
        if !points.iter().any(|&q: &Complex64| q == p) {
            points.push(p);
        }
    }
    points
}

pub fn random_cover<R: Rng>(
    rng: &mut R,
    max_degree: usize,
    max_points: usize,
) -> BranchedCoverSpec {
    let degree = rng.gen_range(2..=max_degree);
    let count = rng.gen_range(1..=max_points);
    let points = random_points(rng, count);
    let entries = points
        .into_iter()
        .map(|p| (p, random_non_identity(rng, degree)))
        .collect();
    BranchedCoverSpec::new(degree, entries).unwrap()
}

pub fn random_connected_cover<R: Rng>(
    rng: &mut R,
    max_degree: usize,
    max_points: usize,
) -> BranchedCoverSpec {
    loop {
        let cover = random_cover(rng, max_degree, max_points);
        if cover.is_connected() {
            return cover;
        }
    }
}
