//! Affine-equivalence decisions for finite zero configurations.
//!
//! Every biholomorphism of the plane is affine, so equivalence questions
//! reduce to a finite search: an affine map is determined by the images of
//! two distinct points, and candidate images range over the target set.
//! Point matching uses the fixed tolerance [`MATCH_TOL`]; inputs are
//! sanitized to magnitude at most 1e3 so pair-determined maps stay stable.

use crate::planar;
use num_complex::Complex64;
use std::fmt;

pub const MATCH_TOL: f64 = 1e-9;
const MAX_COORD: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub enum IsomorphError {
    Underdetermined { size: usize },
    NonFinitePoint,
    CoordinateTooLarge { magnitude: f64 },
    DuplicatePoint { index: usize },
    PointNotInBase { which: char, index: usize },
}

impl fmt::Display for IsomorphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsomorphError::Underdetermined { size } => {
                write!(f, "underdetermined: need at least 2 base zeros, got {size}")
            }
            IsomorphError::NonFinitePoint => write!(f, "zero coordinates must be finite"),
            IsomorphError::CoordinateTooLarge { magnitude } => {
                write!(f, "zero magnitude {magnitude} exceeds {MAX_COORD}")
            }
            IsomorphError::DuplicatePoint { index } => {
                write!(f, "duplicate zero at index {index}")
            }
            IsomorphError::PointNotInBase { which, index } => {
                write!(f, "subset {which} point {index} is not a base zero")
            }
        }
    }
}

impl std::error::Error for IsomorphError {}

/// t(z) = a·z + c with a ≠ 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub a: Complex64,
    pub c: Complex64,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap { a: Complex64::new(1.0, 0.0), c: Complex64::new(0.0, 0.0) }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.a * z + self.c
    }

    /// First this map, then `next`.
    pub fn then(&self, next: &AffineMap) -> AffineMap {
        AffineMap { a: next.a * self.a, c: next.a * self.c + next.c }
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap { a: 1.0 / self.a, c: -self.c / self.a }
    }

    pub fn is_identity(&self) -> bool {
        (self.a - Complex64::new(1.0, 0.0)).norm() <= MATCH_TOL && self.c.norm() <= MATCH_TOL
    }

    pub fn approx_eq(&self, other: &AffineMap) -> bool {
        (self.a - other.a).norm() <= MATCH_TOL && (self.c - other.c).norm() <= MATCH_TOL
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t(z) = ({})*z + ({})",
            planar::fmt_point(self.a),
            planar::fmt_point(self.c)
        )
    }
}

fn validate_points(points: &[Complex64]) -> Result<Vec<Complex64>, IsomorphError> {
    let points: Vec<Complex64> =
        points.iter().map(|&z| planar::normalize_point(z)).collect();
    for (index, &z) in points.iter().enumerate() {
        if !planar::is_finite_point(z) {
            return Err(IsomorphError::NonFinitePoint);
        }
        if z.norm() > MAX_COORD {
            return Err(IsomorphError::CoordinateTooLarge { magnitude: z.norm() });
        }
        if points[..index].iter().any(|&w| planar::same_point(w, z)) {
            return Err(IsomorphError::DuplicatePoint { index });
        }
    }
    Ok(points)
}

/// Base zeros W with two marked subsets A and B.
#[derive(Clone, Debug)]
pub struct ZeroConfiguration {
    w: Vec<Complex64>,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl ZeroConfiguration {
    pub fn new(
        w: Vec<Complex64>,
        a: Vec<Complex64>,
        b: Vec<Complex64>,
    ) -> Result<Self, IsomorphError> {
        let mut w = validate_points(&w)?;
        planar::sort_planar(&mut w);
        let check_subset = |points: &[Complex64], which: char| {
            let mut out = validate_points(points)?;
            for (index, &z) in out.iter().enumerate() {
                if !w.iter().any(|&p| planar::same_point(p, z)) {
                    return Err(IsomorphError::PointNotInBase { which, index });
                }
            }
            planar::sort_planar(&mut out);
            Ok(out)
        };
        let a = check_subset(&a, 'A')?;
        let b = check_subset(&b, 'B')?;
        Ok(ZeroConfiguration { w, a, b })
    }

    pub fn base(&self) -> &[Complex64] {
        &self.w
    }

    pub fn subset_a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn subset_b(&self) -> &[Complex64] {
        &self.b
    }
}

/// Reading of "leaves the zeros invariant": setwise t(W) = W, or the strict
/// pointwise t(w) = w for every w.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariance {
    Setwise,
    Pointwise,
}

/// True when `images` matches `targets` as a set: a bijection pairing each
/// image with a distinct target within [`MATCH_TOL`].
fn matches_setwise(images: &[Complex64], targets: &[Complex64]) -> bool {
    if images.len() != targets.len() {
        return false;
    }
    let mut used = vec![false; targets.len()];
    for &img in images {
        let mut best: Option<usize> = None;
        let mut best_d = f64::INFINITY;
        for (j, &t) in targets.iter().enumerate() {
            let d = (img - t).norm();
            if d < best_d {
                best_d = d;
                best = Some(j);
            }
        }
        match best {
            Some(j) if best_d <= MATCH_TOL && !used[j] => used[j] = true,
            _ => return false,
        }
    }
    true
}

fn stabilizes(map: &AffineMap, cfg: &ZeroConfiguration, invariance: Invariance) -> bool {
    let images: Vec<Complex64> = cfg.w.iter().map(|&z| map.apply(z)).collect();
    let w_ok = match invariance {
        Invariance::Setwise => matches_setwise(&images, &cfg.w),
        Invariance::Pointwise => cfg
            .w
            .iter()
            .zip(&images)
            .all(|(&z, &img)| (img - z).norm() <= MATCH_TOL),
    };
    if !w_ok {
        return false;
    }
    let a_images: Vec<Complex64> = cfg.a.iter().map(|&z| map.apply(z)).collect();
    matches_setwise(&a_images, &cfg.b)
}

fn push_unique(maps: &mut Vec<AffineMap>, map: AffineMap) {
    if !maps.iter().any(|m| m.approx_eq(&map)) {
        maps.push(map);
    }
}

fn sort_maps(maps: &mut [AffineMap]) {
    maps.sort_by(|x, y| {
        x.a.re
            .total_cmp(&y.a.re)
            .then(x.a.im.total_cmp(&y.a.im))
            .then(x.c.re.total_cmp(&y.c.re))
            .then(x.c.im.total_cmp(&y.c.im))
    });
}

/// Candidate maps sending (p0, p1) onto ordered pairs of distinct points of
/// `targets`, filtered by `keep`.
fn pair_search(
    p0: Complex64,
    p1: Complex64,
    targets: &[Complex64],
    keep: impl Fn(&AffineMap) -> bool,
) -> Vec<AffineMap> {
    let mut found = Vec::new();
    for &q0 in targets {
        for &q1 in targets {
            if planar::same_point(q0, q1) {
                continue;
            }
            let a = (q1 - q0) / (p1 - p0);
            let c = q0 - a * p0;
            let map = AffineMap { a, c };
            if keep(&map) {
                push_unique(&mut found, map);
            }
        }
    }
    sort_maps(&mut found);
    found
}

/// All affine maps with t(W) = W and t(A) = B, in the setwise reading.
pub fn find_affine_equivalences(
    cfg: &ZeroConfiguration,
) -> Result<Vec<AffineMap>, IsomorphError> {
    find_affine_equivalences_mode(cfg, Invariance::Setwise)
}

pub fn find_affine_equivalences_mode(
    cfg: &ZeroConfiguration,
    invariance: Invariance,
) -> Result<Vec<AffineMap>, IsomorphError> {
    if cfg.w.len() < 2 {
        return Err(IsomorphError::Underdetermined { size: cfg.w.len() });
    }
    Ok(pair_search(cfg.w[0], cfg.w[1], &cfg.w, |map| {
        stabilizes(map, cfg, invariance)
    }))
}

#[derive(Clone, Debug)]
pub struct IsomorphismDecision {
    pub isomorphic: bool,
    pub witnesses: Vec<AffineMap>,
    pub invariance: Invariance,
    /// Cardinalities (|A|, |B|); unequal ones decide without a search.
    pub cardinalities: (usize, usize),
}

/// The two marked curves are equivalent iff |A| = |B| and some plane affine
/// map fixes W (setwise by default) and carries A onto B.
pub fn curves_isomorphic(
    cfg: &ZeroConfiguration,
) -> Result<IsomorphismDecision, IsomorphError> {
    curves_isomorphic_mode(cfg, Invariance::Setwise)
}

pub fn curves_isomorphic_mode(
    cfg: &ZeroConfiguration,
    invariance: Invariance,
) -> Result<IsomorphismDecision, IsomorphError> {
    let cardinalities = (cfg.a.len(), cfg.b.len());
    if cardinalities.0 != cardinalities.1 {
        return Ok(IsomorphismDecision {
            isomorphic: false,
            witnesses: Vec::new(),
            invariance,
            cardinalities,
        });
    }
    let witnesses = find_affine_equivalences_mode(cfg, invariance)?;
    Ok(IsomorphismDecision {
        isomorphic: !witnesses.is_empty(),
        witnesses,
        invariance,
        cardinalities,
    })
}

#[derive(Clone, Debug)]
pub struct HyperellipticDecision {
    pub equivalent: bool,
    pub witnesses: Vec<AffineMap>,
}

/// Whether some affine map carries the first zero set onto the second.
/// Sets of size below 2 are matched by an explicit translation (or the
/// identity when both are empty).
pub fn hyperelliptic_equivalence(
    w1: &[Complex64],
    w2: &[Complex64],
) -> Result<HyperellipticDecision, IsomorphError> {
    let mut w1 = validate_points(w1)?;
    let mut w2 = validate_points(w2)?;
    planar::sort_planar(&mut w1);
    planar::sort_planar(&mut w2);
    if w1.len() != w2.len() {
        return Ok(HyperellipticDecision { equivalent: false, witnesses: Vec::new() });
    }
    if w1.len() < 2 {
        let witness = if w1.is_empty() {
            AffineMap::identity()
        } else {
            AffineMap { a: Complex64::new(1.0, 0.0), c: w2[0] - w1[0] }
        };
        return Ok(HyperellipticDecision { equivalent: true, witnesses: vec![witness] });
    }
    let witnesses = pair_search(w1[0], w1[1], &w2, |map| {
        let images: Vec<Complex64> = w1.iter().map(|&z| map.apply(z)).collect();
        matches_setwise(&images, &w2)
    });
    Ok(HyperellipticDecision { equivalent: !witnesses.is_empty(), witnesses })
}
