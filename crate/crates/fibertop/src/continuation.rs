//! Numerical path lifting on superelliptic curves `w^q = f(z)` and the
//! sign-flip action on pairs of hyperelliptic curves.
//!
//! A lift follows a polyline in the base, predicting each new fiber value by
//! the previous one and correcting to the nearest q-th root of f at the new
//! point. Sheet identity is nearest-root continuity, so the stepper halves
//! whenever the prediction cannot be trusted: when the second-nearest root
//! is not clearly farther than the nearest (margin below 3x the prediction
//! error, ties included), when consecutive fiber samples move more than half
//! the local root separation, or when the residual exceeds the tolerance.
//! Steps below 1e-12 of a segment abort the lift.

use crate::covers::SuperellipticSpec;
use crate::perm::Permutation;
use crate::planar;
use crate::weierstrass::{
    eval_product, DSchedule, WeierstrassError, WeierstrassProductSpec, ZeroSequence,
};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};
use std::fmt;

const MIN_STEP: f64 = 1e-12;
const CIRCLE_SIDES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum ContinuationError {
    ExponentTooSmall { exponent: usize },
    EmptyPath,
    StartNotOnCurve { residual: f64 },
    StepUnderflow { at: Complex64 },
    CircleNotIsolating { index: usize },
    MonodromyNotBijective,
    ZeroSetMismatch,
    NotHyperelliptic { exponent: usize },
    OffCurveSample { index: usize, residual: f64 },
    Weierstrass(WeierstrassError),
}

impl fmt::Display for ContinuationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuationError::ExponentTooSmall { exponent } => {
                write!(f, "exponent {exponent} is below 2")
            }
            ContinuationError::EmptyPath => write!(f, "path has no vertices"),
            ContinuationError::StartNotOnCurve { residual } => {
                write!(f, "start not on curve: residual {residual:e}")
            }
            ContinuationError::StepUnderflow { at } => {
                write!(f, "step underflow near {}", planar::fmt_point(*at))
            }
            ContinuationError::CircleNotIsolating { index } => {
                write!(f, "circle not isolating: branch point {index} inside or on it")
            }
            ContinuationError::MonodromyNotBijective => {
                write!(f, "lifted circle endpoints do not permute the fiber")
            }
            ContinuationError::ZeroSetMismatch => {
                write!(f, "numeric and combinatorial curves have different zeros")
            }
            ContinuationError::NotHyperelliptic { exponent } => {
                write!(f, "pair checks need exponent 2, got {exponent}")
            }
            ContinuationError::OffCurveSample { index, residual } => {
                write!(f, "sample {index} off curve: residual {residual:e}")
            }
            ContinuationError::Weierstrass(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ContinuationError {}

impl From<WeierstrassError> for ContinuationError {
    fn from(e: WeierstrassError) -> Self {
        ContinuationError::Weierstrass(e)
    }
}

/// The curve `w^q = f(z)` with f a truncated product; its branch points are
/// exactly the retained zeros of f.
#[derive(Clone, Debug)]
pub struct NumericCurve {
    exponent: usize,
    base: WeierstrassProductSpec,
    branch_points: Vec<Complex64>,
}

impl NumericCurve {
    pub fn new(exponent: usize, base: WeierstrassProductSpec) -> Result<Self, ContinuationError> {
        if exponent < 2 {
            return Err(ContinuationError::ExponentTooSmall { exponent });
        }
        let mut branch_points = base.retained_zeros();
        if base.include_zero_at_origin() {
            branch_points.push(Complex64::new(0.0, 0.0));
        }
        planar::sort_planar(&mut branch_points);
        Ok(NumericCurve { exponent, base, branch_points })
    }

    /// Polynomial-type curve from an explicit zero list (no convergence
    /// factors needed for a finite product).
    pub fn from_zeros(exponent: usize, zeros: &[Complex64]) -> Result<Self, ContinuationError> {
        let mut origin = false;
        let mut rest = Vec::new();
        for &z in zeros {
            let z = planar::normalize_point(z);
            if z.re == 0.0 && z.im == 0.0 {
                origin = true;
            } else {
                rest.push(z);
            }
        }
        let count = rest.len();
        let base = WeierstrassProductSpec::new(
            ZeroSequence::Explicit(rest),
            origin,
            DSchedule::Constant(0),
            count,
            1e-10,
        )?;
        NumericCurve::new(exponent, base)
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn base(&self) -> &WeierstrassProductSpec {
        &self.base
    }

    /// Branch points in canonical planar order.
    pub fn branch_points(&self) -> &[Complex64] {
        &self.branch_points
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, ContinuationError> {
        Ok(eval_product(&self.base, z)?.value)
    }

    /// The q fiber values over a regular point, ordered by ascending
    /// argument in (−π, π].
    pub fn fiber(&self, z: Complex64) -> Result<Vec<Complex64>, ContinuationError> {
        let c = self.eval(z)?;
        Ok(sorted_roots(c, self.exponent))
    }
}

/// All q-th roots of c, sorted by ascending argument in (−π, π].
fn sorted_roots(c: Complex64, q: usize) -> Vec<Complex64> {
    if c.re == 0.0 && c.im == 0.0 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    let modulus = c.norm().powf(1.0 / q as f64);
    let base_arg = c.arg() / q as f64;
    let mut roots: Vec<Complex64> = (0..q)
        .map(|k| Complex64::from_polar(modulus, base_arg + TAU * k as f64 / q as f64))
        .collect();
    roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    roots
}

fn newton_polish(mut w: Complex64, c: Complex64, q: usize) -> Complex64 {
    for _ in 0..3 {
        let wq1 = w.powu(q as u32 - 1);
        let derivative = wq1 * q as f64;
        if derivative.norm() == 0.0 {
            return w;
        }
        w -= (wq1 * w - c) / derivative;
    }
    w
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

#[derive(Clone, Debug)]
pub struct PathLift {
    /// Accepted samples (global t in [0,1], base point, fiber value).
    pub samples: Vec<(f64, Complex64, Complex64)>,
    pub accepted_steps: usize,
    pub halvings: usize,
    pub min_step: f64,
    /// Smallest distance from the polyline to any branch point.
    pub min_branch_distance: f64,
    pub tolerance: f64,
}

impl PathLift {
    pub fn end_value(&self) -> Complex64 {
        self.samples.last().expect("lift keeps the start sample").2
    }
}

/// Lifts a polyline to the curve, starting from a fiber value over the
/// first vertex.
pub fn lift_path(
    curve: &NumericCurve,
    path: &[Complex64],
    start_value: Complex64,
    tol: f64,
) -> Result<PathLift, ContinuationError> {
    if path.is_empty() {
        return Err(ContinuationError::EmptyPath);
    }
    let path: Vec<Complex64> = path.iter().map(|&z| planar::normalize_point(z)).collect();
    let q = curve.exponent;

    let start_residual = (start_value.powu(q as u32) - curve.eval(path[0])?).norm();
    if start_residual > tol {
        return Err(ContinuationError::StartNotOnCurve { residual: start_residual });
    }

    let min_branch_distance = path
        .windows(2)
        .flat_map(|seg| {
            curve
                .branch_points
                .iter()
                .map(move |&p| segment_distance(p, seg[0], seg[1]))
        })
        .chain(
            curve
                .branch_points
                .iter()
                .map(|&p| (p - path[0]).norm()),
        )
        .fold(f64::INFINITY, f64::min);

    let mut lift = PathLift {
        samples: vec![(0.0, path[0], start_value)],
        accepted_steps: 0,
        halvings: 0,
        min_step: 1.0,
        min_branch_distance,
        tolerance: tol,
    };

    let segments = path.len() - 1;
    for (index, seg) in path.windows(2).enumerate() {
        let (a, b) = (seg[0], seg[1]);
        if planar::same_point(a, b) {
            continue;
        }
        let mut t = 0.0_f64;
        let mut h = 1.0_f64;
        while t < 1.0 {
            let w_prev = lift.samples.last().unwrap().2;
            let accepted = loop {
                let step = h.min(1.0 - t);
                if step < MIN_STEP {
                    return Err(ContinuationError::StepUnderflow { at: a + (b - a) * t });
                }
                let z = a + (b - a) * (t + step);
                let c = curve.eval(z)?;
                let roots = sorted_roots(c, q);

                let mut d1 = f64::INFINITY;
                let mut d2 = f64::INFINITY;
                let mut nearest = 0;
                for (k, &r) in roots.iter().enumerate() {
                    let d = (r - w_prev).norm();
                    if d < d1 {
                        d2 = d1;
                        d1 = d;
                        nearest = k;
                    } else if d < d2 {
                        d2 = d;
                    }
                }
                // margin guard: second root must sit clearly farther than
                // the prediction error; equidistant roots always fail
                if roots.len() > 1 && d2 < 4.0 * d1 {
                    h = step / 2.0;
                    lift.halvings += 1;
                    continue;
                }
                let w = newton_polish(roots[nearest], c, q);

                // no-jump guard: stay within half the local root separation
                let separation = 2.0 * w.norm() * (PI / q as f64).sin();
                if (w - w_prev).norm() > separation / 2.0 {
                    h = step / 2.0;
                    lift.halvings += 1;
                    continue;
                }
                if (w.powu(q as u32) - c).norm() > tol {
                    h = step / 2.0;
                    lift.halvings += 1;
                    continue;
                }
                t += step;
                lift.min_step = lift.min_step.min(step);
                lift.accepted_steps += 1;
                lift.samples
                    .push(((index as f64 + t) / segments as f64, z, w));
                h = (step * 2.0).min(1.0);
                break w;
            };
            let _ = accepted;
        }
    }
    Ok(lift)
}

/// Monodromy permutation of the circle of `radius` around `center`,
/// traversed once counterclockwise from `center + radius`. Fiber indices are
/// argument-ordered. Every other branch point must lie strictly outside.
pub fn numeric_monodromy(
    curve: &NumericCurve,
    center: Complex64,
    radius: f64,
    tol: f64,
) -> Result<Permutation, ContinuationError> {
    let center = planar::normalize_point(center);
    for (index, &p) in curve.branch_points.iter().enumerate() {
        if !planar::same_point(p, center) && (p - center).norm() <= radius {
            return Err(ContinuationError::CircleNotIsolating { index });
        }
    }

    let base = center + Complex64::new(radius, 0.0);
    let start_roots = curve.fiber(base)?;
    let q = curve.exponent;
    if start_roots.len() != q {
        // fiber collapsed: the base point sits on the curve's branch locus
        return Err(ContinuationError::CircleNotIsolating { index: 0 });
    }

    let circle: Vec<Complex64> = (0..=CIRCLE_SIDES)
        .map(|k| {
            if k == 0 || k == CIRCLE_SIDES {
                base
            } else {
                center + Complex64::from_polar(radius, TAU * k as f64 / CIRCLE_SIDES as f64)
            }
        })
        .collect();

    let separation = 2.0 * start_roots[0].norm() * (PI / q as f64).sin();
    let mut images = vec![0usize; q];
    for (j, &root) in start_roots.iter().enumerate() {
        let end = lift_path(curve, &circle, root, tol)?.end_value();
        let (mut best, mut best_d) = (0, f64::INFINITY);
        for (k, &r) in start_roots.iter().enumerate() {
            let d = (end - r).norm();
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        if best_d > separation / 2.0 {
            return Err(ContinuationError::MonodromyNotBijective);
        }
        images[j] = best;
    }
    Permutation::from_images(images).map_err(|_| ContinuationError::MonodromyNotBijective)
}

/// Per-zero comparison of numeric monodromy with the standard cycle of the
/// combinatorial construction.
#[derive(Clone, Debug)]
pub struct ZeroMonodromy {
    pub zero: Complex64,
    pub numeric: Permutation,
    pub expected: Permutation,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct MonodromyCrossCheck {
    pub per_zero: Vec<ZeroMonodromy>,
    pub all_match: bool,
}

/// Checks that numeric continuation around every zero induces exactly the
/// standard q-cycle of the combinatorial cover. Equally spaced q-th roots
/// rotate by one argument-ordered position around a simple zero, so the
/// expected permutation sends index k to k+1 mod q.
pub fn cross_validate_monodromy(
    curve: &NumericCurve,
    combinatorial: &SuperellipticSpec,
    tol: f64,
) -> Result<MonodromyCrossCheck, ContinuationError> {
    if curve.exponent != combinatorial.exponent()
        || curve.branch_points.len() != combinatorial.zeros().len()
        || !curve
            .branch_points
            .iter()
            .zip(combinatorial.zeros())
            .all(|(&a, &b)| planar::same_point(a, b))
    {
        return Err(ContinuationError::ZeroSetMismatch);
    }
    let q = curve.exponent;
    let expected =
        Permutation::from_images((0..q).map(|k| (k + 1) % q).collect()).expect("cycle");

    let mut per_zero = Vec::new();
    for (i, &zero) in curve.branch_points.iter().enumerate() {
        let gap = curve
            .branch_points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &other)| (other - zero).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = if gap.is_finite() { gap / 2.0 } else { 1.0 };
        let numeric = numeric_monodromy(curve, zero, radius, tol)?;
        let matches = numeric == expected;
        per_zero.push(ZeroMonodromy { zero, numeric, expected: expected.clone(), matches });
    }
    let all_match = per_zero.iter().all(|z| z.matches);
    Ok(MonodromyCrossCheck { per_zero, all_match })
}

/// A pair of hyperelliptic curves over the same plane: `z₂² = f(z₁)`,
/// `z₃² = g(z₁)`.
#[derive(Clone, Debug)]
pub struct CurvePair {
    first: NumericCurve,
    second: NumericCurve,
}

impl CurvePair {
    pub fn new(first: NumericCurve, second: NumericCurve) -> Result<Self, ContinuationError> {
        for curve in [&first, &second] {
            if curve.exponent != 2 {
                return Err(ContinuationError::NotHyperelliptic { exponent: curve.exponent });
            }
        }
        Ok(CurvePair { first, second })
    }

    pub fn first(&self) -> &NumericCurve {
        &self.first
    }

    pub fn second(&self) -> &NumericCurve {
        &self.second
    }

    fn residuals(&self, p: &TriplePoint) -> Result<(f64, f64), ContinuationError> {
        let rf = (p.z2 * p.z2 - self.first.eval(p.z1)?).norm();
        let rg = (p.z3 * p.z3 - self.second.eval(p.z1)?).norm();
        Ok((rf, rg))
    }

    fn require_on_pair(
        &self,
        samples: &[TriplePoint],
        tol: f64,
    ) -> Result<(), ContinuationError> {
        for (index, p) in samples.iter().enumerate() {
            let (rf, rg) = self.residuals(p)?;
            let residual = rf.max(rg);
            if residual > tol {
                return Err(ContinuationError::OffCurveSample { index, residual });
            }
        }
        Ok(())
    }
}

/// A point (z₁, z₂, z₃) with z₂² = f(z₁) and z₃² = g(z₁) to tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriplePoint {
    pub z1: Complex64,
    pub z2: Complex64,
    pub z3: Complex64,
}

impl TriplePoint {
    pub fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        TriplePoint {
            z1: planar::normalize_point(z1),
            z2: planar::normalize_point(z2),
            z3: planar::normalize_point(z3),
        }
    }

    pub fn on_pair(
        pair: &CurvePair,
        z1: Complex64,
        z2: Complex64,
        z3: Complex64,
        tol: f64,
    ) -> Result<Self, ContinuationError> {
        let p = TriplePoint::new(z1, z2, z3);
        pair.require_on_pair(std::slice::from_ref(&p), tol)?;
        Ok(p)
    }
}

fn negate(z: Complex64) -> Complex64 {
    planar::normalize_point(-z)
}

/// The two commuting involutions of the pair: the first flips the sign of
/// z₃, the second the sign of z₂. Sign arithmetic is exact, so points with
/// a vanishing flipped coordinate are fixed exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    /// (z₁, z₂, z₃) ↦ (z₁, z₂, −z₃)
    FlipThird,
    /// (z₁, z₂, z₃) ↦ (z₁, −z₂, z₃)
    FlipSecond,
}

pub fn z2z2_action(point: &TriplePoint, which: Involution) -> TriplePoint {
    match which {
        Involution::FlipThird => TriplePoint { z3: negate(point.z3), ..*point },
        Involution::FlipSecond => TriplePoint { z2: negate(point.z2), ..*point },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuotientCheck {
    pub samples_checked: usize,
    /// Largest difference between the projections of the two points of any
    /// involution orbit; the projection drops the flipped coordinate, so
    /// this is exactly 0 whenever the check passes.
    pub max_discrepancy: f64,
}

/// Verifies the quotient projections are well defined: both points of each
/// FlipThird orbit have the same (z₁, z₂), both points of each FlipSecond
/// orbit the same (z₁, z₃).
pub fn check_quotient_lemma(
    pair: &CurvePair,
    samples: &[TriplePoint],
    tol: f64,
) -> Result<QuotientCheck, ContinuationError> {
    pair.require_on_pair(samples, tol)?;
    let mut max_discrepancy = 0.0_f64;
    for p in samples {
        let flipped3 = z2z2_action(p, Involution::FlipThird);
        let d3 = (p.z1 - flipped3.z1).norm() + (p.z2 - flipped3.z2).norm();
        let flipped2 = z2z2_action(p, Involution::FlipSecond);
        let d2 = (p.z1 - flipped2.z1).norm() + (p.z3 - flipped2.z3).norm();
        max_discrepancy = max_discrepancy.max(d3).max(d2);
    }
    Ok(QuotientCheck { samples_checked: samples.len(), max_discrepancy })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionCheck {
    pub samples_checked: usize,
    /// Every sampled pair of involution fibers met in exactly one point.
    pub all_exactly_one: bool,
    /// Projecting a FlipThird fiber to (z₁, z₃) stayed injective.
    pub injectivity_ok: bool,
}

fn dedup_exact(points: Vec<TriplePoint>) -> Vec<TriplePoint> {
    let mut out: Vec<TriplePoint> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q == &p) {
            out.push(p);
        }
    }
    out
}

/// For each sample x: the FlipThird fiber {(z₁,z₂,±z₃)} and the FlipSecond
/// fiber {(z₁,±z₂,z₃)} must intersect in exactly {x}, by exact sign
/// comparison; the (z₁, z₃) projection must separate the FlipThird fiber.
pub fn check_double_cover_intersection(
    pair: &CurvePair,
    samples: &[TriplePoint],
    tol: f64,
) -> Result<IntersectionCheck, ContinuationError> {
    pair.require_on_pair(samples, tol)?;
    let mut all_exactly_one = true;
    let mut injectivity_ok = true;
    for p in samples {
        let fiber3 = dedup_exact(vec![*p, z2z2_action(p, Involution::FlipThird)]);
        let fiber2 = dedup_exact(vec![*p, z2z2_action(p, Involution::FlipSecond)]);
        let intersection: Vec<&TriplePoint> = fiber3
            .iter()
            .filter(|a| fiber2.iter().any(|b| *a == b))
            .collect();
        if intersection.len() != 1 || intersection[0] != p {
            all_exactly_one = false;
        }
        let mut projections: Vec<(Complex64, Complex64)> =
            fiber3.iter().map(|t| (t.z1, t.z3)).collect();
        projections.dedup_by(|a, b| {
            planar::same_point(a.0, b.0) && planar::same_point(a.1, b.1)
        });
        if projections.len() != fiber3.len() {
            injectivity_ok = false;
        }
    }
    Ok(IntersectionCheck {
        samples_checked: samples.len(),
        all_exactly_one,
        injectivity_ok,
    })
}
