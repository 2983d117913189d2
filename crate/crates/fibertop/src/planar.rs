//! Canonical ordering and exact identity for points of the plane.
//!
//! The combinatorial layer never applies tolerances: two branch points are
//! the same point exactly when their coordinates are equal as `f64` pairs.
//! Negative zero is normalized away on construction so exact comparison is
//! well defined.

use num_complex::Complex64;
use std::cmp::Ordering;

/// Canonical planar order: increasing real part, ties by increasing
/// imaginary part. Loops around branch points are composed in this order.
pub fn planar_cmp(a: Complex64, b: Complex64) -> Ordering {
    match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        ord => ord,
    }
}

/// Replaces `-0.0` coordinates by `0.0` so exact comparison and `total_cmp`
/// agree with numerical equality.
pub fn normalize_point(z: Complex64) -> Complex64 {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    Complex64::new(re, im)
}

pub fn is_finite_point(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn sort_planar(points: &mut [Complex64]) {
    points.sort_by(|a, b| planar_cmp(*a, *b));
}

pub fn same_point(a: Complex64, b: Complex64) -> bool {
    a.re == b.re && a.im == b.im
}

/// Compact display form used in reports: `1.5-2i`, `0`, `3i`.
pub fn fmt_point(z: Complex64) -> String {
    let z = normalize_point(z);
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn orders_by_real_then_imaginary() {
        let mut pts = vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, -1.0), c(-3.0, 5.0)];
        sort_planar(&mut pts);
        assert_eq!(pts, vec![c(-3.0, 5.0), c(0.0, -1.0), c(0.0, 2.0), c(1.0, 0.0)]);
    }

    #[test]
    fn negative_zero_is_normalized() {
        let z = normalize_point(c(-0.0, -0.0));
        assert_eq!(z.re.to_bits(), 0.0f64.to_bits());
        assert_eq!(z.im.to_bits(), 0.0f64.to_bits());
        assert_eq!(planar_cmp(z, c(0.0, 0.0)), Ordering::Equal);
    }

    #[test]
    fn formats_points_compactly() {
        assert_eq!(fmt_point(c(0.0, 0.0)), "0");
        assert_eq!(fmt_point(c(1.5, -2.0)), "1.5-2i");
        assert_eq!(fmt_point(c(0.0, 3.0)), "3i");
        assert_eq!(fmt_point(c(-1.0, 0.25)), "-1+0.25i");
    }
}
