//! Finite-degree branched covers of the complex plane described by monodromy
//! data, fiber products of two covers with their singular locus and gluing
//! combinatorics, end/genus asymptotics for covers with periodic branching
//! tails, truncated Weierstrass canonical products with certified error
//! bounds, numerical path lifting on superelliptic curves, and affine
//! equivalence of zero configurations.
//!
//! Sheets are `0..degree`. Branch points are kept in canonical planar order
//! (increasing real part, ties by increasing imaginary part) and compared
//! exactly; tolerances only enter the numerical modules.

pub mod asymptotic;
pub mod claims;
pub mod continuation;
pub mod covers;
pub mod fiberprod;
pub mod isomorph;
pub mod perm;
pub mod planar;
pub mod specfile;
pub mod weierstrass;

pub use num_complex::Complex64;
