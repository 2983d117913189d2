//! Branched covers of the plane given by monodromy data.
//!
//! A cover of degree `n` is described by its branch points together with one
//! sheet permutation per point. Entries are stored in canonical planar order;
//! the loop around all branch points ("infinity loop") composes them in that
//! order, left to right. Components are orbits of the generated group, and
//! each component's compactification genus comes from cycle counting over the
//! branch points plus the infinity point.

use crate::perm::{orbits, PermError, Permutation};
use crate::planar;
use num_complex::Complex64;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum CoverError {
    ZeroDegree,
    NonFinitePoint { index: usize },
    DuplicateBranchPoint { index: usize },
    IdentityMonodromy { index: usize },
    WrongPermutationDegree { index: usize, expected: usize, got: usize },
    BadPermutation { index: usize, source: PermError },
    EntryCountMismatch { points: usize, permutations: usize },
    ExponentTooSmall { exponent: usize },
}

impl fmt::Display for CoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverError::ZeroDegree => write!(f, "degree must be positive"),
            CoverError::NonFinitePoint { index } => {
                write!(f, "branch point {index} has non-finite coordinates")
            }
            CoverError::DuplicateBranchPoint { index } => {
                write!(f, "duplicate branch point at index {index}")
            }
            CoverError::IdentityMonodromy { index } => {
                write!(f, "identity monodromy at branch point {index}")
            }
            CoverError::WrongPermutationDegree { index, expected, got } => write!(
                f,
                "monodromy {index} permutes {got} sheets, cover has {expected}"
            ),
            CoverError::BadPermutation { index, source } => {
                write!(f, "monodromy {index}: {source}")
            }
            CoverError::EntryCountMismatch { points, permutations } => write!(
                f,
                "{points} branch points but {permutations} monodromy permutations"
            ),
            CoverError::ExponentTooSmall { exponent } => {
                write!(f, "exponent {exponent} is below 2")
            }
        }
    }
}

impl std::error::Error for CoverError {}

/// A finite-degree branched cover of the plane. Immutable once built; the
/// constructor sorts entries into canonical planar order and validates.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchedCoverSpec {
    degree: usize,
    branch_points: Vec<Complex64>,
    monodromy: Vec<Permutation>,
}

impl BranchedCoverSpec {
    pub fn new(
        degree: usize,
        entries: Vec<(Complex64, Permutation)>,
    ) -> Result<Self, CoverError> {
        if degree == 0 {
            return Err(CoverError::ZeroDegree);
        }
        let mut entries: Vec<(Complex64, Permutation)> = entries
            .into_iter()
            .map(|(z, g)| (planar::normalize_point(z), g))
            .collect();
        for (index, (z, _)) in entries.iter().enumerate() {
            if !planar::is_finite_point(*z) {
                return Err(CoverError::NonFinitePoint { index });
            }
        }
        entries.sort_by(|a, b| planar::planar_cmp(a.0, b.0));
        for index in 1..entries.len() {
            if planar::same_point(entries[index - 1].0, entries[index].0) {
                return Err(CoverError::DuplicateBranchPoint { index });
            }
        }
        for (index, (_, g)) in entries.iter().enumerate() {
            if g.degree() != degree {
                return Err(CoverError::WrongPermutationDegree {
                    index,
                    expected: degree,
                    got: g.degree(),
                });
            }
            if g.is_identity() {
                return Err(CoverError::IdentityMonodromy { index });
            }
        }
        let (branch_points, monodromy) = entries.into_iter().unzip();
        Ok(BranchedCoverSpec { degree, branch_points, monodromy })
    }

    /// Convenience constructor from raw image vectors, as read from files.
    pub fn from_raw(
        degree: usize,
        branch_points: Vec<Complex64>,
        images: Vec<Vec<usize>>,
    ) -> Result<Self, CoverError> {
        if branch_points.len() != images.len() {
            return Err(CoverError::EntryCountMismatch {
                points: branch_points.len(),
                permutations: images.len(),
            });
        }
        let mut entries = Vec::with_capacity(images.len());
        for (index, (z, imgs)) in branch_points.into_iter().zip(images).enumerate() {
            let g = Permutation::from_images(imgs)
                .map_err(|source| CoverError::BadPermutation { index, source })?;
            entries.push((z, g));
        }
        Self::new(degree, entries)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn branch_points(&self) -> &[Complex64] {
        &self.branch_points
    }

    pub fn monodromy(&self) -> &[Permutation] {
        &self.monodromy
    }

    pub fn entries(&self) -> impl Iterator<Item = (Complex64, &Permutation)> {
        self.branch_points.iter().copied().zip(self.monodromy.iter())
    }

    /// Re-checks every invariant; construction already guarantees them.
    pub fn validate(&self) -> Result<(), CoverError> {
        BranchedCoverSpec::new(
            self.degree,
            self.entries().map(|(z, g)| (z, g.clone())).collect(),
        )
        .map(|_| ())
    }

    /// Monodromy of the loop around all branch points: the product of the
    /// stored permutations in canonical planar order, applied left to right.
    pub fn infinity_monodromy(&self) -> Permutation {
        self.monodromy
            .iter()
            .fold(Permutation::identity(self.degree), |acc, g| acc.then(g))
    }

    /// Orbits of the generated monodromy group on the sheet set.
    pub fn sheet_orbits(&self) -> Vec<Vec<usize>> {
        let gens: Vec<&Permutation> = self.monodromy.iter().collect();
        orbits(self.degree, &gens)
    }

    pub fn is_connected(&self) -> bool {
        self.sheet_orbits().len() <= 1
    }

    /// Largest branch-point modulus, 0 for an unbranched cover.
    pub fn branch_radius(&self) -> f64 {
        self.branch_points
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// The curve `w^q = f(z)` for a polynomial-type `f` with simple zeros:
/// a degree-`q` cover branched at each zero with the standard `q`-cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperellipticSpec {
    exponent: usize,
    zeros: Vec<Complex64>,
}

impl SuperellipticSpec {
    pub fn new(exponent: usize, zeros: Vec<Complex64>) -> Result<Self, CoverError> {
        if exponent < 2 {
            return Err(CoverError::ExponentTooSmall { exponent });
        }
        let mut zeros: Vec<Complex64> =
            zeros.into_iter().map(planar::normalize_point).collect();
        for (index, z) in zeros.iter().enumerate() {
            if !planar::is_finite_point(*z) {
                return Err(CoverError::NonFinitePoint { index });
            }
        }
        planar::sort_planar(&mut zeros);
        for index in 1..zeros.len() {
            if planar::same_point(zeros[index - 1], zeros[index]) {
                return Err(CoverError::DuplicateBranchPoint { index });
            }
        }
        Ok(SuperellipticSpec { exponent, zeros })
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn to_cover(&self) -> BranchedCoverSpec {
        let q = self.exponent;
        let cycle: Vec<usize> = (0..q).collect();
        let g = Permutation::from_cycles(q, &[cycle]).expect("standard cycle");
        BranchedCoverSpec::new(
            q,
            self.zeros.iter().map(|&z| (z, g.clone())).collect(),
        )
        .expect("superelliptic data is always a valid cover")
    }
}

/// Invariants of one connected component of a cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentInvariants {
    /// Sheets of the component, ascending.
    pub sheets: Vec<usize>,
    pub degree: usize,
    /// Cycles of the infinity monodromy on this component: ends of the
    /// affine (non-compactified) component.
    pub ends_count: usize,
    /// Euler characteristic of the compactified component.
    pub euler_characteristic: i64,
    /// Genus of the compactified component.
    pub genus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInvariants {
    pub components: Vec<ComponentInvariants>,
}

impl CoverInvariants {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn total_ends(&self) -> usize {
        self.components.iter().map(|c| c.ends_count).sum()
    }

    pub fn total_genus(&self) -> i64 {
        self.components.iter().map(|c| c.genus).sum()
    }
}

/// Per-component invariants from cycle counting.
///
/// For a component of degree `n_c` over a base with `r` branch points, the
/// compactification satisfies `χ = n_c(2 − (r+1)) + Σ cycles on component`,
/// the sum running over all branch points and the infinity point; identity
/// action at a point contributes `n_c` cycles, cancelling that point's term.
pub fn cover_invariants(spec: &BranchedCoverSpec) -> CoverInvariants {
    let r = spec.branch_points().len();
    let infinity = spec.infinity_monodromy();
    let components = spec
        .sheet_orbits()
        .into_iter()
        .map(|sheets| {
            let n_c = sheets.len() as i64;
            let mut cycle_sum: i64 = 0;
            for g in spec.monodromy() {
                let restricted = g
                    .restricted(&sheets)
                    .expect("orbits are invariant under every generator");
                cycle_sum += restricted.cycle_count() as i64;
            }
            let ends_count = infinity
                .restricted(&sheets)
                .expect("orbits are invariant under the infinity monodromy")
                .cycle_count();
            let chi = n_c * (2 - (r as i64 + 1)) + cycle_sum + ends_count as i64;
            debug_assert_eq!((2 - chi) % 2, 0, "closed surfaces have even 2-χ");
            ComponentInvariants {
                degree: sheets.len(),
                sheets,
                ends_count,
                euler_characteristic: chi,
                genus: (2 - chi) / 2,
            }
        })
        .collect();
    CoverInvariants { components }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn swap() -> Permutation {
        Permutation::from_images(vec![1, 0]).unwrap()
    }

    #[test]
    fn minimal_hyperelliptic_is_valid() {
        let spec = BranchedCoverSpec::new(2, vec![(c(0.0, 0.0), swap())]).unwrap();
        assert!(spec.validate().is_ok());
        assert_eq!(spec.degree(), 2);
    }

    #[test]
    fn identity_monodromy_is_rejected() {
        let err =
            BranchedCoverSpec::new(2, vec![(c(0.0, 0.0), Permutation::identity(2))])
                .unwrap_err();
        assert_eq!(err, CoverError::IdentityMonodromy { index: 0 });
    }

    #[test]
    fn non_bijective_images_are_rejected() {
        let err = BranchedCoverSpec::from_raw(
            3,
            vec![c(0.0, 0.0)],
            vec![vec![0, 0, 1]],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            CoverError::BadPermutation { index: 0, source: PermError::NotABijection { index: 1 } }
        ));
    }

    #[test]
    fn duplicate_branch_points_are_rejected() {
        let err = BranchedCoverSpec::new(
            2,
            vec![(c(1.0, 0.0), swap()), (c(1.0, 0.0), swap())],
        )
        .unwrap_err();
        assert_eq!(err, CoverError::DuplicateBranchPoint { index: 1 });
    }

    #[test]
    fn entries_are_sorted_into_planar_order() {
        let spec = BranchedCoverSpec::new(
            2,
            vec![(c(1.0, 0.0), swap()), (c(0.0, 5.0), swap()), (c(0.0, -1.0), swap())],
        )
        .unwrap();
        assert_eq!(
            spec.branch_points(),
            &[c(0.0, -1.0), c(0.0, 5.0), c(1.0, 0.0)]
        );
    }

    #[test]
    fn infinity_monodromy_multiplies_in_order() {
        let two = BranchedCoverSpec::new(
            2,
            vec![(c(0.0, 0.0), swap()), (c(1.0, 0.0), swap())],
        )
        .unwrap();
        assert!(two.infinity_monodromy().is_identity());

        let single = BranchedCoverSpec::new(2, vec![(c(0.0, 0.0), swap())]).unwrap();
        assert_eq!(single.infinity_monodromy(), swap());

        let three_cycle = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let double = BranchedCoverSpec::new(
            3,
            vec![(c(0.0, 0.0), three_cycle.clone()), (c(1.0, 0.0), three_cycle)],
        )
        .unwrap();
        // (0 1 2) twice is (0 2 1)
        assert_eq!(
            double.infinity_monodromy(),
            Permutation::from_images(vec![2, 0, 1]).unwrap()
        );
    }

    #[test]
    fn hyperelliptic_four_zeros_has_genus_one() {
        let spec = SuperellipticSpec::new(
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
        )
        .unwrap();
        let inv = cover_invariants(&spec.to_cover());
        assert_eq!(inv.component_count(), 1);
        assert_eq!(inv.components[0].ends_count, 2);
        assert_eq!(inv.components[0].genus, 1);
    }

    #[test]
    fn hyperelliptic_two_zeros_has_genus_zero() {
        let spec = SuperellipticSpec::new(2, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let inv = cover_invariants(&spec.to_cover());
        assert_eq!(inv.component_count(), 1);
        assert_eq!(inv.components[0].ends_count, 2);
        assert_eq!(inv.components[0].genus, 0);
    }

    #[test]
    fn cubic_three_zeros_has_three_ends_genus_one() {
        let spec = SuperellipticSpec::new(
            3,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
        )
        .unwrap();
        let inv = cover_invariants(&spec.to_cover());
        assert_eq!(inv.component_count(), 1);
        assert_eq!(inv.components[0].ends_count, 3);
        assert_eq!(inv.components[0].euler_characteristic, 0);
        assert_eq!(inv.components[0].genus, 1);
    }

    #[test]
    fn superelliptic_cover_shape() {
        let spec = SuperellipticSpec::new(2, vec![c(0.0, 0.0)]).unwrap();
        let cover = spec.to_cover();
        assert_eq!(cover.degree(), 2);
        assert_eq!(cover.monodromy(), &[swap()]);

        let quartic = SuperellipticSpec::new(4, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let cover = quartic.to_cover();
        let four_cycle = Permutation::from_images(vec![1, 2, 3, 0]).unwrap();
        assert_eq!(cover.degree(), 4);
        assert_eq!(cover.monodromy(), &[four_cycle.clone(), four_cycle]);
        // i sorts before 1 in planar order
        assert_eq!(cover.branch_points(), &[c(0.0, 1.0), c(1.0, 0.0)]);

        let err = SuperellipticSpec::new(2, vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert_eq!(err, CoverError::DuplicateBranchPoint { index: 1 });

        let err = SuperellipticSpec::new(1, vec![c(0.0, 0.0)]).unwrap_err();
        assert_eq!(err, CoverError::ExponentTooSmall { exponent: 1 });
    }

    #[test]
    fn disconnected_cover_splits_into_components() {
        // (0 1) at one point, (2 3) at another: two hyperelliptic pieces
        let a = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let b = Permutation::from_cycles(4, &[vec![2, 3]]).unwrap();
        let spec = BranchedCoverSpec::new(
            4,
            vec![(c(0.0, 0.0), a), (c(1.0, 0.0), b)],
        )
        .unwrap();
        assert!(!spec.is_connected());
        let inv = cover_invariants(&spec);
        assert_eq!(inv.component_count(), 2);
        for comp in &inv.components {
            assert_eq!(comp.degree, 2);
            // one simple branch point per piece: a disk, genus 0, one end
            assert_eq!(comp.ends_count, 1);
            assert_eq!(comp.genus, 0);
        }
    }

    #[test]
    fn hyperelliptic_family_matches_closed_form() {
        for k in 1..=10usize {
            let zeros: Vec<Complex64> = (0..2 * k).map(|j| c(j as f64, 0.0)).collect();
            let inv = cover_invariants(&SuperellipticSpec::new(2, zeros).unwrap().to_cover());
            assert_eq!(inv.component_count(), 1);
            assert_eq!(inv.components[0].ends_count, 2, "k = {k}");
            assert_eq!(inv.components[0].genus, k as i64 - 1, "k = {k}");
        }
    }
}
