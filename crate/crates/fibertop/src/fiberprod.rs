//! Fiber products of two branched covers over the plane.
//!
//! Over a common base point the fiber product's sheets form the pair grid
//! `{0..n₁}×{0..n₂}`, and each merged branch point acts diagonally. Points of
//! the product over a branch point correspond to pairs (cycle of σ_a, cycle
//! of τ_a); such a point is singular exactly when d = gcd of the cycle
//! lengths is at least 2, in which case the punctured neighbourhood falls
//! apart into d local branches (cones) sharing the vertex. The normalization
//! separates the diagonal orbits; the glued space reconnects them through the
//! singular vertices, which is what the incidence graph records.

use crate::claims::{ClaimCheck, Verdict};
use crate::covers::{cover_invariants, BranchedCoverSpec, CoverError};
use crate::perm::{orbits, DisjointSet, Permutation};
use crate::planar;
use num_complex::Complex64;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum FiberError {
    DisconnectedFactor { which: u8 },
    DuplicateMergedPoint { index: usize },
    Cover(CoverError),
}

impl fmt::Display for FiberError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberError::DisconnectedFactor { which } => {
                write!(f, "disconnected cover: factor {which}")
            }
            FiberError::DuplicateMergedPoint { index } => {
                write!(f, "duplicate merged branch point at index {index}")
            }
            FiberError::Cover(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FiberError {}

impl From<CoverError> for FiberError {
    fn from(e: CoverError) -> Self {
        FiberError::Cover(e)
    }
}

/// Fiber product model over the merged branch list. At a point branching
/// only one factor the other factor's permutation is the identity.
#[derive(Clone, Debug)]
pub struct FiberProductModel {
    cover1: BranchedCoverSpec,
    cover2: BranchedCoverSpec,
    points: Vec<Complex64>,
    pairs: Vec<(Permutation, Permutation)>,
}

/// Builds the fiber product of two connected covers.
pub fn build_fiber_product(
    c1: &BranchedCoverSpec,
    c2: &BranchedCoverSpec,
) -> Result<FiberProductModel, FiberError> {
    if !c1.is_connected() {
        return Err(FiberError::DisconnectedFactor { which: 1 });
    }
    if !c2.is_connected() {
        return Err(FiberError::DisconnectedFactor { which: 2 });
    }
    let entries = merge_branch_data(c1, c2);
    FiberProductModel::from_parts(c1.degree(), c2.degree(), entries)
}

fn merge_branch_data(
    c1: &BranchedCoverSpec,
    c2: &BranchedCoverSpec,
) -> Vec<(Complex64, Permutation, Permutation)> {
    let mut points: Vec<Complex64> = c1
        .branch_points()
        .iter()
        .chain(c2.branch_points())
        .copied()
        .collect();
    planar::sort_planar(&mut points);
    points.dedup_by(|a, b| planar::same_point(*a, *b));
    points
        .into_iter()
        .map(|z| {
            let sigma = lookup(c1, z).unwrap_or_else(|| Permutation::identity(c1.degree()));
            let tau = lookup(c2, z).unwrap_or_else(|| Permutation::identity(c2.degree()));
            (z, sigma, tau)
        })
        .collect()
}

fn lookup(cover: &BranchedCoverSpec, z: Complex64) -> Option<Permutation> {
    cover
        .entries()
        .find(|(p, _)| planar::same_point(*p, z))
        .map(|(_, g)| g.clone())
}

impl FiberProductModel {
    /// Assembles a model from merged data directly. Factors need not be
    /// connected here; theorem checkers verify connectivity themselves as a
    /// hypothesis. Points where both permutations are the identity are
    /// dropped.
    pub fn from_parts(
        degree1: usize,
        degree2: usize,
        entries: Vec<(Complex64, Permutation, Permutation)>,
    ) -> Result<Self, FiberError> {
        let mut entries: Vec<(Complex64, Permutation, Permutation)> = entries
            .into_iter()
            .map(|(z, s, t)| (planar::normalize_point(z), s, t))
            .filter(|(_, s, t)| !(s.is_identity() && t.is_identity()))
            .collect();
        entries.sort_by(|a, b| planar::planar_cmp(a.0, b.0));
        for index in 1..entries.len() {
            if planar::same_point(entries[index - 1].0, entries[index].0) {
                return Err(FiberError::DuplicateMergedPoint { index });
            }
        }
        let cover1 = BranchedCoverSpec::new(
            degree1,
            entries
                .iter()
                .filter(|(_, s, _)| !s.is_identity())
                .map(|(z, s, _)| (*z, s.clone()))
                .collect(),
        )?;
        let cover2 = BranchedCoverSpec::new(
            degree2,
            entries
                .iter()
                .filter(|(_, _, t)| !t.is_identity())
                .map(|(z, _, t)| (*z, t.clone()))
                .collect(),
        )?;
        let (points, pairs) = entries
            .into_iter()
            .map(|(z, s, t)| (z, (s, t)))
            .unzip();
        Ok(FiberProductModel { cover1, cover2, points, pairs })
    }

    pub fn cover1(&self) -> &BranchedCoverSpec {
        &self.cover1
    }

    pub fn cover2(&self) -> &BranchedCoverSpec {
        &self.cover2
    }

    pub fn n1(&self) -> usize {
        self.cover1.degree()
    }

    pub fn n2(&self) -> usize {
        self.cover2.degree()
    }

    pub fn grid_size(&self) -> usize {
        self.n1() * self.n2()
    }

    pub fn cell(&self, i: usize, j: usize) -> usize {
        i * self.n2() + j
    }

    pub fn split(&self, cell: usize) -> (usize, usize) {
        (cell / self.n2(), cell % self.n2())
    }

    /// Merged branch points in canonical planar order.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn pairs(&self) -> &[(Permutation, Permutation)] {
        &self.pairs
    }

    /// Diagonal action of merged point `k` on the pair grid.
    pub fn pair_perm(&self, k: usize) -> Permutation {
        let (sigma, tau) = &self.pairs[k];
        let n2 = self.n2();
        let mut images = vec![0; self.grid_size()];
        for i in 0..self.n1() {
            for j in 0..n2 {
                images[i * n2 + j] = sigma.apply(i) * n2 + tau.apply(j);
            }
        }
        Permutation::from_images(images).expect("diagonal action of bijections")
    }

    /// Product of the diagonal actions in canonical planar order.
    pub fn pair_infinity(&self) -> Permutation {
        (0..self.points.len()).fold(Permutation::identity(self.grid_size()), |acc, k| {
            acc.then(&self.pair_perm(k))
        })
    }

    /// Orbits of the diagonal action on the pair grid.
    pub fn diagonal_orbits(&self) -> Vec<Vec<usize>> {
        let perms: Vec<Permutation> =
            (0..self.points.len()).map(|k| self.pair_perm(k)).collect();
        let refs: Vec<&Permutation> = perms.iter().collect();
        orbits(self.grid_size(), &refs)
    }
}

/// One local branch (cone sheet) of a singular point: an orbit of the
/// cycle-pair cells under simultaneous rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalBranch {
    /// Grid cells of the branch, ascending.
    pub cells: Vec<usize>,
    /// Index into the diagonal-orbit list of the component containing it.
    pub orbit_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    /// Index into the merged branch list.
    pub point_index: usize,
    pub base_point: Complex64,
    /// Cycle of σ_a, smallest sheet first.
    pub cycle1: Vec<usize>,
    /// Cycle of τ_a, smallest sheet first.
    pub cycle2: Vec<usize>,
    /// gcd of the cycle lengths; ≥ 2 for every stored point.
    pub d: usize,
    pub local_branches: Vec<LocalBranch>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Singular points of the fiber product: one per branch point and cycle pair
/// with `gcd(lengths) ≥ 2`, ordered by point index, then by smallest sheet
/// of each cycle.
pub fn singular_locus(fp: &FiberProductModel) -> Vec<SingularPoint> {
    let orbit_of = cell_orbit_map(fp);
    let mut out = Vec::new();
    for (point_index, (sigma, tau)) in fp.pairs().iter().enumerate() {
        for cycle1 in sigma.cycles() {
            for cycle2 in tau.cycles() {
                let d = gcd(cycle1.len(), cycle2.len());
                if d < 2 {
                    continue;
                }
                let local_branches = enumerate_branches(fp, &cycle1, &cycle2, d, &orbit_of);
                out.push(SingularPoint {
                    point_index,
                    base_point: fp.points()[point_index],
                    cycle1: cycle1.clone(),
                    cycle2,
                    d,
                    local_branches,
                });
            }
        }
    }
    out
}

fn cell_orbit_map(fp: &FiberProductModel) -> Vec<usize> {
    let mut map = vec![0; fp.grid_size()];
    for (idx, orbit) in fp.diagonal_orbits().into_iter().enumerate() {
        for cell in orbit {
            map[cell] = idx;
        }
    }
    map
}

/// The d orbits of cycle1×cycle2 under simultaneous rotation, each of size
/// lcm(len1, len2), ordered by smallest cell.
fn enumerate_branches(
    fp: &FiberProductModel,
    cycle1: &[usize],
    cycle2: &[usize],
    d: usize,
    orbit_of: &[usize],
) -> Vec<LocalBranch> {
    let (l1, l2) = (cycle1.len(), cycle2.len());
    let size = lcm(l1, l2);
    let mut branches: Vec<LocalBranch> = (0..d)
        .map(|offset| {
            let mut cells: Vec<usize> = (0..size)
                .map(|s| fp.cell(cycle1[s % l1], cycle2[(offset + s) % l2]))
                .collect();
            cells.sort_unstable();
            let orbit_index = orbit_of[cells[0]];
            debug_assert!(cells.iter().all(|&c| orbit_of[c] == orbit_index));
            LocalBranch { cells, orbit_index }
        })
        .collect();
    branches.sort_by_key(|b| b.cells[0]);
    branches
}

/// A component of the normalization: one diagonal orbit together with its
/// invariants as a connected cover of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationComponent {
    /// Grid cells of the orbit, ascending.
    pub cells: Vec<usize>,
    pub degree: usize,
    pub ends_count: usize,
    pub euler_characteristic: i64,
    pub genus: i64,
}

/// Diagonal orbits with their per-orbit invariants.
pub fn normalization_components(fp: &FiberProductModel) -> Vec<NormalizationComponent> {
    let components: Vec<NormalizationComponent> = fp
        .diagonal_orbits()
        .into_iter()
        .map(|cells| orbit_component(fp, cells))
        .collect();
    components
}

fn orbit_component(fp: &FiberProductModel, cells: Vec<usize>) -> NormalizationComponent {
    let entries: Vec<(Complex64, Permutation)> = (0..fp.points().len())
        .filter_map(|k| {
            let restricted = fp
                .pair_perm(k)
                .restricted(&cells)
                .expect("diagonal orbits are invariant");
            if restricted.is_identity() {
                None
            } else {
                Some((fp.points()[k], restricted))
            }
        })
        .collect();
    let spec = BranchedCoverSpec::new(cells.len(), entries)
        .expect("restricted orbit data is a valid cover");
    let inv = cover_invariants(&spec);
    debug_assert_eq!(inv.component_count(), 1, "orbits are transitive");
    let c = &inv.components[0];
    NormalizationComponent {
        cells,
        degree: c.degree,
        ends_count: c.ends_count,
        euler_characteristic: c.euler_characteristic,
        genus: c.genus,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectednessCheck {
    /// A₂ ⊆ A₁, every fiber-product point over A₂ singular, both factors
    /// connected.
    pub hypotheses_hold: bool,
    pub connected: bool,
    pub verdict: Verdict,
    pub details: String,
}

#[derive(Clone, Debug)]
pub struct FiberTopologyReport {
    pub components: Vec<NormalizationComponent>,
    pub singular_points: Vec<SingularPoint>,
    /// Connected components of the orbit/singular-point incidence graph.
    pub gluing_components: usize,
    pub connected: bool,
    /// Σ ends over normalization components; gluing happens at interior
    /// points and cannot change the ends.
    pub ends_total: usize,
    pub claim_checks: Vec<ClaimCheck>,
}

/// Components of the incidence graph between diagonal orbits and singular
/// points (each singular point merges every orbit its branches touch).
fn glue_components(component_count: usize, singular: &[SingularPoint]) -> usize {
    let mut ds = DisjointSet::new(component_count);
    for sp in singular {
        let first = sp.local_branches[0].orbit_index;
        for branch in &sp.local_branches[1..] {
            ds.union(first, branch.orbit_index);
        }
    }
    ds.class_count()
}

/// True when every cycle pair of the diagonal action over `point_index` is
/// singular, i.e. the whole fiber of the product over that point is.
fn fully_singular_over(fp: &FiberProductModel, point_index: usize) -> bool {
    let (sigma, tau) = &fp.pairs()[point_index];
    sigma
        .cycles()
        .iter()
        .all(|c1| tau.cycles().iter().all(|c2| gcd(c1.len(), c2.len()) >= 2))
}

/// Connectedness statement: if A₂ ⊆ A₁ and the whole fiber of the product
/// over every point of A₂ is singular (and both factors are connected), the
/// glued fiber product is connected.
pub fn check_connectedness_theorem(fp: &FiberProductModel) -> ConnectednessCheck {
    let a1 = fp.cover1().branch_points();
    let a2 = fp.cover2().branch_points();
    let subset = a2
        .iter()
        .all(|&z| a1.iter().any(|&w| planar::same_point(z, w)));
    let all_singular = a2.iter().all(|&z| {
        let k = fp
            .points()
            .iter()
            .position(|&p| planar::same_point(p, z))
            .expect("A₂ points are merged points");
        fully_singular_over(fp, k)
    });
    let factors_connected = fp.cover1().is_connected() && fp.cover2().is_connected();
    let hypotheses_hold = subset && all_singular && factors_connected;

    let components = normalization_components(fp);
    let singular = singular_locus(fp);
    let connected = glue_components(components.len(), &singular) <= 1;

    let (verdict, details) = if !hypotheses_hold {
        let mut missing = Vec::new();
        if !subset {
            missing.push("second branch set not contained in first");
        }
        if !all_singular {
            missing.push("a fiber over the second branch set has a smooth point");
        }
        if !factors_connected {
            missing.push("a factor is disconnected");
        }
        (Verdict::HypothesesNotMet, missing.join("; "))
    } else if connected {
        (Verdict::Confirmed, "hypotheses hold and the glued product is connected".to_string())
    } else {
        (
            Verdict::CounterexampleCandidate,
            "hypotheses hold but the glued product is disconnected".to_string(),
        )
    };
    ConnectednessCheck { hypotheses_hold, connected, verdict, details }
}

/// True when the orbit meets each first-factor sheet exactly once, i.e. the
/// orbit is the graph of a map from the first factor's sheets to the
/// second's.
fn is_first_factor_graph(fp: &FiberProductModel, cells: &[usize]) -> bool {
    let mut hits = vec![0usize; fp.n1()];
    for &cell in cells {
        hits[fp.split(cell).0] += 1;
    }
    hits.iter().all(|&h| h == 1)
}

pub fn topology_report(fp: &FiberProductModel) -> FiberTopologyReport {
    let components = normalization_components(fp);
    let singular_points = singular_locus(fp);
    let gluing_components = glue_components(components.len(), &singular_points);
    let connected = gluing_components <= 1;
    let ends_total: usize = components.iter().map(|c| c.ends_count).sum();

    let mut claim_checks = Vec::new();

    // orbit count against gcd of the degrees (needs connected factors)
    let g = gcd(fp.n1(), fp.n2());
    let factors_connected = fp.cover1().is_connected() && fp.cover2().is_connected();
    claim_checks.push(if !factors_connected {
        ClaimCheck::new(
            "component_count_bound",
            Verdict::HypothesesNotMet,
            "a factor is disconnected",
        )
    } else if components.len() <= g {
        ClaimCheck::new(
            "component_count_bound",
            Verdict::Confirmed,
            format!("{} components <= gcd {}", components.len(), g),
        )
    } else {
        ClaimCheck::new(
            "component_count_bound",
            Verdict::CounterexampleCandidate,
            format!("{} components > gcd {}", components.len(), g),
        )
    });

    // ends of the glued space against the normalization total
    let glued_ends = fp.pair_infinity().cycle_count();
    claim_checks.push(if glued_ends == ends_total {
        ClaimCheck::new(
            "ends_match_normalization",
            Verdict::Confirmed,
            format!("{glued_ends} ends both ways"),
        )
    } else {
        ClaimCheck::new(
            "ends_match_normalization",
            Verdict::CounterexampleCandidate,
            format!("glued space has {glued_ends} ends, normalization {ends_total}"),
        )
    });

    // connectedness under total ramification over the second branch set
    let conn = check_connectedness_theorem(fp);
    claim_checks.push(ClaimCheck::new(
        "connected_under_total_ramification",
        conn.verdict,
        conn.details.clone(),
    ));

    // component structure: every component a graph over the first factor,
    // and exactly n₂ of them; recorded under both hypothesis variants
    let a1 = fp.cover1().branch_points();
    let a2 = fp.cover2().branch_points();
    let equal_sets = a1.len() == a2.len()
        && a2
            .iter()
            .all(|&z| a1.iter().any(|&w| planar::same_point(z, w)));
    let graphs = components.iter().all(|c| is_first_factor_graph(fp, &c.cells));
    let structure_holds = graphs && components.len() == fp.n2();
    let structure_details = if structure_holds {
        format!("{} components, each a graph over the first factor", components.len())
    } else if !graphs {
        "a component is not a graph over the first factor's sheets".to_string()
    } else {
        format!("{} components, expected {}", components.len(), fp.n2())
    };
    for (name, hyp) in [
        ("first_factor_graphs_subset_hypothesis", conn.hypotheses_hold),
        ("first_factor_graphs_equal_hypothesis", conn.hypotheses_hold && equal_sets),
    ] {
        claim_checks.push(if !hyp {
            ClaimCheck::new(name, Verdict::HypothesesNotMet, "hypotheses not satisfied")
        } else if structure_holds {
            ClaimCheck::new(name, Verdict::Confirmed, structure_details.clone())
        } else {
            ClaimCheck::new(name, Verdict::PaperClaimMismatch, structure_details.clone())
        });
    }

    // end-count product rule: with the graph structure in place each
    // component contributes the first factor's ends
    claim_checks.push(if conn.hypotheses_hold && structure_holds {
        let ends1 = cover_invariants(fp.cover1()).total_ends();
        let expected = fp.n2() * ends1;
        if ends_total == expected {
            ClaimCheck::new(
                "end_count_product_rule",
                Verdict::Confirmed,
                format!("{} = {} x {}", ends_total, fp.n2(), ends1),
            )
        } else {
            ClaimCheck::new(
                "end_count_product_rule",
                Verdict::PaperClaimMismatch,
                format!("{} ends, product rule predicts {}", ends_total, expected),
            )
        }
    } else {
        ClaimCheck::new(
            "end_count_product_rule",
            Verdict::HypothesesNotMet,
            "component structure differs; no end-count prediction applies",
        )
    });

    FiberTopologyReport {
        components,
        singular_points,
        gluing_components,
        connected,
        ends_total,
        claim_checks,
    }
}
