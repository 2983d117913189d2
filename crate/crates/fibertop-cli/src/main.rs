//! `fibertop`: reports on branched covers of the plane from JSON spec files.
//!
//! Exit codes: 0 success, 1 invalid spec file (syntax, schema, or model
//! invariant), 2 numerical failure (step underflow, magnitude overflow),
//! 3 a listed structure claim came back `counterexample-candidate`.
//! Claims are listed by `check-claims` and, for the other commands, only
//! under `--check-paper-claims`.

mod csvout;
mod report;
mod svg;

use clap::{Args, Parser, Subcommand};
use fibertop::asymptotic::{
    ends_of_infinite_cover, ends_of_infinite_fiber_product, exhaustion_trace,
    fiber_exhaustion_trace, EndsReport, InfiniteCoverModel, SecondFactor,
};
use fibertop::claims::ClaimCheck;
use fibertop::continuation::{cross_validate_monodromy, lift_path, ContinuationError};
use fibertop::covers::{cover_invariants, BranchedCoverSpec, SuperellipticSpec};
use fibertop::fiberprod::{build_fiber_product, topology_report, FiberProductModel};
use fibertop::isomorph::{curves_isomorphic_mode, hyperelliptic_equivalence, Invariance};
use fibertop::perm::Permutation;
use fibertop::planar::fmt_point;
use fibertop::specfile::{normalize_document, parse_spec, PairSecond, SpecDocument};
use fibertop::weierstrass::{
    eval_product, log_derivative, WeierstrassError, WeierstrassProductSpec,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::Report;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use svg::Sketch;

const DEFAULT_TOL: f64 = 1e-10;
const RELABEL_TRIALS: usize = 10;

#[derive(Parser)]
#[command(
    name = "fibertop",
    version,
    about = "Branched covers of the plane: finite and infinite topology, \
             canonical products, numerical monodromy, and zero-set equivalence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON spec file
    spec: PathBuf,
    /// Also write the report rows as section,name,value CSV to this path
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Also write an SVG sketch of the planar configuration to this path
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Residual tolerance for lifts and monodromy [default: 1e-10]
    #[arg(long, value_name = "EPS")]
    tol: Option<f64>,
    /// Override the document's product truncation length
    #[arg(long, value_name = "N")]
    trunc: Option<usize>,
    /// List the applicable structure claims with verdicts in the report
    #[arg(long)]
    check_paper_claims: bool,
    /// Require the base zero set to be fixed pointwise, not just setwise
    #[arg(long)]
    strict_pointwise: bool,
    /// Omit the trailing timing section (stable output for diffing)
    #[arg(long)]
    no_timing: bool,
    /// Run a seeded sheet-relabeling robustness pass in check-claims
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Write the normalized form of the document to this path
    #[arg(long, value_name = "PATH")]
    emit_normalized: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Components, ends, and genus of a finite branched cover
    AnalyzeCover(Common),
    /// Fiber product: singular locus, normalization, gluing, connectedness
    FiberProduct(Common),
    /// Ends of an infinite cover or an infinite fiber product
    Ends(Common),
    /// Exhaustion trace over growing radii
    Exhaust(Common),
    /// Evaluate a truncated canonical product with certified error bounds
    Weval(Common),
    /// Lift a base polyline to the superelliptic curve
    Lift(Common),
    /// Numeric monodromy around each zero against the combinatorial cycles
    Monodromy(Common),
    /// Decide affine equivalence of marked zero configurations
    Isom(Common),
    /// Evaluate every structure claim applicable to the document
    CheckClaims(Common),
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::AnalyzeCover(c) => ("analyze-cover", c),
            Command::FiberProduct(c) => ("fiber-product", c),
            Command::Ends(c) => ("ends", c),
            Command::Exhaust(c) => ("exhaust", c),
            Command::Weval(c) => ("weval", c),
            Command::Lift(c) => ("lift", c),
            Command::Monodromy(c) => ("monodromy", c),
            Command::Isom(c) => ("isom", c),
            Command::CheckClaims(c) => ("check-claims", c),
        }
    }
}

enum Failure {
    Invalid(String),
    Numerical(String),
}

impl Failure {
    fn invalid(message: impl ToString) -> Failure {
        Failure::Invalid(message.to_string())
    }
}

/// Numerical breakdowns earn exit 2; everything else about a continuation
/// error is a bad document or bad data, exit 1.
fn continuation_failure(err: ContinuationError) -> Failure {
    match err {
        ContinuationError::StepUnderflow { .. }
        | ContinuationError::MonodromyNotBijective
        | ContinuationError::Weierstrass(WeierstrassError::MagnitudeOverflow) => {
            Failure::Numerical(err.to_string())
        }
        other => Failure::Invalid(other.to_string()),
    }
}

fn weierstrass_failure(err: WeierstrassError) -> Failure {
    match err {
        WeierstrassError::MagnitudeOverflow => Failure::Numerical(err.to_string()),
        other => Failure::Invalid(other.to_string()),
    }
}

fn wrong_kind(command: &str, expected: &str, doc: &SpecDocument) -> Failure {
    Failure::Invalid(format!(
        "{command} expects a {expected} document, got kind \"{}\"",
        doc.kind()
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, opts) = cli.command.parts();
    match run(name, opts, start) {
        Ok(code) => code,
        Err(Failure::Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(message)) => {
            eprintln!("numerical failure: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(name: &'static str, opts: &Common, start: Instant) -> Result<ExitCode, Failure> {
    let text = std::fs::read_to_string(&opts.spec)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", opts.spec.display())))?;
    let doc = parse_spec(&text).map_err(Failure::invalid)?;
    let normalized = normalize_document(&doc);
    if let Some(path) = &opts.emit_normalized {
        std::fs::write(path, &normalized)
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    }

    let mut report = Report::new(name, doc.kind());
    report.input_echo(&normalized);
    let mut sketch = Sketch::new();

    match name {
        "analyze-cover" => cmd_analyze_cover(&doc, opts, &mut report, &mut sketch)?,
        "fiber-product" => cmd_fiber_product(&doc, opts, &mut report, &mut sketch)?,
        "ends" => cmd_ends(&doc, opts, &mut report, &mut sketch)?,
        "exhaust" => cmd_exhaust(&doc, opts, &mut report, &mut sketch)?,
        "weval" => cmd_weval(&doc, opts, &mut report, &mut sketch)?,
        "lift" => cmd_lift(&doc, opts, &mut report, &mut sketch)?,
        "monodromy" => cmd_monodromy(&doc, opts, &mut report, &mut sketch)?,
        "isom" => cmd_isom(&doc, opts, &mut report, &mut sketch)?,
        "check-claims" => cmd_check_claims(&doc, opts, &mut report, &mut sketch)?,
        _ => unreachable!("subcommands are exhaustive"),
    }

    if !opts.no_timing {
        report.timing(start.elapsed().as_millis());
    }
    print!("{}", report.text());
    if let Some(path) = &opts.csv {
        std::fs::write(path, csvout::render(report.rows()))
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &opts.svg {
        std::fs::write(path, sketch.render())
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(ExitCode::from(if report.has_counterexample() { 3 } else { 0 }))
}

fn fmt_list(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    parts.join(" ")
}

/// Cover to analyze, from either accepted kind.
fn cover_of(doc: &SpecDocument, command: &str) -> Result<BranchedCoverSpec, Failure> {
    match doc {
        SpecDocument::Cover(spec) => Ok(spec.clone()),
        SpecDocument::Superelliptic(se) => Ok(se.to_cover()),
        _ => Err(wrong_kind(command, "cover or superelliptic", doc)),
    }
}

fn describe_cover(spec: &BranchedCoverSpec, report: &mut Report, sketch: &mut Sketch) {
    report.section("cover");
    report.field("degree", spec.degree());
    report.field("branch_points", spec.branch_points().len());
    report.field("branch_radius", spec.branch_radius());
    report.field("connected", spec.is_connected());
    report.field("infinity_monodromy", spec.infinity_monodromy().fmt_cycles());

    let inv = cover_invariants(spec);
    report.section("components");
    report.field("count", inv.component_count());
    for (k, c) in inv.components.iter().enumerate() {
        report.field(
            &format!("component_{k}"),
            format!(
                "sheets=[{}] degree={} ends={} chi={} genus={}",
                fmt_list(&c.sheets),
                c.degree,
                c.ends_count,
                c.euler_characteristic,
                c.genus
            ),
        );
    }
    report.section("totals");
    report.field("ends", inv.total_ends());
    report.field("genus", inv.total_genus());

    for (z, g) in spec.entries() {
        sketch.point(z, g.fmt_cycles());
    }
    sketch.badge(format!("degree {}", spec.degree()));
    sketch.badge(format!(
        "components {} ends {} genus {}",
        inv.component_count(),
        inv.total_ends(),
        inv.total_genus()
    ));
}

fn cmd_analyze_cover(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    let spec = cover_of(doc, "analyze-cover")?;
    if let SpecDocument::Superelliptic(se) = doc {
        report.section("superelliptic");
        report.field("exponent", se.exponent());
        report.field("zeros", se.zeros().len());
    }
    describe_cover(&spec, report, sketch);
    if opts.check_paper_claims {
        report.claims(&[]);
    }
    Ok(())
}

fn build_pair(
    first: &BranchedCoverSpec,
    second: &BranchedCoverSpec,
) -> Result<FiberProductModel, Failure> {
    build_fiber_product(first, second).map_err(Failure::invalid)
}

fn cmd_fiber_product(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    let SpecDocument::FiberProduct { first, second } = doc else {
        return Err(wrong_kind("fiber-product", "fiber_product", doc));
    };
    let fp = build_pair(first, second)?;
    let topology = topology_report(&fp);

    report.section("factors");
    report.field("degree_1", fp.n1());
    report.field("degree_2", fp.n2());
    report.field("branch_points_1", first.branch_points().len());
    report.field("branch_points_2", second.branch_points().len());
    report.field("merged_points", fp.points().len());
    report.field("grid_cells", fp.grid_size());

    report.section("normalization");
    report.field("components", topology.components.len());
    for (k, c) in topology.components.iter().enumerate() {
        report.field(
            &format!("component_{k}"),
            format!(
                "cells=[{}] degree={} ends={} chi={} genus={}",
                fmt_list(&c.cells),
                c.degree,
                c.ends_count,
                c.euler_characteristic,
                c.genus
            ),
        );
    }

    report.section("singular_locus");
    report.field("points", topology.singular_points.len());
    for (k, sp) in topology.singular_points.iter().enumerate() {
        report.field(
            &format!("singular_{k}"),
            format!(
                "at={} cycle1=({}) cycle2=({}) d={} branches={}",
                fmt_point(sp.base_point),
                fmt_list(&sp.cycle1),
                fmt_list(&sp.cycle2),
                sp.d,
                sp.local_branches.len()
            ),
        );
    }

    report.section("gluing");
    report.field("glued_components", topology.gluing_components);
    report.field("connected", topology.connected);
    report.field("ends_total", topology.ends_total);

    if opts.check_paper_claims {
        report.claims(&topology.claim_checks);
    }

    for (k, z) in fp.points().iter().enumerate() {
        let (sigma, tau) = &fp.pairs()[k];
        sketch.point(*z, format!("{} | {}", sigma.fmt_cycles(), tau.fmt_cycles()));
    }
    sketch.badge(format!("grid {}x{}", fp.n1(), fp.n2()));
    sketch.badge(format!(
        "components {} glued {} connected {}",
        topology.components.len(),
        topology.gluing_components,
        topology.connected
    ));
    sketch.badge(format!("ends {}", topology.ends_total));
    Ok(())
}

fn second_factor(second: &PairSecond) -> SecondFactor<'_> {
    match second {
        PairSecond::Infinite(m) => SecondFactor::Infinite(m),
        PairSecond::Finite(c) => SecondFactor::Finite(c),
    }
}

fn describe_infinite(model: &InfiniteCoverModel, report: &mut Report, sketch: &mut Sketch) {
    report.section("model");
    report.field("degree", model.degree());
    report.field("prefix_points", model.prefix().branch_points().len());
    report.field("tail_generators", model.tail_generators().len());
    report.field("tail_radius", model.tail_radius());
    report.field("connected", model.is_connected());

    for (z, g) in model.prefix().entries() {
        sketch.point(z, g.fmt_cycles());
    }
    for j in 0..model.tail_generators().len().min(6) {
        sketch.point(model.tail_point(j), model.tail_generator_at(j).fmt_cycles());
    }
}

fn report_ends(ends: &EndsReport, report: &mut Report) {
    report.section("ends");
    report.field("count", ends.ends_count());
    for (k, end) in ends.ends.iter().enumerate() {
        report.field(
            &format!("end_{k}"),
            format!(
                "sheets=[{}] non_planar={}",
                fmt_list(&end.sheets),
                end.non_planar
            ),
        );
    }
    report.field("stabilization_radius", ends.stabilization_radius);
    if !ends.genus_lower_bounds.is_empty() {
        report.section("genus_growth");
        for (radius, genus) in &ends.genus_lower_bounds {
            report.field(&format!("radius_{radius}"), format!("interior_genus={genus}"));
        }
    }
}

fn cmd_ends(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    match doc {
        SpecDocument::InfiniteCover(model) => {
            describe_infinite(model, report, sketch);
            let ends = ends_of_infinite_cover(model);
            report_ends(&ends, report);
            if opts.check_paper_claims {
                report.claims(&ends.claim_checks);
            }
            let non_planar = ends.ends.iter().filter(|e| e.non_planar).count();
            sketch.badge(format!(
                "ends {} non-planar {}",
                ends.ends_count(),
                non_planar
            ));
        }
        SpecDocument::InfiniteFiberProduct { first, second } => {
            describe_infinite(first, report, sketch);
            let ends = ends_of_infinite_fiber_product(first, second_factor(second))
                .map_err(Failure::invalid)?;
            report.section("pair");
            report.field("degree_1", ends.degree1);
            report.field("degree_2", ends.degree2);
            report.field("grid_cells", ends.degree1 * ends.degree2);
            report.section("ends");
            report.field("count", ends.ends_count());
            for (k, end) in ends.ends.iter().enumerate() {
                report.field(
                    &format!("end_{k}"),
                    format!(
                        "cells=[{}] non_planar={}",
                        fmt_list(&end.sheets),
                        end.non_planar
                    ),
                );
            }
            report.field("stabilization_radius", ends.stabilization_radius);
            if opts.check_paper_claims {
                report.claims(&ends.claim_checks);
            }
            sketch.badge(format!("pair ends {}", ends.ends_count()));
        }
        _ => {
            return Err(wrong_kind(
                "ends",
                "infinite_cover or infinite_fiber_product",
                doc,
            ))
        }
    }
    Ok(())
}

/// Ten radii past the tail start, step 2: enough to watch stabilization.
fn default_radii(tail_radius: f64) -> Vec<f64> {
    (0..10).map(|k| tail_radius + 0.5 + 2.0 * k as f64).collect()
}

fn cmd_exhaust(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    match doc {
        SpecDocument::InfiniteCover(model) => {
            describe_infinite(model, report, sketch);
            let steps = exhaustion_trace(model, &default_radii(model.tail_radius()));
            report.section("trace");
            for step in &steps {
                report.field(
                    &format!("radius_{}", step.radius),
                    format!(
                        "exterior={} interior_genus={}",
                        step.exterior_components, step.interior_genus
                    ),
                );
            }
            if opts.check_paper_claims {
                report.claims(&ends_of_infinite_cover(model).claim_checks);
            }
            let last = steps.last().expect("ten radii");
            sketch.badge(format!(
                "exterior {} genus {}",
                last.exterior_components, last.interior_genus
            ));
        }
        SpecDocument::InfiniteFiberProduct { first, second } => {
            describe_infinite(first, report, sketch);
            let steps = fiber_exhaustion_trace(
                first,
                second_factor(second),
                &default_radii(first.tail_radius()),
            )
            .map_err(Failure::invalid)?;
            report.section("trace");
            for step in &steps {
                report.field(
                    &format!("radius_{}", step.radius),
                    format!(
                        "exterior={} connected={} interior_genus={} interior_ends={}",
                        step.exterior_components,
                        step.interior_connected,
                        step.interior_genus,
                        step.interior_ends
                    ),
                );
            }
            if opts.check_paper_claims {
                let ends = ends_of_infinite_fiber_product(first, second_factor(second))
                    .map_err(Failure::invalid)?;
                report.claims(&ends.claim_checks);
            }
            let last = steps.last().expect("ten radii");
            sketch.badge(format!(
                "exterior {} connected {}",
                last.exterior_components, last.interior_connected
            ));
        }
        _ => {
            return Err(wrong_kind(
                "exhaust",
                "infinite_cover or infinite_fiber_product",
                doc,
            ))
        }
    }
    Ok(())
}

fn cmd_weval(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    let SpecDocument::Weierstrass { spec, evaluate_at } = doc else {
        return Err(wrong_kind("weval", "weierstrass", doc));
    };
    let spec = match opts.trunc {
        Some(n) => WeierstrassProductSpec::new(
            spec.zeros().clone(),
            spec.include_zero_at_origin(),
            spec.d_schedule(),
            n,
            spec.target_tolerance(),
        )
        .map_err(Failure::invalid)?,
        None => spec.clone(),
    };

    report.section("product");
    report.field("terms_used", spec.terms_used());
    report.field("origin_zero", spec.include_zero_at_origin());
    report.field("target_tolerance", spec.target_tolerance());

    report.section("evaluation");
    if evaluate_at.is_empty() {
        report.note("no evaluation points requested");
    }
    for (k, &z) in evaluate_at.iter().enumerate() {
        let result = eval_product(&spec, z).map_err(weierstrass_failure)?;
        let bound = match result.error_bound {
            Some(b) => b.to_string(),
            None => String::from("uncertified"),
        };
        let logd = match log_derivative(&spec, z) {
            Ok(v) => fmt_point(v),
            Err(WeierstrassError::PoleAtProductZero) => String::from("pole"),
            Err(e) => return Err(weierstrass_failure(e)),
        };
        report.field(
            &format!("point_{k}"),
            format!(
                "z={} value={} abs={} bound={} log_derivative={}",
                fmt_point(z),
                fmt_point(result.value),
                result.value.norm(),
                bound,
                logd
            ),
        );
        sketch.point(z, format!("z{k}"));
    }
    if opts.check_paper_claims {
        report.claims(&[]);
    }

    for w in spec.retained_zeros().iter().take(40) {
        sketch.point(*w, "");
    }
    sketch.badge(format!("terms {}", spec.terms_used()));
    Ok(())
}

fn cmd_lift(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    let SpecDocument::PathLift(request) = doc else {
        return Err(wrong_kind("lift", "path_lift", doc));
    };
    let tol = opts.tol.unwrap_or(DEFAULT_TOL);
    let lift = lift_path(&request.curve, &request.path, request.start, tol)
        .map_err(continuation_failure)?;

    report.section("curve");
    report.field("exponent", request.curve.exponent());
    report.field("zeros", request.curve.branch_points().len());

    report.section("lift");
    report.field("tolerance", lift.tolerance);
    report.field("vertices", request.path.len());
    report.field("accepted_steps", lift.accepted_steps);
    report.field("halvings", lift.halvings);
    report.field("min_step", lift.min_step);
    report.field("min_branch_distance", lift.min_branch_distance);
    report.field("start_value", fmt_point(request.start));
    report.field("end_value", fmt_point(lift.end_value()));

    report.section("samples");
    for (k, (t, z, w)) in lift.samples.iter().enumerate() {
        report.field(
            &format!("sample_{k}"),
            format!("t={t} z={} w={}", fmt_point(*z), fmt_point(*w)),
        );
    }
    if opts.check_paper_claims {
        report.claims(&[]);
    }

    for w in request.curve.branch_points() {
        sketch.point(*w, "");
    }
    sketch.path(&request.path);
    sketch.badge(format!(
        "steps {} halvings {}",
        lift.accepted_steps, lift.halvings
    ));
    Ok(())
}

fn cmd_monodromy(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    let tol = opts.tol.unwrap_or(DEFAULT_TOL);
    let (curve, combinatorial) = match doc {
        SpecDocument::Superelliptic(se) => {
            let curve = fibertop::continuation::NumericCurve::from_zeros(
                se.exponent(),
                se.zeros(),
            )
            .map_err(continuation_failure)?;
            (curve, se.clone())
        }
        SpecDocument::PathLift(request) => {
            let se = SuperellipticSpec::new(
                request.curve.exponent(),
                request.curve.branch_points().to_vec(),
            )
            .map_err(Failure::invalid)?;
            (request.curve.clone(), se)
        }
        _ => {
            return Err(wrong_kind(
                "monodromy",
                "superelliptic or path_lift",
                doc,
            ))
        }
    };

    let check =
        cross_validate_monodromy(&curve, &combinatorial, tol).map_err(continuation_failure)?;

    report.section("curve");
    report.field("exponent", curve.exponent());
    report.field("zeros", curve.branch_points().len());

    report.section("monodromy");
    report.field("all_match", check.all_match);
    for (k, zm) in check.per_zero.iter().enumerate() {
        report.field(
            &format!("zero_{k}"),
            format!(
                "at={} numeric={} expected={} match={}",
                fmt_point(zm.zero),
                zm.numeric.fmt_cycles(),
                zm.expected.fmt_cycles(),
                zm.matches
            ),
        );
        sketch.point(zm.zero, zm.numeric.fmt_cycles());
    }
    if opts.check_paper_claims {
        report.claims(&[]);
    }
    sketch.badge(format!("all_match {}", check.all_match));
    Ok(())
}

fn cmd_isom(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    let SpecDocument::Isomorphism(request) = doc else {
        return Err(wrong_kind("isom", "isomorphism", doc));
    };
    let invariance = if opts.strict_pointwise {
        Invariance::Pointwise
    } else {
        Invariance::Setwise
    };
    let decision =
        curves_isomorphic_mode(&request.config, invariance).map_err(Failure::invalid)?;

    report.section("configuration");
    report.field("base_size", request.config.base().len());
    report.field("subset_a", decision.cardinalities.0);
    report.field("subset_b", decision.cardinalities.1);

    report.section("decision");
    report.field(
        "invariance",
        match decision.invariance {
            Invariance::Setwise => "setwise",
            Invariance::Pointwise => "pointwise",
        },
    );
    report.field("isomorphic", decision.isomorphic);
    report.field("witnesses", decision.witnesses.len());
    for (k, map) in decision.witnesses.iter().enumerate() {
        report.field(&format!("witness_{k}"), map);
    }

    if let Some(other) = &request.other_base {
        let hyper = hyperelliptic_equivalence(request.config.base(), other)
            .map_err(Failure::invalid)?;
        report.section("hyperelliptic");
        report.field("equivalent", hyper.equivalent);
        for (k, map) in hyper.witnesses.iter().enumerate() {
            report.field(&format!("witness_{k}"), map);
        }
    }
    if opts.check_paper_claims {
        report.claims(&[]);
    }

    for &z in request.config.base() {
        let in_a = request
            .config
            .subset_a()
            .iter()
            .any(|&p| fibertop::planar::same_point(p, z));
        let in_b = request
            .config
            .subset_b()
            .iter()
            .any(|&p| fibertop::planar::same_point(p, z));
        let mut label = String::new();
        if in_a {
            label.push('A');
        }
        if in_b {
            label.push('B');
        }
        sketch.point(z, label);
    }
    sketch.badge(format!("isomorphic {}", decision.isomorphic));
    Ok(())
}

/// All structure claims the document can be checked against.
fn doc_claims(doc: &SpecDocument) -> Result<Vec<ClaimCheck>, Failure> {
    match doc {
        SpecDocument::FiberProduct { first, second } => {
            Ok(topology_report(&build_pair(first, second)?).claim_checks)
        }
        SpecDocument::InfiniteCover(model) => Ok(ends_of_infinite_cover(model).claim_checks),
        SpecDocument::InfiniteFiberProduct { first, second } => {
            Ok(ends_of_infinite_fiber_product(first, second_factor(second))
                .map_err(Failure::invalid)?
                .claim_checks)
        }
        _ => Ok(Vec::new()),
    }
}

fn random_relabel(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled identity is a permutation")
}

fn relabel_cover(spec: &BranchedCoverSpec, rho: &Permutation) -> BranchedCoverSpec {
    let entries = spec.entries().map(|(z, g)| (z, g.relabeled(rho))).collect();
    BranchedCoverSpec::new(spec.degree(), entries).expect("conjugation preserves cover validity")
}

fn relabel_infinite(model: &InfiniteCoverModel, rho: &Permutation) -> InfiniteCoverModel {
    InfiniteCoverModel::new(
        model.degree(),
        relabel_cover(model.prefix(), rho),
        model
            .tail_generators()
            .iter()
            .map(|g| g.relabeled(rho))
            .collect(),
    )
    .expect("conjugation preserves model validity")
}

fn relabeled_doc(doc: &SpecDocument, rng: &mut ChaCha8Rng) -> SpecDocument {
    match doc {
        SpecDocument::FiberProduct { first, second } => {
            let rho1 = random_relabel(rng, first.degree());
            let rho2 = random_relabel(rng, second.degree());
            SpecDocument::FiberProduct {
                first: relabel_cover(first, &rho1),
                second: relabel_cover(second, &rho2),
            }
        }
        SpecDocument::InfiniteCover(model) => {
            let rho = random_relabel(rng, model.degree());
            SpecDocument::InfiniteCover(relabel_infinite(model, &rho))
        }
        SpecDocument::InfiniteFiberProduct { first, second } => {
            let rho1 = random_relabel(rng, first.degree());
            let second = match second {
                PairSecond::Infinite(m) => {
                    let rho2 = random_relabel(rng, m.degree());
                    PairSecond::Infinite(relabel_infinite(m, &rho2))
                }
                PairSecond::Finite(c) => {
                    let rho2 = random_relabel(rng, c.degree());
                    PairSecond::Finite(relabel_cover(c, &rho2))
                }
            };
            SpecDocument::InfiniteFiberProduct {
                first: relabel_infinite(first, &rho1),
                second,
            }
        }
        other => other.clone(),
    }
}

fn cmd_check_claims(
    doc: &SpecDocument,
    opts: &Common,
    report: &mut Report,
    sketch: &mut Sketch,
) -> Result<(), Failure> {
    let checks = doc_claims(doc)?;
    report.claims(&checks);

    // Verdicts are statements about the covering surface, so they must not
    // depend on how sheets are numbered. Re-run under random conjugations.
    if let Some(seed) = opts.seed {
        let baseline: Vec<(&'static str, fibertop::claims::Verdict)> =
            checks.iter().map(|c| (c.name, c.verdict)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stable = true;
        for _ in 0..RELABEL_TRIALS {
            let shuffled = relabeled_doc(doc, &mut rng);
            let verdicts: Vec<(&'static str, fibertop::claims::Verdict)> = doc_claims(&shuffled)?
                .iter()
                .map(|c| (c.name, c.verdict))
                .collect();
            if verdicts != baseline {
                stable = false;
                break;
            }
        }
        report.section("robustness");
        report.field("relabel_trials", RELABEL_TRIALS);
        report.field("seed", seed);
        report.field("verdicts_stable", stable);
    }

    sketch.badge(format!("claims {}", checks.len()));
    match doc {
        SpecDocument::FiberProduct { first, second } => {
            for (z, g) in first.entries() {
                sketch.point(z, g.fmt_cycles());
            }
            for (z, g) in second.entries() {
                sketch.point(z, g.fmt_cycles());
            }
        }
        SpecDocument::InfiniteCover(model)
        | SpecDocument::InfiniteFiberProduct { first: model, .. } => {
            for (z, g) in model.prefix().entries() {
                sketch.point(z, g.fmt_cycles());
            }
        }
        _ => {}
    }
    Ok(())
}
