//! Strict JSON documents describing the models the command-line tool runs.
//!
//! A document is a UTF-8 JSON object with `"version": 1` and a `"kind"`
//! discriminator; the remaining fields are matched strictly against the
//! kind's schema, so unknown or missing fields fail with a field diagnostic
//! and malformed JSON fails with a line/column diagnostic. Complex numbers
//! are two-element arrays `[re, im]`; permutations are image arrays (the
//! value at index i is the image of sheet i).
//!
//! [`normalize_document`] re-emits a parsed document in canonical form:
//! alphabetical keys, two-space indentation, points in planar order, one
//! trailing newline. Normalization is idempotent, and superelliptic factors
//! nested inside a fiber product are canonicalized to their cover form.

use crate::asymptotic::InfiniteCoverModel;
use crate::continuation::NumericCurve;
use crate::covers::{BranchedCoverSpec, SuperellipticSpec};
use crate::isomorph::ZeroConfiguration;
use crate::perm::Permutation;
use crate::planar;
use crate::weierstrass::{DSchedule, WeierstrassProductSpec, ZeroSequence};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::fmt;

pub const SPEC_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum SpecError {
    /// Malformed JSON; the message carries serde's line/column diagnostic.
    Syntax { message: String },
    /// Well-formed JSON that does not match the schema.
    Schema { message: String },
    /// Schema-valid fields that violate a model invariant.
    Invalid { message: String },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Syntax { message } => write!(f, "syntax error: {message}"),
            SpecError::Schema { message } => write!(f, "schema error: {message}"),
            SpecError::Invalid { message } => write!(f, "invalid spec: {message}"),
        }
    }
}

impl std::error::Error for SpecError {}

fn schema(message: impl Into<String>) -> SpecError {
    SpecError::Schema { message: message.into() }
}

fn invalid(e: impl fmt::Display) -> SpecError {
    SpecError::Invalid { message: e.to_string() }
}

/// Second factor of an infinite fiber product.
#[derive(Clone, Debug)]
pub enum PairSecond {
    Infinite(InfiniteCoverModel),
    Finite(BranchedCoverSpec),
}

#[derive(Clone, Debug)]
pub struct PathLiftRequest {
    pub curve: NumericCurve,
    pub path: Vec<Complex64>,
    pub start: Complex64,
}

#[derive(Clone, Debug)]
pub struct IsomorphismRequest {
    pub config: ZeroConfiguration,
    /// When present, the document also asks whether some affine map carries
    /// the base zeros onto this second set.
    pub other_base: Option<Vec<Complex64>>,
}

#[derive(Clone, Debug)]
pub enum SpecDocument {
    Cover(BranchedCoverSpec),
    Superelliptic(SuperellipticSpec),
    FiberProduct { first: BranchedCoverSpec, second: BranchedCoverSpec },
    InfiniteCover(InfiniteCoverModel),
    InfiniteFiberProduct { first: InfiniteCoverModel, second: PairSecond },
    Weierstrass { spec: WeierstrassProductSpec, evaluate_at: Vec<Complex64> },
    PathLift(PathLiftRequest),
    Isomorphism(IsomorphismRequest),
}

impl SpecDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            SpecDocument::Cover(_) => "cover",
            SpecDocument::Superelliptic(_) => "superelliptic",
            SpecDocument::FiberProduct { .. } => "fiber_product",
            SpecDocument::InfiniteCover(_) => "infinite_cover",
            SpecDocument::InfiniteFiberProduct { .. } => "infinite_fiber_product",
            SpecDocument::Weierstrass { .. } => "weierstrass",
            SpecDocument::PathLift(_) => "path_lift",
            SpecDocument::Isomorphism(_) => "isomorphism",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchEntryDto {
    at: [f64; 2],
    images: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverDto {
    degree: usize,
    branch_points: Vec<BranchEntryDto>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuperellipticDto {
    exponent: usize,
    zeros: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberProductDto {
    first: Value,
    second: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InfiniteCoverDto {
    degree: usize,
    prefix: Vec<BranchEntryDto>,
    tail: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InfinitePairDto {
    first: Value,
    second: Value,
}

fn default_tolerance() -> f64 {
    1e-10
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeierstrassDto {
    zeros: Value,
    #[serde(default)]
    origin_zero: bool,
    d_schedule: Value,
    truncation_length: usize,
    #[serde(default = "default_tolerance")]
    target_tolerance: f64,
    #[serde(default)]
    evaluate_at: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathLiftDto {
    exponent: usize,
    zeros: Vec<[f64; 2]>,
    path: Vec<[f64; 2]>,
    start: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IsomorphismDto {
    base: Vec<[f64; 2]>,
    #[serde(default)]
    subset_a: Vec<[f64; 2]>,
    #[serde(default)]
    subset_b: Vec<[f64; 2]>,
    #[serde(default)]
    other_base: Option<Vec<[f64; 2]>>,
}

fn point(p: [f64; 2]) -> Complex64 {
    planar::normalize_point(Complex64::new(p[0], p[1]))
}

fn points(list: Vec<[f64; 2]>) -> Vec<Complex64> {
    list.into_iter().map(point).collect()
}

fn strict<T: DeserializeOwned>(value: Value) -> Result<T, SpecError> {
    serde_json::from_value(value).map_err(|e| schema(e.to_string()))
}

fn as_object(value: Value, what: &str) -> Result<Map<String, Value>, SpecError> {
    match value {
        Value::Object(map) => Ok(map),
        other => Err(schema(format!("{what} must be a JSON object, got {other}"))),
    }
}

fn take_kind(object: &mut Map<String, Value>) -> Result<String, SpecError> {
    match object.remove("kind") {
        Some(Value::String(s)) => Ok(s),
        Some(other) => Err(schema(format!("\"kind\" must be a string, got {other}"))),
        None => Err(schema("missing \"kind\" field")),
    }
}

fn entries_from(dtos: Vec<BranchEntryDto>) -> Result<Vec<(Complex64, Permutation)>, SpecError> {
    dtos.into_iter()
        .map(|e| Ok((point(e.at), Permutation::from_images(e.images).map_err(invalid)?)))
        .collect()
}

fn cover_from(value: Value) -> Result<BranchedCoverSpec, SpecError> {
    let dto: CoverDto = strict(value)?;
    BranchedCoverSpec::new(dto.degree, entries_from(dto.branch_points)?).map_err(invalid)
}

fn superelliptic_from(value: Value) -> Result<SuperellipticSpec, SpecError> {
    let dto: SuperellipticDto = strict(value)?;
    SuperellipticSpec::new(dto.exponent, points(dto.zeros)).map_err(invalid)
}

/// A nested factor: a cover or superelliptic object with its own "kind".
fn factor_from(value: Value, what: &str) -> Result<BranchedCoverSpec, SpecError> {
    let mut object = as_object(value, what)?;
    match take_kind(&mut object)?.as_str() {
        "cover" => cover_from(Value::Object(object)),
        "superelliptic" => Ok(superelliptic_from(Value::Object(object))?.to_cover()),
        other => Err(schema(format!(
            "{what} kind must be \"cover\" or \"superelliptic\", got {other:?}"
        ))),
    }
}

fn infinite_cover_from(value: Value) -> Result<InfiniteCoverModel, SpecError> {
    let dto: InfiniteCoverDto = strict(value)?;
    let prefix =
        BranchedCoverSpec::new(dto.degree, entries_from(dto.prefix)?).map_err(invalid)?;
    let tail = dto
        .tail
        .into_iter()
        .map(|images| Permutation::from_images(images).map_err(invalid))
        .collect::<Result<Vec<_>, _>>()?;
    InfiniteCoverModel::new(dto.degree, prefix, tail).map_err(invalid)
}

fn infinite_factor_from(value: Value, what: &str) -> Result<InfiniteCoverModel, SpecError> {
    let mut object = as_object(value, what)?;
    match take_kind(&mut object)?.as_str() {
        "infinite_cover" => infinite_cover_from(Value::Object(object)),
        other => Err(schema(format!("{what} kind must be \"infinite_cover\", got {other:?}"))),
    }
}

fn pair_second_from(value: Value) -> Result<PairSecond, SpecError> {
    let mut object = as_object(value, "second factor")?;
    match take_kind(&mut object)?.as_str() {
        "infinite_cover" => Ok(PairSecond::Infinite(infinite_cover_from(Value::Object(object))?)),
        "cover" => Ok(PairSecond::Finite(cover_from(Value::Object(object))?)),
        "superelliptic" => {
            Ok(PairSecond::Finite(superelliptic_from(Value::Object(object))?.to_cover()))
        }
        other => Err(schema(format!(
            "second factor kind must be \"infinite_cover\", \"cover\" or \"superelliptic\", got {other:?}"
        ))),
    }
}

fn zero_sequence_from(value: Value) -> Result<ZeroSequence, SpecError> {
    match value {
        Value::String(name) => match name.as_str() {
            "symmetric_integers" => Ok(ZeroSequence::SymmetricIntegers),
            "positive_integers" => Ok(ZeroSequence::PositiveIntegers),
            other => Err(schema(format!(
                "unknown zero sequence {other:?}; expected \"symmetric_integers\", \"positive_integers\" or an array"
            ))),
        },
        array @ Value::Array(_) => {
            let list: Vec<[f64; 2]> = strict(array)?;
            Ok(ZeroSequence::Explicit(points(list)))
        }
        other => Err(schema(format!(
            "\"zeros\" must be a sequence name or an array of [re, im] pairs, got {other}"
        ))),
    }
}

fn d_schedule_from(value: Value) -> Result<DSchedule, SpecError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct ConstantDto {
        constant: usize,
    }
    match value {
        Value::String(name) => match name.as_str() {
            "classical" => Ok(DSchedule::Classical),
            other => Err(schema(format!(
                "unknown d schedule {other:?}; expected \"classical\" or {{\"constant\": d}}"
            ))),
        },
        object @ Value::Object(_) => {
            let dto: ConstantDto = strict(object)?;
            Ok(DSchedule::Constant(dto.constant))
        }
        other => Err(schema(format!(
            "\"d_schedule\" must be \"classical\" or {{\"constant\": d}}, got {other}"
        ))),
    }
}

/// Parses one spec document from JSON text.
pub fn parse_spec(text: &str) -> Result<SpecDocument, SpecError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| SpecError::Syntax { message: e.to_string() })?;
    let mut object = as_object(value, "the document")?;
    match object.remove("version") {
        Some(Value::Number(n)) if n.as_u64() == Some(SPEC_VERSION) => {}
        Some(other) => {
            return Err(schema(format!("unsupported version {other}, expected {SPEC_VERSION}")))
        }
        None => return Err(schema("missing \"version\" field")),
    }
    let kind = take_kind(&mut object)?;
    let rest = Value::Object(object);
    match kind.as_str() {
        "cover" => Ok(SpecDocument::Cover(cover_from(rest)?)),
        "superelliptic" => Ok(SpecDocument::Superelliptic(superelliptic_from(rest)?)),
        "fiber_product" => {
            let dto: FiberProductDto = strict(rest)?;
            Ok(SpecDocument::FiberProduct {
                first: factor_from(dto.first, "first factor")?,
                second: factor_from(dto.second, "second factor")?,
            })
        }
        "infinite_cover" => Ok(SpecDocument::InfiniteCover(infinite_cover_from(rest)?)),
        "infinite_fiber_product" => {
            let dto: InfinitePairDto = strict(rest)?;
            Ok(SpecDocument::InfiniteFiberProduct {
                first: infinite_factor_from(dto.first, "first factor")?,
                second: pair_second_from(dto.second)?,
            })
        }
        "weierstrass" => {
            let dto: WeierstrassDto = strict(rest)?;
            let spec = WeierstrassProductSpec::new(
                zero_sequence_from(dto.zeros)?,
                dto.origin_zero,
                d_schedule_from(dto.d_schedule)?,
                dto.truncation_length,
                dto.target_tolerance,
            )
            .map_err(invalid)?;
            Ok(SpecDocument::Weierstrass { spec, evaluate_at: points(dto.evaluate_at) })
        }
        "path_lift" => {
            let dto: PathLiftDto = strict(rest)?;
            let curve =
                NumericCurve::from_zeros(dto.exponent, &points(dto.zeros)).map_err(invalid)?;
            Ok(SpecDocument::PathLift(PathLiftRequest {
                curve,
                path: points(dto.path),
                start: point(dto.start),
            }))
        }
        "isomorphism" => {
            let dto: IsomorphismDto = strict(rest)?;
            let config = ZeroConfiguration::new(
                points(dto.base),
                points(dto.subset_a),
                points(dto.subset_b),
            )
            .map_err(invalid)?;
            let other_base = dto.other_base.map(|list| {
                let mut other = points(list);
                planar::sort_planar(&mut other);
                other
            });
            Ok(SpecDocument::Isomorphism(IsomorphismRequest { config, other_base }))
        }
        other => Err(schema(format!("unknown kind {other:?}"))),
    }
}

fn point_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn points_value(list: &[Complex64]) -> Value {
    Value::Array(list.iter().map(|&z| point_value(z)).collect())
}

fn entries_value(spec: &BranchedCoverSpec) -> Value {
    Value::Array(
        spec.entries()
            .map(|(z, g)| json!({ "at": point_value(z), "images": g.images() }))
            .collect(),
    )
}

fn cover_body(spec: &BranchedCoverSpec) -> Value {
    json!({ "degree": spec.degree(), "branch_points": entries_value(spec) })
}

fn with_kind(body: Value, kind: &str) -> Value {
    let mut object = match body {
        Value::Object(map) => map,
        _ => unreachable!("document bodies are objects"),
    };
    object.insert("kind".to_string(), Value::String(kind.to_string()));
    Value::Object(object)
}

fn infinite_cover_body(model: &InfiniteCoverModel) -> Value {
    json!({
        "degree": model.degree(),
        "prefix": entries_value(model.prefix()),
        "tail": model.tail_generators().iter().map(|g| g.images()).collect::<Vec<_>>(),
    })
}

fn zero_sequence_value(zeros: &ZeroSequence) -> Value {
    match zeros {
        ZeroSequence::Explicit(list) => points_value(list),
        ZeroSequence::SymmetricIntegers => Value::String("symmetric_integers".into()),
        ZeroSequence::PositiveIntegers => Value::String("positive_integers".into()),
    }
}

fn d_schedule_value(schedule: DSchedule) -> Value {
    match schedule {
        DSchedule::Classical => Value::String("classical".into()),
        DSchedule::Constant(d) => json!({ "constant": d }),
    }
}

fn document_body(doc: &SpecDocument) -> Value {
    match doc {
        SpecDocument::Cover(spec) => cover_body(spec),
        SpecDocument::Superelliptic(spec) => json!({
            "exponent": spec.exponent(),
            "zeros": points_value(spec.zeros()),
        }),
        SpecDocument::FiberProduct { first, second } => json!({
            "first": with_kind(cover_body(first), "cover"),
            "second": with_kind(cover_body(second), "cover"),
        }),
        SpecDocument::InfiniteCover(model) => infinite_cover_body(model),
        SpecDocument::InfiniteFiberProduct { first, second } => {
            let second = match second {
                PairSecond::Infinite(model) => {
                    with_kind(infinite_cover_body(model), "infinite_cover")
                }
                PairSecond::Finite(spec) => with_kind(cover_body(spec), "cover"),
            };
            json!({
                "first": with_kind(infinite_cover_body(first), "infinite_cover"),
                "second": second,
            })
        }
        SpecDocument::Weierstrass { spec, evaluate_at } => json!({
            "zeros": zero_sequence_value(spec.zeros()),
            "origin_zero": spec.include_zero_at_origin(),
            "d_schedule": d_schedule_value(spec.d_schedule()),
            "truncation_length": spec.truncation_length(),
            "target_tolerance": spec.target_tolerance(),
            "evaluate_at": points_value(evaluate_at),
        }),
        SpecDocument::PathLift(request) => json!({
            "exponent": request.curve.exponent(),
            "zeros": points_value(request.curve.branch_points()),
            "path": points_value(&request.path),
            "start": point_value(request.start),
        }),
        SpecDocument::Isomorphism(request) => {
            let mut body = json!({
                "base": points_value(request.config.base()),
                "subset_a": points_value(request.config.subset_a()),
                "subset_b": points_value(request.config.subset_b()),
            });
            if let Some(other) = &request.other_base {
                body.as_object_mut()
                    .unwrap()
                    .insert("other_base".to_string(), points_value(other));
            }
            body
        }
    }
}

/// Canonical re-emission: alphabetical keys, two-space indentation, planar
/// point order, trailing newline. Parsing the output reproduces the model.
pub fn normalize_document(doc: &SpecDocument) -> String {
    let mut value = with_kind(document_body(doc), doc.kind());
    value
        .as_object_mut()
        .unwrap()
        .insert("version".to_string(), Value::Number(SPEC_VERSION.into()));
    let mut out = serde_json::to_string_pretty(&value).expect("document body is valid JSON");
    out.push('\n');
    out
}
