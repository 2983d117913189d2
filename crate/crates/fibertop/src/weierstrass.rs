//! Truncated Weierstrass canonical products with certified truncation error.
//!
//! A product spec describes simple zeros (an explicit list or an unbounded
//! rule), an optional zero at the origin, and a convergence-factor schedule
//! d(l). Evaluation accumulates log-magnitude and argument separately so
//! thousands of factors neither overflow nor lose the argument; the value is
//! reassembled at the end, with the argument reduced modulo 2π. Hitting a
//! retained zero exactly yields an exact 0, never a tiny residual.
//!
//! The truncation error bound Σ_{l>L} r^{d(l)+1}/(1−r), r = |z|/|w_l|, is
//! only valid when every truncated zero satisfies |z| < |w_l|/2; outside
//! that regime no bound is claimed.

use crate::planar;
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum WeierstrassError {
    NonFiniteZero { index: usize },
    ZeroAtOrigin { index: usize },
    RepeatedZero { index: usize },
    MagnitudeOverflow,
    PoleAtProductZero,
}

impl fmt::Display for WeierstrassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeierstrassError::NonFiniteZero { index } => {
                write!(f, "zero {index} has non-finite coordinates")
            }
            WeierstrassError::ZeroAtOrigin { index } => write!(
                f,
                "zero {index} is the origin; use the origin flag instead of a w = 0 factor"
            ),
            WeierstrassError::RepeatedZero { index } => write!(f, "zero {index} is repeated"),
            WeierstrassError::MagnitudeOverflow => write!(f, "magnitude overflow"),
            WeierstrassError::PoleAtProductZero => {
                write!(f, "logarithmic derivative has a pole at a zero of the product")
            }
        }
    }
}

impl std::error::Error for WeierstrassError {}

/// Zero sequence of the product, indexed from l = 1.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroSequence {
    Explicit(Vec<Complex64>),
    /// 1, −1, 2, −2, 3, −3, …
    SymmetricIntegers,
    /// 1, 2, 3, …
    PositiveIntegers,
}

impl ZeroSequence {
    /// The l-th zero (1-based); None past the end of an explicit list.
    pub fn zero_at(&self, l: usize) -> Option<Complex64> {
        debug_assert!(l >= 1);
        match self {
            ZeroSequence::Explicit(list) => list.get(l - 1).copied(),
            ZeroSequence::SymmetricIntegers => {
                let n = (l + 1) / 2;
                let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
                Some(Complex64::new(sign * n as f64, 0.0))
            }
            ZeroSequence::PositiveIntegers => Some(Complex64::new(l as f64, 0.0)),
        }
    }

    /// Whether the sequence continues past every truncation.
    pub fn extends_beyond(&self, l: usize) -> bool {
        match self {
            ZeroSequence::Explicit(list) => l < list.len(),
            _ => true,
        }
    }

    /// Lower bound α with |w_l| >= α·l, used for tail estimates of the
    /// integer rules.
    fn linear_growth_floor(&self) -> Option<f64> {
        match self {
            ZeroSequence::Explicit(_) => None,
            ZeroSequence::SymmetricIntegers => Some(0.5),
            ZeroSequence::PositiveIntegers => Some(1.0),
        }
    }
}

/// Convergence-factor exponents d(l) for the elementary factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DSchedule {
    /// d(l) = l, always sufficient.
    Classical,
    /// Constant exponent; the caller asserts Σ |w_l|^{−(d+1)} converges.
    Constant(usize),
}

impl DSchedule {
    pub fn exponent_at(&self, l: usize) -> usize {
        match self {
            DSchedule::Classical => l,
            DSchedule::Constant(d) => *d,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassProductSpec {
    zeros: ZeroSequence,
    include_zero_at_origin: bool,
    d_schedule: DSchedule,
    truncation_length: usize,
    target_tolerance: f64,
}

impl WeierstrassProductSpec {
    pub fn new(
        zeros: ZeroSequence,
        include_zero_at_origin: bool,
        d_schedule: DSchedule,
        truncation_length: usize,
        target_tolerance: f64,
    ) -> Result<Self, WeierstrassError> {
        if let ZeroSequence::Explicit(list) = &zeros {
            for (index, w) in list.iter().enumerate() {
                if !planar::is_finite_point(*w) {
                    return Err(WeierstrassError::NonFiniteZero { index });
                }
                if w.re == 0.0 && w.im == 0.0 {
                    return Err(WeierstrassError::ZeroAtOrigin { index });
                }
            }
            for index in 1..list.len() {
                if list[..index]
                    .iter()
                    .any(|w| planar::same_point(*w, list[index]))
                {
                    return Err(WeierstrassError::RepeatedZero { index });
                }
            }
        }
        Ok(WeierstrassProductSpec {
            zeros,
            include_zero_at_origin,
            d_schedule,
            truncation_length,
            target_tolerance,
        })
    }

    /// The product z·Π(1 − z²/l²) over l = 1..pairs: zeros ±1, ±2, …,
    /// truncated after `2·pairs` entries. With d ≡ 1 the elementary factors
    /// of l and −l cancel, so the value converges to sin(πz)/π.
    pub fn sin_product(pairs: usize) -> Self {
        WeierstrassProductSpec::new(
            ZeroSequence::SymmetricIntegers,
            true,
            DSchedule::Constant(1),
            2 * pairs,
            1e-3,
        )
        .expect("rule sequences need no validation")
    }

    pub fn zeros(&self) -> &ZeroSequence {
        &self.zeros
    }

    pub fn include_zero_at_origin(&self) -> bool {
        self.include_zero_at_origin
    }

    pub fn d_schedule(&self) -> DSchedule {
        self.d_schedule
    }

    pub fn truncation_length(&self) -> usize {
        self.truncation_length
    }

    pub fn target_tolerance(&self) -> f64 {
        self.target_tolerance
    }

    /// Number of zero factors actually evaluated: the truncation length,
    /// capped by an explicit list's length.
    pub fn terms_used(&self) -> usize {
        match &self.zeros {
            ZeroSequence::Explicit(list) => self.truncation_length.min(list.len()),
            _ => self.truncation_length,
        }
    }

    /// Retained zeros in sequence order.
    pub fn retained_zeros(&self) -> Vec<Complex64> {
        (1..=self.terms_used())
            .map(|l| self.zeros.zero_at(l).expect("within terms_used"))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Bound on the relative truncation error; None when some truncated
    /// zero violates |z| < |w_l|/2 and the bound is not certified.
    pub error_bound: Option<f64>,
    pub terms_used: usize,
}

/// One elementary factor E(z) = exp[Σ_{s=1}^{d} (1/s)(z/w)^s]; d = 0 gives 1.
pub fn eval_elementary_factor(w: Complex64, d: usize, z: Complex64) -> Complex64 {
    elementary_log(w, d, z).exp()
}

/// log E without the exp, for log-space accumulation.
fn elementary_log(w: Complex64, d: usize, z: Complex64) -> Complex64 {
    let ratio = z / w;
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for s in 1..=d {
        power *= ratio;
        sum += power / s as f64;
    }
    sum
}

/// Evaluates the truncated product `z^m · Π_{l<=L} (1 − z/w_l)·E_l(z)` in
/// log space. Exact zeros (z at a retained zero, or the origin with the
/// origin factor on) produce an exact 0.
pub fn eval_product(
    spec: &WeierstrassProductSpec,
    z: Complex64,
) -> Result<EvalResult, WeierstrassError> {
    let z = planar::normalize_point(z);
    let terms_used = spec.terms_used();
    let error_bound = truncation_bound(spec, z.norm());

    let mut log_mag = 0.0_f64;
    let mut arg = 0.0_f64;
    let mut exact_zero = false;

    if spec.include_zero_at_origin() {
        if z.re == 0.0 && z.im == 0.0 {
            exact_zero = true;
        } else {
            log_mag += z.norm().ln();
            arg += z.arg();
        }
    }

    for l in 1..=terms_used {
        let w = spec.zeros().zero_at(l).expect("within terms_used");
        if planar::same_point(z, w) {
            exact_zero = true;
            continue;
        }
        let factor = Complex64::new(1.0, 0.0) - z / w;
        log_mag += factor.norm().ln();
        arg += factor.arg();
        let e = elementary_log(w, spec.d_schedule().exponent_at(l), z);
        log_mag += e.re;
        arg += e.im;
    }

    let value = if exact_zero {
        Complex64::new(0.0, 0.0)
    } else {
        if !(log_mag <= f64::MAX.ln()) {
            return Err(WeierstrassError::MagnitudeOverflow);
        }
        let arg = arg.rem_euclid(TAU);
        Complex64::from_polar(log_mag.exp(), arg)
    };
    Ok(EvalResult { value, error_bound, terms_used })
}

/// Tail estimate Σ_{l>L} r_l^{d(l)+1}/(1 − r_l) with r_l = |z|/|w_l|,
/// certified only when r_l < 1/2 for every truncated l.
fn truncation_bound(spec: &WeierstrassProductSpec, az: f64) -> Option<f64> {
    let from = spec.terms_used();
    if !spec.zeros().extends_beyond(from) {
        return Some(0.0);
    }
    if az == 0.0 {
        return Some(0.0);
    }

    let term = |l: usize| -> Option<f64> {
        let w = spec.zeros().zero_at(l)?;
        let r = az / w.norm();
        if r >= 0.5 {
            return None;
        }
        Some(r.powi(spec.d_schedule().exponent_at(l) as i32 + 1) / (1.0 - r))
    };

    match &spec.zeros() {
        ZeroSequence::Explicit(list) => {
            // finitely many truncated factors: sum them exactly
            let mut sum = 0.0;
            for l in from + 1..=list.len() {
                sum += term(l)?;
            }
            Some(sum)
        }
        _ => {
            // integer rules: magnitudes are non-decreasing, so the regime
            // holds for every tail term once it holds for the first
            term(from + 1)?;
            match spec.d_schedule() {
                DSchedule::Classical => {
                    // terms shrink at least geometrically (r < 1/2), so the
                    // series past the stopping point is dominated by twice
                    // the last computed term
                    let mut sum = 0.0;
                    let mut l = from + 1;
                    loop {
                        let t = term(l)?;
                        sum += t;
                        if t < 1e-300 {
                            sum += t;
                            break;
                        }
                        l += 1;
                    }
                    Some(sum.max(f64::MIN_POSITIVE))
                }
                DSchedule::Constant(0) => None,
                DSchedule::Constant(d) => {
                    // window of exact terms, then an integral-comparison
                    // remainder using |w_l| >= α·l
                    let window_end = from + 1000;
                    let mut sum = 0.0;
                    for l in from + 1..=window_end {
                        sum += term(l)?;
                    }
                    let alpha = spec
                        .zeros()
                        .linear_growth_floor()
                        .expect("integer rules grow linearly");
                    let remainder = 2.0 * (az / alpha).powi(d as i32 + 1)
                        / (d as f64 * (window_end as f64).powi(d as i32));
                    Some(sum + remainder)
                }
            }
        }
    }
}

/// Logarithmic derivative of the truncated product:
/// `m/z + Σ_{l<=L} [ 1/(z − w_l) + Σ_{s=1}^{d(l)} z^{s−1}/w_l^s ]`.
pub fn log_derivative(
    spec: &WeierstrassProductSpec,
    z: Complex64,
) -> Result<Complex64, WeierstrassError> {
    let z = planar::normalize_point(z);
    let mut sum = Complex64::new(0.0, 0.0);
    if spec.include_zero_at_origin() {
        if z.re == 0.0 && z.im == 0.0 {
            return Err(WeierstrassError::PoleAtProductZero);
        }
        sum += Complex64::new(1.0, 0.0) / z;
    }
    for l in 1..=spec.terms_used() {
        let w = spec.zeros().zero_at(l).expect("within terms_used");
        if planar::same_point(z, w) {
            return Err(WeierstrassError::PoleAtProductZero);
        }
        sum += Complex64::new(1.0, 0.0) / (z - w);
        let mut z_power = Complex64::new(1.0, 0.0);
        let mut w_power = w;
        for _ in 1..=spec.d_schedule().exponent_at(l) {
            sum += z_power / w_power;
            z_power *= z;
            w_power *= w;
        }
    }
    if !sum.is_finite() {
        return Err(WeierstrassError::MagnitudeOverflow);
    }
    Ok(sum)
}
