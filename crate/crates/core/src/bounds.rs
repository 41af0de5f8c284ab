//! Closed-form distortion bounds for alternating plat knots and the
//! measured quantities that instantiate them on a built curve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ArcKind, PolyCurve};
use crate::plat::{min_rows, PlatSpec};

/// Representativity of a nontrivial alternating knot.
pub const ALTERNATING_REPRESENTATIVITY: u32 = 2;

const DENOMINATOR: f64 = 160.0;

/// Bridge distance `⌈n / (2(b − 2))⌉` of the alternating plat with `b`
/// bridges and `n` rows. Only asserted for `b ≥ 3` and `n ≥ 4b(b − 2)`.
pub fn bridge_distance(b: usize, n: usize) -> Result<usize> {
    if b < 3 {
        return Err(Error::HypothesisViolated(format!(
            "bridge distance formula needs b ≥ 3, got b = {b}"
        )));
    }
    if n < min_rows(b) {
        return Err(Error::HypothesisViolated(format!(
            "bridge distance formula needs n ≥ 4b(b−2) = {}, got n = {n}",
            min_rows(b)
        )));
    }
    Ok(n.div_ceil(2 * (b - 2)))
}

/// `min(d, 2b) / 160`.
pub fn distortion_lower_bound(b: usize, d: usize) -> f64 {
    d.min(2 * b) as f64 / DENOMINATOR
}

/// `I / 160` for representativity `I`.
pub fn pardon_bound(representativity: u32) -> f64 {
    representativity as f64 / DENOMINATOR
}

/// `4 b² d l / α`.
pub fn upper_bound(b: usize, d: usize, l: f64, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::NonPositiveClearance(alpha));
    }
    if l.is_nan() || l < 1.0 || b < 3 || d < 1 {
        return Err(Error::HypothesisViolated(format!(
            "upper bound needs b ≥ 3, d ≥ 1 and l ≥ 1, got b = {b}, d = {d}, l = {l}"
        )));
    }
    Ok(4.0 * (b * b * d) as f64 * l / alpha)
}

/// Number of twist regions, `bn − (n + 1)/2`.
///
/// At `n = 4b(b − 2) + 1` this is `4b³ − 10b² + 5b − 1`. A version of that
/// closed form with `+9b` circulates; it disagrees with direct evaluation
/// (for `b = 3` it would give 44 instead of 32) and is not used here.
pub fn twist_region_count(b: usize, n: usize) -> usize {
    b * n - n.div_ceil(2)
}

/// Crossing number of a reduced alternating plat: the total crossing count
/// over all regions.
pub fn crossing_number_alternating(spec: &PlatSpec) -> Result<u64> {
    if !spec.is_alternating() {
        return Err(Error::NotAlternating(
            "odd rows must all share one handedness and even rows the other".into(),
        ));
    }
    Ok(spec.rows().iter().flatten().map(|t| t.unsigned_abs() as u64).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub b: usize,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub lower_bound: f64,
    pub representativity: u32,
    pub pardon_bound: f64,
    pub l: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// `4l/α`, so that `upper_bound = constant · b² · d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<f64>,
    pub half_length_bound: f64,
    pub region_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossing_number: Option<u64>,
}

/// Assembles every bound for `spec`. With a curve, `l` is the longest
/// nominal twist arc and `α` the measured clearance; without one, `l` comes
/// from the largest twist count and `α`-dependent fields are left out.
pub fn make_report(spec: &PlatSpec, curve: Option<&PolyCurve>, representativity: u32) -> Result<BoundsReport> {
    let (b, n) = (spec.b(), spec.n());
    let d = bridge_distance(b, n)?;
    let mut l = crate::claims::helix_length(spec.max_half_twists());
    let mut alpha = None;
    let mut upper = None;
    let mut constant = None;
    if let Some(curve) = curve {
        let arcs = curve
            .arcs()
            .ok_or_else(|| Error::InvalidConfig("curve carries no arc inventory".into()))?;
        l = arcs
            .iter()
            .filter(|a| a.kind == ArcKind::Twist)
            .map(|a| a.nominal_length)
            .fold(f64::NEG_INFINITY, f64::max);
        let a = curve.min_clearance();
        upper = Some(upper_bound(b, d, l, a)?);
        constant = Some(4.0 * l / a);
        alpha = Some(a);
    }
    Ok(BoundsReport {
        b,
        n,
        d,
        k: d.min(2 * b),
        lower_bound: distortion_lower_bound(b, d),
        representativity,
        pardon_bound: pardon_bound(representativity),
        l,
        alpha,
        constant,
        upper_bound: upper,
        half_length_bound: (b * n) as f64 * (l + 1.0),
        region_count: twist_region_count(b, n),
        crossing_number: crossing_number_alternating(spec).ok(),
    })
}
