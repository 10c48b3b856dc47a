//! Smallest enclosing balls and Jung ratios, exact, for `d_1` and `d_inf`.
//!
//! A `d_1` ball of radius `R` around `c` is the polyhedron
//! `s · (x - c) <= R` over all sign patterns `s ∈ {±1}^n`, so the smallest
//! enclosing radius is the tiny linear program
//! `min R  s.t.  R + s·c >= max_j s·x_j` — one constraint per sign pattern,
//! with the per-pattern maxima precomputed. `d_inf` has the closed-form
//! box-center solution. `d_2` is excluded: its center is generally
//! irrational and would break the exactness contract.
//!
//! Any enclosing center can be moved coordinate-wise into the bounding box
//! of the input without increasing any distance (pushing a coordinate to the
//! nearest attained extremum shrinks every gap in that coordinate), so the
//! returned center is always clamped into the box.

use alloc::vec;
use alloc::vec::Vec;

use crate::bbox::{bounding_box, BoundingBox};
use crate::exact::{rat_int, Rational};
use crate::lp::{solve_lp, LpOp, LpOutcome, RationalLP};
use crate::metric::{distance_rational, DistanceValue, Metric, MetricError};
use crate::point::RationalPoint;

/// An enclosing ball with exact center and radius; the center lies in the
/// bounding box of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnclosingBall {
    pub center: RationalPoint,
    pub radius: Rational,
}

/// Error from enclosing-ball computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BallError {
    #[error("empty point set")]
    EmptySet,
    #[error("the {0} metric is not supported here (no exact center)")]
    UnsupportedMetric(Metric),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("a Jung ratio needs at least two points")]
    TooFewPoints,
    #[error("a Jung ratio needs a set of positive diameter")]
    ZeroDiameter,
}

/// All sign patterns of length `n`, as `±1` entries, in a fixed order.
pub(crate) fn sign_patterns(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0u64..(1 << n) {
        out.push(
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        );
    }
    out
}

/// Per-pattern support values `max_j s · x_j`.
pub(crate) fn support_values(points: &[RationalPoint], patterns: &[Vec<i64>]) -> Vec<Rational> {
    patterns
        .iter()
        .map(|s| {
            points
                .iter()
                .map(|p| {
                    p.coords()
                        .iter()
                        .zip(s)
                        .fold(rat_int(0), |acc, (x, &sign)| acc + x * rat_int(sign))
                })
                .max()
                .expect("non-empty point set")
        })
        .collect()
}

/// Smallest enclosing ball under `d_1` or `d_inf`, exact.
pub fn enclosing_ball(points: &[RationalPoint], metric: Metric) -> Result<EnclosingBall, BallError> {
    if points.is_empty() {
        return Err(BallError::EmptySet);
    }
    let bbox = bounding_box(points)?;
    let ball = match metric {
        Metric::L2 => return Err(BallError::UnsupportedMetric(metric)),
        Metric::LInf => chebyshev_box_center(&bbox),
        Metric::L1 => l1_ball(points, &bbox),
    };
    debug_assert!(bbox.contains(&ball.center));
    for p in points {
        let d = distance_rational(p, &ball.center, metric).expect("dims checked");
        assert!(
            d.le_threshold(&ball.radius),
            "enclosing ball does not cover its input"
        );
    }
    Ok(ball)
}

/// `d_inf`: the box center, radius half the largest side.
fn chebyshev_box_center(bbox: &BoundingBox) -> EnclosingBall {
    let half = crate::exact::rat(1, 2);
    let center = RationalPoint::new(
        bbox.lo()
            .iter()
            .zip(bbox.hi())
            .map(|(lo, hi)| (lo + hi) * &half)
            .collect(),
    );
    let radius = bbox
        .lo()
        .iter()
        .zip(bbox.hi())
        .map(|(lo, hi)| (hi - lo) * &half)
        .max()
        .expect("non-empty box");
    EnclosingBall { center, radius }
}

fn l1_ball(points: &[RationalPoint], bbox: &BoundingBox) -> EnclosingBall {
    let n = points[0].dim();
    let patterns = sign_patterns(n);
    let support = support_values(points, &patterns);

    // Variables (R, c_1..c_n): minimize R s.t. R + s·c >= M_s.
    let mut objective = vec![rat_int(0); n + 1];
    objective[0] = rat_int(1);
    let mut lp = RationalLP::minimize(objective);
    lp.bound(0, Some(rat_int(0)), None);
    for (s, m_s) in patterns.iter().zip(&support) {
        let mut coeffs = vec![rat_int(1)];
        coeffs.extend(s.iter().map(|&sign| rat_int(sign)));
        lp.constraint(coeffs, LpOp::Ge, m_s.clone());
    }
    let solution = match solve_lp(&lp).expect("well-formed ball program") {
        LpOutcome::Optimal(s) => s,
        // c = any input point, R = diameter is always feasible and the
        // radius is bounded below by zero.
        other => unreachable!("ball program is feasible and bounded, got {other:?}"),
    };
    let radius = solution.values[0].clone();
    let center = RationalPoint::new(solution.values[1..].to_vec());
    // Clamping into the box never increases a distance under d_1.
    let center = bbox.clamp(&center);
    EnclosingBall { center, radius }
}

/// `Rad / Diam`, exact. Defined for at least two points spanning a positive
/// diameter, under `d_1` or `d_inf`.
pub fn jung_ratio(points: &[RationalPoint], metric: Metric) -> Result<Rational, BallError> {
    if points.len() < 2 {
        return Err(BallError::TooFewPoints);
    }
    let ball = enclosing_ball(points, metric)?;
    let diam = match crate::metric::diameter_rational(points, metric)? {
        DistanceValue::Exact(d) => d,
        DistanceValue::Squared(_) => return Err(BallError::UnsupportedMetric(metric)),
    };
    if diam == rat_int(0) {
        return Err(BallError::ZeroDiameter);
    }
    Ok(ball.radius / diam)
}
