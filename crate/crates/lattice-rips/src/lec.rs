//! Near-center machinery for lexicographic reduction in the half-space.
//!
//! For a compact `τ ⊂ R^(n-1) × [0, ∞)` containing the origin with
//! `d_1`-diameter at most `2n - 1`, the local-crushing property at
//! redundancy `ρ` asks for a point `c` in `([-1,1]^(n-1) × [0,1]) ∩ Box(τ)`
//! with `d_1(y, c) <= (2n - 1) - ρ` for every `y ∈ τ`. [`lec_verify`]
//! decides this exactly via a minimax linear program; [`lec_center_construct`]
//! produces such a `c` constructively by shrinking an enclosing center
//! toward the origin, returning the full inequality chain it verified. The
//! redundancy margin is what survives snapping the center onto a sublattice
//! ([`crate::snap`]).

use alloc::vec;
use alloc::vec::Vec;

use crate::ball::{enclosing_ball, BallError};
use crate::bbox::{bounding_box, BoundingBox};
use crate::exact::{rat, rat_int, Rational};
use crate::lp::{solve_lp, LpOp, LpOutcome, RationalLP};
use crate::metric::{distance_rational, DistanceValue, Metric, MetricError};
use crate::point::RationalPoint;
use crate::rng::SplitMix64;

/// Error from the near-center operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LecError {
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn check_admissible(n: usize, tau: &[RationalPoint]) -> Result<(), LecError> {
    if n == 0 {
        return Err(LecError::Precondition("dimension must be positive"));
    }
    if tau.is_empty() {
        return Err(LecError::Precondition("the set must be non-empty"));
    }
    if tau.iter().any(|p| p.dim() != n) {
        return Err(LecError::Precondition("points must have dimension n"));
    }
    let zero = RationalPoint::origin(n);
    if !tau.contains(&zero) {
        return Err(LecError::Precondition("the set must contain the origin"));
    }
    if tau.iter().any(|p| p.coord(n - 1) < &rat_int(0)) {
        return Err(LecError::Precondition(
            "last coordinates must be non-negative",
        ));
    }
    let diam_bound = rat_int(2 * n as i64 - 1);
    let diam = match crate::metric::diameter_rational(tau, Metric::L1)? {
        DistanceValue::Exact(d) => d,
        DistanceValue::Squared(_) => unreachable!("d1 diameters are exact"),
    };
    if diam > diam_bound {
        return Err(LecError::Precondition("diameter exceeds 2n - 1"));
    }
    Ok(())
}

/// The clipped box `([-1,1]^(n-1) × [0,1]) ∩ Box(τ)`; never empty for an
/// admissible `τ`.
fn clipped_box(n: usize, tau: &[RationalPoint]) -> Result<BoundingBox, LecError> {
    let bbox = bounding_box(tau)?;
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let unit_lo = if i + 1 == n { rat_int(0) } else { rat_int(-1) };
        lo.push(core::cmp::max(&unit_lo, &bbox.lo()[i]).clone());
        hi.push(core::cmp::min(&rat_int(1), &bbox.hi()[i]).clone());
    }
    Ok(BoundingBox::new(lo, hi))
}

/// The exact minimax center over the clipped box: the point of
/// `([-1,1]^(n-1) × [0,1]) ∩ Box(τ)` minimizing the maximum `d_1` distance
/// to `τ`, with that optimal distance.
pub fn lec_minimax(tau: &[RationalPoint]) -> Result<(RationalPoint, Rational), LecError> {
    let n = tau.first().ok_or(LecError::Precondition("empty set"))?.dim();
    check_admissible(n, tau)?;
    let boxx = clipped_box(n, tau)?;
    let patterns = crate::ball::sign_patterns(n);
    let support = crate::ball::support_values(tau, &patterns);

    let mut objective = vec![rat_int(0); n + 1];
    objective[0] = rat_int(1);
    let mut lp = RationalLP::minimize(objective);
    lp.bound(0, Some(rat_int(0)), None);
    for i in 0..n {
        lp.bound(i + 1, Some(boxx.lo()[i].clone()), Some(boxx.hi()[i].clone()));
    }
    for (s, m_s) in patterns.iter().zip(&support) {
        let mut coeffs = vec![rat_int(1)];
        coeffs.extend(s.iter().map(|&sign| rat_int(sign)));
        lp.constraint(coeffs, LpOp::Ge, m_s.clone());
    }
    match solve_lp(&lp).expect("well-formed minimax program") {
        LpOutcome::Optimal(s) => Ok((
            RationalPoint::new(s.values[1..].to_vec()),
            s.values[0].clone(),
        )),
        other => unreachable!("minimax program is feasible and bounded, got {other:?}"),
    }
}

/// Decides, exactly, whether some point of the clipped box is within
/// `(2n - 1) - rho` of every point of `τ`.
pub fn lec_verify(n: usize, rho: &Rational, tau: &[RationalPoint]) -> Result<bool, LecError> {
    if *rho <= rat_int(0) {
        return Err(LecError::Precondition("redundancy must be positive"));
    }
    check_admissible(n, tau)?;
    let (_, best) = lec_minimax(tau)?;
    Ok(best <= rat_int(2 * n as i64 - 1) - rho)
}

/// One verified inequality of the construction, kept as an exact trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LecTraceRow {
    pub point: RationalPoint,
    /// `d_1(y, c)` for the constructed center `c`.
    pub distance: Rational,
    /// `d_1(y, c')` for the enclosing center `c'`.
    pub inner_distance: Rational,
    /// `d_1(y, 0)`.
    pub origin_distance: Rational,
    /// `λ·d(y,c') + (1-λ)·d(y,0)`, the convexity bound on `distance`.
    pub convex_bound: Rational,
    /// `(2n-1) - ρ`, the budget every row must meet.
    pub budget: Rational,
}

/// A constructed near-center with its verified inequality chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LecConstruction {
    pub center: RationalPoint,
    pub kappa: Rational,
    pub rho: Rational,
    pub lambda: Rational,
    pub inner_center: RationalPoint,
    pub inner_radius: Rational,
    pub trace: Vec<LecTraceRow>,
}

/// Builds the near-center `c = λ·c' + (1-λ)·0` with `λ = 1/((2n-1)κ)`,
/// where `c'` is an enclosing center of `τ` inside `Box(τ)`, and verifies
/// the full postcondition exactly: `c` lies in the clipped box, and every
/// `y ∈ τ` satisfies `d_1(y, c) <= (2n-1) - ρ` with `ρ = (1-κ)/κ`.
///
/// Requires `n > 1` and `κ ∈ [n/(n+1), 1)`; the enclosing radius is checked
/// against `(2n-1)·κ` rather than assumed.
pub fn lec_center_construct(
    tau: &[RationalPoint],
    kappa: &Rational,
) -> Result<LecConstruction, LecError> {
    let n = tau.first().ok_or(LecError::Precondition("empty set"))?.dim();
    if n < 2 {
        return Err(LecError::Precondition("dimension must be at least 2"));
    }
    check_admissible(n, tau)?;
    let lo_kappa = rat(n as i64, n as i64 + 1);
    if kappa < &lo_kappa || kappa >= &rat_int(1) {
        return Err(LecError::Precondition("kappa must lie in [n/(n+1), 1)"));
    }

    let ball = enclosing_ball(tau, Metric::L1)?;
    let width = rat_int(2 * n as i64 - 1);
    let scaled_bound = &width * kappa;
    if ball.radius > scaled_bound {
        // Cannot happen for kappa at or above the Jung bound; checked, not
        // assumed.
        return Err(LecError::Precondition(
            "enclosing radius exceeds (2n-1) * kappa",
        ));
    }
    let lambda = rat_int(1) / &scaled_bound;
    debug_assert!(lambda < rat_int(1));
    // Convex combination with the origin: scaling, since the other end is 0.
    let center = ball.center.scale(&lambda);
    let rho = (rat_int(1) - kappa) / kappa;
    let budget = &width - &rho;

    // Postcondition checks, all exact.
    let one = rat_int(1);
    for (i, c) in center.coords().iter().enumerate() {
        let ok = if i + 1 == n {
            &rat_int(0) <= c && c <= &one
        } else {
            &-one.clone() <= c && c <= &one
        };
        if !ok {
            return Err(LecError::Precondition(
                "constructed center escapes the unit box",
            ));
        }
    }
    if !bounding_box(tau)?.contains(&center) {
        return Err(LecError::Precondition(
            "constructed center escapes the bounding box",
        ));
    }

    let mut trace = Vec::with_capacity(tau.len());
    for y in tau {
        let distance = exact_d1(y, &center);
        let inner_distance = exact_d1(y, &ball.center);
        let origin_distance = exact_d1(y, &RationalPoint::origin(n));
        let convex_bound =
            &lambda * &inner_distance + (rat_int(1) - &lambda) * &origin_distance;
        if distance > convex_bound || convex_bound > budget || distance > budget {
            return Err(LecError::Precondition(
                "constructed center misses the distance budget",
            ));
        }
        trace.push(LecTraceRow {
            point: y.clone(),
            distance,
            inner_distance,
            origin_distance,
            convex_bound,
            budget: budget.clone(),
        });
    }

    Ok(LecConstruction {
        center,
        kappa: kappa.clone(),
        rho,
        lambda,
        inner_center: ball.center,
        inner_radius: ball.radius,
        trace,
    })
}

fn exact_d1(a: &RationalPoint, b: &RationalPoint) -> Rational {
    match distance_rational(a, b, Metric::L1).expect("uniform dimensions") {
        DistanceValue::Exact(d) => d,
        DistanceValue::Squared(_) => unreachable!("d1 is exact"),
    }
}

/// Samples an admissible set: rational points of dimension `n` in the upper
/// half-space containing the origin, rescaled exactly so the diameter is at
/// most `2n - 1`. Deterministic in the generator state.
pub fn sample_admissible_set(
    rng: &mut SplitMix64,
    n: usize,
    max_extra: usize,
) -> Vec<RationalPoint> {
    let span = 2 * n as i64 - 1;
    let extra = rng.below(max_extra as u64 + 1) as usize;
    let mut tau = vec![RationalPoint::origin(n)];
    for _ in 0..extra {
        let coords: Vec<Rational> = (0..n)
            .map(|i| {
                let den = rng.int_in(1, 4);
                let lo = if i + 1 == n { 0 } else { -span };
                let num = rng.int_in(lo * den, span * den);
                rat(num, den)
            })
            .collect();
        let p = RationalPoint::new(coords);
        if !tau.contains(&p) {
            tau.push(p);
        }
    }
    let diam = match crate::metric::diameter_rational(&tau, Metric::L1).expect("non-empty") {
        DistanceValue::Exact(d) => d,
        DistanceValue::Squared(_) => unreachable!(),
    };
    let bound = rat_int(span);
    if diam > bound {
        let factor = &bound / &diam;
        tau = tau.iter().map(|p| p.scale(&factor)).collect();
    }
    tau
}
