//! The `d_p` metrics for `p ∈ {1, 2, ∞}` with exact comparisons.
//!
//! `d_1` and `d_inf` distances between rational points are rational, so they
//! are carried exactly. The Euclidean distance `d_2` is generally irrational;
//! its *square* is rational, so `d_2` values are carried in squared form and
//! every comparison happens against squared thresholds. Comparisons between
//! values of the same metric are total and exact; no rounding occurs
//! anywhere.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_traits::{Signed, Zero};

use crate::exact::{rat_int, Rational};
use crate::point::{DimensionMismatch, LatticePoint, RationalPoint};

/// Which `d_p` metric to use. Only `p ∈ {1, 2, ∞}` admit exact comparison,
/// and only these are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Manhattan distance: sum of coordinate gaps. The default everywhere.
    L1,
    /// Euclidean distance, handled through its square.
    L2,
    /// Chebyshev distance: maximum coordinate gap.
    LInf,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::L1, Metric::L2, Metric::LInf];

    /// Whether distances of this metric are stored squared.
    pub fn squared_form(self) -> bool {
        matches!(self, Metric::L2)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::L1 => "d1",
            Metric::L2 => "d2",
            Metric::LInf => "dinf",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error constructing a [`Metric`] from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported metric `{0}`; expected one of d1, d2, dinf")]
pub struct UnsupportedMetric(pub String);

impl FromStr for Metric {
    type Err = UnsupportedMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d1" | "1" | "l1" | "manhattan" => Ok(Metric::L1),
            "d2" | "2" | "l2" | "euclidean" => Ok(Metric::L2),
            "dinf" | "inf" | "linf" | "chebyshev" => Ok(Metric::LInf),
            other => Err(UnsupportedMetric(other.into())),
        }
    }
}

/// An exact distance: a plain rational for `d_1`/`d_inf`, a squared rational
/// for `d_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceValue {
    Exact(Rational),
    Squared(Rational),
}

/// Error from a metric operation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error("empty point set")]
    EmptySet,
    #[error("cannot compare an exact distance with a squared distance")]
    MixedKinds,
}

impl DistanceValue {
    pub fn is_zero(&self) -> bool {
        match self {
            DistanceValue::Exact(v) | DistanceValue::Squared(v) => v.is_zero(),
        }
    }

    /// The raw rational payload (the distance, or its square for `d_2`).
    pub fn raw(&self) -> &Rational {
        match self {
            DistanceValue::Exact(v) | DistanceValue::Squared(v) => v,
        }
    }

    /// Total exact comparison between values of the same metric.
    pub fn compare(&self, other: &DistanceValue) -> Result<Ordering, MetricError> {
        match (self, other) {
            (DistanceValue::Exact(a), DistanceValue::Exact(b)) => Ok(a.cmp(b)),
            (DistanceValue::Squared(a), DistanceValue::Squared(b)) => Ok(a.cmp(b)),
            _ => Err(MetricError::MixedKinds),
        }
    }

    /// Exact test `self <= threshold`, where `threshold` is an un-squared
    /// scale; squared values are compared against the squared threshold.
    pub fn le_threshold(&self, threshold: &Rational) -> bool {
        match self {
            DistanceValue::Exact(v) => v <= threshold,
            DistanceValue::Squared(v) => *v <= threshold * threshold,
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<(), MetricError> {
    if a == b {
        Ok(())
    } else {
        Err(MetricError::Dimension(DimensionMismatch { left: a, right: b }))
    }
}

/// `d_1` distance on integer coordinates, in `i128`.
pub(crate) fn l1_int(x: &[i64], y: &[i64]) -> i128 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (i128::from(*a) - i128::from(*b)).abs())
        .sum()
}

/// `d_inf` distance on integer coordinates, in `i128`.
pub(crate) fn linf_int(x: &[i64], y: &[i64]) -> i128 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (i128::from(*a) - i128::from(*b)).abs())
        .max()
        .unwrap_or(0)
}

/// Squared `d_2` distance on integer coordinates, in `i128`.
pub(crate) fn l2sq_int(x: &[i64], y: &[i64]) -> i128 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = i128::from(*a) - i128::from(*b);
            d * d
        })
        .sum()
}

/// Exact distance between lattice points.
///
/// Symmetric, zero iff the points coincide; errors on dimension mismatch.
pub fn distance(
    x: &LatticePoint,
    y: &LatticePoint,
    metric: Metric,
) -> Result<DistanceValue, MetricError> {
    check_dims(x.dim(), y.dim())?;
    let v = match metric {
        Metric::L1 => DistanceValue::Exact(rat_i128(l1_int(x.coords(), y.coords()))),
        Metric::LInf => DistanceValue::Exact(rat_i128(linf_int(x.coords(), y.coords()))),
        Metric::L2 => DistanceValue::Squared(rat_i128(l2sq_int(x.coords(), y.coords()))),
    };
    Ok(v)
}

fn rat_i128(v: i128) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(v))
}

/// Exact distance between rational points.
pub fn distance_rational(
    x: &RationalPoint,
    y: &RationalPoint,
    metric: Metric,
) -> Result<DistanceValue, MetricError> {
    check_dims(x.dim(), y.dim())?;
    let gaps = x.coords().iter().zip(y.coords()).map(|(a, b)| {
        let d = a - b;
        if d < rat_int(0) {
            -d
        } else {
            d
        }
    });
    let v = match metric {
        Metric::L1 => DistanceValue::Exact(gaps.fold(rat_int(0), |acc, g| acc + g)),
        Metric::LInf => DistanceValue::Exact(
            gaps.fold(rat_int(0), |acc, g| if g > acc { g } else { acc }),
        ),
        Metric::L2 => DistanceValue::Squared(gaps.fold(rat_int(0), |acc, g| acc + &g * &g)),
    };
    Ok(v)
}

/// Maximum pairwise distance over a finite non-empty set; zero for
/// singletons.
pub fn diameter(points: &[LatticePoint], metric: Metric) -> Result<DistanceValue, MetricError> {
    if points.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let dim = points[0].dim();
    for p in points {
        check_dims(dim, p.dim())?;
    }
    let mut best = match metric {
        Metric::L2 => DistanceValue::Squared(rat_int(0)),
        _ => DistanceValue::Exact(rat_int(0)),
    };
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = distance(&points[i], &points[j], metric)?;
            if d.compare(&best)? == Ordering::Greater {
                best = d;
            }
        }
    }
    Ok(best)
}

/// [`diameter`] over rational points.
pub fn diameter_rational(
    points: &[RationalPoint],
    metric: Metric,
) -> Result<DistanceValue, MetricError> {
    if points.is_empty() {
        return Err(MetricError::EmptySet);
    }
    let dim = points[0].dim();
    for p in points {
        check_dims(dim, p.dim())?;
    }
    let mut best = match metric {
        Metric::L2 => DistanceValue::Squared(rat_int(0)),
        _ => DistanceValue::Exact(rat_int(0)),
    };
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = distance_rational(&points[i], &points[j], metric)?;
            if d.compare(&best)? == Ordering::Greater {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Exact test of `sqrt(a) <= sqrt(b) + sqrt(c)` for non-negative rationals,
/// without leaving the rationals: used to check the triangle inequality for
/// squared `d_2` values.
pub fn sqrt_le_sqrt_sum(a: &Rational, b: &Rational, c: &Rational) -> bool {
    debug_assert!(!a.is_negative() && !b.is_negative() && !c.is_negative());
    let rhs = b + c;
    if *a <= rhs {
        // sqrt(b) + sqrt(c) >= sqrt(b + c) >= sqrt(a).
        return true;
    }
    // a > b + c: the inequality holds iff (a - b - c)^2 <= 4bc.
    let lhs = a - &rhs;
    &lhs * &lhs <= rat_int(4) * b * c
}

/// Exact triangle-inequality check `d(x,z) <= d(x,y) + d(y,z)` for any
/// supported metric.
pub fn triangle_holds(
    x: &LatticePoint,
    y: &LatticePoint,
    z: &LatticePoint,
    metric: Metric,
) -> Result<bool, MetricError> {
    let dxz = distance(x, z, metric)?;
    let dxy = distance(x, y, metric)?;
    let dyz = distance(y, z, metric)?;
    Ok(match (dxz, dxy, dyz) {
        (DistanceValue::Exact(a), DistanceValue::Exact(b), DistanceValue::Exact(c)) => a <= b + c,
        (DistanceValue::Squared(a), DistanceValue::Squared(b), DistanceValue::Squared(c)) => {
            sqrt_le_sqrt_sum(&a, &b, &c)
        }
        _ => unreachable!("one metric yields one kind"),
    })
}

/// Precomputed comparator for `distance(x, y) <= scale` on integer
/// coordinates.
///
/// When every product provably fits in `i128` the comparison runs entirely on
/// machine integers; otherwise it falls back to exact big-rational
/// arithmetic. Both branches are exact.
#[derive(Debug, Clone)]
pub(crate) struct ScaleCmp {
    metric: Metric,
    fast: Option<FastScale>,
    scale: Rational,
}

#[derive(Debug, Clone, Copy)]
struct FastScale {
    num: i128,
    den: i128,
}

impl ScaleCmp {
    /// `scale` must be non-negative. `coord_bound` is an upper bound on the
    /// absolute value of any coordinate that will be compared.
    pub(crate) fn new(metric: Metric, scale: &Rational, coord_bound: i64, dim: usize) -> Self {
        use num_traits::ToPrimitive;
        let fast = (|| {
            let num = scale.numer().to_i128()?;
            let den = scale.denom().to_i128()?;
            let span = 2i128.checked_mul(i128::from(coord_bound))?;
            let (dist_bound, num_bound) = match metric {
                Metric::L1 => (span.checked_mul(dim as i128)?, num),
                Metric::LInf => (span, num),
                // Squared distances compare against num^2 / den^2.
                Metric::L2 => (
                    span.checked_mul(span)?.checked_mul(dim as i128)?,
                    num.checked_mul(num)?,
                ),
            };
            let den_factor = match metric {
                Metric::L2 => den.checked_mul(den)?,
                _ => den,
            };
            // Both sides of `dist * den <= num` must fit.
            dist_bound.checked_mul(den_factor)?;
            num_bound.checked_mul(1)?;
            Some(FastScale {
                num: num_bound,
                den: den_factor,
            })
        })();
        Self {
            metric,
            fast,
            scale: scale.clone(),
        }
    }

    /// Exact test `distance(x, y) <= scale`.
    pub(crate) fn within(&self, x: &[i64], y: &[i64]) -> bool {
        let d = match self.metric {
            Metric::L1 => l1_int(x, y),
            Metric::LInf => linf_int(x, y),
            Metric::L2 => l2sq_int(x, y),
        };
        match self.fast {
            Some(FastScale { num, den }) => d * den <= num,
            None => {
                let dv = match self.metric {
                    Metric::L2 => DistanceValue::Squared(rat_i128(d)),
                    _ => DistanceValue::Exact(rat_i128(d)),
                };
                dv.le_threshold(&self.scale)
            }
        }
    }
}

/// Offsets `delta` with `|delta_j| <= clip` for all `j` are the only ones
/// that can be within `scale` of the origin in any supported metric; this is
/// the per-coordinate clip used for residual windows.
pub(crate) fn window_clip(scale: &Rational, m: u64) -> i64 {
    let effective = scale * rat_int(m as i64);
    crate::exact::floor_to_i64(&effective).unwrap_or(i64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use alloc::vec;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    #[test]
    fn distance_examples() {
        // Coordinate sum.
        assert_eq!(
            distance(&p(&[0, 0, 0]), &p(&[1, 1, 1]), Metric::L1).unwrap(),
            DistanceValue::Exact(rat_int(3))
        );
        // The three far points of the non-domination configuration are
        // pairwise at distance 6.
        assert_eq!(
            distance(&p(&[3, 0, 0]), &p(&[0, 3, 0]), Metric::L1).unwrap(),
            DistanceValue::Exact(rat_int(6))
        );
        assert_eq!(
            distance(&p(&[1, -2]), &p(&[4, 2]), Metric::LInf).unwrap(),
            DistanceValue::Exact(rat_int(4))
        );
        assert_eq!(
            distance(&p(&[0, 0]), &p(&[1, 1]), Metric::L2).unwrap(),
            DistanceValue::Squared(rat_int(2))
        );
    }

    #[test]
    fn distance_axioms() {
        let a = p(&[2, -1]);
        let b = p(&[-3, 4]);
        for m in Metric::ALL {
            let d1 = distance(&a, &b, m).unwrap();
            let d2 = distance(&b, &a, m).unwrap();
            assert_eq!(d1, d2);
            assert!(distance(&a, &a, m).unwrap().is_zero());
            assert!(!d1.is_zero());
        }
        assert!(distance(&p(&[0]), &p(&[0, 0]), Metric::L1).is_err());
    }

    #[test]
    fn diameter_examples() {
        assert!(diameter(&[p(&[0, 0])], Metric::L1).unwrap().is_zero());
        assert_eq!(
            diameter(&[p(&[0, 0]), p(&[1, 0]), p(&[0, 1])], Metric::L1).unwrap(),
            DistanceValue::Exact(rat_int(2))
        );
        // Corners of the box [-1,1]^2 x [0,1]: diameter 2n-1 = 5 for n = 3.
        assert_eq!(
            diameter(&[p(&[-1, -1, 0]), p(&[1, 1, 1])], Metric::L1).unwrap(),
            DistanceValue::Exact(rat_int(5))
        );
        assert!(matches!(
            diameter(&[], Metric::L1),
            Err(MetricError::EmptySet)
        ));
    }

    #[test]
    fn squared_threshold_compare() {
        let d = distance(&p(&[0, 0]), &p(&[1, 1]), Metric::L2).unwrap();
        // sqrt(2) <= 3/2 since 2 <= 9/4.
        assert!(d.le_threshold(&rat(3, 2)));
        // sqrt(2) > 7/5 since 2 > 49/25.
        assert!(!d.le_threshold(&rat(7, 5)));
    }

    #[test]
    fn mixed_kind_comparisons_are_rejected() {
        let exact = distance(&p(&[0, 0]), &p(&[1, 1]), Metric::L1).unwrap();
        let squared = distance(&p(&[0, 0]), &p(&[1, 1]), Metric::L2).unwrap();
        assert!(matches!(
            exact.compare(&squared),
            Err(MetricError::MixedKinds)
        ));
    }

    #[test]
    fn sqrt_comparison_exact() {
        // sqrt(9) <= sqrt(4) + sqrt(1), tight case sqrt(4) = sqrt(1) + sqrt(1).
        assert!(sqrt_le_sqrt_sum(&rat_int(9), &rat_int(4), &rat_int(1)));
        assert!(sqrt_le_sqrt_sum(&rat_int(4), &rat_int(1), &rat_int(1)));
        // sqrt(5) > sqrt(1) + sqrt(1) since 5 > 4.
        assert!(!sqrt_le_sqrt_sum(&rat_int(5), &rat_int(1), &rat_int(1)));
        // Equality case: sqrt(8) = sqrt(2) + sqrt(2).
        assert!(sqrt_le_sqrt_sum(&rat_int(8), &rat_int(2), &rat_int(2)));
    }

    #[test]
    fn scale_cmp_matches_rational_compare() {
        let pts = [
            p(&[0, 0, 0]),
            p(&[1, -2, 3]),
            p(&[-4, 5, -6]),
            p(&[2, 2, 2]),
        ];
        for m in Metric::ALL {
            for scale in [rat_int(3), rat(7, 2), rat(5, 3), rat_int(0)] {
                let cmp = ScaleCmp::new(m, &scale, 8, 3);
                for a in &pts {
                    for b in &pts {
                        let expect = distance(a, b, m).unwrap().le_threshold(&scale);
                        assert_eq!(cmp.within(a.coords(), b.coords()), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("d1".parse::<Metric>().unwrap(), Metric::L1);
        assert_eq!("inf".parse::<Metric>().unwrap(), Metric::LInf);
        assert_eq!("2".parse::<Metric>().unwrap(), Metric::L2);
        assert!("d3".parse::<Metric>().is_err());
        let _ = vec![Metric::L1]; // silence unused vec import in no_std cfgs
    }
}
