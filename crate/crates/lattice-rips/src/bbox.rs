//! Axis-aligned bounding boxes with exact rational endpoints.

use alloc::vec::Vec;

use crate::exact::Rational;
use crate::metric::MetricError;
use crate::point::{LatticePoint, RationalPoint};

/// The product of closed intervals `[lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl BoundingBox {
    /// Builds a box from endpoint vectors; requires `lo_i <= hi_i` for all
    /// `i`.
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(!lo.is_empty());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "inverted interval");
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rational] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rational] {
        &self.hi
    }

    /// Exact membership test.
    pub fn contains(&self, p: &RationalPoint) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (lo, hi))| lo <= c && c <= hi)
    }

    /// Coordinate-wise intersection; `None` when empty.
    pub fn intersect(&self, other: &BoundingBox) -> Option<BoundingBox> {
        assert_eq!(self.dim(), other.dim());
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let l = core::cmp::max(&self.lo[i], &other.lo[i]).clone();
            let h = core::cmp::min(&self.hi[i], &other.hi[i]).clone();
            if l > h {
                return None;
            }
            lo.push(l);
            hi.push(h);
        }
        Some(BoundingBox::new(lo, hi))
    }

    /// Clamps `p` coordinate-wise into the box.
    pub fn clamp(&self, p: &RationalPoint) -> RationalPoint {
        assert_eq!(p.dim(), self.dim());
        RationalPoint::new(
            p.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .map(|(c, (lo, hi))| {
                    if c < lo {
                        lo.clone()
                    } else if c > hi {
                        hi.clone()
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
    }
}

/// Smallest box containing a non-empty set of rational points: each endpoint
/// is the exact coordinate-wise extremum.
pub fn bounding_box(points: &[RationalPoint]) -> Result<BoundingBox, MetricError> {
    let first = points.first().ok_or(MetricError::EmptySet)?;
    let dim = first.dim();
    let mut lo: Vec<Rational> = first.coords().to_vec();
    let mut hi = lo.clone();
    for p in &points[1..] {
        if p.dim() != dim {
            return Err(MetricError::Dimension(crate::point::DimensionMismatch {
                left: dim,
                right: p.dim(),
            }));
        }
        for (i, c) in p.coords().iter().enumerate() {
            if c < &lo[i] {
                lo[i] = c.clone();
            }
            if c > &hi[i] {
                hi[i] = c.clone();
            }
        }
    }
    Ok(BoundingBox::new(lo, hi))
}

/// [`bounding_box`] over lattice points.
pub fn bounding_box_lattice(points: &[LatticePoint]) -> Result<BoundingBox, MetricError> {
    let rational: Vec<RationalPoint> = points.iter().map(RationalPoint::from).collect();
    bounding_box(&rational)
}
