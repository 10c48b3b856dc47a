//! Lattice and rational points, and the reversed-index lexicographic order.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;

use crate::exact::Rational;

/// Mismatched dimensions in a binary point operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// A point of `Z^n`, stored as integer coordinates.
///
/// When a scaled lattice `(1/m)Z^n` is in play, coordinates are kept integral
/// and the scale denominator `m` is carried alongside by the consumer; see
/// [`crate::crush::GridSpec`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    /// Builds a point from its coordinates. Dimension must be positive.
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "zero-dimensional point");
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> i64 {
        self.coords[i]
    }

    /// The all-zero point of dimension `n`.
    pub fn origin(n: usize) -> Self {
        Self::new(alloc::vec![0; n])
    }

    /// Coordinate-wise translation by `delta`.
    pub fn translate(&self, delta: &[i64]) -> Self {
        assert_eq!(self.dim(), delta.len());
        Self::new(
            self.coords
                .iter()
                .zip(delta)
                .map(|(c, d)| c + d)
                .collect(),
        )
    }

    /// Coordinate-wise difference `self - other`.
    pub fn offset_from(&self, other: &Self) -> Vec<i64> {
        assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// The point with rational coordinates `self / m`.
    pub fn to_rational(&self, m: u64) -> RationalPoint {
        let den = BigInt::from(m);
        RationalPoint::new(
            self.coords
                .iter()
                .map(|&c| Rational::new(BigInt::from(c), den.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point of `Q^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "zero-dimensional point");
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn origin(n: usize) -> Self {
        Self::new(alloc::vec![crate::exact::rat_int(0); n])
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| crate::exact::rat_int(c)).collect())
    }

    /// Coordinate-wise scaling by `factor`.
    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coords.iter().map(|c| c * factor).collect())
    }
}

impl From<&LatticePoint> for RationalPoint {
    fn from(p: &LatticePoint) -> Self {
        RationalPoint::from_integers(p.coords())
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Reversed-index lexicographic comparison: the *last* coordinate is the most
/// significant, so `x < y` iff at the largest index where they differ the
/// coordinate of `x` is smaller.
///
/// This is the removal order used throughout the reduction engine.
pub fn lex_compare(x: &LatticePoint, y: &LatticePoint) -> Result<Ordering, DimensionMismatch> {
    if x.dim() != y.dim() {
        return Err(DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(lex_compare_unchecked(x.coords(), y.coords()))
}

/// Reversed-index lexicographic comparison on raw coordinate slices of equal
/// length.
pub fn lex_compare_unchecked(x: &[i64], y: &[i64]) -> Ordering {
    debug_assert_eq!(x.len(), y.len());
    for (a, b) in x.iter().rev().zip(y.iter().rev()) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    #[test]
    fn lex_last_coordinate_dominates() {
        // Differ at indices 0 and 2; the largest differing index decides.
        assert_eq!(
            lex_compare(&p(&[1, 0, 0]), &p(&[0, 1, 0])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&p(&[0, 0]), &p(&[0, 0])).unwrap(),
            Ordering::Equal
        );
        // Equal last coordinate: the first coordinate decides.
        assert_eq!(
            lex_compare(&p(&[2, 1]), &p(&[3, 1])).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            lex_compare(&p(&[0, 0, 1]), &p(&[5, 5, 0])).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn lex_rejects_dimension_mismatch() {
        assert!(lex_compare(&p(&[0]), &p(&[0, 0])).is_err());
    }

    #[test]
    fn translation_invariance() {
        let a = p(&[3, -1, 2]);
        let b = p(&[3, 0, 1]);
        let t = [7, -4, 11];
        assert_eq!(
            lex_compare(&a, &b).unwrap(),
            lex_compare(&a.translate(&t), &b.translate(&t)).unwrap()
        );
    }

    #[test]
    fn offsets_and_rational_conversion() {
        let a = p(&[4, 6]);
        let b = p(&[1, 2]);
        assert_eq!(a.offset_from(&b), vec![3, 4]);
        let r = a.to_rational(2);
        assert_eq!(r.coord(0), &crate::exact::rat(4, 2));
        assert_eq!(r.coord(1), &crate::exact::rat_int(3));
    }
}
