//! Snapping rational near-centers onto a sublattice `(1/m)Z^n`.
//!
//! A constructed near-center is generally not a lattice point; witness
//! members must be. Each leading coordinate snaps to the nearest
//! `1/m`-multiple toward the corresponding coordinate of the anchor `x`
//! (no move when already equal). The last coordinate snaps toward the
//! anchor too, except that landing exactly on the anchor's coordinate is
//! forbidden — the result must stay strictly above `x` in the last
//! coordinate, so it snaps one step up instead. Every coordinate moves by
//! at most `1/m`, so the total `d_1` displacement is at most `n/m`: the
//! redundancy margin of the near-center absorbs it.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exact::Rational;
use crate::point::{LatticePoint, RationalPoint};

/// Error from snapping.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SnapError {
    #[error("point and anchor dimensions differ")]
    DimensionMismatch,
    #[error("lattice denominator m must be positive")]
    ZeroDenominator,
    #[error("snapped coordinate overflows the integer range")]
    Overflow,
}

/// Snaps `c` onto `(1/m)Z^n` relative to the anchor `x`.
///
/// `x` carries integer coordinates in `1/m` units (true point `x/m`), and
/// the returned point uses the same convention. `c` is expected inside the
/// unit box above `x` (leading coordinates within 1, last coordinate in
/// `[x_n/m, x_n/m + 1]`); under that precondition each coordinate moves by
/// at most `1/m` and the result lands strictly above `x` in the last
/// coordinate.
pub fn snap_to_sublattice(
    c: &RationalPoint,
    x: &LatticePoint,
    m: u64,
) -> Result<LatticePoint, SnapError> {
    if c.dim() != x.dim() {
        return Err(SnapError::DimensionMismatch);
    }
    if m == 0 {
        return Err(SnapError::ZeroDenominator);
    }
    let n = c.dim();
    let m_big = BigInt::from(m);
    let mut coords = Vec::with_capacity(n);
    for j in 0..n {
        // Work in 1/m units: q = c_j * m.
        let q: Rational = c.coord(j) * Rational::from_integer(m_big.clone());
        let target = BigInt::from(x.coord(j));
        // Snap toward the target: floor from above, ceil from below.
        let snapped = if q >= Rational::from_integer(target.clone()) {
            q.floor().to_integer()
        } else {
            q.ceil().to_integer()
        };
        let snapped = if j + 1 == n && snapped == target {
            // The last coordinate must end strictly above the anchor.
            target + 1
        } else {
            snapped
        };
        coords.push(snapped.to_i64().ok_or(SnapError::Overflow)?);
    }
    Ok(LatticePoint::new(coords))
}
