//! Reduced simplicial homology of clique complexes over `F2`.
//!
//! The independent oracle: Betti numbers are computed from explicit
//! boundary matrices by column reduction, sharing nothing with the
//! reduction engine. All reported degrees are exact — degree `k` needs the
//! `(k+1)`-skeleton, and the skeleton is enumerated one dimension past the
//! top reported degree. Everything is `F2`: ranks certify non-trivial
//! cycles, which is all the certificates need contradicted or confirmed.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::graph::{GraphError, NeighborhoodGraph};

/// Default ceiling on the total number of enumerated simplices.
pub const DEFAULT_SIMPLEX_CAP: usize = 5_000_000;

/// Error from skeleton enumeration or homology.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("simplex count exceeds the cap of {cap}")]
    CapExceeded { cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// All simplices of one dimension, flattened: `width` vertices per
/// simplex, tuples sorted ascending, listed in lexicographic order.
#[derive(Debug, Clone)]
pub struct DimListing {
    width: usize,
    flat: Vec<u32>,
}

impl DimListing {
    pub fn len(&self) -> usize {
        debug_assert!(self.width > 0);
        self.flat.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.flat[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.flat.chunks_exact(self.width)
    }

    fn position(&self, tuple: &[u32]) -> Option<usize> {
        debug_assert_eq!(tuple.len(), self.width);
        let mut lo = 0usize;
        let mut hi = self.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(tuple) {
                core::cmp::Ordering::Less => lo = mid + 1,
                core::cmp::Ordering::Greater => hi = mid,
                core::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// The cliques of the graph grouped by dimension `0..=k_max`, closed under
/// faces up to the cap dimension.
#[derive(Debug, Clone)]
pub struct SkeletonListing {
    dims: Vec<DimListing>,
}

impl SkeletonListing {
    /// Highest enumerated dimension.
    pub fn k_max(&self) -> usize {
        self.dims.len() - 1
    }

    /// Simplex count in dimension `d` (zero beyond the cap).
    pub fn count(&self, d: usize) -> usize {
        self.dims.get(d).map_or(0, DimListing::len)
    }

    pub fn dim_listing(&self, d: usize) -> Option<&DimListing> {
        self.dims.get(d)
    }

    pub fn total(&self) -> usize {
        self.dims.iter().map(DimListing::len).sum()
    }

    /// Alternating sum of simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, l)| {
                let n = l.len() as i64;
                if d % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }
}

/// Enumerates every clique of at most `k_max + 1` vertices, each exactly
/// once, in a deterministic (lexicographic) order, with the default cap.
pub fn enumerate_skeleton(
    g: &NeighborhoodGraph,
    k_max: usize,
) -> Result<SkeletonListing, HomologyError> {
    enumerate_skeleton_with_cap(g, k_max, DEFAULT_SIMPLEX_CAP)
}

/// [`enumerate_skeleton`] with an explicit simplex-count cap; exceeding it
/// is an error, never a silent truncation.
pub fn enumerate_skeleton_with_cap(
    g: &NeighborhoodGraph,
    k_max: usize,
    cap: usize,
) -> Result<SkeletonListing, HomologyError> {
    let n = g.len();
    let mut dims: Vec<DimListing> = (0..=k_max)
        .map(|d| DimListing {
            width: d + 1,
            flat: Vec::new(),
        })
        .collect();
    let mut total = 0usize;

    // Depth-first growth by ascending vertex: emits each dimension in
    // lexicographic order.
    let mut stack: Vec<u32> = Vec::with_capacity(k_max + 1);
    for v in 0..n {
        let cands = g_neighbor_set_above(g, v);
        stack.push(v as u32);
        grow(g, &mut stack, &cands, k_max, cap, &mut dims, &mut total)?;
        stack.pop();
    }
    Ok(SkeletonListing { dims })
}

fn g_neighbor_set_above(g: &NeighborhoodGraph, v: usize) -> BitSet {
    let mut s = BitSet::new(g.len());
    for u in g.neighbors(v) {
        if u > v {
            s.insert(u);
        }
    }
    s
}

fn grow(
    g: &NeighborhoodGraph,
    clique: &mut Vec<u32>,
    cands: &BitSet,
    k_max: usize,
    cap: usize,
    dims: &mut [DimListing],
    total: &mut usize,
) -> Result<(), HomologyError> {
    let d = clique.len() - 1;
    *total += 1;
    if *total > cap {
        return Err(HomologyError::CapExceeded { cap });
    }
    dims[d].flat.extend_from_slice(clique);
    if d == k_max {
        return Ok(());
    }
    for u in cands.iter_ones().collect::<Vec<_>>() {
        // Candidates stay above u and adjacent to everything so far.
        let mut next = cands.and_words(g.neighbor_words(u));
        next.clear_upto(u);
        clique.push(u as u32);
        grow(g, clique, &next, k_max, cap, dims, total)?;
        clique.pop();
    }
    Ok(())
}

/// Reduced `F2` Betti numbers for degrees `0..k_max`, all exact (degree `k`
/// uses boundary ranks up to `k + 1`, and the skeleton reaches `k_max`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector {
    reduced: Vec<u64>,
}

impl BettiVector {
    /// `reduced()[k]` is the reduced Betti number in degree `k`.
    pub fn reduced(&self) -> &[u64] {
        &self.reduced
    }

    pub fn get(&self, k: usize) -> Option<u64> {
        self.reduced.get(k).copied()
    }

    /// Degrees reported: `0..top_degree()` inclusive.
    pub fn top_degree(&self) -> Option<usize> {
        self.reduced.len().checked_sub(1)
    }

    pub fn all_zero(&self) -> bool {
        self.reduced.iter().all(|&b| b == 0)
    }

    /// `1 + Σ (-1)^k β̃_k` over the reported degrees: comparable to the
    /// simplex-count Euler characteristic when the skeleton cap exceeds the
    /// complex dimension.
    pub fn euler_characteristic(&self) -> i64 {
        1 + self
            .reduced
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum::<i64>()
    }
}

/// Reduced `F2` Betti numbers of the clique complex in degrees
/// `0..k_max - 1`, via boundary-matrix column reduction, default cap.
pub fn betti_numbers(g: &NeighborhoodGraph, k_max: usize) -> Result<BettiVector, HomologyError> {
    betti_numbers_with_cap(g, k_max, DEFAULT_SIMPLEX_CAP)
}

/// [`betti_numbers`] with an explicit simplex cap.
pub fn betti_numbers_with_cap(
    g: &NeighborhoodGraph,
    k_max: usize,
    cap: usize,
) -> Result<BettiVector, HomologyError> {
    if k_max == 0 {
        return Ok(BettiVector { reduced: vec![] });
    }
    let skeleton = enumerate_skeleton_with_cap(g, k_max, cap)?;
    betti_from_skeleton(&skeleton)
}

/// Betti numbers from an already-enumerated skeleton.
pub fn betti_from_skeleton(skeleton: &SkeletonListing) -> Result<BettiVector, HomologyError> {
    let k_max = skeleton.k_max();
    if k_max == 0 {
        return Ok(BettiVector { reduced: vec![] });
    }
    // rank[d] = rank of the boundary map from dimension d to d - 1.
    let mut rank = vec![0usize; k_max + 1];
    for d in 1..=k_max {
        let rows = skeleton.dim_listing(d - 1).expect("dimension within cap");
        let cols = skeleton.dim_listing(d).expect("dimension within cap");
        if cols.is_empty() || rows.is_empty() {
            continue;
        }
        let mut columns: Vec<Vec<u32>> = Vec::with_capacity(cols.len());
        let mut face = vec![0u32; d];
        for simplex in cols.iter() {
            let mut indices: Vec<u32> = Vec::with_capacity(d + 1);
            for skip in 0..=d {
                let mut w = 0;
                for (i, &v) in simplex.iter().enumerate() {
                    if i != skip {
                        face[w] = v;
                        w += 1;
                    }
                }
                let row = rows
                    .position(&face)
                    .expect("faces of enumerated cliques are enumerated");
                indices.push(row as u32);
            }
            indices.sort_unstable();
            columns.push(indices);
        }
        rank[d] = rank_f2(columns, rows.len());
    }

    let mut reduced = Vec::with_capacity(k_max);
    let n0 = skeleton.count(0) as i64;
    reduced.push((n0 - rank[1] as i64 - 1).max(0) as u64);
    for k in 1..k_max {
        let nk = skeleton.count(k) as i64;
        let b = nk - rank[k] as i64 - rank[k + 1] as i64;
        debug_assert!(b >= 0);
        reduced.push(b.max(0) as u64);
    }
    Ok(BettiVector { reduced })
}

/// Rank of an `F2` matrix given as sorted sparse columns.
fn rank_f2(columns: Vec<Vec<u32>>, rows: usize) -> usize {
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut rank = 0;
    for mut col in columns {
        while let Some(&low) = col.last() {
            let Some(owner) = pivot_of_row[low as usize] else {
                break;
            };
            col = xor_sorted(&col, &reduced[owner]);
        }
        if let Some(&low) = col.last() {
            pivot_of_row[low as usize] = Some(reduced.len());
            reduced.push(col);
            rank += 1;
        }
    }
    rank
}

/// Symmetric difference of two ascending index lists.
fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
