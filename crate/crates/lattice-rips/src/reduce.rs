//! Removal predicates: domination, local domination, and witness search.
//!
//! A vertex `a` is *dominated* by `b` when every simplex containing `a`
//! extends by `b`; in a flag complex this is exactly the closed-neighborhood
//! containment `N[a] ⊆ N[b]`. More generally `a` is *locally dominated* by a
//! witness simplex `L` (not containing `a`) when every simplex containing `a`
//! extends by some member of `L`. Removing a locally dominated vertex from a
//! flag complex preserves the homotopy type, which is what certificate steps
//! record.
//!
//! Because extending a sub-simplex is never harder than extending a
//! super-simplex, it suffices to check the inclusion-maximal cliques
//! containing `a`; the all-simplices quantifier is kept as a brute-force test
//! oracle.

use alloc::vec::Vec;

use crate::graph::{GraphError, NeighborhoodGraph};
use crate::point::lex_compare_unchecked;

/// Error from a reduction predicate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("domination of a vertex by itself is undefined")]
    SameVertex,
    #[error("malformed witness: {0}")]
    MalformedWitness(&'static str),
    #[error("candidate {0} is not a neighbor of the anchor")]
    CandidateNotNeighbor(usize),
}

/// A witness simplex `L` anchored at a vertex: every maximal clique through
/// the anchor extends by some member of `L`.
///
/// Members are vertex indices of the host graph, sorted ascending; the
/// anchor is never a member and the members are pairwise adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    anchor: usize,
    members: Vec<usize>,
}

impl Witness {
    /// Assembles a witness, validating its structural invariants against the
    /// graph (anchor excluded, non-empty, pairwise adjacent).
    pub fn new(
        g: &NeighborhoodGraph,
        anchor: usize,
        mut members: Vec<usize>,
    ) -> Result<Self, ReduceError> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(ReduceError::MalformedWitness("empty member set"));
        }
        if members.contains(&anchor) {
            return Err(ReduceError::MalformedWitness("witness contains the anchor"));
        }
        if !g.is_clique(&members)? {
            return Err(ReduceError::MalformedWitness("members are not a clique"));
        }
        Ok(Self { anchor, members })
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Whether `a` is dominated by `b`: true iff every clique containing `a`
/// stays a clique with `b` added, i.e. `N[a] ⊆ N[b]`.
pub fn is_dominated(g: &NeighborhoodGraph, a: usize, b: usize) -> Result<bool, ReduceError> {
    if a == b {
        return Err(ReduceError::SameVertex);
    }
    if a >= g.len() || b >= g.len() {
        return Err(ReduceError::Graph(GraphError::UnknownVertex(a.max(b))));
    }
    if !g.adjacent(a, b) {
        return Ok(false);
    }
    Ok(g.neighbors(a).all(|u| u == b || g.adjacent(u, b)))
}

/// Whether the witness locally dominates its anchor: every maximal clique
/// through the anchor admits a member of `L` extending it. Sufficient for
/// all cliques through the anchor because faces extend whenever their hosts
/// do.
pub fn check_local_domination(g: &NeighborhoodGraph, w: &Witness) -> Result<bool, ReduceError> {
    if w.anchor >= g.len() {
        return Err(ReduceError::Graph(GraphError::UnknownVertex(w.anchor)));
    }
    // Re-validate against this graph: a witness built elsewhere may not be a
    // clique here.
    if w.members.is_empty() {
        return Err(ReduceError::MalformedWitness("empty member set"));
    }
    if w.members.contains(&w.anchor) {
        return Err(ReduceError::MalformedWitness("witness contains the anchor"));
    }
    if !g.is_clique(&w.members)? {
        return Err(ReduceError::MalformedWitness("members are not a clique"));
    }
    for sigma in g.maximal_cliques_containing(w.anchor)? {
        let extendable = w
            .members
            .iter()
            .any(|&b| sigma.verts().iter().all(|&u| u == b || g.adjacent(u, b)));
        if !extendable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Deterministic witness search.
///
/// Scans clique subsets of `candidates` of size `1..=max_size`, smallest
/// first and lexicographically by the sorted member point tuples within each
/// size, and returns the first valid witness. Singleton results coincide
/// with plain domination. `None` means no witness exists within the size
/// bound among the candidates; the search is exhaustive, never heuristic.
pub fn find_witness(
    g: &NeighborhoodGraph,
    anchor: usize,
    max_size: usize,
    candidates: &[usize],
) -> Result<Option<Witness>, ReduceError> {
    if anchor >= g.len() {
        return Err(ReduceError::Graph(GraphError::UnknownVertex(anchor)));
    }
    let mut cands: Vec<usize> = candidates.to_vec();
    cands.sort_unstable();
    cands.dedup();
    for &c in &cands {
        if c >= g.len() {
            return Err(ReduceError::Graph(GraphError::UnknownVertex(c)));
        }
        if c == anchor || !g.adjacent(anchor, c) {
            return Err(ReduceError::CandidateNotNeighbor(c));
        }
    }
    if max_size == 0 || cands.is_empty() {
        return Ok(None);
    }
    // Search order: by the reversed-index lexicographic order on points.
    cands.sort_by(|&u, &v| lex_compare_unchecked(g.point(u).coords(), g.point(v).coords()));

    let cliques = g.maximal_cliques_containing(anchor)?;
    let words = cliques.len().div_ceil(64).max(1);
    let mut full = alloc::vec![u64::MAX; words];
    if cliques.len() % 64 != 0 {
        full[words - 1] = (1u64 << (cliques.len() % 64)) - 1;
    }

    // masks[c][i]: candidate c extends maximal clique i.
    let masks: Vec<Vec<u64>> = cands
        .iter()
        .map(|&c| {
            let mut mask = alloc::vec![0u64; words];
            for (i, sigma) in cliques.iter().enumerate() {
                if sigma.verts().iter().all(|&u| u == c || g.adjacent(u, c)) {
                    mask[i / 64] |= 1 << (i % 64);
                }
            }
            mask
        })
        .collect();

    // Candidates extending no maximal clique can never appear in a
    // first-found witness (dropping one from a valid set leaves a smaller
    // valid set, found earlier), so prune them.
    let keep: Vec<usize> = (0..cands.len())
        .filter(|&i| masks[i].iter().any(|&w| w != 0))
        .collect();

    // suffix_cover[i] = union of the masks of keep[i..]: a branch whose
    // current cover plus this union misses some clique can never complete.
    let mut suffix_cover: Vec<Vec<u64>> = alloc::vec![alloc::vec![0u64; words]; keep.len() + 1];
    for i in (0..keep.len()).rev() {
        let mut acc = suffix_cover[i + 1].clone();
        for (w, m) in acc.iter_mut().zip(&masks[keep[i]]) {
            *w |= m;
        }
        suffix_cover[i] = acc;
    }

    let search = SubsetSearch {
        g,
        cands: &cands,
        keep: &keep,
        masks: &masks,
        suffix_cover: &suffix_cover,
        full: &full,
    };
    for size in 1..=max_size.min(keep.len()) {
        let mut chosen = Vec::with_capacity(size);
        let cover = alloc::vec![0u64; words];
        if let Some(members) = search.descend(0, size, &cover, &mut chosen) {
            return Ok(Some(Witness::new(g, anchor, members)?));
        }
    }
    Ok(None)
}

/// Depth-first scan of clique subsets of the kept candidates, in exactly
/// the lexicographic order of the plain combination enumeration, with
/// cover-based pruning.
struct SubsetSearch<'a> {
    g: &'a NeighborhoodGraph,
    cands: &'a [usize],
    keep: &'a [usize],
    masks: &'a [Vec<u64>],
    suffix_cover: &'a [Vec<u64>],
    full: &'a [u64],
}

impl SubsetSearch<'_> {
    fn descend(
        &self,
        start: usize,
        slots: usize,
        cover: &[u64],
        chosen: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        debug_assert!(slots > 0);
        let limit = self.keep.len().saturating_sub(slots - 1);
        for i in start..limit {
            // No completion from here on can cover the remaining cliques;
            // later starts only shrink the available union.
            if !covers(cover, &self.suffix_cover[i], self.full) {
                return None;
            }
            let v = self.cands[self.keep[i]];
            if !chosen.iter().all(|&u| self.g.adjacent(u, v)) {
                continue;
            }
            let mut next_cover = cover.to_vec();
            for (w, m) in next_cover.iter_mut().zip(&self.masks[self.keep[i]]) {
                *w |= m;
            }
            if slots == 1 {
                if next_cover == self.full {
                    let mut members = chosen.clone();
                    members.push(v);
                    return Some(members);
                }
                continue;
            }
            chosen.push(v);
            if let Some(found) = self.descend(i + 1, slots - 1, &next_cover, chosen) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
}

fn covers(cover: &[u64], extra: &[u64], full: &[u64]) -> bool {
    cover
        .iter()
        .zip(extra)
        .zip(full)
        .all(|((c, e), f)| (c | e) & f == *f)
}

/// Plain lexicographic combination generator over `0..n`; the reference
/// enumeration the pruned search must match.
#[cfg_attr(not(test), allow(dead_code))]
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
}

#[cfg_attr(not(test), allow(dead_code))]
impl Combinations {
    fn new(n: usize) -> Self {
        Self {
            n,
            idx: Vec::new(),
            started: false,
        }
    }

    fn reset(&mut self, k: usize) {
        self.idx = (0..k).collect();
        self.started = false;
    }

    fn next(&mut self) -> Option<&[usize]> {
        let k = self.idx.len();
        if k == 0 || k > self.n {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.idx[i] != i + self.n - k {
                break;
            }
        }
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(&self.idx)
    }
}
