//! Neighborhood graphs: the 1-skeleta of Rips complexes.
//!
//! A Rips complex at scale `r` is flag — it is determined by the graph
//! connecting points at distance at most `r` — so the graph stands in for the
//! complex everywhere except in the homology oracle. Simplices are cliques;
//! the star of a vertex is covered by the maximal cliques containing it.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::bitset::{BitMatrix, BitSet};
use crate::exact::Rational;
use crate::metric::{Metric, ScaleCmp};
use crate::point::{lex_compare_unchecked, LatticePoint};

/// Error from graph construction or queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate point at positions {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("points have mixed dimensions")]
    MixedDimensions,
    #[error("empty point cloud")]
    EmptyCloud,
    #[error("negative scale")]
    NegativeScale,
    #[error("unknown vertex index {0}")]
    UnknownVertex(usize),
}

/// A sorted set of pairwise-adjacent vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clique {
    verts: Vec<usize>,
}

impl Clique {
    pub fn new(mut verts: Vec<usize>) -> Self {
        verts.sort_unstable();
        verts.dedup();
        Self { verts }
    }

    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.verts.binary_search(&v).is_ok()
    }
}

/// The graph on a finite point cloud connecting points at distance at most
/// `scale`; its clique complex is the Rips complex of the cloud at that
/// scale.
#[derive(Debug, Clone)]
pub struct NeighborhoodGraph {
    points: Vec<LatticePoint>,
    metric: Metric,
    scale: Rational,
    adj: BitMatrix,
}

impl NeighborhoodGraph {
    /// Builds the graph with adjacency `u ~ v` iff `u != v` and
    /// `d(u, v) <= scale`, compared exactly (closed threshold).
    pub fn build(
        points: Vec<LatticePoint>,
        metric: Metric,
        scale: Rational,
    ) -> Result<Self, GraphError> {
        if points.is_empty() {
            return Err(GraphError::EmptyCloud);
        }
        if scale < crate::exact::rat_int(0) {
            return Err(GraphError::NegativeScale);
        }
        let dim = points[0].dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(GraphError::MixedDimensions);
        }
        // Duplicate detection via a sorted index permutation.
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_unstable_by(|&a, &b| points[a].coords().cmp(points[b].coords()));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(GraphError::DuplicatePoint(a, b));
            }
        }

        let coord_bound = points
            .iter()
            .flat_map(|p| p.coords().iter().copied())
            .map(i64::abs)
            .max()
            .unwrap_or(0);
        let cmp = ScaleCmp::new(metric, &scale, coord_bound, dim);
        let mut adj = BitMatrix::new(points.len());
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if cmp.within(points[i].coords(), points[j].coords()) {
                    adj.set_edge(i, j);
                }
            }
        }
        Ok(Self {
            points,
            metric,
            scale,
            adj,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn point(&self, v: usize) -> &LatticePoint {
        &self.points[v]
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.neighbors(v)
    }

    /// Raw neighbor-row words of `v`, for word-wise intersections.
    pub(crate) fn neighbor_words(&self, v: usize) -> &[u64] {
        self.adj.row(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.degree(v)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// Whether `verts` is pairwise adjacent. Empty sets and singletons are
    /// cliques.
    pub fn is_clique(&self, verts: &[usize]) -> Result<bool, GraphError> {
        for &v in verts {
            self.check_vertex(v)?;
        }
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if u != v && !self.adjacent(u, v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All inclusion-maximal cliques containing `v`, each exactly once, in a
    /// deterministic order.
    ///
    /// Every clique containing `v` lies inside the closed neighborhood of
    /// `v`, and maximality there coincides with maximality in the whole
    /// graph, so the search is confined to `N(v)`.
    pub fn maximal_cliques_containing(&self, v: usize) -> Result<Vec<Clique>, GraphError> {
        self.check_vertex(v)?;
        let mut out = Vec::new();
        let mut r = alloc::vec![v];
        let p = self.adj.neighbor_set(v);
        let x = BitSet::new(self.len());
        self.bron_kerbosch(&mut r, p, x, &mut out);
        Ok(out)
    }

    /// All inclusion-maximal cliques of the graph, deterministic order.
    pub fn maximal_cliques(&self) -> Vec<Clique> {
        let mut out = Vec::new();
        let mut r = Vec::new();
        let mut p = BitSet::new(self.len());
        for i in 0..self.len() {
            p.insert(i);
        }
        let x = BitSet::new(self.len());
        self.bron_kerbosch(&mut r, p, x, &mut out);
        out
    }

    /// Bron–Kerbosch with pivoting. The pivot maximizes `|P ∩ N(u)|` with
    /// ties broken by smallest index, and extension vertices are taken in
    /// ascending index order, so the output order is deterministic.
    fn bron_kerbosch(&self, r: &mut Vec<usize>, p: BitSet, mut x: BitSet, out: &mut Vec<Clique>) {
        if p.is_empty() && x.is_empty() {
            out.push(Clique::new(r.clone()));
            return;
        }
        let pivot = p
            .iter_ones()
            .chain(x.iter_ones())
            .map(|u| (u, p.intersection_count(self.adj.row(u))))
            .max_by(|(u, cu), (v, cv)| cu.cmp(cv).then(v.cmp(u)))
            .map(|(u, _)| u)
            .expect("p or x non-empty");
        let mut candidates = p.clone();
        for u in self.adj.neighbors(pivot) {
            candidates.remove(u);
        }
        let mut p = p;
        for u in candidates.iter_ones() {
            let np = p.and_words(self.adj.row(u));
            let nx = x.and_words(self.adj.row(u));
            r.push(u);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.remove(u);
            x.insert(u);
        }
    }

    /// The induced graph on the neighbors of `v`; its clique complex is the
    /// link of `v` in the flag complex.
    pub fn link_subgraph(&self, v: usize) -> Result<NeighborhoodGraph, GraphError> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = self.neighbors(v).collect();
        Ok(self.restrict(&keep))
    }

    /// The induced subgraph on `keep` (indices ascending), with adjacency
    /// bits copied rather than recomputed from distances.
    pub fn restrict(&self, keep: &[usize]) -> NeighborhoodGraph {
        let mut adj = BitMatrix::new(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    adj.set_edge(i, j);
                }
            }
        }
        NeighborhoodGraph {
            points: keep.iter().map(|&u| self.points[u].clone()).collect(),
            metric: self.metric,
            scale: self.scale.clone(),
            adj,
        }
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Index of the lex-least point (reversed-index order).
    pub fn lex_least_vertex(&self) -> usize {
        let mut best = 0;
        for v in 1..self.len() {
            if lex_compare_unchecked(self.points[v].coords(), self.points[best].coords())
                == Ordering::Less
            {
                best = v;
            }
        }
        best
    }
}
