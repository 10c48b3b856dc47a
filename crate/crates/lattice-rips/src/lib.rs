//! Contractibility certificates for Rips complexes of finite integer-lattice
//! grids.
//!
//! The Rips complex of a finite point set `X` at scale `r` is the flag
//! complex of the graph connecting points at distance at most `r`. This crate
//! decides contractibility of such complexes for axis-aligned lattice boxes by
//! repeatedly removing the lexicographically least point, each removal backed
//! by a *witness*: a simplex `L` such that every maximal simplex containing
//! the removed point extends by some member of `L`. Removing such a locally
//! dominated vertex preserves the homotopy type of a flag complex, so a
//! complete removal sequence down to a single point is a machine-checkable
//! contractibility proof.
//!
//! The crate is organized around that pipeline:
//!
//! - [`point`], [`metric`], [`bbox`]: exact rational scalars, lattice points,
//!   the `d_1` / `d_2` / `d_inf` metrics and bounding boxes. No floating
//!   point appears anywhere in a correctness-bearing path.
//! - [`graph`]: neighborhood graphs standing in for Rips complexes, with
//!   maximal-clique enumeration and link/star queries.
//! - [`reduce`]: the removal predicates (domination, local domination) and a
//!   deterministic witness search.
//! - [`crush`]: the reduction engine for lattice boxes, producing
//!   [`crush::CrushCertificate`]s, and an independent certificate verifier.
//! - [`cases`]: the finite case analysis over clipped residual-window shapes;
//!   a fully witnessed table at `(n, r)` proves that the reduction succeeds
//!   on every finite box of that dimension and scale.
//! - [`lp`], [`ball`], [`lec`], [`snap`]: exact rational linear programming,
//!   smallest enclosing balls, Jung ratios, and the near-center machinery
//!   used at large scales.
//! - [`homology`]: reduced `F2` simplicial homology of clique complexes, the
//!   independent oracle for contractibility claims.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature is
//! on by default and `parallel` adds rayon-based parallelism for the case
//! analysis.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod ball;
pub mod bbox;
mod bitset;
pub mod cases;
pub mod crush;
pub mod exact;
pub mod graph;
pub mod homology;
pub mod lec;
pub mod lp;
pub mod metric;
pub mod point;
pub mod reduce;
pub mod rng;
pub mod snap;

pub use exact::Rational;
pub use metric::{DistanceValue, Metric};
pub use point::{LatticePoint, RationalPoint};
