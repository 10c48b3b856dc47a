//! Finite case analysis over clipped residual-window shapes.
//!
//! During lexicographic reduction of any box grid, the alive pattern near
//! the removal point is determined by its clipped distances to the grid
//! boundary: offsets beyond the scale radius are irrelevant (a point farther
//! than the scale from the anchor can never belong to, or extend, a simplex
//! containing it). For integer scale `r` this leaves finitely many window
//! shapes: `(r+1)^(2n-1)` configurations in dimension `n`. Witnessing the
//! anchor in every non-terminal configuration is therefore a machine-checked
//! proof that the reduction succeeds on every finite box grid at `(n, r)`.

use alloc::vec::Vec;

use crate::crush::StepMode;
use crate::exact::Rational;
use crate::graph::NeighborhoodGraph;
use crate::metric::Metric;
use crate::point::{lex_compare_unchecked, LatticePoint};
use crate::reduce::find_witness;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Error from case enumeration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CasesError {
    #[error("dimension must be positive")]
    BadDimension,
    #[error("scale must be at least 1 for case enumeration")]
    ScaleTooSmall,
    #[error("case enumeration requires an integer scale")]
    NonIntegerScale,
    #[error("{0} configurations exceed the supported maximum")]
    TooManyCases(u128),
}

const MAX_CASES: u128 = 50_000_000;

/// One clipped window shape: how far the grid extends below the anchor in
/// the leading coordinates (`below`, in `[-r, 0]`) and above it in every
/// coordinate (`above`, in `[0, r]`). Extents at the clip value stand for
/// "at least this far". The anchor never has alive points below it in the
/// last coordinate, so no `below` entry exists for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WindowConfiguration {
    below: Vec<i64>,
    above: Vec<i64>,
}

impl WindowConfiguration {
    pub fn new(below: Vec<i64>, above: Vec<i64>, r: i64) -> Self {
        assert_eq!(below.len() + 1, above.len());
        assert!(below.iter().all(|&a| -r <= a && a <= 0));
        assert!(above.iter().all(|&b| 0 <= b && b <= r));
        Self { below, above }
    }

    pub fn dim(&self) -> usize {
        self.above.len()
    }

    pub fn below(&self) -> &[i64] {
        &self.below
    }

    pub fn above(&self) -> &[i64] {
        &self.above
    }

    /// The window point set: offsets within the clipped extents that are
    /// lexicographically non-negative, anchor (the origin) first, in
    /// lexicographic order.
    pub fn window_points(&self) -> Vec<LatticePoint> {
        let n = self.dim();
        let zero = alloc::vec![0i64; n];
        let mut out = Vec::new();
        let mut delta: Vec<i64> = (0..n)
            .map(|j| if j + 1 == n { 0 } else { self.below[j] })
            .collect();
        loop {
            if lex_compare_unchecked(&delta, &zero) != core::cmp::Ordering::Less {
                out.push(LatticePoint::new(delta.clone()));
            }
            let mut axis = 0;
            loop {
                if axis == n {
                    out.sort_by(|a, b| lex_compare_unchecked(a.coords(), b.coords()));
                    return out;
                }
                if delta[axis] < self.above[axis] {
                    delta[axis] += 1;
                    break;
                }
                delta[axis] = if axis + 1 == n { 0 } else { self.below[axis] };
                axis += 1;
            }
        }
    }

    /// Whether the window holds only the anchor: the shape at the
    /// lexicographically greatest point of a grid, where the reduction
    /// terminates.
    pub fn is_terminal(&self) -> bool {
        self.above.iter().all(|&b| b == 0)
    }
}

/// Enumerates every clipped window configuration for dimension `n` at
/// integer scale `r`, each exactly once, in a deterministic odometer order.
pub fn enumerate_cases(n: usize, r: &Rational) -> Result<CaseIter, CasesError> {
    if n == 0 {
        return Err(CasesError::BadDimension);
    }
    if !r.is_integer() {
        return Err(CasesError::NonIntegerScale);
    }
    if *r < crate::exact::rat_int(1) {
        return Err(CasesError::ScaleTooSmall);
    }
    let r = crate::exact::floor_to_i64(r).ok_or(CasesError::ScaleTooSmall)?;
    let per_axis = r as u128 + 1;
    let mut total: u128 = 1;
    for _ in 0..2 * n - 1 {
        total = total.saturating_mul(per_axis);
        if total > MAX_CASES {
            return Err(CasesError::TooManyCases(total));
        }
    }
    Ok(CaseIter {
        n,
        r,
        state: alloc::vec![0; 2 * n - 1],
        done: false,
    })
}

/// Iterator over window configurations.
pub struct CaseIter {
    n: usize,
    r: i64,
    /// Odometer digits: `below` offsets (as `0..=r`, stored negated) then
    /// `above` extents.
    state: Vec<i64>,
    done: bool,
}

impl CaseIter {
    pub fn total(&self) -> u128 {
        (self.r as u128 + 1).pow(2 * self.n as u32 - 1)
    }
}

impl Iterator for CaseIter {
    type Item = WindowConfiguration;

    fn next(&mut self) -> Option<WindowConfiguration> {
        if self.done {
            return None;
        }
        let below: Vec<i64> = self.state[..self.n - 1].iter().map(|&v| -v).collect();
        let above: Vec<i64> = self.state[self.n - 1..].to_vec();
        let config = WindowConfiguration::new(below, above, self.r);
        let mut axis = 0;
        loop {
            if axis == self.state.len() {
                self.done = true;
                break;
            }
            if self.state[axis] < self.r {
                self.state[axis] += 1;
                break;
            }
            self.state[axis] = 0;
            axis += 1;
        }
        Some(config)
    }
}

/// Outcome for a single window configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseOutcome {
    /// The anchor has a witness among its alive neighbors.
    Witnessed {
        witness: Vec<LatticePoint>,
        mode: StepMode,
    },
    /// The window holds only the anchor; no removal happens here.
    Terminal,
    /// No witness within the size bound: the configuration defeats the
    /// reduction at this scale.
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseRow {
    pub config: WindowConfiguration,
    pub outcome: CaseOutcome,
}

/// The per-configuration table plus summary counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub dim: usize,
    pub scale: Rational,
    pub metric: Metric,
    pub max_witness_size: usize,
    pub rows: Vec<CaseRow>,
    pub witnessed: usize,
    pub terminal: usize,
    pub stuck: usize,
}

impl CaseReport {
    /// Every non-terminal configuration is witnessed: the reduction
    /// succeeds on every finite box grid at this dimension and scale.
    pub fn fully_witnessed(&self) -> bool {
        self.stuck == 0
    }
}

/// Runs the deterministic witness search on the anchor of every enumerated
/// configuration.
///
/// A fully witnessed report is a machine-checked proof that lexicographic
/// reduction succeeds on every finite box grid at `(n, r)`; a stuck row is
/// reported, never asserted away. Rows are in enumeration order regardless
/// of parallelism.
pub fn conjecture_search(
    n: usize,
    r: &Rational,
    max_witness_size: usize,
    metric: Metric,
) -> Result<CaseReport, CasesError> {
    let configs: Vec<WindowConfiguration> = enumerate_cases(n, r)?.collect();

    let solve = |config: &WindowConfiguration| -> CaseRow {
        let outcome = solve_case(config, r, max_witness_size, metric);
        CaseRow {
            config: config.clone(),
            outcome,
        }
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<CaseRow> = configs.par_iter().map(solve).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<CaseRow> = configs.iter().map(solve).collect();

    let witnessed = rows
        .iter()
        .filter(|r| matches!(r.outcome, CaseOutcome::Witnessed { .. }))
        .count();
    let terminal = rows
        .iter()
        .filter(|r| matches!(r.outcome, CaseOutcome::Terminal))
        .count();
    let stuck = rows.len() - witnessed - terminal;
    Ok(CaseReport {
        dim: n,
        scale: r.clone(),
        metric,
        max_witness_size,
        rows,
        witnessed,
        terminal,
        stuck,
    })
}

fn solve_case(
    config: &WindowConfiguration,
    r: &Rational,
    max_witness_size: usize,
    metric: Metric,
) -> CaseOutcome {
    if config.is_terminal() {
        return CaseOutcome::Terminal;
    }
    // Every simplex through the anchor, and every usable witness member,
    // lives in the closed neighborhood of the anchor, so the graph is
    // restricted to it.
    let window: Vec<LatticePoint> = {
        let all = config.window_points();
        let n = config.dim();
        let cmp = crate::metric::ScaleCmp::new(metric, r, crate::exact::floor_to_i64(r).unwrap_or(i64::MAX), n);
        let zero = alloc::vec![0i64; n];
        all.into_iter()
            .filter(|p| cmp.within(p.coords(), &zero))
            .collect()
    };
    if window.len() < 2 {
        // Alive points exist (non-terminal) but none within the scale: the
        // anchor cannot be witnessed.
        return CaseOutcome::Stuck;
    }
    let graph = NeighborhoodGraph::build(window, metric, r.clone())
        .expect("window offsets are distinct");
    // The anchor is the origin, which is the lex-least window point.
    let anchor = 0;
    debug_assert!(graph.point(anchor).coords().iter().all(|&c| c == 0));
    let candidates: Vec<usize> = graph.neighbors(anchor).collect();
    match find_witness(&graph, anchor, max_witness_size, &candidates)
        .expect("candidates are neighbors of the anchor")
    {
        Some(w) => {
            let mode = if w.len() == 1 {
                StepMode::Dominated
            } else {
                StepMode::LocallyDominated
            };
            let mut witness: Vec<LatticePoint> = w
                .members()
                .iter()
                .map(|&v| graph.point(v).clone())
                .collect();
            witness.sort_by(|a, b| lex_compare_unchecked(a.coords(), b.coords()));
            CaseOutcome::Witnessed { witness, mode }
        }
        None => CaseOutcome::Stuck,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_cases(3, &rat_int(3)).unwrap().count(), 1024);
        assert_eq!(enumerate_cases(2, &rat_int(2)).unwrap().count(), 27);
        assert_eq!(enumerate_cases(1, &rat_int(1)).unwrap().count(), 2);
        assert!(matches!(
            enumerate_cases(2, &rat(5, 2)),
            Err(CasesError::NonIntegerScale)
        ));
        assert!(matches!(
            enumerate_cases(0, &rat_int(2)),
            Err(CasesError::BadDimension)
        ));
        assert!(matches!(
            enumerate_cases(2, &rat_int(0)),
            Err(CasesError::ScaleTooSmall)
        ));
    }

    #[test]
    fn configurations_are_distinct() {
        let all: Vec<WindowConfiguration> = enumerate_cases(2, &rat_int(2)).unwrap().collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn window_points_respect_lex_aliveness() {
        let config = WindowConfiguration::new(vec![-1], vec![1, 1], 2);
        let pts = config.window_points();
        // delta in [-1,1] x [0,1], lex >= 0: (0,0),(1,0),(-1,1),(0,1),(1,1)
        let coords: Vec<Vec<i64>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(
            coords,
            alloc::vec![
                alloc::vec![0, 0],
                alloc::vec![1, 0],
                alloc::vec![-1, 1],
                alloc::vec![0, 1],
                alloc::vec![1, 1],
            ]
        );
        assert!(!config.is_terminal());
        assert!(WindowConfiguration::new(vec![-2], vec![0, 0], 2).is_terminal());
    }

    #[test]
    fn one_dimensional_search() {
        let report = conjecture_search(1, &rat_int(1), 1, Metric::L1).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.terminal, 1);
        assert_eq!(report.witnessed, 1);
        assert!(report.fully_witnessed());
    }

    #[test]
    fn two_dimensional_search_needs_only_domination() {
        let report = conjecture_search(2, &rat_int(2), 2, Metric::L1).unwrap();
        assert_eq!(report.rows.len(), 27);
        assert_eq!(report.terminal, 3);
        assert_eq!(report.witnessed, 24);
        assert!(report.fully_witnessed());
        for row in &report.rows {
            if let CaseOutcome::Witnessed { witness, mode } = &row.outcome {
                assert_eq!(witness.len(), 1, "config {:?}", row.config);
                assert_eq!(*mode, StepMode::Dominated);
            }
        }
    }

    #[test]
    fn scale_below_dimension_gets_stuck_in_2d() {
        // At scale 1 the full 2-d window has no witness; the report records
        // stuck rows instead of failing.
        let report = conjecture_search(2, &rat_int(1), 2, Metric::L1).unwrap();
        assert!(report.stuck > 0);
        assert!(!report.fully_witnessed());
    }
}
