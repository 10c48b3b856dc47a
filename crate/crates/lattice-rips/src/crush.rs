//! The lexicographic reduction engine for lattice boxes.
//!
//! Points of a finite grid are removed in the reversed-index lexicographic
//! order, each removal justified by a witness simplex valid in the residual
//! set. The full removal sequence down to a single point is a
//! [`CrushCertificate`]: a machine-checkable proof that the Rips complex of
//! the grid is contractible at the given scale. [`verify_certificate`]
//! replays a certificate against an independent checker that shares none of
//! the engine's shortcuts.
//!
//! Because points are removed in lexicographic order, the residual set at
//! any step is exactly the set of grid points lexicographically at or after
//! the next removal, so residual membership is a closed-form test and the
//! alive pattern near the removal point repeats up to translation. The
//! engine memoizes witnesses per translation-invariant window pattern
//! ([`PatternKey`]), which keeps the number of searches bounded by the
//! number of clipped window shapes regardless of grid size.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::exact::{rat_int, Rational};
use crate::graph::NeighborhoodGraph;
use crate::metric::{Metric, ScaleCmp};
use crate::point::{lex_compare_unchecked, LatticePoint};
use crate::reduce::{check_local_domination, find_witness, is_dominated, Witness};

/// Hard cap on grid sizes the engine will materialize.
const MAX_GRID_POINTS: u128 = 20_000_000;
/// Hard cap on clip-window cell counts.
const MAX_WINDOW_CELLS: u128 = 20_000_000;

/// Error constructing or processing a grid.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("grid must have at least one axis")]
    NoAxes,
    #[error("axis {0} has an empty range")]
    EmptyRange(usize),
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("lattice denominator m must be positive")]
    ZeroLatticeDenominator,
    #[error("grid has {0} points, above the supported maximum")]
    GridTooLarge(u128),
    #[error("residual window has {0} cells, above the supported maximum")]
    WindowTooLarge(u128),
    #[error("point lies outside the grid")]
    PointOutsideGrid,
    #[error("point dimension does not match the grid")]
    DimensionMismatch,
}

/// A finite lattice box: the integer product set of per-axis ranges, read at
/// lattice scale `1/m` (coordinates stay integral; true coordinates are
/// `p_i / m`). The Rips scale is in true units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    ranges: Vec<(i64, i64)>,
    metric: Metric,
    scale: Rational,
    m: u64,
}

impl GridSpec {
    pub fn new(
        ranges: Vec<(i64, i64)>,
        metric: Metric,
        scale: Rational,
        m: u64,
    ) -> Result<Self, GridError> {
        if ranges.is_empty() {
            return Err(GridError::NoAxes);
        }
        for (axis, &(lo, hi)) in ranges.iter().enumerate() {
            if lo > hi {
                return Err(GridError::EmptyRange(axis));
            }
        }
        if scale <= rat_int(0) {
            return Err(GridError::NonPositiveScale);
        }
        if m == 0 {
            return Err(GridError::ZeroLatticeDenominator);
        }
        let spec = Self {
            ranges,
            metric,
            scale,
            m,
        };
        let count = spec.point_count();
        if count > MAX_GRID_POINTS {
            return Err(GridError::GridTooLarge(count));
        }
        Ok(spec)
    }

    /// Plain integer grid (`m = 1`).
    pub fn integer(
        ranges: Vec<(i64, i64)>,
        metric: Metric,
        scale: Rational,
    ) -> Result<Self, GridError> {
        Self::new(ranges, metric, scale, 1)
    }

    /// The cube `{0..max}^dim`.
    pub fn cube(dim: usize, max: i64, metric: Metric, scale: Rational) -> Result<Self, GridError> {
        Self::integer(alloc::vec![(0, max); dim], metric, scale)
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn ranges(&self) -> &[(i64, i64)] {
        &self.ranges
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The scale in integer coordinate units: `scale * m`.
    pub fn effective_scale(&self) -> Rational {
        &self.scale * rat_int(self.m as i64)
    }

    pub fn point_count(&self) -> u128 {
        self.ranges
            .iter()
            .map(|&(lo, hi)| (hi as i128 - lo as i128 + 1) as u128)
            .product()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(&self.ranges)
                .all(|(&c, &(lo, hi))| lo <= c && c <= hi)
    }

    /// Position of `p` in the lexicographic enumeration of the grid.
    pub fn lex_rank(&self, p: &LatticePoint) -> Option<u128> {
        if !self.contains(p) {
            return None;
        }
        let mut rank: u128 = 0;
        let mut stride: u128 = 1;
        for (&c, &(lo, hi)) in p.coords().iter().zip(&self.ranges) {
            rank += (c as i128 - lo as i128) as u128 * stride;
            stride *= (hi as i128 - lo as i128 + 1) as u128;
        }
        Some(rank)
    }

    /// All grid points in lexicographic order.
    pub fn points_lex(&self) -> Vec<LatticePoint> {
        let count = self.point_count() as usize;
        let mut out = Vec::with_capacity(count);
        let mut cur: Vec<i64> = self.ranges.iter().map(|&(lo, _)| lo).collect();
        loop {
            out.push(LatticePoint::new(cur.clone()));
            // Odometer with axis 0 fastest: the last coordinate is the most
            // significant, matching the reversed-index order.
            let mut axis = 0;
            loop {
                if axis == self.dim() {
                    return out;
                }
                if cur[axis] < self.ranges[axis].1 {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = self.ranges[axis].0;
                axis += 1;
            }
        }
    }

    /// Per-coordinate clip radius for residual windows, in integer units.
    fn window_clip(&self) -> i64 {
        crate::metric::window_clip(&self.scale, self.m)
    }
}

/// How a removal step was justified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    /// Singleton witness: plain domination.
    Dominated,
    /// Witness with two or more members.
    LocallyDominated,
}

impl StepMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StepMode::Dominated => "dominated",
            StepMode::LocallyDominated => "locally-dominated",
        }
    }
}

impl fmt::Display for StepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One removal: the point taken out and the witness valid in the residual
/// set at that moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrushStep {
    pub point: LatticePoint,
    pub witness: Vec<LatticePoint>,
    pub mode: StepMode,
}

/// An ordered removal sequence covering every grid point except the
/// terminal one: a machine-checkable contractibility proof for the Rips
/// complex of the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrushCertificate {
    pub grid: GridSpec,
    pub steps: Vec<CrushStep>,
    pub terminal: LatticePoint,
}

/// Where the reduction got stuck, with the alive window around the stuck
/// point for diagnosis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureReport {
    pub step_index: usize,
    pub stuck_point: LatticePoint,
    pub residual_window: Vec<LatticePoint>,
}

/// Outcome of a reduction run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrushResult {
    Complete(CrushCertificate),
    Stuck(FailureReport),
}

impl CrushResult {
    pub fn certificate(self) -> Option<CrushCertificate> {
        match self {
            CrushResult::Complete(c) => Some(c),
            CrushResult::Stuck(_) => None,
        }
    }
}

/// Witness sources for the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessSource {
    /// Staircase domination probes, then the exhaustive deterministic
    /// search.
    #[default]
    Search,
    /// Propose the unit-box witness above the anchor (the scaled-lattice
    /// construction), verify it, and fall back to `Search` when it fails.
    SnapBox,
}

/// Engine options.
#[derive(Debug, Clone)]
pub struct CrushOptions {
    /// Witness size bound; defaults to the grid dimension.
    pub max_witness_size: Option<usize>,
    /// Reuse witnesses across equal window patterns.
    pub memoize: bool,
    pub witness_source: WitnessSource,
}

impl Default for CrushOptions {
    fn default() -> Self {
        Self {
            max_witness_size: None,
            memoize: true,
            witness_source: WitnessSource::Search,
        }
    }
}

/// Counters from one reduction run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrushStats {
    pub steps: usize,
    pub distinct_patterns: usize,
    pub witness_searches: usize,
    pub probe_hits: usize,
    pub pattern_reuses: usize,
    pub snap_hits: usize,
}

/// Translation-invariant encoding of the alive subset of the clip window
/// around a point: a bitmask over the window cells in a fixed scan order.
/// Equal keys mean equal alive patterns up to translation, so a witness
/// found at one key is valid, as offsets, wherever the key recurs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternKey(Vec<u64>);

/// The window pattern of `anchor` in its residual grid (all points
/// lexicographically at or after `anchor`).
pub fn classify_local_pattern(
    spec: &GridSpec,
    anchor: &LatticePoint,
) -> Result<PatternKey, GridError> {
    if anchor.dim() != spec.dim() {
        return Err(GridError::DimensionMismatch);
    }
    if !spec.contains(anchor) {
        return Err(GridError::PointOutsideGrid);
    }
    let scanner = WindowScanner::new(spec)?;
    Ok(scanner.scan(anchor).key)
}

/// Shared per-run window machinery: clip box geometry and the exact scale
/// comparator.
struct WindowScanner<'a> {
    spec: &'a GridSpec,
    clip: i64,
    cells: usize,
    cmp: ScaleCmp,
    zero: Vec<i64>,
}

struct WindowScan {
    key: PatternKey,
    /// Alive window points within the scale of the anchor (the closed
    /// neighborhood), in lexicographic order; the anchor is first.
    window: Vec<LatticePoint>,
}

impl<'a> WindowScanner<'a> {
    fn new(spec: &'a GridSpec) -> Result<Self, GridError> {
        let clip = spec.window_clip();
        let n = spec.dim();
        let width = 2 * clip as u128 + 1;
        let mut cells: u128 = clip as u128 + 1; // last axis: 0..=clip
        for _ in 0..n - 1 {
            cells = cells.saturating_mul(width);
        }
        if cells > MAX_WINDOW_CELLS {
            return Err(GridError::WindowTooLarge(cells));
        }
        let coord_bound = spec
            .ranges
            .iter()
            .flat_map(|&(lo, hi)| [lo.abs(), hi.abs()])
            .max()
            .unwrap_or(0)
            .saturating_add(clip.unsigned_abs() as i64);
        let cmp = ScaleCmp::new(spec.metric, &spec.effective_scale(), coord_bound, n);
        Ok(Self {
            spec,
            clip,
            cells: cells as usize,
            cmp,
            zero: alloc::vec![0; n],
        })
    }

    /// One pass over the clip box: the alive bitmask (the pattern key) and
    /// the alive points within scale of the anchor.
    fn scan(&self, anchor: &LatticePoint) -> WindowScan {
        let n = self.spec.dim();
        let mut bits = alloc::vec![0u64; self.cells.div_ceil(64)];
        let mut window = Vec::new();
        let mut delta: Vec<i64> = alloc::vec![-self.clip; n];
        delta[n - 1] = 0; // the last axis never goes below the anchor
        let mut cell = 0usize;
        loop {
            if self.delta_alive(anchor, &delta) {
                bits[cell / 64] |= 1 << (cell % 64);
                if self.cmp.within(&delta, &self.zero) {
                    window.push(anchor.translate(&delta));
                }
            }
            cell += 1;
            // Odometer, axis 0 fastest: scan order is lexicographic.
            let mut axis = 0;
            loop {
                if axis == n {
                    return WindowScan {
                        key: PatternKey(bits),
                        window,
                    };
                }
                if delta[axis] < self.clip {
                    delta[axis] += 1;
                    break;
                }
                delta[axis] = if axis == n - 1 { 0 } else { -self.clip };
                axis += 1;
            }
        }
    }

    /// Alive means: inside the grid and not yet removed, i.e. the offset is
    /// lexicographically non-negative.
    fn delta_alive(&self, anchor: &LatticePoint, delta: &[i64]) -> bool {
        if lex_compare_unchecked(delta, &self.zero) == Ordering::Less {
            return false;
        }
        anchor
            .coords()
            .iter()
            .zip(delta)
            .zip(&self.spec.ranges)
            .all(|((&c, &d), &(lo, hi))| {
                let q = c + d;
                lo <= q && q <= hi
            })
    }

    /// All alive points of the clip box (not restricted to the scale), for
    /// failure reports.
    fn alive_box(&self, anchor: &LatticePoint) -> Vec<LatticePoint> {
        let n = self.spec.dim();
        let mut out = Vec::new();
        let mut delta: Vec<i64> = alloc::vec![-self.clip; n];
        delta[n - 1] = 0;
        loop {
            if self.delta_alive(anchor, &delta) {
                out.push(anchor.translate(&delta));
            }
            let mut axis = 0;
            loop {
                if axis == n {
                    return out;
                }
                if delta[axis] < self.clip {
                    delta[axis] += 1;
                    break;
                }
                delta[axis] = if axis == n - 1 { 0 } else { -self.clip };
                axis += 1;
            }
        }
    }
}

/// Diagonal-then-axis singleton probes: offsets `(0,..,0,1,..,1)` with `k`
/// trailing ones for `k = n, n-1, .., 1`. During lexicographic reduction of
/// a box these are the dominators that almost always work (the diagonal
/// step in full windows, the straight-up step at row ends), and a probe
/// costs only a neighborhood containment test, so they short-circuit the
/// subset search in the common case.
fn staircase_probes(n: usize) -> impl Iterator<Item = Vec<i64>> {
    (1..=n).rev().map(move |k| {
        let mut delta = alloc::vec![0i64; n];
        for d in delta.iter_mut().skip(n - k) {
            *d = 1;
        }
        delta
    })
}

struct StepWitness {
    members: Vec<LatticePoint>,
    mode: StepMode,
    via: WitnessVia,
}

enum WitnessVia {
    Probe,
    Search,
    Snap,
}

/// Searches a witness for the anchor (window vertex 0) within the window
/// graph. Deterministic: probes in staircase order, then the exhaustive
/// size-then-lexicographic subset search.
fn window_witness(
    spec: &GridSpec,
    graph: &NeighborhoodGraph,
    window: &[LatticePoint],
    anchor: &LatticePoint,
    max_size: usize,
    source: WitnessSource,
) -> Option<StepWitness> {
    debug_assert_eq!(window[0], *anchor);
    let locate = |q: &LatticePoint| {
        window
            .binary_search_by(|p| lex_compare_unchecked(p.coords(), q.coords()))
            .ok()
    };

    if source == WitnessSource::SnapBox {
        if let Some(w) = snap_box_witness(spec, graph, window, anchor) {
            return Some(w);
        }
    }

    for delta in staircase_probes(spec.dim()) {
        let q = anchor.translate(&delta);
        if let Some(idx) = locate(&q) {
            if is_dominated(graph, 0, idx).expect("window vertices are valid") {
                return Some(StepWitness {
                    members: alloc::vec![q],
                    mode: StepMode::Dominated,
                    via: WitnessVia::Probe,
                });
            }
        }
    }

    let candidates: Vec<usize> = (1..window.len()).collect();
    let witness = find_witness(graph, 0, max_size, &candidates)
        .expect("window candidates are neighbors of the anchor")?;
    let mode = if witness.len() == 1 {
        StepMode::Dominated
    } else {
        StepMode::LocallyDominated
    };
    let mut members: Vec<LatticePoint> = witness
        .members()
        .iter()
        .map(|&v| graph.point(v).clone())
        .collect();
    members.sort_by(|a, b| lex_compare_unchecked(a.coords(), b.coords()));
    Some(StepWitness {
        members,
        mode,
        via: WitnessVia::Search,
    })
}

/// The unit-box witness above the anchor: all alive window points within one
/// true lattice unit per leading coordinate and strictly above in the last
/// coordinate (by at most one unit). When the scale is at least the box
/// diameter this set is the witness the near-center construction guarantees.
fn snap_box_witness(
    spec: &GridSpec,
    graph: &NeighborhoodGraph,
    window: &[LatticePoint],
    anchor: &LatticePoint,
) -> Option<StepWitness> {
    let n = spec.dim();
    let m = spec.m() as i64;
    let mut members = Vec::new();
    for (idx, q) in window.iter().enumerate().skip(1) {
        let d = q.offset_from(anchor);
        let leading_ok = d[..n - 1].iter().all(|&dj| dj.abs() <= m);
        let last_ok = d[n - 1] >= 1 && d[n - 1] <= m;
        if leading_ok && last_ok {
            members.push(idx);
        }
    }
    if members.is_empty() {
        return None;
    }
    let witness = Witness::new(graph, 0, members).ok()?;
    if !check_local_domination(graph, &witness).ok()? {
        return None;
    }
    let mode = if witness.len() == 1 {
        StepMode::Dominated
    } else {
        StepMode::LocallyDominated
    };
    let mut pts: Vec<LatticePoint> = witness
        .members()
        .iter()
        .map(|&v| graph.point(v).clone())
        .collect();
    pts.sort_by(|a, b| lex_compare_unchecked(a.coords(), b.coords()));
    Some(StepWitness {
        members: pts,
        mode,
        via: WitnessVia::Snap,
    })
}

/// Runs the lexicographic reduction of the grid.
///
/// On success every recorded step passes [`check_local_domination`] in the
/// residual graph at its moment of removal; on failure the report carries
/// the first stuck point and its residual window. Output is deterministic:
/// memoized and non-memoized runs produce identical certificates.
pub fn crush(spec: &GridSpec, opts: &CrushOptions) -> Result<CrushResult, GridError> {
    crush_with_stats(spec, opts).map(|(r, _)| r)
}

/// [`crush`] with engine counters.
pub fn crush_with_stats(
    spec: &GridSpec,
    opts: &CrushOptions,
) -> Result<(CrushResult, CrushStats), GridError> {
    let points = spec.points_lex();
    let scanner = WindowScanner::new(spec)?;
    let max_size = opts.max_witness_size.unwrap_or(spec.dim());
    let effective = spec.effective_scale();

    let mut memo: alloc::collections::BTreeMap<PatternKey, (Vec<Vec<i64>>, StepMode)> =
        alloc::collections::BTreeMap::new();
    let mut seen_keys: alloc::collections::BTreeSet<PatternKey> = alloc::collections::BTreeSet::new();
    let mut stats = CrushStats::default();
    let mut steps = Vec::with_capacity(points.len().saturating_sub(1));

    for i in 0..points.len() - 1 {
        let anchor = &points[i];
        let scan = scanner.scan(anchor);
        seen_keys.insert(scan.key.clone());

        let (members, mode) = if opts.memoize {
            if let Some((offsets, mode)) = memo.get(&scan.key) {
                stats.pattern_reuses += 1;
                let members = offsets.iter().map(|off| anchor.translate(off)).collect();
                (members, *mode)
            } else {
                match fresh_witness(
                    spec, &scan, anchor, max_size, opts.witness_source, &effective, &mut stats,
                ) {
                    Some(w) => {
                        let offsets: Vec<Vec<i64>> =
                            w.members.iter().map(|p| p.offset_from(anchor)).collect();
                        memo.insert(scan.key.clone(), (offsets, w.mode));
                        (w.members, w.mode)
                    }
                    None => {
                        return Ok((
                            CrushResult::Stuck(FailureReport {
                                step_index: i,
                                stuck_point: anchor.clone(),
                                residual_window: scanner.alive_box(anchor),
                            }),
                            stats,
                        ));
                    }
                }
            }
        } else {
            match fresh_witness(
                spec, &scan, anchor, max_size, opts.witness_source, &effective, &mut stats,
            ) {
                Some(w) => (w.members, w.mode),
                None => {
                    return Ok((
                        CrushResult::Stuck(FailureReport {
                            step_index: i,
                            stuck_point: anchor.clone(),
                            residual_window: scanner.alive_box(anchor),
                        }),
                        stats,
                    ));
                }
            }
        };

        steps.push(CrushStep {
            point: anchor.clone(),
            witness: members,
            mode,
        });
        stats.steps += 1;
    }

    stats.distinct_patterns = seen_keys.len();
    let terminal = points.last().expect("grid non-empty").clone();
    Ok((
        CrushResult::Complete(CrushCertificate {
            grid: spec.clone(),
            steps,
            terminal,
        }),
        stats,
    ))
}

fn fresh_witness(
    spec: &GridSpec,
    scan: &WindowScan,
    anchor: &LatticePoint,
    max_size: usize,
    source: WitnessSource,
    effective: &Rational,
    stats: &mut CrushStats,
) -> Option<StepWitness> {
    if scan.window.len() < 2 {
        return None;
    }
    let graph = NeighborhoodGraph::build(scan.window.clone(), spec.metric(), effective.clone())
        .expect("window points are distinct and uniform");
    let w = window_witness(spec, &graph, &scan.window, anchor, max_size, source)?;
    match w.via {
        WitnessVia::Probe => stats.probe_hits += 1,
        WitnessVia::Search => stats.witness_searches += 1,
        WitnessVia::Snap => stats.snap_hits += 1,
    }
    Some(w)
}

/// Structural (schema-level) certificate defects, distinct from mathematical
/// failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("step {0}: removed point has wrong dimension")]
    StepDimension(usize),
    #[error("step {0}: witness point has wrong dimension")]
    WitnessDimension(usize),
    #[error("terminal point has wrong dimension")]
    TerminalDimension,
}

/// Result of replaying a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub valid: bool,
    pub failing_step: Option<usize>,
    pub reason: Option<String>,
    pub steps_checked: usize,
}

impl VerificationReport {
    fn fail(step: Option<usize>, reason: String, checked: usize) -> Self {
        Self {
            valid: false,
            failing_step: step,
            reason: Some(reason),
            steps_checked: checked,
        }
    }
}

/// Replays a certificate with an independent checker.
///
/// The grid is re-derived from its spec, removals are replayed in order, and
/// every witness is re-checked by brute force: the neighborhood of the
/// removed point is found by scanning the whole residual set (no window
/// clipping), maximal cliques are re-enumerated with no memoization, and
/// the lexicographic order and single-terminal invariants are confirmed.
/// Structural defects surface as [`CertificateError`]; mathematical ones are
/// reported with their first failing step.
pub fn verify_certificate(cert: &CrushCertificate) -> Result<VerificationReport, CertificateError> {
    let spec = &cert.grid;
    // Re-validate the grid invariants from scratch.
    let spec = GridSpec::new(
        spec.ranges.clone(),
        spec.metric,
        spec.scale.clone(),
        spec.m,
    )?;
    for (i, step) in cert.steps.iter().enumerate() {
        if step.point.dim() != spec.dim() {
            return Err(CertificateError::StepDimension(i));
        }
        if step.witness.iter().any(|w| w.dim() != spec.dim()) {
            return Err(CertificateError::WitnessDimension(i));
        }
    }
    if cert.terminal.dim() != spec.dim() {
        return Err(CertificateError::TerminalDimension);
    }

    let points = spec.points_lex();
    let total = points.len();
    if cert.steps.len() != total - 1 {
        return Ok(VerificationReport::fail(
            None,
            alloc::format!(
                "expected {} steps for {} grid points, found {}",
                total - 1,
                total,
                cert.steps.len()
            ),
            0,
        ));
    }

    let effective = spec.effective_scale();
    let coord_bound = spec
        .ranges
        .iter()
        .flat_map(|&(lo, hi)| [lo.abs(), hi.abs()])
        .max()
        .unwrap_or(0);
    let cmp = ScaleCmp::new(spec.metric, &effective, coord_bound, spec.dim());

    for (i, step) in cert.steps.iter().enumerate() {
        // Lexicographic order: step i must remove the i-th grid point, which
        // is then the lex-least alive point.
        if step.point != points[i] {
            return Ok(VerificationReport::fail(
                Some(i),
                alloc::format!(
                    "removed point {:?} is not the lex-least alive point {:?}",
                    step.point,
                    points[i]
                ),
                i,
            ));
        }
        if step.witness.is_empty() {
            return Ok(VerificationReport::fail(
                Some(i),
                "empty witness".into(),
                i,
            ));
        }
        // Witness members must be alive (strictly after the anchor).
        for w in &step.witness {
            match spec.lex_rank(w) {
                Some(rank) if rank > i as u128 => {}
                Some(_) => {
                    return Ok(VerificationReport::fail(
                        Some(i),
                        alloc::format!("witness point {w:?} is not alive at this step"),
                        i,
                    ));
                }
                None => {
                    return Ok(VerificationReport::fail(
                        Some(i),
                        alloc::format!("witness point {w:?} lies outside the grid"),
                        i,
                    ));
                }
            }
        }
        // Mode consistency.
        let expected_mode = if step.witness.len() == 1 {
            StepMode::Dominated
        } else {
            StepMode::LocallyDominated
        };
        if step.mode != expected_mode {
            return Ok(VerificationReport::fail(
                Some(i),
                alloc::format!(
                    "mode {} inconsistent with witness size {}",
                    step.mode,
                    step.witness.len()
                ),
                i,
            ));
        }

        // Neighborhood of the anchor by full residual scan.
        let anchor = &points[i];
        let mut verts: Vec<LatticePoint> = alloc::vec![anchor.clone()];
        for q in &points[i + 1..] {
            if cmp.within(anchor.coords(), q.coords()) {
                verts.push(q.clone());
            }
        }
        // Witness members beyond the neighborhood never extend anything but
        // must be present for the clique check.
        for w in &step.witness {
            if !verts.contains(w) {
                verts.push(w.clone());
            }
        }
        let graph = NeighborhoodGraph::build(verts, spec.metric, effective.clone())
            .expect("residual points are distinct");
        let member_idx: Vec<usize> = step
            .witness
            .iter()
            .map(|w| {
                graph
                    .points()
                    .iter()
                    .position(|p| p == w)
                    .expect("witness member inserted above")
            })
            .collect();
        let witness = match Witness::new(&graph, 0, member_idx) {
            Ok(w) => w,
            Err(e) => {
                return Ok(VerificationReport::fail(
                    Some(i),
                    alloc::format!("invalid witness: {e}"),
                    i,
                ));
            }
        };
        match check_local_domination(&graph, &witness) {
            Ok(true) => {}
            Ok(false) => {
                return Ok(VerificationReport::fail(
                    Some(i),
                    "witness does not locally dominate the removed point".into(),
                    i,
                ));
            }
            Err(e) => {
                return Ok(VerificationReport::fail(
                    Some(i),
                    alloc::format!("invalid witness: {e}"),
                    i,
                ));
            }
        }
    }

    if cert.terminal != points[total - 1] {
        return Ok(VerificationReport::fail(
            None,
            alloc::format!(
                "terminal point {:?} is not the lex-greatest grid point {:?}",
                cert.terminal,
                points[total - 1]
            ),
            cert.steps.len(),
        ));
    }

    Ok(VerificationReport {
        valid: true,
        failing_step: None,
        reason: None,
        steps_checked: cert.steps.len(),
    })
}

/// Lexicographic reduction of an arbitrary finite point cloud, for
/// experimentation. No closed-form residual or memoization: the alive set
/// is explicit and windows are found by scanning it.
#[derive(Debug, Clone)]
pub struct CloudReduction {
    pub steps: Vec<CrushStep>,
    pub terminal: LatticePoint,
}

/// Outcome of a cloud reduction.
#[derive(Debug, Clone)]
pub enum CloudResult {
    Complete(CloudReduction),
    Stuck {
        step_index: usize,
        stuck_point: LatticePoint,
    },
}

/// Removes cloud points in lexicographic order with searched witnesses.
pub fn crush_cloud(
    cloud: &[LatticePoint],
    metric: Metric,
    scale: &Rational,
    max_witness_size: usize,
) -> Result<CloudResult, crate::graph::GraphError> {
    let mut alive: Vec<LatticePoint> = cloud.to_vec();
    alive.sort_by(|a, b| lex_compare_unchecked(a.coords(), b.coords()));
    for w in alive.windows(2) {
        if w[0] == w[1] {
            return Err(crate::graph::GraphError::DuplicatePoint(0, 1));
        }
    }
    if alive.is_empty() {
        return Err(crate::graph::GraphError::EmptyCloud);
    }
    let coord_bound = alive
        .iter()
        .flat_map(|p| p.coords().iter().copied())
        .map(i64::abs)
        .max()
        .unwrap_or(0);
    let dim = alive[0].dim();
    let cmp = ScaleCmp::new(metric, scale, coord_bound, dim);
    let mut steps = Vec::new();
    for i in 0..alive.len() - 1 {
        let (anchor, rest) = alive[i..].split_first().expect("non-empty");
        let mut window = alloc::vec![anchor.clone()];
        window.extend(
            rest.iter()
                .filter(|q| cmp.within(anchor.coords(), q.coords()))
                .cloned(),
        );
        if window.len() < 2 {
            return Ok(CloudResult::Stuck {
                step_index: i,
                stuck_point: anchor.clone(),
            });
        }
        let graph = NeighborhoodGraph::build(window.clone(), metric, scale.clone())?;
        let candidates: Vec<usize> = (1..window.len()).collect();
        let Some(witness) = find_witness(&graph, 0, max_witness_size, &candidates)
            .expect("candidates are neighbors")
        else {
            return Ok(CloudResult::Stuck {
                step_index: i,
                stuck_point: anchor.clone(),
            });
        };
        let mode = if witness.len() == 1 {
            StepMode::Dominated
        } else {
            StepMode::LocallyDominated
        };
        let mut members: Vec<LatticePoint> = witness
            .members()
            .iter()
            .map(|&v| graph.point(v).clone())
            .collect();
        members.sort_by(|a, b| lex_compare_unchecked(a.coords(), b.coords()));
        steps.push(CrushStep {
            point: anchor.clone(),
            witness: members,
            mode,
        });
    }
    Ok(CloudResult::Complete(CloudReduction {
        steps,
        terminal: alive.last().expect("non-empty").clone(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use alloc::vec;

    fn cube_spec(dim: usize, max: i64, scale: i64) -> GridSpec {
        GridSpec::cube(dim, max, Metric::L1, rat_int(scale)).unwrap()
    }

    #[test]
    fn grid_spec_validation() {
        assert!(matches!(
            GridSpec::integer(vec![], Metric::L1, rat_int(1)),
            Err(GridError::NoAxes)
        ));
        assert!(matches!(
            GridSpec::integer(vec![(3, 2)], Metric::L1, rat_int(1)),
            Err(GridError::EmptyRange(0))
        ));
        assert!(matches!(
            GridSpec::integer(vec![(0, 1)], Metric::L1, rat_int(0)),
            Err(GridError::NonPositiveScale)
        ));
        assert!(matches!(
            GridSpec::new(vec![(0, 1)], Metric::L1, rat_int(1), 0),
            Err(GridError::ZeroLatticeDenominator)
        ));
    }

    #[test]
    fn lex_enumeration_and_rank_agree() {
        let spec = GridSpec::integer(vec![(0, 2), (-1, 1)], Metric::L1, rat_int(2)).unwrap();
        let pts = spec.points_lex();
        assert_eq!(pts.len(), 9);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(spec.lex_rank(p), Some(i as u128));
        }
        for w in pts.windows(2) {
            assert_eq!(
                lex_compare_unchecked(w[0].coords(), w[1].coords()),
                Ordering::Less
            );
        }
        assert_eq!(pts[0].coords(), &[0, -1]);
        assert_eq!(pts[8].coords(), &[2, 1]);
    }

    #[test]
    fn line_crush_uses_right_neighbors() {
        let spec = cube_spec(1, 4, 1);
        let (result, stats) = crush_with_stats(&spec, &CrushOptions::default()).unwrap();
        let cert = result.certificate().unwrap();
        assert_eq!(cert.steps.len(), 4);
        for (i, step) in cert.steps.iter().enumerate() {
            assert_eq!(step.point.coords(), &[i as i64]);
            assert_eq!(step.witness.len(), 1);
            assert_eq!(step.witness[0].coords(), &[i as i64 + 1]);
            assert_eq!(step.mode, StepMode::Dominated);
        }
        assert_eq!(cert.terminal.coords(), &[4]);
        assert!(stats.probe_hits > 0 || stats.witness_searches > 0);
        assert!(verify_certificate(&cert).unwrap().valid);
    }

    #[test]
    fn square_grid_crush_follows_domination_rules() {
        let spec = cube_spec(2, 3, 2);
        let cert = crush(&spec, &CrushOptions::default())
            .unwrap()
            .certificate()
            .unwrap();
        assert_eq!(cert.steps.len(), 15);
        for step in &cert.steps {
            assert_eq!(step.witness.len(), 1, "only domination is needed in 2d");
            let (x, y) = (step.point.coord(0), step.point.coord(1));
            let w = &step.witness[0];
            if y < 3 {
                if x < 3 {
                    assert_eq!(w.coords(), &[x + 1, y + 1]);
                } else {
                    assert_eq!(w.coords(), &[x, y + 1]);
                }
            } else {
                // top row reduces like the 1-dimensional grid
                assert_eq!(w.coords(), &[x + 1, y]);
            }
        }
        assert!(verify_certificate(&cert).unwrap().valid);
    }

    #[test]
    fn small_cube_crush_succeeds_with_bounded_witnesses() {
        let spec = cube_spec(3, 2, 3);
        let cert = crush(&spec, &CrushOptions::default())
            .unwrap()
            .certificate()
            .unwrap();
        assert_eq!(cert.steps.len(), 26);
        assert!(cert.steps.iter().all(|s| s.witness.len() <= 3));
        assert!(verify_certificate(&cert).unwrap().valid);
    }

    #[test]
    fn memoized_and_plain_runs_agree() {
        let spec = cube_spec(3, 3, 3);
        let memoized = crush(&spec, &CrushOptions::default()).unwrap();
        let plain = crush(
            &spec,
            &CrushOptions {
                memoize: false,
                ..CrushOptions::default()
            },
        )
        .unwrap();
        assert_eq!(memoized, plain);
    }

    #[test]
    fn pattern_keys_are_translation_invariant() {
        let spec = cube_spec(3, 9, 3);
        // Two interior points at the same boundary offsets share a key.
        let a = LatticePoint::new(vec![4, 4, 4]);
        let b = LatticePoint::new(vec![5, 5, 5]);
        assert_eq!(
            classify_local_pattern(&spec, &a).unwrap(),
            classify_local_pattern(&spec, &b).unwrap()
        );
        // Interior and boundary differ.
        let c = LatticePoint::new(vec![0, 4, 4]);
        assert_ne!(
            classify_local_pattern(&spec, &a).unwrap(),
            classify_local_pattern(&spec, &c).unwrap()
        );
        assert!(matches!(
            classify_local_pattern(&spec, &LatticePoint::new(vec![99, 0, 0])),
            Err(GridError::PointOutsideGrid)
        ));
    }

    #[test]
    fn stuck_run_reports_first_failure() {
        // Scale below 1: no point has neighbors, so the very first removal
        // fails.
        let spec = GridSpec::integer(vec![(0, 3)], Metric::L1, rat(1, 2)).unwrap();
        match crush(&spec, &CrushOptions::default()).unwrap() {
            CrushResult::Stuck(report) => {
                assert_eq!(report.step_index, 0);
                assert_eq!(report.stuck_point.coords(), &[0]);
                assert_eq!(report.residual_window.len(), 1);
            }
            CrushResult::Complete(_) => panic!("expected a stuck run"),
        }
    }

    #[test]
    fn tampered_certificates_fail_verification() {
        let spec = cube_spec(2, 2, 2);
        let cert = crush(&spec, &CrushOptions::default())
            .unwrap()
            .certificate()
            .unwrap();

        // Far-away witness.
        let mut bad = cert.clone();
        bad.steps[0].witness = vec![LatticePoint::new(vec![2, 2])];
        let report = verify_certificate(&bad).unwrap();
        assert!(!report.valid);
        assert_eq!(report.failing_step, Some(0));

        // Steps swapped out of lexicographic order.
        let mut bad = cert.clone();
        bad.steps.swap(0, 1);
        let report = verify_certificate(&bad).unwrap();
        assert!(!report.valid);
        assert_eq!(report.failing_step, Some(0));
        assert!(report.reason.as_deref().unwrap().contains("lex-least"));

        // Terminal tampering.
        let mut bad = cert.clone();
        bad.terminal = LatticePoint::new(vec![0, 0]);
        let report = verify_certificate(&bad).unwrap();
        assert!(!report.valid);

        // Structural defect: wrong witness dimension.
        let mut bad = cert;
        bad.steps[1].witness = vec![LatticePoint::new(vec![1, 1, 1])];
        assert!(matches!(
            verify_certificate(&bad),
            Err(CertificateError::WitnessDimension(1))
        ));
    }

    #[test]
    fn cloud_reduction_matches_grid_reduction() {
        let spec = cube_spec(2, 2, 2);
        let cert = crush(&spec, &CrushOptions::default())
            .unwrap()
            .certificate()
            .unwrap();
        let cloud = spec.points_lex();
        match crush_cloud(&cloud, Metric::L1, &rat_int(2), 2).unwrap() {
            CloudResult::Complete(red) => {
                assert_eq!(red.terminal, cert.terminal);
                assert_eq!(red.steps.len(), cert.steps.len());
                for (a, b) in red.steps.iter().zip(&cert.steps) {
                    assert_eq!(a.point, b.point);
                    // Witness selection may differ (the grid engine probes
                    // first) but both must be valid; spot-check points.
                    assert!(!a.witness.is_empty());
                    assert!(!b.witness.is_empty());
                }
            }
            CloudResult::Stuck { .. } => panic!("cloud reduction should succeed"),
        }
    }

    #[test]
    fn scaled_lattice_crush_with_snap_source() {
        // (1/4)Z^2 over the true box [0,1]^2 at true scale 3.
        let spec = GridSpec::new(vec![(0, 4), (0, 4)], Metric::L1, rat_int(3), 4).unwrap();
        let opts = CrushOptions {
            witness_source: WitnessSource::SnapBox,
            ..CrushOptions::default()
        };
        let (result, stats) = crush_with_stats(&spec, &opts).unwrap();
        let cert = result.certificate().unwrap();
        assert!(stats.snap_hits > 0, "snap proposer should fire");
        assert!(verify_certificate(&cert).unwrap().valid);
    }

    #[test]
    fn dinf_cube_crush() {
        let spec = GridSpec::cube(3, 3, Metric::LInf, rat_int(3)).unwrap();
        let cert = crush(&spec, &CrushOptions::default())
            .unwrap()
            .certificate()
            .unwrap();
        assert!(verify_certificate(&cert).unwrap().valid);
    }
}
