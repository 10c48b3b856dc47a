//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measurements (visible with `--nocapture`). Every tolerance is pinned
//! here; all comparisons on certificates, witnesses, radii, centers and
//! Betti numbers are exact.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use lattice_rips::ball::{enclosing_ball, jung_ratio, BallError};
use lattice_rips::bbox::bounding_box;
use lattice_rips::cases::{conjecture_search, CaseOutcome};
use lattice_rips::crush::{
    crush, crush_with_stats, verify_certificate, CrushCertificate, CrushOptions, CrushResult,
    GridSpec, StepMode,
};
use lattice_rips::exact::{rat, rat_int, Rational};
use lattice_rips::graph::NeighborhoodGraph;
use lattice_rips::homology::betti_numbers;
use lattice_rips::lec::{lec_center_construct, lec_verify, sample_admissible_set};
use lattice_rips::metric::{distance_rational, DistanceValue, Metric};
use lattice_rips::point::{LatticePoint, RationalPoint};
use lattice_rips::reduce::find_witness;
use lattice_rips::rng::SplitMix64;
use lattice_rips::snap::snap_to_sublattice;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_lattice-rips")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("lattice-rips-acceptance-{}-{name}", std::process::id()));
    p
}

fn complete(spec: &GridSpec) -> CrushCertificate {
    match crush(spec, &CrushOptions::default()).expect("engine runs") {
        CrushResult::Complete(cert) => cert,
        CrushResult::Stuck(r) => panic!("stuck at {:?}", r.stuck_point),
    }
}

fn assert_budget(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, budget {budget:?}"
    );
}

/// Dimension-1 reproduction: every grid {0..M} at scale 1 crushes with M
/// domination steps, each witnessed by the right neighbor, and verifies.
#[test]
fn criterion_01_dimension_one_reproduction() {
    let started = Instant::now();
    for m in 1..=50i64 {
        let spec = GridSpec::cube(1, m, Metric::L1, rat_int(1)).unwrap();
        let cert = complete(&spec);
        assert_eq!(cert.steps.len(), m as usize, "M = {m}");
        for (i, step) in cert.steps.iter().enumerate() {
            assert_eq!(step.point.coords(), &[i as i64]);
            assert_eq!(step.mode, StepMode::Dominated);
            assert_eq!(step.witness.len(), 1);
            assert_eq!(step.witness[0].coords(), &[i as i64 + 1]);
        }
        let report = verify_certificate(&cert).unwrap();
        assert!(report.valid, "M = {m}: {:?}", report.reason);
    }
    // The CLI path end to end for the largest grid.
    let cert_path = temp_path("c1.json");
    let status = Command::new(binary())
        .args(["crush", "--dim", "1", "--range", "0..50", "--scale", "1"])
        .arg("--output")
        .arg(&cert_path)
        .status()
        .unwrap();
    assert!(status.success());
    let status = Command::new(binary())
        .arg("verify")
        .arg(&cert_path)
        .status()
        .unwrap();
    assert!(status.success());
    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(1), "criterion 1");
    println!("criterion 01 (dimension-1 reproduction, M = 1..50): PASS in {elapsed:?}");
}

/// Dimension-2 reproduction: scale-2 squares crush with singleton
/// witnesses following the standard rules: diagonal step when not at the
/// row end, straight up at the row end, and the 1-dimensional right-step
/// rule on the final row.
#[test]
fn criterion_02_dimension_two_reproduction() {
    let started = Instant::now();
    for m in 1..=20i64 {
        let spec = GridSpec::cube(2, m, Metric::L1, rat_int(2)).unwrap();
        let cert = complete(&spec);
        assert_eq!(cert.steps.len(), ((m + 1) * (m + 1) - 1) as usize);
        for step in &cert.steps {
            assert_eq!(step.witness.len(), 1, "only domination is needed");
            assert_eq!(step.mode, StepMode::Dominated);
            let (x, y) = (step.point.coord(0), step.point.coord(1));
            let w = &step.witness[0];
            if y < m {
                if x < m {
                    assert_eq!(w.coords(), &[x + 1, y + 1], "interior step at ({x},{y})");
                } else {
                    assert_eq!(w.coords(), &[x, y + 1], "row-end step at ({x},{y})");
                }
            } else {
                assert_eq!(w.coords(), &[x + 1, y], "final-row step at ({x},{y})");
            }
        }
        let report = verify_certificate(&cert).unwrap();
        assert!(report.valid, "M = {m}: {:?}", report.reason);
    }
    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(10), "criterion 2");
    println!("criterion 02 (dimension-2 reproduction, M = 1..20): PASS in {elapsed:?}");
}

/// Dimension-3 reproduction: scale-3 cubes crush with witnesses of size at
/// most 3 and verify; the full window admits no singleton witness.
#[test]
fn criterion_03_dimension_three_reproduction() {
    let started = Instant::now();
    let mut max_witness = 0usize;
    for m in 1..=10i64 {
        let spec = GridSpec::cube(3, m, Metric::L1, rat_int(3)).unwrap();
        let (result, _stats) = crush_with_stats(&spec, &CrushOptions::default()).unwrap();
        let cert = match result {
            CrushResult::Complete(c) => c,
            CrushResult::Stuck(r) => panic!("M = {m}: stuck at {:?}", r.stuck_point),
        };
        for step in &cert.steps {
            assert!(step.witness.len() <= 3, "witness of size {}", step.witness.len());
            max_witness = max_witness.max(step.witness.len());
        }
        let report = verify_certificate(&cert).unwrap();
        assert!(report.valid, "M = {m}: {:?}", report.reason);
    }
    assert!(max_witness >= 2, "local domination is genuinely needed in 3d");

    // Negative control: when the grid extends at least 3 in every upward
    // direction, the anchor admits no singleton witness, whatever the
    // downward clipping.
    for below in [[0, 0], [-3, -3], [0, -2]] {
        let window: Vec<LatticePoint> = lattice_rips::cases::enumerate_cases(3, &rat_int(3))
            .unwrap()
            .find(|c| c.below() == below && c.above() == [3, 3, 3])
            .unwrap()
            .window_points();
        let g = NeighborhoodGraph::build(window, Metric::L1, rat_int(3)).unwrap();
        let candidates: Vec<usize> = g.neighbors(0).collect();
        assert!(
            find_witness(&g, 0, 1, &candidates).unwrap().is_none(),
            "below {below:?}: unexpected singleton witness"
        );
    }
    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(300), "criterion 3");
    println!(
        "criterion 03 (dimension-3 reproduction, M = 1..10, max witness {max_witness}): PASS in {elapsed:?}"
    );
}

/// Case-analysis reproduction: all 1024 clipped windows in dimension 3 at
/// scale 3 are witnessed with at most 3 members; all 27 in dimension 2 at
/// scale 2 with singletons.
#[test]
fn criterion_04_case_analysis_reproduction() {
    let started = Instant::now();
    let report3 = conjecture_search(3, &rat_int(3), 3, Metric::L1).unwrap();
    assert_eq!(report3.rows.len(), 1024);
    assert_eq!(report3.stuck, 0);
    assert_eq!(report3.terminal, 16);
    assert_eq!(report3.witnessed, 1008);
    for row in &report3.rows {
        if let CaseOutcome::Witnessed { witness, .. } = &row.outcome {
            assert!(witness.len() <= 3, "config {:?}", row.config);
        }
    }

    let report2 = conjecture_search(2, &rat_int(2), 2, Metric::L1).unwrap();
    assert_eq!(report2.rows.len(), 27);
    assert_eq!(report2.stuck, 0);
    for row in &report2.rows {
        if let CaseOutcome::Witnessed { witness, .. } = &row.outcome {
            assert_eq!(witness.len(), 1, "config {:?}", row.config);
        }
    }

    // CLI surface: the table command exits 0 and reports every row.
    let out = Command::new(binary())
        .args(["cases", "--dim", "3", "--scale", "3", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["total"], 1024);
    assert_eq!(json["stuck"], 0);
    assert_eq!(json["rows"].as_array().unwrap().len(), 1024);

    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(60), "criterion 4");
    println!("criterion 04 (case analysis, 1024 + 27 windows): PASS in {elapsed:?}");
}

/// Homology oracle agreement, all equalities exact.
#[test]
fn criterion_05_homology_oracle_agreement() {
    let started = Instant::now();
    let cube = |n: usize| -> Vec<LatticePoint> {
        (0..1u32 << n)
            .map(|b| LatticePoint::new((0..n).map(|i| (b >> i & 1) as i64).collect()))
            .collect()
    };

    // The unit square at scale 1 is a circle.
    let g = NeighborhoodGraph::build(cube(2), Metric::L1, rat_int(1)).unwrap();
    let betti = betti_numbers(&g, 2).unwrap();
    assert_eq!(betti.reduced(), &[0, 1]);

    // The unit cube at scale 2 is a 3-sphere.
    let g = NeighborhoodGraph::build(cube(3), Metric::L1, rat_int(2)).unwrap();
    let betti = betti_numbers(&g, 4).unwrap();
    assert_eq!(betti.reduced(), &[0, 0, 0, 1]);

    // Crushable grids have all computed reduced Betti numbers zero,
    // agreeing with their certificates.
    let grid2 = GridSpec::cube(2, 3, Metric::L1, rat_int(2)).unwrap();
    assert!(verify_certificate(&complete(&grid2)).unwrap().valid);
    let g = NeighborhoodGraph::build(grid2.points_lex(), Metric::L1, rat_int(2)).unwrap();
    let betti = betti_numbers(&g, 4).unwrap();
    assert_eq!(betti.reduced(), &[0, 0, 0, 0]);

    let grid3 = GridSpec::cube(3, 2, Metric::L1, rat_int(3)).unwrap();
    assert!(verify_certificate(&complete(&grid3)).unwrap().valid);
    let g = NeighborhoodGraph::build(grid3.points_lex(), Metric::L1, rat_int(3)).unwrap();
    let betti = betti_numbers(&g, 4).unwrap();
    assert_eq!(betti.reduced(), &[0, 0, 0, 0]);

    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(120), "criterion 5");
    println!("criterion 05 (homology oracle agreement): PASS in {elapsed:?}");
}

/// Jung bound property suite: ten thousand random integer point sets stay
/// at or below n/(n+1), the worked two-point example has radius exactly 1,
/// and every center lies in the bounding box.
#[test]
fn criterion_06_jung_bound_suite() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(0x6a756e67);
    let mut done = 0usize;
    let mut max_ratio = rat_int(0);
    while done < 10_000 {
        let n = 1 + rng.below(4) as usize;
        let k = 2 + rng.below(9) as usize;
        let pts: Vec<RationalPoint> = (0..k)
            .map(|_| {
                RationalPoint::from_integers(
                    &(0..n).map(|_| rng.int_in(-5, 5)).collect::<Vec<_>>(),
                )
            })
            .collect();
        let ratio = match jung_ratio(&pts, Metric::L1) {
            Ok(r) => r,
            Err(BallError::ZeroDiameter) => continue,
            Err(e) => panic!("{e}"),
        };
        done += 1;
        let bound = rat(n as i64, n as i64 + 1);
        assert!(ratio <= bound, "ratio {ratio} above {bound} for {pts:?}");
        if ratio > max_ratio {
            max_ratio = ratio.clone();
        }
        let ball = enclosing_ball(&pts, Metric::L1).unwrap();
        let bbox = bounding_box(&pts).unwrap();
        assert!(bbox.contains(&ball.center), "center escapes the box");
    }

    let worked = [
        RationalPoint::from_integers(&[1, 0]),
        RationalPoint::from_integers(&[0, 1]),
    ];
    let ball = enclosing_ball(&worked, Metric::L1).unwrap();
    assert_eq!(ball.radius, rat_int(1));

    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(120), "criterion 6");
    println!(
        "criterion 06 (Jung bound, 10000 sets, max ratio {max_ratio}): PASS in {elapsed:?}"
    );
}

/// Constructive near-center suite: one thousand admissible sets per
/// dimension 2..4 satisfy the full construction postcondition exactly at
/// the default shrink parameter, the existential check confirms each, and
/// the explicit infeasible case is refused.
#[test]
fn criterion_07_lec_constructive_suite() {
    let started = Instant::now();
    for n in 2..=4usize {
        let kappa = rat(n as i64, n as i64 + 1);
        let mut rng = SplitMix64::new(0x6c6563 + n as u64);
        for trial in 0..1_000 {
            let tau = sample_admissible_set(&mut rng, n, 8);
            // The constructor checks its entire postcondition exactly and
            // errors on any miss.
            let c = lec_center_construct(&tau, &kappa)
                .unwrap_or_else(|e| panic!("n = {n} trial {trial}: {e}"));
            assert_eq!(c.rho, rat(1, n as i64));
            assert!(
                lec_verify(n, &c.rho, &tau).unwrap(),
                "n = {n} trial {trial}: existential check disagrees"
            );
        }
    }
    let tau = [
        RationalPoint::from_integers(&[0, 0]),
        RationalPoint::from_integers(&[3, 0]),
    ];
    assert!(!lec_verify(2, &rat_int(2), &tau).unwrap());

    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(120), "criterion 7");
    println!("criterion 07 (near-center construction, 3x1000 sets): PASS in {elapsed:?}");
}

/// Snapping suite: one thousand random near-centers land on the sublattice
/// with every coordinate moved at most 1/m, total displacement at most
/// n/m, strictly above the anchor in the last coordinate.
#[test]
fn criterion_08_snapping_suite() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(0x736e6170);
    for _ in 0..1_000 {
        let n = 1 + rng.below(5) as usize;
        let m = 1 + rng.below(6);
        let x = LatticePoint::new((0..n).map(|_| rng.int_in(-30, 30)).collect());
        let c = RationalPoint::new(
            (0..n)
                .map(|j| {
                    let den = rng.int_in(1, 9);
                    let num = if j + 1 == n {
                        rng.int_in(0, den)
                    } else {
                        rng.int_in(-den, den)
                    };
                    rat(x.coord(j), m as i64) + rat(num, den)
                })
                .collect(),
        );
        let snapped = snap_to_sublattice(&c, &x, m).unwrap();
        let snapped_true = snapped.to_rational(m);
        let step = rat(1, m as i64);
        for j in 0..n {
            let gap = {
                let d = snapped_true.coord(j) - c.coord(j);
                if d < rat_int(0) {
                    -d
                } else {
                    d
                }
            };
            assert!(gap <= step, "coordinate {j} moved {gap} > 1/{m}");
        }
        let total = match distance_rational(&snapped_true, &c, Metric::L1).unwrap() {
            DistanceValue::Exact(d) => d,
            DistanceValue::Squared(_) => unreachable!(),
        };
        assert!(total <= rat(n as i64, m as i64), "total displacement {total}");
        assert!(snapped.coord(n - 1) > x.coord(n - 1), "not strictly above");
    }
    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(10), "criterion 8");
    println!("criterion 08 (snapping, 1000 triples): PASS in {elapsed:?}");
}

/// Determinism and performance: certificates are byte-identical across
/// thread counts, the pattern-key count stays at most 1024 for every size,
/// and runtime grows no worse than linearly in point count (factor-2
/// tolerance) from size 4 to size 10. Memoization makes growth sublinear
/// (the fixed search cost amortizes), so the two-sided band is checked
/// upward; the exact ratio is printed for inspection.
#[test]
fn criterion_09_determinism_and_performance() {
    let started = Instant::now();

    // Byte-identical certificates with 1 and 8 threads, via the CLI.
    let out1 = temp_path("threads1.json");
    let out8 = temp_path("threads8.json");
    for (threads, path) in [("1", &out1), ("8", &out8)] {
        let status = Command::new(binary())
            .args([
                "crush", "--dim", "3", "--range", "0..10", "--scale", "3", "--threads", threads,
            ])
            .arg("--output")
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let bytes1 = fs::read(&out1).unwrap();
    let bytes8 = fs::read(&out8).unwrap();
    assert_eq!(bytes1, bytes8, "certificates differ across thread counts");

    // Memoized and plain runs agree byte-for-byte too.
    let plain = temp_path("plain.json");
    let status = Command::new(binary())
        .args([
            "crush", "--dim", "3", "--range", "0..10", "--scale", "3", "--no-memoize",
        ])
        .arg("--output")
        .arg(&plain)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(bytes1, fs::read(&plain).unwrap());

    // Pattern counts and timing across sizes.
    let mut times: Vec<(u128, u128)> = Vec::new(); // (points, best ns)
    for size in 4..=10i64 {
        let spec = GridSpec::cube(3, size, Metric::L1, rat_int(3)).unwrap();
        let mut best: Option<u128> = None;
        for _ in 0..3 {
            let t0 = Instant::now();
            let (result, stats) = crush_with_stats(&spec, &CrushOptions::default()).unwrap();
            let ns = t0.elapsed().as_nanos();
            assert!(matches!(result, CrushResult::Complete(_)));
            assert!(
                stats.distinct_patterns <= 1024,
                "size {size}: {} patterns",
                stats.distinct_patterns
            );
            best = Some(best.map_or(ns, |b: u128| b.min(ns)));
        }
        times.push((spec.point_count(), best.unwrap()));
    }
    let (p_first, t_first) = times[0];
    let (p_last, t_last) = times[times.len() - 1];
    // ratio = (t_last / t_first) / (p_last / p_first), exactly.
    let ratio = Rational::new(
        (t_last * p_first).into(),
        (t_first * p_last).into(),
    );
    assert!(
        ratio <= rat_int(2),
        "runtime grew faster than 2x linear: ratio {ratio}"
    );

    let elapsed = started.elapsed();
    println!(
        "criterion 09 (determinism & performance, linearity ratio {ratio}): PASS in {elapsed:?}"
    );
}

/// Metric generalization smoke test: the dimension 1-3 reproductions
/// succeed under the Chebyshev metric at the same scales, and the
/// certificates verify.
#[test]
fn criterion_10_dinf_generalization() {
    let started = Instant::now();
    for m in [1i64, 10, 25, 50] {
        let spec = GridSpec::cube(1, m, Metric::LInf, rat_int(1)).unwrap();
        let cert = complete(&spec);
        assert!(verify_certificate(&cert).unwrap().valid, "1d M = {m}");
    }
    for m in [1i64, 7, 14, 20] {
        let spec = GridSpec::cube(2, m, Metric::LInf, rat_int(2)).unwrap();
        let cert = complete(&spec);
        assert!(verify_certificate(&cert).unwrap().valid, "2d M = {m}");
    }
    let mut sizes_checked = BTreeSet::new();
    for m in 1..=10i64 {
        let spec = GridSpec::cube(3, m, Metric::LInf, rat_int(3)).unwrap();
        let cert = complete(&spec);
        assert!(cert.steps.iter().all(|s| s.witness.len() <= 3));
        assert!(verify_certificate(&cert).unwrap().valid, "3d M = {m}");
        sizes_checked.insert(m);
    }
    assert_eq!(sizes_checked.len(), 10);
    let elapsed = started.elapsed();
    assert_budget(elapsed, Duration::from_secs(300), "criterion 10");
    println!("criterion 10 (Chebyshev-metric reproduction): PASS in {elapsed:?}");
}
