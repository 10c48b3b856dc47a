//! Wire formats: the certificate file, the verification report, and the
//! report wrappers.
//!
//! Certificates and verification reports follow fixed schemas with exact
//! integers only — no floats anywhere in any output. Certificate bytes are
//! deterministic: identical runs produce identical files regardless of
//! thread count.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use lattice_rips::crush::{
    CrushCertificate, CrushStep, FailureReport, GridSpec, StepMode, VerificationReport,
};
use lattice_rips::exact::Rational;
use lattice_rips::metric::Metric;
use lattice_rips::point::LatticePoint;

/// Schema version of the certificate file.
pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub dim: usize,
    pub ranges: Vec<[i64; 2]>,
    pub metric: String,
    pub scale_num: i64,
    pub scale_den: i64,
    pub m: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub point: Vec<i64>,
    pub witness: Vec<Vec<i64>>,
    pub mode: String,
}

/// The certificate file: versioned, bit-exact integers, no floats.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub version: u32,
    pub grid: GridFile,
    pub steps: Vec<StepFile>,
    pub terminal: Vec<i64>,
}

/// The verification report file: exactly these fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReportFile {
    pub valid: bool,
    pub failing_step: Option<usize>,
    pub reason: Option<String>,
    pub steps_checked: usize,
}

impl From<&VerificationReport> for VerificationReportFile {
    fn from(r: &VerificationReport) -> Self {
        Self {
            valid: r.valid,
            failing_step: r.failing_step,
            reason: r.reason.clone(),
            steps_checked: r.steps_checked,
        }
    }
}

fn rational_to_parts(r: &Rational) -> Result<(i64, i64)> {
    lattice_rips::exact::to_i64_parts(r)
        .context("scale outside the certificate integer range")
}

pub fn grid_to_file(spec: &GridSpec) -> Result<GridFile> {
    let (scale_num, scale_den) = rational_to_parts(spec.scale())?;
    Ok(GridFile {
        dim: spec.dim(),
        ranges: spec.ranges().iter().map(|&(lo, hi)| [lo, hi]).collect(),
        metric: spec.metric().as_str().to_string(),
        scale_num,
        scale_den,
        m: spec.m(),
    })
}

pub fn grid_from_file(grid: &GridFile) -> Result<GridSpec> {
    if grid.ranges.len() != grid.dim {
        bail!("grid dim {} does not match {} ranges", grid.dim, grid.ranges.len());
    }
    let metric: Metric = grid
        .metric
        .parse()
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    if grid.scale_den <= 0 {
        bail!("scale denominator must be positive");
    }
    let scale = Rational::new(grid.scale_num.into(), grid.scale_den.into());
    GridSpec::new(
        grid.ranges.iter().map(|&[lo, hi]| (lo, hi)).collect(),
        metric,
        scale,
        grid.m,
    )
    .map_err(|e| anyhow::anyhow!("invalid grid: {e}"))
}

pub fn certificate_to_file(cert: &CrushCertificate) -> Result<CertificateFile> {
    Ok(CertificateFile {
        version: CERTIFICATE_VERSION,
        grid: grid_to_file(&cert.grid)?,
        steps: cert
            .steps
            .iter()
            .map(|s| StepFile {
                point: s.point.coords().to_vec(),
                witness: s.witness.iter().map(|w| w.coords().to_vec()).collect(),
                mode: s.mode.as_str().to_string(),
            })
            .collect(),
        terminal: cert.terminal.coords().to_vec(),
    })
}

pub fn certificate_from_file(file: &CertificateFile) -> Result<CrushCertificate> {
    if file.version != CERTIFICATE_VERSION {
        bail!("unsupported certificate version {}", file.version);
    }
    let grid = grid_from_file(&file.grid)?;
    let point = |coords: &[i64]| -> Result<LatticePoint> {
        if coords.is_empty() {
            bail!("empty point in certificate");
        }
        Ok(LatticePoint::new(coords.to_vec()))
    };
    let mut steps = Vec::with_capacity(file.steps.len());
    for (i, s) in file.steps.iter().enumerate() {
        let mode = match s.mode.as_str() {
            "dominated" => StepMode::Dominated,
            "locally-dominated" => StepMode::LocallyDominated,
            other => bail!("step {i}: unknown mode `{other}`"),
        };
        steps.push(CrushStep {
            point: point(&s.point)?,
            witness: s
                .witness
                .iter()
                .map(|w| point(w))
                .collect::<Result<Vec<_>>>()?,
            mode,
        });
    }
    Ok(CrushCertificate {
        grid,
        steps,
        terminal: point(&file.terminal)?,
    })
}

/// Deterministic certificate bytes: compact JSON plus a trailing newline.
pub fn certificate_bytes(cert: &CrushCertificate) -> Result<Vec<u8>> {
    let file = certificate_to_file(cert)?;
    let mut bytes = serde_json::to_vec(&file)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Tool identification embedded in non-certificate reports.
#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: "lattice-rips",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// A failure report for a stuck reduction.
#[derive(Debug, Clone, Serialize)]
pub struct FailureFile {
    pub tool: ToolInfo,
    pub grid: GridFile,
    pub stuck: StuckFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct StuckFile {
    pub step_index: usize,
    pub point: Vec<i64>,
    pub residual_window: Vec<Vec<i64>>,
}

pub fn failure_to_file(spec: &GridSpec, report: &FailureReport) -> Result<FailureFile> {
    Ok(FailureFile {
        tool: ToolInfo::current(),
        grid: grid_to_file(spec)?,
        stuck: StuckFile {
            step_index: report.step_index,
            point: report.stuck_point.coords().to_vec(),
            residual_window: report
                .residual_window
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
        },
    })
}
