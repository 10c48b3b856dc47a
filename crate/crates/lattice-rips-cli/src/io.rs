//! Point-set files: one point per line, whitespace-separated integers, with
//! an optional header line `# dim=<n> m=<m>`. Blank lines and `#` comments
//! are skipped. The geometry subcommands additionally accept rational
//! tokens `p/q`.

use anyhow::{bail, Context, Result};

use lattice_rips::exact::{parse_rational, Rational};
use lattice_rips::point::{LatticePoint, RationalPoint};

#[derive(Debug, Clone)]
pub struct PointFile {
    pub points: Vec<LatticePoint>,
    pub dim: usize,
    pub m: u64,
}

/// Parses the optional `# dim=<n> m=<m>` header.
fn parse_header(line: &str) -> Option<(Option<usize>, Option<u64>)> {
    let body = line.strip_prefix('#')?.trim();
    let mut dim = None;
    let mut m = None;
    for token in body.split_whitespace() {
        if let Some(v) = token.strip_prefix("dim=") {
            dim = v.parse().ok();
        } else if let Some(v) = token.strip_prefix("m=") {
            m = v.parse().ok();
        }
    }
    if dim.is_none() && m.is_none() {
        None
    } else {
        Some((dim, m))
    }
}

/// Reads an integer point set.
pub fn parse_points(text: &str) -> Result<PointFile> {
    let mut points: Vec<LatticePoint> = Vec::new();
    let mut declared_dim: Option<usize> = None;
    let mut m: u64 = 1;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some((dim, mm)) = parse_header(line) {
                if let Some(d) = dim {
                    declared_dim = Some(d);
                }
                if let Some(v) = mm {
                    m = v;
                }
            }
            continue;
        }
        let coords: Vec<i64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .with_context(|| format!("line {}: bad integer `{t}`", lineno + 1))
            })
            .collect::<Result<_>>()?;
        if coords.is_empty() {
            continue;
        }
        points.push(LatticePoint::new(coords));
    }
    if points.is_empty() {
        bail!("no points in input");
    }
    let dim = declared_dim.unwrap_or_else(|| points[0].dim());
    for (i, p) in points.iter().enumerate() {
        if p.dim() != dim {
            bail!("point {} has dimension {}, expected {dim}", i + 1, p.dim());
        }
    }
    if m == 0 {
        bail!("header m must be positive");
    }
    Ok(PointFile { points, dim, m })
}

/// Reads a rational point set (`p/q` tokens allowed), for the geometry
/// subcommands.
pub fn parse_rational_points(text: &str) -> Result<Vec<RationalPoint>> {
    let mut points: Vec<RationalPoint> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords: Vec<Rational> = line
            .split_whitespace()
            .map(|t| {
                parse_rational(t)
                    .map_err(|e| anyhow::anyhow!("line {}: {e}", lineno + 1))
            })
            .collect::<Result<_>>()?;
        if coords.is_empty() {
            continue;
        }
        points.push(RationalPoint::new(coords));
    }
    if points.is_empty() {
        bail!("no points in input");
    }
    let dim = points[0].dim();
    for (i, p) in points.iter().enumerate() {
        if p.dim() != dim {
            bail!("point {} has dimension {}, expected {dim}", i + 1, p.dim());
        }
    }
    Ok(points)
}
