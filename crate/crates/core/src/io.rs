//! Text formats: `.pts` point lists, plain PBM rasters, and tab-separated
//! reports.
//!
//! A `.pts` document starts with `dim <d>`, followed by one point per line as
//! `d` whitespace-separated integers. Lines starting with `#` and blank lines
//! are ignored. Writers emit points in lexicographic order.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::analysis::{Classification, VerificationReport};
use crate::error::{Error, Result};
use crate::lattice::PointSet;

/// Longest line a PBM writer emits.
const PBM_LINE: usize = 70;

pub fn write_pts(a: &PointSet) -> String {
    let mut out = format!("dim {}\n", a.dim());
    a.for_each_point(|p| {
        for (i, x) in p.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{x}");
        }
        out.push('\n');
    });
    out
}

pub fn parse_pts(text: &str) -> Result<PointSet> {
    let mut dim: Option<usize> = None;
    let mut flat = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let Some(d) = dim else {
            let parsed = body
                .strip_prefix("dim")
                .filter(|rest| rest.starts_with(char::is_whitespace))
                .and_then(|rest| rest.trim().parse::<usize>().ok())
                .filter(|&d| d >= 1);
            match parsed {
                Some(d) => dim = Some(d),
                None => return Err(Error::Parse { line, message: format!("expected header 'dim <d>', found {body:?}") }),
            }
            continue;
        };
        let coords: Vec<i64> = body
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse { line, message: format!("not an integer: {t:?}") }))
            .collect::<Result<_>>()?;
        if coords.len() != d {
            return Err(Error::Parse { line, message: format!("expected {d} coordinates, found {}", coords.len()) });
        }
        if !seen.insert(coords.clone()) {
            let point = crate::lattice::LatticePoint::new(coords).to_string();
            return Err(Error::Duplicate { line, point });
        }
        flat.extend(coords);
    }
    let d = dim.ok_or(Error::Parse { line: 1, message: "missing header 'dim <d>'".into() })?;
    PointSet::from_points(d, flat.chunks_exact(d).map(|c| c.to_vec()))
}

/// Plain PBM over the bounding box; the bottom row is the smallest `y`.
pub fn render_pbm(a: &PointSet) -> Result<String> {
    if a.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: a.dim() });
    }
    let (lo, hi) = a.bounding_box()?;
    let (x0, y0) = (lo.coords()[0], lo.coords()[1]);
    let w = (hi.coords()[0] - x0 + 1) as usize;
    let h = (hi.coords()[1] - y0 + 1) as usize;
    let mut bits = vec![false; w * h];
    a.for_each_point(|p| {
        let col = (p[0] - x0) as usize;
        let row = h - 1 - (p[1] - y0) as usize;
        bits[row * w + col] = true;
    });
    let mut out = format!("P1\n{w} {h}\n");
    for row in bits.chunks(w) {
        for chunk in row.chunks(PBM_LINE) {
            out.extend(chunk.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
    }
    Ok(out)
}

pub const REPORT_HEADER: &str = "lhs\tlhs_size\trelation\trhs\trhs_size\tgap\tpassed";

/// One tab-separated line per report under [`REPORT_HEADER`].
pub fn reports_tsv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:+}\t{}",
            r.lhs_spec, r.lhs_size, r.expect, r.rhs_spec, r.rhs_size, r.gap, r.passed
        );
    }
    out
}

/// `c`, `|2cA|`, `|cA − cA|`, verdict.
pub fn classifications_tsv(rows: &[Classification]) -> String {
    let mut out = String::from("c\tsum_size\tdiff_size\tverdict\n");
    for (i, c) in rows.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", i + 1, c.sum_size, c.diff_size, c.verdict);
    }
    out
}
