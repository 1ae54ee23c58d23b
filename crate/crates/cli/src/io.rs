//! CSV reading and writing. Numeric output uses 17 significant digits so
//! files round-trip doubles exactly and reruns are byte-identical.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nalgebra::DMatrix;
use sskern_core::{make_grid, IODataset, ProcessPaths, TimeGrid};

/// 17 significant digits.
pub fn fmt(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Parses a grid source: `uniform:<n>,<ts>`, `inline:<t0>,<t1>,...`, or
/// `csv:<path>` (reads the `t` column).
pub fn parse_grid_source(spec: &str) -> Result<TimeGrid> {
    if let Some(rest) = spec.strip_prefix("uniform:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            bail!("uniform grid spec must be uniform:<n>,<ts>, got `{spec}`");
        }
        let n: usize = parts[0].trim().parse().context("bad point count")?;
        let ts: f64 = parts[1].trim().parse().context("bad sample period")?;
        Ok(TimeGrid::uniform(n, ts)?)
    } else if let Some(rest) = spec.strip_prefix("inline:") {
        let times: Vec<f64> = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>().context("bad time value"))
            .collect::<Result<_>>()?;
        Ok(make_grid(&times)?)
    } else if let Some(path) = spec.strip_prefix("csv:") {
        let times = read_time_column(Path::new(path))?;
        Ok(make_grid(&times)?)
    } else {
        bail!("grid spec must start with uniform:, inline: or csv:, got `{spec}`");
    }
}

fn split_header(line: &str) -> Vec<String> {
    line.split(',').map(|s| s.trim().to_string()).collect()
}

/// Reads the `t` column from a headed CSV file.
pub fn read_time_column(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().context("empty CSV file")?;
    let cols = split_header(header);
    let t_idx = cols
        .iter()
        .position(|c| c == "t")
        .with_context(|| format!("{}: no `t` column in header", path.display()))?;
    let mut out = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            bail!("{}:{}: empty row", path.display(), lineno + 1);
        }
        let fields: Vec<&str> = line.split(',').collect();
        let raw = fields
            .get(t_idx)
            .with_context(|| format!("{}:{}: missing t field", path.display(), lineno + 1))?;
        let v: f64 = raw
            .trim()
            .parse()
            .with_context(|| format!("{}:{}: bad number `{raw}`", path.display(), lineno + 1))?;
        out.push(v);
    }
    Ok(out)
}

/// Reads a `t,u,y` dataset.
pub fn read_io_dataset(path: &Path) -> Result<IODataset> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().context("empty CSV file")?;
    let cols = split_header(header);
    let idx = |name: &str| {
        cols.iter()
            .position(|c| c == name)
            .with_context(|| format!("{}: no `{name}` column in header", path.display()))
    };
    let (ti, ui, yi) = (idx("t")?, idx("u")?, idx("y")?);
    let (mut t, mut u, mut y) = (Vec::new(), Vec::new(), Vec::new());
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            bail!("{}:{}: empty row", path.display(), lineno + 1);
        }
        let fields: Vec<&str> = line.split(',').collect();
        let get = |i: usize| -> Result<f64> {
            let raw = fields.get(i).with_context(|| {
                format!("{}:{}: missing field {i}", path.display(), lineno + 1)
            })?;
            let v: f64 = raw.trim().parse().with_context(|| {
                format!("{}:{}: bad number `{raw}`", path.display(), lineno + 1)
            })?;
            if !v.is_finite() {
                bail!("{}:{}: non-finite value", path.display(), lineno + 1);
            }
            Ok(v)
        };
        t.push(get(ti)?);
        u.push(get(ui)?);
        y.push(get(yi)?);
    }
    let grid = make_grid(&t)?;
    Ok(IODataset::new(grid, u, y)?)
}

/// Writes paths as `t,path_0,...,path_{k-1}`, one row per grid point.
pub fn write_paths_csv(path: &Path, paths: &ProcessPaths) -> Result<()> {
    let mut out = String::from("t");
    for p in 0..paths.n_paths() {
        out.push_str(&format!(",path_{p}"));
    }
    out.push('\n');
    let times = paths.grid().times();
    for (i, &t) in times.iter().enumerate() {
        out.push_str(&fmt(t));
        for p in 0..paths.n_paths() {
            out.push(',');
            out.push_str(&fmt(paths.values()[(p, i)]));
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes a full matrix row-major, one CSV row per matrix row.
pub fn write_matrix_csv(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt(m[(i, j)]));
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes entropy-rate reports as `n,joint_entropy,rate,reference_rate`.
pub fn write_rates_csv(path: &Path, reports: &[sskern_core::EntropyReport]) -> Result<()> {
    let mut out = String::from("n,joint_entropy,rate,reference_rate\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            fmt(r.joint_entropy),
            fmt(r.rate),
            r.reference_rate.map(fmt).unwrap_or_default()
        ));
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}
