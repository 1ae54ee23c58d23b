//! Minimal SVG line plots. Flag-gated convenience output; the CSV files are
//! the artifact of record.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;

struct Frame {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Frame {
    fn from_series(xs: &[f64], ys: &[&[f64]]) -> Self {
        let mut f = Frame {
            xmin: f64::INFINITY,
            xmax: f64::NEG_INFINITY,
            ymin: f64::INFINITY,
            ymax: f64::NEG_INFINITY,
        };
        for &x in xs {
            f.xmin = f.xmin.min(x);
            f.xmax = f.xmax.max(x);
        }
        for series in ys {
            for &y in *series {
                if y.is_finite() {
                    f.ymin = f.ymin.min(y);
                    f.ymax = f.ymax.max(y);
                }
            }
        }
        if f.xmax == f.xmin {
            f.xmax = f.xmin + 1.0;
        }
        if f.ymax == f.ymin {
            f.ymax = f.ymin + 1.0;
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.xmin) / (self.xmax - self.xmin) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.ymin) / (self.ymax - self.ymin) * (H - 2.0 * MARGIN)
    }
}

fn polyline(frame: &Frame, xs: &[f64], ys: &[f64], color: &str, dash: bool) -> String {
    let pts: Vec<String> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.is_finite())
        .map(|(&x, &y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    let dash_attr = if dash { " stroke-dasharray=\"6,4\"" } else { "" };
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr} points=\"{}\"/>\n",
        pts.join(" ")
    )
}

fn document(body: &str, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n\
         {body}</svg>\n",
        W / 2.0
    )
}

/// Entropy-rate curve with its analytic reference where available.
pub fn write_rate_plot(path: &Path, reports: &[sskern_core::EntropyReport]) -> Result<()> {
    let xs: Vec<f64> = reports.iter().map(|r| r.n as f64).collect();
    let rates: Vec<f64> = reports.iter().map(|r| r.rate).collect();
    let refs: Vec<f64> = reports
        .iter()
        .map(|r| r.reference_rate.unwrap_or(f64::NAN))
        .collect();
    let frame = Frame::from_series(&xs, &[&rates, &refs]);
    let mut body = polyline(&frame, &xs, &rates, "#1f77b4", false);
    if refs.iter().any(|v| v.is_finite()) {
        body.push_str(&polyline(&frame, &xs, &refs, "#d62728", true));
    }
    fs::write(path, document(&body, "entropy rate vs n"))
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Impulse-response posterior mean with a 2-sigma band.
pub fn write_estimate_plot(
    path: &Path,
    times: &[f64],
    mean: &[f64],
    std: &[f64],
) -> Result<()> {
    let upper: Vec<f64> = mean.iter().zip(std).map(|(m, s)| m + 2.0 * s).collect();
    let lower: Vec<f64> = mean.iter().zip(std).map(|(m, s)| m - 2.0 * s).collect();
    let frame = Frame::from_series(times, &[mean, &upper, &lower]);
    let mut body = String::new();
    body.push_str(&polyline(&frame, times, &upper, "#aec7e8", false));
    body.push_str(&polyline(&frame, times, &lower, "#aec7e8", false));
    body.push_str(&polyline(&frame, times, mean, "#1f77b4", false));
    fs::write(path, document(&body, "impulse response estimate (mean, 2-sigma)"))
        .with_context(|| format!("cannot write {}", path.display()))
}
