//! Minimal SVG line charts for bench reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{BenchReport, Method};
use crate::error::{Error, Result};
use crate::io::write_atomic;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

struct Series {
    label: String,
    color: &'static str,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

fn color(m: Method) -> &'static str {
    match m {
        Method::None => "#888888",
        Method::Wa => "#1f77b4",
        Method::Mer => "#d62728",
    }
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1) = nice_range(x0, x1);
    let (y0, y1) = nice_range(y0, y1);
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, title);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let fx = x0 + (x1 - x0) * i as f64 / 5.0;
        let fy = y0 + (y1 - y0) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{:.3}</text>"#,
            sx(fx),
            TOP + ph + 16.0,
            fx
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{:.3}</text>"#,
            LEFT - 6.0,
            sy(fy) + 4.0,
            fy
        );
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#dddddd"/>"##,
            sy(fy),
            LEFT + pw,
            sy(fy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 12.0,
        x_label
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        y_label
    );
    for (i, ser) in series.iter().enumerate() {
        let finite: Vec<_> = ser.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        if finite.len() > 1 {
            let d: Vec<String> = finite.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"{dash}/>"#,
                d.join(" "),
                ser.color
            );
        }
        for p in &finite {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                sx(p.0),
                sy(p.1),
                ser.color
            );
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"{dash}/>"#,
            lx + 20.0,
            ser.color
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, ser.label);
    }
    s.push_str("</svg>\n");
    s
}

fn methods_in(report: &BenchReport) -> Vec<Method> {
    let mut m: Vec<Method> = report.rows.iter().map(|r| r.method).collect();
    m.sort();
    m.dedup();
    m
}

fn method_series(report: &BenchReport, value: impl Fn(&super::MethodStats) -> f64) -> Vec<Series> {
    methods_in(report)
        .into_iter()
        .map(|m| Series {
            label: m.as_str().to_string(),
            color: color(m),
            dashed: false,
            points: report.rows.iter().filter(|r| r.method == m).map(|r| (r.snr, value(r))).collect(),
        })
        .collect()
}

/// Writes `bias.svg`, `std.svg` and the CSV behind each into `out_dir`.
pub fn render_plots(report: &BenchReport, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let bias = method_series(report, |r| r.bias_pct);
    let mut bias_csv = String::from("snr,method,bias_pct\n");
    let mut std_csv = String::from("snr,method,log10_std_pct\n");
    for r in &report.rows {
        let _ = writeln!(bias_csv, "{},{},{}", r.snr, r.method.as_str(), r.bias_pct);
        let _ = writeln!(std_csv, "{},{},{}", r.snr, r.method.as_str(), r.std_pct.log10());
    }
    let shift = report.config.truth.brillouin_shift_hz;
    let mut std = method_series(report, |r| r.std_pct.log10());
    let crlb: Vec<(f64, f64)> = report
        .crlb
        .iter()
        .map(|&(snr, v)| (snr, (100.0 * v / shift).log10()))
        .collect();
    for (snr, v) in &crlb {
        let _ = writeln!(std_csv, "{snr},crlb,{v}");
    }
    std.push(Series {
        label: "CRLB".into(),
        color: "#000000",
        dashed: true,
        points: crlb,
    });

    let files = [
        ("bias.svg", chart("Shift bias", "SNR", "bias (% of shift)", &bias)),
        ("bias.csv", bias_csv),
        ("std.svg", chart("Shift standard deviation", "SNR", "log10 std (% of shift)", &std)),
        ("std.csv", std_csv),
    ];
    let mut out = Vec::new();
    for (name, body) in files {
        let p = dir.join(name);
        write_atomic(&p, body.as_bytes())?;
        out.push(p);
    }
    Ok(out)
}
