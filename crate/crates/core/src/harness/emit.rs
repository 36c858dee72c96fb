//! CSV, SVG and metadata output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::scenario::{Observable, Provenance, ScenarioRun, TimeSeries};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["t", "observable", "provenance", "re", "im"];

/// Writes `series` as one CSV with times divided by `time_unit`.
pub fn write_csv(series: &[TimeSeries], time_unit: f64, path: &Path) -> Result<()> {
    if series.is_empty() || series.iter().all(|s| s.is_empty()) {
        return Err(Error::EmptySeries);
    }
    let mut out = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    })?;
    out.write_record(CSV_HEADER)?;
    for s in series {
        let (obs, prov) = (s.observable.to_string(), s.provenance.to_string());
        for (&t, z) in s.times.iter().zip(&s.values) {
            out.write_record([
                (t / time_unit).to_string(),
                obs.clone(),
                prov.clone(),
                z.re.to_string(),
                z.im.to_string(),
            ])?;
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads series written by [`write_csv`], in order of first appearance.
pub fn read_csv(path: &Path) -> Result<Vec<TimeSeries>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    })?;
    let headers = reader.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::config("csv", format!("{}: expected header {}", path.display(), CSV_HEADER.join(","))));
    }
    let mut order: Vec<(Observable, Provenance)> = Vec::new();
    let mut data: BTreeMap<(Observable, Provenance), (Vec<f64>, Vec<C64>)> = BTreeMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let num = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| Error::config(CSV_HEADER[i], format!("{}: row {}: bad number `{}`", path.display(), line + 2, &record[i])))
        };
        let key = (record[1].parse()?, record[2].parse()?);
        let entry = data.entry(key).or_insert_with(|| {
            order.push(key);
            (Vec::new(), Vec::new())
        });
        entry.0.push(num(0)?);
        entry.1.push(C64::new(num(3)?, num(4)?));
    }
    if order.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(order
        .into_iter()
        .map(|key| {
            let (times, values) = data.remove(&key).unwrap_or_default();
            TimeSeries::new(key.0, key.1, times, values)
        })
        .collect())
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 50.0;

fn color(p: Provenance) -> &'static str {
    match p {
        Provenance::Oracle => "#1f77b4",
        Provenance::ClosedForm => "#d62728",
        Provenance::PhaseSpace => "#2ca02c",
        Provenance::AdiabaticOnly => "#7f7f7f",
    }
}

/// Line chart of the real parts; oracle samples are drawn as points.
pub fn write_svg(series: &[TimeSeries], time_unit: f64, title: &str, path: &Path) -> Result<()> {
    let points: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.times.iter().zip(&s.values).map(|(&t, z)| (t / time_unit, z.re)))
        .collect();
    if points.is_empty() {
        return Err(Error::EmptySeries);
    }
    let bound = |f: fn(&(f64, f64)) -> f64| {
        points
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (t0, mut t1) = bound(|p| p.0);
    let (mut y0, mut y1) = bound(|p| p.1);
    if t1 <= t0 {
        t1 = t0 + 1.0;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let x = |t: f64| MARGIN + (t - t0) / (t1 - t0) * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" font-size="14" text-anchor="middle">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        svg,
        r#"<path d="M{m} {m} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">t / Rabi period</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    for (label, v) in [(format!("{y0:.3}"), y0), (format!("{y1:.3}"), y1)] {
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" font-size="11" text-anchor="end">{label}</text>"#, MARGIN - 4.0, y(v) + 4.0);
    }
    for (k, s) in series.iter().enumerate() {
        let c = color(s.provenance);
        let coords = s.times.iter().zip(&s.values).map(|(&t, z)| (x(t / time_unit), y(z.re)));
        if s.provenance == Provenance::Oracle {
            let _ = writeln!(svg, r#"<g fill="{c}">"#);
            for (px, py) in coords {
                let _ = writeln!(svg, r#"<circle cx="{px:.2}" cy="{py:.2}" r="1.6"/>"#);
            }
            let _ = writeln!(svg, "</g>");
        } else {
            let d: Vec<String> = coords.map(|(px, py)| format!("{px:.2},{py:.2}")).collect();
            let dash = if s.provenance == Provenance::AdiabaticOnly { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="1.4"{dash}/>"#, d.join(" "));
        }
        let ly = MARGIN + 16.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly}" font-size="11" fill="{c}" text-anchor="end">{}</text>"#,
            WIDTH - MARGIN,
            s.label()
        );
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct Metadata<'a> {
    name: &'a str,
    time_unit: &'static str,
    rabi_period: f64,
    t_collapse: f64,
    t_heisenberg: f64,
    n_max: usize,
    model: ModelMeta,
    prep: PrepMeta,
}

#[derive(Serialize)]
struct ModelMeta {
    hbar: f64,
    g: f64,
    omega: f64,
    nu: f64,
    b_r: f64,
}

#[derive(Serialize)]
struct PrepMeta {
    atomic: String,
    alpha0_re: f64,
    alpha0_im: f64,
    /// `|alpha0|^2`.
    n_mean: f64,
    n_mean_convention: &'static str,
    action: f64,
}

/// Writes `<name>.csv`, `<name>.meta.toml` and optionally `<name>.svg`
/// into `dir`; returns the paths written.
pub fn emit_run(run: &ScenarioRun, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
    if run.series.is_empty() {
        return Err(Error::EmptySeries);
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = &run.config.name;
    let unit = run.window.rabi_period;
    let csv_path = dir.join(format!("{name}.csv"));
    write_csv(&run.series, unit, &csv_path)?;
    let mut written = vec![csv_path];

    let p = &run.config.params;
    let prep = &run.config.prep;
    let meta = Metadata {
        name,
        time_unit: "rabi-period",
        rabi_period: unit,
        t_collapse: run.window.t_collapse,
        t_heisenberg: run.window.t_heisenberg,
        n_max: run.n_max,
        model: ModelMeta {
            hbar: p.hbar,
            g: p.g,
            omega: p.omega,
            nu: p.nu,
            b_r: p.b_r(),
        },
        prep: PrepMeta {
            atomic: prep.atomic.to_string(),
            alpha0_re: prep.alpha0.re,
            alpha0_im: prep.alpha0.im,
            n_mean: prep.mean_photons(),
            n_mean_convention: "mean polariton number is taken as |alpha0|^2",
            action: prep.action(p.hbar),
        },
    };
    let meta_path = dir.join(format!("{name}.meta.toml"));
    let text = toml::to_string(&meta).map_err(|e| Error::io(&meta_path, std::io::Error::other(e)))?;
    fs::write(&meta_path, text).map_err(|e| Error::io(&meta_path, e))?;
    written.push(meta_path);

    if svg {
        let svg_path = dir.join(format!("{name}.svg"));
        write_svg(&run.series, unit, name, &svg_path)?;
        written.push(svg_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_series() -> Vec<TimeSeries> {
        let t = vec![0.0, 0.1, 0.2];
        vec![
            TimeSeries::new(Observable::Sigma3, Provenance::Oracle, t.clone(), vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0), C64::new(0.1, 0.0)]),
            TimeSeries::new(Observable::Sigma3, Provenance::ClosedForm, t, vec![C64::new(1.0, 0.0), C64::new(0.4, 0.0), C64::new(0.3, 0.0)]),
        ]
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_csv(&two_series(), 1.0, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "t,observable,provenance,re,im");
        assert_eq!(lines[2], "0.1,sigma3,oracle,0.5,0");
    }

    #[test]
    fn csv_roundtrips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let mut series = two_series();
        series[1].values[2] = C64::new(std::f64::consts::PI, -1e-300);
        write_csv(&series, 1.0, &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), series);
    }

    #[test]
    fn empty_input_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.csv");
        assert!(matches!(write_csv(&[], 1.0, &path), Err(Error::EmptySeries)));
        assert!(!path.exists());
        assert!(matches!(write_svg(&[], 1.0, "x", &path), Err(Error::EmptySeries)));
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("s.csv");
        assert!(matches!(write_csv(&two_series(), 1.0, &path), Err(Error::Io { .. })));
    }

    #[test]
    fn svg_draws_points_and_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.svg");
        write_svg(&two_series(), 1.0, "demo", &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("<circle").count(), 3);
        assert_eq!(text.matches("<polyline").count(), 1);
        assert!(text.trim_end().ends_with("</svg>"));
    }
}
