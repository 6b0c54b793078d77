use crate::error::{Error, Result};
use crate::models::{ModelFit, ModelKind};
use crate::roc::{write_curve_csv, RocCurve};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub fn write_fit_json<W: Write>(fit: &ModelFit, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, fit)?;
    Ok(())
}

pub fn read_fit_json<R: Read>(input: R) -> Result<ModelFit> {
    Ok(serde_json::from_reader(input)?)
}

/// One line of the AUC summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AucRow {
    pub model: ModelKind,
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub q975: f64,
    pub converged: bool,
    pub concavity_violations: usize,
}

impl AucRow {
    pub fn of(fit: &ModelFit) -> Self {
        Self {
            model: fit.model,
            mean: fit.auc.mean,
            sd: fit.auc.sd,
            q025: fit.auc.q025,
            q975: fit.auc.q975,
            converged: fit.converged(),
            concavity_violations: fit.concavity_violations,
        }
    }
}

const AUC_HEADER: [&str; 7] = ["model", "mean", "sd", "q025", "q975", "converged", "concavity_violations"];

pub fn write_auc_table<W: Write>(rows: &[AucRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(AUC_HEADER)?;
    for r in rows {
        w.write_record([
            r.model.to_string(),
            format!("{:.6}", r.mean),
            format!("{:.6}", r.sd),
            format!("{:.6}", r.q025),
            format!("{:.6}", r.q975),
            r.converged.to_string(),
            r.concavity_violations.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_auc_table<R: Read>(input: R) -> Result<Vec<AucRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    if rdr.headers()?.iter().ne(AUC_HEADER) {
        return Err(Error::input(format!("AUC table header must be `{}`", AUC_HEADER.join(","))));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let num = |i: usize| rec[i].parse::<f64>().map_err(|_| Error::input(format!("bad {} `{}`", AUC_HEADER[i], &rec[i])));
            Ok(AucRow {
                model: rec[0].parse()?,
                mean: num(1)?,
                sd: num(2)?,
                q025: num(3)?,
                q975: num(4)?,
                converged: rec[5].parse().map_err(|_| Error::input(format!("bad converged flag `{}`", &rec[5])))?,
                concavity_violations: rec[6].parse().map_err(|_| Error::input(format!("bad violation count `{}`", &rec[6])))?,
            })
        })
        .collect()
}

const SIZE: f64 = 420.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

/// Static overlay of ROC curves on the unit square with the chance line.
pub fn render_svg(curves: &[(String, &RocCurve)]) -> String {
    let px = |t: f64| MARGIN + t * SIZE;
    let py = |v: f64| MARGIN + (1.0 - v) * SIZE;
    let full = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>"#);
    let _ = writeln!(s, r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888" stroke-dasharray="5,4"/>"##, px(0.0), py(0.0), px(1.0), py(1.0));
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{tick}</text>"#, px(tick), py(0.0) + 16.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{tick}</text>"#, px(0.0) - 6.0, py(tick) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">false-positive rate</text>"#, px(0.5), full - 8.0);
    let _ = writeln!(s, r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">true-positive rate</text>"#, py(0.5), py(0.5));
    for (i, (label, curve)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = curve.grid().iter().zip(curve.values()).map(|(t, v)| format!("{:.2},{:.2}", px(*t), py(*v))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#, points.join(" "));
        let y = py(0.0) - 12.0 - 16.0 * (curves.len() - 1 - i) as f64;
        let _ = writeln!(s, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="3"/>"#, px(0.62), px(0.68));
        let _ = writeln!(s, r#"<text x="{}" y="{}">{} (AUC {:.3})</text>"#, px(0.7), y + 4.0, escape(label), curve.auc());
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn file_stem(model: ModelKind) -> String {
    model.id().to_ascii_lowercase()
}

/// Paths written by [`write_fit_artifacts`], in writing order.
pub fn fit_artifact_paths(dir: &Path, models: &[ModelKind]) -> Vec<PathBuf> {
    let mut paths = Vec::new();
    for m in models {
        paths.push(dir.join(format!("{}_fit.json", file_stem(*m))));
        paths.push(dir.join(format!("{}_roc.csv", file_stem(*m))));
    }
    paths.push(dir.join("auc_summary.csv"));
    paths.push(dir.join("roc_overlay.svg"));
    paths
}

/// Per-model fit JSON and ROC CSV, the AUC table and the SVG overlay.
pub fn write_fit_artifacts(dir: &Path, fits: &[ModelFit]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let models: Vec<ModelKind> = fits.iter().map(|f| f.model).collect();
    let paths = fit_artifact_paths(dir, &models);
    for (fit, pair) in fits.iter().zip(paths.chunks(2)) {
        write_fit_json(fit, fs::File::create(&pair[0])?)?;
        write_curve_csv(&fit.roc, fs::File::create(&pair[1])?)?;
    }
    let rows: Vec<AucRow> = fits.iter().map(AucRow::of).collect();
    write_auc_table(&rows, fs::File::create(&paths[paths.len() - 2])?)?;
    let curves: Vec<(String, &RocCurve)> = fits.iter().map(|f| (f.model.to_string(), &f.roc)).collect();
    fs::write(&paths[paths.len() - 1], render_svg(&curves))?;
    Ok(paths)
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}
