use super::run::ReplicateRecord;
use super::{Generator, Level, Scenario, ScenarioParams};
use crate::error::{Error, Result};
use crate::mcmc::ChainConfig;
use crate::models::ModelKind;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// One Table-1 line: a fitting model averaged over the successful
/// replicates of one scenario. `bias == mean - true_auc` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub generator: Generator,
    pub level: Level,
    pub fit_model: ModelKind,
    pub true_auc: f64,
    pub mean: Option<f64>,
    pub bias: Option<f64>,
    pub emse_x1000: Option<f64>,
    /// Replicates that produced a fit.
    pub replicates: usize,
    pub failed: usize,
    pub nonconverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub scenario: String,
    pub generator: Generator,
    pub level: Level,
    pub params: ScenarioParams,
    pub published_auc: f64,
    pub n0: usize,
    pub n1: usize,
    pub replicates: usize,
    pub seed: u64,
    pub chains: ChainConfig,
    pub true_auc: f64,
    pub truth_provenance: String,
    pub rows: Vec<SummaryRow>,
    pub records: Vec<ReplicateRecord>,
}

impl SimulationReport {
    pub fn row(&self, model: ModelKind) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.fit_model == model)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<Self> {
        Ok(serde_json::from_reader(input)?)
    }
}

pub(crate) fn summarize_records(s: &Scenario, models: &[ModelKind], true_auc: f64, records: &[ReplicateRecord]) -> Vec<SummaryRow> {
    models
        .iter()
        .map(|&model| {
            let mine: Vec<&ReplicateRecord> = records.iter().filter(|r| r.model == model).collect();
            let ok: Vec<(f64, f64)> = mine.iter().filter_map(|r| Some((r.auc?, r.emse?))).collect();
            let n = ok.len();
            let mean = (n > 0).then(|| ok.iter().map(|p| p.0).sum::<f64>() / n as f64);
            let emse = (n > 0).then(|| 1000.0 * ok.iter().map(|p| p.1).sum::<f64>() / n as f64);
            SummaryRow {
                generator: s.generator(),
                level: s.level,
                fit_model: model,
                true_auc,
                mean,
                bias: mean.map(|m| m - true_auc),
                emse_x1000: emse,
                replicates: n,
                failed: mine.len() - n,
                nonconverged: mine.iter().filter(|r| r.converged == Some(false)).count(),
            }
        })
        .collect()
}

const HEADER: [&str; 10] = ["generator", "level", "fit_model", "true_auc", "mean", "bias", "emse_x1000", "replicates", "failed", "nonconverged"];

fn fixed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// Six-decimal CSV with Table 1's columns plus replicate counts.
pub fn write_report_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.generator.to_string(),
            r.level.to_string(),
            r.fit_model.to_string(),
            fixed(Some(r.true_auc)),
            fixed(r.mean),
            fixed(r.bias),
            fixed(r.emse_x1000),
            r.replicates.to_string(),
            r.failed.to_string(),
            r.nonconverged.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(field: &str, name: &str) -> Result<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::input(format!("bad {name} value `{field}`")))
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>> {
    if field.trim().is_empty() {
        Ok(None)
    } else {
        parse_f64(field, name).map(Some)
    }
}

fn parse_count(field: &str, name: &str) -> Result<usize> {
    field.trim().parse().map_err(|_| Error::input(format!("bad {name} count `{field}`")))
}

fn parse_generator(s: &str) -> Result<Generator> {
    match s.trim().to_ascii_uppercase().as_str() {
        "PBN" => Ok(Generator::Pbn),
        "BG" => Ok(Generator::Bg),
        "PCN" => Ok(Generator::Pcn),
        _ => Err(Error::input(format!("unknown generator `{s}`"))),
    }
}

fn parse_level(s: &str) -> Result<Level> {
    match s.trim().to_ascii_lowercase().as_str() {
        "low" => Ok(Level::Low),
        "medium" => Ok(Level::Medium),
        "high" => Ok(Level::High),
        _ => Err(Error::input(format!("unknown level `{s}`"))),
    }
}

pub fn read_report_csv<R: Read>(input: R) -> Result<Vec<SummaryRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header != HEADER {
        return Err(Error::input(format!("report header must be `{}`", HEADER.join(","))));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(SummaryRow {
                generator: parse_generator(&rec[0])?,
                level: parse_level(&rec[1])?,
                fit_model: rec[2].parse()?,
                true_auc: parse_f64(&rec[3], "true_auc")?,
                mean: parse_opt(&rec[4], "mean")?,
                bias: parse_opt(&rec[5], "bias")?,
                emse_x1000: parse_opt(&rec[6], "emse_x1000")?,
                replicates: parse_count(&rec[7], "replicates")?,
                failed: parse_count(&rec[8], "failed")?,
                nonconverged: parse_count(&rec[9], "nonconverged")?,
            })
        })
        .collect()
}

/// Truth AUCs of shards of one scenario may differ by CSV rounding only.
const TRUTH_TOL: f64 = 1e-6;

/// Pools rows sharing (generator, level, model), weighting by successful
/// replicates, and sorts the result in registry order.
pub fn merge_reports(tables: &[Vec<SummaryRow>]) -> Result<Vec<SummaryRow>> {
    let mut merged: Vec<SummaryRow> = Vec::new();
    for row in tables.iter().flatten() {
        let key = (row.generator, row.level, row.fit_model);
        let Some(acc) = merged.iter_mut().find(|r| (r.generator, r.level, r.fit_model) == key) else {
            merged.push(row.clone());
            continue;
        };
        if (acc.true_auc - row.true_auc).abs() > TRUTH_TOL {
            return Err(Error::input(format!("{} {} {}: shards disagree on the true AUC", key.0, key.1, key.2)));
        }
        let (na, nb) = (acc.replicates as f64, row.replicates as f64);
        let pool = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => Some((na * a + nb * b) / (na + nb)),
            (a, b) => a.or(b),
        };
        acc.mean = pool(acc.mean, row.mean);
        acc.emse_x1000 = pool(acc.emse_x1000, row.emse_x1000);
        acc.bias = acc.mean.map(|m| m - acc.true_auc);
        acc.replicates += row.replicates;
        acc.failed += row.failed;
        acc.nonconverged += row.nonconverged;
    }
    let model_rank = |m: ModelKind| ModelKind::ALL.iter().position(|x| *x == m).unwrap_or(usize::MAX);
    merged.sort_by_key(|r| (r.generator, r.level, model_rank(r.fit_model)));
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::scenario;

    fn record(replicate: usize, model: ModelKind, auc: Option<f64>, converged: bool) -> ReplicateRecord {
        ReplicateRecord {
            replicate,
            model,
            seed: 0,
            auc,
            emse: auc.map(|_| 0.001),
            converged: auc.map(|_| converged),
            concavity_violations: auc.map(|_| 0),
            error: auc.is_none().then(|| "fit error: boom".to_string()),
        }
    }

    #[test]
    fn failures_are_counted_and_excluded() {
        let s = scenario("bg-low").unwrap();
        let recs = vec![record(0, ModelKind::Bn, Some(0.7), true), record(1, ModelKind::Bn, None, false), record(2, ModelKind::Bn, Some(0.8), false)];
        let rows = summarize_records(&s, &[ModelKind::Bn, ModelKind::Pcn], 0.7, &recs);
        assert_eq!((rows[0].replicates, rows[0].failed, rows[0].nonconverged), (2, 1, 1));
        assert!((rows[0].mean.unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(rows[0].bias.unwrap(), rows[0].mean.unwrap() - 0.7);
        assert!((rows[0].emse_x1000.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!((rows[1].replicates, rows[1].mean), (0, None));
    }

    #[test]
    fn csv_round_trip() {
        let s = scenario("pcn-high").unwrap();
        let recs = vec![record(0, ModelKind::Pcn, Some(0.912345678), true)];
        let rows = summarize_records(&s, &[ModelKind::Pcn, ModelKind::Spcn], 0.92, &recs);
        let mut buf = Vec::new();
        write_report_csv(&rows, &mut buf).unwrap();
        let back = read_report_csv(buf.as_slice()).unwrap();
        let mut again = Vec::new();
        write_report_csv(&back, &mut again).unwrap();
        assert_eq!(buf, again);
        assert_eq!(back[1].mean, None);
        assert!(String::from_utf8(buf).unwrap().starts_with("generator,level,fit_model,true_auc"));
    }

    #[test]
    fn merge_pools_by_replicate_weight() {
        let s = scenario("pbn-low").unwrap();
        let a = summarize_records(&s, &[ModelKind::Bn], 0.675, &[record(0, ModelKind::Bn, Some(0.6), true)]);
        let b =
            summarize_records(&s, &[ModelKind::Bn], 0.675, &[record(1, ModelKind::Bn, Some(0.7), true), record(2, ModelKind::Bn, Some(0.7), true)]);
        let m = merge_reports(&[a, b]).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].replicates, 3);
        assert!((m[0].mean.unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn merge_rejects_conflicting_truths() {
        let s = scenario("pbn-low").unwrap();
        let a = summarize_records(&s, &[ModelKind::Bn], 0.675, &[]);
        let b = summarize_records(&s, &[ModelKind::Bn], 0.7, &[]);
        assert!(merge_reports(&[a, b]).is_err());
    }
}
