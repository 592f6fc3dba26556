//! Dataset benchmarks and their CSV records.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::io::{load_dataset, Family};
use crate::solution::compute_gap;
use crate::solver::{ratio_f64, solve, SolverConfig};

/// Result of solving one benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub family: String,
    pub instance: String,
    pub mode: String,
    pub config: String,
    pub used_length: Option<u32>,
    pub gap: Option<Ratio<i128>>,
    pub time_s: f64,
    pub nodes: u64,
    pub error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    family: String,
    instance: String,
    mode: String,
    gap: String,
    time_s: String,
    config: String,
    used_length: String,
    gap_exact: String,
    nodes: u64,
    error: String,
}

impl From<&BenchRecord> for Row {
    fn from(r: &BenchRecord) -> Self {
        Row {
            family: r.family.clone(),
            instance: r.instance.clone(),
            mode: r.mode.clone(),
            gap: r.gap.map(|g| format!("{:.4}", ratio_f64(&g))).unwrap_or_default(),
            time_s: format!("{:.3}", r.time_s),
            config: r.config.clone(),
            used_length: r.used_length.map(|l| l.to_string()).unwrap_or_default(),
            gap_exact: r.gap.map(|g| format!("{}/{}", g.numer(), g.denom())).unwrap_or_default(),
            nodes: r.nodes,
            error: r.error.clone().unwrap_or_default(),
        }
    }
}

fn parse_ratio(s: &str) -> Result<Option<Ratio<i128>>, String> {
    if s.is_empty() {
        return Ok(None);
    }
    let (n, d) = s.split_once('/').ok_or_else(|| format!("bad ratio `{s}`"))?;
    let n: i128 = n.parse().map_err(|_| format!("bad ratio `{s}`"))?;
    let d: i128 = d.parse().map_err(|_| format!("bad ratio `{s}`"))?;
    Ok(Some(Ratio::new(n, d)))
}

impl TryFrom<Row> for BenchRecord {
    type Error = String;

    fn try_from(r: Row) -> Result<Self, Self::Error> {
        Ok(BenchRecord {
            family: r.family,
            instance: r.instance,
            mode: r.mode,
            config: r.config,
            used_length: if r.used_length.is_empty() {
                None
            } else {
                Some(r.used_length.parse().map_err(|_| "bad used_length".to_string())?)
            },
            gap: parse_ratio(&r.gap_exact)?,
            time_s: r.time_s.parse().map_err(|_| "bad time_s".to_string())?,
            nodes: r.nodes,
            error: (!r.error.is_empty()).then_some(r.error),
        })
    }
}

/// Writes records with the header
/// `family,instance,mode,gap,time_s,config,used_length,gap_exact,nodes,error`.
pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record([
        "family",
        "instance",
        "mode",
        "gap",
        "time_s",
        "config",
        "used_length",
        "gap_exact",
        "nodes",
        "error",
    ])?;
    for r in records {
        w.serialize(Row::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>, String> {
    let mut rdr = csv::Reader::from_reader(input);
    rdr.deserialize::<Row>()
        .map(|row| row.map_err(|e| e.to_string()).and_then(BenchRecord::try_from))
        .collect()
}

/// Per-family mean gap and time over successful records.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyAverage {
    pub family: String,
    pub mode: String,
    pub instances: usize,
    pub failures: usize,
    pub mean_gap: f64,
    pub mean_time_s: f64,
}

pub fn family_averages(records: &[BenchRecord]) -> Vec<FamilyAverage> {
    let mut groups: BTreeMap<(String, String), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.family.clone(), r.mode.clone())).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((family, mode), rs)| {
            let ok: Vec<_> = rs.iter().filter(|r| r.gap.is_some()).collect();
            let n = ok.len().max(1) as f64;
            FamilyAverage {
                family,
                mode,
                instances: ok.len(),
                failures: rs.len() - ok.len(),
                mean_gap: ok.iter().map(|r| ratio_f64(&r.gap.unwrap())).sum::<f64>() / n,
                mean_time_s: ok.iter().map(|r| r.time_s).sum::<f64>() / n,
            }
        })
        .collect()
}

/// Solves every instance under `root` (optionally only `families`, and at
/// most `limit` instances per family) and returns one record per instance.
/// Failures are recorded and the run continues.
pub fn run_bench(
    root: &Path,
    cfg: &SolverConfig,
    families: Option<&[Family]>,
    limit: Option<usize>,
    mut progress: impl FnMut(&BenchRecord),
) -> std::io::Result<Vec<BenchRecord>> {
    let (_, entries) = load_dataset(root)?;
    let mut per_family: BTreeMap<Family, usize> = BTreeMap::new();
    let mut records = Vec::new();
    for entry in entries {
        if families.is_some_and(|f| !f.contains(&entry.family)) {
            continue;
        }
        let seen = per_family.entry(entry.family).or_default();
        if limit.is_some_and(|l| *seen >= l) {
            continue;
        }
        *seen += 1;
        let name = match &entry.instance {
            Ok(inst) => inst.name.clone(),
            Err(_) => entry.path.display().to_string(),
        };
        let mut record = BenchRecord {
            family: entry.family.to_string(),
            instance: name,
            mode: cfg.rotation.to_string(),
            config: cfg.tag(),
            used_length: None,
            gap: None,
            time_s: 0.0,
            nodes: 0,
            error: None,
        };
        match entry.instance {
            Err(e) => record.error = Some(format!("parse: {e}")),
            Ok(inst) => {
                let start = Instant::now();
                match solve(&inst, cfg) {
                    Ok(report) => {
                        let len = report.solution.used_length;
                        record.used_length = Some(len);
                        record.gap = Some(compute_gap(len as u64, inst.total_area(), inst.strip_width as u64));
                        record.nodes = report.expansions();
                    }
                    Err(e) => record.error = Some(e.to_string()),
                }
                record.time_s = start.elapsed().as_secs_f64();
            }
        }
        progress(&record);
        records.push(record);
    }
    Ok(records)
}
