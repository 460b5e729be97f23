//! Timing sweeps over seeded random graphs.
//!
//! A [`BenchConfig`] describes a grid of models, parameters, sizes and trials.
//! Each graph is generated once per `(model, param, n, trial)` and handed to
//! every method whose size list contains `n`. Only the robustness computation
//! is timed.
//!
//! Records are written as CSV with the header
//!
//! ```text
//! model,n,param,seed,trial,method,r_max,elapsed_ms,search_count,status
//! ```
//!
//! `r_max` is empty for a timed-out trial, whose `elapsed_ms` is the limit.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compute::{compute_rmax, ComputeOptions, Method, OutcomeStatus};
use crate::error::{Error, Result};
use crate::generators::{GenSpec, GraphModel, ModelParam};

pub const CSV_HEADER: [&str; 10] = [
    "model",
    "n",
    "param",
    "seed",
    "trial",
    "method",
    "r_max",
    "elapsed_ms",
    "search_count",
    "status",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordStatus {
    Ok,
    Timeout,
}

impl RecordStatus {
    pub fn name(&self) -> &'static str {
        match self {
            RecordStatus::Ok => "ok",
            RecordStatus::Timeout => "timeout",
        }
    }
}

impl fmt::Display for RecordStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for RecordStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(RecordStatus::Ok),
            "timeout" => Ok(RecordStatus::Timeout),
            other => Err(Error::InvalidParameter(format!("unknown status `{other}`"))),
        }
    }
}

/// One timed run of one method on one generated graph.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub model: GraphModel,
    pub n: usize,
    pub param: ModelParam,
    pub seed: u64,
    pub trial: u32,
    pub method: Method,
    pub r_max: Option<u32>,
    pub elapsed_ms: f64,
    /// B&B nodes for MILP, subset pairs for exhaustive.
    pub search_count: u64,
    pub status: RecordStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub models: Vec<GraphModel>,
    /// Edge probabilities for `erdos` and `digraph`.
    pub p: Vec<f64>,
    /// Degrees for `kin` and `kout`.
    pub k: Vec<usize>,
    pub exhaustive_sizes: Vec<usize>,
    pub milp_sizes: Vec<usize>,
    pub trials: u32,
    /// Trial `t` uses seed `seed + t`.
    pub seed: u64,
    pub timeout_secs: f64,
    pub symmetry_break: bool,
    /// Run trials on the rayon pool. Records keep grid order either way.
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            models: GraphModel::ALL.to_vec(),
            p: vec![0.3, 0.5, 0.8],
            k: vec![3, 4, 5],
            exhaustive_sizes: (7..=15).collect(),
            milp_sizes: (7..=15).chain(18..=30).collect(),
            trials: 100,
            seed: 0,
            timeout_secs: 300.0,
            symmetry_break: true,
            parallel: false,
        }
    }
}

impl BenchConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::InvalidParameter(format!("bad config: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    fn sizes(&self, method: Method) -> &[usize] {
        match method {
            Method::Exhaustive => &self.exhaustive_sizes,
            Method::Milp => &self.milp_sizes,
        }
    }

    /// Generator specs in grid order: model, then parameter, then `n`, then trial.
    pub fn specs(&self) -> Result<Vec<(GenSpec, u32)>> {
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "timeout_secs = {} must be positive",
                self.timeout_secs
            )));
        }
        let mut sizes: Vec<usize> = self
            .exhaustive_sizes
            .iter()
            .chain(&self.milp_sizes)
            .copied()
            .collect();
        sizes.sort_unstable();
        sizes.dedup();
        let mut out = Vec::new();
        for &model in &self.models {
            let params: Vec<ModelParam> = if model.uses_k() {
                self.k.iter().map(|&k| ModelParam::K(k)).collect()
            } else {
                self.p.iter().map(|&p| ModelParam::P(p)).collect()
            };
            for &param in &params {
                for &n in &sizes {
                    for trial in 0..self.trials {
                        let spec = GenSpec {
                            model,
                            n,
                            param,
                            seed: self.seed.wrapping_add(trial as u64),
                        };
                        spec.validate()?;
                        out.push((spec, trial));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn run_trial(cfg: &BenchConfig, spec: &GenSpec, trial: u32) -> Result<Vec<BenchRecord>> {
    let graph = spec.generate()?;
    let mut out = Vec::new();
    for method in [Method::Milp, Method::Exhaustive] {
        if !cfg.sizes(method).contains(&spec.n) {
            continue;
        }
        let opts = ComputeOptions {
            method,
            timeout: Some(cfg.timeout()),
            symmetry_break: cfg.symmetry_break,
            ..Default::default()
        };
        let outcome = compute_rmax(&graph, &opts)?;
        let timed_out = outcome.status == OutcomeStatus::Timeout;
        out.push(BenchRecord {
            model: spec.model,
            n: spec.n,
            param: spec.param,
            seed: spec.seed,
            trial,
            method,
            r_max: outcome.r_max(),
            elapsed_ms: if timed_out {
                cfg.timeout_secs * 1000.0
            } else {
                outcome.elapsed.as_secs_f64() * 1000.0
            },
            search_count: outcome.search_count,
            status: if timed_out {
                RecordStatus::Timeout
            } else {
                RecordStatus::Ok
            },
        });
    }
    Ok(out)
}

/// Runs the whole grid and returns the records in grid order.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.parallel {
        let specs = cfg.specs()?;
        let chunks = specs
            .par_iter()
            .map(|(spec, trial)| run_trial(cfg, spec, *trial))
            .collect::<Result<Vec<_>>>()?;
        Ok(chunks.into_iter().flatten().collect())
    } else {
        let mut out = Vec::new();
        run_benchmark_each(cfg, |r| out.push(r.clone()))?;
        Ok(out)
    }
}

/// Sequential run that hands each record to `sink` as soon as it is timed.
pub fn run_benchmark_each(cfg: &BenchConfig, mut sink: impl FnMut(&BenchRecord)) -> Result<()> {
    for (spec, trial) in cfg.specs()? {
        for r in run_trial(cfg, &spec, trial)? {
            sink(&r);
        }
    }
    Ok(())
}

fn record_fields(r: &BenchRecord) -> [String; 10] {
    [
        r.model.to_string(),
        r.n.to_string(),
        r.param.to_string(),
        r.seed.to_string(),
        r.trial.to_string(),
        r.method.to_string(),
        r.r_max.map(|v| v.to_string()).unwrap_or_default(),
        r.elapsed_ms.to_string(),
        r.search_count.to_string(),
        r.status.to_string(),
    ]
}

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(wrap)?;
    for r in records {
        w.write_record(record_fields(r)).map_err(wrap)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))
}

pub fn to_csv_string(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn emit_csv(path: impl AsRef<Path>, records: &[BenchRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(std::io::BufWriter::new(file), records).map_err(|e| match e {
        Error::InvalidParameter(message) => Error::Format {
            path: path.to_path_buf(),
            message,
        },
        e => e,
    })
}

fn field<T: FromStr>(rec: &csv::StringRecord, idx: usize, line: usize) -> Result<T> {
    let raw = rec.get(idx).unwrap_or("");
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad {} `{raw}`", CSV_HEADER[idx]),
    })
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{}`", CSV_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        let model: GraphModel = rec[0].parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad model `{}`", &rec[0]),
        })?;
        let param = if model.uses_k() {
            ModelParam::K(field(&rec, 2, line)?)
        } else {
            ModelParam::P(field(&rec, 2, line)?)
        };
        let r_max = match &rec[6] {
            "" => None,
            _ => Some(field(&rec, 6, line)?),
        };
        out.push(BenchRecord {
            model,
            n: field(&rec, 1, line)?,
            param,
            seed: field(&rec, 3, line)?,
            trial: field(&rec, 4, line)?,
            method: field(&rec, 5, line)?,
            r_max,
            elapsed_ms: field(&rec, 7, line)?,
            search_count: field(&rec, 8, line)?,
            status: field(&rec, 9, line)?,
        });
    }
    Ok(out)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<BenchRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

/// Per-`n` spread of elapsed times within one series.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadPoint {
    pub n: usize,
    pub min_ms: f64,
    pub median_ms: f64,
    pub max_ms: f64,
    pub count: usize,
    pub timeouts: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub model: GraphModel,
    pub param: ModelParam,
    pub method: Method,
    pub points: Vec<SpreadPoint>,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// Groups records by `(model, param, method)` in first-seen order.
pub fn series(records: &[BenchRecord]) -> Vec<Series> {
    let mut out: Vec<Series> = Vec::new();
    let mut samples: Vec<Vec<(usize, f64, bool)>> = Vec::new();
    for r in records {
        let idx = match out
            .iter()
            .position(|s| s.model == r.model && s.param == r.param && s.method == r.method)
        {
            Some(i) => i,
            None => {
                out.push(Series {
                    model: r.model,
                    param: r.param,
                    method: r.method,
                    points: Vec::new(),
                });
                samples.push(Vec::new());
                out.len() - 1
            }
        };
        samples[idx].push((r.n, r.elapsed_ms, r.status == RecordStatus::Timeout));
    }
    for (s, mut pts) in out.iter_mut().zip(samples) {
        pts.sort_by_key(|p| p.0);
        for group in pts.chunk_by(|a, b| a.0 == b.0) {
            let mut times: Vec<f64> = group.iter().map(|p| p.1).collect();
            let med = median(&mut times);
            s.points.push(SpreadPoint {
                n: group[0].0,
                min_ms: times[0],
                median_ms: med,
                max_ms: times[times.len() - 1],
                count: group.len(),
                timeouts: group.iter().filter(|p| p.2).count(),
            });
        }
    }
    out
}

/// Whitespace-separated blocks, one per series, separated by two blank lines.
pub fn plotdata_string(records: &[BenchRecord]) -> String {
    let mut s = String::new();
    for (i, ser) in series(records).iter().enumerate() {
        if i > 0 {
            s.push_str("\n\n");
        }
        s.push_str(&format!(
            "# model={} param={} method={}\n# n min_ms median_ms max_ms count timeouts\n",
            ser.model, ser.param, ser.method
        ));
        for p in &ser.points {
            s.push_str(&format!(
                "{} {} {} {} {} {}\n",
                p.n, p.min_ms, p.median_ms, p.max_ms, p.count, p.timeouts
            ));
        }
    }
    s
}

pub fn emit_plotdata(path: impl AsRef<Path>, records: &[BenchRecord]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, plotdata_string(records)).map_err(|e| Error::io(path, e))
}

/// Outcome of comparing the two methods over a seeded family of graphs.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub graphs_checked: usize,
    /// `(spec, milp value, exhaustive value)` for each disagreement.
    pub mismatches: Vec<(GenSpec, u32, u32)>,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs both methods on every model for `n` in `2..=n_max`, with
/// `p` in {0.3, 0.5, 0.8} or `k` in {3, 4} (where `k < n`), seeds
/// `seed..seed + trials`.
pub fn verify_equivalence(n_max: usize, trials: u32, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for model in GraphModel::ALL {
        let params: Vec<ModelParam> = if model.uses_k() {
            vec![ModelParam::K(3), ModelParam::K(4)]
        } else {
            vec![ModelParam::P(0.3), ModelParam::P(0.5), ModelParam::P(0.8)]
        };
        for param in params {
            for n in 2..=n_max {
                for t in 0..trials {
                    let spec = GenSpec {
                        model,
                        n,
                        param,
                        seed: seed.wrapping_add(t as u64),
                    };
                    if spec.validate().is_err() {
                        continue;
                    }
                    let g = spec.generate()?;
                    let run = |method| {
                        let opts = ComputeOptions {
                            method,
                            ..Default::default()
                        };
                        compute_rmax(&g, &opts).and_then(|o| {
                            o.r_max().ok_or(Error::Numerical("no exact value".into()))
                        })
                    };
                    let milp = run(Method::Milp)?;
                    let exhaustive = run(Method::Exhaustive)?;
                    report.graphs_checked += 1;
                    if milp != exhaustive {
                        report.mismatches.push((spec, milp, exhaustive));
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(method: Method, n: usize, ms: f64) -> BenchRecord {
        BenchRecord {
            model: GraphModel::Digraph,
            n,
            param: ModelParam::P(0.5),
            seed: 3,
            trial: 0,
            method,
            r_max: Some(2),
            elapsed_ms: ms,
            search_count: 17,
            status: RecordStatus::Ok,
        }
    }

    fn small(trials: u32) -> BenchConfig {
        BenchConfig {
            models: vec![GraphModel::Digraph],
            p: vec![0.5],
            k: vec![],
            exhaustive_sizes: (7..=10).collect(),
            milp_sizes: (7..=10).collect(),
            trials,
            ..Default::default()
        }
    }

    #[test]
    fn small_grid_matches_across_methods() {
        let recs = run_benchmark(&small(5)).unwrap();
        assert_eq!(recs.len(), 40);
        for pair in recs.chunks(2) {
            assert_eq!(pair[0].method, Method::Milp);
            assert_eq!(pair[1].method, Method::Exhaustive);
            assert_eq!(pair[0].seed, pair[1].seed);
            assert!(pair[0].r_max.is_some());
            assert_eq!(pair[0].r_max, pair[1].r_max);
        }
    }

    #[test]
    fn parallel_keeps_grid_order() {
        let seq = run_benchmark(&small(3)).unwrap();
        let par = run_benchmark(&BenchConfig {
            parallel: true,
            ..small(3)
        })
        .unwrap();
        let key = |r: &BenchRecord| (r.n, r.trial, r.method, r.r_max, r.search_count);
        assert_eq!(
            seq.iter().map(key).collect::<Vec<_>>(),
            par.iter().map(key).collect::<Vec<_>>()
        );
    }

    #[test]
    fn empty_grid_gives_header_only() {
        let cfg = BenchConfig {
            models: vec![],
            ..Default::default()
        };
        let recs = run_benchmark(&cfg).unwrap();
        assert!(recs.is_empty());
        let csv = to_csv_string(&recs);
        assert_eq!(csv, format!("{}\n", CSV_HEADER.join(",")));
        assert_eq!(parse_csv(&csv).unwrap(), recs);
    }

    #[test]
    fn one_record_two_lines() {
        let csv = to_csv_string(&[record(Method::Milp, 8, 1.25)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], "digraph,8,0.5,3,0,milp,2,1.25,17,ok");
    }

    #[test]
    fn timeout_row_kept() {
        let cfg = BenchConfig {
            models: vec![GraphModel::Digraph],
            p: vec![0.5],
            exhaustive_sizes: vec![26],
            milp_sizes: vec![],
            trials: 1,
            timeout_secs: 0.05,
            ..Default::default()
        };
        let recs = run_benchmark(&cfg).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].status, RecordStatus::Timeout);
        assert_eq!(recs[0].r_max, None);
        assert_eq!(recs[0].elapsed_ms, 50.0);
        let csv = to_csv_string(&recs);
        assert!(csv.lines().nth(1).unwrap().contains(",exhaustive,,50,"));
        assert_eq!(parse_csv(&csv).unwrap(), recs);
    }

    #[test]
    fn plotdata_two_series() {
        let recs = vec![
            record(Method::Milp, 7, 1.0),
            record(Method::Exhaustive, 7, 2.0),
            record(Method::Milp, 7, 3.0),
            record(Method::Milp, 8, 5.0),
        ];
        let s = series(&recs);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].points.len(), 2);
        assert_eq!(s[0].points[0].median_ms, 2.0);
        assert_eq!(s[0].points[0].min_ms, 1.0);
        assert_eq!(s[0].points[0].max_ms, 3.0);
        let text = plotdata_string(&recs);
        assert_eq!(text.matches("# model=").count(), 2);
    }

    #[test]
    fn config_toml() {
        let cfg = BenchConfig::from_toml_str(
            "models = [\"kout\"]\nk = [4]\nexhaustive_sizes = [7, 8]\ntrials = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.models, vec![GraphModel::Kout]);
        assert_eq!(cfg.timeout_secs, 300.0);
        // sizes 7..=15 and 18..=30 from the default MILP list, two trials each
        assert_eq!(cfg.specs().unwrap().len(), 44);
        let back = BenchConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);
        assert!(BenchConfig::from_toml_str("bogus = 1").is_err());
        let bad = BenchConfig {
            k: vec![9],
            ..cfg
        };
        assert!(bad.specs().is_err());
    }

    #[test]
    fn verify_small() {
        let report = verify_equivalence(6, 3, 11).unwrap();
        assert!(report.all_match());
        assert!(report.graphs_checked > 50);
    }

    #[test]
    fn default_grid() {
        let cfg = BenchConfig::default();
        assert_eq!(cfg.trials, 100);
        assert_eq!(*cfg.exhaustive_sizes.last().unwrap(), 15);
        assert!(cfg.milp_sizes.contains(&18) && cfg.milp_sizes.contains(&30));
        assert_eq!(cfg.timeout(), Duration::from_secs(300));
    }
}
