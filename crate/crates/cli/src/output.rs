//! On-disk run layout:
//!
//! ```text
//! <dir>/config.txt              loadable config echo, digests, tool version
//! <dir>/metrics.csv             one row per step (metric cells empty off-schedule)
//! <dir>/trajectory.csv          step, theta_0 .. theta_{R-1}
//! <dir>/theta_final.txt         final parameters, one per line
//! <dir>/checkpoints/ckpt_<step>.txt
//! ```

use std::fs::{self, File};
use std::path::{Path, PathBuf};

use bornbench_core::bas::TargetDistribution;
use bornbench_core::metrics::MetricRecord;
use bornbench_core::train::{Checkpoint, StepRecord};
use serde_json::{json, Map, Value};

use crate::error::{csv_err, io_err, CliError};

pub const CONFIG_FILE: &str = "config.txt";
pub const METRICS_FILE: &str = "metrics.csv";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const THETA_FILE: &str = "theta_final.txt";
pub const CHECKPOINT_DIR: &str = "checkpoints";

pub fn checkpoint_path(dir: &Path, step: usize) -> PathBuf {
    dir.join(CHECKPOINT_DIR).join(format!("ckpt_{step:06}.txt"))
}

/// Creates `dir` for a fresh run. An existing non-empty directory is an
/// error unless `force`, in which case the files a run writes are removed.
pub fn prepare_run_dir(dir: &Path, force: bool) -> Result<(), CliError> {
    if dir.exists() && fs::read_dir(dir).map_err(io_err(dir))?.next().is_some() {
        if !force {
            return Err(CliError::OutputExists(dir.to_path_buf()));
        }
        for name in [CONFIG_FILE, METRICS_FILE, TRAJECTORY_FILE, THETA_FILE, "report.csv", "deploy.csv"] {
            let p = dir.join(name);
            if p.exists() {
                fs::remove_file(&p).map_err(io_err(&p))?;
            }
        }
        let ckpts = dir.join(CHECKPOINT_DIR);
        if ckpts.exists() {
            fs::remove_dir_all(&ckpts).map_err(io_err(&ckpts))?;
        }
    }
    let ckpts = dir.join(CHECKPOINT_DIR);
    fs::create_dir_all(&ckpts).map_err(io_err(&ckpts))
}

pub fn metrics_header(target: &TargetDistribution) -> Vec<String> {
    let mut h: Vec<String> = ["step", "loss", "kl_mean", "kl_std"].iter().map(|s| s.to_string()).collect();
    for x in target.support() {
        h.push(format!("f1_{}", x.to_bitstring(target.n_bits())));
    }
    h.extend(["qbas_mean", "qbas_var", "smoothing_flag"].iter().map(|s| s.to_string()));
    h
}

pub fn metrics_row(rec: &StepRecord, n_f1: usize) -> Vec<String> {
    let mut row = vec![rec.step.to_string(), rec.loss.to_string()];
    match &rec.metrics {
        Some(m) => {
            row.push(m.kl_mean.to_string());
            row.push(m.kl_std.to_string());
            row.extend(m.f1.iter().map(|(_, f)| f.to_string()));
            match &m.qbas {
                Some(q) => {
                    row.push(q.mean.to_string());
                    row.push(q.variance.to_string());
                }
                None => row.extend([String::new(), String::new()]),
            }
            row.push(u8::from(m.smoothed).to_string());
        }
        None => row.extend(std::iter::repeat_n(String::new(), n_f1 + 5)),
    }
    row
}

pub fn metrics_json(rec: &StepRecord, n_bits: usize) -> Value {
    let metrics = rec.metrics.as_ref().map(|m: &MetricRecord| {
        let f1: Map<String, Value> = m.f1.iter().map(|(x, f)| (x.to_bitstring(n_bits), json!(f))).collect();
        json!({
            "kl_mean": m.kl_mean,
            "kl_std": m.kl_std,
            "f1": f1,
            "qbas_mean": m.qbas.map(|q| q.mean),
            "qbas_var": m.qbas.map(|q| q.variance),
            "smoothing_flag": m.smoothed,
        })
    });
    json!({ "step": rec.step, "loss": rec.loss, "metrics": metrics })
}

/// Streams `metrics.csv`, `trajectory.csv` and checkpoint files while a run
/// progresses.
pub struct RunWriter {
    dir: PathBuf,
    metrics: csv::Writer<File>,
    trajectory: csv::Writer<File>,
    n_f1: usize,
    n_bits: usize,
    json: bool,
}

impl RunWriter {
    pub fn create(dir: &Path, target: &TargetDistribution, n_params: usize, json: bool) -> Result<Self, CliError> {
        let mpath = dir.join(METRICS_FILE);
        let mut metrics = csv::Writer::from_path(&mpath).map_err(csv_err(&mpath))?;
        metrics.write_record(metrics_header(target)).map_err(csv_err(&mpath))?;
        let tpath = dir.join(TRAJECTORY_FILE);
        let mut trajectory = csv::Writer::from_path(&tpath).map_err(csv_err(&tpath))?;
        let mut header = vec!["step".to_string()];
        header.extend((0..n_params).map(|i| format!("theta_{i}")));
        trajectory.write_record(&header).map_err(csv_err(&tpath))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            metrics,
            trajectory,
            n_f1: target.support().len(),
            n_bits: target.n_bits(),
            json,
        })
    }

    pub fn record(&mut self, rec: &StepRecord, ckpt: Option<&Checkpoint>) -> Result<(), CliError> {
        let mpath = self.dir.join(METRICS_FILE);
        self.metrics.write_record(metrics_row(rec, self.n_f1)).map_err(csv_err(&mpath))?;
        let tpath = self.dir.join(TRAJECTORY_FILE);
        let mut row = vec![rec.step.to_string()];
        row.extend(rec.theta.iter().map(|t| t.to_string()));
        self.trajectory.write_record(&row).map_err(csv_err(&tpath))?;
        if let Some(c) = ckpt {
            let path = checkpoint_path(&self.dir, c.step);
            fs::write(&path, c.to_text()).map_err(io_err(&path))?;
        }
        if self.json {
            println!("{}", metrics_json(rec, self.n_bits));
        }
        Ok(())
    }

    pub fn finish(mut self, final_theta: &[f64]) -> Result<(), CliError> {
        let mpath = self.dir.join(METRICS_FILE);
        self.metrics.flush().map_err(io_err(&mpath))?;
        let tpath = self.dir.join(TRAJECTORY_FILE);
        self.trajectory.flush().map_err(io_err(&tpath))?;
        let path = self.dir.join(THETA_FILE);
        let text: String = final_theta.iter().map(|t| format!("{t}\n")).collect();
        fs::write(&path, text).map_err(io_err(&path))
    }
}

/// Reads `trajectory.csv` back as `(step, theta)` rows.
pub fn read_trajectory(dir: &Path) -> Result<Vec<(usize, Vec<f64>)>, CliError> {
    let path = dir.join(TRAJECTORY_FILE);
    if !path.exists() {
        return Err(CliError::Usage(format!("{} has no {TRAJECTORY_FILE}", dir.display())));
    }
    let mut reader = csv::Reader::from_path(&path).map_err(csv_err(&path))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err(&path))?;
        let bad = |what: &str| CliError::Usage(format!("{}: row {}: bad {what}", path.display(), i + 2));
        let step = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(|| bad("step"))?;
        let theta =
            rec.iter().skip(1).map(|s| s.parse::<f64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("angle"))?;
        rows.push((step, theta));
    }
    Ok(rows)
}
