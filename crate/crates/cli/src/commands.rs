use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use bornbench_core::ansatz::{chow_liu_layer, embed_edges, entangler_dc2, entangler_dc4, Cnot, CouplingGraph};
use bornbench_core::bas::{bas_target_distribution, enumerate_bas, ImageShape};
use bornbench_core::kv;
use bornbench_core::metrics::{mean_kl, MetricRecord};
use bornbench_core::noise::{load_noise, LoadError, NoiseModel};
use bornbench_core::rng::purpose;
use bornbench_core::sim::output_probabilities;
use bornbench_core::train::{train_with, Checkpoint, Init, RunRecord};
use bornbench_core::Error;
use rayon::prelude::*;

use crate::error::{csv_err, input_err, io_err, CliError};
use crate::output::{checkpoint_path, prepare_run_dir, read_trajectory, RunWriter, CHECKPOINT_DIR, CONFIG_FILE};
use crate::runconfig::RunConfig;

fn load_profile(path: &Path) -> Result<NoiseModel, CliError> {
    load_noise(path).map_err(|e| match e {
        LoadError::Io(..) => CliError::Usage(e.to_string()),
        LoadError::Invalid(inner) => CliError::config(path.display().to_string(), inner),
    })
}

/// Trains `cfg` from `init` into `out`, streaming every output file.
pub fn run_training(cfg: &RunConfig, init: Init, out: &Path, force: bool, json: bool) -> Result<RunRecord, CliError> {
    cfg.training.validate().map_err(|e| CliError::config("config", e))?;
    prepare_run_dir(out, force)?;
    let cpath = out.join(CONFIG_FILE);
    fs::write(&cpath, cfg.echo()).map_err(io_err(&cpath))?;
    let target = cfg.training.target()?;
    let n_params = cfg.training.circuit()?.parameter_count();
    let mut writer = RunWriter::create(out, &target, n_params, json)?;
    let mut failure = None;
    let result = train_with(&cfg.training, init, |rec, ckpt| {
        writer.record(rec, ckpt).map_err(|e| {
            let msg = e.to_string();
            failure = Some(e);
            Error::Output(msg)
        })
    });
    let record = match (result, failure) {
        (_, Some(e)) => return Err(e),
        (r, None) => r?,
    };
    writer.finish(record.final_theta())?;
    Ok(record)
}

pub fn cmd_train(
    config: &Path,
    out: Option<&Path>,
    seed: Option<u64>,
    force: bool,
    json: bool,
) -> Result<PathBuf, CliError> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(seed) = seed {
        cfg.training.seed = seed;
    }
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.default_output_dir());
    let record = run_training(&cfg, Init::Random, &dir, force, json)?;
    if !json {
        if let Some(m) = record.min_kl() {
            println!("{}: min kl_mean {:.4} ± {:.4} at step {}", dir.display(), m.kl_mean, m.kl_std, m.step);
        }
    }
    Ok(dir)
}

pub fn load_run(dir: &Path) -> Result<RunConfig, CliError> {
    let path = dir.join(CONFIG_FILE);
    if !path.exists() {
        return Err(CliError::Usage(format!("{} is not a run directory (no {CONFIG_FILE})", dir.display())));
    }
    RunConfig::load(&path)
}

pub const DEPLOY_HEADER: [&str; 5] = ["step", "kl_mean_noiseless", "kl_std_noiseless", "kl_mean_noisy", "kl_std_noisy"];

/// Re-evaluates every recorded parameter vector with and without `noise`.
pub fn cmd_deploy(dir: &Path, noise: Option<&Path>, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let cfg = load_run(dir)?;
    let noise = match (noise, cfg.deploy_noise.as_deref()) {
        (Some(p), _) | (None, Some(p)) => load_profile(p)?,
        (None, None) => return Err(CliError::Usage("deploy needs --noise or a `deploy_noise` config key".into())),
    };
    let trajectory = read_trajectory(dir)?;
    let t = &cfg.training;
    let circuit = t.circuit()?;
    let target = t.target()?;
    let rows: Vec<[String; 5]> = trajectory
        .par_iter()
        .map(|(step, theta)| {
            let s = *step as u64;
            let clean = output_probabilities(&circuit, theta, None)?;
            let noisy = output_probabilities(&circuit, theta, Some(&noise))?;
            let a = mean_kl(&target, &clean, &t.kl, t.seed, &[purpose::DEPLOY_NOISELESS, s])?;
            let b = mean_kl(&target, &noisy, &t.kl, t.seed, &[purpose::DEPLOY_NOISY, s])?;
            Ok([step.to_string(), a.mean.to_string(), a.std.to_string(), b.mean.to_string(), b.std.to_string()])
        })
        .collect::<Result<_, Error>>()?;
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| dir.join("deploy.csv"));
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record(DEPLOY_HEADER).map_err(csv_err(&path))?;
    for r in &rows {
        w.write_record(r).map_err(csv_err(&path))?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(path)
}

/// `<KL>_i`, `<KL>_f` and `min <KL>` of a warm-start run.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmReport {
    pub start: usize,
    pub initial: MetricRecord,
    pub last: MetricRecord,
    pub min: MetricRecord,
}

impl WarmReport {
    pub fn table(&self) -> String {
        let cell = |m: &MetricRecord| format!("{:.4} ± {:.4}", m.kl_mean, m.kl_std);
        format!(
            "{:>6}  {:>18}  {:>18}  {:>18}\n{:>6}  {:>18}  {:>18}  {:>18}\n",
            "S",
            "<KL>_i",
            "<KL>_f",
            "min<KL>",
            self.start,
            cell(&self.initial),
            cell(&self.last),
            cell(&self.min)
        )
    }
}

pub fn last_checkpoint(dir: &Path) -> Option<usize> {
    fs::read_dir(dir.join(CHECKPOINT_DIR))
        .ok()?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            name.strip_prefix("ckpt_")?.strip_suffix(".txt")?.parse().ok()
        })
        .max()
}

/// Resumes the run in `dir` from its step-`step` checkpoint under `noise`
/// for `steps` further Adam steps, evaluating metrics every step.
pub fn cmd_warmstart(
    dir: &Path,
    step: usize,
    noise: &Path,
    steps: usize,
    overlay: Option<&Path>,
    out: Option<&Path>,
    force: bool,
) -> Result<(PathBuf, WarmReport), CliError> {
    let mut cfg = load_run(dir)?;
    let ckpt_path = checkpoint_path(dir, step);
    if !ckpt_path.exists() {
        let last = last_checkpoint(dir).map_or("none".to_string(), |s| s.to_string());
        return Err(CliError::Usage(format!(
            "no checkpoint at step {step} in {} (last checkpoint: {last})",
            dir.display()
        )));
    }
    let text = fs::read_to_string(&ckpt_path).map_err(io_err(&ckpt_path))?;
    let ckpt = Checkpoint::parse(&text).map_err(|e| CliError::config(ckpt_path.display().to_string(), e))?;

    cfg.training.noise = Some(load_profile(noise)?);
    cfg.training.n_steps = step + steps;
    cfg.training.metric_stride = 1;
    cfg.label = format!("{}_warm{step}", cfg.label);
    if let Some(path) = overlay {
        let text = fs::read_to_string(path).map_err(input_err(path))?;
        cfg.apply_text(&text, path.parent().unwrap_or(Path::new(".")))
            .map_err(|e| CliError::config(path.display().to_string(), e))?;
    }
    let dir_out = out.map(Path::to_path_buf).unwrap_or_else(|| dir.join(format!("warmstart_S{step}")));
    let record = run_training(&cfg, Init::Resume(ckpt), &dir_out, force, false)?;

    let mut metrics = record.metrics();
    let initial = metrics.next().cloned().expect("first step has metrics");
    let last = record.metrics().last().cloned().expect("last step has metrics");
    let min = record.min_kl().cloned().expect("metrics recorded");
    let report = WarmReport { start: step, initial, last, min };
    let path = dir_out.join("report.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record(["S", "kl_i_mean", "kl_i_std", "kl_f_mean", "kl_f_std", "min_kl_mean", "min_kl_std"])
        .map_err(csv_err(&path))?;
    let r = &report;
    w.write_record([
        r.start.to_string(),
        r.initial.kl_mean.to_string(),
        r.initial.kl_std.to_string(),
        r.last.kl_mean.to_string(),
        r.last.kl_std.to_string(),
        r.min.kl_mean.to_string(),
        r.min.kl_std.to_string(),
    ])
    .map_err(csv_err(&path))?;
    w.flush().map_err(io_err(&path))?;
    Ok((dir_out, report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedReport {
    pub edges: Vec<(Cnot, bool)>,
    pub mapping: Option<Vec<usize>>,
}

impl EmbedReport {
    pub fn local_count(&self) -> usize {
        self.edges.iter().filter(|(_, local)| *local).count()
    }

    pub fn text(&self, d_c: usize, graph: &CouplingGraph) -> String {
        let mut s = format!("design d_C={d_c} graph {} ({} vertices)\n", graph.name(), graph.n_physical());
        for (e, local) in &self.edges {
            s.push_str(&format!("edge {}->{} {}\n", e.control, e.target, if *local { "local" } else { "non-local" }));
        }
        s.push_str(&format!("local {} non-local {}\n", self.local_count(), self.edges.len() - self.local_count()));
        match &self.mapping {
            Some(m) => {
                let pairs: Vec<String> = m.iter().enumerate().map(|(l, p)| format!("{l}->{p}")).collect();
                s.push_str(&format!("mapping {}\n", pairs.join(" ")));
            }
            None => s.push_str("NOT-EMBEDDABLE\n"),
        }
        s
    }
}

/// Embeds the BAS(2,2) entangler design `d_c` into `graph`. For `d_c = 2`
/// both alternating layers must fit under one mapping; `edges` replaces the
/// Chow-Liu tree for `d_c = 3`.
pub fn embed_design(
    d_c: usize,
    graph: &CouplingGraph,
    root: usize,
    edges: Option<&[Cnot]>,
) -> Result<EmbedReport, CliError> {
    let shape = ImageShape::new(2, 2)?;
    let layer_edges: Vec<Cnot> = match d_c {
        2 => entangler_dc2(0).edges().chain(entangler_dc2(1).edges()).collect(),
        4 => entangler_dc4().edges().collect(),
        3 => match edges {
            Some(e) => e.to_vec(),
            None => chow_liu_layer(&bas_target_distribution(shape)?, root)?.tree,
        },
        other => return Err(CliError::config("--dc", Error::UnsupportedEntangler(other))),
    };
    let classified = layer_edges.iter().map(|&e| (e, shape.is_local_pair(e.control, e.target))).collect();
    let mapping = embed_edges(shape.n_pixels(), &layer_edges, graph);
    Ok(EmbedReport { edges: classified, mapping })
}

pub fn load_graph(spec: &str) -> Result<CouplingGraph, CliError> {
    if let Some(g) = CouplingGraph::preset(spec) {
        return Ok(g);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!("`{spec}` is neither a graph preset nor a file")));
    }
    let text = fs::read_to_string(path).map_err(input_err(path))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    CouplingGraph::parse(name, &text).map_err(|e| CliError::config(spec, e))
}

pub fn bas_lines(rows: usize, cols: usize) -> Result<Vec<String>, CliError> {
    let shape = ImageShape::new(rows, cols).map_err(|e| CliError::config("bas", e))?;
    Ok(enumerate_bas(shape).iter().map(|x| x.to_bitstring(shape.n_pixels())).collect())
}

/// One run of a sweep: a label and its `key = value` overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRun {
    pub label: String,
    pub overrides: Vec<(String, String)>,
}

/// A sweep file holds base config lines plus one `run key=value ...` line
/// per run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: String,
    pub runs: Vec<SweepRun>,
}

pub fn parse_sweep(text: &str) -> Result<SweepSpec, Error> {
    let mut base = String::new();
    let mut runs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        let Some(rest) = body.strip_prefix("run").filter(|r| r.is_empty() || r.starts_with(char::is_whitespace)) else {
            base.push_str(raw);
            base.push('\n');
            continue;
        };
        base.push('\n');
        let mut overrides = Vec::new();
        let mut label = format!("run_{:02}", runs.len());
        for token in rest.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected `key=value`, got `{token}`") })?;
            if k == "label" {
                label = v.to_string();
            } else {
                overrides.push((k.to_string(), v.to_string()));
            }
        }
        runs.push(SweepRun { label, overrides });
    }
    kv::parse(&base)?;
    let mut seen = BTreeSet::new();
    for r in &runs {
        if !seen.insert(r.label.clone()) {
            return Err(Error::Config(format!("duplicate sweep label `{}`", r.label)));
        }
    }
    Ok(SweepSpec { base, runs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub label: String,
    pub d_c: usize,
    pub layers: usize,
    pub shots: u64,
    pub seed: u64,
    pub result: Result<MetricRecord, String>,
}

pub const SWEEP_HEADER: [&str; 9] =
    ["label", "d_C", "L", "n_shots_train", "seed", "min_kl_mean", "min_kl_std", "min_kl_step", "status"];

pub fn cmd_sweep(path: &Path, out: Option<&Path>, force: bool) -> Result<(PathBuf, Vec<SweepRow>), CliError> {
    let text = fs::read_to_string(path).map_err(input_err(path))?;
    let ctx = path.display().to_string();
    let spec = parse_sweep(&text).map_err(|e| CliError::config(&ctx, e))?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    let mut base = RunConfig::default();
    base.apply_text(&spec.base, base_dir).map_err(|e| CliError::config(&ctx, e))?;
    let dir =
        out.map(Path::to_path_buf).unwrap_or_else(|| base.output_dir.clone().unwrap_or_else(|| PathBuf::from("sweep")));
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;

    let configs: Vec<(SweepRun, Result<RunConfig, String>)> = spec
        .runs
        .iter()
        .map(|run| {
            let mut cfg = base.clone();
            cfg.label = run.label.clone();
            let text: String = run.overrides.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
            let r = cfg
                .apply_text(&text, base_dir)
                .and_then(|_| cfg.training.validate())
                .map(|_| cfg)
                .map_err(|e| e.to_string());
            (run.clone(), r)
        })
        .collect();

    let rows: Vec<SweepRow> = configs
        .into_par_iter()
        .map(|(run, cfg)| {
            let t = cfg.as_ref().map(|c| c.training.clone()).unwrap_or_else(|_| base.training.clone());
            let result = cfg.and_then(|cfg| {
                run_training(&cfg, Init::Random, &dir.join(&run.label), force, false)
                    .map_err(|e| e.to_string())?
                    .min_kl()
                    .cloned()
                    .ok_or_else(|| "no metrics recorded".to_string())
            });
            SweepRow { label: run.label, d_c: t.d_c, layers: t.layers, shots: t.n_shots_train, seed: t.seed, result }
        })
        .collect();

    let spath = dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&spath).map_err(csv_err(&spath))?;
    w.write_record(SWEEP_HEADER).map_err(csv_err(&spath))?;
    for r in &rows {
        let (mean, std, step, status) = match &r.result {
            Ok(m) => (m.kl_mean.to_string(), m.kl_std.to_string(), m.step.to_string(), "ok".to_string()),
            Err(e) => (String::new(), String::new(), String::new(), format!("error: {e}")),
        };
        w.write_record([
            r.label.clone(),
            r.d_c.to_string(),
            r.layers.to_string(),
            r.shots.to_string(),
            r.seed.to_string(),
            mean,
            std,
            step,
            status,
        ])
        .map_err(csv_err(&spath))?;
    }
    w.flush().map_err(io_err(&spath))?;
    let tpath = dir.join("table.txt");
    fs::write(&tpath, sweep_table(&rows)).map_err(io_err(&tpath))?;

    let failed = rows.iter().filter(|r| r.result.is_err()).count();
    if failed > 0 {
        for r in rows.iter().filter(|r| r.result.is_err()) {
            eprintln!("sweep run {}: {}", r.label, r.result.as_ref().unwrap_err());
        }
        return Err(CliError::SweepFailures(failed, rows.len()));
    }
    Ok((dir, rows))
}

/// Min mean KL laid out with rows `(L, n_shots)` and columns `d_C`. Several
/// seeds of one cell are averaged.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let cols: BTreeSet<usize> = rows.iter().map(|r| r.d_c).collect();
    let mut cells: BTreeMap<(usize, u64), BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for r in rows {
        if let Ok(m) = &r.result {
            cells.entry((r.layers, r.shots)).or_default().entry(r.d_c).or_default().push(m.kl_mean);
        }
    }
    let mut s = format!("{:>4} {:>8}", "L", "N_shots");
    for c in &cols {
        s.push_str(&format!(" {:>18}", format!("d_C={c}")));
    }
    s.push('\n');
    for ((l, n), by_dc) in &cells {
        s.push_str(&format!("{l:>4} {n:>8}"));
        for c in &cols {
            let cell = match by_dc.get(c) {
                Some(v) if v.len() > 1 => {
                    let mean = v.iter().sum::<f64>() / v.len() as f64;
                    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt();
                    format!("{mean:.3} ± {sd:.3}")
                }
                Some(v) => format!("{:.3}", v[0]),
                None => "-".into(),
            };
            s.push_str(&format!(" {cell:>18}"));
        }
        s.push('\n');
    }
    s
}
