//! Run configuration files: every training key plus `label`, `output_dir`,
//! `noise` (profile path), `deploy_noise` (profile path) and inline
//! `noise.<key>` profile entries.

use std::fs;
use std::path::{Path, PathBuf};

use bornbench_core::kv;
use bornbench_core::noise::NoiseModel;
use bornbench_core::train::TrainingConfig;
use bornbench_core::Error;

use crate::error::{input_err, CliError};

pub const RUN_KEYS: &[&str] = &["label", "output_dir", "noise", "deploy_noise"];
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub training: TrainingConfig,
    pub label: String,
    pub output_dir: Option<PathBuf>,
    pub deploy_noise: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { training: TrainingConfig::default(), label: "run".into(), output_dir: None, deploy_noise: None }
    }
}

fn resolve(base: &Path, value: &str) -> PathBuf {
    let p = Path::new(value);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(input_err(path))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut cfg = Self::default();
        cfg.apply_text(&text, base).map_err(|e| CliError::config(path.display().to_string(), e))?;
        cfg.training.validate().map_err(|e| CliError::config(path.display().to_string(), e))?;
        Ok(cfg)
    }

    /// Applies `key = value` lines on top of the current values. Relative
    /// paths resolve against `base`.
    pub fn apply_text(&mut self, text: &str, base: &Path) -> Result<(), Error> {
        let entries = kv::parse(text)?;
        let mut inline_noise = String::new();
        let mut noise_file = None;
        for e in entries {
            let at_line = |err: Error| Error::Parse { line: e.line, msg: err.to_string() };
            match e.key.as_str() {
                "label" => self.label = e.value.clone(),
                "output_dir" => self.output_dir = Some(resolve(base, &e.value)),
                "deploy_noise" => self.deploy_noise = Some(resolve(base, &e.value)),
                "noise" => noise_file = Some(resolve(base, &e.value)),
                key if key.starts_with("noise.") => {
                    inline_noise.push_str(&format!("{} = {}\n", &key["noise.".len()..], e.value));
                }
                key => self.training.set(key, &e.value).map_err(at_line)?,
            }
        }
        match (noise_file, inline_noise.is_empty()) {
            (Some(_), false) => return Err(Error::Config("give either `noise` or inline `noise.*` keys".into())),
            (Some(path), true) => {
                let text = fs::read_to_string(&path).map_err(|err| Error::InvalidValue {
                    key: "noise".into(),
                    msg: format!("{}: {err}", path.display()),
                })?;
                self.training.noise = Some(NoiseModel::parse(&text)?);
            }
            (None, false) => self.training.noise = Some(NoiseModel::parse(&inline_noise)?),
            (None, true) => {}
        }
        Ok(())
    }

    /// Canonical text form: a loadable config with the digests and tool
    /// version in comment lines.
    pub fn echo(&self) -> String {
        let mut s = format!(
            "# bornbench {TOOL_VERSION}\n# digest = {}\n# model_digest = {}\nlabel = {}\n",
            self.training.digest(),
            self.training.model_digest(),
            self.label
        );
        for (k, v) in self.training.to_entries() {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    pub fn default_output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| Path::new("runs").join(&self.label))
    }
}
