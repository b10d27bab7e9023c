//! Text checkpoint format, version 1:
//!
//! ```text
//! bornbench-checkpoint 1
//! digest = <model digest of the producing config>
//! seed = <u64>
//! step = <step whose parameters are stored>
//! adam_t = <u64>
//! theta = <comma-separated f64>
//! adam_m = <comma-separated f64>
//! adam_v = <comma-separated f64>
//! ```
//!
//! Floats are written in shortest round-trip form, so parsing restores
//! them bit-exactly. All random streams are keyed by `(seed, purpose, step,
//! ...)`, so the seed is the complete RNG state.

use super::AdamState;
use crate::error::{Error, Result};
use crate::kv;

pub const CHECKPOINT_MAGIC: &str = "bornbench-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Parameters and optimizer state at the start of `step`, before that
/// step's update.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub digest: String,
    pub seed: u64,
    pub step: usize,
    pub theta: Vec<f64>,
    pub adam: AdamState,
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",")
}

fn split(key: &str, value: &str) -> Result<Vec<f64>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| kv::value(key, v.trim())).collect()
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        format!(
            "{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}\ndigest = {}\nseed = {}\nstep = {}\nadam_t = {}\ntheta = {}\nadam_m = {}\nadam_v = {}\n",
            self.digest,
            self.seed,
            self.step,
            self.adam.t,
            join(&self.theta),
            join(&self.adam.m),
            join(&self.adam.v),
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (header, body) = text.split_once('\n').unwrap_or((text, ""));
        let version = header
            .trim()
            .strip_prefix(CHECKPOINT_MAGIC)
            .map(str::trim)
            .ok_or_else(|| Error::Checkpoint("missing checkpoint header".into()))?;
        if version != CHECKPOINT_VERSION.to_string() {
            return Err(Error::Checkpoint(format!("unsupported checkpoint version `{version}`")));
        }
        let (mut digest, mut seed, mut step, mut t, mut theta, mut m, mut v) =
            (None, None, None, None, None, None, None);
        for e in kv::parse(body)? {
            let (k, val) = (e.key.as_str(), e.value.as_str());
            match k {
                "digest" => digest = Some(val.to_string()),
                "seed" => seed = Some(kv::value(k, val)?),
                "step" => step = Some(kv::value(k, val)?),
                "adam_t" => t = Some(kv::value(k, val)?),
                "theta" => theta = Some(split(k, val)?),
                "adam_m" => m = Some(split(k, val)?),
                "adam_v" => v = Some(split(k, val)?),
                _ => return Err(Error::UnknownKey(e.key)),
            }
        }
        let missing = |name: &str| Error::Checkpoint(format!("checkpoint lacks `{name}`"));
        let theta: Vec<f64> = theta.ok_or_else(|| missing("theta"))?;
        let adam = AdamState {
            t: t.ok_or_else(|| missing("adam_t"))?,
            m: m.ok_or_else(|| missing("adam_m"))?,
            v: v.ok_or_else(|| missing("adam_v"))?,
        };
        if adam.m.len() != theta.len() || adam.v.len() != theta.len() {
            return Err(Error::Checkpoint("optimizer moments and theta differ in length".into()));
        }
        Ok(Self {
            digest: digest.ok_or_else(|| missing("digest"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            step: step.ok_or_else(|| missing("step"))?,
            theta,
            adam,
        })
    }
}
