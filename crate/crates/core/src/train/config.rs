use sha2::{Digest, Sha256};

use super::{AdamParams, Distance, KernelSpec, SigmaConvention};
use crate::ansatz::{build_circuit, chow_liu_layer, CircuitSpec, Cnot, EntanglerLayer};
use crate::bas::{bas_target_distribution, ImageShape, TargetDistribution};
use crate::error::{Error, Result};
use crate::kv;
use crate::metrics::{KlSettings, QbasSettings};
use crate::noise::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientKind {
    #[default]
    Sampled,
    Exact,
}

/// Everything that determines a training run. Field names map onto config
/// file keys (`d_C`, `L`, `n_shots_train`, ...), see [`TrainingConfig::set`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub d_c: usize,
    pub layers: usize,
    pub rows: usize,
    pub cols: usize,
    pub chow_liu_root: usize,
    /// Explicit `d_C = 3` tree, overriding the Chow-Liu derivation.
    pub chow_liu_edges: Option<Vec<Cnot>>,
    pub n_shots_train: u64,
    pub n_steps: usize,
    pub adam: AdamParams,
    pub sigma: f64,
    pub sigma_convention: SigmaConvention,
    pub kernel: Distance,
    pub gradient: GradientKind,
    pub seed: u64,
    pub kl: KlSettings,
    /// Evaluate metrics every `metric_stride` steps (and at the first and
    /// last step of a run).
    pub metric_stride: usize,
    /// Run the qBAS protocol every `qbas_stride` steps; 0 disables it.
    pub qbas_stride: usize,
    pub qbas: QbasSettings,
    pub checkpoint_every: usize,
    pub noise: Option<NoiseModel>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            d_c: 2,
            layers: 2,
            rows: 2,
            cols: 2,
            chow_liu_root: 0,
            chow_liu_edges: None,
            n_shots_train: 2048,
            n_steps: 100,
            adam: AdamParams::default(),
            sigma: 0.1,
            sigma_convention: SigmaConvention::Variance,
            kernel: Distance::IntegerSquared,
            gradient: GradientKind::Sampled,
            seed: 0,
            kl: KlSettings::default(),
            metric_stride: 1,
            qbas_stride: 0,
            qbas: QbasSettings::default(),
            checkpoint_every: 10,
            noise: None,
        }
    }
}

/// Keys accepted by [`TrainingConfig::set`].
pub const TRAINING_KEYS: &[&str] = &[
    "d_C",
    "L",
    "rows",
    "cols",
    "chow_liu_root",
    "chow_liu_edges",
    "n_shots_train",
    "n_steps",
    "alpha",
    "beta1",
    "beta2",
    "epsilon",
    "sigma",
    "sigma_convention",
    "kernel",
    "gradient",
    "seed",
    "kl_shots",
    "kl_repeats",
    "kl_floor_scale",
    "metric_stride",
    "qbas_stride",
    "qbas_histograms",
    "qbas_shots",
    "qbas_samples",
    "qbas_resamples",
    "checkpoint_every",
];

/// Parses `0-1,0-2,1-3` into CNOTs (control first).
pub fn parse_edges(key: &str, value: &str) -> Result<Vec<Cnot>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| Error::InvalidValue { key: key.into(), msg: format!("edge `{pair}` is not `u-v`") })?;
            Ok(Cnot::new(kv::value(key, a.trim())?, kv::value(key, b.trim())?))
        })
        .collect()
}

pub fn format_edges(edges: &[Cnot]) -> String {
    edges.iter().map(|e| format!("{}-{}", e.control, e.target)).collect::<Vec<_>>().join(",")
}

impl TrainingConfig {
    /// Sets one field from its config-file key. Unknown keys are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "d_C" => self.d_c = kv::value(key, value)?,
            "L" => self.layers = kv::value(key, value)?,
            "rows" => self.rows = kv::value(key, value)?,
            "cols" => self.cols = kv::value(key, value)?,
            "chow_liu_root" => self.chow_liu_root = kv::value(key, value)?,
            "chow_liu_edges" => {
                self.chow_liu_edges = if value.is_empty() { None } else { Some(parse_edges(key, value)?) }
            }
            "n_shots_train" => self.n_shots_train = kv::value(key, value)?,
            "n_steps" => self.n_steps = kv::value(key, value)?,
            "alpha" => self.adam.alpha = kv::value(key, value)?,
            "beta1" => self.adam.beta1 = kv::value(key, value)?,
            "beta2" => self.adam.beta2 = kv::value(key, value)?,
            "epsilon" => self.adam.epsilon = kv::value(key, value)?,
            "sigma" => self.sigma = kv::value(key, value)?,
            "sigma_convention" => {
                self.sigma_convention = SigmaConvention::from_name(value).ok_or_else(|| Error::InvalidValue {
                    key: key.into(),
                    msg: format!("`{value}` (expected `variance` or `stddev`)"),
                })?
            }
            "kernel" => {
                self.kernel = Distance::from_name(value).ok_or_else(|| Error::InvalidValue {
                    key: key.into(),
                    msg: format!("`{value}` (expected `integer` or `hamming`)"),
                })?
            }
            "gradient" => {
                self.gradient = match value {
                    "sampled" => GradientKind::Sampled,
                    "exact" => GradientKind::Exact,
                    _ => {
                        return Err(Error::InvalidValue {
                            key: key.into(),
                            msg: format!("`{value}` (expected `sampled` or `exact`)"),
                        })
                    }
                }
            }
            "seed" => self.seed = kv::value(key, value)?,
            "kl_shots" => self.kl.shots = kv::value(key, value)?,
            "kl_repeats" => self.kl.repeats = kv::value(key, value)?,
            "kl_floor_scale" => self.kl.floor_scale = kv::value(key, value)?,
            "metric_stride" => self.metric_stride = kv::value(key, value)?,
            "qbas_stride" => self.qbas_stride = kv::value(key, value)?,
            "qbas_histograms" => self.qbas.histograms = kv::value(key, value)?,
            "qbas_shots" => self.qbas.shots = kv::value(key, value)?,
            "qbas_samples" => self.qbas.samples = kv::value(key, value)?,
            "qbas_resamples" => self.qbas.resamples = kv::value(key, value)?,
            "checkpoint_every" => self.checkpoint_every = kv::value(key, value)?,
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if ![0, 2, 3, 4].contains(&self.d_c) {
            return Err(Error::UnsupportedEntangler(self.d_c));
        }
        if self.n_shots_train < 2 {
            return fail(format!("n_shots_train must be at least 2, got {}", self.n_shots_train));
        }
        if self.adam.alpha.is_nan() || self.adam.alpha <= 0.0 {
            return fail(format!("alpha must be positive, got {}", self.adam.alpha));
        }
        for (name, b) in [("beta1", self.adam.beta1), ("beta2", self.adam.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return fail(format!("{name} must lie in [0, 1), got {b}"));
            }
        }
        if self.adam.epsilon.is_nan() || self.adam.epsilon <= 0.0 {
            return fail(format!("epsilon must be positive, got {}", self.adam.epsilon));
        }
        if self.sigma.is_nan() || self.sigma <= 0.0 {
            return Err(Error::InvalidBandwidth(self.sigma));
        }
        if self.kl.repeats < 2 || self.kl.shots == 0 || self.kl.floor_scale.is_nan() || self.kl.floor_scale < 0.0 {
            return fail("kl_repeats must be >= 2, kl_shots > 0 and kl_floor_scale >= 0".into());
        }
        if self.metric_stride == 0 || self.checkpoint_every == 0 {
            return fail("metric_stride and checkpoint_every must be positive".into());
        }
        if self.qbas_stride > 0
            && (self.qbas.histograms == 0 || self.qbas.shots == 0 || self.qbas.samples == 0 || self.qbas.resamples == 0)
        {
            return fail("qBAS settings must be positive".into());
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        self.circuit().map(|_| ())
    }

    pub fn shape(&self) -> Result<ImageShape> {
        ImageShape::new(self.rows, self.cols)
    }

    pub fn target(&self) -> Result<TargetDistribution> {
        bas_target_distribution(self.shape()?)
    }

    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        KernelSpec::with_convention(self.shape()?.n_pixels(), self.sigma, self.kernel, self.sigma_convention)
    }

    pub fn circuit(&self) -> Result<CircuitSpec> {
        let n = self.shape()?.n_pixels();
        if self.d_c != 3 || self.layers == 0 {
            let target = self.target()?;
            return build_circuit(n, self.d_c, self.layers, Some(&target));
        }
        let layer = match &self.chow_liu_edges {
            Some(edges) => EntanglerLayer::from_edges(n, edges)?,
            None => chow_liu_layer(&self.target()?, self.chow_liu_root)?.layer,
        };
        CircuitSpec::with_entanglers(n, vec![layer; self.layers])
    }

    /// Canonical `key = value` lines for every field, noise included as
    /// `noise.<key>` entries.
    pub fn to_entries(&self) -> Vec<(String, String)> {
        let mut e: Vec<(String, String)> = vec![
            ("d_C".into(), self.d_c.to_string()),
            ("L".into(), self.layers.to_string()),
            ("rows".into(), self.rows.to_string()),
            ("cols".into(), self.cols.to_string()),
            ("chow_liu_root".into(), self.chow_liu_root.to_string()),
            ("chow_liu_edges".into(), self.chow_liu_edges.as_deref().map(format_edges).unwrap_or_default()),
            ("n_shots_train".into(), self.n_shots_train.to_string()),
            ("n_steps".into(), self.n_steps.to_string()),
            ("alpha".into(), format!("{:e}", self.adam.alpha)),
            ("beta1".into(), format!("{:e}", self.adam.beta1)),
            ("beta2".into(), format!("{:e}", self.adam.beta2)),
            ("epsilon".into(), format!("{:e}", self.adam.epsilon)),
            ("sigma".into(), format!("{:e}", self.sigma)),
            ("sigma_convention".into(), self.sigma_convention.name().into()),
            ("kernel".into(), self.kernel.name().into()),
            (
                "gradient".into(),
                match self.gradient {
                    GradientKind::Sampled => "sampled",
                    GradientKind::Exact => "exact",
                }
                .into(),
            ),
            ("seed".into(), self.seed.to_string()),
            ("kl_shots".into(), self.kl.shots.to_string()),
            ("kl_repeats".into(), self.kl.repeats.to_string()),
            ("kl_floor_scale".into(), format!("{:e}", self.kl.floor_scale)),
            ("metric_stride".into(), self.metric_stride.to_string()),
            ("qbas_stride".into(), self.qbas_stride.to_string()),
            ("qbas_histograms".into(), self.qbas.histograms.to_string()),
            ("qbas_shots".into(), self.qbas.shots.to_string()),
            ("qbas_samples".into(), self.qbas.samples.to_string()),
            ("qbas_resamples".into(), self.qbas.resamples.to_string()),
            ("checkpoint_every".into(), self.checkpoint_every.to_string()),
        ];
        if let Some(noise) = &self.noise {
            for entry in kv::parse(&noise.to_profile()).expect("canonical profile parses") {
                e.push((format!("noise.{}", entry.key), entry.value));
            }
        }
        e
    }

    /// Digest of every field.
    pub fn digest(&self) -> String {
        digest_entries(self.to_entries().iter())
    }

    /// Digest of the fields a checkpoint must agree on to be resumed: model
    /// structure, kernel, optimizer and seed. Shot counts, step count, metric
    /// schedule and noise may change across a resume.
    pub fn model_digest(&self) -> String {
        const MODEL_KEYS: &[&str] = &[
            "d_C",
            "L",
            "rows",
            "cols",
            "chow_liu_root",
            "chow_liu_edges",
            "alpha",
            "beta1",
            "beta2",
            "epsilon",
            "sigma",
            "sigma_convention",
            "kernel",
            "gradient",
            "seed",
        ];
        let entries = self.to_entries();
        digest_entries(entries.iter().filter(|(k, _)| MODEL_KEYS.contains(&k.as_str())))
    }
}

fn digest_entries<'a>(entries: impl Iterator<Item = &'a (String, String)>) -> String {
    let mut hasher = Sha256::new();
    for (k, v) in entries {
        hasher.update(k.as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_bytes());
        hasher.update(b"\n");
    }
    hasher.finalize().iter().take(16).map(|b| format!("{b:02x}")).collect()
}
