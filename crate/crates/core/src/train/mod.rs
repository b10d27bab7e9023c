//! MMD training of the circuit Born machine.

mod adam;
mod checkpoint;
mod config;
mod kernel;
mod mmd;
mod trainer;

pub use adam::{adam_step, AdamParams, AdamState};
pub use checkpoint::{Checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use config::{format_edges, parse_edges, GradientKind, TrainingConfig, TRAINING_KEYS};
pub use kernel::{gaussian_kernel, Distance, KernelSpec, SigmaConvention};
pub use mmd::{mmd_gradient, mmd_loss, mmd_loss_exact, GradientMode, MmdGradient};
pub use trainer::{random_theta, train, train_with, Init, RunRecord, StepRecord};
