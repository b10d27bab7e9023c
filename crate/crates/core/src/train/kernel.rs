use crate::error::{Error, Result};
use crate::sim::BasisIndex;

/// Distance between basis states fed to the Gaussian kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Distance {
    /// `(x - y)^2` of the integer encodings.
    #[default]
    IntegerSquared,
    /// Squared Hamming distance of the bitstrings. The resulting kernel is
    /// not positive semidefinite in general, so the MMD may be negative.
    HammingSquared,
}

impl Distance {
    pub fn eval(self, x: BasisIndex, y: BasisIndex) -> f64 {
        match self {
            Distance::IntegerSquared => (x.0 as f64 - y.0 as f64).powi(2),
            Distance::HammingSquared => ((x.0 ^ y.0).count_ones() as f64).powi(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Distance::IntegerSquared => "integer",
            Distance::HammingSquared => "hamming",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "integer" => Some(Distance::IntegerSquared),
            "hamming" => Some(Distance::HammingSquared),
            _ => None,
        }
    }
}

/// How the bandwidth enters the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SigmaConvention {
    /// `exp(-d / (2 sigma))`.
    #[default]
    Variance,
    /// `exp(-d / (2 sigma^2))`.
    StdDev,
}

impl SigmaConvention {
    pub fn name(self) -> &'static str {
        match self {
            SigmaConvention::Variance => "variance",
            SigmaConvention::StdDev => "stddev",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "variance" => Some(SigmaConvention::Variance),
            "stddev" => Some(SigmaConvention::StdDev),
            _ => None,
        }
    }
}

/// Gaussian kernel `exp(-d(x, y) / (2 sigma))` with its matrix over all
/// `2^n` basis states precomputed. By default `sigma` plays the role of a
/// variance; see [`SigmaConvention`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    sigma: f64,
    convention: SigmaConvention,
    distance: Distance,
    dim: usize,
    matrix: Vec<f64>,
}

impl KernelSpec {
    pub fn new(n_qubits: usize, sigma: f64, distance: Distance) -> Result<Self> {
        Self::with_convention(n_qubits, sigma, distance, SigmaConvention::Variance)
    }

    pub fn with_convention(
        n_qubits: usize,
        sigma: f64,
        distance: Distance,
        convention: SigmaConvention,
    ) -> Result<Self> {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidBandwidth(sigma));
        }
        let dim = 1usize << n_qubits;
        let mut spec = Self { sigma, convention, distance, dim, matrix: Vec::new() };
        let mut matrix = vec![0.0; dim * dim];
        for x in 0..dim {
            for y in 0..dim {
                matrix[x * dim + y] = spec.eval(BasisIndex(x), BasisIndex(y));
            }
        }
        spec.matrix = matrix;
        Ok(spec)
    }

    fn eval(&self, x: BasisIndex, y: BasisIndex) -> f64 {
        let denom = match self.convention {
            SigmaConvention::Variance => 2.0 * self.sigma,
            SigmaConvention::StdDev => 2.0 * self.sigma * self.sigma,
        };
        (-self.distance.eval(x, y) / denom).exp()
    }

    pub fn convention(&self) -> SigmaConvention {
        self.convention
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn distance(&self) -> Distance {
        self.distance
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.matrix[x * self.dim + y]
    }

    /// `sum_{x,y} a(x) K(x, y) b(y)`.
    pub fn expect(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut total = 0.0;
        for (x, &ax) in a.iter().enumerate() {
            if ax == 0.0 {
                continue;
            }
            let row = &self.matrix[x * self.dim..(x + 1) * self.dim];
            total += ax * row.iter().zip(b).map(|(k, by)| k * by).sum::<f64>();
        }
        total
    }
}

/// Kernel value between two basis states.
pub fn gaussian_kernel(x: BasisIndex, y: BasisIndex, spec: &KernelSpec) -> f64 {
    spec.eval(x, y)
}
