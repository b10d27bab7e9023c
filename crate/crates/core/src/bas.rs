//! Bars-and-stripes images and the uniform target distribution.
//!
//! Pixel `(r, c)` of an `rows x cols` image is qubit `r * cols + c`; black
//! pixels are `|0>` and white pixels `|1>`.

use crate::error::{Error, Result};
use crate::sim::{BasisIndex, ProbabilityVector, MAX_STATEVECTOR_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ImageShape {
    pub rows: usize,
    pub cols: usize,
}

impl ImageShape {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("image shape {rows}x{cols} is empty")));
        }
        let n = rows * cols;
        if n > MAX_STATEVECTOR_QUBITS {
            return Err(Error::RegisterTooLarge { requested: n, limit: MAX_STATEVECTOR_QUBITS });
        }
        Ok(Self { rows, cols })
    }

    pub fn n_pixels(&self) -> usize {
        self.rows * self.cols
    }

    pub fn pixel(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn pixel_coords(&self, pixel: usize) -> (usize, usize) {
        (pixel / self.cols, pixel % self.cols)
    }

    fn value(&self, x: BasisIndex, row: usize, col: usize) -> bool {
        x.bit(self.pixel(row, col), self.n_pixels())
    }

    /// True when every row is constant or every column is constant.
    pub fn is_bas(&self, x: BasisIndex) -> bool {
        let rows_constant = (0..self.rows).all(|r| (1..self.cols).all(|c| self.value(x, r, c) == self.value(x, r, 0)));
        let cols_constant = (0..self.cols).all(|c| (1..self.rows).all(|r| self.value(x, r, c) == self.value(x, 0, c)));
        rows_constant || cols_constant
    }

    /// Nearest-neighbour pixels in the image grid.
    pub fn is_local_pair(&self, a: usize, b: usize) -> bool {
        let (ra, ca) = self.pixel_coords(a);
        let (rb, cb) = self.pixel_coords(b);
        ra.abs_diff(rb) + ca.abs_diff(cb) == 1
    }

    /// Maps an image of this shape to its transpose (shape `cols x rows`).
    pub fn transpose(&self, x: BasisIndex) -> BasisIndex {
        let t = ImageShape { rows: self.cols, cols: self.rows };
        let n = self.n_pixels();
        let mut out = 0usize;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.value(x, r, c) {
                    out |= 1 << (n - 1 - t.pixel(c, r));
                }
            }
        }
        BasisIndex(out)
    }
}

/// All BAS images of `shape`, ascending by basis index. There are
/// `2^rows + 2^cols - 2` of them.
pub fn enumerate_bas(shape: ImageShape) -> Vec<BasisIndex> {
    let shape = ImageShape::new(shape.rows, shape.cols).expect("validated shape");
    let n = shape.n_pixels();
    let mut states = Vec::with_capacity((1 << shape.rows) + (1 << shape.cols));
    // constant rows
    for pattern in 0..(1usize << shape.rows) {
        let mut x = 0usize;
        for r in 0..shape.rows {
            if pattern >> (shape.rows - 1 - r) & 1 == 1 {
                for c in 0..shape.cols {
                    x |= 1 << (n - 1 - shape.pixel(r, c));
                }
            }
        }
        states.push(BasisIndex(x));
    }
    // constant columns
    for pattern in 0..(1usize << shape.cols) {
        let mut x = 0usize;
        for c in 0..shape.cols {
            if pattern >> (shape.cols - 1 - c) & 1 == 1 {
                for r in 0..shape.rows {
                    x |= 1 << (n - 1 - shape.pixel(r, c));
                }
            }
        }
        states.push(BasisIndex(x));
    }
    states.sort_unstable();
    states.dedup();
    states
}

/// Fixed target distribution `p(x)` over `n_bits`-bit strings.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetDistribution {
    probs: ProbabilityVector,
    support: Vec<BasisIndex>,
}

impl TargetDistribution {
    pub fn new(n_bits: usize, probs: Vec<f64>) -> Result<Self> {
        let probs = ProbabilityVector::new(n_bits, probs)?;
        let support =
            probs.as_slice().iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(i, _)| BasisIndex(i)).collect();
        Ok(Self { probs, support })
    }

    /// Equal mass on each of `states`.
    pub fn uniform_over(n_bits: usize, states: &[BasisIndex]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Dimension("uniform target over an empty set".into()));
        }
        let mut probs = vec![0.0; 1usize << n_bits];
        let w = 1.0 / states.len() as f64;
        for s in states {
            *probs.get_mut(s.0).ok_or_else(|| Error::Dimension(format!("state {s} out of range")))? = w;
        }
        Self::new(n_bits, probs)
    }

    pub fn n_bits(&self) -> usize {
        self.probs.n_qubits()
    }

    pub fn probs(&self) -> &[f64] {
        self.probs.as_slice()
    }

    pub fn prob(&self, x: BasisIndex) -> f64 {
        self.probs.get(x)
    }

    /// States with nonzero probability, ascending.
    pub fn support(&self) -> &[BasisIndex] {
        &self.support
    }

    pub fn as_probability_vector(&self) -> &ProbabilityVector {
        &self.probs
    }
}

/// Uniform distribution over `enumerate_bas(shape)`.
pub fn bas_target_distribution(shape: ImageShape) -> Result<TargetDistribution> {
    let shape = ImageShape::new(shape.rows, shape.cols)?;
    TargetDistribution::uniform_over(shape.n_pixels(), &enumerate_bas(shape))
}
