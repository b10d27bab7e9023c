use num_complex::Complex64;

/// Dense operator on 1 or 2 qubits (2x2 or 4x4, row-major).
///
/// For two-qubit operators the first listed qubit is the more significant
/// bit of the local index.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn single(m: [[Complex64; 2]; 2]) -> Self {
        Self { dim: 2, data: m.iter().flatten().copied().collect() }
    }

    /// Builds an operator from a row-major buffer. `data.len()` must be a
    /// square of a power of two.
    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim, "operator buffer is not {dim}x{dim}");
        assert!(dim.is_power_of_two() && dim >= 2);
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, data }
    }

    /// Pauli matrix by index: 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub fn pauli(k: usize) -> Self {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match k {
            0 => Self::single([[o, z], [z, o]]),
            1 => Self::single([[z, o], [o, z]]),
            2 => Self::single([[z, -i], [i, z]]),
            3 => Self::single([[o, z], [z, -o]]),
            _ => panic!("Pauli index {k} out of range"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn kron(&self, other: &Operator) -> Self {
        let dim = self.dim * other.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (r1, c1) in (0..self.dim).flat_map(|r| (0..self.dim).map(move |c| (r, c))) {
            let a = self.get(r1, c1);
            for (r2, c2) in (0..other.dim).flat_map(|r| (0..other.dim).map(move |c| (r, c))) {
                data[(r1 * other.dim + r2) * dim + c1 * other.dim + c2] = a * other.get(r2, c2);
            }
        }
        Self { dim, data }
    }

    pub fn adjoint(&self) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); self.data.len()];
        for r in 0..self.dim {
            for c in 0..self.dim {
                data[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        Self { dim: self.dim, data }
    }

    pub fn matmul(&self, other: &Operator) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                for c in 0..d {
                    data[r * d + c] += a * other.get(k, c);
                }
            }
        }
        Self { dim: d, data }
    }

    pub fn add(&self, other: &Operator) -> Self {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}
