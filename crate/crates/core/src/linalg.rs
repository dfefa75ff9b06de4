//! Cholesky factorization of small symmetric positive definite systems.

use num_complex::Complex64;

/// Relative pivot threshold below which a Gram matrix is treated as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Lower-triangular factor `L` with `A = L L^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    dim: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    /// Factor a row-major symmetric matrix. Returns `None` when a pivot falls
    /// below `PIVOT_THRESHOLD` times the corresponding diagonal entry.
    pub fn factor(a: &[f64], dim: usize) -> Option<Self> {
        assert_eq!(a.len(), dim * dim);
        let mut l = vec![0.0; dim * dim];
        for j in 0..dim {
            let diag = a[j * dim + j];
            let pivot = diag - (0..j).map(|k| l[j * dim + k] * l[j * dim + k]).sum::<f64>();
            if !pivot.is_finite() || pivot <= PIVOT_THRESHOLD * diag.abs() {
                return None;
            }
            let ljj = pivot.sqrt();
            l[j * dim + j] = ljj;
            for i in j + 1..dim {
                let s = a[i * dim + j] - (0..j).map(|k| l[i * dim + k] * l[j * dim + k]).sum::<f64>();
                l[i * dim + j] = s / ljj;
            }
        }
        Some(Self { dim, lower: l })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim;
        assert_eq!(b.len(), n);
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= l[i * n + k] * y[k];
            }
            y[i] /= l[i * n + i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= l[k * n + i] * y[k];
            }
            y[i] /= l[i * n + i];
        }
        y
    }

    /// Solve with a complex right-hand side; the factor is real, so real and
    /// imaginary parts are solved independently.
    pub fn solve_complex(&self, b: &[Complex64]) -> Vec<Complex64> {
        let re: Vec<f64> = b.iter().map(|z| z.re).collect();
        let im: Vec<f64> = b.iter().map(|z| z.im).collect();
        self.solve(&re)
            .into_iter()
            .zip(self.solve(&im))
            .map(|(r, i)| Complex64::new(r, i))
            .collect()
    }
}
