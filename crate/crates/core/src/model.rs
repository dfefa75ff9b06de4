//! Sampled signals, polynomial trend bases, design matrices and abscissa moments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observed signal: values `v_i` taken at real abscissas `x_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    abscissas: Vec<f64>,
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(abscissas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if abscissas.len() != values.len() {
            return Err(Error::LengthMismatch {
                abscissas: abscissas.len(),
                values: values.len(),
            });
        }
        if abscissas.is_empty() {
            return Err(Error::EmptySamples);
        }
        if let Some(index) = abscissas.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { field: "abscissa", index });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { field: "value", index });
        }
        Ok(Self { abscissas, values })
    }

    pub fn abscissas(&self) -> &[f64] {
        &self.abscissas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.abscissas.len()
    }

    /// Always false: construction rejects empty sets.
    pub fn is_empty(&self) -> bool {
        self.abscissas.is_empty()
    }

    pub fn distinct_abscissas(&self) -> usize {
        distinct_count(&self.abscissas)
    }

    /// Arithmetic mean of the values.
    pub fn mean_value(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn moments(&self) -> MomentSummary {
        MomentSummary::of(&self.abscissas)
    }
}

pub(crate) fn distinct_count(xs: &[f64]) -> usize {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    sorted.len()
}

/// Monomial trend `f_k(x) = x^k` for `k = 0..=degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrendBasis {
    degree: usize,
}

impl TrendBasis {
    pub const CONSTANT: TrendBasis = TrendBasis { degree: 0 };
    pub const LINEAR: TrendBasis = TrendBasis { degree: 1 };

    pub fn new(degree: usize) -> Self {
        Self { degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of regression parameters, `degree + 1`.
    pub fn size(&self) -> usize {
        self.degree + 1
    }

    /// Basis row `[1, x, x^2, ..]` at a real point.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let mut row = Vec::with_capacity(self.size());
        let mut p = 1.0;
        for _ in 0..self.size() {
            row.push(p);
            p *= x;
        }
        row
    }

    /// Basis row at a complex point, by repeated complex multiplication.
    pub fn eval_complex(&self, x: Complex64) -> Vec<Complex64> {
        let mut row = Vec::with_capacity(self.size());
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..self.size() {
            row.push(p);
            p *= x;
        }
        row
    }

    /// `f(x)^T beta`.
    pub fn trend_at(&self, beta: &[f64], x: f64) -> f64 {
        // Horner
        beta.iter().rev().fold(0.0, |acc, b| acc * x + b)
    }

    pub fn trend_at_complex(&self, beta: &[f64], x: Complex64) -> Complex64 {
        beta.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, b| acc * x + b)
    }

    pub fn describe(&self) -> String {
        match self.degree {
            0 => "constant trend (degree 0)".to_string(),
            1 => "linear trend (degree 1)".to_string(),
            d => format!("polynomial trend of degree {d}"),
        }
    }
}

/// Row-major `n x N(k)` matrix with entry `(i, k) = x_i^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    basis: TrendBasis,
}

impl DesignMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn basis(&self) -> TrendBasis {
        self.basis
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.entries[i * self.cols + k]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Symmetric `F^T F`, row-major `N(k) x N(k)`.
    pub fn gram(&self) -> Vec<f64> {
        let p = self.cols;
        let mut g = vec![0.0; p * p];
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..p {
                for b in a..p {
                    g[a * p + b] += r[a] * r[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                g[a * p + b] = g[b * p + a];
            }
        }
        g
    }

    /// `F^T y`.
    pub fn transpose_mul(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, yi) in y.iter().enumerate() {
            for (o, f) in out.iter_mut().zip(self.row(i)) {
                *o += f * yi;
            }
        }
        out
    }

    /// `F c` for complex `c`.
    pub fn mul_complex(&self, c: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(c)
                    .map(|(f, ck)| ck * f)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// `F^T w` for complex `w`.
    pub fn transpose_mul_complex(&self, w: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (i, wi) in w.iter().enumerate() {
            for (o, f) in out.iter_mut().zip(self.row(i)) {
                *o += wi * f;
            }
        }
        out
    }
}

/// Build the monomial design matrix for `samples` under `basis`.
///
/// Fails when the degree is at least the number of distinct abscissas, since
/// the columns are then linearly dependent.
pub fn build_design(samples: &SampleSet, basis: TrendBasis) -> Result<DesignMatrix> {
    design_from_abscissas(samples.abscissas(), basis)
}

pub(crate) fn design_from_abscissas(xs: &[f64], basis: TrendBasis) -> Result<DesignMatrix> {
    if xs.is_empty() {
        return Err(Error::EmptySamples);
    }
    let distinct = distinct_count(xs);
    if basis.degree() >= distinct {
        return Err(Error::RankDeficient {
            degree: basis.degree(),
            distinct,
        });
    }
    let entries = xs.iter().flat_map(|&x| basis.eval(x)).collect();
    Ok(DesignMatrix {
        rows: xs.len(),
        cols: basis.size(),
        entries,
        basis,
    })
}

/// Population moments of the abscissas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    /// Mean abscissa.
    pub m_n: f64,
    /// Mean squared abscissa.
    pub m_sn: f64,
    /// `sqrt(m_sn - m_n^2)`, divisor `n`.
    pub sigma_n: f64,
}

impl MomentSummary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let first = xs[0];
        if xs.iter().all(|&x| x == first) {
            return Self {
                m_n: first,
                m_sn: first * first,
                sigma_n: 0.0,
            };
        }
        let m_n = xs.iter().sum::<f64>() / n;
        let m_sn = xs.iter().map(|x| x * x).sum::<f64>() / n;
        // corrected two-pass; algebraically m_sn - m_n^2
        let dev_sum = xs.iter().map(|x| x - m_n).sum::<f64>();
        let dev_sq = xs.iter().map(|x| (x - m_n) * (x - m_n)).sum::<f64>();
        let spread = (dev_sq - dev_sum * dev_sum / n) / n;
        let tol = 1e-12 * m_sn.max(1.0);
        assert!(
            spread >= -tol,
            "m_sn - m_n^2 = {spread} is negative beyond round-off"
        );
        Self {
            m_n,
            m_sn,
            sigma_n: spread.max(0.0).sqrt(),
        }
    }

    pub fn variance(&self) -> f64 {
        self.sigma_n * self.sigma_n
    }
}

/// Moment summary of a sample set's abscissas.
pub fn moments(samples: &SampleSet) -> MomentSummary {
    samples.moments()
}
