//! Best linear unbiased estimation under a polynomial trend with white noise.
//!
//! All quadratic forms here are bilinear: complex vectors are transposed,
//! never conjugated. Evaluating the real variance formulas at a complex point
//! is an analytic continuation, and only the bilinear form can vanish off the
//! real axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::model::{design_from_abscissas, DesignMatrix, MomentSummary, SampleSet, TrendBasis};

pub type ComplexScalar = Complex64;

/// Plain transposed product `a^T b`.
pub fn bilinear(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// White noise with variance `sigma2` and identity correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    sigma2: f64,
}

impl NoiseModel {
    pub fn white(sigma2: f64) -> Result<Self> {
        if !sigma2.is_finite() || sigma2 < 0.0 {
            return Err(Error::InvalidInput {
                what: "noise variance",
                reason: format!("{sigma2} is not a finite nonnegative number"),
            });
        }
        Ok(Self { sigma2 })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self { sigma2: 1.0 }
    }
}

/// Estimated trend coefficients, offset first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlueFit {
    pub coefficients: Vec<f64>,
}

impl BlueFit {
    pub fn offset(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn slope(&self) -> Option<f64> {
        self.coefficients.get(1).copied()
    }

    pub fn trend_at(&self, x: Complex64) -> Complex64 {
        TrendBasis::new(self.coefficients.len() - 1).trend_at_complex(&self.coefficients, x)
    }
}

/// Kriging weights and Lagrange multipliers at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct KrigingSolution {
    pub weights: Vec<Complex64>,
    pub multipliers: Vec<Complex64>,
    pub point: Complex64,
}

/// Residuals of the two defining relations of a [`KrigingSolution`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintResiduals {
    /// `F^T w - f(x_j)`, one entry per basis function.
    pub unbiasedness: Vec<Complex64>,
    /// `w + F mu`, one entry per sample.
    pub stationarity: Vec<Complex64>,
}

impl ConstraintResiduals {
    pub fn max_unbiasedness(&self) -> f64 {
        self.unbiasedness.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn max_stationarity(&self) -> f64 {
        self.stationarity.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

/// Design matrix together with the Cholesky factor of its Gram matrix.
///
/// Factor once, then fit, krige and evaluate variances at any number of
/// points.
#[derive(Debug, Clone)]
pub struct TrendSystem {
    design: DesignMatrix,
    gram: Cholesky,
}

impl TrendSystem {
    pub fn new(abscissas: &[f64], basis: TrendBasis) -> Result<Self> {
        let design = design_from_abscissas(abscissas, basis).map_err(|e| match e {
            Error::RankDeficient { distinct, .. } => Error::Singular {
                basis: format!("{} over {distinct} distinct abscissa(s)", basis.describe()),
            },
            other => other,
        })?;
        let gram = Cholesky::factor(&design.gram(), basis.size()).ok_or_else(|| Error::Singular {
            basis: basis.describe(),
        })?;
        Ok(Self { design, gram })
    }

    pub fn for_samples(samples: &SampleSet, basis: TrendBasis) -> Result<Self> {
        Self::new(samples.abscissas(), basis)
    }

    pub fn design(&self) -> &DesignMatrix {
        &self.design
    }

    pub fn basis(&self) -> TrendBasis {
        self.design.basis()
    }

    /// `(F^T F)^{-1} F^T v` via the Cholesky factor.
    pub fn fit(&self, values: &[f64]) -> BlueFit {
        assert_eq!(values.len(), self.design.rows());
        BlueFit {
            coefficients: self.gram.solve(&self.design.transpose_mul(values)),
        }
    }

    /// `mu = -(F^T F)^{-1} f(x_j)`, `w = -F mu`.
    pub fn kriging(&self, point: Complex64) -> KrigingSolution {
        let f = self.basis().eval_complex(point);
        let multipliers: Vec<Complex64> = self.gram.solve_complex(&f).into_iter().map(|s| -s).collect();
        let weights = self.design.mul_complex(&multipliers).into_iter().map(|w| -w).collect();
        KrigingSolution {
            weights,
            multipliers,
            point,
        }
    }

    /// `f(x_j)^T (F^T F)^{-1} f(x_j)`, bilinear.
    pub fn variance_factor(&self, point: Complex64) -> Complex64 {
        let f = self.basis().eval_complex(point);
        bilinear(&f, &self.gram.solve_complex(&f))
    }

    pub fn residuals(&self, sol: &KrigingSolution) -> ConstraintResiduals {
        let f = self.basis().eval_complex(sol.point);
        let unbiasedness = self
            .design
            .transpose_mul_complex(&sol.weights)
            .into_iter()
            .zip(f)
            .map(|(a, b)| a - b)
            .collect();
        let stationarity = self
            .design
            .mul_complex(&sol.multipliers)
            .into_iter()
            .zip(&sol.weights)
            .map(|(fm, w)| w + fm)
            .collect();
        ConstraintResiduals {
            unbiasedness,
            stationarity,
        }
    }
}

impl KrigingSolution {
    /// `sum_l w_l v_l`.
    pub fn apply(&self, values: &[f64]) -> Complex64 {
        assert_eq!(values.len(), self.weights.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// `w^T w`, bilinear.
    pub fn weight_norm_sq(&self) -> Complex64 {
        bilinear(&self.weights, &self.weights)
    }
}

/// Ordinary least-squares (equivalently BLUE under white noise) trend fit.
pub fn ols_fit(samples: &SampleSet, basis: TrendBasis) -> Result<BlueFit> {
    Ok(TrendSystem::for_samples(samples, basis)?.fit(samples.values()))
}

pub fn kriging_weights(
    samples: &SampleSet,
    basis: TrendBasis,
    point: Complex64,
) -> Result<KrigingSolution> {
    Ok(TrendSystem::for_samples(samples, basis)?.kriging(point))
}

/// Kriging prediction `sum_l w_l v_l` at `point`.
pub fn predict(samples: &SampleSet, basis: TrendBasis, point: Complex64) -> Result<Complex64> {
    Ok(kriging_weights(samples, basis, point)?.apply(samples.values()))
}

/// `sigma^2 f(x_j)^T (F^T F)^{-1} f(x_j)`, the minimized estimation variance.
pub fn minimized_variance(
    samples: &SampleSet,
    basis: TrendBasis,
    point: Complex64,
    noise: NoiseModel,
) -> Result<Complex64> {
    Ok(TrendSystem::for_samples(samples, basis)?.variance_factor(point) * noise.sigma2())
}

/// Degree-1 variance factor `(x^2 - 2 m_n x + m_sn) / (n sigma_n^2)`.
///
/// Evaluated in the completed-square form `((x - m_n)^2 + sigma_n^2) / (n sigma_n^2)`
/// so the roots `m_n +/- i sigma_n` give an exact zero.
pub fn normalized_variance_quadratic(mom: &MomentSummary, n: usize, x: Complex64) -> Result<Complex64> {
    if mom.sigma_n <= 0.0 {
        return Err(Error::DegenerateAbscissas);
    }
    let s2 = mom.variance();
    let d = x - mom.m_n;
    Ok((d * d + s2) / (n as f64 * s2))
}

/// Roots `m_n + i sigma_n` and `m_n - i sigma_n` of the degree-1 variance
/// factor, positive-imaginary branch first.
pub fn zero_variance_points(mom: &MomentSummary) -> Result<(Complex64, Complex64)> {
    if mom.sigma_n <= 0.0 {
        return Err(Error::DegenerateAbscissas);
    }
    Ok((
        Complex64::new(mom.m_n, mom.sigma_n),
        Complex64::new(mom.m_n, -mom.sigma_n),
    ))
}

/// Complex constant-mean estimate `v_bar +/- i sigma_n beta_slope`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanHeckeEstimate {
    pub mean: f64,
    pub imaginary_error: f64,
    pub signed_imaginary: f64,
    pub standard_error: f64,
}

impl VanHeckeEstimate {
    /// Both branches, positive-imaginary first.
    pub fn branches(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.mean, self.signed_imaginary),
            Complex64::new(self.mean, -self.signed_imaginary),
        )
    }
}

/// Population standard error of the mean, `sqrt(var(v) / n)` with divisor `n`.
pub fn population_standard_error(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (var / n).sqrt()
}

/// Fit the linear trend and evaluate the kriging estimator at the
/// zero-variance point `m_n + i sigma_n`.
pub fn van_hecke_estimate(samples: &SampleSet) -> Result<VanHeckeEstimate> {
    let mom = samples.moments();
    let (upper, _) = zero_variance_points(&mom)?;
    let system = TrendSystem::for_samples(samples, TrendBasis::LINEAR)?;
    let estimate = system.kriging(upper).apply(samples.values());
    Ok(VanHeckeEstimate {
        mean: estimate.re,
        imaginary_error: estimate.im.abs(),
        signed_imaginary: estimate.im,
        standard_error: population_standard_error(samples.values()),
    })
}
