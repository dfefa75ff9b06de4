//! Monte Carlo checks of the white-noise model and a brute-force oracle for
//! the minimum-variance weights.
//!
//! Every replicate draws from its own ChaCha8 stream, keyed by
//! `(seed, replicate index)`, so serial and parallel runs produce identical
//! reports. Noise is standard normal scaled by `sigma`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blue::TrendSystem;
use crate::error::{Error, Result};
use crate::model::{SampleSet, TrendBasis};

/// Generating process `v_i = f(x_i)^T beta + sigma z_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhiteNoiseModel {
    true_beta: Vec<f64>,
    sigma: f64,
}

impl WhiteNoiseModel {
    pub fn new(true_beta: Vec<f64>, sigma: f64) -> Result<Self> {
        if true_beta.is_empty() {
            return Err(Error::InvalidInput {
                what: "trend coefficients",
                reason: "at least one coefficient is required".into(),
            });
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidInput {
                what: "noise standard deviation",
                reason: format!("{sigma} is not a finite positive number"),
            });
        }
        if let Some(index) = true_beta.iter().position(|b| !b.is_finite()) {
            return Err(Error::NonFinite { field: "trend coefficient", index });
        }
        Ok(Self { true_beta, sigma })
    }

    pub fn true_beta(&self) -> &[f64] {
        &self.true_beta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Basis implied by the number of coefficients.
    pub fn basis(&self) -> TrendBasis {
        TrendBasis::new(self.true_beta.len() - 1)
    }

    fn check_basis(&self, basis: TrendBasis) -> Result<()> {
        if basis.size() != self.true_beta.len() {
            return Err(Error::BasisMismatch {
                expected: basis.size(),
                got: self.true_beta.len(),
            });
        }
        Ok(())
    }

    fn trend(&self, basis: TrendBasis, x: f64) -> f64 {
        basis.trend_at(&self.true_beta, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub replicates: u64,
    pub seed: u64,
    /// Evaluate replicates on the rayon pool. Output does not depend on it.
    pub parallel: bool,
}

impl SimulationConfig {
    pub fn new(replicates: u64, seed: u64) -> Result<Self> {
        if replicates == 0 {
            return Err(Error::InvalidInput {
                what: "replicate count",
                reason: "must be at least 1".into(),
            });
        }
        Ok(Self {
            replicates,
            seed,
            parallel: true,
        })
    }

    pub fn serial(self) -> Self {
        Self {
            parallel: false,
            ..self
        }
    }
}

/// Deterministic generator for one replicate.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

fn draw_values(
    abscissas: &[f64],
    basis: TrendBasis,
    model: &WhiteNoiseModel,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    abscissas
        .iter()
        .map(|&x| {
            let z: f64 = StandardNormal.sample(rng);
            model.trend(basis, x) + model.sigma * z
        })
        .collect()
}

/// Draw one field at `abscissas`. Uses replicate stream 0 of `seed`.
pub fn simulate_field(
    abscissas: &[f64],
    basis: TrendBasis,
    model: &WhiteNoiseModel,
    seed: u64,
) -> Result<SampleSet> {
    model.check_basis(basis)?;
    let mut rng = replicate_rng(seed, 0);
    let values = draw_values(abscissas, basis, model, &mut rng);
    SampleSet::new(abscissas.to_vec(), values)
}

fn run_replicates<T, F>(config: &SimulationConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if config.parallel {
        (0..config.replicates).into_par_iter().map(f).collect()
    } else {
        (0..config.replicates).map(f).collect()
    }
}

/// Empirical versus predicted mean squared prediction error at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalVarianceReport {
    pub x_j: f64,
    pub empirical_mse: f64,
    pub theoretical_mse: f64,
    pub relative_error: f64,
    pub replicates: u64,
}

impl EmpiricalVarianceReport {
    /// One `key=value` line per field.
    pub fn to_key_values(&self) -> String {
        format!(
            "x_j={}\nempirical_mse={}\ntheoretical_mse={}\nrelative_error={}\nreplicates={}\n",
            self.x_j, self.empirical_mse, self.theoretical_mse, self.relative_error, self.replicates
        )
    }
}

/// Mean of `(V_j - sum_i w_i V_i)^2` over independent fields, compared with
/// `sigma^2 (1 + f(x_j)^T (F^T F)^{-1} f(x_j))`.
///
/// `x_j` must not coincide with a sample abscissa: the noise at `x_j` is then
/// the same draw as the sample noise and the cross term does not vanish.
pub fn empirical_mse(
    abscissas: &[f64],
    basis: TrendBasis,
    model: &WhiteNoiseModel,
    x_j: f64,
    config: &SimulationConfig,
) -> Result<EmpiricalVarianceReport> {
    model.check_basis(basis)?;
    if !x_j.is_finite() {
        return Err(Error::NonFinite { field: "evaluation point", index: 0 });
    }
    if abscissas.contains(&x_j) {
        return Err(Error::OnSampleAbscissa { x: x_j });
    }
    let system = TrendSystem::new(abscissas, basis)?;
    let point = Complex64::new(x_j, 0.0);
    let weights: Vec<f64> = system.kriging(point).weights.iter().map(|w| w.re).collect();
    let sigma2 = model.sigma * model.sigma;
    let theoretical_mse = sigma2 * (1.0 + system.variance_factor(point).re);
    let target_trend = model.trend(basis, x_j);

    let squared_errors = run_replicates(config, |r| {
        let mut rng = replicate_rng(config.seed, r);
        let values = draw_values(abscissas, basis, model, &mut rng);
        let z: f64 = StandardNormal.sample(&mut rng);
        let target = target_trend + model.sigma * z;
        let estimate: f64 = weights.iter().zip(&values).map(|(w, v)| w * v).sum();
        (target - estimate).powi(2)
    });
    // fixed left-to-right reduction
    let empirical_mse = squared_errors.iter().sum::<f64>() / config.replicates as f64;

    Ok(EmpiricalVarianceReport {
        x_j,
        empirical_mse,
        theoretical_mse,
        relative_error: (empirical_mse - theoretical_mse).abs() / theoretical_mse,
        replicates: config.replicates,
    })
}

/// Monte Carlo mean of the fitted coefficients and the standard error of
/// that mean, per coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSummary {
    pub mean: Vec<f64>,
    pub standard_error: Vec<f64>,
    pub replicates: u64,
}

pub fn replicate_fits(
    abscissas: &[f64],
    basis: TrendBasis,
    model: &WhiteNoiseModel,
    config: &SimulationConfig,
) -> Result<CoefficientSummary> {
    model.check_basis(basis)?;
    let system = TrendSystem::new(abscissas, basis)?;
    let fits = run_replicates(config, |r| {
        let mut rng = replicate_rng(config.seed, r);
        system.fit(&draw_values(abscissas, basis, model, &mut rng)).coefficients
    });
    let reps = config.replicates as f64;
    let p = basis.size();
    let mut mean = vec![0.0; p];
    for fit in &fits {
        for (m, b) in mean.iter_mut().zip(fit) {
            *m += b;
        }
    }
    mean.iter_mut().for_each(|m| *m /= reps);
    let mut var = vec![0.0; p];
    for fit in &fits {
        for ((s, b), m) in var.iter_mut().zip(fit).zip(&mean) {
            *s += (b - m) * (b - m);
        }
    }
    let denom = (reps - 1.0).max(1.0);
    let standard_error = var.iter().map(|s| (s / denom / reps).sqrt()).collect();
    Ok(CoefficientSummary {
        mean,
        standard_error,
        replicates: config.replicates,
    })
}

/// Largest sample count accepted by [`oracle_min_weights`].
pub const ORACLE_MAX_SAMPLES: usize = 12;

/// Minimum-norm weights on `{w : F^T w = f(x_j)}` found without Lagrange
/// multipliers: a particular solution plus a null-space parameterization,
/// then an unconstrained least-squares solve in the null-space coordinates.
pub fn oracle_min_weights(abscissas: &[f64], basis: TrendBasis, x_j: f64) -> Result<Vec<f64>> {
    let n = abscissas.len();
    let p = basis.size();
    if n == 0 {
        return Err(Error::EmptySamples);
    }
    if n > ORACLE_MAX_SAMPLES {
        return Err(Error::InvalidInput {
            what: "oracle sample count",
            reason: format!("{n} exceeds {ORACLE_MAX_SAMPLES}"),
        });
    }
    let singular = || Error::Singular {
        basis: basis.describe(),
    };
    if n < p {
        return Err(singular());
    }

    // augmented [F^T | f(x_j)], p rows, n + 1 columns
    let mut rows: Vec<Vec<f64>> = (0..p)
        .map(|k| {
            let mut row: Vec<f64> = abscissas.iter().map(|x| x.powi(k as i32)).collect();
            row.push(x_j.powi(k as i32));
            row
        })
        .collect();

    let scale = rows
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut pivots = Vec::with_capacity(p);
    let mut r = 0;
    for col in 0..n {
        if r == p {
            break;
        }
        let (best, mag) = (r..p)
            .map(|i| (i, rows[i][col].abs()))
            .fold((r, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if mag <= 1e-12 * scale {
            continue;
        }
        rows.swap(r, best);
        let lead = rows[r][col];
        rows[r].iter_mut().for_each(|v| *v /= lead);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0.0 {
                let factor = row[col];
                row.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= factor * pv);
            }
        }
        pivots.push(col);
        r += 1;
    }
    if pivots.len() < p {
        return Err(singular());
    }

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![0.0; n];
    for (row, &col) in rows.iter().zip(&pivots) {
        particular[col] = row[n];
    }
    if free.is_empty() {
        return Ok(particular);
    }

    let null_basis: Vec<Vec<f64>> = free
        .iter()
        .map(|&f| {
            let mut z = vec![0.0; n];
            z[f] = 1.0;
            for (row, &col) in rows.iter().zip(&pivots) {
                z[col] = -row[f];
            }
            z
        })
        .collect();

    // minimize |w0 + Z t|^2  <=>  (Z^T Z) t = -Z^T w0
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let q = null_basis.len();
    let mut normal: Vec<Vec<f64>> = null_basis
        .iter()
        .map(|za| {
            let mut row: Vec<f64> = null_basis.iter().map(|zb| dot(za, zb)).collect();
            row.push(-dot(za, &particular));
            row
        })
        .collect();
    let t = gauss_solve(&mut normal, q).ok_or_else(singular)?;

    let mut weights = particular;
    for (z, tk) in null_basis.iter().zip(&t) {
        weights.iter_mut().zip(z).for_each(|(w, zi)| *w += tk * zi);
    }
    Ok(weights)
}

/// Gaussian elimination with partial pivoting on an augmented `q x (q+1)` system.
fn gauss_solve(aug: &mut [Vec<f64>], q: usize) -> Option<Vec<f64>> {
    for col in 0..q {
        let best = (col..q).max_by(|&a, &b| aug[a][col].abs().total_cmp(&aug[b][col].abs()))?;
        if aug[best][col].abs() < 1e-300 {
            return None;
        }
        aug.swap(col, best);
        let (upper, lower) = aug.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut().take(q - col - 1) {
            let factor = row[col] / pivot_row[col];
            for (v, p) in row[col..=q].iter_mut().zip(&pivot_row[col..=q]) {
                *v -= factor * p;
            }
        }
    }
    let mut x = vec![0.0; q];
    for i in (0..q).rev() {
        let s: f64 = (i + 1..q).map(|j| aug[i][j] * x[j]).sum();
        x[i] = (aug[i][q] - s) / aug[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_abscissas() -> Vec<f64> {
        (1..=11).map(f64::from).collect()
    }

    #[test]
    fn noiseless_limit_reproduces_trend() {
        let xs = example_abscissas();
        let model = WhiteNoiseModel::new(vec![1.0, 0.5], 1e-300).unwrap();
        let s = simulate_field(&xs, TrendBasis::LINEAR, &model, 9).unwrap();
        for (x, v) in xs.iter().zip(s.values()) {
            assert_eq!(*v, 1.0 + 0.5 * x);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let xs = example_abscissas();
        let model = WhiteNoiseModel::new(vec![3.29], 1.0).unwrap();
        let a = simulate_field(&xs, TrendBasis::CONSTANT, &model, 42).unwrap();
        let b = simulate_field(&xs, TrendBasis::CONSTANT, &model, 42).unwrap();
        let c = simulate_field(&xs, TrendBasis::CONSTANT, &model, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn model_validation() {
        assert!(WhiteNoiseModel::new(vec![], 1.0).is_err());
        assert!(WhiteNoiseModel::new(vec![1.0], 0.0).is_err());
        assert!(WhiteNoiseModel::new(vec![1.0], f64::NAN).is_err());
        let m = WhiteNoiseModel::new(vec![1.0, 2.0], 1.0).unwrap();
        assert_eq!(
            simulate_field(&[1.0, 2.0], TrendBasis::CONSTANT, &m, 0),
            Err(Error::BasisMismatch { expected: 1, got: 2 })
        );
        assert!(SimulationConfig::new(0, 1).is_err());
    }

    #[test]
    fn on_sample_point_rejected() {
        let m = WhiteNoiseModel::new(vec![1.0, 0.5], 1.0).unwrap();
        let cfg = SimulationConfig::new(10, 1).unwrap();
        assert_eq!(
            empirical_mse(&example_abscissas(), TrendBasis::LINEAR, &m, 3.0, &cfg),
            Err(Error::OnSampleAbscissa { x: 3.0 })
        );
    }

    #[test]
    fn constant_trend_theoretical_mse() {
        let xs = [0.0, 1.5, 2.0, 7.0, 9.0];
        let m = WhiteNoiseModel::new(vec![-2.0], 1.0).unwrap();
        let cfg = SimulationConfig::new(1, 3).unwrap();
        let r = empirical_mse(&xs, TrendBasis::CONSTANT, &m, 100.0, &cfg).unwrap();
        assert!((r.theoretical_mse - 1.2).abs() < 1e-15);
    }

    #[test]
    fn sigma_scales_theoretical_mse_by_square() {
        let xs = example_abscissas();
        let cfg = SimulationConfig::new(5, 3).unwrap();
        let one = WhiteNoiseModel::new(vec![1.0, 0.5], 1.0).unwrap();
        let two = WhiteNoiseModel::new(vec![1.0, 0.5], 2.0).unwrap();
        let a = empirical_mse(&xs, TrendBasis::LINEAR, &one, 5.5, &cfg).unwrap();
        let b = empirical_mse(&xs, TrendBasis::LINEAR, &two, 5.5, &cfg).unwrap();
        assert_eq!(b.theoretical_mse, 4.0 * a.theoretical_mse);
        assert!((a.theoretical_mse - (1.0 + (5.5 * 5.5 - 66.0 + 46.0) / 110.0)).abs() < 1e-14);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let xs = example_abscissas();
        let m = WhiteNoiseModel::new(vec![1.0, 0.5], 1.0).unwrap();
        let cfg = SimulationConfig::new(5_000, 77).unwrap();
        let par = empirical_mse(&xs, TrendBasis::LINEAR, &m, 5.5, &cfg).unwrap();
        let ser = empirical_mse(&xs, TrendBasis::LINEAR, &m, 5.5, &cfg.serial()).unwrap();
        assert_eq!(par, ser);
    }

    #[test]
    fn key_value_report() {
        let r = EmpiricalVarianceReport {
            x_j: 5.5,
            empirical_mse: 1.1,
            theoretical_mse: 1.0,
            relative_error: 0.1,
            replicates: 7,
        };
        assert_eq!(
            r.to_key_values(),
            "x_j=5.5\nempirical_mse=1.1\ntheoretical_mse=1\nrelative_error=0.1\nreplicates=7\n"
        );
    }

    #[test]
    fn oracle_uniform_for_constant_trend() {
        let w = oracle_min_weights(&[0.0, 3.0, 4.0, 10.0], TrendBasis::CONSTANT, -7.0).unwrap();
        for wi in w {
            assert!((wi - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn oracle_single_feasible_point() {
        let w = oracle_min_weights(&[0.0, 1.0], TrendBasis::LINEAR, 2.0).unwrap();
        assert_eq!(w, vec![-1.0, 2.0]);
    }

    #[test]
    fn oracle_rejects_bad_instances() {
        assert!(matches!(
            oracle_min_weights(&[1.0, 1.0, 1.0], TrendBasis::LINEAR, 0.5),
            Err(Error::Singular { .. })
        ));
        assert!(oracle_min_weights(&[1.0], TrendBasis::LINEAR, 0.5).is_err());
        let many: Vec<f64> = (0..13).map(f64::from).collect();
        assert!(oracle_min_weights(&many, TrendBasis::CONSTANT, 0.5).is_err());
    }
}
