//! Report types and their text renderings.

use num_complex::Complex64;
use serde::Serialize;
use vanhecke_core::{zero_variance_points, SampleSet, TrendBasis, TrendSystem};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

fn fmt_complex(z: Complex64, digits: usize) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.digits$}{sign}{:.digits$}i", z.re, z.im.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub n: usize,
    pub mean: f64,
    pub imaginary_error: f64,
    pub signed_imaginary: f64,
    pub standard_error: f64,
    pub offset: f64,
    pub slope: f64,
    pub zero_variance_points: [ComplexJson; 2],
}

impl EstimateReport {
    pub fn from_samples(samples: &SampleSet) -> Result<Self, CliError> {
        let estimate = vanhecke_core::van_hecke_estimate(samples)?;
        let (up, down) = zero_variance_points(&samples.moments())?;
        let fit = TrendSystem::for_samples(samples, TrendBasis::LINEAR)?.fit(samples.values());
        Ok(Self {
            n: samples.len(),
            mean: estimate.mean,
            imaginary_error: estimate.imaginary_error,
            signed_imaginary: estimate.signed_imaginary,
            standard_error: estimate.standard_error,
            offset: fit.offset(),
            slope: fit.slope().expect("linear fit has a slope"),
            zero_variance_points: [up.into(), down.into()],
        })
    }

    pub fn render_text(&self, digits: usize) -> String {
        let [up, down] = self.zero_variance_points;
        let up = Complex64::new(up.re, up.im);
        let down = Complex64::new(down.re, down.im);
        format!(
            "n                     {}\n\
             mean                  {:.d$}\n\
             imaginary_error       {:.d$}\n\
             standard_error        {:.d$}\n\
             estimate              {:.d$} +/- {:.d$}i\n\
             offset                {:.d$}\n\
             slope                 {:.d$}\n\
             zero_variance_points  {}, {}\n",
            self.n,
            self.mean,
            self.imaginary_error,
            self.standard_error,
            self.mean,
            self.imaginary_error,
            self.offset,
            self.slope,
            fmt_complex(up, digits),
            fmt_complex(down, digits),
            d = digits,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightRow {
    pub x: f64,
    pub weight: ComplexJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightsReport {
    pub degree: usize,
    pub at: ComplexJson,
    pub weights: Vec<WeightRow>,
    pub multipliers: Vec<ComplexJson>,
    /// `|sum_i w_i x_i^k - x_j^k|` for each basis power `k`.
    pub unbiasedness_residuals: Vec<f64>,
    pub max_stationarity_residual: f64,
}

impl WeightsReport {
    pub fn compute(samples: &SampleSet, basis: TrendBasis, at: Complex64) -> Result<Self, CliError> {
        let system = TrendSystem::for_samples(samples, basis)?;
        let sol = system.kriging(at);
        let residuals = system.residuals(&sol);
        Ok(Self {
            degree: basis.degree(),
            at: at.into(),
            weights: samples
                .abscissas()
                .iter()
                .zip(&sol.weights)
                .map(|(&x, &w)| WeightRow { x, weight: w.into() })
                .collect(),
            multipliers: sol.multipliers.iter().map(|&m| m.into()).collect(),
            unbiasedness_residuals: residuals.unbiasedness.iter().map(|r| r.norm()).collect(),
            max_stationarity_residual: residuals.max_stationarity(),
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "degree {}  at {}\n{:>4}  {:>14}  {:>22}  {:>22}\n",
            self.degree,
            fmt_complex(Complex64::new(self.at.re, self.at.im), 6),
            "i",
            "x",
            "weight_re",
            "weight_im"
        );
        for (i, row) in self.weights.iter().enumerate() {
            out += &format!(
                "{:>4}  {:>14}  {:>22.15e}  {:>22.15e}\n",
                i + 1,
                row.x,
                row.weight.re,
                row.weight.im
            );
        }
        out += "multipliers\n";
        for (k, m) in self.multipliers.iter().enumerate() {
            out += &format!("{k:>4}  {:>22.15e}  {:>22.15e}\n", m.re, m.im);
        }
        out += "unbiasedness residuals |sum w x^k - x_j^k|\n";
        for (k, r) in self.unbiasedness_residuals.iter().enumerate() {
            out += &format!("{k:>4}  {r:.3e}\n");
        }
        out += &format!("max |w + F mu|  {:.3e}\n", self.max_stationarity_residual);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub degree: usize,
    pub at: ComplexJson,
    pub sigma2: f64,
    pub variance: ComplexJson,
}

impl VarianceReport {
    pub fn render_text(&self) -> String {
        let sign = if self.variance.im.is_sign_negative() { '-' } else { '+' };
        format!(
            "variance {}{sign}{}i\n",
            self.variance.re,
            self.variance.im.abs()
        )
    }
}
