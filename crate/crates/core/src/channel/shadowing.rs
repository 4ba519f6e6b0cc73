//! Spatially correlated log-normal shadowing via spectral filtering.
//!
//! The exponential (Gudmundson) autocorrelation is sampled on the grid lags,
//! its 2D DFT gives the power spectral density, and white complex Gaussian
//! noise is circularly convolved with the unit-energy filter whose spectrum
//! is the square root of that density.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowingParams {
    /// Shadowing standard deviation, dB.
    pub sigma_sh: f64,
    /// Coherence distance, meters.
    pub d_coh: f64,
    pub seed: u64,
}

impl ShadowingParams {
    pub fn new(sigma_sh: f64, d_coh: f64, seed: u64) -> Result<Self> {
        let p = ShadowingParams {
            sigma_sh,
            d_coh,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_sh > 0.0 && self.sigma_sh.is_finite()) {
            return Err(Error::invalid(
                "sigma_sh",
                format!("must be > 0, got {}", self.sigma_sh),
            ));
        }
        if !(self.d_coh > 0.0 && self.d_coh.is_finite()) {
            return Err(Error::invalid("d_coh", format!("must be > 0, got {}", self.d_coh)));
        }
        Ok(())
    }
}

/// Shadowing autocovariance `σ²·exp(−Δ/D_coh)` at separation `delta` meters.
pub fn gudmundson_corr(delta: f64, params: &ShadowingParams) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::invalid("delta", format!("must be >= 0, got {delta}")));
    }
    Ok(params.sigma_sh * params.sigma_sh * (-delta / params.d_coh).exp())
}

/// In-place 2D DFT of a row-major `n1 × n2` buffer (rows of length `n1`).
fn fft2(buf: &mut [Complex64], n1: usize, n2: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(n1), planner.plan_fft_inverse(n2))
    } else {
        (planner.plan_fft_forward(n1), planner.plan_fft_forward(n2))
    };
    row_fft.process(buf);
    let mut transposed = vec![Complex64::new(0.0, 0.0); buf.len()];
    transpose(buf, &mut transposed, n1, n2);
    col_fft.process(&mut transposed);
    transpose(&transposed, buf, n2, n1);
}

/// `src` is `rows × cols` row-major with rows of length `cols`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], cols: usize, rows: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

/// Spectrum of the unit-energy shadowing filter, laid out in DFT order.
fn filter_spectrum(grid: &GridSpec, params: &ShadowingParams) -> Result<Vec<Complex64>> {
    let (n1, n2) = (grid.n1, grid.n2);
    // Centered lag grid, stored with the zero lag at index 0 (wrapped).
    let mut corr = Vec::with_capacity(n1 * n2);
    for j in 0..n2 {
        let ly = j.min(n2 - j) as f64;
        for i in 0..n1 {
            let lx = i.min(n1 - i) as f64;
            let delta = grid.step * (lx * lx + ly * ly).sqrt();
            corr.push(Complex64::new(gudmundson_corr(delta, params)?, 0.0));
        }
    }
    fft2(&mut corr, n1, n2, false);

    // Real, even input gives a real spectrum; rounding and the finite grid
    // can still leave small negative values.
    let mut spectrum: Vec<Complex64> = corr
        .iter()
        .map(|p| Complex64::new(p.re.max(0.0).sqrt(), 0.0))
        .collect();

    // Parseval: sum |h|² = sum |H|² / N.
    let n = (n1 * n2) as f64;
    let energy: f64 = spectrum.iter().map(|h| h.norm_sqr()).sum::<f64>() / n;
    if !(energy > 0.0) {
        return Err(Error::invalid("shadowing", "power spectral density vanished"));
    }
    let k = energy.sqrt().recip();
    for h in &mut spectrum {
        *h *= k;
    }
    Ok(spectrum)
}

/// Spatial impulse response of the shadowing filter (unit energy).
pub fn shadowing_filter(grid: &GridSpec, params: &ShadowingParams) -> Result<Vec<f64>> {
    grid.validate()?;
    params.validate()?;
    let mut h = filter_spectrum(grid, params)?;
    fft2(&mut h, grid.n1, grid.n2, true);
    let n = grid.len() as f64;
    Ok(h.iter().map(|c| c.re / n).collect())
}

/// Draws one shadowing realization (dB, row-major) for `grid`.
///
/// The output has sample standard deviation exactly `params.sigma_sh`; the
/// same seed always yields the same field.
pub fn synthesize_shadowing(grid: &GridSpec, params: &ShadowingParams) -> Result<Vec<f64>> {
    grid.validate()?;
    params.validate()?;
    let (n1, n2) = (grid.n1, grid.n2);
    let spectrum = filter_spectrum(grid, params)?;

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    // CN(0, σ²): independent real and imaginary parts with variance σ²/2.
    let normal = Normal::new(0.0, params.sigma_sh / 2f64.sqrt())
        .map_err(|e| Error::invalid("sigma_sh", e.to_string()))?;
    let mut noise: Vec<Complex64> = (0..n1 * n2)
        .map(|_| {
            let re = normal.sample(&mut rng);
            let im = normal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();

    // Circular convolution h ⊛ w as a product of spectra.
    fft2(&mut noise, n1, n2, false);
    for (w, h) in noise.iter_mut().zip(&spectrum) {
        *w *= h;
    }
    fft2(&mut noise, n1, n2, true);
    let n = (n1 * n2) as f64;
    let mut field: Vec<f64> = noise.iter().map(|c| c.re / n).collect();

    let std = stats::sample_std(&field);
    if !(std > 0.0) {
        return Err(Error::invalid("shadowing", "synthesized field has zero variance"));
    }
    let scale = params.sigma_sh / std;
    for v in &mut field {
        *v *= scale;
    }
    Ok(field)
}
