//! Small descriptive statistics used by the simulations and their tests.

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 divisor). Zero for fewer than two
/// samples.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Standard error of the mean.
pub fn std_error(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    sample_std(xs) / (xs.len() as f64).sqrt()
}

/// Standard deviation of a binomial proportion estimate with success
/// probability `p` over `n` trials.
pub fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Normalized empirical autocorrelation of a row-major `n1 × n2` field at
/// integer lag `lag` (in samples), averaged over both grid axes.
///
/// Pairs are taken without wrap-around; the field mean is removed and the
/// result is divided by the biased sample variance.
pub fn axis_autocorrelation(field: &[f64], n1: usize, n2: usize, lag: usize) -> f64 {
    assert_eq!(field.len(), n1 * n2);
    let m = mean(field);
    let var = field.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / field.len() as f64;
    if lag == 0 {
        return 1.0;
    }
    let at = |i: usize, j: usize| field[j * n1 + i] - m;
    let mut acc = 0.0;
    let mut count = 0usize;
    // along columns index i (x axis)
    for j in 0..n2 {
        for i in 0..n1.saturating_sub(lag) {
            acc += at(i, j) * at(i + lag, j);
            count += 1;
        }
    }
    // along rows index j (y axis)
    for j in 0..n2.saturating_sub(lag) {
        for i in 0..n1 {
            acc += at(i, j) * at(i, j + lag);
            count += 1;
        }
    }
    if count == 0 {
        return f64::NAN;
    }
    acc / count as f64 / var
}

/// Autocorrelation at a fractional lag, linearly interpolated between the
/// neighbouring integer lags.
pub fn axis_autocorrelation_at(field: &[f64], n1: usize, n2: usize, lag: f64) -> f64 {
    assert!(lag >= 0.0);
    let lo = lag.floor() as usize;
    let frac = lag - lo as f64;
    let r_lo = axis_autocorrelation(field, n1, n2, lo);
    if frac == 0.0 {
        return r_lo;
    }
    let r_hi = axis_autocorrelation(field, n1, n2, lo + 1);
    r_lo + frac * (r_hi - r_lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_std() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert!((sample_std(&xs) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(sample_std(&[3.0]), 0.0);
    }

    #[test]
    fn autocorrelation_of_alternating_field() {
        // +1/-1 checkerboard: lag 1 fully anti-correlated, lag 2 correlated
        let (n1, n2) = (6, 6);
        let f: Vec<f64> = (0..n1 * n2)
            .map(|k| if (k % n1 + k / n1) % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        assert!((axis_autocorrelation(&f, n1, n2, 1) + 1.0).abs() < 1e-12);
        assert!((axis_autocorrelation(&f, n1, n2, 2) - 1.0).abs() < 1e-12);
        assert!(axis_autocorrelation_at(&f, n1, n2, 1.5).abs() < 1e-12);
    }
}
