//! Challenge drawing, response models and the logarithmic verification test.
//!
//! Under the legitimate hypothesis the measured attenuation is the challenge
//! plus unit-rate exponential fading (in dB); under attack it is a uniform
//! guess over the attenuation range. The verifier accepts iff the deviation
//! `observed − challenge` falls in `[0, −ln p_fa]`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    /// H0: the message comes from the legitimate transmitter.
    Legit,
    /// H1: the message comes from an impersonator.
    Attack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Accept,
    Reject,
}

/// Verifier threshold configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifierConfig {
    /// Target false-alarm probability.
    pub p_fa: f64,
    /// Width of the acceptance interval above the challenge, dB.
    pub interval: f64,
}

impl VerifierConfig {
    pub fn new(p_fa: f64) -> Result<Self> {
        if !(p_fa > 0.0 && p_fa < 1.0) {
            return Err(Error::invalid("p_fa", format!("must be in (0, 1), got {p_fa}")));
        }
        Ok(VerifierConfig {
            p_fa,
            interval: -p_fa.ln(),
        })
    }

    /// LT threshold equivalent to the acceptance interval.
    pub fn threshold(&self) -> f64 {
        self.p_fa
    }
}

/// One verification attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuthTrial {
    pub challenge: f64,
    pub observed: f64,
    pub hypothesis: Hypothesis,
    pub decision: Decision,
}

impl AuthTrial {
    pub fn run<R: Rng + ?Sized>(
        challenge: f64,
        hypothesis: Hypothesis,
        attack_range: (f64, f64),
        config: &VerifierConfig,
        rng: &mut R,
    ) -> Result<Self> {
        let observed = match hypothesis {
            Hypothesis::Legit => sample_legit_response(challenge, rng),
            Hypothesis::Attack => sample_attack_response(attack_range.0, attack_range.1, rng)?,
        };
        Ok(AuthTrial {
            challenge,
            observed,
            hypothesis,
            decision: verify(observed, challenge, config),
        })
    }

    /// Whether the decision is wrong for the ground truth.
    pub fn is_error(&self) -> bool {
        matches!(
            (self.hypothesis, self.decision),
            (Hypothesis::Legit, Decision::Reject) | (Hypothesis::Attack, Decision::Accept)
        )
    }
}

/// Uniform draw from the challenge set.
pub fn draw_challenge<R: Rng + ?Sized>(challenges: &[f64], rng: &mut R) -> Result<f64> {
    if challenges.is_empty() {
        return Err(Error::EmptyChallengeSet);
    }
    Ok(challenges[rng.random_range(0..challenges.len())])
}

/// Legitimate response: challenge plus Exp(1) fading, dB.
pub fn sample_legit_response<R: Rng + ?Sized>(challenge: f64, rng: &mut R) -> f64 {
    let fading: f64 = Exp1.sample(rng);
    challenge + fading
}

/// Random-guessing attack: uniform on `[range_min, range_max]`.
pub fn sample_attack_response<R: Rng + ?Sized>(
    range_min: f64,
    range_max: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(range_max >= range_min) || !range_min.is_finite() || !range_max.is_finite() {
        return Err(Error::invalid(
            "attack range",
            format!("[{range_min}, {range_max}] is not a valid interval"),
        ));
    }
    let u: f64 = rng.random();
    Ok(range_min + (range_max - range_min) * u)
}

/// Likelihood of `observed` under H0: `𝟙(d)·exp(−d)` with `d = observed −
/// challenge` and `𝟙(0) = 1`.
pub fn lt_statistic(observed: f64, challenge: f64) -> f64 {
    let d = observed - challenge;
    if d >= 0.0 {
        (-d).exp()
    } else {
        0.0
    }
}

/// Logarithmic test. Accepts iff `0 ≤ observed − challenge ≤ |I|`, both
/// ends closed.
pub fn verify(observed: f64, challenge: f64, config: &VerifierConfig) -> Decision {
    let d = observed - challenge;
    if d >= 0.0 && d <= config.interval {
        Decision::Accept
    } else {
        Decision::Reject
    }
}

/// Missed-detection probability when challenge and guess are independent
/// uniforms over a range of width `range_r`.
///
/// Equals `1/2 − (r + ln p_fa)²/(2r²)` while the acceptance interval fits in
/// the range, and saturates at 1/2 once `−ln p_fa ≥ r`.
pub fn analytic_pmd(range_r: f64, p_fa: f64) -> Result<f64> {
    if !(range_r > 0.0 && range_r.is_finite()) {
        return Err(Error::invalid("range_r", format!("must be > 0, got {range_r}")));
    }
    if !(p_fa > 0.0 && p_fa < 1.0) {
        return Err(Error::invalid("p_fa", format!("must be in (0, 1), got {p_fa}")));
    }
    let interval = (-p_fa.ln()).min(range_r);
    let gap = range_r - interval;
    Ok(0.5 - gap * gap / (2.0 * range_r * range_r))
}

/// One point of a simulated DET curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetPoint {
    pub p_fa_target: f64,
    pub p_fa_empirical: f64,
    pub p_md_empirical: f64,
}

/// Monte Carlo FA/MD rates for each target false-alarm probability.
///
/// Challenges and attack guesses are continuous uniforms on `[0, range_r]`;
/// each point uses `trials` legitimate and `trials` attack attempts.
pub fn simulate_det<R: Rng + ?Sized>(
    range_r: f64,
    p_fa_grid: &[f64],
    trials: usize,
    rng: &mut R,
) -> Result<Vec<DetPoint>> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be >= 1"));
    }
    if !(range_r >= 0.0 && range_r.is_finite()) {
        return Err(Error::invalid("range_r", format!("must be >= 0, got {range_r}")));
    }
    let configs = p_fa_grid
        .iter()
        .map(|&p| VerifierConfig::new(p))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(configs.len());
    for config in &configs {
        let mut false_alarms = 0usize;
        let mut missed = 0usize;
        for _ in 0..trials {
            let challenge = sample_attack_response(0.0, range_r, rng)?;
            let observed = sample_legit_response(challenge, rng);
            if verify(observed, challenge, config) == Decision::Reject {
                false_alarms += 1;
            }
        }
        for _ in 0..trials {
            let challenge = sample_attack_response(0.0, range_r, rng)?;
            let guess = sample_attack_response(0.0, range_r, rng)?;
            if verify(guess, challenge, config) == Decision::Accept {
                missed += 1;
            }
        }
        out.push(DetPoint {
            p_fa_target: config.p_fa,
            p_fa_empirical: false_alarms as f64 / trials as f64,
            p_md_empirical: missed as f64 / trials as f64,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::binomial_sigma;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Independent Monte Carlo estimate of P(0 ≤ b − a ≤ interval) for
    /// a, b ~ U[0, r], drawn with a plain `random::<f64>()` stream.
    fn monte_carlo_pmd(r: f64, interval: f64, n: usize, seed: u64) -> f64 {
        let mut g = rng(seed);
        let hits = (0..n)
            .filter(|_| {
                let a = r * g.random::<f64>();
                let b = r * g.random::<f64>();
                let d = b - a;
                (0.0..=interval).contains(&d)
            })
            .count();
        hits as f64 / n as f64
    }

    #[test]
    fn interval_from_pfa() {
        let c = VerifierConfig::new((-2.0f64).exp()).unwrap();
        assert!((c.interval - 2.0).abs() < 1e-15);
        assert!(VerifierConfig::new(0.0).is_err());
        assert!(VerifierConfig::new(1.0).is_err());
        assert!(VerifierConfig::new(f64::NAN).is_err());
    }

    #[test]
    fn draw_from_singleton_and_empty() {
        let mut g = rng(1);
        for _ in 0..100 {
            assert_eq!(draw_challenge(&[63.0], &mut g).unwrap(), 63.0);
        }
        assert!(matches!(
            draw_challenge(&[], &mut g),
            Err(Error::EmptyChallengeSet)
        ));
    }

    #[test]
    fn draw_is_uniform() {
        let mut g = rng(2);
        let n = 100_000;
        let sixties = (0..n)
            .filter(|_| draw_challenge(&[60.0, 70.0], &mut g).unwrap() == 60.0)
            .count();
        assert!((sixties as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn draw_depends_only_on_stream() {
        let set = [1.0, 2.0, 3.0, 4.0];
        let a: Vec<f64> = {
            let mut g = rng(5);
            (0..50).map(|_| draw_challenge(&set, &mut g).unwrap()).collect()
        };
        let b: Vec<f64> = {
            let mut g = rng(5);
            (0..50).map(|_| draw_challenge(&set, &mut g).unwrap()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn legit_fading_statistics() {
        let mut g = rng(3);
        let n = 100_000;
        let devs: Vec<f64> = (0..n)
            .map(|_| sample_legit_response(70.0, &mut g) - 70.0)
            .collect();
        assert!(devs.iter().all(|&d| d >= 0.0));
        let mean = devs.iter().sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        let tail = devs.iter().filter(|&&d| d > 2.0).count() as f64 / n as f64;
        assert!((tail - (-2f64).exp()).abs() < 0.004, "tail {tail}");
    }

    #[test]
    fn attack_uniform_statistics() {
        let mut g = rng(4);
        assert_eq!(sample_attack_response(5.0, 5.0, &mut g).unwrap(), 5.0);
        assert!(sample_attack_response(6.0, 5.0, &mut g).is_err());
        let (lo, hi) = (60.0, 100.0);
        let n = 100_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_attack_response(lo, hi, &mut g).unwrap())
            .collect();
        assert!(xs.iter().all(|x| (lo..=hi).contains(x)));
        let r: f64 = hi - lo;
        let mean = crate::stats::mean(&xs);
        let sigma_mean = r / 12f64.sqrt() / (n as f64).sqrt();
        assert!((mean - 80.0).abs() < 3.0 * sigma_mean);
        let var = crate::stats::sample_std(&xs).powi(2);
        assert!((var / (r * r / 12.0) - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn verify_boundaries() {
        let c = VerifierConfig::new((-2.0f64).exp()).unwrap();
        assert_eq!(verify(70.0, 70.0, &c), Decision::Accept);
        assert_eq!(verify(69.9, 70.0, &c), Decision::Reject);
        assert_eq!(verify(71.5, 70.0, &c), Decision::Accept);
        assert_eq!(verify(72.5, 70.0, &c), Decision::Reject);
        let exact = VerifierConfig {
            p_fa: 0.5,
            interval: 2.0,
        };
        assert_eq!(verify(2.0, 0.0, &exact), Decision::Accept);
    }

    #[test]
    fn verify_matches_lt_threshold() {
        let c = VerifierConfig::new(0.2).unwrap();
        let mut g = rng(6);
        for _ in 0..10_000 {
            let a: f64 = 60.0 + 10.0 * g.random::<f64>();
            let o: f64 = a - 1.0 + 4.0 * g.random::<f64>();
            let by_lt = lt_statistic(o, a) >= c.threshold();
            let d = o - a;
            // away from the boundary the two forms agree exactly
            if (d - c.interval).abs() > 1e-9 {
                assert_eq!(by_lt, verify(o, a, &c) == Decision::Accept, "d = {d}");
            }
        }
    }

    #[test]
    fn analytic_pmd_values() {
        assert!((analytic_pmd(10.0, (-1f64).exp()).unwrap() - 0.095).abs() < 1e-12);
        assert!((analytic_pmd(20.0, 0.01).unwrap() - 0.203_75).abs() < 1e-4);
        assert!(analytic_pmd(10.0, 1.0 - 1e-12).unwrap() < 1e-10);
        assert_eq!(analytic_pmd(1.0, 1e-6).unwrap(), 0.5);
        assert!(analytic_pmd(0.0, 0.1).is_err());
        assert!(analytic_pmd(-1.0, 0.1).is_err());
    }

    #[test]
    fn analytic_pmd_agrees_with_monte_carlo() {
        let n = 200_000;
        for &(r, p) in &[(10.0, (-1f64).exp()), (20.0, 0.01), (5.0, 0.001), (2.0, 0.5)] {
            let mc = monte_carlo_pmd(r, -f64::ln(p), n, 11);
            let an = analytic_pmd(r, p).unwrap();
            assert!(
                (mc - an).abs() < 3.0 * binomial_sigma(an, n),
                "r={r} p={p}: mc {mc} vs {an}"
            );
        }
    }

    #[test]
    fn analytic_pmd_monotonicity() {
        // grows with the acceptance interval at fixed r
        let ps = [0.9, 0.5, 0.2, 0.1, 0.05, 0.01, 1e-3, 1e-4];
        for &r in &[5.0, 10.0, 20.0, 40.0] {
            let v: Vec<f64> = ps.iter().map(|&p| analytic_pmd(r, p).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] >= w[0]));
        }
        // a wider range makes guessing harder: at fixed p_fa the missed
        // detection rate falls as r grows
        let rs = [5.0, 10.0, 20.0, 40.0, 80.0];
        let v: Vec<f64> = rs.iter().map(|&r| analytic_pmd(r, 0.01).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] < w[0]), "{v:?}");
    }

    #[test]
    fn simulated_det_rates() {
        let n = 100_000;
        let pts = simulate_det(10.0, &[0.5, (-1f64).exp()], n, &mut rng(7)).unwrap();
        assert!((pts[0].p_fa_empirical - 0.5).abs() < 0.005);
        assert!((pts[1].p_md_empirical - 0.095).abs() < 0.003);
        let again = simulate_det(10.0, &[0.5, (-1f64).exp()], n, &mut rng(7)).unwrap();
        assert_eq!(pts, again);
        assert!(simulate_det(10.0, &[0.5], 0, &mut rng(7)).is_err());
        assert!(simulate_det(10.0, &[1.5], 10, &mut rng(7)).is_err());
    }
}
