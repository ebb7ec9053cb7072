//! Concentration bounds, interval estimates and seed derivation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// `e^{−2ε²k/r²}`
pub fn hoeffding_tail(epsilon: f64, r: f64, k: u64) -> Result<f64> {
    if epsilon.is_nan() || r.is_nan() || epsilon <= 0.0 || r <= 0.0 || k == 0 {
        return Err(Error::param(format!(
            "Hoeffding tail needs epsilon > 0, r > 0, k >= 1 (got {epsilon}, {r}, {k})"
        )));
    }
    Ok((-2.0 * epsilon * epsilon * k as f64 / (r * r)).exp())
}

/// Union-bound completeness guarantee `1 − υ·N·e^{−2ε²k/r²}`.
pub fn completeness_bound(upsilon: u64, n: u64, epsilon: f64, r: f64, k: u64) -> Result<f64> {
    Ok(1.0 - (upsilon * n) as f64 * hoeffding_tail(epsilon, r, k)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingBound {
    pub epsilon: f64,
    pub r: f64,
    pub k: u64,
    pub bound: f64,
}

impl HoeffdingBound {
    pub fn new(epsilon: f64, r: f64, k: u64) -> Result<Self> {
        Ok(HoeffdingBound {
            epsilon,
            r,
            k,
            bound: hoeffding_tail(epsilon, r, k)?,
        })
    }
}

/// Wilson score interval at the given two-sided confidence level.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::param(format!("invalid counts {successes}/{trials}")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::param(format!("confidence {confidence} outside (0, 1)")));
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    Ok((lo.min(p), hi.max(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEstimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    /// 95% Wilson interval.
    pub interval: (f64, f64),
}

impl FrequencyEstimate {
    pub fn new(successes: u64, trials: u64) -> Result<Self> {
        let interval = wilson_interval(successes, trials, 0.95)?;
        Ok(FrequencyEstimate {
            successes,
            trials,
            estimate: successes as f64 / trials as f64,
            interval,
        })
    }

    pub fn contains(&self, p: f64) -> bool {
        self.interval.0 <= p && p <= self.interval.1
    }

    /// Binomial standard error `sqrt(p̂(1−p̂)/n)`.
    pub fn std_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Sub-seed for trial `index` of a run seeded with `master`.
///
/// `x = master + (index + 1)·0x9E3779B97F4A7C15 (mod 2⁶⁴)` followed by the
/// SplitMix64 finalizer. Both steps are bijections, so distinct indices
/// under one master seed never collide.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// ChaCha8 stream for one trial.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoeffding_examples() {
        assert!((hoeffding_tail(1.0, 1.0, 1).unwrap() - (-2f64).exp()).abs() < 1e-15);
        let a = hoeffding_tail(0.3, 2.0, 5).unwrap();
        let b = hoeffding_tail(0.3, 2.0, 50).unwrap();
        assert!((b.ln() - 10.0 * a.ln()).abs() < 1e-12);
        assert!(hoeffding_tail(0.0, 1.0, 1).is_err());
        assert!(hoeffding_tail(0.1, -1.0, 1).is_err());
        assert!(hoeffding_tail(0.1, 1.0, 0).is_err());
    }

    #[test]
    fn completeness_bound_at_tail_e_minus_4() {
        // 2ε²k/r² = 4 with ε = 1, r = 1, k = 2.
        let b = completeness_bound(3, 4, 1.0, 1.0, 2).unwrap();
        assert!((b - (1.0 - 12.0 * (-4f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn hoeffding_monotone() {
        let mut prev = 1.0;
        for k in 1..50 {
            let t = hoeffding_tail(0.2, 1.5, k).unwrap();
            assert!(t < prev);
            prev = t;
        }
        assert!(hoeffding_tail(0.3, 1.5, 10).unwrap() < hoeffding_tail(0.2, 1.5, 10).unwrap());
    }

    #[test]
    fn wilson_examples() {
        assert_eq!(wilson_interval(0, 20, 0.95).unwrap().0, 0.0);
        assert_eq!(wilson_interval(20, 20, 0.95).unwrap().1, 1.0);
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        assert!((lo - 0.403_831_530_365_995_6).abs() < 1e-9, "{lo}");
        assert!((hi - 0.596_168_469_634_004_4).abs() < 1e-9, "{hi}");
        assert!(wilson_interval(5, 4, 0.95).is_err());
        assert!(wilson_interval(0, 0, 0.95).is_err());
    }

    #[test]
    fn seed_derivation_golden_vectors() {
        let golden = [
            ((0, 0), 0xE220_A839_7B1D_CDAF),
            ((0, 1), 0x6E78_9E6A_A1B9_65F4),
            ((42, 0), 0xBDD7_3226_2FEB_6E95),
            ((42, 7), 0xCCF6_35EE_9E9E_2FA4),
            ((u64::MAX, 3), 0x6D1D_B36C_CBA9_82D2),
        ];
        for ((m, i), want) in golden {
            assert_eq!(derive_seed(m, i), want, "derive_seed({m}, {i})");
        }
    }

    #[test]
    fn seed_derivation_distinct_and_deterministic() {
        for s in [0u64, 1, 99, u64::MAX] {
            assert_ne!(derive_seed(s, 0), derive_seed(s, 1));
            assert_eq!(derive_seed(s, 5), derive_seed(s, 5));
        }
    }
}
