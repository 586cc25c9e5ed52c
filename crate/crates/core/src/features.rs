//! Behavioral descriptors computed per window: least-squares slopes, rolling
//! standard deviations, amplitude ranges, flatness and freeze ratios, and
//! actuator toggle statistics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::telemetry::{Tag, Window, ACTUATOR_ACTIVE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Delta magnitude below which a step counts as flat.
    pub epsilon_flat: f64,
    /// Delta magnitude at or below which a step counts as frozen.
    pub freeze_epsilon: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            epsilon_flat: 1e-3,
            freeze_epsilon: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SensorFeatures {
    /// Least-squares linear-fit slope, units per sample.
    pub slope: f64,
    /// Population standard deviation.
    pub std: f64,
    /// max - min.
    pub range: f64,
    /// Fraction of consecutive deltas with |delta| < epsilon_flat.
    pub flatness_ratio: f64,
    /// Fraction of consecutive deltas with |delta| <= freeze_epsilon.
    pub freeze_ratio: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ActuatorFeatures {
    /// Count of consecutive pairs with differing states.
    pub toggle_count: usize,
    /// Fraction of samples in the active (open/on) state.
    pub active_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub lit101: SensorFeatures,
    pub fit101: SensorFeatures,
    pub ait402: SensorFeatures,
    pub mv101: ActuatorFeatures,
    pub p101: ActuatorFeatures,
    pub window_end_index: usize,
    pub window_len: usize,
    /// Number of windows processed before this one in the current run.
    pub history_len: usize,
    /// Running mean of the LIT101 per-window variance over the run so far.
    pub history_variance: f64,
}

impl FeatureVector {
    pub fn sensor(&self, tag: Tag) -> Option<&SensorFeatures> {
        match tag {
            Tag::Lit101 => Some(&self.lit101),
            Tag::Fit101 => Some(&self.fit101),
            Tag::Ait402 => Some(&self.ait402),
            _ => None,
        }
    }

    pub fn actuator(&self, tag: Tag) -> Option<&ActuatorFeatures> {
        match tag {
            Tag::Mv101 => Some(&self.mv101),
            Tag::P101 => Some(&self.p101),
            _ => None,
        }
    }

    pub fn max_freeze_ratio(&self) -> f64 {
        self.lit101
            .freeze_ratio
            .max(self.fit101.freeze_ratio)
            .max(self.ait402.freeze_ratio)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("series too short: {len} samples, need at least {min}")]
    TooShort { len: usize, min: usize },
}

fn require(series_len: usize, min: usize) -> Result<(), FeatureError> {
    if series_len < min {
        Err(FeatureError::TooShort {
            len: series_len,
            min,
        })
    } else {
        Ok(())
    }
}

/// Least-squares linear-fit slope over sample positions 0..L-1.
pub fn slope(series: &[f64]) -> Result<f64, FeatureError> {
    require(series.len(), 2)?;
    let n = series.len() as f64;
    let t_mean = (n - 1.0) / 2.0;
    let x_mean = series.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, x) in series.iter().enumerate() {
        let dt = t as f64 - t_mean;
        num += dt * (x - x_mean);
        den += dt * dt;
    }
    Ok(num / den)
}

/// Population standard deviation (divide by L).
pub fn rolling_std(series: &[f64]) -> Result<f64, FeatureError> {
    require(series.len(), 2)?;
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Ok(var.sqrt())
}

pub fn amplitude_range(series: &[f64]) -> Result<f64, FeatureError> {
    require(series.len(), 1)?;
    let mut min = series[0];
    let mut max = series[0];
    for &x in &series[1..] {
        min = min.min(x);
        max = max.max(x);
    }
    Ok(max - min)
}

pub fn flatness_ratio(series: &[f64], epsilon_flat: f64) -> Result<f64, FeatureError> {
    require(series.len(), 2)?;
    let pairs = series.len() - 1;
    let flat = series
        .windows(2)
        .filter(|p| (p[1] - p[0]).abs() < epsilon_flat)
        .count();
    Ok(flat as f64 / pairs as f64)
}

pub fn freeze_ratio_with(series: &[f64], freeze_epsilon: f64) -> Result<f64, FeatureError> {
    require(series.len(), 2)?;
    let pairs = series.len() - 1;
    let frozen = series
        .windows(2)
        .filter(|p| (p[1] - p[0]).abs() <= freeze_epsilon)
        .count();
    Ok(frozen as f64 / pairs as f64)
}

/// Fraction of consecutive deltas that are exactly zero (|delta| <= 1e-9).
pub fn freeze_ratio(series: &[f64]) -> Result<f64, FeatureError> {
    freeze_ratio_with(series, FeatureConfig::default().freeze_epsilon)
}

/// Count of consecutive pairs with differing states.
pub fn toggle_count(states: &[u8]) -> usize {
    states.windows(2).filter(|p| p[0] != p[1]).count()
}

pub fn active_fraction(states: &[u8]) -> f64 {
    if states.is_empty() {
        return 0.0;
    }
    states.iter().filter(|s| **s == ACTUATOR_ACTIVE).count() as f64 / states.len() as f64
}

/// Run-level history fed into feature extraction: how many windows have been
/// processed and the running mean of LIT101 window variance, which backs the
/// "sufficient historical variance" gate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HistoryStats {
    pub windows_processed: usize,
    pub lit101_variance_mean: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HistoryTracker {
    count: usize,
    variance_sum: f64,
}

impl HistoryTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stats(&self) -> HistoryStats {
        HistoryStats {
            windows_processed: self.count,
            lit101_variance_mean: if self.count == 0 {
                0.0
            } else {
                self.variance_sum / self.count as f64
            },
        }
    }

    pub fn observe(&mut self, lit101_std: f64) {
        self.count += 1;
        self.variance_sum += lit101_std * lit101_std;
    }
}

fn sensor_features(series: &[f64], cfg: &FeatureConfig) -> Result<SensorFeatures, FeatureError> {
    Ok(SensorFeatures {
        slope: slope(series)?,
        std: rolling_std(series)?,
        range: amplitude_range(series)?,
        flatness_ratio: flatness_ratio(series, cfg.epsilon_flat)?,
        freeze_ratio: freeze_ratio_with(series, cfg.freeze_epsilon)?,
    })
}

fn actuator_features(states: &[u8]) -> ActuatorFeatures {
    ActuatorFeatures {
        toggle_count: toggle_count(states),
        active_fraction: active_fraction(states),
    }
}

/// Pure function of (window, history, config).
pub fn extract_features(
    window: &Window,
    history: &HistoryStats,
    cfg: &FeatureConfig,
) -> Result<FeatureVector, FeatureError> {
    Ok(FeatureVector {
        lit101: sensor_features(&window.lit101, cfg)?,
        fit101: sensor_features(&window.fit101, cfg)?,
        ait402: sensor_features(&window.ait402, cfg)?,
        mv101: actuator_features(&window.mv101),
        p101: actuator_features(&window.p101),
        window_end_index: window.end_index,
        window_len: window.length,
        history_len: history.windows_processed,
        history_variance: history.lit101_variance_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Independent brute-force formulas the implementations are checked against.
    pub(crate) mod oracle {
        pub fn slope(x: &[f64]) -> f64 {
            let n = x.len() as f64;
            let t_mean = (0..x.len()).map(|t| t as f64).sum::<f64>() / n;
            let x_mean = x.iter().sum::<f64>() / n;
            let num: f64 = x
                .iter()
                .enumerate()
                .map(|(t, v)| (t as f64 - t_mean) * (v - x_mean))
                .sum();
            let den: f64 = (0..x.len())
                .map(|t| (t as f64 - t_mean) * (t as f64 - t_mean))
                .sum();
            num / den
        }

        pub fn std(x: &[f64]) -> f64 {
            let n = x.len() as f64;
            let mean = x.iter().sum::<f64>() / n;
            (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
        }

        pub fn range(x: &[f64]) -> f64 {
            let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
            max - min
        }

        pub fn flatness(x: &[f64], eps: f64) -> f64 {
            let mut flat = 0usize;
            for i in 1..x.len() {
                if (x[i] - x[i - 1]).abs() < eps {
                    flat += 1;
                }
            }
            flat as f64 / (x.len() - 1) as f64
        }

        pub fn freeze(x: &[f64]) -> f64 {
            let mut frozen = 0usize;
            for i in 1..x.len() {
                if (x[i] - x[i - 1]).abs() <= 1e-9 {
                    frozen += 1;
                }
            }
            frozen as f64 / (x.len() - 1) as f64
        }

        pub fn toggles(s: &[u8]) -> usize {
            let mut count = 0;
            for i in 1..s.len() {
                if s[i] != s[i - 1] {
                    count += 1;
                }
            }
            count
        }
    }

    fn random_series(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()
    }

    #[test]
    fn slope_of_constant_is_zero() {
        assert_eq!(slope(&[3.5; 30]).unwrap(), 0.0);
    }

    #[test]
    fn slope_of_linear_series_is_exact() {
        let series: Vec<f64> = (0..30).map(|t| 2.0 * t as f64).collect();
        assert_eq!(slope(&series).unwrap(), 2.0);
    }

    #[test]
    fn slope_matches_closed_form_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = random_series(&mut rng, 30);
            assert!((slope(&s).unwrap() - oracle::slope(&s)).abs() < 1e-12);
        }
    }

    #[test]
    fn std_and_range_basics() {
        assert_eq!(rolling_std(&[2.0; 10]).unwrap(), 0.0);
        assert_eq!(amplitude_range(&[2.0; 10]).unwrap(), 0.0);
        assert_eq!(rolling_std(&[0.0, 1.0]).unwrap(), 0.5);
        assert_eq!(amplitude_range(&[0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn std_and_range_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let s = random_series(&mut rng, 30);
            assert!((rolling_std(&s).unwrap() - oracle::std(&s)).abs() < 1e-12);
            assert!((amplitude_range(&s).unwrap() - oracle::range(&s)).abs() < 1e-12);
        }
    }

    #[test]
    fn flatness_extremes() {
        assert_eq!(flatness_ratio(&[1.0; 30], 1e-3).unwrap(), 1.0);
        let eps = 1e-3;
        let rising: Vec<f64> = (0..30).map(|t| t as f64 * 2.0 * eps).collect();
        assert_eq!(flatness_ratio(&rising, eps).unwrap(), 0.0);
    }

    #[test]
    fn flatness_pair_count_matches_oracle_on_half_flat_series() {
        let eps = 1e-3;
        let mut series = vec![0.0; 15];
        series.extend((0..15).map(|t| t as f64 * 0.01));
        let got = flatness_ratio(&series, eps).unwrap();
        assert_eq!(got, oracle::flatness(&series, eps));
        assert_eq!(got, 15.0 / 29.0); // 14 flat pairs within the plateau + the 0->0 joint
    }

    #[test]
    fn freeze_ratio_semantics() {
        assert_eq!(freeze_ratio(&[1.0; 30]).unwrap(), 1.0);
        let rising: Vec<f64> = (0..30).map(|t| t as f64 * 0.002).collect();
        assert_eq!(freeze_ratio(&rising).unwrap(), 0.0);
        let mut series = vec![5.0; 10];
        series.extend((0..20).map(|t| t as f64));
        assert_eq!(
            freeze_ratio(&series).unwrap(),
            oracle::freeze(&series)
        );
    }

    #[test]
    fn freeze_is_one_iff_series_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let s = random_series(&mut rng, 30);
            let fr = freeze_ratio(&s).unwrap();
            let constant = s.iter().all(|v| *v == s[0]);
            assert_eq!(fr == 1.0, constant);
        }
    }

    #[test]
    fn toggle_count_basics_and_oracle() {
        assert_eq!(toggle_count(&[1, 1, 1]), 0);
        assert_eq!(toggle_count(&[1, 2, 1, 2]), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..100 {
            let s: Vec<u8> = (0..30).map(|_| rng.random_range(0..=2)).collect();
            assert_eq!(toggle_count(&s), oracle::toggles(&s));
        }
    }

    #[test]
    fn too_short_series_are_rejected() {
        assert_eq!(
            slope(&[1.0]),
            Err(FeatureError::TooShort { len: 1, min: 2 })
        );
        assert!(rolling_std(&[1.0]).is_err());
        assert!(amplitude_range(&[]).is_err());
        assert!(flatness_ratio(&[1.0], 1e-3).is_err());
        assert!(freeze_ratio(&[1.0]).is_err());
    }

    #[test]
    fn shift_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let eps = 1e-3;
        for _ in 0..50 {
            let s = random_series(&mut rng, 30);
            let shifted: Vec<f64> = s.iter().map(|v| v + 7.25).collect();
            assert!((slope(&s).unwrap() - slope(&shifted).unwrap()).abs() < 1e-9);
            assert!((rolling_std(&s).unwrap() - rolling_std(&shifted).unwrap()).abs() < 1e-9);
            assert!(
                (amplitude_range(&s).unwrap() - amplitude_range(&shifted).unwrap()).abs() < 1e-9
            );
            assert!(
                (flatness_ratio(&s, eps).unwrap() - flatness_ratio(&shifted, eps).unwrap()).abs()
                    < 1e-9
            );
            assert!((freeze_ratio(&s).unwrap() - freeze_ratio(&shifted).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn scale_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let c = 3.5;
        let eps = 1e-3;
        for _ in 0..50 {
            let s = random_series(&mut rng, 30);
            let scaled: Vec<f64> = s.iter().map(|v| v * c).collect();
            assert!((slope(&scaled).unwrap() - c * slope(&s).unwrap()).abs() < 1e-9);
            assert!((rolling_std(&scaled).unwrap() - c * rolling_std(&s).unwrap()).abs() < 1e-9);
            assert!(
                (amplitude_range(&scaled).unwrap() - c * amplitude_range(&s).unwrap()).abs()
                    < 1e-9
            );
            // Ratios with a scaled epsilon are unchanged.
            assert!(
                (flatness_ratio(&scaled, eps * c).unwrap() - flatness_ratio(&s, eps).unwrap())
                    .abs()
                    < 1e-9
            );
        }
    }

    #[test]
    fn freeze_never_exceeds_flatness() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let mut s = random_series(&mut rng, 30);
            // Inject some exact repeats so the freeze ratio is non-trivial.
            for i in (5..25).step_by(3) {
                s[i] = s[i - 1];
            }
            let eps = 1e-2;
            assert!(freeze_ratio(&s).unwrap() <= flatness_ratio(&s, eps).unwrap());
        }
    }

    #[test]
    fn extract_features_on_generated_scenarios() {
        use crate::telemetry::{generate_dataset, slice_window};
        let records = generate_dataset(42, 1500);
        let cfg = FeatureConfig::default();
        let history = HistoryStats {
            windows_processed: 500,
            lit101_variance_mean: 1.5e-4,
        };

        // A fully frozen window: all three sensor channels frozen solid.
        let w = slice_window(&records, 929, 30).unwrap();
        let fv = extract_features(&w, &history, &cfg).unwrap();
        assert_eq!(fv.lit101.freeze_ratio, 1.0);
        assert_eq!(fv.fit101.freeze_ratio, 1.0);
        assert_eq!(fv.ait402.freeze_ratio, 1.0);

        // Benign windows never look frozen.
        for end in [100, 400, 700, 1100] {
            let w = slice_window(&records, end, 30).unwrap();
            let fv = extract_features(&w, &history, &cfg).unwrap();
            assert!(fv.lit101.freeze_ratio < 0.5);
            assert!(fv.fit101.freeze_ratio < 0.5);
            assert!(fv.ait402.freeze_ratio < 0.5);
        }

        // A valve-forcing window records the MV101 toggling.
        let w = slice_window(&records, 510, 30).unwrap();
        let fv = extract_features(&w, &history, &cfg).unwrap();
        assert!(fv.mv101.toggle_count >= 1);
        assert!(fv.fit101.range > 0.03);
    }

    #[test]
    fn history_tracker_averages_variance() {
        let mut tracker = HistoryTracker::new();
        assert_eq!(tracker.stats().lit101_variance_mean, 0.0);
        tracker.observe(0.01);
        tracker.observe(0.03);
        let stats = tracker.stats();
        assert_eq!(stats.windows_processed, 2);
        assert!((stats.lit101_variance_mean - (0.0001 + 0.0009) / 2.0).abs() < 1e-15);
    }
}
