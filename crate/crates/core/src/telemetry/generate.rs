//! Synthetic dataset generator: benign plant dynamics with four injected
//! attack scenarios at fixed ground-truth indices.
//!
//! Each attack's signal begins `SIGNAL_LEAD` (= window length - 1) samples
//! before its labeled interval. A trailing window that ends at the interval
//! start is then fully inside the manipulated signal, and the rule set is
//! shaped so that it fires on fully-manipulated windows and abstains on
//! partially-covered ones. That keeps stabilized alarms index-aligned with
//! the labels.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{GroundTruthInterval, ScenarioLabel, TelemetryRecord};

/// Samples per window at the 1 Hz plant rate; "30-second window" = 30 samples.
pub const WINDOW_LEN: usize = 30;

/// How many samples before a labeled interval the attack signal starts.
pub const SIGNAL_LEAD: usize = WINDOW_LEN - 1;

// Benign dynamics (normalized units).
const LIT_BASE: f64 = 0.70;
const LIT_AMP: f64 = 0.06;
const LIT_PERIOD: f64 = 600.0;
const LIT_PHASE: f64 = 125.0;
const LIT_NOISE: f64 = 0.012;
const FIT_ON: f64 = 0.62;
const FIT_OFF: f64 = 0.04;
const FIT_NOISE: f64 = 0.006;
const AIT_BASE: f64 = 0.45;
const AIT_AMP: f64 = 0.03;
const AIT_PERIOD: f64 = 900.0;
const AIT_PHASE: f64 = 200.0;
const AIT_NOISE: f64 = 0.008;
// P101 duty cycle: on 340 s, off 260 s.
const PUMP_PERIOD: usize = 600;
const PUMP_ON: usize = 340;
const PUMP_OFFSET: usize = 130;

// Spoofing: reading dips well below the real level, then ramps up steadily
// (a faked refill) until it rejoins the benign trajectory.
const SPOOF_LABEL_START: usize = 200;
const SPOOF_LABEL_END: usize = 229;
const SPOOF_SIGNAL_START: usize = SPOOF_LABEL_START - SIGNAL_LEAD; // 171
const SPOOF_SIGNAL_END: usize = 208;
const SPOOF_DIP: f64 = 0.65;
const SPOOF_NOISE: f64 = 0.002;

// Valve forcing: MV101 flips every second for 11 s with matching flow
// oscillation, then the valve is left in its normal open state for the rest
// of the labeled interval.
const VALVE_LABEL_START: usize = 500;
const VALVE_LABEL_END: usize = 539;
const VALVE_OSC_END: usize = 510;
const VALVE_OSC_AMP: f64 = 0.06;
const VALVE_NOISE: f64 = 0.004;

// Sensor-freezing DoS: all three sensors stick at (last value + offset).
const FREEZE_LABEL_START: usize = 900;
const FREEZE_LABEL_END: usize = 949;
const FREEZE_SIGNAL_START: usize = FREEZE_LABEL_START - SIGNAL_LEAD; // 871
const FREEZE_OFFSET: f64 = 0.02;

// Bias drift: the level reading is replaced by a clean slow ramp anchored
// below the true level.
const DRIFT_LABEL_START: usize = 1200;
const DRIFT_LABEL_END: usize = 1279;
const DRIFT_SIGNAL_START: usize = DRIFT_LABEL_START - SIGNAL_LEAD; // 1171
const DRIFT_DROP: f64 = 0.35;
const DRIFT_RATE: f64 = 0.0063;
const DRIFT_NOISE: f64 = 0.001;

/// The four labeled attack intervals.
pub fn scenario_intervals() -> Vec<GroundTruthInterval> {
    vec![
        GroundTruthInterval {
            scenario: ScenarioLabel::Spoofing,
            start: SPOOF_LABEL_START,
            end: SPOOF_LABEL_END,
        },
        GroundTruthInterval {
            scenario: ScenarioLabel::ValveForcing,
            start: VALVE_LABEL_START,
            end: VALVE_LABEL_END,
        },
        GroundTruthInterval {
            scenario: ScenarioLabel::FreezeDos,
            start: FREEZE_LABEL_START,
            end: FREEZE_LABEL_END,
        },
        GroundTruthInterval {
            scenario: ScenarioLabel::BiasDrift,
            start: DRIFT_LABEL_START,
            end: DRIFT_LABEL_END,
        },
    ]
}

/// Index regions carrying manipulated signal (labeled interval plus lead-in).
/// Anything outside these regions is natural benign data.
pub fn attack_signal_regions() -> Vec<(usize, usize)> {
    vec![
        (SPOOF_SIGNAL_START, SPOOF_LABEL_END),
        (VALVE_LABEL_START, VALVE_LABEL_END),
        (FREEZE_SIGNAL_START, FREEZE_LABEL_END),
        (DRIFT_SIGNAL_START, DRIFT_LABEL_END),
    ]
}

/// Sidecar metadata written next to a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub window: usize,
    pub signal_lead: usize,
    pub intervals: Vec<GroundTruthInterval>,
    pub signal_regions: Vec<(usize, usize)>,
    /// Engineering-unit scale per tag; stored values are raw / scale.
    pub scales: BTreeMap<String, f64>,
}

impl DatasetMetadata {
    pub fn for_generated() -> Self {
        let mut scales = BTreeMap::new();
        scales.insert("LIT101".to_string(), 1000.0); // mm
        scales.insert("FIT101".to_string(), 4.0); // m^3/h
        scales.insert("AIT402".to_string(), 500.0); // analyzer units
        DatasetMetadata {
            window: WINDOW_LEN,
            signal_lead: SIGNAL_LEAD,
            intervals: scenario_intervals(),
            signal_regions: attack_signal_regions(),
            scales,
        }
    }
}

fn lit_det(t: usize) -> f64 {
    LIT_BASE + LIT_AMP * (TAU * (t as f64 + LIT_PHASE) / LIT_PERIOD).sin()
}

fn ait_det(t: usize) -> f64 {
    AIT_BASE + AIT_AMP * (TAU * (t as f64 + AIT_PHASE) / AIT_PERIOD).sin()
}

fn pump_on(t: usize) -> bool {
    (t + PUMP_OFFSET) % PUMP_PERIOD < PUMP_ON
}

fn fit_det(t: usize) -> f64 {
    if pump_on(t) {
        FIT_ON
    } else {
        FIT_OFF
    }
}

/// Generate `n` records (clamped to at least 1400) with benign dynamics
/// everywhere outside the four attack signal regions. Deterministic for a
/// fixed seed; a longer run is a prefix-extension of a shorter one.
pub fn generate_dataset(seed: u64, n: usize) -> Vec<TelemetryRecord> {
    let n = n.max(1400);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut benign_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records: Vec<TelemetryRecord> = (0..n)
        .map(|t| {
            let lit = lit_det(t) + LIT_NOISE * normal.sample(&mut benign_rng);
            let fit = fit_det(t) + FIT_NOISE * normal.sample(&mut benign_rng);
            let ait = ait_det(t) + AIT_NOISE * normal.sample(&mut benign_rng);
            TelemetryRecord {
                index: t,
                lit101: lit,
                fit101: fit,
                ait402: ait,
                mv101: 2,
                p101: if pump_on(t) { 2 } else { 1 },
                label: ScenarioLabel::Benign,
            }
        })
        .collect();

    let mut attack_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);

    // Spoofing: dip then ramp back to the benign trajectory at SPOOF_SIGNAL_END + 1.
    let dip_level = lit_det(SPOOF_SIGNAL_START - 1) - SPOOF_DIP;
    let span = (SPOOF_SIGNAL_END + 1 - SPOOF_SIGNAL_START) as f64;
    let ramp_rate = (lit_det(SPOOF_SIGNAL_END + 1) - dip_level) / span;
    for t in SPOOF_SIGNAL_START..=SPOOF_SIGNAL_END {
        let k = (t - SPOOF_SIGNAL_START) as f64;
        records[t].lit101 =
            dip_level + ramp_rate * k + SPOOF_NOISE * normal.sample(&mut attack_rng);
    }

    // Valve forcing: alternate MV101 each second with a matching flow swing.
    for t in VALVE_LABEL_START..=VALVE_OSC_END {
        let even = (t - VALVE_LABEL_START) % 2 == 0;
        records[t].mv101 = if even { 1 } else { 2 };
        let dev = if even { VALVE_OSC_AMP } else { -VALVE_OSC_AMP };
        records[t].fit101 = fit_det(t) + dev + VALVE_NOISE * normal.sample(&mut attack_rng);
    }

    // Sensor freeze: stick every sensor at its pre-freeze value plus a fixed
    // offset. Exactly constant, so freeze ratios are 1 and variance is 0.
    let anchor = records[FREEZE_SIGNAL_START - 1].clone();
    for t in FREEZE_SIGNAL_START..=FREEZE_LABEL_END {
        records[t].lit101 = anchor.lit101 + FREEZE_OFFSET;
        records[t].fit101 = anchor.fit101 + FREEZE_OFFSET;
        records[t].ait402 = anchor.ait402 + FREEZE_OFFSET;
    }

    // Bias drift: replace the level reading with a low-noise ramp that starts
    // below the true level and creeps upward.
    let drift_anchor = lit_det(DRIFT_SIGNAL_START - 1) - DRIFT_DROP;
    for t in DRIFT_SIGNAL_START..=DRIFT_LABEL_END {
        let k = (t + 1 - DRIFT_SIGNAL_START) as f64;
        records[t].lit101 =
            drift_anchor + DRIFT_RATE * k + DRIFT_NOISE * normal.sample(&mut attack_rng);
    }

    for interval in scenario_intervals() {
        for t in interval.start..=interval.end {
            records[t].label = interval.scenario;
        }
    }

    records
}
