//! Plant data model: the closed tag set, per-second telemetry records,
//! trailing windows sliced from them, and the labeled ground-truth intervals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod csv;
mod generate;

pub use csv::{parse_csv, parse_csv_reader, serialize_csv, write_csv};
pub use generate::{
    attack_signal_regions, generate_dataset, scenario_intervals, DatasetMetadata, SIGNAL_LEAD,
    WINDOW_LEN,
};

/// The five process tags this artifact understands. The set is closed:
/// anything else is rejected at parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Lit101,
    Fit101,
    Ait402,
    Mv101,
    P101,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagKind {
    Sensor,
    Actuator,
}

impl Tag {
    pub const ALL: [Tag; 5] = [Tag::Lit101, Tag::Fit101, Tag::Ait402, Tag::Mv101, Tag::P101];
    pub const SENSORS: [Tag; 3] = [Tag::Lit101, Tag::Fit101, Tag::Ait402];
    pub const ACTUATORS: [Tag; 2] = [Tag::Mv101, Tag::P101];

    pub fn kind(self) -> TagKind {
        match self {
            Tag::Lit101 | Tag::Fit101 | Tag::Ait402 => TagKind::Sensor,
            Tag::Mv101 | Tag::P101 => TagKind::Actuator,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Lit101 => "LIT101",
            Tag::Fit101 => "FIT101",
            Tag::Ait402 => "AIT402",
            Tag::Mv101 => "MV101",
            Tag::P101 => "P101",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        match s {
            "LIT101" => Some(Tag::Lit101),
            "FIT101" => Some(Tag::Fit101),
            "AIT402" => Some(Tag::Ait402),
            "MV101" => Some(Tag::Mv101),
            "P101" => Some(Tag::P101),
            _ => None,
        }
    }
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scenario label carried by every record. `Benign` everywhere except the
/// four injected attack intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioLabel {
    Benign,
    Spoofing,
    ValveForcing,
    FreezeDos,
    BiasDrift,
}

impl ScenarioLabel {
    pub const ATTACKS: [ScenarioLabel; 4] = [
        ScenarioLabel::Spoofing,
        ScenarioLabel::ValveForcing,
        ScenarioLabel::FreezeDos,
        ScenarioLabel::BiasDrift,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioLabel::Benign => "benign",
            ScenarioLabel::Spoofing => "spoofing",
            ScenarioLabel::ValveForcing => "valve_forcing",
            ScenarioLabel::FreezeDos => "freeze_dos",
            ScenarioLabel::BiasDrift => "bias_drift",
        }
    }

    pub fn parse(s: &str) -> Option<ScenarioLabel> {
        match s {
            "benign" => Some(ScenarioLabel::Benign),
            "spoofing" => Some(ScenarioLabel::Spoofing),
            "valve_forcing" => Some(ScenarioLabel::ValveForcing),
            "freeze_dos" => Some(ScenarioLabel::FreezeDos),
            "bias_drift" => Some(ScenarioLabel::BiasDrift),
            _ => None,
        }
    }
}

impl std::fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Actuator states: 0 = transitioning, 1 = closed/off, 2 = open/on.
pub const ACTUATOR_STATES: [u8; 3] = [0, 1, 2];
pub const ACTUATOR_ACTIVE: u8 = 2;

/// One synchronized plant sample at 1 Hz. Sensor values are normalized to
/// engineering-unit scale divided by a per-tag constant (see
/// [`DatasetMetadata::scales`]); actuator values are in {0, 1, 2}.
#[derive(Debug, Clone, PartialEq)]
pub struct TelemetryRecord {
    pub index: usize,
    pub lit101: f64,
    pub fit101: f64,
    pub ait402: f64,
    pub mv101: u8,
    pub p101: u8,
    pub label: ScenarioLabel,
}

impl TelemetryRecord {
    pub fn sensor(&self, tag: Tag) -> Option<f64> {
        match tag {
            Tag::Lit101 => Some(self.lit101),
            Tag::Fit101 => Some(self.fit101),
            Tag::Ait402 => Some(self.ait402),
            _ => None,
        }
    }

    pub fn actuator(&self, tag: Tag) -> Option<u8> {
        match tag {
            Tag::Mv101 => Some(self.mv101),
            Tag::P101 => Some(self.p101),
            _ => None,
        }
    }
}

/// A trailing window of contiguous samples ending at `end_index`. Every
/// series has exactly `length` entries covering indices
/// `[end_index - length + 1, end_index]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub end_index: usize,
    pub length: usize,
    pub lit101: Vec<f64>,
    pub fit101: Vec<f64>,
    pub ait402: Vec<f64>,
    pub mv101: Vec<u8>,
    pub p101: Vec<u8>,
    pub labels: Vec<ScenarioLabel>,
}

impl Window {
    pub fn start_index(&self) -> usize {
        self.end_index + 1 - self.length
    }

    pub fn sensor_series(&self, tag: Tag) -> Option<&[f64]> {
        match tag {
            Tag::Lit101 => Some(&self.lit101),
            Tag::Fit101 => Some(&self.fit101),
            Tag::Ait402 => Some(&self.ait402),
            _ => None,
        }
    }

    pub fn actuator_series(&self, tag: Tag) -> Option<&[u8]> {
        match tag {
            Tag::Mv101 => Some(&self.mv101),
            Tag::P101 => Some(&self.p101),
            _ => None,
        }
    }
}

/// Inclusive labeled attack interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthInterval {
    pub scenario: ScenarioLabel,
    pub start: usize,
    pub end: usize,
}

impl GroundTruthInterval {
    pub fn contains(&self, index: usize) -> bool {
        index >= self.start && index <= self.end
    }
}

#[derive(Debug, Error)]
pub enum TelemetryError {
    #[error("header is missing required tag column {0}")]
    MissingTag(String),
    #[error("non-contiguous index at data row {row}: expected {expected}, found {found}")]
    NonContiguousIndex {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("bad actuator state for {tag} at index {index}: {value} (must be 0, 1 or 2)")]
    BadActuatorState {
        tag: String,
        index: usize,
        value: String,
    },
    #[error("bad value in column {column} at data row {row}: {value:?}")]
    BadValue {
        column: String,
        row: usize,
        value: String,
    },
    #[error("data row {row} has {found} fields, expected {expected}")]
    ShortRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("file has no header row")]
    Empty,
    #[error("insufficient history: end_index {end_index} < length - 1 = {}", length - 1)]
    InsufficientHistory { end_index: usize, length: usize },
    #[error("end_index {end_index} out of range for {records} records")]
    OutOfRange { end_index: usize, records: usize },
    #[error("window length must be >= 1")]
    ZeroLength,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Slice the trailing window of `length` samples ending at `end_index`.
/// Causal: never reads past `end_index`.
pub fn slice_window(
    records: &[TelemetryRecord],
    end_index: usize,
    length: usize,
) -> Result<Window, TelemetryError> {
    if length == 0 {
        return Err(TelemetryError::ZeroLength);
    }
    if end_index + 1 < length {
        return Err(TelemetryError::InsufficientHistory { end_index, length });
    }
    if end_index >= records.len() {
        return Err(TelemetryError::OutOfRange {
            end_index,
            records: records.len(),
        });
    }
    let start = end_index + 1 - length;
    let slice = &records[start..=end_index];
    Ok(Window {
        end_index,
        length,
        lit101: slice.iter().map(|r| r.lit101).collect(),
        fit101: slice.iter().map(|r| r.fit101).collect(),
        ait402: slice.iter().map(|r| r.ait402).collect(),
        mv101: slice.iter().map(|r| r.mv101).collect(),
        p101: slice.iter().map(|r| r.p101).collect(),
        labels: slice.iter().map(|r| r.label).collect(),
    })
}
