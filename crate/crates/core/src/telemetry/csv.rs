//! CSV interchange format. Header `index,LIT101,FIT101,AIT402,MV101,P101,label`,
//! UTF-8, `\n` line endings. Reals are written with 17 significant digits so
//! parsing returns the exact f64 that was serialized.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{ScenarioLabel, Tag, TelemetryError, TelemetryRecord};

const COLUMNS: [&str; 7] = ["index", "LIT101", "FIT101", "AIT402", "MV101", "P101", "label"];

pub fn parse_csv(path: impl AsRef<Path>) -> Result<Vec<TelemetryRecord>, TelemetryError> {
    let file = File::open(path)?;
    parse_csv_reader(BufReader::new(file))
}

pub fn parse_csv_reader<R: BufRead>(reader: R) -> Result<Vec<TelemetryRecord>, TelemetryError> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(TelemetryError::Empty),
    };
    let names: Vec<&str> = header.trim_end().split(',').collect();
    let mut positions = [0usize; 7];
    for (slot, wanted) in COLUMNS.iter().enumerate() {
        match names.iter().position(|n| n == wanted) {
            Some(p) => positions[slot] = p,
            None => return Err(TelemetryError::MissingTag((*wanted).to_string())),
        }
    }

    let mut records = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() < names.len() {
            return Err(TelemetryError::ShortRow {
                row,
                found: fields.len(),
                expected: names.len(),
            });
        }
        let field = |slot: usize| fields[positions[slot]];

        let index: usize = field(0).parse().map_err(|_| TelemetryError::BadValue {
            column: "index".into(),
            row,
            value: field(0).into(),
        })?;
        if index != records.len() {
            return Err(TelemetryError::NonContiguousIndex {
                row,
                expected: records.len(),
                found: index,
            });
        }

        let sensor = |slot: usize, name: &str| -> Result<f64, TelemetryError> {
            field(slot).parse().map_err(|_| TelemetryError::BadValue {
                column: name.into(),
                row,
                value: field(slot).into(),
            })
        };
        let actuator = |slot: usize, tag: Tag| -> Result<u8, TelemetryError> {
            let raw = field(slot);
            let state: u8 = raw.parse().map_err(|_| TelemetryError::BadActuatorState {
                tag: tag.as_str().into(),
                index,
                value: raw.into(),
            })?;
            if state > 2 {
                return Err(TelemetryError::BadActuatorState {
                    tag: tag.as_str().into(),
                    index,
                    value: raw.into(),
                });
            }
            Ok(state)
        };

        let label = ScenarioLabel::parse(field(6)).ok_or_else(|| TelemetryError::BadValue {
            column: "label".into(),
            row,
            value: field(6).into(),
        })?;

        records.push(TelemetryRecord {
            index,
            lit101: sensor(1, "LIT101")?,
            fit101: sensor(2, "FIT101")?,
            ait402: sensor(3, "AIT402")?,
            mv101: actuator(4, Tag::Mv101)?,
            p101: actuator(5, Tag::P101)?,
            label,
        });
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[TelemetryRecord], out: W) -> Result<(), TelemetryError> {
    let mut w = BufWriter::new(out);
    writeln!(w, "{}", COLUMNS.join(","))?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.index,
            fmt_real(r.lit101),
            fmt_real(r.fit101),
            fmt_real(r.ait402),
            r.mv101,
            r.p101,
            r.label
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn serialize_csv(
    records: &[TelemetryRecord],
    path: impl AsRef<Path>,
) -> Result<(), TelemetryError> {
    let file = File::create(path)?;
    write_csv(records, file)
}

// 17 significant digits: enough to reproduce any finite f64 exactly.
fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}
