//! Reading and writing per-subject sample files.
//!
//! Two formats are supported:
//!
//! * CSV with the exact header `subject_id,value`, comma separator, `.`
//!   decimal point, UTF-8, LF line endings;
//! * JSON: an array of `{"subject_id": ..., "value": ...}` objects.
//!
//! Values are written with the shortest representation that parses back to
//! the same 64-bit float, so a save/load cycle is lossless.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sample::{MetricSample, MetricSampleSet};

/// Sample file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    Csv,
    Json,
}

/// Optional metadata applied while loading.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Name recorded on the loaded set.
    pub metric_name: String,
    /// Declared value bounds; every value must fall inside them.
    pub bounds: Option<(f64, f64)>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            metric_name: "metric".into(),
            bounds: None,
        }
    }
}

/// Load a sample set with default options.
pub fn load_samples(reader: &mut impl Read, format: SampleFormat) -> Result<MetricSampleSet> {
    load_samples_with(reader, format, &LoadOptions::default())
}

/// Load a sample set, validating values, uniqueness and declared bounds.
pub fn load_samples_with(
    reader: &mut impl Read,
    format: SampleFormat,
    options: &LoadOptions,
) -> Result<MetricSampleSet> {
    let rows = match format {
        SampleFormat::Csv => read_csv(reader)?,
        SampleFormat::Json => read_json(reader)?,
    };

    // Validate with file row numbers before handing off to the set
    // constructor (whose indices would not match the file).
    let mut seen = std::collections::HashSet::new();
    let mut samples = Vec::with_capacity(rows.len());
    for (row, id, value) in rows {
        if id.is_empty() {
            return Err(Error::ParseError {
                location: format!("row {row}"),
                message: "empty subject_id".into(),
            });
        }
        if !value.is_finite() {
            return Err(Error::NonFiniteValue {
                subject_id: id,
                row,
            });
        }
        if let Some((lo, hi)) = options.bounds {
            if value < lo || value > hi {
                return Err(Error::OutOfBounds {
                    subject_id: id,
                    value,
                    lo,
                    hi,
                });
            }
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateSubject {
                subject_id: id,
                row,
            });
        }
        samples.push(MetricSample {
            subject_id: id,
            value,
        });
    }
    MetricSampleSet::new(samples, options.metric_name.clone(), options.bounds)
}

fn read_csv(reader: &mut impl Read) -> Result<Vec<(usize, String, f64)>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = csv_reader.headers().map_err(|e| Error::ParseError {
        location: "header".into(),
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>() != ["subject_id", "value"] {
        return Err(Error::ParseError {
            location: "header".into(),
            message: format!("expected header \"subject_id,value\", found {headers:?}"),
        });
    }
    let mut rows = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(|e| Error::ParseError {
            location: e
                .position()
                .map(|p| format!("line {}", p.line()))
                .unwrap_or_else(|| "unknown position".into()),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != 2 {
            return Err(Error::ParseError {
                location: format!("line {line}"),
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let id = record[0].to_string();
        let value: f64 = record[1].trim().parse().map_err(|e| Error::ParseError {
            location: format!("line {line}"),
            message: format!("bad value {:?}: {e}", &record[1]),
        })?;
        rows.push((line, id, value));
    }
    Ok(rows)
}

fn read_json(reader: &mut impl Read) -> Result<Vec<(usize, String, f64)>> {
    #[derive(serde::Deserialize)]
    struct Row {
        subject_id: String,
        value: f64,
    }
    let rows: Vec<Row> = serde_json::from_reader(reader).map_err(|e| Error::ParseError {
        location: format!("line {}", e.line()),
        message: e.to_string(),
    })?;
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| (i + 1, r.subject_id, r.value))
        .collect())
}

/// Write a sample set in the given format.
pub fn save_samples(
    writer: &mut impl Write,
    samples: &MetricSampleSet,
    format: SampleFormat,
) -> Result<()> {
    match format {
        SampleFormat::Csv => {
            let mut csv_writer = csv::Writer::from_writer(writer);
            csv_writer
                .write_record(["subject_id", "value"])
                .and_then(|_| {
                    for s in samples.samples() {
                        csv_writer.write_record([s.subject_id.as_str(), &s.value.to_string()])?;
                    }
                    csv_writer.flush()?;
                    Ok(())
                })
                .map_err(|e| Error::ParseError {
                    location: "output".into(),
                    message: e.to_string(),
                })?;
        }
        SampleFormat::Json => {
            serde_json::to_writer_pretty(&mut *writer, samples.samples()).map_err(|e| {
                Error::ParseError {
                    location: "output".into(),
                    message: e.to_string(),
                }
            })?;
            writer.write_all(b"\n")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_minimal_csv() {
        let mut src = "subject_id,value\na,80\nb,90\n".as_bytes();
        let set = load_samples(&mut src, SampleFormat::Csv).unwrap();
        assert_eq!(set.len(), 2);
        let mean: f64 = set.values().sum::<f64>() / 2.0;
        assert_eq!(mean, 85.0);
    }

    #[test]
    fn rejects_nan_value_with_row() {
        let mut src = "subject_id,value\na,80\nb,NaN\n".as_bytes();
        match load_samples(&mut src, SampleFormat::Csv) {
            Err(Error::NonFiniteValue { subject_id, row }) => {
                assert_eq!(subject_id, "b");
                assert_eq!(row, 3);
            }
            other => panic!("expected NonFiniteValue, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_and_bad_headers() {
        let mut src = "subject_id,value\na,80\na,90\n".as_bytes();
        assert!(matches!(
            load_samples(&mut src, SampleFormat::Csv),
            Err(Error::DuplicateSubject { row: 3, .. })
        ));
        let mut src = "id,dice\na,80\n".as_bytes();
        assert!(matches!(
            load_samples(&mut src, SampleFormat::Csv),
            Err(Error::ParseError { .. })
        ));
        let mut src = "subject_id,value\na,eighty\n".as_bytes();
        assert!(matches!(
            load_samples(&mut src, SampleFormat::Csv),
            Err(Error::ParseError { .. })
        ));
    }

    #[test]
    fn bounds_checked_when_declared() {
        let options = LoadOptions {
            metric_name: "dice".into(),
            bounds: Some((0.0, 100.0)),
        };
        let mut src = "subject_id,value\na,80\nb,101\n".as_bytes();
        assert!(matches!(
            load_samples_with(&mut src, SampleFormat::Csv, &options),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn loads_json_array() {
        let mut src = r#"[
            {"subject_id": "a", "value": 80.5},
            {"subject_id": "b", "value": 90.25}
        ]"#
        .as_bytes();
        let set = load_samples(&mut src, SampleFormat::Json).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.samples()[1].value, 90.25);
    }

    #[test]
    fn empty_inputs_are_empty_sample_errors() {
        let mut src = "subject_id,value\n".as_bytes();
        assert!(matches!(
            load_samples(&mut src, SampleFormat::Csv),
            Err(Error::EmptySample)
        ));
        let mut src = "[]".as_bytes();
        assert!(matches!(
            load_samples(&mut src, SampleFormat::Json),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn save_load_round_trip_is_lossless() {
        for format in [SampleFormat::Csv, SampleFormat::Json] {
            let original = crate::synthetic::normal_samples(25, 80.7, 10.75, 6).unwrap();
            let mut buf = Vec::new();
            save_samples(&mut buf, &original, format).unwrap();
            let loaded = load_samples_with(
                &mut buf.as_slice(),
                format,
                &LoadOptions {
                    metric_name: "synthetic".into(),
                    bounds: None,
                },
            )
            .unwrap();
            assert_eq!(original.samples(), loaded.samples());
            // and the byte stream is stable across a second cycle
            let mut buf2 = Vec::new();
            save_samples(&mut buf2, &loaded, format).unwrap();
            assert_eq!(buf, buf2);
        }
    }
}
