use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::format::fmt_sig;
use super::run::CSV_HEADER;
use super::SweepError;

const EXTERNAL_COLUMN: usize = 9;

/// Parses a two-column `sweep_value,error` file into a map keyed by the
/// formatted sweep value. Blank lines and `#` comments are skipped; a
/// non-numeric first line is taken as a header.
pub fn parse_comparison(text: &str) -> Result<HashMap<String, f64>, SweepError> {
    let mut table = HashMap::new();
    let mut first = true;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let malformed =
            |why: &str| SweepError::Malformed(format!("comparison line {}: {why}", lineno + 1));
        if fields.len() != 2 {
            return Err(malformed("expected two comma-separated columns"));
        }
        let parsed = (fields[0].parse::<f64>(), fields[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) => {
                table.insert(fmt_sig(x), y);
            }
            (Err(_), Err(_)) if first => {}
            _ => return Err(malformed("columns must be numbers")),
        }
        first = false;
    }
    Ok(table)
}

pub fn read_comparison(path: &Path) -> Result<HashMap<String, f64>, SweepError> {
    let text = fs::read_to_string(path).map_err(|e| SweepError::io(path, e))?;
    parse_comparison(&text)
}

/// Fills the `external` column of a sweep CSV from comparison data.
/// Returns the new CSV text and the number of filled cells.
pub fn merge_external_text(
    csv_text: &str,
    comparison_text: &str,
) -> Result<(String, usize), SweepError> {
    let table = parse_comparison(comparison_text)?;
    let mut reader = csv::ReaderBuilder::new().from_reader(csv_text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| SweepError::Malformed(format!("sweep CSV: {e}")))?
        .clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(SweepError::Malformed(
            "sweep CSV does not have the standard header".into(),
        ));
    }
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(&header).expect("in-memory write");
    let mut matched = 0;
    for record in reader.records() {
        let record = record.map_err(|e| SweepError::Malformed(format!("sweep CSV: {e}")))?;
        let mut fields: Vec<String> = record.iter().map(str::to_owned).collect();
        fields[EXTERNAL_COLUMN] = match table.get(&fields[0]) {
            Some(v) => {
                matched += 1;
                fmt_sig(*v)
            }
            None => String::new(),
        };
        writer.write_record(&fields).expect("in-memory write");
    }
    if matched == 0 && !table.is_empty() {
        log::warn!("no comparison value matched any sweep value");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    Ok((String::from_utf8(bytes).expect("utf-8 input"), matched))
}

/// File version of [`merge_external_text`]; writes the merged CSV to `out`.
pub fn merge_external(
    csv_path: &Path,
    comparison_path: &Path,
    out: &Path,
) -> Result<usize, SweepError> {
    let csv_text = fs::read_to_string(csv_path).map_err(|e| SweepError::io(csv_path, e))?;
    let comparison =
        fs::read_to_string(comparison_path).map_err(|e| SweepError::io(comparison_path, e))?;
    let (merged, matched) = merge_external_text(&csv_text, &comparison)?;
    fs::write(out, merged).map_err(|e| SweepError::io(out, e))?;
    Ok(matched)
}
