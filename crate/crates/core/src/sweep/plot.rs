use std::fs;
use std::path::{Path, PathBuf};

use super::run::CSV_HEADER;
use super::SweepError;

struct Trace {
    column: usize,
    title: &'static str,
    style: &'static str,
}

const TRACES: [Trace; 6] = [
    Trace {
        column: 2,
        title: "min RMS",
        style: "lines lw 2 lc rgb 'black'",
    },
    Trace {
        column: 5,
        title: "Holevo",
        style: "points pt 1 lc rgb 'black'",
    },
    Trace {
        column: 4,
        title: "average RMS",
        style: "lines dt 2 lc rgb 'gray40'",
    },
    Trace {
        column: 9,
        title: "NOON",
        style: "lines dt 4 lc rgb 'black'",
    },
    Trace {
        column: 6,
        title: "M&M",
        style: "lines lw 2 lc rgb 'dark-blue'",
    },
    Trace {
        column: 10,
        title: "external",
        style: "lines dt 3 lc rgb 'dark-red'",
    },
];

/// Builds a gnuplot script for the sweep CSV at `csv_path` whose contents
/// are `csv_text`. Traces whose column is empty in every row are left out.
pub fn gnuplot_script(csv_path: &Path, csv_text: &str) -> Result<String, SweepError> {
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
    let mut filled = [false; CSV_HEADER.len()];
    for record in reader.records() {
        let record = record.map_err(|e| SweepError::Malformed(format!("sweep CSV: {e}")))?;
        for (slot, field) in filled.iter_mut().zip(record.iter()) {
            *slot |= !field.is_empty();
        }
    }

    let data = csv_path.display().to_string().replace('\'', "\\'");
    let mut plots = vec![format!(
        "'{data}' using 1:7:8 with filledcurves lc rgb 'gray80' title 'quantum region'"
    )];
    for t in TRACES.iter().filter(|t| filled[t.column - 1]) {
        plots.push(format!(
            "'{data}' using 1:{} with {} title '{}'",
            t.column, t.style, t.title
        ));
    }
    let mut script = String::new();
    script.push_str("set datafile separator ','\n");
    script.push_str("set key autotitle columnhead\n");
    script.push_str("set logscale y\n");
    script.push_str("set xlabel 'sweep value'\n");
    script.push_str("set ylabel 'phase error'\n");
    script.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    Ok(script)
}

/// Writes `<csv stem>.gp` next to the CSV and returns its path.
pub fn emit_gnuplot_script(csv_path: &Path) -> Result<PathBuf, SweepError> {
    let text = fs::read_to_string(csv_path).map_err(|e| SweepError::io(csv_path, e))?;
    let script = gnuplot_script(csv_path, &text)?;
    let out = csv_path.with_extension("gp");
    fs::write(&out, script).map_err(|e| SweepError::io(&out, e))?;
    Ok(out)
}
