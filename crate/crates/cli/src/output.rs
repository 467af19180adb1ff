//! Writes a scenario's CSV table and JSON metadata sidecar.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::run::{format_value, ScenarioOutput};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn write(out_dir: &Path, output: &ScenarioOutput) -> Result<(PathBuf, PathBuf), CliError> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let name = &output.metadata.scenario;

    let csv_path = out_dir.join(format!("{name}.csv"));
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| CliError::Io {
        path: csv_path.display().to_string(),
        source: e.into(),
    })?;
    let csv_err = |e: csv::Error| CliError::Io {
        path: csv_path.display().to_string(),
        source: e.into(),
    };
    w.write_record(&output.header).map_err(csv_err)?;
    for row in &output.rows {
        w.write_record(row.iter().map(|v| format_value(*v))).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(&csv_path))?;

    let json_path = out_dir.join(format!("{name}.json"));
    let file = File::create(&json_path).map_err(io_err(&json_path))?;
    let mut buf = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut buf, &output.metadata).map_err(|e| CliError::Io {
        path: json_path.display().to_string(),
        source: e.into(),
    })?;
    buf.write_all(b"\n").map_err(io_err(&json_path))?;
    buf.flush().map_err(io_err(&json_path))?;
    Ok((csv_path, json_path))
}
