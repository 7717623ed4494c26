use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::scenario::{LabeledScan, ScenarioReport};
use crate::error::{Error, Result};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `<scenario>.csv` or `<scenario>_<label>.csv`.
pub fn scan_file_name(report: &ScenarioReport, scan: &LabeledScan) -> String {
    if scan.label.is_empty() {
        format!("{}.csv", report.scenario)
    } else {
        format!("{}_{}.csv", report.scenario, scan.label)
    }
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

/// Writes every curve of every report and a shared `summary.txt`; returns
/// the written paths in order.
pub fn write_outputs(reports: &[ScenarioReport], directory: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(directory).map_err(io_err(directory))?;
    let mut paths = Vec::new();
    for report in reports {
        for scan in &report.scans {
            let name = scan_file_name(report, scan);
            let path = directory.join(&name);
            write_file(&path, |w| scan.scan.write_csv(w))?;
            paths.push(path);
            if let Some(counts) = &scan.sampled {
                let path = directory.join(name.replace(".csv", ".sampled.csv"));
                write_file(&path, |w| scan.scan.write_sampled_csv(counts, w))?;
                paths.push(path);
            }
        }
    }
    let summary = directory.join("summary.txt");
    write_file(&summary, |w| write_summary(reports, w))?;
    paths.push(summary);
    Ok(paths)
}

/// One line per curve:
/// `scenario=<name> scan=<label|-> visibility=<v> classification=<c> digest=<hex>`.
pub fn write_summary<W: Write>(reports: &[ScenarioReport], mut out: W) -> std::io::Result<()> {
    for report in reports {
        for scan in &report.scans {
            let label = if scan.label.is_empty() {
                "-"
            } else {
                &scan.label
            };
            writeln!(
                out,
                "scenario={} scan={} visibility={:.6} classification={} digest={}",
                report.scenario, label, scan.scan.visibility, scan.classification, report.digest
            )?;
        }
    }
    Ok(())
}
