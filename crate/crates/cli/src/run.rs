use std::fs;
use std::path::{Path, PathBuf};

use quasiid::analysis::analyze_trace;
use quasiid::{distinguished_log, CriterionReport, DlogError};
use serde::Serialize;

use crate::config::{AnalysisConfig, DistributionSpec, CONFIG_VERSION};
use crate::export::export_trace;
use crate::CliError;

#[derive(Debug, Serialize)]
struct Entry<'a> {
    name: &'a str,
    law: &'a DistributionSpec,
    report: CriterionReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub report_path: PathBuf,
    pub traces: Vec<PathBuf>,
    /// Names of distributions whose characteristic function vanished on the
    /// grid.
    pub zero_cf: Vec<String>,
}

impl RunSummary {
    /// 0 when every distribution was analysed, 1 when some characteristic
    /// function vanished (the report is still written).
    pub fn exit_code(&self) -> u8 {
        u8::from(!self.zero_cf.is_empty())
    }
}

/// Analyses every distribution and writes the report (and traces, when
/// configured). Warnings go to stderr.
pub fn run_analysis(config: &AnalysisConfig) -> Result<RunSummary, CliError> {
    config.validate()?;
    let settings = config.settings();
    if let Some(dir) = &config.outputs.traces {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            action: "create trace directory",
            path: dir.clone(),
            source,
        })?;
    }

    let mut entries = Vec::with_capacity(config.distributions.len());
    let mut traces = Vec::new();
    let mut zero_cf = Vec::new();
    for (i, d) in config.distributions.iter().enumerate() {
        let cf = d.law.build(&format!("distributions[{i}].law"))?;
        let report = match distinguished_log(&cf, settings.t_max, settings.step) {
            Ok(trace) => {
                if let Some(dir) = &config.outputs.traces {
                    let path = dir.join(format!("{}.csv", d.name));
                    export_trace(&trace, &path)?;
                    traces.push(path);
                }
                analyze_trace(&cf, &trace, &settings)
            }
            Err(e) => {
                if matches!(e, DlogError::ZeroCf { .. }) {
                    eprintln!("warning: {}: {e}", d.name);
                    zero_cf.push(d.name.clone());
                }
                CriterionReport::not_applicable(e.to_string(), &settings.tolerances)
            }
        };
        entries.push(Entry {
            name: &d.name,
            law: &d.law,
            report,
        });
    }

    let document = serde_json::json!({
        "version": CONFIG_VERSION,
        "settings": settings,
        "results": entries,
    });
    write_report(&config.outputs.report, &document)?;
    Ok(RunSummary {
        report_path: config.outputs.report.clone(),
        traces,
        zero_cf,
    })
}

/// Deterministic rendering: `serde_json::Value` objects keep keys sorted and
/// floats print in shortest round-trip form.
pub fn render_report(document: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(document).expect("JSON values always serialise");
    text.push('\n');
    text
}

fn write_report(path: &Path, document: &serde_json::Value) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| CliError::Io {
            action: "create report directory",
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, render_report(document)).map_err(|source| CliError::Io {
        action: "write report",
        path: path.to_path_buf(),
        source,
    })
}
