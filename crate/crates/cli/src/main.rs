mod commands;
mod config;

use clap::Parser;
use commands::{Artifact, RunError};
use config::{Args, ConfigError, Format, RunConfig, SEED_ENV};
use planefield::ComparisonReport;
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn report_csv(r: &ComparisonReport) -> String {
    let parts: Vec<ComparisonReport> = match r.details.get("parts") {
        Some(v) => serde_json::from_value(v.clone()).unwrap_or_default(),
        None => Vec::new(),
    };
    let rows = if parts.is_empty() {
        vec![r.clone()]
    } else {
        parts
    };
    let mut t = String::from("name,statistic,value,threshold,passed\n");
    for p in &rows {
        t.push_str(&format!(
            "{},{},{},{},{}\n",
            p.name.replace(',', ";"),
            p.statistic,
            planefield::io::fmt_real(p.value),
            planefield::io::fmt_real(p.threshold),
            p.passed
        ));
    }
    t
}

fn render(c: &RunConfig, a: &Artifact) -> String {
    match c.format {
        Format::Csv => {
            let mut out = format!("# planefield {}\n", planefield::VERSION);
            for line in c.echo() {
                out.push_str(&format!("# {line}\n"));
            }
            match a {
                Artifact::Table(t) => out.push_str(&t.to_csv()),
                Artifact::Report { report, table } => {
                    out.push_str(&format!("# {}\n", report.summary()));
                    match table {
                        Some(t) => out.push_str(&t.to_csv()),
                        None => out.push_str(&report_csv(report)),
                    }
                }
            }
            out
        }
        Format::Json => {
            let result = match a {
                Artifact::Table(t) => serde_json::to_value(t),
                Artifact::Report { report, .. } => serde_json::to_value(report),
            }
            .expect("artifact serializes");
            let v: Value = json!({
                "config": serde_json::to_value(c).expect("config serializes"),
                "result": result,
                "version": planefield::VERSION,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("json renders");
            s.push('\n');
            s
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let cfg = match RunConfig::resolve(&args, env_seed.as_deref()) {
        Ok(c) => c,
        Err(ConfigError::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(ConfigError::Io(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let artifact = match commands::run(&cfg) {
        Ok(a) => a,
        Err(RunError::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(RunError::Numeric(e)) => {
            eprintln!("numeric failure: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let text = render(&cfg, &artifact);
    let written = match &cfg.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(m) = written {
        eprintln!("error: {m}");
        return ExitCode::from(EXIT_FAIL);
    }
    if let Artifact::Report { report, .. } = &artifact {
        eprintln!("{}", report.summary());
    }
    if artifact.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
