//! Command-line front end for the spin-1/2 engine simulator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use spinengine::figures;
use spinengine::validation::{run_validation, ValidationConfig};
use spinengine::{simulate_cycle_with, SimOptions};

use config::{Mode, RunConfig};

/// `fig4.csv` -> `fig4.csv.meta`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_with_meta(cfg: &RunConfig, path: &Path, csv: &str) -> anyhow::Result<()> {
    write_file(path, csv)?;
    write_file(&sidecar(path, ".meta"), &cfg.to_config_text())
}

fn default_out(mode: Mode) -> Option<PathBuf> {
    match mode {
        Mode::Fig2 | Mode::Fig3 | Mode::Fig4 => Some(PathBuf::from(format!("{}.csv", mode.as_str()))),
        Mode::Cycle | Mode::Validate => None,
    }
}

/// Runs one command. Returns `false` only when a validation check fails.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> anyhow::Result<bool> {
    let out = cfg.out.clone().or_else(|| default_out(cfg.mode));
    let sim = SimOptions {
        flip_cold_step_sign: cfg.corrupt_cold_sign,
    };
    match cfg.mode {
        Mode::Cycle => {
            let result = simulate_cycle_with(&cfg.spec, sim)?;
            let csv = output::cycle_csv(&result);
            match &out {
                Some(path) => write_with_meta(cfg, path, &csv)?,
                None => stdout.write_all(csv.as_bytes())?,
            }
        }
        Mode::Fig2 => {
            let table = figures::fig2(&cfg.eta_c, &cfg.ratios)?;
            let path = out.expect("figure modes have a default path");
            write_with_meta(cfg, &path, &output::fig2_csv(&table))?;
            write_file(&sidecar(&path, ".report.csv"), &output::fig2_report_csv(&table))?;
            writeln!(stdout, "wrote {}", path.display())?;
        }
        Mode::Fig3 => {
            let table = figures::fig3(&cfg.eta_c, &cfg.ratios)?;
            let path = out.expect("figure modes have a default path");
            write_with_meta(cfg, &path, &output::ratio_table_csv(&table))?;
            writeln!(stdout, "wrote {}", path.display())?;
        }
        Mode::Fig4 => {
            let table = figures::fig4(&cfg.eta_c, &cfg.ratios, cfg.pole_eps)?;
            let path = out.expect("figure modes have a default path");
            write_with_meta(cfg, &path, &output::ratio_table_csv(&table.table))?;
            write_file(&sidecar(&path, ".report.csv"), &output::fig4_report_csv(&table))?;
            writeln!(stdout, "wrote {}", path.display())?;
        }
        Mode::Validate => {
            let vc = ValidationConfig {
                spec: cfg.spec,
                sim,
                ..ValidationConfig::default()
            };
            let report = run_validation(&vc)?;
            let text = output::validation_text(&report);
            stdout.write_all(text.as_bytes())?;
            if let Some(path) = &out {
                write_with_meta(cfg, path, &text)?;
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}
