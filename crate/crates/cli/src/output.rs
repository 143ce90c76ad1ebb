//! CSV rendering. Floats are written with 17 significant digits in
//! scientific notation; missing samples are the literal `NaN`.

use std::fmt::Write as _;

use spinengine::figures::{Fig2Table, Fig4Table, RatioTable};
use spinengine::validation::ValidationReport;
use spinengine::{CycleResult, Regime, StepRecord};

pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "NaN".to_string())
}

fn step_row(out: &mut String, stroke: &str, index: usize, s: &StepRecord) {
    let _ = writeln!(
        out,
        "{stroke},{index},{},{},{},{},{},{},{}",
        s.kind.as_str(),
        num(s.before.gap()),
        num(s.after.gap()),
        num(s.before.pop_excited()),
        num(s.after.pop_excited()),
        num(s.work),
        num(s.heat),
    );
}

/// Step table, a blank line, then a one-row summary table.
pub fn cycle_csv(r: &CycleResult) -> String {
    let mut out = String::from("stroke,step_index,kind,gap_before,gap_after,pop_before,pop_after,work,heat\n");
    for (i, s) in r.hot_stroke.steps().iter().enumerate() {
        step_row(&mut out, "A-B", i, s);
    }
    step_row(&mut out, "B-C", 0, &r.compression);
    for (i, s) in r.cold_stroke.steps().iter().enumerate() {
        step_row(&mut out, "C-D", i, s);
    }
    step_row(&mut out, "D-A", 0, &r.expansion);
    out.push('\n');
    out.push_str("q_hot,q_cold,w_net,efficiency,eta_carnot,regime\n");
    let regime = match r.regime {
        Regime::Engine => "engine",
        Regime::NonEngine => "non_engine",
    };
    let _ = writeln!(
        out,
        "{},{},{},{},{},{regime}",
        num(r.q_hot),
        num(r.q_cold),
        num(r.w_net),
        num(r.efficiency),
        num(r.spec.carnot_efficiency()),
    );
    out
}

fn ratio_header(r: f64) -> String {
    format!("eta_omega_r={r}")
}

fn eta_header(e: f64) -> String {
    format!("eta_omega_etaC={e}")
}

pub fn fig2_csv(t: &Fig2Table) -> String {
    let mut out = String::from("eta_C,eta_CA");
    for &r in &t.ratios {
        out.push(',');
        out.push_str(&ratio_header(r));
    }
    out.push('\n');
    for (i, &e) in t.eta_carnot.iter().enumerate() {
        out.push_str(&num(e));
        out.push(',');
        out.push_str(&num(t.eta_ca[i]));
        for col in &t.eta_omega {
            out.push(',');
            out.push_str(&num(col[i]));
        }
        out.push('\n');
    }
    out
}

/// Crossover per ratio plus the measured direction as the ratio grows.
pub fn fig2_report_csv(t: &Fig2Table) -> String {
    let mut out = String::from("r,crossover_eta_C,trend_with_increasing_r\n");
    for c in &t.crossovers {
        let _ = writeln!(out, "{},{},{}", num(c.ratio), opt_num(c.eta_carnot), t.trend.as_str());
    }
    out
}

pub fn ratio_table_csv(t: &RatioTable) -> String {
    let mut out = String::from("r");
    for &e in &t.eta_carnot {
        out.push(',');
        out.push_str(&eta_header(e));
    }
    out.push('\n');
    for (r, row) in t.ratios.iter().zip(&t.rows) {
        out.push_str(&num(*r));
        for v in row {
            out.push(',');
            out.push_str(&num(*v));
        }
        out.push('\n');
    }
    out
}

pub fn fig4_report_csv(t: &Fig4Table) -> String {
    let mut out = String::from("eta_C,zero_r,pole_r,carnot_crossing_r,pole_exclusion_halfwidth\n");
    for (e, nb) in t.table.eta_carnot.iter().zip(&t.branches) {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(*e),
            num(nb.zero),
            num(nb.pole),
            num(nb.carnot_crossing),
            num(t.pole_eps * e),
        );
    }
    out
}

pub fn validation_text(report: &ValidationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let _ = writeln!(
            out,
            "{} {:<46} residual={:<24} tolerance={:<10} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            num(c.residual),
            format!("{:e}", c.tolerance),
            c.detail
        );
    }
    let failed = report.failures().count();
    let _ = writeln!(
        out,
        "{} of {} checks passed",
        report.checks.len() - failed,
        report.checks.len()
    );
    out
}
