//! Invariant suite: every check reports its measured residual against a
//! fixed tolerance.

use crate::cycle::{derive_corners, quasistatic_heat, simulate_cycle_with, CycleSpec, SimOptions};
use crate::error::Result;
use crate::formulas::{hot_heat_three_step, hot_work_magnitude_three_step, net_work_three_step, ReferenceState};
use crate::merit::{
    ca_crossover, curzon_ahlborn, default_time_grid, efficiency_at, eta_at_max_omega, negative_branch,
    numeric_optimal_time, omega_dot, optimal_time, pi_from_cold_stroke, MeritInputs,
};
use crate::oracle::central_diff;
use crate::sweep;
use crate::thermo::gibbs_population;

pub const CLOSURE_TOL: f64 = 1e-12;
pub const ENDPOINT_TOL: f64 = 1e-14;
pub const OPTIMUM_REL_TOL: f64 = 1e-6;
pub const CROSSOVER_TOL: f64 = 1e-9;
pub const QUASISTATIC_TOL: f64 = 1e-4;
pub const CA_SERIES_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `residual <= tolerance` (NaN fails).
    pub fn within(name: &'static str, residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: residual <= tolerance,
            residual,
            tolerance,
            detail: detail.into(),
        }
    }

    /// Passes when `residual >= threshold`.
    pub fn at_least(name: &'static str, residual: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: residual >= threshold,
            residual,
            tolerance: threshold,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    /// Reference cycle for the convergence checks; its `n` joins the
    /// subdivision counts used for the ledger checks.
    pub spec: CycleSpec,
    /// Number of generated specs for the ledger and optimum checks.
    pub family_size: usize,
    pub sim: SimOptions,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            spec: CycleSpec::new(4.0, 2.0, 0.5, 1.0, 3).expect("reference spec is valid"),
            family_size: 24,
            sim: SimOptions::default(),
        }
    }
}

/// Deterministic family of valid specs from an additive (Weyl) sequence.
pub fn spec_family(count: usize, n: usize) -> Vec<CycleSpec> {
    const ALPHA: [f64; 4] = [
        0.414_213_562_373_095,
        0.732_050_807_568_877,
        0.236_067_977_499_790,
        0.645_751_311_064_591,
    ];
    (1..=count)
        .map(|k| {
            let u: Vec<f64> = ALPHA.iter().map(|a| (k as f64 * a).fract()).collect();
            let beta_h = 0.5 + 1.5 * u[0];
            let eta_c = 0.05 + 0.6 * u[1];
            let gap_b = (0.5 + 4.5 * u[2]) / beta_h;
            let gap_a = gap_b * (1.1 + 2.4 * u[3]);
            CycleSpec::new(gap_a, gap_b, beta_h, beta_h / (1.0 - eta_c), n).expect("family spec is valid")
        })
        .collect()
}

/// Specs from [`spec_family`] whose Omega-dot has an interior maximum.
pub fn optimum_family(count: usize) -> Vec<CycleSpec> {
    let mut out = Vec::with_capacity(count);
    let mut pool = count.max(8);
    while out.len() < count {
        out = spec_family(pool, 3)
            .into_iter()
            .filter(|s| MeritInputs::from_spec(s).and_then(|m| optimal_time(&m)).is_ok())
            .take(count)
            .collect();
        pool *= 2;
    }
    out
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v.abs())
        }
    })
}

pub fn run_validation(cfg: &ValidationConfig) -> Result<ValidationReport> {
    let mut checks = Vec::new();
    let family = spec_family(cfg.family_size, 3);
    let mut ns = vec![1, 2, 3, 7, cfg.spec.n()];
    ns.sort_unstable();
    ns.dedup();

    // ledger closure over family x subdivisions
    let mut cases: Vec<CycleSpec> = Vec::new();
    for s in family.iter().chain(std::iter::once(&cfg.spec)) {
        for &n in &ns {
            cases.push(s.with_subdivisions(n)?);
        }
    }
    let sims = sweep::map(&cases, |s| simulate_cycle_with(s, cfg.sim))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    checks.push(Check::within(
        "first-law closure per step",
        max_abs(sims.iter().map(|r| r.max_step_residual())),
        CLOSURE_TOL,
        format!("{} cycles, n in {:?}", sims.len(), ns),
    ));
    checks.push(Check::within(
        "first-law closure per cycle",
        max_abs(sims.iter().map(|r| r.closure_residual())),
        CLOSURE_TOL,
        "sum of work and heat over A->B->C->D->A",
    ));

    // three-step closed forms against the ledger
    let mut heat_res = 0.0f64;
    let mut work_res = 0.0f64;
    let mut net_res = 0.0f64;
    for r in sims.iter().filter(|r| r.spec.n() == 3) {
        let reference = ReferenceState::from_spec(&r.spec)?;
        heat_res = heat_res.max((r.q_hot - hot_heat_three_step(&reference)).abs());
        work_res = work_res.max((r.hot_stroke.total_work().abs() - hot_work_magnitude_three_step(&reference)).abs());
        net_res = net_res.max((r.w_net - net_work_three_step(&reference)).abs());
    }
    checks.push(Check::within(
        "hot-stroke heat vs three-step form",
        heat_res,
        CLOSURE_TOL,
        "n = 3",
    ));
    checks.push(Check::within(
        "hot-stroke work vs three-step form",
        work_res,
        CLOSURE_TOL,
        "n = 3, magnitudes",
    ));
    checks.push(Check::within(
        "net work vs three-step form",
        net_res,
        CLOSURE_TOL,
        "n = 3",
    ));

    // telescoping: Q_hot = U_B - U_A + delta * sum of frozen populations
    let telescoping = sims.iter().filter(|r| [1, 2, 3, 7].contains(&r.spec.n())).map(|r| {
        let s = r.spec;
        let n = s.n();
        let delta = (s.gap_a() - s.gap_b()) / n as f64;
        let pops: f64 = (0..n)
            .map(|k| gibbs_population(s.hot(), s.gap_a() - k as f64 * delta).unwrap_or(f64::NAN))
            .sum();
        let p_b = gibbs_population(s.hot(), s.gap_b()).unwrap_or(f64::NAN);
        let p_a = gibbs_population(s.hot(), s.gap_a()).unwrap_or(f64::NAN);
        r.hot_stroke.total_heat() - (s.gap_b() * p_b - s.gap_a() * p_a + delta * pops)
    });
    checks.push(Check::within(
        "telescoping identity",
        max_abs(telescoping),
        CLOSURE_TOL,
        "n in {1, 2, 3, 7}",
    ));

    // corners
    let endpoint = family.iter().map(|s| -> Result<f64> {
        let c = derive_corners(s)?;
        let pc = gibbs_population(s.cold(), c.c.gap())?;
        let pd = gibbs_population(s.cold(), c.d.gap())?;
        Ok((pc - c.b.pop_excited()).abs().max((pd - c.a.pop_excited()).abs()))
    });
    let endpoint = endpoint.collect::<Result<Vec<_>>>()?;
    checks.push(Check::within(
        "adiabatic endpoint consistency",
        max_abs(endpoint),
        ENDPOINT_TOL,
        "cold Gibbs populations at C and D",
    ));

    // closed-form optimum against the black-box oracle
    let optimum_specs = optimum_family(cfg.family_size.max(20));
    let grid = default_time_grid();
    let optimum = sweep::map(&optimum_specs, |s| -> Result<(f64, f64, f64)> {
        let m = MeritInputs::from_spec(s)?;
        let closed = optimal_time(&m)?;
        let numeric = numeric_optimal_time(&m, &grid)?;
        let f = |t: f64| omega_dot(&m, t).unwrap_or(f64::NAN);
        let scale = f(closed).abs() / closed;
        let slope = central_diff(f, closed, 1e-4 * closed).abs() / scale;
        let eta_formula = eta_at_max_omega(m.eta_carnot, m.ratio)?;
        let eta_direct = efficiency_at(&m, closed);
        Ok((
            (numeric - closed).abs() / closed,
            slope,
            (eta_direct - eta_formula).abs() / eta_formula.abs(),
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let n_opt = optimum.len();
    checks.push(Check::within(
        "closed-form optimal time vs golden section",
        max_abs(optimum.iter().map(|o| o.0)),
        OPTIMUM_REL_TOL,
        format!("{n_opt} specs, relative"),
    ));
    checks.push(Check::within(
        "stationarity at closed-form optimum",
        max_abs(optimum.iter().map(|o| o.1)),
        OPTIMUM_REL_TOL,
        "central difference relative to Omega/t",
    ));
    checks.push(Check::within(
        "efficiency at optimum vs ratio formula",
        max_abs(optimum.iter().map(|o| o.2)),
        OPTIMUM_REL_TOL,
        "relative",
    ));

    let pi_gap = max_abs(optimum_specs.iter().map(|s| {
        let m = MeritInputs::from_spec(s).expect("spec already accepted");
        (pi_from_cold_stroke(s).unwrap_or(f64::NAN) - m.pi_) / m.pi_
    }));
    checks.push(Check::within(
        "Pi from cold-stroke populations",
        pi_gap,
        CLOSURE_TOL,
        "hot intermediates stand in for cold ones",
    ));

    // bounds and monotonicity on a grid
    let etas: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
    let ratios = sweep::logspace(1e-6, 1e6, 121);
    let sandwich = sweep::map(&etas, |&e| {
        let mut worst = 0.0f64;
        let mut prev = eta_at_max_omega(e, 0.0).unwrap_or(f64::NAN);
        let (lo, hi) = (2.0 / 3.0 * e, 0.75 * e);
        worst = worst.max((prev - lo).abs());
        let mut monotone = true;
        for &r in &ratios {
            let v = eta_at_max_omega(e, r).unwrap_or(f64::NAN);
            worst = worst.max(lo - v).max(v - hi);
            monotone &= v > prev;
            prev = v;
        }
        (worst, monotone)
    });
    checks.push(Check::within(
        "bound sandwich for non-negative ratios",
        max_abs(sandwich.iter().map(|s| s.0.max(0.0))),
        1e-15,
        "eta_C in 0.01..0.99, r in [0, 1e6]",
    ));
    checks.push(Check::at_least(
        "efficiency increasing in ratio",
        sandwich.iter().filter(|s| s.1).count() as f64,
        etas.len() as f64,
        "count of monotone curves",
    ));

    // crossover, zero, pole
    let c0 = ca_crossover(0.0)?.unwrap_or(f64::NAN);
    checks.push(Check::within(
        "crossover at zero ratio",
        (c0 - 0.75).abs(),
        CROSSOVER_TOL,
        "expected 3/4",
    ));
    let cinf = ca_crossover(1e15)?.unwrap_or(f64::NAN);
    checks.push(Check::within(
        "crossover at large ratio",
        (cinf - 8.0 / 9.0).abs(),
        CROSSOVER_TOL,
        "expected 8/9",
    ));
    let mut zero_res = 0.0f64;
    let mut pole_min = f64::INFINITY;
    for eta in [0.4, 0.6] {
        let nb = negative_branch(eta)?;
        zero_res = zero_res.max(eta_at_max_omega(eta, nb.zero)?.abs());
        for side in [-1.0, 1.0] {
            let v = eta_at_max_omega(eta, nb.pole + side * 1e-9)?;
            pole_min = pole_min.min(v.abs());
        }
    }
    checks.push(Check::within(
        "zero at -(2/3) eta_C",
        zero_res,
        1e-14,
        "eta_C in {0.4, 0.6}",
    ));
    checks.push(Check::at_least(
        "divergence at -(3/4) eta_C",
        pole_min,
        1e6,
        "|eta| at 1e-9 either side",
    ));

    // quasi-static limit on the reference spec
    let conv = convergence(&cfg.spec)?;
    checks.push(Check::at_least(
        "efficiency error scales as 1/n",
        conv.efficiency_rate,
        0.5,
        format!(
            "min/max of n*|eta - eta_C| over n = 10..1e4, C = {:.6e}",
            conv.efficiency_c
        ),
    ));
    checks.push(Check::at_least(
        "hot heat error scales as 1/n",
        conv.heat_rate,
        0.5,
        format!("min/max of n*|Q - T dS| over n = 10..1e4, C = {:.6e}", conv.heat_c),
    ));
    checks.push(Check::within(
        "efficiency at n = 1e5 near Carnot",
        conv.final_gap,
        QUASISTATIC_TOL,
        "|eta(1e5) - eta_C|",
    ));

    let x = 0.01;
    let series = (curzon_ahlborn(x)? - (x / 2.0 + x * x / 8.0)).abs();
    checks.push(Check::within(
        "Curzon-Ahlborn series",
        series,
        CA_SERIES_TOL,
        "eta_C = 0.01",
    ));

    Ok(ValidationReport { checks })
}

/// Errors of the finite-`n` cycle against its quasi-static limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub ns: Vec<usize>,
    pub efficiency_errors: Vec<f64>,
    pub heat_errors: Vec<f64>,
    /// Smallest `C` with `|eta(n) - eta_C| <= C / n` on `ns`.
    pub efficiency_c: f64,
    /// `min / max` of `n * error`; 1 for exact `1/n` scaling.
    pub efficiency_rate: f64,
    pub heat_c: f64,
    pub heat_rate: f64,
    /// `|eta(1e5) - eta_C|`.
    pub final_gap: f64,
}

pub fn convergence(spec: &CycleSpec) -> Result<Convergence> {
    let ns = vec![10, 100, 1_000, 10_000];
    let eta_c = spec.carnot_efficiency();
    let q_rev = quasistatic_heat(spec.hot(), spec.gap_a(), spec.gap_b())?;
    let runs = sweep::map(&ns, |&n| -> Result<(f64, f64)> {
        let r = simulate_cycle_with(&spec.with_subdivisions(n)?, SimOptions::default())?;
        Ok(((r.efficiency - eta_c).abs(), (r.q_hot - q_rev).abs()))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let fine = simulate_cycle_with(&spec.with_subdivisions(100_000)?, SimOptions::default())?;
    let scaled = |errs: &[f64]| -> (f64, f64) {
        let v: Vec<f64> = errs.iter().zip(&ns).map(|(e, &n)| e * n as f64).collect();
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        (max, min / max)
    };
    let efficiency_errors: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let heat_errors: Vec<f64> = runs.iter().map(|r| r.1).collect();
    let (efficiency_c, efficiency_rate) = scaled(&efficiency_errors);
    let (heat_c, heat_rate) = scaled(&heat_errors);
    Ok(Convergence {
        ns,
        efficiency_errors,
        heat_errors,
        efficiency_c,
        efficiency_rate,
        heat_c,
        heat_rate,
        final_gap: (fine.efficiency - eta_c).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_is_deterministic_and_valid() {
        let a = spec_family(10, 3);
        assert_eq!(a, spec_family(10, 3));
        assert!(a.iter().all(|s| s.gap_a() > s.gap_b() && s.carnot_efficiency() > 0.0));
        assert_eq!(optimum_family(20).len(), 20);
    }

    #[test]
    fn default_suite_passes() {
        let report = run_validation(&ValidationConfig::default()).unwrap();
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn minimal_subdivision_suite_passes() {
        let cfg = ValidationConfig {
            spec: CycleSpec::new(4.0, 2.0, 0.5, 1.0, 1).unwrap(),
            ..ValidationConfig::default()
        };
        assert!(run_validation(&cfg).unwrap().passed());
    }

    #[test]
    fn corrupted_cold_sign_fails_closure() {
        let cfg = ValidationConfig {
            sim: SimOptions {
                flip_cold_step_sign: true,
            },
            ..ValidationConfig::default()
        };
        let report = run_validation(&cfg).unwrap();
        assert!(!report.passed());
        assert!(report.failures().any(|c| c.name == "first-law closure per cycle"));
    }
}
