//! Tabulated sweeps of the efficiency at maximum Omega-dot.

use crate::error::{Error, Result};
use crate::merit::{ca_crossover, curzon_ahlborn, eta_at_max_omega, negative_branch, NegativeBranch};
use crate::sweep;

pub fn default_fig2_eta_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

pub fn default_fig2_ratios() -> Vec<f64> {
    vec![0.0, 0.1, 1.0, 10.0]
}

pub fn default_eta_pair() -> Vec<f64> {
    vec![0.4, 0.6]
}

pub fn default_fig3_ratios() -> Vec<f64> {
    sweep::logspace(1e-3, 1e3, 60)
}

pub const DEFAULT_FIG4_STEPS: usize = 400;
pub const DEFAULT_POLE_EPS: f64 = 1e-6;

/// Default negative-ratio range: from 1.2 times the deepest pole up to `-1e-3`.
pub fn default_fig4_range(eta_carnot: &[f64]) -> (f64, f64) {
    let eta_max = eta_carnot.iter().copied().fold(0.0, f64::max);
    (-1.2 * 0.75 * eta_max, -1e-3)
}

/// Linear grid over `[r_min, r_max]` with every zero and pole of the
/// requested curves that falls inside the range merged in.
pub fn fig4_ratio_grid(eta_carnot: &[f64], r_min: f64, r_max: f64, steps: usize) -> Vec<f64> {
    let mut grid = sweep::linspace(r_min, r_max, steps);
    for &eta in eta_carnot {
        if let Ok(nb) = negative_branch(eta) {
            for r in [nb.zero, nb.pole] {
                if r_min <= r && r <= r_max {
                    grid.push(r);
                }
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn check_carnot(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::domain("Carnot efficiency list", "non-empty", 0.0));
    }
    for &eta in values {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::domain("Carnot efficiency", "in (0, 1)", eta));
        }
    }
    Ok(())
}

fn check_ratios(ratios: &[f64], ok: impl Fn(f64) -> bool, requirement: &'static str) -> Result<()> {
    if ratios.is_empty() {
        return Err(Error::domain("ratio list", "non-empty", 0.0));
    }
    match ratios.iter().find(|&&r| !ok(r)) {
        Some(&bad) => Err(Error::domain("ratio", requirement, bad)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    pub ratio: f64,
    /// Carnot efficiency at the crossing, if the curves cross in `(0, 1)`.
    pub eta_carnot: Option<f64>,
}

/// How the crossover point moves as the ratio grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    Mixed,
    Undetermined,
}

impl Trend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::Mixed => "mixed",
            Trend::Undetermined => "undetermined",
        }
    }
}

/// Efficiency at maximum Omega-dot against Carnot efficiency, one column per ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Table {
    pub eta_carnot: Vec<f64>,
    pub eta_ca: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `eta_omega[j][i]` is the value at `ratios[j]`, `eta_carnot[i]`.
    pub eta_omega: Vec<Vec<f64>>,
    pub crossovers: Vec<Crossover>,
    /// Direction of the crossover as the ratio increases.
    pub trend: Trend,
}

pub fn fig2(eta_grid: &[f64], ratios: &[f64]) -> Result<Fig2Table> {
    check_carnot(eta_grid)?;
    check_ratios(ratios, |r| r >= 0.0, "non-negative")?;
    let eta_ca = eta_grid
        .iter()
        .map(|&e| curzon_ahlborn(e))
        .collect::<Result<Vec<_>>>()?;
    let eta_omega = sweep::map(ratios, |&r| {
        eta_grid
            .iter()
            .map(|&e| eta_at_max_omega(e, r))
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let crossovers = sweep::map(ratios, |&r| {
        ca_crossover(r).map(|x| Crossover {
            ratio: r,
            eta_carnot: x,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let trend = crossover_trend(&crossovers);
    Ok(Fig2Table {
        eta_carnot: eta_grid.to_vec(),
        eta_ca,
        ratios: ratios.to_vec(),
        eta_omega,
        crossovers,
        trend,
    })
}

fn crossover_trend(crossovers: &[Crossover]) -> Trend {
    let mut found: Vec<(f64, f64)> = crossovers
        .iter()
        .filter_map(|c| c.eta_carnot.map(|x| (c.ratio, x)))
        .collect();
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    found.dedup_by(|a, b| a.0 == b.0);
    if found.len() < 2 {
        return Trend::Undetermined;
    }
    let up = found.windows(2).all(|w| w[1].1 > w[0].1);
    let down = found.windows(2).all(|w| w[1].1 < w[0].1);
    match (up, down) {
        (true, _) => Trend::Increasing,
        (_, true) => Trend::Decreasing,
        _ => Trend::Mixed,
    }
}

/// Efficiency at maximum Omega-dot against the ratio, one column per Carnot efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioTable {
    pub ratios: Vec<f64>,
    pub eta_carnot: Vec<f64>,
    /// `rows[i][k]` is the value at `ratios[i]`, `eta_carnot[k]`.
    pub rows: Vec<Vec<f64>>,
}

impl RatioTable {
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows.iter().map(|row| row[k]).collect()
    }
}

/// Positive-ratio branch.
pub fn fig3(eta_carnot: &[f64], ratios: &[f64]) -> Result<RatioTable> {
    check_carnot(eta_carnot)?;
    check_ratios(ratios, |r| r > 0.0, "positive")?;
    let rows = sweep::map(ratios, |&r| {
        eta_carnot
            .iter()
            .map(|&e| eta_at_max_omega(e, r))
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(RatioTable {
        ratios: ratios.to_vec(),
        eta_carnot: eta_carnot.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Table {
    pub table: RatioTable,
    pub branches: Vec<NegativeBranch>,
    /// Relative half-width of the excluded zone around each pole.
    pub pole_eps: f64,
}

/// Negative-ratio branch. Samples within `pole_eps * eta_C` of a pole are NaN.
pub fn fig4(eta_carnot: &[f64], ratios: &[f64], pole_eps: f64) -> Result<Fig4Table> {
    check_carnot(eta_carnot)?;
    check_ratios(ratios, |r| r < 0.0, "negative")?;
    if !(pole_eps >= 0.0) {
        return Err(Error::domain("pole exclusion", "non-negative", pole_eps));
    }
    let branches = eta_carnot
        .iter()
        .map(|&e| negative_branch(e))
        .collect::<Result<Vec<_>>>()?;
    let rows = sweep::map(ratios, |&r| {
        eta_carnot
            .iter()
            .zip(&branches)
            .map(|(&e, nb)| {
                if (r - nb.pole).abs() <= pole_eps * e {
                    f64::NAN
                } else {
                    eta_at_max_omega(e, r).unwrap_or(f64::NAN)
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(Fig4Table {
        table: RatioTable {
            ratios: ratios.to_vec(),
            eta_carnot: eta_carnot.to_vec(),
            rows,
        },
        branches,
        pole_eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_stays_below_carnot_and_crosses_at_three_quarters() {
        let grid = default_fig2_eta_grid();
        let t = fig2(&grid, &default_fig2_ratios()).unwrap();
        for col in &t.eta_omega {
            assert!(col.iter().zip(&grid).all(|(w, e)| w <= e));
        }
        let c0 = t.crossovers[0].eta_carnot.unwrap();
        assert!((c0 - 0.75).abs() < 1e-9);
        assert_eq!(t.trend, Trend::Increasing);
    }

    #[test]
    fn fig3_curves_climb_between_the_bounds() {
        let t = fig3(&default_eta_pair(), &default_fig3_ratios()).unwrap();
        for (k, &eta) in t.eta_carnot.iter().enumerate() {
            let col = t.column(k);
            assert!(col.windows(2).all(|w| w[1] > w[0]));
            assert!((col[0] - 2.0 / 3.0 * eta).abs() < 1e-3);
            assert!((col[col.len() - 1] - 0.75 * eta).abs() < 1e-3);
        }
        assert!(t.rows.iter().all(|row| row[0] < row[1]));
    }

    #[test]
    fn fig4_grid_contains_zeros_and_masks_poles() {
        let etas = default_eta_pair();
        let (lo, hi) = default_fig4_range(&etas);
        let grid = fig4_ratio_grid(&etas, lo, hi, DEFAULT_FIG4_STEPS);
        let t = fig4(&etas, &grid, DEFAULT_POLE_EPS).unwrap();
        for (k, nb) in t.branches.iter().enumerate() {
            let zero_row = t.table.ratios.iter().position(|&r| r == nb.zero).unwrap();
            assert!(t.table.rows[zero_row][k].abs() < 1e-10);
            let pole_row = t.table.ratios.iter().position(|&r| r == nb.pole).unwrap();
            assert!(t.table.rows[pole_row][k].is_nan());
        }
    }

    #[test]
    fn sweeps_reject_bad_inputs() {
        assert!(fig2(&[0.0, 0.5], &[1.0]).is_err());
        assert!(fig2(&[0.5], &[]).is_err());
        assert!(fig3(&[0.5], &[-1.0]).is_err());
        assert!(fig4(&[0.5], &[0.1], 1e-6).is_err());
    }
}
