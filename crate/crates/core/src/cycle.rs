//! Four-stroke finite-time cycle.
//!
//! Each isothermal stroke is split into `n` alternations of an abrupt gap
//! change (population frozen) followed by full thermalization at the new gap.
//! The adiabatic strokes move the gap at frozen population, which pins the
//! cold-side corners to `gap_c = (beta_h / beta_c) * gap_b` and
//! `gap_d = (beta_h / beta_c) * gap_a`.

use crate::error::{Error, Result};
use crate::thermo::{two_level_entropy, EnginePoint, Reservoir, StepKind, StepRecord};

/// Full parameterization of one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    gap_a: f64,
    gap_b: f64,
    hot: Reservoir,
    cold: Reservoir,
    n: usize,
}

impl CycleSpec {
    /// `gap_a > gap_b > 0`, `beta_c >= beta_h > 0`, `n >= 1`.
    ///
    /// Equal inverse temperatures are accepted as the collapsed,
    /// zero-Carnot-efficiency limit.
    pub fn new(gap_a: f64, gap_b: f64, beta_h: f64, beta_c: f64, n: usize) -> Result<Self> {
        if !(gap_b.is_finite() && gap_b > 0.0) {
            return Err(Error::domain("gap_b", "positive and finite", gap_b));
        }
        if !(gap_a.is_finite() && gap_a > gap_b) {
            return Err(Error::domain("gap_a", "finite and greater than gap_b", gap_a));
        }
        let hot = Reservoir::new(beta_h)?;
        let cold = Reservoir::new(beta_c)?;
        if beta_c < beta_h {
            return Err(Error::domain("beta_c", "at least beta_h", beta_c));
        }
        if n == 0 {
            return Err(Error::domain("n", "at least 1", 0.0));
        }
        Ok(Self {
            gap_a,
            gap_b,
            hot,
            cold,
            n,
        })
    }

    /// Same spec with a different subdivision count.
    pub fn with_subdivisions(&self, n: usize) -> Result<Self> {
        Self::new(self.gap_a, self.gap_b, self.hot.inv_temp(), self.cold.inv_temp(), n)
    }

    pub fn gap_a(&self) -> f64 {
        self.gap_a
    }

    pub fn gap_b(&self) -> f64 {
        self.gap_b
    }

    pub fn gap_c(&self) -> f64 {
        self.temperature_ratio() * self.gap_b
    }

    pub fn gap_d(&self) -> f64 {
        self.temperature_ratio() * self.gap_a
    }

    pub fn hot(&self) -> Reservoir {
        self.hot
    }

    pub fn cold(&self) -> Reservoir {
        self.cold
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `beta_h / beta_c`, i.e. `T_c / T_h`.
    pub fn temperature_ratio(&self) -> f64 {
        self.hot.inv_temp() / self.cold.inv_temp()
    }

    pub fn carnot_efficiency(&self) -> f64 {
        1.0 - self.temperature_ratio()
    }
}

/// The four corner states A, B, C, D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corners {
    pub a: EnginePoint,
    pub b: EnginePoint,
    pub c: EnginePoint,
    pub d: EnginePoint,
}

pub fn derive_corners(spec: &CycleSpec) -> Result<Corners> {
    let a = EnginePoint::equilibrated(spec.hot, spec.gap_a)?;
    let b = EnginePoint::equilibrated(spec.hot, spec.gap_b)?;
    let c = EnginePoint::new(spec.gap_c(), b.pop_excited())?;
    let d = EnginePoint::new(spec.gap_d(), a.pop_excited())?;
    Ok(Corners { a, b, c, d })
}

/// Ordered sub-steps of one isothermal stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct StrokeLedger {
    steps: Vec<StepRecord>,
    total_work: f64,
    total_heat: f64,
}

impl StrokeLedger {
    fn from_steps(steps: Vec<StepRecord>) -> Self {
        let total_work = steps.iter().map(|s| s.work).sum();
        let total_heat = steps.iter().map(|s| s.heat).sum();
        Self {
            steps,
            total_work,
            total_heat,
        }
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn total_work(&self) -> f64 {
        self.total_work
    }

    pub fn total_heat(&self) -> f64 {
        self.total_heat
    }

    pub fn start(&self) -> EnginePoint {
        self.steps[0].before
    }

    pub fn end(&self) -> EnginePoint {
        self.steps[self.steps.len() - 1].after
    }

    /// Populations right before each gap change: the starting population
    /// followed by every equilibrated population except the last.
    pub fn frozen_populations(&self) -> Vec<f64> {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKind::AdiabaticChange)
            .map(|s| s.before.pop_excited())
            .collect()
    }

    /// Equilibrated populations strictly inside the stroke (the final
    /// thermalization onto the end corner is excluded).
    pub fn intermediate_populations(&self) -> Vec<f64> {
        let mut pops = self.frozen_populations();
        pops.remove(0);
        pops
    }
}

/// Isothermal stroke starting from equilibrium with `res` at `gap_start`.
pub fn simulate_isothermal_stroke(res: Reservoir, gap_start: f64, gap_end: f64, n: usize) -> Result<StrokeLedger> {
    let start = EnginePoint::equilibrated(res, gap_start)?;
    isothermal_stroke_from(res, start, gap_end, n, WorkSign::Physical)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WorkSign {
    Physical,
    Flipped,
}

fn isothermal_stroke_from(
    res: Reservoir,
    start: EnginePoint,
    gap_end: f64,
    n: usize,
    sign: WorkSign,
) -> Result<StrokeLedger> {
    if n == 0 {
        return Err(Error::domain("n", "at least 1", 0.0));
    }
    if !(gap_end.is_finite() && gap_end > 0.0) {
        return Err(Error::domain("gap_end", "positive and finite", gap_end));
    }
    let gap_start = start.gap();
    let delta = (gap_start - gap_end) / n as f64;
    let mut steps = Vec::with_capacity(2 * n);
    let mut point = start;
    for k in 1..=n {
        // land exactly on the end gap so the next stroke starts at the corner
        let gap = if k == n { gap_end } else { gap_start - k as f64 * delta };
        let mut change = StepRecord::adiabatic_change(point, gap)?;
        if sign == WorkSign::Flipped {
            change.work = -change.work;
        }
        let relax = StepRecord::equilibration(change.after, res)?;
        point = relax.after;
        steps.push(change);
        steps.push(relax);
    }
    Ok(StrokeLedger::from_steps(steps))
}

/// Whole-stroke gap change at frozen population; no heat is exchanged.
pub fn simulate_adiabatic_stroke(point_from: EnginePoint, gap_to: f64) -> Result<StepRecord> {
    StepRecord::adiabatic_change(point_from, gap_to)
}

/// Reversible (`n -> infinity`) heat absorbed along the isotherm: `T * dS`.
pub fn quasistatic_heat(res: Reservoir, gap_start: f64, gap_end: f64) -> Result<f64> {
    let s0 = EnginePoint::equilibrated(res, gap_start)?;
    let s1 = EnginePoint::equilibrated(res, gap_end)?;
    Ok(res.temperature() * (two_level_entropy(s1.pop_excited()) - two_level_entropy(s0.pop_excited())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Heat absorbed from the hot side and net work delivered.
    Engine,
    /// Net work is consumed (or no heat is drawn from the hot side).
    NonEngine,
}

/// Fault injection for negative-control runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimOptions {
    /// Record cold-stroke gap-change work with the wrong sign.
    pub flip_cold_step_sign: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleResult {
    pub spec: CycleSpec,
    pub corners: Corners,
    /// A -> B in contact with the hot reservoir.
    pub hot_stroke: StrokeLedger,
    /// B -> C.
    pub compression: StepRecord,
    /// C -> D in contact with the cold reservoir.
    pub cold_stroke: StrokeLedger,
    /// D -> A.
    pub expansion: StepRecord,
    pub q_hot: f64,
    pub q_cold: f64,
    /// Net work done on the system over the cycle; negative for an engine.
    pub w_net: f64,
    /// Delivered work over hot-side heat, `-w_net / q_hot`.
    pub efficiency: f64,
    pub delta_step: f64,
    pub delta_prime_step: f64,
    pub hot_intermediate_pops: Vec<f64>,
    pub cold_intermediate_pops: Vec<f64>,
    pub regime: Regime,
}

impl CycleResult {
    /// Sum of all work and heat over the cycle; zero when the state returns to A.
    pub fn closure_residual(&self) -> f64 {
        self.all_steps().map(|s| s.work + s.heat).sum()
    }

    /// Every sub-step in cycle order A -> B -> C -> D -> A.
    pub fn all_steps(&self) -> impl Iterator<Item = &StepRecord> {
        self.hot_stroke
            .steps()
            .iter()
            .chain(std::iter::once(&self.compression))
            .chain(self.cold_stroke.steps().iter())
            .chain(std::iter::once(&self.expansion))
    }

    /// Largest per-step first-law residual in the cycle.
    pub fn max_step_residual(&self) -> f64 {
        self.all_steps()
            .map(|s| s.first_law_residual().abs())
            .fold(0.0, f64::max)
    }
}

pub fn simulate_cycle(spec: &CycleSpec) -> Result<CycleResult> {
    simulate_cycle_with(spec, SimOptions::default())
}

pub fn simulate_cycle_with(spec: &CycleSpec, opts: SimOptions) -> Result<CycleResult> {
    let corners = derive_corners(spec)?;
    let hot_stroke = isothermal_stroke_from(spec.hot, corners.a, spec.gap_b, spec.n, WorkSign::Physical)?;
    let compression = simulate_adiabatic_stroke(hot_stroke.end(), spec.gap_c())?;
    let cold_sign = if opts.flip_cold_step_sign {
        WorkSign::Flipped
    } else {
        WorkSign::Physical
    };
    let cold_stroke = isothermal_stroke_from(spec.cold, compression.after, spec.gap_d(), spec.n, cold_sign)?;
    let expansion = simulate_adiabatic_stroke(cold_stroke.end(), spec.gap_a)?;

    let q_hot = hot_stroke.total_heat();
    let q_cold = cold_stroke.total_heat();
    let w_net = hot_stroke.total_work() + compression.work + cold_stroke.total_work() + expansion.work;
    let regime = if q_hot > 0.0 && -w_net > 0.0 {
        Regime::Engine
    } else {
        Regime::NonEngine
    };
    let efficiency = if q_hot > 0.0 { -w_net / q_hot } else { f64::NAN };
    let n = spec.n as f64;

    Ok(CycleResult {
        spec: *spec,
        corners,
        hot_intermediate_pops: hot_stroke.intermediate_populations(),
        cold_intermediate_pops: cold_stroke.intermediate_populations(),
        hot_stroke,
        compression,
        cold_stroke,
        expansion,
        q_hot,
        q_cold,
        w_net,
        efficiency,
        delta_step: (spec.gap_a - spec.gap_b) / n,
        delta_prime_step: (spec.gap_d() - spec.gap_c()) / n,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::gibbs_population;
    use approx::assert_relative_eq;

    fn g(beta: f64, gap: f64) -> f64 {
        gibbs_population(Reservoir::new(beta).unwrap(), gap).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(CycleSpec::new(2.0, 3.0, 0.5, 1.0, 3).is_err());
        assert!(CycleSpec::new(4.0, 0.0, 0.5, 1.0, 3).is_err());
        assert!(CycleSpec::new(4.0, 2.0, 1.0, 0.5, 3).is_err());
        assert!(CycleSpec::new(4.0, 2.0, 0.5, 1.0, 0).is_err());
        assert!(CycleSpec::new(4.0, 2.0, 1.0, 1.0, 3).is_ok());
    }

    #[test]
    fn corners_collapse_for_equal_temperatures() {
        let spec = CycleSpec::new(4.0, 2.0, 0.8, 0.8, 3).unwrap();
        let c = derive_corners(&spec).unwrap();
        assert_eq!(c.c.gap(), c.b.gap());
        assert_eq!(c.d.gap(), c.a.gap());
    }

    #[test]
    fn corner_examples() {
        let spec = CycleSpec::new(5.0, 3.0, 1.0, 2.0, 3).unwrap();
        assert_eq!(derive_corners(&spec).unwrap().c.gap(), 1.5);

        let spec = CycleSpec::new(4.0, 2.0, 0.5, 1.0, 3).unwrap();
        let c = derive_corners(&spec).unwrap();
        assert_relative_eq!(c.a.pop_excited(), 1.0 / (1.0 + 2f64.exp()), epsilon = 1e-16);
        assert_relative_eq!(c.a.pop_excited(), 0.119_202_922_022_118, epsilon = 1e-14);
        assert_eq!(c.d.gap(), 2.0);
        assert_relative_eq!(g(1.0, 2.0), c.a.pop_excited(), epsilon = 1e-16);
        assert_relative_eq!(g(1.0, c.c.gap()), c.c.pop_excited(), epsilon = 1e-16);
    }

    #[test]
    fn flat_stroke_is_all_zero() {
        let res = Reservoir::new(1.3).unwrap();
        let ledger = simulate_isothermal_stroke(res, 2.0, 2.0, 4).unwrap();
        assert_eq!(ledger.steps().len(), 8);
        assert!(ledger.steps().iter().all(|s| s.work == 0.0 && s.heat == 0.0));
    }

    #[test]
    fn single_step_stroke_by_hand() {
        let res = Reservoir::new(1.0).unwrap();
        let ledger = simulate_isothermal_stroke(res, 2.0, 1.0, 1).unwrap();
        assert_relative_eq!(ledger.total_work(), -g(1.0, 2.0), epsilon = 1e-16);
        assert_relative_eq!(ledger.total_heat(), g(1.0, 1.0) - g(1.0, 2.0), epsilon = 1e-16);
    }

    #[test]
    fn stroke_alternates_kinds() {
        let res = Reservoir::new(0.9).unwrap();
        let ledger = simulate_isothermal_stroke(res, 5.0, 2.0, 5).unwrap();
        for (i, s) in ledger.steps().iter().enumerate() {
            let expected = if i % 2 == 0 {
                StepKind::AdiabaticChange
            } else {
                StepKind::Equilibration
            };
            assert_eq!(s.kind, expected);
        }
        assert_eq!(ledger.end().gap(), 2.0);
        assert_eq!(ledger.intermediate_populations().len(), 4);
        assert!(simulate_isothermal_stroke(res, 5.0, 2.0, 0).is_err());
    }

    #[test]
    fn adiabatic_examples() {
        let p = EnginePoint::new(1.0, 0.2).unwrap();
        assert_eq!(simulate_adiabatic_stroke(p, 1.0).unwrap().work, 0.0);
        let s = simulate_adiabatic_stroke(p, 2.5).unwrap();
        assert_relative_eq!(s.work, 0.3, epsilon = 1e-16);
        assert_eq!(s.heat, 0.0);
        assert_eq!(s.after.pop_excited(), 0.2);
    }

    #[test]
    fn quasistatic_heat_examples() {
        let res = Reservoir::new(1.0).unwrap();
        assert_eq!(quasistatic_heat(res, 2.0, 2.0).unwrap(), 0.0);
        let s = |p: f64| -p * p.ln() - (1.0 - p) * (1.0 - p).ln();
        let expected = s(g(1.0, 1.5)) - s(g(1.0, 3.0));
        let q = quasistatic_heat(res, 3.0, 1.5).unwrap();
        assert_relative_eq!(q, expected, epsilon = 1e-15);
        assert_relative_eq!(quasistatic_heat(res, 1.5, 3.0).unwrap(), -q, epsilon = 1e-15);
    }

    #[test]
    fn reference_cycle_is_a_sub_carnot_engine() {
        let spec = CycleSpec::new(4.0, 2.0, 0.5, 1.0, 3).unwrap();
        let r = simulate_cycle(&spec).unwrap();
        assert_eq!(r.regime, Regime::Engine);
        assert!(r.q_hot > 0.0 && r.q_cold < 0.0);
        assert!(r.efficiency > 0.0 && r.efficiency < 0.5);
        assert!(r.closure_residual().abs() < 1e-12);
        assert!(r.max_step_residual() < 1e-12);
        assert_relative_eq!(r.w_net, -(r.q_hot + r.q_cold), epsilon = 1e-12);
        assert_relative_eq!(r.delta_prime_step, (2.0 - 1.0) / 3.0);
    }

    #[test]
    fn equal_temperatures_dissipate_exactly_the_population_jump() {
        // Hot and cold strokes sample the isotherm on opposite Riemann ends,
        // so the residue is delta * (P_B - P_A), not zero.
        let spec = CycleSpec::new(4.0, 2.0, 1.0, 1.0, 3).unwrap();
        let r = simulate_cycle(&spec).unwrap();
        let expected = (2.0 / 3.0) * (g(1.0, 2.0) - g(1.0, 4.0));
        assert_relative_eq!(r.w_net, expected, epsilon = 1e-14);
        assert_eq!(r.regime, Regime::NonEngine);
        let fine = simulate_cycle(&spec.with_subdivisions(10_000).unwrap()).unwrap();
        assert!(fine.w_net.abs() < 1e-4);
    }

    #[test]
    fn flipped_cold_sign_breaks_closure() {
        let spec = CycleSpec::new(4.0, 2.0, 0.5, 1.0, 3).unwrap();
        let opts = SimOptions {
            flip_cold_step_sign: true,
        };
        let r = simulate_cycle_with(&spec, opts).unwrap();
        assert!(r.closure_residual().abs() > 1e-3);
    }
}
