//! Two-level working substance: equilibrium populations and the discrete
//! work/heat differentials of the quantum first law.
//!
//! Units are such that `hbar = k_B = 1`. The ground level sits at energy 0
//! and the excited level at the gap, so the internal energy of a state is
//! `gap * pop_excited`. Work and heat are signed from the system's point of
//! view: work is the energy put *into* the system by moving the gap, heat is
//! the energy absorbed from the reservoir.

use crate::error::{Error, Result};

/// Excited-state population `1 / (1 + exp(x))` for `x = beta * gap`.
///
/// Unclamped and defined for every finite `x`, including `x = 0` (degenerate
/// levels) and negative `x`. Evaluated on the branch that never overflows.
pub fn population_kernel(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Binary Gibbs entropy `-p ln p - (1 - p) ln(1 - p)`.
pub fn two_level_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Heat reservoir at a fixed inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reservoir {
    inv_temp: f64,
}

impl Reservoir {
    pub fn new(inv_temp: f64) -> Result<Self> {
        if !(inv_temp.is_finite() && inv_temp > 0.0) {
            return Err(Error::domain("inverse temperature", "positive and finite", inv_temp));
        }
        Ok(Self { inv_temp })
    }

    pub fn inv_temp(&self) -> f64 {
        self.inv_temp
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.inv_temp
    }
}

/// Equilibrium excited-state population at `gap` in contact with `res`.
pub fn gibbs_population(res: Reservoir, gap: f64) -> Result<f64> {
    if !(gap.is_finite() && gap > 0.0) {
        return Err(Error::domain("gap", "positive and finite", gap));
    }
    Ok(population_kernel(res.inv_temp * gap))
}

/// Instantaneous state of the working substance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnginePoint {
    gap: f64,
    pop_excited: f64,
}

impl EnginePoint {
    pub fn new(gap: f64, pop_excited: f64) -> Result<Self> {
        if !(gap.is_finite() && gap > 0.0) {
            return Err(Error::domain("gap", "positive and finite", gap));
        }
        if !(pop_excited > 0.0 && pop_excited < 1.0) {
            return Err(Error::domain("excited population", "in (0, 1)", pop_excited));
        }
        Ok(Self { gap, pop_excited })
    }

    /// State reached after full thermalization with `res` at `gap`.
    pub fn equilibrated(res: Reservoir, gap: f64) -> Result<Self> {
        let p = gibbs_population(res, gap)?;
        Self::new(gap, p)
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn pop_excited(&self) -> f64 {
        self.pop_excited
    }

    pub fn pop_ground(&self) -> f64 {
        1.0 - self.pop_excited
    }

    pub fn internal_energy(&self) -> f64 {
        self.gap * self.pop_excited
    }

    pub fn entropy(&self) -> f64 {
        two_level_entropy(self.pop_excited)
    }
}

/// Work done on the system when the gap moves at frozen population `p`.
pub fn step_work(p: f64, gap_from: f64, gap_to: f64) -> f64 {
    p * (gap_to - gap_from)
}

/// Heat absorbed when the population relaxes from `p_from` to `p_to` at fixed `gap`.
pub fn step_heat(gap: f64, p_from: f64, p_to: f64) -> f64 {
    gap * (p_to - p_from)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    AdiabaticChange,
    Equilibration,
}

impl StepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::AdiabaticChange => "adiabatic_change",
            StepKind::Equilibration => "equilibration",
        }
    }
}

/// One elementary sub-step of a stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub kind: StepKind,
    pub work: f64,
    pub heat: f64,
    pub before: EnginePoint,
    pub after: EnginePoint,
}

impl StepRecord {
    /// Detached from the reservoir, the gap jumps to `gap_to`; populations are frozen.
    pub fn adiabatic_change(before: EnginePoint, gap_to: f64) -> Result<Self> {
        let after = EnginePoint::new(gap_to, before.pop_excited)?;
        Ok(Self {
            kind: StepKind::AdiabaticChange,
            work: step_work(before.pop_excited, before.gap, gap_to),
            heat: 0.0,
            before,
            after,
        })
    }

    /// Attached to `res` at fixed gap, the population relaxes to its Gibbs value.
    pub fn equilibration(before: EnginePoint, res: Reservoir) -> Result<Self> {
        let after = EnginePoint::equilibrated(res, before.gap)?;
        Ok(Self {
            kind: StepKind::Equilibration,
            work: 0.0,
            heat: step_heat(before.gap, before.pop_excited, after.pop_excited),
            before,
            after,
        })
    }

    /// `dU - (work + heat)`; zero up to rounding for a well-formed record.
    pub fn first_law_residual(&self) -> f64 {
        (self.after.internal_energy() - self.before.internal_energy()) - (self.work + self.heat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn kernel_at_degenerate_gap_is_one_half() {
        assert_eq!(population_kernel(0.0), 0.5);
    }

    #[test]
    fn gibbs_inverts_log_ratio() {
        let res = Reservoir::new(1.0).unwrap();
        let p = gibbs_population(res, 3f64.ln()).unwrap();
        assert_relative_eq!(p, 0.25, epsilon = 1e-16);
    }

    #[test]
    fn gibbs_deep_in_the_tail() {
        // 1/(1+e^50) evaluated at 50 significant digits.
        let oracle = 1.928_749_847_963_917_8e-22;
        let res = Reservoir::new(2.0).unwrap();
        let p = gibbs_population(res, 25.0).unwrap();
        assert_relative_eq!(p, oracle, max_relative = 1e-14);
        // no overflow far beyond the f64 exp range
        assert_eq!(population_kernel(1e4), 0.0);
        assert_eq!(population_kernel(-1e4), 1.0);
    }

    #[test]
    fn rejects_non_positive_inputs() {
        let res = Reservoir::new(1.0).unwrap();
        assert!(gibbs_population(res, 0.0).is_err());
        assert!(gibbs_population(res, -1.0).is_err());
        assert!(Reservoir::new(0.0).is_err());
        assert!(Reservoir::new(f64::NAN).is_err());
        assert!(EnginePoint::new(1.0, 1.0).is_err());
    }

    #[test]
    fn step_examples() {
        assert_eq!(step_work(0.3, 2.0, 2.0), 0.0);
        assert_relative_eq!(step_work(0.25, 4.0, 3.0), -0.25);
        assert_eq!(step_heat(5.0, 0.2, 0.2), 0.0);
        assert_relative_eq!(step_heat(2.0, 0.1, 0.2), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn record_kinds_respect_their_constraints() {
        let res = Reservoir::new(0.7).unwrap();
        let start = EnginePoint::equilibrated(res, 3.0).unwrap();
        let a = StepRecord::adiabatic_change(start, 2.5).unwrap();
        assert_eq!(a.heat, 0.0);
        assert_eq!(a.before.pop_excited(), a.after.pop_excited());
        let e = StepRecord::equilibration(a.after, res).unwrap();
        assert_eq!(e.work, 0.0);
        assert_eq!(e.before.gap(), e.after.gap());
        assert!(e.heat > 0.0, "lower gap raises the excited population");
    }

    proptest! {
        #[test]
        fn step_first_law_closes(
            beta in 0.01f64..10.0,
            g0 in 0.01f64..20.0,
            g1 in 0.01f64..20.0,
        ) {
            let res = Reservoir::new(beta).unwrap();
            let p0 = EnginePoint::equilibrated(res, g0).unwrap_or(EnginePoint::new(g0, 0.25).unwrap());
            let a = StepRecord::adiabatic_change(p0, g1).unwrap();
            prop_assert!(a.first_law_residual().abs() <= 1e-12);
            if let Ok(e) = StepRecord::equilibration(a.after, res) {
                prop_assert!(e.first_law_residual().abs() <= 1e-12);
            }
        }

        #[test]
        fn kernel_is_decreasing_and_below_half(x in 1e-6f64..700.0, dx in 1e-6f64..10.0) {
            let p = population_kernel(x);
            prop_assert!(p < 0.5);
            prop_assert!(population_kernel(x + dx) <= p);
        }

        #[test]
        fn differentials_are_linear(p in 0.001f64..0.999, g in 0.1f64..10.0, d in -5.0f64..5.0, c in -4.0f64..4.0) {
            let w1 = step_work(p, g, g + d);
            let wc = step_work(p, g, g + c * d);
            prop_assert!((wc - c * w1).abs() <= 1e-12 * (1.0 + wc.abs()));
            let q1 = step_heat(g, p, p + d * 1e-3);
            let qc = step_heat(g, p, p + c * d * 1e-3);
            prop_assert!((qc - c * q1).abs() <= 1e-12 * (1.0 + qc.abs()));
        }
    }
}
