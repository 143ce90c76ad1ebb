//! Closed-form expressions for the three-subdivision cycle.
//!
//! These are written directly in terms of corner gaps and populations and
//! never touch the step ledger, so the two can be checked against each other.

use crate::cycle::CycleSpec;
use crate::error::Result;
use crate::thermo::gibbs_population;

/// Subdivision count the closed forms are written for.
pub const REFERENCE_SUBDIVISIONS: usize = 3;

/// Corner gaps plus the populations appearing in the closed forms.
///
/// `p_2` and `p_4` are the hot-stroke populations after the first and
/// second thermalizations of a three-step stroke. Under the adiabatic
/// mapping the cold stroke visits the same two populations in reverse order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceState {
    pub gap_a: f64,
    pub gap_b: f64,
    pub gap_c: f64,
    pub gap_d: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_c: f64,
    pub p_2: f64,
    pub p_4: f64,
    pub eta_carnot: f64,
}

impl ReferenceState {
    pub fn from_spec(spec: &CycleSpec) -> Result<Self> {
        let hot = spec.hot();
        let (gap_a, gap_b) = (spec.gap_a(), spec.gap_b());
        let step = (gap_a - gap_b) / REFERENCE_SUBDIVISIONS as f64;
        let p_b = gibbs_population(hot, gap_b)?;
        Ok(Self {
            gap_a,
            gap_b,
            gap_c: spec.gap_c(),
            gap_d: spec.gap_d(),
            p_a: gibbs_population(hot, gap_a)?,
            p_b,
            p_c: p_b,
            p_2: gibbs_population(hot, gap_a - step)?,
            p_4: gibbs_population(hot, gap_a - 2.0 * step)?,
            eta_carnot: spec.carnot_efficiency(),
        })
    }

    /// Hot-stroke step `(gap_a - gap_b) / 3`.
    pub fn delta(&self) -> f64 {
        (self.gap_a - self.gap_b) / REFERENCE_SUBDIVISIONS as f64
    }

    /// Cold-stroke step `(gap_d - gap_c) / 3`.
    pub fn delta_prime(&self) -> f64 {
        (self.gap_d - self.gap_c) / REFERENCE_SUBDIVISIONS as f64
    }

    /// `(gap_a - gap_b)(P_A + P_2 + P_4)`.
    pub fn phi(&self) -> f64 {
        (self.gap_a - self.gap_b) * (self.p_a + self.p_2 + self.p_4)
    }

    /// `(gap_d - gap_c)(P_C + P_2 + P_4)`.
    pub fn pi(&self) -> f64 {
        (self.gap_d - self.gap_c) * (self.p_c + self.p_2 + self.p_4)
    }

    /// `U_B - U_A`, the static part of the hot-side heat.
    pub fn energy_change(&self) -> f64 {
        self.gap_b * self.p_b - self.gap_a * self.p_a
    }
}

/// Hot-stroke heat at three subdivisions,
/// `gap_b P_B - gap_a P_A + delta (P_A + P_2 + P_4)`.
pub fn hot_heat_three_step(r: &ReferenceState) -> f64 {
    r.gap_b * r.p_b - r.gap_a * r.p_a + r.delta() * (r.p_a + r.p_2 + r.p_4)
}

/// Magnitude of the hot-stroke work at three subdivisions, `delta (P_A + P_2 + P_4)`.
pub fn hot_work_magnitude_three_step(r: &ReferenceState) -> f64 {
    r.delta() * (r.p_a + r.p_2 + r.p_4)
}

/// Net work done on the system over a three-subdivision cycle, in the
/// bracketed form
/// `(gap_c - gap_b) P_B [1 + (gap_a - gap_d) P_A / ((gap_c - gap_b) P_B)]
///  + delta' P_C - delta P_A + (delta' - delta)(P_2 + P_4)`.
///
/// Negative for an engine; matches the ledger's `w_net` sign.
pub fn net_work_three_step(r: &ReferenceState) -> f64 {
    let lead = (r.gap_c - r.gap_b) * r.p_b;
    let adiabatic = if lead == 0.0 {
        (r.gap_a - r.gap_d) * r.p_a
    } else {
        lead * (1.0 + (r.gap_a - r.gap_d) * r.p_a / lead)
    };
    let (d, dp) = (r.delta(), r.delta_prime());
    adiabatic + dp * r.p_c - d * r.p_a + (dp - d) * (r.p_2 + r.p_4)
}

/// Efficiency of the three-subdivision cycle: delivered work over hot-side heat.
pub fn efficiency_three_step(r: &ReferenceState) -> f64 {
    -net_work_three_step(r) / hot_heat_three_step(r)
}

/// The efficiency expression in the sign pattern it is usually quoted with:
/// `[(gap_b - gap_c) P_B (1 - (gap_a - gap_d) P_A / ((gap_c - gap_b) P_B))
///   - (delta' P_C + delta P_A - (delta' - delta)(P_2 + P_4))] / Q_hot`.
///
/// Kept for comparison only: three of its terms carry the opposite sign to
/// [`efficiency_three_step`], so it does not agree with the ledger.
pub fn efficiency_three_step_as_quoted(r: &ReferenceState) -> f64 {
    let lead = (r.gap_b - r.gap_c) * r.p_b;
    let adiabatic = lead * (1.0 - (r.gap_a - r.gap_d) * r.p_a / ((r.gap_c - r.gap_b) * r.p_b));
    let (d, dp) = (r.delta(), r.delta_prime());
    let rest = dp * r.p_c + d * r.p_a - (dp - d) * (r.p_2 + r.p_4);
    (adiabatic - rest) / hot_heat_three_step(r)
}
