//! The Omega-dot figure of merit and the efficiency at its maximum.
//!
//! The subdivision count is treated as a continuous cycle time `t` (unit
//! proportionality constant). In the fixed-population track the hot-stroke
//! populations `P_2`, `P_4` stay at their three-step values while the step
//! sizes shrink as `1/t`, which gives
//!
//! ```text
//! Q_hot(t) = (U_B - U_A) + Phi / t
//! eta(t)   = (W_adiabatic - Gamma / t) / Q_hot(t)
//! Omega(t) = (2 eta(t) - eta_C) Q_hot(t) / t
//! ```
//!
//! The self-consistent track instead simulates the full ledger at every
//! integer `n`, so the two can be compared.

use crate::cycle::{simulate_cycle, CycleSpec};
use crate::error::{Error, Result};
use crate::formulas::ReferenceState;
use crate::oracle::{bisect_root, golden_search, log_scan_bracket, Bracket};
use crate::sweep;

/// Crossover root-finding tolerance.
pub const ROOT_TOL: f64 = 1e-12;

/// Scalars controlling the efficiency at maximum Omega-dot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeritInputs {
    pub phi: f64,
    pub pi_: f64,
    pub gamma: f64,
    /// `gamma / phi`; NaN when `phi == 0`.
    pub ratio: f64,
    pub eta_carnot: f64,
    pub reference: ReferenceState,
}

impl MeritInputs {
    pub fn from_spec(spec: &CycleSpec) -> Result<Self> {
        Ok(Self::from_reference(ReferenceState::from_spec(spec)?))
    }

    pub fn from_reference(reference: ReferenceState) -> Self {
        let phi = reference.phi();
        let pi_ = reference.pi();
        let gamma = pi_ - phi;
        let ratio = if phi != 0.0 { gamma / phi } else { f64::NAN };
        Self {
            phi,
            pi_,
            gamma,
            ratio,
            eta_carnot: reference.eta_carnot,
            reference,
        }
    }
}

/// `(gap_d - gap_c) P_C - (gap_a - gap_b) P_A + (gap_d - gap_c - gap_a + gap_b)(P_2 + P_4)`,
/// the population bracket that multiplies `1/t` in the delivered work.
fn finite_time_bracket(r: &ReferenceState) -> f64 {
    (r.gap_d - r.gap_c) * r.p_c - (r.gap_a - r.gap_b) * r.p_a
        + (r.gap_d - r.gap_c - r.gap_a + r.gap_b) * (r.p_2 + r.p_4)
}

/// Work delivered by the two adiabatic strokes,
/// `(gap_b - gap_c) P_B [1 - (gap_a - gap_d) P_A / ((gap_b - gap_c) P_B)]`.
fn adiabatic_work(r: &ReferenceState) -> f64 {
    let lead = (r.gap_b - r.gap_c) * r.p_b;
    if lead == 0.0 {
        return -(r.gap_a - r.gap_d) * r.p_a;
    }
    lead * (1.0 - (r.gap_a - r.gap_d) * r.p_a / lead)
}

/// Hot-side heat at cycle time `t` with populations held at their reference values.
pub fn hot_heat_at(inputs: &MeritInputs, t: f64) -> f64 {
    let r = &inputs.reference;
    r.gap_b * r.p_b - r.gap_a * r.p_a + (r.gap_a - r.gap_b) * (r.p_a + r.p_2 + r.p_4) / t
}

/// Efficiency at cycle time `t` in the fixed-population track.
pub fn efficiency_at(inputs: &MeritInputs, t: f64) -> f64 {
    let r = &inputs.reference;
    (adiabatic_work(r) - finite_time_bracket(r) / t) / hot_heat_at(inputs, t)
}

/// `(2 eta(t) - eta_C) Q_hot(t) / t`.
pub fn omega_dot(inputs: &MeritInputs, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("cycle time", "positive", t));
    }
    let q = hot_heat_at(inputs, t);
    let eta = efficiency_at(inputs, t);
    Ok((2.0 * eta - inputs.eta_carnot) * q / t)
}

/// Closed-form maximizer of [`omega_dot`]:
///
/// ```text
/// t = 2 (2 [bracket] + eta_C Phi)
///     / ((gap_b - gap_c) P_B [1 - (gap_a - gap_d) P_A / ((gap_b - gap_c) P_B)])
/// ```
pub fn optimal_time(inputs: &MeritInputs) -> Result<f64> {
    if inputs.eta_carnot <= 0.0 {
        return Err(Error::NonEngine("equal reservoir temperatures collapse the cycle"));
    }
    let r = &inputs.reference;
    let lead = (r.gap_b - r.gap_c) * r.p_b;
    if lead == 0.0 {
        return Err(Error::Singular("vanishing compression work"));
    }
    let denominator = lead * (1.0 - (r.gap_a - r.gap_d) * r.p_a / lead);
    if denominator == 0.0 {
        return Err(Error::Singular("adiabatic strokes deliver no net work"));
    }
    let numerator = 2.0 * (2.0 * finite_time_bracket(r) + inputs.eta_carnot * inputs.phi);
    let t = numerator / denominator;
    // Omega = D/t - c/t^2 has a maximum only for D > 0 and c > 0
    if !(t.is_finite() && t > 0.0 && denominator > 0.0) {
        return Err(Error::NoInteriorOptimum { t });
    }
    Ok(t)
}

/// `eta_C (2 eta_C + 3 r) / (3 eta_C + 4 r)`.
pub fn eta_at_max_omega(eta_carnot: f64, ratio: f64) -> Result<f64> {
    let denominator = 3.0 * eta_carnot + 4.0 * ratio;
    if denominator == 0.0 {
        return Err(Error::Pole {
            pole: -0.75 * eta_carnot,
        });
    }
    if ratio.abs() > 1.0 {
        // divide through by r so r -> +-inf stays finite
        let inv = 1.0 / ratio;
        return Ok(eta_carnot * (2.0 * eta_carnot * inv + 3.0) / (3.0 * eta_carnot * inv + 4.0));
    }
    Ok(eta_carnot * (2.0 * eta_carnot + 3.0 * ratio) / denominator)
}

/// Efficiency at maximum power of an endoreversible engine, `1 - sqrt(1 - eta_C)`.
pub fn curzon_ahlborn(eta_carnot: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta_carnot) {
        return Err(Error::domain("Carnot efficiency", "in [0, 1)", eta_carnot));
    }
    Ok(1.0 - (1.0 - eta_carnot).sqrt())
}

/// Carnot efficiency at which the efficiency at maximum Omega-dot meets the
/// Curzon-Ahlborn value, for a non-negative `ratio`. `None` when the curves
/// do not cross inside `(0, 1)`.
pub fn ca_crossover(ratio: f64) -> Result<Option<f64>> {
    if !(ratio >= 0.0) {
        return Err(Error::domain("ratio", "non-negative", ratio));
    }
    let gap = |x: f64| match (eta_at_max_omega(x, ratio), curzon_ahlborn(x)) {
        (Ok(e), Ok(ca)) => e - ca,
        _ => f64::NAN,
    };
    // the trivial crossing at 0 is excluded by starting just above it
    let bracket = Bracket::new(gap, 1e-6, 1.0 - 1e-9)?;
    match bisect_root(gap, bracket, ROOT_TOL) {
        Ok(x) => Ok(Some(x)),
        Err(Error::NoSignChange { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Characteristic points of the negative-ratio branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeBranch {
    /// `-(2/3) eta_C`: efficiency at maximum Omega-dot vanishes.
    pub zero: f64,
    /// `-(3/4) eta_C`: efficiency diverges.
    pub pole: f64,
    /// `-eta_C`: efficiency equals the Carnot value on the far side of the pole.
    pub carnot_crossing: f64,
}

pub fn negative_branch(eta_carnot: f64) -> Result<NegativeBranch> {
    if !(eta_carnot > 0.0 && eta_carnot < 1.0) {
        return Err(Error::domain("Carnot efficiency", "in (0, 1)", eta_carnot));
    }
    Ok(NegativeBranch {
        zero: -2.0 / 3.0 * eta_carnot,
        pole: -0.75 * eta_carnot,
        carnot_crossing: -eta_carnot,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

/// `((2/3) eta_C, (3/4) eta_C)`, the range of the efficiency at maximum
/// Omega-dot over all non-negative ratios.
pub fn bounds(eta_carnot: f64) -> Bounds {
    Bounds {
        lower: 2.0 / 3.0 * eta_carnot,
        upper: 0.75 * eta_carnot,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeritSample {
    pub t: f64,
    pub omega_dot: f64,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeritProfile {
    pub samples: Vec<MeritSample>,
    pub t_opt_closed: f64,
    pub t_opt_numeric: f64,
    /// Closed-form efficiency at maximum Omega-dot from the ratio.
    pub eta_at_max: f64,
    /// Fixed-population efficiency evaluated at `t_opt_closed`.
    pub eta_at_t_opt: f64,
}

/// Samples Omega-dot on `times` and locates its maximum twice: from the
/// closed form, and by golden-section search seeded only from the samples.
pub fn merit_profile(inputs: &MeritInputs, times: &[f64]) -> Result<MeritProfile> {
    let samples = sweep::map(times, |&t| MeritSample {
        t,
        omega_dot: omega_dot(inputs, t).unwrap_or(f64::NAN),
        efficiency: efficiency_at(inputs, t),
    });
    let t_opt_closed = optimal_time(inputs)?;
    let t_opt_numeric = numeric_optimal_time(inputs, times)?;
    Ok(MeritProfile {
        samples,
        t_opt_closed,
        t_opt_numeric,
        eta_at_max: eta_at_max_omega(inputs.eta_carnot, inputs.ratio)?,
        eta_at_t_opt: efficiency_at(inputs, t_opt_closed),
    })
}

/// Golden-section maximizer of [`omega_dot`], bracketed from a log scan over
/// the span of `times`.
pub fn numeric_optimal_time(inputs: &MeritInputs, times: &[f64]) -> Result<f64> {
    let lo = times.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let f = |t: f64| omega_dot(inputs, t).unwrap_or(f64::NAN);
    let bracket = log_scan_bracket(f, lo, hi, times.len().max(64))?;
    let tol = 1e-10 * bracket.hi;
    Ok(golden_search(f, bracket, tol)?.argmax)
}

/// Default cycle-time scan for locating the maximum numerically.
pub fn default_time_grid() -> Vec<f64> {
    sweep::logspace(1e-3, 1e7, 501)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistentSample {
    pub n: usize,
    pub omega_dot: f64,
    pub efficiency: f64,
    pub q_hot: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfConsistentProfile {
    pub samples: Vec<SelfConsistentSample>,
    /// Integer subdivision count with the largest Omega-dot.
    pub n_opt: usize,
    pub omega_at_opt: f64,
    pub efficiency_at_opt: f64,
}

/// Omega-dot from full ledger simulations at `n = 1..=n_max`, with every
/// intermediate population recomputed.
pub fn self_consistent_profile(spec: &CycleSpec, n_max: usize) -> Result<SelfConsistentProfile> {
    if n_max == 0 {
        return Err(Error::domain("n_max", "at least 1", 0.0));
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    let eta_c = spec.carnot_efficiency();
    let samples = sweep::map(&ns, |&n| -> Result<SelfConsistentSample> {
        let result = simulate_cycle(&spec.with_subdivisions(n)?)?;
        Ok(SelfConsistentSample {
            n,
            omega_dot: (2.0 * result.efficiency - eta_c) * result.q_hot / n as f64,
            efficiency: result.efficiency,
            q_hot: result.q_hot,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let best = samples
        .iter()
        .copied()
        .fold(samples[0], |acc, s| if s.omega_dot > acc.omega_dot { s } else { acc });
    Ok(SelfConsistentProfile {
        n_opt: best.n,
        omega_at_opt: best.omega_dot,
        efficiency_at_opt: best.efficiency,
        samples,
    })
}

/// `Pi` evaluated with the populations the simulated three-step cold stroke
/// actually visits, for comparison with [`MeritInputs::pi_`].
pub fn pi_from_cold_stroke(spec: &CycleSpec) -> Result<f64> {
    let sim = simulate_cycle(&spec.with_subdivisions(crate::formulas::REFERENCE_SUBDIVISIONS)?)?;
    let pops: f64 = sim.cold_intermediate_pops.iter().sum();
    Ok((spec.gap_d() - spec.gap_c()) * (sim.corners.c.pop_excited() + pops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn engine_spec() -> CycleSpec {
        CycleSpec::new(6.0, 3.0, 1.0, 1.25, 3).unwrap()
    }

    #[test]
    fn eta_examples() {
        assert_relative_eq!(eta_at_max_omega(0.5, 0.0).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eta_at_max_omega(0.5, 1e9).unwrap(), 0.375, epsilon = 1e-9);
        assert_abs_diff_eq!(eta_at_max_omega(0.5, f64::INFINITY).unwrap(), 0.375, epsilon = 1e-15);
        assert_relative_eq!(eta_at_max_omega(0.5, 0.5).unwrap(), 5.0 / 14.0, epsilon = 1e-15);
        assert!(matches!(eta_at_max_omega(0.5, -0.375), Err(Error::Pole { .. })));
    }

    #[test]
    fn curzon_ahlborn_examples() {
        assert_eq!(curzon_ahlborn(0.0).unwrap(), 0.0);
        assert_eq!(curzon_ahlborn(0.75).unwrap(), 0.5);
        let x = 0.01;
        assert!((curzon_ahlborn(x).unwrap() - (x / 2.0 + x * x / 8.0)).abs() < 1e-6);
        assert!(curzon_ahlborn(1.0).is_err());
        assert!(curzon_ahlborn(-0.1).is_err());
    }

    #[test]
    fn crossover_examples() {
        assert_abs_diff_eq!(ca_crossover(0.0).unwrap().unwrap(), 0.75, epsilon = 1e-9);
        let one = ca_crossover(1.0).unwrap().unwrap();
        let ten = ca_crossover(10.0).unwrap().unwrap();
        assert!(ten > one && one > 0.75);
        assert_abs_diff_eq!(ca_crossover(1e12).unwrap().unwrap(), 8.0 / 9.0, epsilon = 1e-9);
        assert!(ca_crossover(-0.1).is_err());
    }

    #[test]
    fn negative_branch_examples() {
        let nb = negative_branch(0.6).unwrap();
        assert_abs_diff_eq!(nb.zero, -0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(nb.pole, -0.45, epsilon = 1e-15);
        assert!(eta_at_max_omega(0.6, -0.42).unwrap() < 0.0);
        assert_relative_eq!(eta_at_max_omega(0.6, -0.46).unwrap(), 2.7, max_relative = 1e-12);
        assert_relative_eq!(
            eta_at_max_omega(0.6, nb.carnot_crossing).unwrap(),
            0.6,
            max_relative = 1e-14
        );
        assert!(negative_branch(1.0).is_err());
    }

    #[test]
    fn bounds_example() {
        let b = bounds(0.3);
        assert_abs_diff_eq!(b.lower, 0.2, epsilon = 1e-16);
        assert_abs_diff_eq!(b.upper, 0.225, epsilon = 1e-16);
    }

    #[test]
    fn omega_dot_vanishes_at_long_times() {
        let inputs = MeritInputs::from_spec(&engine_spec()).unwrap();
        assert!(omega_dot(&inputs, 1e12).unwrap().abs() < 1e-12);
        assert!(omega_dot(&inputs, 0.0).is_err());
        assert!(omega_dot(&inputs, -1.0).is_err());
    }

    #[test]
    fn omega_dot_is_negative_below_half_carnot() {
        let inputs = MeritInputs::from_spec(&engine_spec()).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let eta = efficiency_at(&inputs, t);
            if eta < inputs.eta_carnot / 2.0 && hot_heat_at(&inputs, t) > 0.0 {
                assert!(omega_dot(&inputs, t).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn closed_form_optimum_matches_golden_section() {
        let inputs = MeritInputs::from_spec(&engine_spec()).unwrap();
        let profile = merit_profile(&inputs, &default_time_grid()).unwrap();
        assert_relative_eq!(profile.t_opt_numeric, profile.t_opt_closed, max_relative = 1e-6);
        assert_relative_eq!(profile.eta_at_t_opt, profile.eta_at_max, max_relative = 1e-6);
        let best = omega_dot(&inputs, profile.t_opt_numeric).unwrap();
        assert!(profile.samples.iter().all(|s| s.omega_dot <= best));
    }

    #[test]
    fn optimal_time_is_gap_scale_invariant() {
        let base = MeritInputs::from_spec(&engine_spec()).unwrap();
        let scaled = CycleSpec::new(6.0 * 2.5, 3.0 * 2.5, 1.0 / 2.5, 1.25 / 2.5, 3).unwrap();
        let scaled = MeritInputs::from_spec(&scaled).unwrap();
        assert_relative_eq!(
            optimal_time(&base).unwrap(),
            optimal_time(&scaled).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn collapsed_cycle_has_no_optimum() {
        let spec = CycleSpec::new(4.0, 2.0, 1.0, 1.0, 3).unwrap();
        let inputs = MeritInputs::from_spec(&spec).unwrap();
        assert!(matches!(optimal_time(&inputs), Err(Error::NonEngine(_))));
    }

    #[test]
    fn anomalous_spec_has_no_interior_optimum() {
        // ratio sits between the pole and the zero, so Omega-dot never peaks
        let spec = CycleSpec::new(4.0, 2.0, 0.5, 1.0, 3).unwrap();
        let inputs = MeritInputs::from_spec(&spec).unwrap();
        assert!(inputs.ratio < -2.0 / 3.0 * inputs.eta_carnot);
        assert!(matches!(optimal_time(&inputs), Err(Error::NoInteriorOptimum { .. })));
    }

    #[test]
    fn printed_pi_agrees_with_cold_stroke_populations() {
        let spec = engine_spec();
        let inputs = MeritInputs::from_spec(&spec).unwrap();
        assert_relative_eq!(pi_from_cold_stroke(&spec).unwrap(), inputs.pi_, max_relative = 1e-13);
    }

    #[test]
    fn self_consistent_track_peaks_at_small_n() {
        let profile = self_consistent_profile(&engine_spec(), 200).unwrap();
        assert_eq!(profile.samples.len(), 200);
        assert!(profile.n_opt >= 1 && profile.n_opt < 200);
        let sample3 = profile.samples[2];
        let inputs = MeritInputs::from_spec(&engine_spec()).unwrap();
        // at n = 3 the two tracks coincide exactly
        assert_relative_eq!(
            sample3.omega_dot,
            omega_dot(&inputs, 3.0).unwrap(),
            max_relative = 1e-12
        );
    }
}
