//! Finite-time quantum heat engine with a two-level (spin-1/2) working
//! substance.
//!
//! - [`thermo`]: Gibbs populations and the work/heat differentials.
//! - [`cycle`]: the four-stroke cycle simulated sub-step by sub-step.
//! - [`formulas`]: closed forms for the three-subdivision cycle.
//! - [`merit`]: the Omega-dot figure of merit, its optimum, and the
//!   efficiency bounds at that optimum.
//! - [`oracle`]: black-box golden-section, bisection and finite differences.
//! - [`figures`]: sweeps over Carnot efficiency and population ratio.
//! - [`validation`]: the invariant suite behind `spinengine validate`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cycle;
pub mod error;
pub mod figures;
pub mod formulas;
pub mod merit;
pub mod oracle;
pub mod sweep;
pub mod thermo;
pub mod validation;

pub use cycle::{
    derive_corners, quasistatic_heat, simulate_adiabatic_stroke, simulate_cycle, simulate_cycle_with,
    simulate_isothermal_stroke, Corners, CycleResult, CycleSpec, Regime, SimOptions, StrokeLedger,
};
pub use error::{Error, Result};
pub use merit::{
    bounds, ca_crossover, curzon_ahlborn, eta_at_max_omega, negative_branch, omega_dot, optimal_time, MeritInputs,
    MeritProfile,
};
pub use thermo::{gibbs_population, step_heat, step_work, EnginePoint, Reservoir, StepKind, StepRecord};
