use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinengine::sweep;
use spinengine::validation::spec_family;
use spinengine::{bounds, eta_at_max_omega, quasistatic_heat, simulate_cycle, CycleSpec, Regime};

fn random_specs(seed: u64, count: usize, n: usize) -> Vec<CycleSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let beta_h = rng.gen_range(0.2..3.0);
            let beta_c = beta_h / (1.0 - rng.gen_range(0.01..0.9));
            let gap_b = rng.gen_range(0.1..6.0) / beta_h;
            let gap_a = gap_b * rng.gen_range(1.01..4.0);
            CycleSpec::new(gap_a, gap_b, beta_h, beta_c, n).unwrap()
        })
        .collect()
}

#[test]
fn efficiency_climbs_towards_carnot_with_subdivisions() {
    for spec in spec_family(16, 1) {
        let etas: Vec<f64> = [1, 2, 4, 8, 16, 64, 256, 1024]
            .iter()
            .map(|&n| simulate_cycle(&spec.with_subdivisions(n).unwrap()).unwrap().efficiency)
            .collect();
        let eta_c = spec.carnot_efficiency();
        assert!(etas.windows(2).all(|w| w[1] > w[0]), "{etas:?}");
        assert!(etas.iter().all(|&e| e < eta_c));
    }
}

#[test]
fn hot_heat_never_exceeds_the_reversible_value() {
    for spec in random_specs(7, 40, 5) {
        let r = simulate_cycle(&spec).unwrap();
        let q_rev = quasistatic_heat(spec.hot(), spec.gap_a(), spec.gap_b()).unwrap();
        assert!(r.q_hot < q_rev);
        if r.regime == Regime::Engine {
            assert!(r.efficiency > 0.0 && r.efficiency < spec.carnot_efficiency());
        }
    }
}

#[test]
fn parallel_and_sequential_sweeps_agree_bitwise() {
    let specs = random_specs(11, 64, 9);
    let run = |s: &CycleSpec| {
        let r = simulate_cycle(s).unwrap();
        (r.q_hot.to_bits(), r.w_net.to_bits(), r.efficiency.to_bits())
    };
    assert_eq!(sweep::map(&specs, run), sweep::map_sequential(&specs, run));
}

proptest! {
    #[test]
    fn positive_branch_is_sandwiched(eta in 0.001f64..0.999, r in 0.0f64..1e8) {
        let b = bounds(eta);
        let v = eta_at_max_omega(eta, r).unwrap();
        prop_assert!(v >= b.lower - 1e-15 && v <= b.upper + 1e-15);
        prop_assert!(v < eta);
    }

    #[test]
    fn larger_carnot_efficiency_gives_larger_optimum(a in 0.01f64..0.98, gap in 0.001f64..0.5, r in 0.0f64..1e3) {
        let b = (a + gap).min(0.999);
        prop_assume!(b > a);
        prop_assert!(eta_at_max_omega(a, r).unwrap() < eta_at_max_omega(b, r).unwrap());
    }
}
