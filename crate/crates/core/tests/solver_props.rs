//! Cross-checks between the two sampler backends.

use boxqubo::{
    build_qubo, instances, seed, solve_exhaustive, solve_sa, QubitAssignment, SamplerConfig,
    Vector,
};
use proptest::prelude::*;

/// Independent brute-force route: evaluate the true potential energy of
/// every decoded point, never touching the QUBO matrix.
fn brute_force_minimum(p: &boxqubo::QuboProblem) -> (u64, f64) {
    let d = p.dim();
    let mut best = (0u64, f64::INFINITY);
    for idx in 0..(1u64 << (2 * d)) {
        let q = QubitAssignment::from_index(idx, d);
        let x = p.decode(&q).unwrap();
        let e = p.system().potential_energy(&x).unwrap();
        if e < best.1 {
            best = (idx, e);
        }
    }
    best
}

#[test]
fn exhaustive_agrees_with_the_potential_energy_oracle() {
    for inst in 0..25u64 {
        let sys = instances::gen_random_spd(2, seed::mix(12, &[inst]));
        let center = Vector::new(vec![0.1, -0.3]).unwrap();
        let p = build_qubo(&sys, &center, 0.8).unwrap();
        let found = solve_exhaustive(&p).unwrap();
        let (oracle_idx, oracle_energy) = brute_force_minimum(&p);
        assert_eq!(found.assignment.to_index(), oracle_idx, "instance {inst}");
        let energy_via_potential = found.energy + p.offset();
        assert!((energy_via_potential - oracle_energy).abs() <= 1e-9 * oracle_energy.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// SA can never beat the exact optimum.
    #[test]
    fn exhaustive_dominates_sa(
        d in 1usize..=3,
        instance_seed in 0..500u64,
        sampler_seed in 0..500u64,
        sweeps in 1u32..50,
        reads in 1u32..8,
    ) {
        let sys = instances::gen_random_spd(d, instance_seed);
        let p = build_qubo(&sys, &Vector::zeros(d), 1.0).unwrap();
        let exact = solve_exhaustive(&p).unwrap();
        let cfg = SamplerConfig {
            num_reads: reads,
            sweeps,
            seed: sampler_seed,
            ..SamplerConfig::default()
        };
        let sa = solve_sa(&p, &cfg).unwrap();
        prop_assert!(sa.energy >= exact.energy - 1e-12 * exact.energy.abs().max(1.0));
        prop_assert_eq!(sa.reads_used, reads);
    }
}

#[test]
fn sa_finds_the_exact_optimum_on_small_problems() {
    let mut hits = 0;
    for inst in 0..50u64 {
        let s = seed::mix(8, &[inst]);
        let sys = instances::gen_random_spd(2, s);
        let p = build_qubo(&sys, &Vector::zeros(2), 1.0).unwrap();
        let exact = solve_exhaustive(&p).unwrap();
        let sa = solve_sa(&p, &SamplerConfig::sa(s)).unwrap();
        if sa.energy <= exact.energy + 1e-12 {
            hits += 1;
        }
    }
    assert!(hits >= 48, "SA matched the optimum on only {hits}/50 QUBOs");
}
