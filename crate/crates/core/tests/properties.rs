//! Randomized invariants, run from a fixed proptest seed so failures are
//! reproducible.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use nisq_core::experiments::{
    build_ti_hamiltonian, histogram, power_law_fit, scaling_experiment, Boundary, Subset, TransverseIsingModel,
};
use nisq_core::expressivity::{classify_parameters, gram_matrix, remove_redundant, Mode, StateSpaceDim};
use nisq_core::mitigation::{
    correct_operator, forward_operator, t1_correct, t1_forward, QubitFlip, ReadoutNoiseModel,
};
use nisq_core::simulate::apply_circuit;
use nisq_core::{evaluate_circuit, sample_measurements, tangent_vector, PauliString, PauliSum};
use rand::Rng;

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..Config::default() }
}

fn model_from(r: &mut impl Rng, qubits: usize, grid: &[f64]) -> ReadoutNoiseModel {
    let flips = (0..qubits)
        .map(|_| QubitFlip { p0: grid[r.random_range(0..grid.len())], p1: grid[r.random_range(0..grid.len())] })
        .collect();
    ReadoutNoiseModel::new(flips).unwrap()
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn evaluation_preserves_norm(seed in any::<u64>(), qubits in 1usize..=4, np in 1usize..=12) {
        let mut r = common::rng(seed);
        let c = common::random_circuit(&mut r, qubits, np);
        let x = common::random_params(&mut r, np);
        let n = evaluate_circuit(&c, &x).unwrap().norm();
        prop_assert!((n - 1.0).abs() < 1e-12, "norm {}", n);
    }

    #[test]
    fn tangents_match_finite_differences(seed in any::<u64>(), qubits in 1usize..=4, np in 1usize..=12) {
        let mut r = common::rng(seed);
        let c = common::random_circuit(&mut r, qubits, np);
        let x = common::random_params(&mut r, np);
        for j in 0..np {
            let t = tangent_vector(&c, &x, j).unwrap();
            let fd = common::fd_tangent(&c, &x, j, 1e-5);
            for (a, b) in t.amplitudes().iter().zip(&fd) {
                prop_assert!((a - b).norm() < 1e-8, "param {} differs by {:e}", j, (a - b).norm());
            }
        }
    }

    #[test]
    fn concatenation_composes(seed in any::<u64>(), qubits in 1usize..=3, na in 1usize..=6, nb in 1usize..=6) {
        let mut r = common::rng(seed);
        let a = common::random_circuit(&mut r, qubits, na);
        let b = common::random_circuit(&mut r, qubits, nb);
        // `b` reuses the names p0.. so concatenation shares them.
        let ab = a.concat(&b).unwrap();
        let x = common::random_params(&mut r, ab.num_params());
        let whole = evaluate_circuit(&ab, &x).unwrap();
        let xb: Vec<f64> = b.parameters().iter().map(|n| x[ab.param_index(n).unwrap()]).collect();
        let mut split = evaluate_circuit(&a, &x[..na]).unwrap();
        apply_circuit(&b, &xb, &mut split);
        for (u, v) in whole.amplitudes().iter().zip(split.amplitudes()) {
            prop_assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), qubits in 1usize..=3, shots in 1u64..5000) {
        let mut r = common::rng(seed);
        let psi = common::random_state(&mut r, qubits);
        let a = sample_measurements(&psi, shots, seed).unwrap();
        let b = sample_measurements(&psi, shots, seed).unwrap();
        prop_assert_eq!(a.shots(), shots);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gram_equals_jacobian_product(seed in any::<u64>(), qubits in 1usize..=3, np in 1usize..=10) {
        let mut r = common::rng(seed);
        let c = common::random_circuit(&mut r, qubits, np);
        let x = common::random_params(&mut r, np);
        let all: Vec<usize> = (0..np).collect();
        let s = gram_matrix(&c, &x, &all).unwrap();
        let j = common::fd_jacobian(&c, &x);
        let oracle = j.transpose() * &j;
        for a in 0..np {
            for b in 0..np {
                prop_assert!((s.entries[(a, b)] - oracle[(a, b)]).abs() < 1e-6);
            }
        }
        prop_assert!(s.is_symmetric(1e-10));
        prop_assert!(s.smallest_eigenvalue() >= -1e-9);
    }

    #[test]
    fn independent_count_is_jacobian_rank(seed in any::<u64>(), qubits in 1usize..=3, np in 1usize..=10) {
        let mut r = common::rng(seed);
        let c = common::random_circuit(&mut r, qubits, np);
        let x = common::random_params(&mut r, np);
        let report = classify_parameters(&c, &x, 1e-8, Mode::Exact).unwrap();
        let rank = common::numerical_rank(&common::fd_jacobian(&c, &x), 1e-6);
        prop_assert_eq!(report.independent_count, rank);
        prop_assert!(report.independent_count <= np.min(StateSpaceDim::new(qubits).with_phase));
        prop_assert_eq!(report.verdicts.len(), np);
        for (v, name) in report.verdicts.iter().zip(c.parameters()) {
            prop_assert_eq!(&v.param, name);
            if let Some(e) = v.min_eigenvalue {
                prop_assert!(e >= -1e-9);
            }
        }
    }

    #[test]
    fn pruning_is_idempotent(seed in any::<u64>(), qubits in 1usize..=3, np in 1usize..=10) {
        let mut r = common::rng(seed);
        let c = common::random_circuit(&mut r, qubits, np);
        let x = common::random_params(&mut r, np);
        let report = classify_parameters(&c, &x, 1e-8, Mode::Exact).unwrap();
        let frozen: BTreeMap<String, f64> =
            report.redundant().map(|v| (v.param.clone(), x[c.param_index(&v.param).unwrap()])).collect();
        let reduced = remove_redundant(&c, &report, &frozen).unwrap();
        let y = nisq_core::expressivity::independent_point(&report, &x);
        let again = classify_parameters(&reduced, &y, 1e-8, Mode::Exact).unwrap();
        prop_assert_eq!(again.redundant_count(), 0);
        prop_assert_eq!(again.independent_count, report.independent_count);
        let before = evaluate_circuit(&c, &x).unwrap();
        let after = evaluate_circuit(&reduced, &y).unwrap();
        for (u, v) in before.amplitudes().iter().zip(after.amplitudes()) {
            prop_assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn mitigated_estimator_is_unbiased(seed in any::<u64>(), qubits in 1usize..=3) {
        let mut r = common::rng(seed);
        let psi = common::random_state(&mut r, qubits);
        let probs = psi.probabilities();
        let model = model_from(&mut r, qubits, &[0.0, 0.05, 0.2]);
        let op = common::random_diagonal_operator(&mut r, qubits);
        let mut corrected = PauliSum::new();
        for t in op.terms() {
            for c in correct_operator(&t.string, &model).unwrap().terms() {
                corrected.add_term(t.coefficient * c.coefficient, c.string.clone());
            }
        }
        let noisy = common::brute_force_noisy_expectation(&probs, &model, qubits, &corrected);
        let exact = common::diagonal_expectation(&probs, &op);
        prop_assert!((noisy - exact).abs() < 1e-12, "{} vs {}", noisy, exact);
    }

    #[test]
    fn forward_then_correct_is_identity(seed in any::<u64>(), k in 1usize..=5) {
        let mut r = common::rng(seed);
        let flips = (0..k).map(|_| QubitFlip { p0: r.random_range(0.0..0.45), p1: r.random_range(0.0..0.45) }).collect();
        let model = ReadoutNoiseModel::new(flips).unwrap();
        let support: Vec<usize> = (0..k).filter(|_| r.random_bool(0.7)).collect();
        let z = PauliString::z(&support);
        let corrected = correct_operator(&z, &model).unwrap();
        prop_assert_eq!(corrected.len(), 1 << support.len());
        prop_assert!(corrected.terms().iter().all(|t| t.coefficient.is_finite()));
        let mut round = PauliSum::new();
        for t in corrected.terms() {
            for f in forward_operator(&t.string, &model).unwrap().terms() {
                round.add_term(t.coefficient * f.coefficient, f.string.clone());
            }
        }
        prop_assert!(round.approx_eq(&PauliSum::from_terms([(1.0, z)]).unwrap(), 1e-12));
    }

    #[test]
    fn t1_round_trip(z in -1.0f64..=1.0, p in 1e-3f64..=1.0) {
        let back = t1_correct(t1_forward(z, p).unwrap(), p).unwrap();
        prop_assert!((back - z).abs() < 1e-12);
    }

    #[test]
    fn power_law_recovered(a in 1e-3f64..1e3, beta in -2.0f64..2.0, n in 2usize..12) {
        let pts: Vec<(f64, f64)> = (0..n).map(|k| 2f64.powi(k as i32 + 2)).map(|s| (s, a * s.powf(-beta))).collect();
        let f = power_law_fit(&pts, Subset::All).unwrap();
        prop_assert!((f.beta - beta).abs() < 1e-9);
        prop_assert!((f.a - a).abs() < 1e-9 * a);
    }

    #[test]
    fn histogram_counts_cover_values(values in proptest::collection::vec(-10.0f64..10.0, 1..200), bins in 1usize..30) {
        let (edges, counts) = histogram(&values, bins);
        prop_assert_eq!(edges.len(), counts.len() + 1);
        prop_assert!(edges.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(counts.iter().sum::<u64>(), values.len() as u64);
    }

    #[test]
    fn ising_term_count(sites in 3usize..9, j in -2.0f64..2.0, h in -2.0f64..2.0, open in any::<bool>()) {
        let boundary = if open { Boundary::Open } else { Boundary::Periodic };
        let ham = build_ti_hamiltonian(&TransverseIsingModel::new(sites, j, h, boundary).unwrap()).unwrap();
        let bonds = if open { sites - 1 } else { sites };
        prop_assert_eq!(ham.len(), bonds + sites);
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn scaling_is_reproducible(seed in any::<u64>()) {
        let model = ReadoutNoiseModel::uniform(2, QubitFlip::symmetric(0.05)).unwrap();
        let a = scaling_experiment(3, &[16, 64], &model, seed).unwrap();
        let b = scaling_experiment(3, &[16, 64], &model, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.errors_mitigated.iter().chain(&a.errors_raw).flatten().all(|e| *e >= 0.0));
    }
}
