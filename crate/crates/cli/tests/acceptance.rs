//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured values (run with `-- --nocapture` to see them).

mod support;

use std::time::Instant;

use bellsim_core::bell::{
    bell_state, generate_bell, pauli_x, symmetry_census, BellLabel, ModeSpace,
};
use bellsim_core::experiment::{
    estimate_from_counts, fidelity_settings, run_experiment, sample_counts, settings_fidelity,
    ExperimentConfig,
};
use bellsim_core::noise::{predicted_witness, spiral_state, NoiseModel, SpiralSpec};
use bellsim_core::optics::{
    build_cyclic_gate, dove_prism_operator, gate_photon_space, verify_equivalence,
    CyclicGateKind, GateOptions, Recombination,
};
use bellsim_core::qudit::{
    fidelity_pure, random, BipartiteShape, DensityOperator, Operator, StateVector,
};
use bellsim_core::witness::{rank_constrained_search, witness_bound};

use support::bellsim;

fn budget(start: Instant, seconds: f64, label: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < seconds,
        "{label}: took {elapsed:.2}s, budget {seconds}s"
    );
}

#[test]
fn criterion_01_bell_basis_exactness() {
    let start = Instant::now();
    for d in [2usize, 3, 4, 5] {
        let space = ModeSpace::for_dimension(d).unwrap();
        let states: Vec<_> = BellLabel::all(d)
            .iter()
            .map(|l| bell_state(&space, l).unwrap())
            .collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let overlap = a.inner(b).unwrap().norm();
                if i == j {
                    assert!((overlap - 1.0).abs() <= 1e-12, "D={d} diagonal {overlap}");
                } else {
                    assert!(overlap <= 1e-12, "D={d} pair ({i},{j}) overlap {overlap}");
                }
            }
        }
    }
    let census = symmetry_census(&ModeSpace::four_dim()).unwrap();
    assert_eq!(census, (6, 2, 8));
    budget(start, 1.0, "criterion 1");
    println!(
        "ACCEPTANCE 1 PASS: D in {{2,3,4,5}} orthonormal within 1e-12; census {census:?}"
    );
}

#[test]
fn criterion_02_local_gate_generation() {
    let start = Instant::now();
    let space = ModeSpace::four_dim();
    let seed = bell_state(&space, &BellLabel::new(4, 0, 0).unwrap()).unwrap();
    let mut worst: f64 = 1.0;
    for label in BellLabel::all(4) {
        let generated = generate_bell(&seed, &space, &label).unwrap();
        let target = bell_state(&space, &label).unwrap();
        let overlap = generated.inner(&target).unwrap().norm();
        worst = worst.min(overlap);
        assert!(overlap >= 1.0 - 1e-10, "{label}: overlap {overlap}");
    }
    budget(start, 1.0, "criterion 2");
    println!("ACCEPTANCE 2 PASS: all 16 labels reached, worst overlap modulus {worst}");
}

#[test]
fn criterion_03_circuit_vs_abstract_gates() {
    let start = Instant::now();
    let modes = ModeSpace::four_dim();
    let mut worst_dev: f64 = 0.0;
    for (kind, power) in [
        (CyclicGateKind::X, 1),
        (CyclicGateKind::X2, 2),
        (CyclicGateKind::Xdagger, 3),
    ] {
        for recombination in [Recombination::Probabilistic, Recombination::Deterministic] {
            let space = gate_photon_space((-4, 4), recombination).unwrap();
            let circuit = build_cyclic_gate(
                kind,
                &space,
                &GateOptions {
                    recombination,
                    ..GateOptions::default()
                },
            )
            .unwrap();
            let eq =
                verify_equivalence(&circuit, &pauli_x(&modes, power), &modes.oam_labels())
                    .unwrap();
            assert!(eq.deviation <= 1e-10, "{kind}: deviation {}", eq.deviation);
            let expect = match recombination {
                Recombination::Probabilistic => 0.5,
                Recombination::Deterministic => 1.0,
            };
            assert!(
                (eq.success_probability - expect).abs() <= 1e-12,
                "{kind}: probability {}",
                eq.success_probability
            );
            worst_dev = worst_dev.max(eq.deviation);
        }
    }
    budget(start, 1.0, "criterion 3");
    println!(
        "ACCEPTANCE 3 PASS: X, X2, Xdagger match shift gates, worst deviation {worst_dev:.3e}; probabilities 0.5 / 1.0"
    );
}

#[test]
fn criterion_04_dove_prism_sweep() {
    let start = Instant::now();
    let space = ModeSpace::four_dim();
    let psi00 = bell_state(&space, &BellLabel::new(4, 0, 0).unwrap()).unwrap();
    let identity = Operator::identity(space.oam_labels());
    for n in 0..4usize {
        let alpha = n as f64 * std::f64::consts::FRAC_PI_4;
        let dove = dove_prism_operator(space.oam_labels(), alpha);
        let rotated = dove.tensor(&identity).apply(&psi00).unwrap();
        let target = bell_state(&space, &BellLabel::new(4, 0, n).unwrap()).unwrap();
        let overlap = rotated.inner(&target).unwrap().norm();
        assert!(overlap >= 1.0 - 1e-10, "alpha = {n} pi/4: overlap {overlap}");
    }
    budget(start, 1.0, "criterion 4");
    println!("ACCEPTANCE 4 PASS: Dove angles {{0, pi/4, pi/2, 3pi/4}} generate psi_00..psi_03");
}

#[test]
fn criterion_05_witness_bound_and_search() {
    let start = Instant::now();
    let space = ModeSpace::four_dim();
    let shape = BipartiteShape::new(space.oam_labels(), space.oam_labels()).unwrap();
    let psi00 = bell_state(&space, &BellLabel::new(4, 0, 0).unwrap()).unwrap();
    let b3 = witness_bound(&psi00, &shape, 3).unwrap();
    assert_eq!(b3, 0.75, "B(3) must be exactly 0.75, got {b3}");

    let best = rank_constrained_search(&psi00, &shape, 3, 10_000, 12345).unwrap();
    assert!(best <= b3 + 1e-10, "search beat the bound: {best}");
    assert!(best >= 0.73, "search too weak: {best}");
    budget(start, 30.0, "criterion 5");
    println!("ACCEPTANCE 5 PASS: B(3) = {b3}; best rank-3 overlap over 10^4 samples = {best:.5}");
}

#[test]
fn criterion_06_spiral_bandwidth_ceiling() {
    let start = Instant::now();
    let space = ModeSpace::four_dim();
    let psi00 = bell_state(&space, &BellLabel::new(4, 0, 0).unwrap()).unwrap();
    let mut values = Vec::new();
    for reciprocal in [false, true] {
        let spec = SpiralSpec::Ratios {
            alpha_over_beta: 0.69,
            alpha_over_gamma: 0.45,
            reciprocal,
        };
        let source = spiral_state(&spec, &space).unwrap();
        let (psi, _) = bellsim_core::experiment::source_state(&source, &space).unwrap();
        let f = psi.overlap(&psi00).unwrap();
        assert!(
            (f - 0.93).abs() <= 0.01,
            "reciprocal={reciprocal}: ceiling {f}"
        );
        values.push(f);
    }
    budget(start, 1.0, "criterion 6");
    println!(
        "ACCEPTANCE 6 PASS: spiral ceiling {:.4} / {:.4} within 0.93 +/- 0.01",
        values[0], values[1]
    );
}

#[test]
fn criterion_07_composite_noise_prediction() {
    let start = Instant::now();
    let model = NoiseModel::paper();
    let mut diagonal = Vec::with_capacity(16);
    for label in BellLabel::all(4) {
        let f = predicted_witness(&model, &label).unwrap();
        assert!(
            (0.76..=0.86).contains(&f),
            "{label}: predicted witness {f} outside [0.76, 0.86]"
        );
        assert!(f > 0.75, "{label}: witness {f} fails to certify");
        diagonal.push(f);
    }
    let average = diagonal.iter().sum::<f64>() / diagonal.len() as f64;
    assert!(
        (0.75..=0.81).contains(&average),
        "diagonal average {average} outside [0.75, 0.81]"
    );

    // The same prediction through the full pipeline (gates included).
    let space = ModeSpace::four_dim();
    for label in [BellLabel::new(4, 0, 0).unwrap(), BellLabel::new(4, 2, 1).unwrap()] {
        let cfg = ExperimentConfig::for_label(&label)
            .unwrap()
            .with_noise(Some(model.clone()));
        let out = run_experiment(&cfg, &space).unwrap();
        let f = fidelity_pure(&out.state, &bell_state(&space, &label).unwrap()).unwrap();
        assert!((0.76..=0.86).contains(&f), "{label}: pipeline witness {f}");
    }
    budget(start, 10.0, "criterion 7");
    println!(
        "ACCEPTANCE 7 PASS: predicted witness average {average:.4} in [0.75, 0.81]; all 16 certify 4-dimensional"
    );
}

#[test]
fn criterion_08_statistical_machinery() {
    let start = Instant::now();
    let space = ModeSpace::four_dim();
    let label = BellLabel::new(4, 0, 0).unwrap();
    let cfg = ExperimentConfig::for_label(&label).unwrap();
    let out = run_experiment(&cfg, &space).unwrap();
    let settings = fidelity_settings(&label, &space).unwrap();

    // 1/sqrt(N) scaling across three decades.
    let mut stds = Vec::new();
    for n in [1e4, 1e5, 1e6] {
        let counts = sample_counts(&out.state, &settings, n, 2024).unwrap();
        let (_, std) = estimate_from_counts(&counts, &settings, 600, 99).unwrap();
        stds.push(std);
    }
    let root_ten = 10f64.sqrt();
    for pair in stds.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!(
            (ratio - root_ten).abs() <= 0.2 * root_ten,
            "std ratio {ratio} vs sqrt(10)"
        );
    }

    // Byte-reproducibility of a seeded CLI run.
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = bellsim(&[
            "experiment",
            "--all16",
            "--noise",
            "paper",
            "--counts",
            "1e4",
            "--replicas",
            "150",
            "--seed",
            "11",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for name in ["results.json", "manifest.json"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} not byte-reproducible");
    }
    budget(start, 60.0, "criterion 8");
    println!(
        "ACCEPTANCE 8 PASS: stds {:?} scale as 1/sqrt(N) within 20%; seeded runs byte-identical",
        stds
    );
}

#[test]
fn criterion_09_dense_coding() {
    let start = Instant::now();
    let confusion =
        bellsim_core::witness::dense_coding_confusion(None, &ModeSpace::four_dim()).unwrap();
    for message in 0..16 {
        assert_eq!(confusion.decoded(message), message, "message {message}");
    }
    let bits = confusion.channel_bits();
    assert!((bits - 4.0).abs() < 5e-4, "channel bits {bits}");
    budget(start, 1.0, "criterion 9");
    println!("ACCEPTANCE 9 PASS: all 16 messages decode; channel capacity {bits:.3} bits");
}

#[test]
fn criterion_10_oracle_equivalence() {
    let start = Instant::now();
    let space = ModeSpace::four_dim();
    let labels = [
        BellLabel::new(4, 0, 0).unwrap(),
        BellLabel::new(4, 1, 1).unwrap(),
        BellLabel::new(4, 2, 3).unwrap(),
        BellLabel::new(4, 3, 2).unwrap(),
    ];
    let settings: Vec<_> = labels
        .iter()
        .map(|l| fidelity_settings(l, &space).unwrap())
        .collect();
    let targets: Vec<StateVector<_>> = labels
        .iter()
        .map(|l| bell_state(&space, l).unwrap())
        .collect();

    let mut rng = random::rng_from_seed(31337);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let rank = 1 + (i % 16);
        let rho: DensityOperator<_> =
            random::random_density(space.joint_labels(), rank, &mut rng);
        let which = i % labels.len();
        let direct = fidelity_pure(&rho, &targets[which]).unwrap();
        let via_counts = settings_fidelity(&settings[which], &rho).unwrap();
        let diff = (direct - via_counts).abs();
        worst = worst.max(diff);
        assert!(diff <= 1e-10, "state {i}: |{direct} - {via_counts}| = {diff}");
    }
    budget(start, 30.0, "criterion 10");
    println!(
        "ACCEPTANCE 10 PASS: estimator decomposition matches the trace formula, worst |diff| = {worst:.2e} over 1000 states"
    );
}
