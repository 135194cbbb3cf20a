//! `bellsim experiment`: single configuration or the full 16-state sweep.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::json;

use bellsim_core::bell::{bell_state, BellLabel, ModeSpace};
use bellsim_core::experiment::{
    fidelity_settings, run_experiment, sample_counts, ExperimentConfig, GateKind,
};
use bellsim_core::noise::NoiseModel;
use bellsim_core::optics::Recombination;
use bellsim_core::qudit::{BipartiteShape, Oam, StateVector};
use bellsim_core::witness::{certify_dimension, certify_from_counts, WitnessResult};

use crate::commands::parse_noise;
use crate::output::{csv_bytes, format_overlap, OutDir};
use crate::{classify, CliError};

pub struct Args {
    pub all16: bool,
    pub config: Option<PathBuf>,
    pub gate: Option<String>,
    pub alpha: Option<f64>,
    pub noise: Option<String>,
    pub counts: Option<f64>,
    pub replicas: usize,
    pub recombination: Recombination,
    pub appendix_style: bool,
    pub out: PathBuf,
    pub seed: u64,
}

/// On-disk single-run configuration. Angles are in units of pi.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub gate: GateKind,
    pub alpha_over_pi: f64,
    #[serde(default)]
    pub recombination: Recombination,
    #[serde(default)]
    pub trim_phase_over_pi: f64,
    #[serde(default)]
    pub noise: Option<NoiseModel>,
}

#[derive(Serialize)]
pub struct ConfigEcho {
    pub m: usize,
    pub n: usize,
    pub alpha_over_pi: f64,
    pub gate: String,
    pub recombination: String,
}

#[derive(Serialize)]
pub struct StateRecord {
    pub config: ConfigEcho,
    pub success_probability: f64,
    pub fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity_std_error: Option<f64>,
    pub witness: WitnessResult,
    pub overlap_row: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u64>>,
    pub seed: u64,
}

#[derive(Serialize)]
struct ResultsDocument {
    version: String,
    seed: u64,
    noise: Option<NoiseModel>,
    states: Vec<StateRecord>,
}

fn recombination_name(r: Recombination) -> &'static str {
    match r {
        Recombination::Probabilistic => "probabilistic",
        Recombination::Deterministic => "deterministic",
    }
}

/// Run one labeled configuration and collect everything the reports need.
pub fn run_state(
    label: &BellLabel,
    noise: Option<&NoiseModel>,
    recombination: Recombination,
    counts_per_setting: Option<f64>,
    replicas: usize,
    seed: u64,
    targets: &[StateVector<(Oam, Oam)>],
) -> Result<StateRecord, CliError> {
    let space = ModeSpace::four_dim();
    let cfg = ExperimentConfig::for_label(label)
        .map_err(classify)?
        .with_noise(noise.cloned())
        .with_recombination(recombination);
    let outcome = run_experiment(&cfg, &space).map_err(classify)?;

    let overlap_row: Vec<f64> = targets
        .iter()
        .map(|t| outcome.state.expectation(t).map_err(classify))
        .collect::<Result<_, _>>()?;

    let shape = BipartiteShape::new(space.oam_labels(), space.oam_labels()).map_err(classify)?;
    let target = bell_state(&space, label).map_err(classify)?;
    let settings = fidelity_settings(label, &space).map_err(classify)?;

    let (fidelity, fidelity_std_error, witness, counts) = match counts_per_setting {
        None => {
            let witness = certify_dimension(&outcome.state, &target, &shape).map_err(classify)?;
            (witness.f_wit, None, witness, None)
        }
        Some(n) => {
            let counts =
                sample_counts(&outcome.state, &settings, n, seed).map_err(classify)?;
            let witness =
                certify_from_counts(&counts, &settings, &target, &shape, replicas, seed)
                    .map_err(classify)?;
            (
                witness.f_wit,
                Some(witness.std_error),
                witness,
                Some(counts.counts),
            )
        }
    };

    Ok(StateRecord {
        config: ConfigEcho {
            m: label.mode_shift(),
            n: label.phase_index(),
            alpha_over_pi: label.phase_index() as f64 / 4.0,
            gate: GateKind::from_mode_shift(label.mode_shift())
                .map_err(classify)?
                .to_string(),
            recombination: recombination_name(recombination).to_string(),
        },
        success_probability: outcome.success_probability,
        fidelity,
        fidelity_std_error,
        witness,
        overlap_row,
        counts,
        seed,
    })
}

fn ideal_targets(space: &ModeSpace) -> Result<Vec<StateVector<(Oam, Oam)>>, CliError> {
    BellLabel::all(space.dimension())
        .iter()
        .map(|l| bell_state(space, l).map_err(classify))
        .collect()
}

fn parse_gate(name: &str) -> Result<GateKind, CliError> {
    match name {
        "identity" => Ok(GateKind::Identity),
        "x" => Ok(GateKind::X),
        "x2" => Ok(GateKind::X2),
        "xdagger" => Ok(GateKind::Xdagger),
        other => Err(CliError::Usage(format!(
            "unknown gate '{other}' (expected identity, x, x2, xdagger)"
        ))),
    }
}

fn load_config(path: &PathBuf) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config '{}': {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        CliError::Config(format!(
            "invalid config '{}' at {}: {}",
            path.display(),
            e.path(),
            e.inner()
        ))
    })
}

fn label_for(gate: GateKind, alpha_over_pi: f64) -> Result<BellLabel, CliError> {
    let steps = alpha_over_pi / 0.25;
    let n = steps.round();
    if (steps - n).abs() > 1e-9 {
        return Err(CliError::Config(format!(
            "alpha = {alpha_over_pi} pi is not a multiple of pi/4; no Bell target"
        )));
    }
    let n = (n as i64).rem_euclid(4) as usize;
    BellLabel::new(4, gate.mode_shift(), n).map_err(classify)
}

pub fn run(args: Args) -> Result<(), CliError> {
    let space = ModeSpace::four_dim();
    let targets = ideal_targets(&space)?;
    let mut dir = OutDir::create(&args.out)?;

    let (labels, noise, recombination): (Vec<BellLabel>, Option<NoiseModel>, Recombination) =
        if let Some(path) = &args.config {
            if args.all16 {
                return Err(CliError::Usage(
                    "--config and --all16 are mutually exclusive".into(),
                ));
            }
            let cfg = load_config(path)?;
            if let Some(n) = &cfg.noise {
                n.validate()
                    .map_err(|e| CliError::Config(format!("invalid config noise: {e}")))?;
            }
            (
                vec![label_for(cfg.gate, cfg.alpha_over_pi)?],
                cfg.noise,
                cfg.recombination,
            )
        } else if args.all16 {
            (
                BellLabel::all(4),
                parse_noise(&args.noise)?,
                args.recombination,
            )
        } else {
            let gate = parse_gate(args.gate.as_deref().unwrap_or("identity"))?;
            let alpha = args.alpha.unwrap_or(0.0);
            (
                vec![label_for(gate, alpha)?],
                parse_noise(&args.noise)?,
                args.recombination,
            )
        };

    let mut states = Vec::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        let state_seed = args.seed.wrapping_add(i as u64);
        states.push(run_state(
            label,
            noise.as_ref(),
            recombination,
            args.counts,
            args.replicas,
            state_seed,
            &targets,
        )?);
    }

    // Appendix-layout overlap tables: one 4x4 table per mode-shift group,
    // rows are generated states, columns are ideal states of the group.
    if labels.len() == 16 {
        for m in 0..4usize {
            let header: Vec<String> = std::iter::once(String::new())
                .chain((0..4).map(|n| format!("psi_{m}{n}")))
                .collect();
            let mut rows = vec![header];
            for n in 0..4usize {
                let record = &states[m * 4 + n];
                let mut row = vec![format!("psi_{m}{n}")];
                for nn in 0..4usize {
                    let col = m * 4 + nn;
                    row.push(format_overlap(
                        record.overlap_row[col],
                        args.appendix_style,
                    ));
                }
                rows.push(row);
            }
            dir.write(&format!("overlap_group{m}.csv"), &csv_bytes(&rows)?)?;
        }
    }

    let document = ResultsDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: args.seed,
        noise: noise.clone(),
        states,
    };
    dir.write_json("results.json", &document)?;

    let diag_avg: f64 = document
        .states
        .iter()
        .map(|s| s.fidelity)
        .sum::<f64>()
        / document.states.len() as f64;
    println!(
        "experiment: {} state(s), mean fidelity {:.4}",
        document.states.len(),
        diag_avg
    );

    dir.finish(
        "experiment",
        args.seed,
        json!({
            "all16": args.all16,
            "noise": args.noise,
            "counts": args.counts,
            "replicas": args.replicas,
            "recombination": recombination_name(recombination),
            "appendix_style": args.appendix_style,
            "config": args.config.as_ref().map(|p| p.display().to_string()),
            "gate": args.gate,
            "alpha": args.alpha,
        }),
    )
}
