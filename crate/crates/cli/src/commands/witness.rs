//! `bellsim witness`: dimensionality certificate for one generated state.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use bellsim_core::bell::{bell_state, BellLabel, ModeSpace};
use bellsim_core::optics::Recombination;
use bellsim_core::qudit::StateVector;
use bellsim_core::witness::WitnessResult;

use crate::commands::experiment::run_state;
use crate::commands::parse_noise;
use crate::output::OutDir;
use crate::{classify, CliError};

#[derive(Serialize)]
struct WitnessDocument {
    version: String,
    seed: u64,
    m: usize,
    n: usize,
    noise: Option<bellsim_core::noise::NoiseModel>,
    counts_per_setting: Option<f64>,
    witness: WitnessResult,
}

pub fn run(
    m: usize,
    n: usize,
    noise: Option<String>,
    counts: Option<f64>,
    replicas: usize,
    out: Option<PathBuf>,
    seed: u64,
) -> Result<(), CliError> {
    let label = BellLabel::new(4, m, n).map_err(|e| CliError::Usage(e.to_string()))?;
    let noise = parse_noise(&noise)?;
    let space = ModeSpace::four_dim();
    let targets: Vec<StateVector<_>> = BellLabel::all(4)
        .iter()
        .map(|l| bell_state(&space, l).map_err(classify))
        .collect::<Result<_, _>>()?;

    let record = run_state(
        &label,
        noise.as_ref(),
        Recombination::Probabilistic,
        counts,
        replicas,
        seed,
        &targets,
    )?;

    let document = WitnessDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        m,
        n,
        noise,
        counts_per_setting: counts,
        witness: record.witness,
    };
    let text = serde_json::to_string_pretty(&document)
        .map_err(|e| CliError::Config(format!("serialization: {e}")))?;
    println!("{text}");

    if let Some(out) = out {
        let mut dir = OutDir::create(&out)?;
        dir.write_json("witness.json", &document)?;
        dir.finish(
            "witness",
            seed,
            json!({ "m": m, "n": n, "counts": counts, "replicas": replicas }),
        )?;
    }
    Ok(())
}
