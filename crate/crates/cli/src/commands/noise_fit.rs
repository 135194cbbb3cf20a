//! `bellsim noise-fit`: invert the cross-talk model for a fidelity ceiling.

use bellsim_core::noise::crosstalk_epsilon_for_ceiling;

use crate::CliError;

pub fn run(target_fidelity: f64) -> Result<(), CliError> {
    let epsilon = crosstalk_epsilon_for_ceiling(target_fidelity)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    println!(
        "{}",
        serde_json::json!({
            "target_fidelity": target_fidelity,
            "crosstalk_epsilon": epsilon,
        })
    );
    Ok(())
}
