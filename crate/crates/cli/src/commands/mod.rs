pub mod basis;
pub mod dense_code;
pub mod experiment;
pub mod noise_fit;
pub mod verify_gates;
pub mod witness;

use bellsim_core::noise::NoiseModel;

use crate::CliError;

/// Parse a `--noise` argument: `none`, `paper`, or a JSON file path
/// containing a noise model.
pub fn parse_noise(arg: &Option<String>) -> Result<Option<NoiseModel>, CliError> {
    match arg.as_deref() {
        None | Some("none") => Ok(None),
        Some("paper") => Ok(Some(NoiseModel::paper())),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read noise model '{path}': {e}"))
            })?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            let model: NoiseModel = serde_path_to_error::deserialize(de).map_err(|e| {
                CliError::Config(format!(
                    "invalid noise model '{path}' at {}: {}",
                    e.path(),
                    e.inner()
                ))
            })?;
            model
                .validate()
                .map_err(|e| CliError::Config(format!("invalid noise model '{path}': {e}")))?;
            Ok(Some(model))
        }
    }
}
