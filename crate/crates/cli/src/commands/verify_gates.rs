//! `bellsim verify-gates`: build the three interferometers and compare them
//! against the abstract cyclic gates.

use bellsim_core::bell::{pauli_x, ModeSpace};
use bellsim_core::optics::{
    build_cyclic_gate, gate_photon_space, verify_equivalence, CyclicGateKind, GateOptions,
    Recombination,
};
use bellsim_core::tolerances;

use crate::{classify, CliError};

pub fn parse_window(window: &str) -> Result<(i32, i32), CliError> {
    let parts: Vec<&str> = window.split("..").collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--window must look like LO..HI, got '{window}'"
        )));
    }
    let lo: i32 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad window bound '{}'", parts[0])))?;
    let hi: i32 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad window bound '{}'", parts[1])))?;
    if lo > hi {
        return Err(CliError::Usage(format!("empty window {lo}..{hi}")));
    }
    Ok((lo, hi))
}

pub fn run(
    recombination: Recombination,
    window: &str,
    trim_phase_over_pi: f64,
) -> Result<(), CliError> {
    let window = parse_window(window)?;
    let space = gate_photon_space(window, recombination).map_err(classify)?;
    let modes = ModeSpace::four_dim();
    let options = GateOptions {
        recombination,
        trim_phase: trim_phase_over_pi * std::f64::consts::PI,
        ..GateOptions::default()
    };

    let mut worst: f64 = 0.0;
    for (kind, power) in [
        (CyclicGateKind::X, 1),
        (CyclicGateKind::X2, 2),
        (CyclicGateKind::Xdagger, 3),
    ] {
        let circuit = build_cyclic_gate(kind, &space, &options).map_err(classify)?;
        let target = pauli_x(&modes, power);
        let eq = verify_equivalence(&circuit, &target, &modes.oam_labels()).map_err(classify)?;
        let verdict = if eq.deviation <= tolerances::GATE_DEVIATION {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "{verdict} {kind}: deviation {:.3e}, success probability {:.3}",
            eq.deviation, eq.success_probability
        );
        worst = worst.max(eq.deviation);
    }

    if worst > tolerances::GATE_DEVIATION {
        return Err(CliError::Verification(format!(
            "worst gate deviation {worst:.3e} exceeds {:.1e}",
            tolerances::GATE_DEVIATION
        )));
    }
    Ok(())
}
