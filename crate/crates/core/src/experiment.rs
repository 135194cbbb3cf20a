//! End-to-end simulation: down-conversion source, per-photon gates,
//! projective coincidence measurement, and Poisson-sampled count matrices.
//!
//! The pipeline mirrors the optical table: the source emits
//! `sum_l c_l |-l>_A |l>_B`, the polarizing beam splitter's reflection
//! flips the sign on photon A, a Dove prism imprints the phase pattern on
//! photon A, and one of the cyclic-gate interferometers acts on photon B.
//! Coincidence probabilities on projector pairs then reconstruct the
//! fidelity with any Bell state exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bell::{BellLabel, ModeSpace};
use crate::error::{Error, Result};
use crate::noise::{dephase_channel, CrosstalkChannel, NoiseModel};
use crate::optics::{
    build_cyclic_gate, dove_prism_operator, gate_photon_space, CyclicGateKind, GateOptions,
    Recombination, INPUT_PATH,
};
use crate::qudit::{random, tensor_product, DensityOperator, Oam, Operator, StateVector};

/// Amplitudes `c_l` per signal-photon OAM label, plus whether the partner
/// photon picks up the reflection sign flip `|l> -> |-l>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    amplitudes: Vec<(i32, Complex64)>,
    pbs_flip: bool,
}

impl SourceSpec {
    pub fn new(amplitudes: Vec<(i32, Complex64)>, pbs_flip: bool) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        let mut ells: Vec<i32> = amplitudes.iter().map(|(l, _)| *l).collect();
        ells.sort_unstable();
        ells.dedup();
        if ells.len() != amplitudes.len() {
            return Err(Error::InvalidParameter(
                "duplicate OAM label in source amplitudes".into(),
            ));
        }
        Ok(SourceSpec {
            amplitudes,
            pbs_flip,
        })
    }

    /// Flat amplitudes over the window: the ideal source for `psi_00`.
    pub fn ideal(space: &ModeSpace) -> Self {
        let d = space.dimension();
        let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        SourceSpec {
            amplitudes: space.oam_labels().iter().map(|l| (l.0, amp)).collect(),
            pbs_flip: true,
        }
    }

    pub fn amplitudes(&self) -> &[(i32, Complex64)] {
        &self.amplitudes
    }

    pub fn pbs_flip(&self) -> bool {
        self.pbs_flip
    }
}

/// Build the two-photon source state on the computational window.
///
/// Returns the normalized truncated state together with the retained
/// squared norm (the fraction of the normalized input surviving the
/// window truncation).
pub fn source_state(
    spec: &SourceSpec,
    space: &ModeSpace,
) -> Result<(StateVector<(Oam, Oam)>, f64)> {
    let total: f64 = spec.amplitudes.iter().map(|(_, c)| c.norm_sqr()).sum();
    if total <= 0.0 {
        return Err(Error::ZeroNorm("source amplitudes".into()));
    }
    let mut psi = StateVector::zero(space.joint_labels())?;
    let mut kept = 0.0;
    for (ell, c) in &spec.amplitudes {
        let a = if spec.pbs_flip { *ell } else { -ell };
        let b = *ell;
        if space.index_of(Oam(a)).is_ok() && space.index_of(Oam(b)).is_ok() {
            psi.set_amplitude(&(Oam(a), Oam(b)), *c)?;
            kept += c.norm_sqr();
        }
    }
    if kept <= 0.0 {
        return Err(Error::ZeroNorm("window truncation of the source".into()));
    }
    Ok((psi.normalized()?, kept / total))
}

/// Which transformation photon B sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Identity,
    X,
    X2,
    Xdagger,
}

impl GateKind {
    pub fn from_mode_shift(m: usize) -> Result<Self> {
        match m {
            0 => Ok(GateKind::Identity),
            1 => Ok(GateKind::X),
            2 => Ok(GateKind::X2),
            3 => Ok(GateKind::Xdagger),
            _ => Err(Error::InvalidParameter(format!(
                "no gate for mode shift {m}"
            ))),
        }
    }

    pub fn mode_shift(&self) -> usize {
        match self {
            GateKind::Identity => 0,
            GateKind::X => 1,
            GateKind::X2 => 2,
            GateKind::Xdagger => 3,
        }
    }

    pub fn cyclic(&self) -> Option<CyclicGateKind> {
        match self {
            GateKind::Identity => None,
            GateKind::X => Some(CyclicGateKind::X),
            GateKind::X2 => Some(CyclicGateKind::X2),
            GateKind::Xdagger => Some(CyclicGateKind::Xdagger),
        }
    }
}

impl std::fmt::Display for GateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GateKind::Identity => "identity",
            GateKind::X => "x",
            GateKind::X2 => "x2",
            GateKind::Xdagger => "xdagger",
        };
        write!(f, "{s}")
    }
}

/// One run of the table: Dove-prism angle, gate choice, recombination and
/// optional noise budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Dove prism angle on photon A, radians.
    pub dove_alpha: f64,
    pub gate: GateKind,
    #[serde(default)]
    pub recombination: Recombination,
    /// Interferometer arm detuning relative to the aligned point, radians.
    #[serde(default)]
    pub trim_phase: f64,
    /// Noise budget; when present its spiral spectrum also provides the
    /// source unless `source` overrides it.
    #[serde(default)]
    pub noise: Option<NoiseModel>,
    /// Explicit source override.
    #[serde(default)]
    pub source: Option<SourceSpec>,
}

impl ExperimentConfig {
    /// The canonical config generating `psi_mn`: `alpha = n pi / 4` and the
    /// gate matching the mode shift `m`.
    pub fn for_label(label: &BellLabel) -> Result<Self> {
        if label.dimension() != 4 {
            return Err(Error::DimensionMismatch(
                "experiment configs describe the 4-dimensional setup".into(),
            ));
        }
        Ok(ExperimentConfig {
            dove_alpha: label.phase_index() as f64 * std::f64::consts::FRAC_PI_4,
            gate: GateKind::from_mode_shift(label.mode_shift())?,
            recombination: Recombination::Probabilistic,
            trim_phase: 0.0,
            noise: None,
            source: None,
        })
    }

    pub fn with_noise(mut self, noise: Option<NoiseModel>) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_recombination(mut self, recombination: Recombination) -> Self {
        self.recombination = recombination;
        self
    }

    /// The Bell label this config aims at, when the Dove angle sits on the
    /// `n pi / 4` grid.
    pub fn target_label(&self) -> Option<BellLabel> {
        let step = self.dove_alpha / std::f64::consts::FRAC_PI_4;
        let n = step.round();
        if (step - n).abs() > 1e-9 {
            return None;
        }
        let n = (n as i64).rem_euclid(4) as usize;
        BellLabel::new(4, self.gate.mode_shift(), n).ok()
    }
}

/// Result of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// The generated two-photon state on the computational window.
    pub state: DensityOperator<(Oam, Oam)>,
    /// Post-selection probability of the run (source truncation times gate
    /// success).
    pub success_probability: f64,
}

/// Simulate source -> Dove prism (A) -> cyclic gate (B) -> noise budget.
pub fn run_experiment(cfg: &ExperimentConfig, space: &ModeSpace) -> Result<ExperimentOutcome> {
    let spec = match (&cfg.source, &cfg.noise) {
        (Some(s), _) => s.clone(),
        (None, Some(n)) => n.source_spec(space)?,
        (None, None) => SourceSpec::ideal(space),
    };
    let (mut psi, retained) = source_state(&spec, space)?;
    let mut success = retained;

    // Dove prism on photon A.
    let dove = dove_prism_operator(space.oam_labels(), cfg.dove_alpha);
    psi = dove
        .tensor(&Operator::identity(space.oam_labels()))
        .apply(&psi)?;

    // Cyclic gate on photon B, through the interferometer.
    if let Some(kind) = cfg.gate.cyclic() {
        let photon_space = gate_photon_space((-4, 4), cfg.recombination)?;
        let circuit = build_cyclic_gate(
            kind,
            &photon_space,
            &GateOptions {
                recombination: cfg.recombination,
                trim_phase: cfg.trim_phase,
                computational_window: (space.lowest_oam(), space.highest_oam()),
            },
        )?;
        let map = circuit.post_selected_map();
        let kept_path = &circuit.post_select()[0];

        // Apply the map to photon B conditionally on each A mode.
        let mut conditionals: Vec<(Oam, StateVector<Oam>)> = Vec::new();
        let mut total = 0.0;
        for a_mode in space.oam_labels() {
            let mut b_vec = StateVector::zero(space.oam_labels())?;
            for ((a, b), amp) in psi.iter() {
                if *a == a_mode {
                    b_vec.set_amplitude(b, *amp)?;
                }
            }
            let embedded = photon_space.embed_modes(INPUT_PATH, &b_vec)?;
            let raw = map.apply_raw(&embedded)?;
            let out_modes = photon_space.extract_path(&raw, kept_path, &space.oam_labels())?;
            total += out_modes.norm_sq();
            conditionals.push((a_mode, out_modes));
        }
        if total <= 1e-300 {
            return Err(Error::ZeroNorm("gate post-selection".into()));
        }
        let scale = Complex64::new(1.0 / total.sqrt(), 0.0);
        let mut joint = StateVector::zero(space.joint_labels())?;
        for (a_mode, b_vec) in &conditionals {
            for (b, amp) in b_vec.iter() {
                joint.set_amplitude(&(*a_mode, *b), amp * scale)?;
            }
        }
        psi = joint;
        success *= total;
    }

    let mut rho = DensityOperator::from_pure(&psi)?;
    if let Some(noise) = &cfg.noise {
        noise.validate()?;
        // The cross-talk fraction was measured against each state's own
        // correlation cells, so the channel is referenced to the group the
        // gate produced.
        let ct = CrosstalkChannel::with_shift(noise.crosstalk_epsilon, cfg.gate.mode_shift())?;
        rho = ct.apply(&rho, space)?;
        rho = dephase_channel(noise.coherence_factor)?.apply(&rho)?;
    }
    rho.validate()
        .expect("experiment pipeline must produce a valid state");

    Ok(ExperimentOutcome {
        state: rho,
        success_probability: success,
    })
}

/// `Tr(rho P_a (x) P_b)` for normalized single-photon projectors.
pub fn coincidence_probability(
    rho: &DensityOperator<(Oam, Oam)>,
    proj_a: &StateVector<Oam>,
    proj_b: &StateVector<Oam>,
) -> Result<f64> {
    for p in [proj_a, proj_b] {
        if !p.is_normalized() {
            return Err(Error::NotNormalized {
                norm_sq: p.norm_sq(),
            });
        }
    }
    let w = tensor_product(proj_a, proj_b);
    let p = rho.expectation(&w)?;
    Ok(p.clamp(0.0, 1.0))
}

/// A pair of single-photon analyzer settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorPair {
    pub a: StateVector<Oam>,
    pub b: StateVector<Oam>,
}

/// Product-projector decomposition of a Bell-state fidelity.
///
/// `sum_i w_i Tr(rho P_i) = <psi_mn| rho |psi_mn>` for every density
/// operator on the window: the `D^2` computational pairs plus, for each
/// mode pair `k < k'`, the 4 x 4 grid of two-mode superpositions with
/// relative phases `{0, pi/2, pi, 3pi/2}` on each side.
#[derive(Debug, Clone)]
pub struct FidelitySettings {
    pub target: BellLabel,
    pub pairs: Vec<ProjectorPair>,
    pub weights: Vec<f64>,
}

/// Build the measurement settings and weights for one target state.
pub fn fidelity_settings(target: &BellLabel, space: &ModeSpace) -> Result<FidelitySettings> {
    if target.dimension() != space.dimension() {
        return Err(Error::DimensionMismatch(
            "target label and mode space disagree".into(),
        ));
    }
    let d = space.dimension();
    let m = target.mode_shift();
    let n = target.phase_index();
    let modes = space.oam_labels();
    let mut pairs = Vec::new();
    let mut weights = Vec::new();

    // Populations: weight 1/D on the correlated cells, 0 elsewhere.
    for ka in 0..d {
        for kb in 0..d {
            pairs.push(ProjectorPair {
                a: StateVector::basis_state(modes.clone(), &modes[ka])?,
                b: StateVector::basis_state(modes.clone(), &modes[kb])?,
            });
            weights.push(if kb == (ka + m) % d {
                1.0 / d as f64
            } else {
                0.0
            });
        }
    }

    // Coherences: Fourier extraction over the phase grid.
    let phases = [
        0.0,
        std::f64::consts::FRAC_PI_2,
        std::f64::consts::PI,
        3.0 * std::f64::consts::FRAC_PI_2,
    ];
    let s = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    for k in 0..d {
        for kp in (k + 1)..d {
            let delta = (kp - k) as f64;
            let target_phase = 2.0 * std::f64::consts::PI * n as f64 * delta / d as f64;
            for phi in phases {
                let mut a = StateVector::zero(modes.clone())?;
                a.set_amplitude(&modes[k], s)?;
                a.set_amplitude(&modes[kp], s * Complex64::from_polar(1.0, phi))?;
                for theta in phases {
                    let mut b = StateVector::zero(modes.clone())?;
                    b.set_amplitude(&modes[(k + m) % d], s)?;
                    b.set_amplitude(&modes[(kp + m) % d], s * Complex64::from_polar(1.0, theta))?;
                    pairs.push(ProjectorPair { a: a.clone(), b });
                    weights.push((target_phase - phi - theta).cos() / (2.0 * d as f64));
                }
            }
        }
    }

    Ok(FidelitySettings {
        target: *target,
        pairs,
        weights,
    })
}

/// Evaluate the decomposition exactly: `sum_i w_i Tr(rho P_i)`.
pub fn settings_fidelity(
    settings: &FidelitySettings,
    rho: &DensityOperator<(Oam, Oam)>,
) -> Result<f64> {
    let mut acc = 0.0;
    for (pair, w) in settings.pairs.iter().zip(&settings.weights) {
        if *w == 0.0 {
            continue;
        }
        acc += w * coincidence_probability(rho, &pair.a, &pair.b)?;
    }
    Ok(acc)
}

/// Poisson-sampled coincidence counts for a list of settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CountMatrix {
    pub counts: Vec<u64>,
    /// Expected total coincidences per setting at unit probability.
    pub total_exposure: f64,
    pub seed: u64,
}

impl CountMatrix {
    pub fn total_counts(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Draw each setting's count independently as `Poisson(N p_i)` with a
/// deterministic seeded generator.
pub fn sample_counts(
    rho: &DensityOperator<(Oam, Oam)>,
    settings: &FidelitySettings,
    expected_total: f64,
    seed: u64,
) -> Result<CountMatrix> {
    if expected_total <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "expected total {expected_total} must be positive"
        )));
    }
    let mut rng = random::rng_stream(seed, 0);
    let mut counts = Vec::with_capacity(settings.pairs.len());
    for pair in &settings.pairs {
        let p = coincidence_probability(rho, &pair.a, &pair.b)?;
        counts.push(poisson_draw(expected_total * p, &mut rng));
    }
    Ok(CountMatrix {
        counts,
        total_exposure: expected_total,
        seed,
    })
}

pub(crate) fn poisson_draw<R: rand::Rng>(lambda: f64, rng: &mut R) -> u64 {
    use rand_distr::Distribution;
    if lambda <= 0.0 {
        return 0;
    }
    let dist = rand_distr::Poisson::new(lambda).expect("positive finite mean");
    let value: f64 = dist.sample(rng);
    value.max(0.0).round() as u64
}

/// Plug-in fidelity estimate from counts: `sum_i w_i c_i / N`.
pub fn plugin_estimate(counts: &CountMatrix, settings: &FidelitySettings) -> Result<f64> {
    if counts.counts.len() != settings.pairs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} counts for {} settings",
            counts.counts.len(),
            settings.pairs.len()
        )));
    }
    if counts.total_counts() == 0 {
        return Err(Error::ZeroCounts("no coincidences recorded".into()));
    }
    Ok(settings
        .weights
        .iter()
        .zip(&counts.counts)
        .map(|(w, c)| w * (*c as f64) / counts.total_exposure)
        .sum())
}

/// Count-based fidelity estimate with its Monte Carlo standard error.
pub fn estimate_from_counts(
    counts: &CountMatrix,
    settings: &FidelitySettings,
    replicas: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let estimate = plugin_estimate(counts, settings)?;
    let std_error = crate::witness::monte_carlo_error(
        counts,
        &|c: &CountMatrix| plugin_estimate(c, settings),
        replicas,
        seed,
    )?;
    Ok((estimate, std_error))
}
