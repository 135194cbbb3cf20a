//! Interferometer layouts for the cyclic OAM gates and their verification
//! against the abstract shift operators.
//!
//! Each gate splits even and odd OAM modes into two arms of a Mach-Zehnder
//! interferometer, manipulates one arm, and recombines. The recombining
//! beam splitter costs a factor 1/2 in success probability; replacing it
//! with a second parity sorter makes the gate deterministic.
//!
//! The paper never states the phases collected at the sorter, mirrors, or
//! beam splitter, only the mode permutations the aligned interferometer
//! realizes. The builders therefore set the recombining splitter's arm
//! phase to `-pi/2 + trim`, which makes the two arms add in phase at the
//! kept port; `trim` (default 0) models residual misalignment relative to
//! that aligned working point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Circuit, OpticalElement, PhotonSpace};
use crate::error::{Error, Result};
use crate::qudit::{Oam, Operator, StateVector};

/// Input port of the gate interferometers.
pub const INPUT_PATH: &str = "in";
/// Arm carrying even OAM modes after the sorter.
pub const EVEN_PATH: &str = "even";
/// Arm carrying odd OAM modes after the sorter.
pub const ODD_PATH: &str = "odd";
/// Output port of the deterministic recombiner.
pub const OUT_PATH: &str = "out";

/// The three cyclic transformations realized in the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CyclicGateKind {
    /// `X`: clockwise cycle -2 -> -1 -> 0 -> 1 -> -2.
    X,
    /// `X^2`: swap -2 <-> 0 and -1 <-> 1.
    X2,
    /// `X^dagger`: anticlockwise cycle -2 -> 1 -> 0 -> -1 -> -2.
    Xdagger,
}

impl CyclicGateKind {
    /// The power of the abstract shift gate this circuit realizes.
    pub fn shift_power(&self) -> i64 {
        match self {
            CyclicGateKind::X => 1,
            CyclicGateKind::X2 => 2,
            CyclicGateKind::Xdagger => 3,
        }
    }
}

impl std::fmt::Display for CyclicGateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CyclicGateKind::X => "X",
            CyclicGateKind::X2 => "X2",
            CyclicGateKind::Xdagger => "Xdagger",
        };
        write!(f, "{s}")
    }
}

/// How the two interferometer arms are brought back together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recombination {
    /// 50/50 beam splitter, success probability 1/2.
    #[default]
    Probabilistic,
    /// Second parity sorter, success probability 1.
    Deterministic,
}

/// Builder options shared by the three gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOptions {
    pub recombination: Recombination,
    /// Residual arm phase (radians) relative to the aligned interferometer.
    pub trim_phase: f64,
    /// The mode window the gate is declared to act on.
    pub computational_window: (i32, i32),
}

impl Default for GateOptions {
    fn default() -> Self {
        GateOptions {
            recombination: Recombination::Probabilistic,
            trim_phase: 0.0,
            computational_window: (-2, 1),
        }
    }
}

/// The photon space the gate builders expect: paths `in`, `even`, `odd`
/// (plus `out` for deterministic recombination) over the given window.
pub fn gate_photon_space(window: (i32, i32), recombination: Recombination) -> Result<PhotonSpace> {
    let mut paths = vec![
        INPUT_PATH.to_string(),
        EVEN_PATH.to_string(),
        ODD_PATH.to_string(),
    ];
    if recombination == Recombination::Deterministic {
        paths.push(OUT_PATH.to_string());
    }
    PhotonSpace::new(paths, window)
}

/// Build-time window sizing.
///
/// The builder tracks, per path, the interval of modes reachable from the
/// computational window, and requires every shift and reflection to map its
/// path's whole interval inside the photon window. The interval is coarser
/// than the occupied mode set (the sorter sends the full interval down both
/// arms), so a window that merely fits the occupied trajectories can still
/// be rejected; runtime occupancy checks in `apply_element` remain as the
/// backstop. Modes are scanned in ascending order so the first offending
/// one is reported.
struct ReachTracker {
    window: (i32, i32),
    per_path: std::collections::BTreeMap<String, Option<(i32, i32)>>,
}

impl ReachTracker {
    fn new(space: &PhotonSpace, input: &str, computational: (i32, i32)) -> Self {
        let mut per_path = std::collections::BTreeMap::new();
        for p in space.paths() {
            per_path.insert(p.clone(), None);
        }
        per_path.insert(input.to_string(), Some(computational));
        ReachTracker {
            window: space.window(),
            per_path,
        }
    }

    fn check_shift(
        &self,
        elem: &OpticalElement,
        reach: (i32, i32),
        image: impl Fn(i32) -> i32,
    ) -> Result<()> {
        for l in reach.0..=reach.1 {
            let to = image(l);
            if !(self.window.0..=self.window.1).contains(&to) {
                return Err(Error::WindowOverflow {
                    element: elem.describe(),
                    from: l,
                    to,
                    lo: self.window.0,
                    hi: self.window.1,
                });
            }
        }
        Ok(())
    }

    fn union(a: Option<(i32, i32)>, b: Option<(i32, i32)>) -> Option<(i32, i32)> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        }
    }

    fn step(&mut self, elem: &OpticalElement) -> Result<()> {
        match elem {
            OpticalElement::Spp { path, delta } => {
                if let Some(reach) = self.per_path[path] {
                    self.check_shift(elem, reach, |l| l + delta)?;
                    self.per_path
                        .insert(path.clone(), Some((reach.0 + delta, reach.1 + delta)));
                }
            }
            OpticalElement::Mirror { path } => {
                if let Some(reach) = self.per_path[path] {
                    self.check_shift(elem, reach, |l| -l)?;
                    self.per_path
                        .insert(path.clone(), Some((-reach.1, -reach.0)));
                }
            }
            OpticalElement::ParitySorter { input, even, odd } => {
                let reach = self.per_path[input];
                self.per_path.insert(input.clone(), None);
                let e = Self::union(self.per_path[even], reach);
                let o = Self::union(self.per_path[odd], reach);
                self.per_path.insert(even.clone(), e);
                self.per_path.insert(odd.clone(), o);
            }
            OpticalElement::InverseParitySorter {
                even_from,
                odd_from,
                output,
            } => {
                let merged = Self::union(self.per_path[even_from], self.per_path[odd_from]);
                self.per_path.insert(even_from.clone(), None);
                self.per_path.insert(odd_from.clone(), None);
                let out = Self::union(self.per_path[output], merged);
                self.per_path.insert(output.clone(), out);
            }
            OpticalElement::BeamSplitter { path_a, path_b, .. } => {
                let merged = Self::union(self.per_path[path_a], self.per_path[path_b]);
                self.per_path.insert(path_a.clone(), merged);
                self.per_path.insert(path_b.clone(), merged);
            }
            _ => {}
        }
        Ok(())
    }
}

/// Build the interferometer for one cyclic gate.
///
/// Layouts (probabilistic recombination, `BS` keeps the `even` port):
///
/// ```text
/// X : SPP(+1) on in | sorter | mirror(even)                 | BS
/// X2:                 sorter | SPP(+2, even)                | BS | mirror
/// Xd:                 sorter | mirror(even) | SPP(-1, both) | BS
/// ```
///
/// With deterministic recombination the BS becomes an inverse parity
/// sorter; for `Xdagger` the arms swap parity inside the interferometer,
/// so they feed the recombiner crossed.
pub fn build_cyclic_gate(
    kind: CyclicGateKind,
    space: &PhotonSpace,
    options: &GateOptions,
) -> Result<Circuit> {
    for required in [INPUT_PATH, EVEN_PATH, ODD_PATH] {
        if !space.has_path(required) {
            return Err(Error::InvalidParameter(format!(
                "gate builder needs path '{required}' in the photon space"
            )));
        }
    }
    let (clo, chi) = options.computational_window;
    if !space.window_contains(clo) || !space.window_contains(chi) {
        return Err(Error::InvalidParameter(format!(
            "photon window [{}, {}] does not contain the computational window [{clo}, {chi}]",
            space.window().0,
            space.window().1
        )));
    }

    let deterministic = options.recombination == Recombination::Deterministic;
    if deterministic && !space.has_path(OUT_PATH) {
        return Err(Error::InvalidParameter(format!(
            "deterministic recombination needs path '{OUT_PATH}' in the photon space"
        )));
    }

    let sorter = OpticalElement::ParitySorter {
        input: INPUT_PATH.into(),
        even: EVEN_PATH.into(),
        odd: ODD_PATH.into(),
    };
    // Aligned working point: the arms add in phase at the kept port.
    let bs = OpticalElement::BeamSplitter {
        path_a: EVEN_PATH.into(),
        path_b: ODD_PATH.into(),
        phase_b: -std::f64::consts::FRAC_PI_2 + options.trim_phase,
    };
    // For Xdagger the even arm ends up carrying odd modes and vice versa.
    let recombiner = |crossed: bool| {
        let (even_from, odd_from) = if crossed {
            (ODD_PATH, EVEN_PATH)
        } else {
            (EVEN_PATH, ODD_PATH)
        };
        OpticalElement::InverseParitySorter {
            even_from: even_from.into(),
            odd_from: odd_from.into(),
            output: OUT_PATH.into(),
        }
    };
    let kept_path: String = if deterministic {
        OUT_PATH.into()
    } else {
        EVEN_PATH.into()
    };

    let mut elements: Vec<OpticalElement> = Vec::new();
    match kind {
        CyclicGateKind::X => {
            elements.push(OpticalElement::Spp {
                path: INPUT_PATH.into(),
                delta: 1,
            });
            elements.push(sorter);
            elements.push(OpticalElement::Mirror {
                path: EVEN_PATH.into(),
            });
            elements.push(if deterministic { recombiner(false) } else { bs });
        }
        CyclicGateKind::X2 => {
            elements.push(sorter);
            elements.push(OpticalElement::Spp {
                path: EVEN_PATH.into(),
                delta: 2,
            });
            elements.push(if deterministic { recombiner(false) } else { bs });
            elements.push(OpticalElement::Mirror {
                path: kept_path.clone(),
            });
        }
        CyclicGateKind::Xdagger => {
            elements.push(sorter);
            elements.push(OpticalElement::Mirror {
                path: EVEN_PATH.into(),
            });
            elements.push(OpticalElement::Spp {
                path: EVEN_PATH.into(),
                delta: -1,
            });
            elements.push(OpticalElement::Spp {
                path: ODD_PATH.into(),
                delta: -1,
            });
            elements.push(if deterministic { recombiner(true) } else { bs });
        }
    }

    // Size every mode-changing element against the reachable intervals.
    let mut tracker = ReachTracker::new(space, INPUT_PATH, options.computational_window);
    for elem in &elements {
        tracker.step(elem)?;
    }

    Circuit::new(space.clone(), INPUT_PATH, elements, vec![kept_path])
}

/// Outcome of comparing a circuit against an abstract unitary.
#[derive(Debug, Clone, Copy)]
pub struct GateEquivalence {
    /// Max distance over an operator-distinguishing probe set between the
    /// renormalized post-selected circuit action and the target, after
    /// fitting one global phase.
    pub deviation: f64,
    /// Isometry factor of the post-selected map (success probability of the
    /// gate, identical for every computational input).
    pub success_probability: f64,
    /// The fitted global phase (radians).
    pub fitted_phase: f64,
}

/// Compare the post-selected action of `circuit` on the computational
/// modes against the unitary `target`.
///
/// The circuit action is probed on all computational basis states; the map
/// must be proportional to an isometry into the computational subspace of
/// the kept path, otherwise a structural failure is reported. One global
/// phase is fitted by overlap maximization before measuring the deviation.
pub fn verify_equivalence(
    circuit: &Circuit,
    target: &Operator<Oam>,
    modes: &[Oam],
) -> Result<GateEquivalence> {
    if target.labels() != modes {
        return Err(Error::BasisMismatch(
            "target operator is not over the computational modes".into(),
        ));
    }
    let d = modes.len();
    let space = circuit.space();
    let kept = circuit.post_select();

    // Columns of the post-selected map restricted to computational modes.
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for mode in modes {
        let input = space.basis(circuit.input_path(), mode.0)?;
        let (raw, _) = circuit.apply_unnormalized(&input)?;
        // All output weight must sit on computational modes of exactly one
        // post-selected path.
        let mut col = vec![Complex64::ZERO; d];
        let mut seen_path: Option<String> = None;
        for ((p, l), a) in raw.iter() {
            if a.norm() <= 1e-13 {
                continue;
            }
            if !kept.iter().any(|k| k == p.name()) {
                continue;
            }
            match modes.iter().position(|m| m == l) {
                Some(i) => {
                    match &seen_path {
                        None => seen_path = Some(p.name().to_string()),
                        Some(sp) if sp == p.name() => {}
                        Some(sp) => {
                            return Err(Error::StructuralFailure(format!(
                                "output spread over post-selected paths '{sp}' and '{}'",
                                p.name()
                            )))
                        }
                    }
                    col[i] = *a;
                }
                None => {
                    return Err(Error::StructuralFailure(format!(
                        "circuit leaks amplitude {:.3e} to non-computational mode {} on path {}",
                        a.norm(),
                        l.0,
                        p.name()
                    )))
                }
            }
        }
        columns.push(col);
    }

    // M^dagger M must be lambda * identity.
    let mut lambda = 0.0;
    for col in &columns {
        lambda += col.iter().map(|a| a.norm_sqr()).sum::<f64>();
    }
    lambda /= d as f64;
    if lambda <= 1e-300 {
        return Err(Error::StructuralFailure(
            "post-selected map annihilates the computational subspace".into(),
        ));
    }
    for i in 0..d {
        for j in 0..d {
            let dot: Complex64 = columns[i]
                .iter()
                .zip(&columns[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            let expect = if i == j {
                Complex64::new(lambda, 0.0)
            } else {
                Complex64::ZERO
            };
            if (dot - expect).norm() / lambda > 1e-9 {
                return Err(Error::StructuralFailure(format!(
                    "M^dagger M deviates from lambda*I at ({i}, {j}) by {:.3e}",
                    (dot - expect).norm()
                )));
            }
        }
    }

    // Global phase by overlap maximization: arg tr(T^dagger M / sqrt(lambda)).
    let scale = 1.0 / lambda.sqrt();
    let mut trace = Complex64::ZERO;
    for (j, col) in columns.iter().enumerate() {
        for (i, a) in col.iter().enumerate() {
            trace += target.matrix()[(i, j)].conj() * a * scale;
        }
    }
    let fitted_phase = if trace.norm() > 1e-12 {
        trace.arg()
    } else {
        0.0
    };
    let phase = Complex64::from_polar(1.0, fitted_phase);

    // Probe set: basis states plus two-mode superpositions with relative
    // phases 1 and i, enough to distinguish any two linear maps.
    let mut probes: Vec<Vec<Complex64>> = Vec::new();
    for k in 0..d {
        let mut v = vec![Complex64::ZERO; d];
        v[k] = Complex64::ONE;
        probes.push(v);
    }
    let s = 1.0 / 2f64.sqrt();
    for j in 0..d {
        for k in (j + 1)..d {
            for rel in [Complex64::new(s, 0.0), Complex64::new(0.0, s)] {
                let mut v = vec![Complex64::ZERO; d];
                v[j] = Complex64::new(s, 0.0);
                v[k] = rel;
                probes.push(v);
            }
        }
    }

    let mut deviation = 0.0_f64;
    for probe in &probes {
        let mut circuit_img = vec![Complex64::ZERO; d];
        let mut target_img = vec![Complex64::ZERO; d];
        for (j, p) in probe.iter().enumerate() {
            for (i, c) in columns[j].iter().enumerate() {
                circuit_img[i] += c * scale * p;
                target_img[i] += target.matrix()[(i, j)] * p;
            }
        }
        let distance_sq: f64 = circuit_img
            .iter()
            .zip(&target_img)
            .map(|(c, t)| (c - phase * t).norm_sqr())
            .sum();
        deviation = deviation.max(distance_sq.sqrt());
    }

    Ok(GateEquivalence {
        deviation,
        success_probability: lambda,
        fitted_phase,
    })
}

/// A 50/50 recombining beam splitter followed by post-selection on one
/// output port, as a standalone post-selected map.
pub fn beam_splitter_recombine(
    space: &PhotonSpace,
    arms: (&str, &str),
    keep: &str,
) -> Result<super::PostSelectedMap> {
    if keep != arms.0 && keep != arms.1 {
        return Err(Error::InvalidParameter(format!(
            "kept port '{keep}' is not one of the splitter arms"
        )));
    }
    let circuit = Circuit::new(
        space.clone(),
        arms.0,
        vec![OpticalElement::BeamSplitter {
            path_a: arms.0.into(),
            path_b: arms.1.into(),
            phase_b: 0.0,
        }],
        vec![keep.to_string()],
    )?;
    Ok(circuit.post_selected_map())
}

/// Sweep helper used by tests: the renormalized action of a gate circuit
/// on a bare mode state.
pub fn apply_gate_to_modes(
    circuit: &Circuit,
    modes: &StateVector<Oam>,
) -> Result<(StateVector<Oam>, f64)> {
    let space = circuit.space();
    let input = space.embed_modes(circuit.input_path(), modes)?;
    let (out, prob) = circuit.apply(&input)?;
    let kept_path = &circuit.post_select()[0];
    let result = space.extract_path(&out, kept_path, modes.labels())?;
    Ok((result, prob))
}
