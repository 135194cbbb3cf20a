//! Exact operator semantics for optical elements on a (path ⊗ OAM)
//! single-photon space, circuit composition, and post-selection.
//!
//! Every element is a linear map on the full photon space. Elements that
//! shift or reflect OAM are partial isometries: basis states whose image
//! would leave the declared window are outside the element's domain, and
//! applying the element to a state that occupies such a mode is a hard
//! error, never a silent truncation. Parity sorters additionally require
//! their output ports to be empty.

mod builders;

pub use builders::{
    apply_gate_to_modes, beam_splitter_recombine, build_cyclic_gate, gate_photon_space,
    verify_equivalence, CyclicGateKind, GateEquivalence, GateOptions, Recombination, EVEN_PATH,
    INPUT_PATH, ODD_PATH, OUT_PATH,
};

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{linalg, BasisLabel, Oam, Operator, Path, StateVector};
use crate::tolerances;

/// Path labels crossed with a contiguous OAM window.
///
/// The window must be large enough that no intermediate mode of a circuit
/// leaves it; the cyclic gates of the experiment need at least `[-3, 3]`
/// around the computational window `{-2..1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhotonSpace {
    paths: Vec<String>,
    window: (i32, i32),
}

impl PhotonSpace {
    pub fn new(paths: Vec<String>, window: (i32, i32)) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        let mut seen = paths.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != paths.len() {
            return Err(Error::InvalidParameter("duplicate path names".into()));
        }
        if window.0 > window.1 {
            return Err(Error::InvalidParameter(format!(
                "empty OAM window [{}, {}]",
                window.0, window.1
            )));
        }
        Ok(PhotonSpace { paths, window })
    }

    pub fn paths(&self) -> &[String] {
        &self.paths
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn window_contains(&self, oam: i32) -> bool {
        (self.window.0..=self.window.1).contains(&oam)
    }

    pub fn window_modes(&self) -> Vec<Oam> {
        (self.window.0..=self.window.1).map(Oam).collect()
    }

    pub fn has_path(&self, name: &str) -> bool {
        self.paths.iter().any(|p| p == name)
    }

    pub fn dimension(&self) -> usize {
        self.paths.len() * (self.window.1 - self.window.0 + 1) as usize
    }

    /// Path-major basis labels.
    pub fn labels(&self) -> Vec<(Path, Oam)> {
        let mut out = Vec::with_capacity(self.dimension());
        for p in &self.paths {
            for l in self.window.0..=self.window.1 {
                out.push((Path::new(p.clone()), Oam(l)));
            }
        }
        out
    }

    pub fn index_of(&self, path: &str, oam: i32) -> Result<usize> {
        let pi = self
            .paths
            .iter()
            .position(|p| p == path)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown path '{path}'")))?;
        if !self.window_contains(oam) {
            return Err(Error::BasisMismatch(format!(
                "OAM {oam} outside window [{}, {}]",
                self.window.0, self.window.1
            )));
        }
        let width = (self.window.1 - self.window.0 + 1) as usize;
        Ok(pi * width + (oam - self.window.0) as usize)
    }

    /// Basis state `|path, oam>`.
    pub fn basis(&self, path: &str, oam: i32) -> Result<StateVector<(Path, Oam)>> {
        self.index_of(path, oam)?;
        StateVector::basis_state(self.labels(), &(Path::new(path), Oam(oam)))
    }

    /// Place a single-photon OAM state on one path (zero elsewhere).
    pub fn embed_modes(
        &self,
        path: &str,
        modes: &StateVector<Oam>,
    ) -> Result<StateVector<(Path, Oam)>> {
        let mut out = StateVector::zero(self.labels())?;
        for (l, a) in modes.iter() {
            if a.norm() == 0.0 {
                continue;
            }
            self.index_of(path, l.0)?;
            out.set_amplitude(&(Path::new(path), *l), *a)?;
        }
        Ok(out)
    }

    /// Amplitudes on one path, expressed over `modes` labels. Errors if the
    /// state has weight on that path outside `modes`.
    pub fn extract_path(
        &self,
        state: &StateVector<(Path, Oam)>,
        path: &str,
        modes: &[Oam],
    ) -> Result<StateVector<Oam>> {
        let mut out = StateVector::zero(modes.to_vec())?;
        for ((p, l), a) in state.iter() {
            if p.name() != path {
                continue;
            }
            if modes.contains(l) {
                out.set_amplitude(l, *a)?;
            } else if a.norm() > tolerances::OCCUPANCY {
                return Err(Error::StructuralFailure(format!(
                    "amplitude {:.3e} on ({}, {}) outside the requested mode set",
                    a.norm(),
                    p,
                    l
                )));
            }
        }
        Ok(out)
    }

    /// Move all amplitude from one path to another (target must be empty).
    pub fn transfer_path(
        &self,
        state: &StateVector<(Path, Oam)>,
        from: &str,
        to: &str,
    ) -> Result<StateVector<(Path, Oam)>> {
        for name in [from, to] {
            if !self.has_path(name) {
                return Err(Error::InvalidParameter(format!("unknown path '{name}'")));
            }
        }
        let mut out = StateVector::zero(self.labels())?;
        for ((p, l), a) in state.iter() {
            if p.name() == to && a.norm() > tolerances::OCCUPANCY {
                return Err(Error::RoutingConflict {
                    element: "transfer_path".into(),
                    detail: format!("target path '{to}' already occupied at OAM {l}"),
                });
            }
            if p.name() == from {
                out.set_amplitude(&(Path::new(to), *l), *a)?;
            } else {
                out.set_amplitude(&(p.clone(), *l), *a)?;
            }
        }
        Ok(out)
    }
}

/// One component of a projector state in the circuit JSON encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectorComponent {
    pub path: String,
    pub oam: i32,
    pub re: f64,
    pub im: f64,
}

/// A symbolic optical component with exact operator semantics.
///
/// Angles are radians, OAM shifts are integers, paths are names into the
/// enclosing [`PhotonSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OpticalElement {
    /// OAM-dependent phase `|l> -> exp(i 2 l alpha) |l>` on one path.
    DovePrism { path: String, alpha: f64 },
    /// Spiral phase plate: `|l> -> |l + delta>` on one path.
    Spp { path: String, delta: i32 },
    /// Reflection: `|l> -> |-l>` on one path.
    Mirror { path: String },
    /// Symmetric 50/50 splitter on two paths (transmission `1/sqrt2`,
    /// reflection `i/sqrt2`), with an extra phase `exp(i phase_b)` on the
    /// `path_b` input arm. The phase models the adjustable arm length of a
    /// Mach-Zehnder; `-pi/2` makes the two arms add in phase at `path_a`.
    BeamSplitter {
        path_a: String,
        path_b: String,
        phase_b: f64,
    },
    /// Polarizing beam splitter, polarization abstracted away: the input on
    /// `path_a` is reflected into `path_b` with the OAM sign flip
    /// `|l> -> |-l>`; the input on `path_b` is transmitted into `path_a`
    /// unchanged.
    Pbs { path_a: String, path_b: String },
    /// Sagnac-interferometer parity sorter: even-OAM components of `input`
    /// exit on `even`, odd ones on `odd`, unit phase on both. The output
    /// ports must be unoccupied.
    ParitySorter {
        input: String,
        even: String,
        odd: String,
    },
    /// Recombining parity sorter: even modes on `even_from` and odd modes
    /// on `odd_from` merge deterministically into `output`.
    InverseParitySorter {
        even_from: String,
        odd_from: String,
        output: String,
    },
    /// Projection onto a fixed photon-space state (a contraction).
    Projector { components: Vec<ProjectorComponent> },
}

impl OpticalElement {
    /// Short name for diagnostics.
    pub fn describe(&self) -> String {
        match self {
            OpticalElement::DovePrism { path, alpha } => {
                format!("DovePrism(alpha={alpha:.4}) on {path}")
            }
            OpticalElement::Spp { path, delta } => format!("SPP({delta:+}) on {path}"),
            OpticalElement::Mirror { path } => format!("Mirror on {path}"),
            OpticalElement::BeamSplitter { path_a, path_b, .. } => {
                format!("BeamSplitter({path_a}, {path_b})")
            }
            OpticalElement::Pbs { path_a, path_b } => format!("PBS({path_a}, {path_b})"),
            OpticalElement::ParitySorter { input, even, odd } => {
                format!("ParitySorter({input} -> {even}/{odd})")
            }
            OpticalElement::InverseParitySorter {
                even_from,
                odd_from,
                output,
            } => format!("InverseParitySorter({even_from}/{odd_from} -> {output})"),
            OpticalElement::Projector { .. } => "Projector".into(),
        }
    }

    fn referenced_paths(&self) -> Vec<&str> {
        match self {
            OpticalElement::DovePrism { path, .. }
            | OpticalElement::Spp { path, .. }
            | OpticalElement::Mirror { path } => vec![path],
            OpticalElement::BeamSplitter { path_a, path_b, .. }
            | OpticalElement::Pbs { path_a, path_b } => vec![path_a, path_b],
            OpticalElement::ParitySorter { input, even, odd } => vec![input, even, odd],
            OpticalElement::InverseParitySorter {
                even_from,
                odd_from,
                output,
            } => vec![even_from, odd_from, output],
            OpticalElement::Projector { components } => {
                components.iter().map(|c| c.path.as_str()).collect()
            }
        }
    }
}

/// Why an input basis state is outside an element's domain.
#[derive(Debug, Clone)]
enum BlockReason {
    Overflow { from: i32, to: i32 },
    Conflict { detail: String },
}

impl BlockReason {
    fn into_error(self, element: &OpticalElement, window: (i32, i32)) -> Error {
        match self {
            BlockReason::Overflow { from, to } => Error::WindowOverflow {
                element: element.describe(),
                from,
                to,
                lo: window.0,
                hi: window.1,
            },
            BlockReason::Conflict { detail } => Error::RoutingConflict {
                element: element.describe(),
                detail,
            },
        }
    }
}

/// Dense action of one element: the matrix plus, per input basis state,
/// an optional reason the state is outside the domain (its column is zero).
struct ElementAction {
    matrix: Array2<Complex64>,
    blocked: Vec<Option<BlockReason>>,
}

fn element_action(space: &PhotonSpace, elem: &OpticalElement) -> Result<ElementAction> {
    for p in elem.referenced_paths() {
        if !space.has_path(p) {
            return Err(Error::InvalidParameter(format!(
                "element {} references unknown path '{p}'",
                elem.describe()
            )));
        }
    }
    let n = space.dimension();
    let labels = space.labels();
    let mut matrix = Array2::<Complex64>::zeros((n, n));
    let mut blocked: Vec<Option<BlockReason>> = vec![None; n];

    {
        let mut route = |col: usize, row: usize, amp: Complex64| {
            matrix[(row, col)] += amp;
        };

        for (col, (path, oam)) in labels.iter().enumerate() {
            let p = path.name();
            let l = oam.0;
            match elem {
                OpticalElement::DovePrism { path: dp, alpha } => {
                    let amp = if p == dp {
                        Complex64::from_polar(1.0, 2.0 * l as f64 * alpha)
                    } else {
                        Complex64::ONE
                    };
                    route(col, col, amp);
                }
                OpticalElement::Spp { path: sp, delta } => {
                    if p == sp {
                        let to = l + delta;
                        if space.window_contains(to) {
                            route(col, space.index_of(p, to)?, Complex64::ONE);
                        } else {
                            blocked[col] = Some(BlockReason::Overflow { from: l, to });
                        }
                    } else {
                        route(col, col, Complex64::ONE);
                    }
                }
                OpticalElement::Mirror { path: mp } => {
                    if p == mp {
                        if space.window_contains(-l) {
                            route(col, space.index_of(p, -l)?, Complex64::ONE);
                        } else {
                            blocked[col] = Some(BlockReason::Overflow { from: l, to: -l });
                        }
                    } else {
                        route(col, col, Complex64::ONE);
                    }
                }
                OpticalElement::BeamSplitter {
                    path_a,
                    path_b,
                    phase_b,
                } => {
                    let s = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
                    let r = Complex64::new(0.0, 1.0 / 2f64.sqrt());
                    let arm_phase = Complex64::from_polar(1.0, *phase_b);
                    if p == path_a {
                        route(col, col, s);
                        route(col, space.index_of(path_b, l)?, r);
                    } else if p == path_b {
                        route(col, space.index_of(path_a, l)?, r * arm_phase);
                        route(col, col, s * arm_phase);
                    } else {
                        route(col, col, Complex64::ONE);
                    }
                }
                OpticalElement::Pbs { path_a, path_b } => {
                    if p == path_a {
                        if space.window_contains(-l) {
                            route(col, space.index_of(path_b, -l)?, Complex64::ONE);
                        } else {
                            blocked[col] = Some(BlockReason::Overflow { from: l, to: -l });
                        }
                    } else if p == path_b {
                        route(col, space.index_of(path_a, l)?, Complex64::ONE);
                    } else {
                        route(col, col, Complex64::ONE);
                    }
                }
                OpticalElement::ParitySorter { input, even, odd } => {
                    if p == input {
                        let out = if l.rem_euclid(2) == 0 { even } else { odd };
                        route(col, space.index_of(out, l)?, Complex64::ONE);
                    } else if p == even || p == odd {
                        blocked[col] = Some(BlockReason::Conflict {
                            detail: format!("output port '{p}' occupied at OAM {l}"),
                        });
                    } else {
                        route(col, col, Complex64::ONE);
                    }
                }
                OpticalElement::InverseParitySorter {
                    even_from,
                    odd_from,
                    output,
                } => {
                    let even_mode = l.rem_euclid(2) == 0;
                    if (p == even_from && even_mode) || (p == odd_from && !even_mode) {
                        route(col, space.index_of(output, l)?, Complex64::ONE);
                    } else if p == even_from || p == odd_from {
                        blocked[col] = Some(BlockReason::Conflict {
                            detail: format!(
                                "mode {l} has the wrong parity for recombiner port '{p}'"
                            ),
                        });
                    } else if p == output {
                        blocked[col] = Some(BlockReason::Conflict {
                            detail: format!("output port '{p}' occupied at OAM {l}"),
                        });
                    } else {
                        route(col, col, Complex64::ONE);
                    }
                }
                OpticalElement::Projector { .. } => {
                    // Built as a whole matrix below.
                }
            }
        }
    }

    if let OpticalElement::Projector { components } = elem {
        let mut target = StateVector::zero(labels.clone())?;
        for c in components {
            target.set_amplitude(
                &(Path::new(c.path.clone()), Oam(c.oam)),
                Complex64::new(c.re, c.im),
            )?;
        }
        let target = target
            .normalized()
            .map_err(|_| Error::InvalidParameter("projector state has zero norm".into()))?;
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] = target.amplitudes()[i] * target.amplitudes()[j].conj();
            }
        }
    }

    Ok(ElementAction { matrix, blocked })
}

/// Apply one element to a photon-space state, enforcing domain checks.
///
/// Scans modes in ascending order so the first offending mode is the one
/// reported.
pub fn apply_element(
    space: &PhotonSpace,
    elem: &OpticalElement,
    state: &StateVector<(Path, Oam)>,
) -> Result<StateVector<(Path, Oam)>> {
    if state.labels() != space.labels().as_slice() {
        return Err(Error::BasisMismatch(
            "state does not live in this photon space".into(),
        ));
    }
    let action = element_action(space, elem)?;
    for (i, reason) in action.blocked.iter().enumerate() {
        if state.amplitudes()[i].norm() > tolerances::OCCUPANCY {
            if let Some(r) = reason {
                return Err(r.clone().into_error(elem, space.window()));
            }
        }
    }
    let n = space.dimension();
    let mut out = vec![Complex64::ZERO; n];
    for (j, a) in state.amplitudes().iter().enumerate() {
        if a.norm() == 0.0 {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o += action.matrix[(i, j)] * a;
        }
    }
    StateVector::new(space.labels(), out)
}

/// An ordered element list with a declared input port and post-selection
/// path set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    space: PhotonSpace,
    input_path: String,
    elements: Vec<OpticalElement>,
    post_select: Vec<String>,
}

impl Circuit {
    pub fn new(
        space: PhotonSpace,
        input_path: impl Into<String>,
        elements: Vec<OpticalElement>,
        post_select: Vec<String>,
    ) -> Result<Self> {
        let circuit = Circuit {
            space,
            input_path: input_path.into(),
            elements,
            post_select,
        };
        circuit.validate()?;
        Ok(circuit)
    }

    fn validate(&self) -> Result<()> {
        if !self.space.has_path(&self.input_path) {
            return Err(Error::InvalidParameter(format!(
                "unknown input path '{}'",
                self.input_path
            )));
        }
        if self.post_select.is_empty() {
            return Err(Error::InvalidParameter(
                "circuit declares no post-selection paths".into(),
            ));
        }
        for p in &self.post_select {
            if !self.space.has_path(p) {
                return Err(Error::InvalidParameter(format!(
                    "unknown post-selection path '{p}'"
                )));
            }
        }
        for e in &self.elements {
            for p in e.referenced_paths() {
                if !self.space.has_path(p) {
                    return Err(Error::InvalidParameter(format!(
                        "element {} references unknown path '{p}'",
                        e.describe()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &PhotonSpace {
        &self.space
    }

    pub fn input_path(&self) -> &str {
        &self.input_path
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    pub fn post_select(&self) -> &[String] {
        &self.post_select
    }

    /// Run the circuit and project onto the post-selected paths without
    /// renormalizing. Returns the raw kept component and its squared norm
    /// (the post-selection success probability for a normalized input).
    pub fn apply_unnormalized(
        &self,
        psi: &StateVector<(Path, Oam)>,
    ) -> Result<(StateVector<(Path, Oam)>, f64)> {
        let mut state = psi.clone();
        for elem in &self.elements {
            state = apply_element(&self.space, elem, &state)?;
        }
        let mut kept = StateVector::zero(self.space.labels())?;
        for ((p, l), a) in state.iter() {
            if self.post_select.iter().any(|k| k == p.name()) {
                kept.set_amplitude(&(p.clone(), *l), *a)?;
            }
        }
        let prob = kept.norm_sq();
        Ok((kept, prob))
    }

    /// Run the circuit, post-select, and renormalize. Returns the state and
    /// the success probability.
    pub fn apply(&self, psi: &StateVector<(Path, Oam)>) -> Result<(StateVector<(Path, Oam)>, f64)> {
        let (kept, prob) = self.apply_unnormalized(psi)?;
        if prob <= 1e-300 {
            return Err(Error::ZeroNorm("post-selection".into()));
        }
        Ok((kept.normalized()?, prob))
    }

    /// The circuit as a single post-selected linear map.
    pub fn post_selected_map(&self) -> PostSelectedMap {
        let labels = self.space.labels();
        let n = labels.len();
        let mut columns = Vec::with_capacity(n);
        for j in 0..n {
            let mut basis = StateVector::zero(labels.clone()).expect("non-empty space");
            basis
                .set_amplitude(&labels[j], Complex64::ONE)
                .expect("label from this space");
            match self.apply_unnormalized(&basis) {
                Ok((kept, _)) => {
                    columns.push(ColumnOutcome::Mapped(Array1::from_vec(
                        kept.amplitudes().to_vec(),
                    )));
                }
                Err(e) => columns.push(ColumnOutcome::Blocked(e.to_string())),
            }
        }
        PostSelectedMap { labels, columns }
    }
}

enum ColumnOutcome {
    Mapped(Array1<Complex64>),
    Blocked(String),
}

/// A circuit collapsed to one linear contraction with post-selection.
///
/// Inputs whose trajectory violates an element's domain are blocked: using
/// them with more than negligible amplitude reproduces the underlying error.
pub struct PostSelectedMap {
    labels: Vec<(Path, Oam)>,
    columns: Vec<ColumnOutcome>,
}

impl PostSelectedMap {
    pub fn labels(&self) -> &[(Path, Oam)] {
        &self.labels
    }

    /// The map as a dense matrix; blocked input columns are zero.
    pub fn operator(&self) -> Array2<Complex64> {
        let n = self.labels.len();
        let mut m = Array2::zeros((n, n));
        for (j, col) in self.columns.iter().enumerate() {
            if let ColumnOutcome::Mapped(c) = col {
                for i in 0..n {
                    m[(i, j)] = c[i];
                }
            }
        }
        m
    }

    /// Largest singular value; post-selected circuits are contractions.
    pub fn operator_norm(&self) -> f64 {
        linalg::operator_norm(&self.operator())
    }

    /// Apply without renormalizing; errors if the input occupies a blocked
    /// basis state.
    pub fn apply_raw(&self, psi: &StateVector<(Path, Oam)>) -> Result<StateVector<(Path, Oam)>> {
        if psi.labels() != self.labels.as_slice() {
            return Err(Error::BasisMismatch(
                "state does not live in this photon space".into(),
            ));
        }
        let n = self.labels.len();
        let mut out = vec![Complex64::ZERO; n];
        for (j, a) in psi.amplitudes().iter().enumerate() {
            match &self.columns[j] {
                ColumnOutcome::Mapped(col) => {
                    if a.norm() == 0.0 {
                        continue;
                    }
                    for i in 0..n {
                        out[i] += col[i] * a;
                    }
                }
                ColumnOutcome::Blocked(why) => {
                    if a.norm() > tolerances::OCCUPANCY {
                        return Err(Error::StructuralFailure(format!(
                            "input occupies blocked basis state {}: {why}",
                            self.labels[j].render()
                        )));
                    }
                }
            }
        }
        StateVector::new(self.labels.clone(), out)
    }

    /// Squared norm of the kept component for a normalized input.
    pub fn success_probability(&self, psi: &StateVector<(Path, Oam)>) -> Result<f64> {
        Ok(self.apply_raw(psi)?.norm_sq())
    }

    /// Renormalized post-selected output plus success probability.
    pub fn apply(&self, psi: &StateVector<(Path, Oam)>) -> Result<(StateVector<(Path, Oam)>, f64)> {
        let raw = self.apply_raw(psi)?;
        let prob = raw.norm_sq();
        if prob <= 1e-300 {
            return Err(Error::ZeroNorm("post-selection".into()));
        }
        Ok((raw.normalized()?, prob))
    }
}

/// Diagonal OAM-dependent phase `|l> -> exp(i 2 l alpha) |l>` over bare
/// mode labels, for use outside a path-resolved circuit.
pub fn dove_prism_operator(modes: Vec<Oam>, alpha: f64) -> Operator<Oam> {
    Operator::diagonal(modes, |l| {
        Complex64::from_polar(1.0, 2.0 * l.0 as f64 * alpha)
    })
}
