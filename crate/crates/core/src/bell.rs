//! The D-dimensional Bell basis and the generalized Pauli gates that
//! navigate it.
//!
//! The basis states are
//!
//! ```text
//! |psi_mn> = (1/sqrt D) sum_k exp(i 2 pi n k / D) |k>_A |k (+) m>_B
//! ```
//!
//! with `k (+) m = (k + m) mod D`. The mode-shift class `m` and the phase
//! index `n` each run over `0..D`, giving `D^2` mutually orthogonal
//! maximally entangled states. Starting from `psi_00`, a phase gate `Z^n`
//! on photon A and a cyclic gate `X^m` on photon B reach every state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{DensityOperator, Oam, Operator, StateVector};

/// Bijection between physical OAM labels and computational indices
/// `k = l - lowest_oam`.
///
/// The experiment uses the window `l in {-2..1}` for `D = 4`; other
/// dimensions default to a window roughly centered on zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeSpace {
    dimension: usize,
    lowest_oam: i32,
}

impl ModeSpace {
    pub fn new(dimension: usize, lowest_oam: i32) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidParameter(format!(
                "mode space dimension must be >= 2, got {dimension}"
            )));
        }
        Ok(ModeSpace {
            dimension,
            lowest_oam,
        })
    }

    /// Default window for a dimension: `lowest_oam = -(D / 2)`.
    pub fn for_dimension(dimension: usize) -> Result<Self> {
        ModeSpace::new(dimension, -(dimension as i32 / 2))
    }

    /// The four-mode window `{-2..1}` used throughout the experiment.
    pub fn four_dim() -> Self {
        ModeSpace {
            dimension: 4,
            lowest_oam: -2,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn lowest_oam(&self) -> i32 {
        self.lowest_oam
    }

    pub fn highest_oam(&self) -> i32 {
        self.lowest_oam + self.dimension as i32 - 1
    }

    /// OAM labels in index order `k = 0..D`.
    pub fn oam_labels(&self) -> Vec<Oam> {
        (0..self.dimension as i32)
            .map(|k| Oam(self.lowest_oam + k))
            .collect()
    }

    /// Row-major two-photon labels.
    pub fn joint_labels(&self) -> Vec<(Oam, Oam)> {
        let single = self.oam_labels();
        let mut out = Vec::with_capacity(single.len() * single.len());
        for a in &single {
            for b in &single {
                out.push((*a, *b));
            }
        }
        out
    }

    pub fn index_of(&self, mode: Oam) -> Result<usize> {
        let k = mode.0 - self.lowest_oam;
        if k < 0 || k >= self.dimension as i32 {
            return Err(Error::BasisMismatch(format!(
                "OAM {} outside window [{}, {}]",
                mode.0,
                self.lowest_oam,
                self.highest_oam()
            )));
        }
        Ok(k as usize)
    }

    pub fn oam_at(&self, index: usize) -> Result<Oam> {
        if index >= self.dimension {
            return Err(Error::DimensionMismatch(format!(
                "index {index} outside 0..{}",
                self.dimension
            )));
        }
        Ok(Oam(self.lowest_oam + index as i32))
    }

    /// `k (+) shift` in OAM labels.
    pub fn cycled(&self, mode: Oam, shift: i64) -> Result<Oam> {
        let k = self.index_of(mode)? as i64;
        let d = self.dimension as i64;
        let k2 = (k + shift).rem_euclid(d);
        self.oam_at(k2 as usize)
    }
}

/// Index `(m, n)` of one of the `D^2` Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BellLabel {
    dimension: usize,
    m: usize,
    n: usize,
}

impl BellLabel {
    pub fn new(dimension: usize, m: usize, n: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidParameter(format!(
                "Bell dimension must be >= 2, got {dimension}"
            )));
        }
        if m >= dimension || n >= dimension {
            return Err(Error::InvalidParameter(format!(
                "Bell label (m={m}, n={n}) outside [0, {dimension})"
            )));
        }
        Ok(BellLabel { dimension, m, n })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn mode_shift(&self) -> usize {
        self.m
    }

    pub fn phase_index(&self) -> usize {
        self.n
    }

    /// All labels of a dimension in `(m, n)` row-major order.
    pub fn all(dimension: usize) -> Vec<BellLabel> {
        let mut out = Vec::with_capacity(dimension * dimension);
        for m in 0..dimension {
            for n in 0..dimension {
                out.push(BellLabel { dimension, m, n });
            }
        }
        out
    }
}

impl std::fmt::Display for BellLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "psi_{}{}", self.m, self.n)
    }
}

fn check_dimensions(space: &ModeSpace, label: &BellLabel) -> Result<()> {
    if space.dimension() != label.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "mode space dimension {} vs Bell label dimension {}",
            space.dimension(),
            label.dimension()
        )));
    }
    Ok(())
}

/// The Bell state `|psi_mn>` over the space's OAM labels.
pub fn bell_state(space: &ModeSpace, label: &BellLabel) -> Result<StateVector<(Oam, Oam)>> {
    check_dimensions(space, label)?;
    let d = space.dimension();
    let mut psi = StateVector::zero(space.joint_labels())?;
    let norm = 1.0 / (d as f64).sqrt();
    for k in 0..d {
        let a = space.oam_at(k)?;
        let b = space.oam_at((k + label.m) % d)?;
        let phase = 2.0 * std::f64::consts::PI * (label.n * k) as f64 / d as f64;
        psi.set_amplitude(&(a, b), Complex64::from_polar(norm, phase))?;
    }
    Ok(psi)
}

/// Cyclic mode-shift gate `X^power`: `|k> -> |k (+) power>`, `X^D = 1`.
pub fn pauli_x(space: &ModeSpace, power: i64) -> Operator<Oam> {
    Operator::permutation(space.oam_labels(), |l| {
        (
            space.cycled(*l, power).expect("label from this space"),
            Complex64::ONE,
        )
    })
    .expect("cyclic image stays in the basis")
}

/// Phase gate `Z^power`: `|k> -> exp(i 2 pi k power / D) |k>`, `Z^D = 1`.
pub fn pauli_z(space: &ModeSpace, power: i64) -> Operator<Oam> {
    let d = space.dimension() as f64;
    Operator::diagonal(space.oam_labels(), |l| {
        let k = (l.0 - space.lowest_oam()) as f64;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k * power as f64 / d)
    })
}

/// Generate `|psi_mn>` from the seed `|psi_00>` by local gates:
/// `Z^n` on photon A and `X^m` on photon B.
///
/// The seed must be `psi_00` within the global-phase tolerance; the result
/// equals `bell_state(label)` up to a global phase.
pub fn generate_bell(
    seed: &StateVector<(Oam, Oam)>,
    space: &ModeSpace,
    label: &BellLabel,
) -> Result<StateVector<(Oam, Oam)>> {
    check_dimensions(space, label)?;
    let psi00 = bell_state(space, &BellLabel::new(space.dimension(), 0, 0)?)?;
    if !seed.equal_up_to_global_phase(&psi00)? {
        return Err(Error::ContractViolation(
            "generate_bell seed is not psi_00".into(),
        ));
    }
    let local = pauli_z(space, label.n as i64).tensor(&pauli_x(space, label.m as i64));
    local.apply(seed)
}

/// Overlap matrix `|<target_j|state_i>|^2` for pure states.
///
/// Rows index generated states, columns index ideal targets.
pub fn overlap_matrix(
    states: &[StateVector<(Oam, Oam)>],
    targets: &[StateVector<(Oam, Oam)>],
) -> Result<ndarray::Array2<f64>> {
    let mut out = ndarray::Array2::zeros((states.len(), targets.len()));
    for (i, s) in states.iter().enumerate() {
        for (j, t) in targets.iter().enumerate() {
            out[(i, j)] = t.overlap(s)?;
        }
    }
    Ok(out)
}

/// Overlap matrix `Tr(rho_i P_j)` for density-operator inputs.
pub fn overlap_matrix_density(
    states: &[DensityOperator<(Oam, Oam)>],
    targets: &[StateVector<(Oam, Oam)>],
) -> Result<ndarray::Array2<f64>> {
    let mut out = ndarray::Array2::zeros((states.len(), targets.len()));
    for (i, rho) in states.iter().enumerate() {
        for (j, t) in targets.iter().enumerate() {
            out[(i, j)] = rho.expectation(t)?;
        }
    }
    Ok(out)
}

/// Behaviour of a Bell state under exchange of the two photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Symmetric,
    Antisymmetric,
    Neither,
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SymmetryClass::Symmetric => "symmetric",
            SymmetryClass::Antisymmetric => "antisymmetric",
            SymmetryClass::Neither => "neither",
        };
        write!(f, "{s}")
    }
}

/// The swap `|a, b> -> |b, a>` on the two-photon basis.
pub fn exchange_operator(space: &ModeSpace) -> Operator<(Oam, Oam)> {
    Operator::permutation(space.joint_labels(), |(a, b)| ((*b, *a), Complex64::ONE))
        .expect("swap stays in the basis")
}

/// Classify `psi_mn` under photon exchange.
pub fn symmetry_class(space: &ModeSpace, label: &BellLabel) -> Result<SymmetryClass> {
    let psi = bell_state(space, label)?;
    let swapped = exchange_operator(space).apply(&psi)?;
    let overlap = psi.inner(&swapped)?;
    // Exchange eigenstates have <psi|S|psi> = +/-1; everything else
    // in this basis gives 0 exactly.
    if (overlap.re - 1.0).abs() < 1e-9 && overlap.im.abs() < 1e-9 {
        Ok(SymmetryClass::Symmetric)
    } else if (overlap.re + 1.0).abs() < 1e-9 && overlap.im.abs() < 1e-9 {
        Ok(SymmetryClass::Antisymmetric)
    } else {
        Ok(SymmetryClass::Neither)
    }
}

/// Counts of (symmetric, antisymmetric, neither) over all `D^2` labels.
pub fn symmetry_census(space: &ModeSpace) -> Result<(usize, usize, usize)> {
    let mut counts = (0, 0, 0);
    for label in BellLabel::all(space.dimension()) {
        match symmetry_class(space, &label)? {
            SymmetryClass::Symmetric => counts.0 += 1,
            SymmetryClass::Antisymmetric => counts.1 += 1,
            SymmetryClass::Neither => counts.2 += 1,
        }
    }
    Ok(counts)
}

/// `|<a|b>| >= 1 - tol` check used by equivalence tests; states must share
/// a basis and be normalized.
pub fn overlap_modulus(a: &StateVector<(Oam, Oam)>, b: &StateVector<(Oam, Oam)>) -> Result<f64> {
    Ok(a.inner(b)?.norm())
}
