//! Mixed states and fidelity with pure targets.

use ndarray::Array2;
use num_complex::Complex64;

use super::label::BasisLabel;
use super::linalg;
use super::operator::Operator;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::tolerances;

/// A density operator over a labeled basis.
///
/// Validity means Hermitian within [`tolerances::HERMITICITY`], unit trace
/// within [`tolerances::TRACE`], and eigenvalues above
/// [`tolerances::EIGENVALUE_FLOOR`]. Channels constructed analytically can
/// leave eigenvalues slightly negative from round-off; anything below the
/// floor is a real defect.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<L: BasisLabel> {
    labels: Vec<L>,
    matrix: Array2<Complex64>,
}

impl<L: BasisLabel> DensityOperator<L> {
    pub fn new(labels: Vec<L>, matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != labels.len() || matrix.ncols() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} over {} labels",
                matrix.nrows(),
                matrix.ncols(),
                labels.len()
            )));
        }
        Ok(DensityOperator { labels, matrix })
    }

    /// `|psi><psi|` for a normalized pure state.
    pub fn from_pure(psi: &StateVector<L>) -> Result<Self> {
        if !psi.is_normalized() {
            return Err(Error::NotNormalized {
                norm_sq: psi.norm_sq(),
            });
        }
        let n = psi.dimension();
        let mut matrix = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] = psi.amplitudes()[i] * psi.amplitudes()[j].conj();
            }
        }
        Ok(DensityOperator {
            labels: psi.labels().to_vec(),
            matrix,
        })
    }

    pub fn maximally_mixed(labels: Vec<L>) -> Self {
        let n = labels.len();
        let matrix = Array2::eye(n).mapv(|x: Complex64| x / n as f64);
        DensityOperator { labels, matrix }
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dimension()).map(|i| self.matrix[(i, i)]).sum()
    }

    pub fn entry(&self, row: &L, col: &L) -> Result<Complex64> {
        let i = self.index_of(row)?;
        let j = self.index_of(col)?;
        Ok(self.matrix[(i, j)])
    }

    pub fn index_of(&self, label: &L) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::BasisMismatch(format!("label {} not in basis", label.render())))
    }

    /// `<w| rho |w>`, clamped of its ~1e-16 imaginary round-off.
    pub fn expectation(&self, w: &StateVector<L>) -> Result<f64> {
        if w.labels() != self.labels.as_slice() {
            return Err(Error::BasisMismatch(
                "state and density operator bases differ".into(),
            ));
        }
        let n = self.dimension();
        let mut acc = Complex64::ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += w.amplitudes()[i].conj() * self.matrix[(i, j)] * w.amplitudes()[j];
            }
        }
        Ok(acc.re)
    }

    /// `U rho U^dagger`.
    pub fn conjugated_by(&self, u: &Operator<L>) -> Result<Self> {
        if u.labels() != self.labels.as_slice() {
            return Err(Error::BasisMismatch(
                "operator and density operator bases differ".into(),
            ));
        }
        let um = u.matrix();
        let tmp = um.dot(&self.matrix);
        let mut udag = um.clone();
        let n = self.dimension();
        for i in 0..n {
            for j in 0..n {
                udag[(i, j)] = um[(j, i)].conj();
            }
        }
        Ok(DensityOperator {
            labels: self.labels.clone(),
            matrix: tmp.dot(&udag),
        })
    }

    /// Convex mixture `(1 - w) self + w other`.
    pub fn mixed_with(&self, other: &Self, w: f64) -> Result<Self> {
        if self.labels != other.labels {
            return Err(Error::BasisMismatch("density operator bases differ".into()));
        }
        let matrix = self.matrix.mapv(|x| x * (1.0 - w)) + other.matrix.mapv(|x| x * w);
        Ok(DensityOperator {
            labels: self.labels.clone(),
            matrix,
        })
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dimension();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.matrix)[0]
    }

    /// Check trace, Hermiticity and positivity within the crate tolerances.
    pub fn validate(&self) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > tolerances::HERMITICITY {
            return Err(Error::InvalidDensity(format!("hermiticity defect {h:.3e}")));
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > tolerances::TRACE || t.im.abs() > tolerances::TRACE {
            return Err(Error::InvalidDensity(format!("trace {t}")));
        }
        let min = self.min_eigenvalue();
        if min < tolerances::EIGENVALUE_FLOOR {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }
}

/// `F = <target| rho |target>`, real in [0, 1] up to round-off.
pub fn fidelity_pure<L: BasisLabel>(
    rho: &DensityOperator<L>,
    target: &StateVector<L>,
) -> Result<f64> {
    if !target.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sq: target.norm_sq(),
        });
    }
    let f = rho.expectation(target)?;
    if !(-1e-10..=1.0 + 1e-10).contains(&f) {
        return Err(Error::InvalidDensity(format!(
            "fidelity {f} outside [0, 1]"
        )));
    }
    Ok(f.clamp(0.0, 1.0))
}
