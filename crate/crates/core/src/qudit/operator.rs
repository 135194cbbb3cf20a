//! Linear operators over labeled bases.

use ndarray::Array2;
use num_complex::Complex64;

use super::label::BasisLabel;
use super::linalg;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::tolerances;

/// A dense operator with explicit basis labels.
///
/// Entry `(i, j)` is `<label_i| O |label_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<L: BasisLabel> {
    labels: Vec<L>,
    matrix: Array2<Complex64>,
}

impl<L: BasisLabel> Operator<L> {
    pub fn new(labels: Vec<L>, matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != labels.len() || matrix.ncols() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} over {} labels",
                matrix.nrows(),
                matrix.ncols(),
                labels.len()
            )));
        }
        Ok(Operator { labels, matrix })
    }

    pub fn identity(labels: Vec<L>) -> Self {
        let n = labels.len();
        Operator {
            labels,
            matrix: Array2::eye(n),
        }
    }

    /// Diagonal operator from per-label factors.
    pub fn diagonal(labels: Vec<L>, factors: impl Fn(&L) -> Complex64) -> Self {
        let n = labels.len();
        let mut matrix = Array2::zeros((n, n));
        for (i, l) in labels.iter().enumerate() {
            matrix[(i, i)] = factors(l);
        }
        Operator { labels, matrix }
    }

    /// Operator mapping each basis label to another basis label, with an
    /// optional phase: `|from> -> factor |to>`.
    pub fn permutation(labels: Vec<L>, map: impl Fn(&L) -> (L, Complex64)) -> Result<Self> {
        let n = labels.len();
        let mut matrix = Array2::zeros((n, n));
        for (j, from) in labels.iter().enumerate() {
            let (to, factor) = map(from);
            let i = labels.iter().position(|l| *l == to).ok_or_else(|| {
                Error::BasisMismatch(format!("image {} not in basis", to.render()))
            })?;
            matrix[(i, j)] = factor;
        }
        Ok(Operator { labels, matrix })
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, row: &L, col: &L) -> Result<Complex64> {
        let i = self.index_of(row)?;
        let j = self.index_of(col)?;
        Ok(self.matrix[(i, j)])
    }

    fn index_of(&self, label: &L) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::BasisMismatch(format!("label {} not in basis", label.render())))
    }

    /// `O |psi>`.
    pub fn apply(&self, psi: &StateVector<L>) -> Result<StateVector<L>> {
        if psi.labels() != self.labels.as_slice() {
            return Err(Error::BasisMismatch(
                "operator and state bases differ".into(),
            ));
        }
        let n = self.dimension();
        let mut out = vec![Complex64::ZERO; n];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..n {
                *o += self.matrix[(i, j)] * psi.amplitudes()[j];
            }
        }
        StateVector::new(self.labels.clone(), out)
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.labels != other.labels {
            return Err(Error::BasisMismatch("operator bases differ".into()));
        }
        Ok(Operator {
            labels: self.labels.clone(),
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dimension();
        let mut matrix = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] = self.matrix[(j, i)].conj();
            }
        }
        Operator {
            labels: self.labels.clone(),
            matrix,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Operator {
            labels: self.labels.clone(),
            matrix: self.matrix.mapv(|x| x * factor),
        }
    }

    pub fn is_unitary(&self) -> bool {
        linalg::unitarity_defect(&self.matrix) <= tolerances::UNITARITY
    }

    /// `self (x) other` with row-major `(A, B)` label ordering.
    pub fn tensor<M: BasisLabel>(&self, other: &Operator<M>) -> Operator<(L, M)> {
        let na = self.dimension();
        let nb = other.dimension();
        let mut labels = Vec::with_capacity(na * nb);
        for a in &self.labels {
            for b in &other.labels {
                labels.push((a.clone(), b.clone()));
            }
        }
        let mut matrix = Array2::zeros((na * nb, na * nb));
        for ia in 0..na {
            for ja in 0..na {
                for ib in 0..nb {
                    for jb in 0..nb {
                        matrix[(ia * nb + ib, ja * nb + jb)] =
                            self.matrix[(ia, ja)] * other.matrix[(ib, jb)];
                    }
                }
            }
        }
        Operator { labels, matrix }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::label::Oam;

    #[test]
    fn permutation_applies_phase() {
        let labels: Vec<Oam> = (0..3).map(Oam).collect();
        let shift = Operator::permutation(labels.clone(), |l| (Oam((l.0 + 1) % 3), Complex64::ONE))
            .unwrap();
        let psi = StateVector::basis_state(labels.clone(), &Oam(2)).unwrap();
        let out = shift.apply(&psi).unwrap();
        assert_eq!(out.amplitude(&Oam(0)), Complex64::ONE);
        assert!(shift.is_unitary());
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let a = Operator::identity(vec![Oam(0), Oam(1)]);
        let b = Operator::identity(vec![Oam(5), Oam(6)]);
        let t = a.tensor(&b);
        assert!(t.is_unitary());
        assert_eq!(t.dimension(), 4);
        assert_eq!(
            t.entry(&(Oam(1), Oam(5)), &(Oam(1), Oam(5))).unwrap(),
            Complex64::ONE
        );
    }
}
