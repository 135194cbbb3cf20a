//! Pure states over labeled bases.

use num_complex::Complex64;

use super::label::BasisLabel;
use crate::error::{Error, Result};
use crate::tolerances;

/// A pure state: one complex amplitude per basis label.
///
/// The basis is an ordered list of distinct labels; two states interoperate
/// only when their ordered label lists agree exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<L: BasisLabel> {
    labels: Vec<L>,
    amplitudes: Vec<Complex64>,
}

impl<L: BasisLabel> StateVector<L> {
    /// Build a state from labels and amplitudes of equal length.
    pub fn new(labels: Vec<L>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if labels.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels vs {} amplitudes",
                labels.len(),
                amplitudes.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::BasisMismatch("duplicate basis labels".into()));
        }
        Ok(StateVector { labels, amplitudes })
    }

    /// The basis state `|which>` over the given labels.
    pub fn basis_state(labels: Vec<L>, which: &L) -> Result<Self> {
        let mut amplitudes = vec![Complex64::ZERO; labels.len()];
        let idx = labels.iter().position(|l| l == which).ok_or_else(|| {
            Error::BasisMismatch(format!("label {} not in basis", which.render()))
        })?;
        amplitudes[idx] = Complex64::ONE;
        StateVector::new(labels, amplitudes)
    }

    /// Zero vector over the given labels.
    pub fn zero(labels: Vec<L>) -> Result<Self> {
        let n = labels.len();
        StateVector::new(labels, vec![Complex64::ZERO; n])
    }

    pub fn dimension(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude on `label`, or zero if the label is not in the basis.
    pub fn amplitude(&self, label: &L) -> Complex64 {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.amplitudes[i])
            .unwrap_or(Complex64::ZERO)
    }

    pub fn set_amplitude(&mut self, label: &L, value: Complex64) -> Result<()> {
        let idx = self.labels.iter().position(|l| l == label).ok_or_else(|| {
            Error::BasisMismatch(format!("label {} not in basis", label.render()))
        })?;
        self.amplitudes[idx] = value;
        Ok(())
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= tolerances::NORMALIZATION
    }

    /// Rescaled copy with unit norm; errors on (numerically) zero input.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sq();
        if n2 <= 1e-300 {
            return Err(Error::ZeroNorm("normalization".into()));
        }
        let s = 1.0 / n2.sqrt();
        let mut out = self.clone();
        for a in &mut out.amplitudes {
            *a *= s;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.amplitudes {
            *a *= factor;
        }
        out
    }

    /// Componentwise sum; bases must agree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_basis(other)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a + b)
            .collect();
        Ok(StateVector {
            labels: self.labels.clone(),
            amplitudes,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &Complex64)> {
        self.labels.iter().zip(self.amplitudes.iter())
    }

    pub(crate) fn check_same_basis(&self, other: &Self) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::BasisMismatch(
                "states are defined over different ordered bases".into(),
            ));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_basis(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Physical equality: both normalized and `|<a|b>| >= 1 - tol`.
    ///
    /// Circuits add uncontrolled global phases, so state comparisons always
    /// go through the overlap modulus.
    pub fn equal_up_to_global_phase(&self, other: &Self) -> Result<bool> {
        for s in [self, other] {
            if !s.is_normalized() {
                return Err(Error::NotNormalized {
                    norm_sq: s.norm_sq(),
                });
            }
        }
        Ok(self.inner(other)?.norm() >= 1.0 - tolerances::GLOBAL_PHASE)
    }

    /// Drop all amplitudes outside `keep`, preserving basis order.
    ///
    /// Returns the unnormalized remainder together with its squared norm
    /// (the probability of passing the corresponding filter when the input
    /// is normalized).
    pub fn project_to_subspace(&self, keep: &[L]) -> Result<(Self, f64)> {
        if keep.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        for k in keep {
            if !self.labels.contains(k) {
                return Err(Error::BasisMismatch(format!(
                    "label {} not in basis",
                    k.render()
                )));
            }
        }
        let mut labels = Vec::new();
        let mut amplitudes = Vec::new();
        for (l, a) in self.iter() {
            if keep.contains(l) {
                labels.push(l.clone());
                amplitudes.push(*a);
            }
        }
        let kept = StateVector { labels, amplitudes };
        let norm_sq = kept.norm_sq();
        Ok((kept, norm_sq))
    }

    /// Re-express the state over `target` labels (a permutation of the
    /// current basis).
    pub fn reordered(&self, target: &[L]) -> Result<Self> {
        if target.len() != self.labels.len() {
            return Err(Error::BasisMismatch("reorder changes dimension".into()));
        }
        let mut amplitudes = Vec::with_capacity(target.len());
        for l in target {
            let idx = self.labels.iter().position(|x| x == l).ok_or_else(|| {
                Error::BasisMismatch(format!("label {} not in basis", l.render()))
            })?;
            amplitudes.push(self.amplitudes[idx]);
        }
        Ok(StateVector {
            labels: target.to_vec(),
            amplitudes,
        })
    }
}

/// `|a> (x) |b>`, with labels ordered row-major in `(A, B)`.
pub fn tensor_product<A: BasisLabel, B: BasisLabel>(
    a: &StateVector<A>,
    b: &StateVector<B>,
) -> StateVector<(A, B)> {
    let mut labels = Vec::with_capacity(a.dimension() * b.dimension());
    let mut amplitudes = Vec::with_capacity(a.dimension() * b.dimension());
    for (la, aa) in a.iter() {
        for (lb, ab) in b.iter() {
            labels.push((la.clone(), lb.clone()));
            amplitudes.push(aa * ab);
        }
    }
    StateVector { labels, amplitudes }
}

/// `<a|b>` over identical ordered bases.
pub fn inner_product<L: BasisLabel>(a: &StateVector<L>, b: &StateVector<L>) -> Result<Complex64> {
    a.inner(b)
}
