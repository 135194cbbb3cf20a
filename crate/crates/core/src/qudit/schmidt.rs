//! Schmidt decomposition of bipartite pure states.

use ndarray::Array2;
use num_complex::Complex64;

use super::label::BasisLabel;
use super::linalg;
use super::state::{tensor_product, StateVector};
use crate::error::{Error, Result};
use crate::tolerances;

/// The bipartite factorization of a joint basis: subsystem labels whose
/// row-major product is the joint label list.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteShape<A: BasisLabel, B: BasisLabel> {
    a_labels: Vec<A>,
    b_labels: Vec<B>,
}

impl<A: BasisLabel, B: BasisLabel> BipartiteShape<A, B> {
    pub fn new(a_labels: Vec<A>, b_labels: Vec<B>) -> Result<Self> {
        if a_labels.is_empty() || b_labels.is_empty() {
            return Err(Error::EmptyLabelSet);
        }
        Ok(BipartiteShape { a_labels, b_labels })
    }

    pub fn dim_a(&self) -> usize {
        self.a_labels.len()
    }

    pub fn dim_b(&self) -> usize {
        self.b_labels.len()
    }

    pub fn a_labels(&self) -> &[A] {
        &self.a_labels
    }

    pub fn b_labels(&self) -> &[B] {
        &self.b_labels
    }

    /// Row-major joint labels `(a, b)`.
    pub fn joint_labels(&self) -> Vec<(A, B)> {
        let mut out = Vec::with_capacity(self.dim_a() * self.dim_b());
        for a in &self.a_labels {
            for b in &self.b_labels {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }
}

/// Schmidt form `sum_i l_i |u_i>|v_i>` of a normalized bipartite state.
///
/// Coefficients are non-negative and sorted descending; the left and right
/// vectors are orthonormal.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition<A: BasisLabel, B: BasisLabel> {
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<StateVector<A>>,
    pub right_vectors: Vec<StateVector<B>>,
}

impl<A: BasisLabel, B: BasisLabel> SchmidtDecomposition<A, B> {
    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|c| **c > tol).count()
    }

    /// `sum_i l_i |u_i>|v_i>` over the row-major joint basis.
    pub fn reconstruct(&self) -> Result<StateVector<(A, B)>> {
        let mut acc: Option<StateVector<(A, B)>> = None;
        for ((l, u), v) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            let term = tensor_product(u, v).scaled(Complex64::new(*l, 0.0));
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term)?,
            });
        }
        acc.ok_or(Error::EmptyLabelSet)
    }
}

/// Schmidt-decompose `psi` along `shape` via SVD of the coefficient matrix.
///
/// `psi` must be normalized and its basis must equal the row-major product
/// of the shape's subsystem labels.
pub fn schmidt_decompose<A: BasisLabel, B: BasisLabel>(
    psi: &StateVector<(A, B)>,
    shape: &BipartiteShape<A, B>,
) -> Result<SchmidtDecomposition<A, B>> {
    if !psi.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sq: psi.norm_sq(),
        });
    }
    let joint = shape.joint_labels();
    if psi.labels() != joint.as_slice() {
        return Err(Error::BasisMismatch(
            "state basis is not the row-major product of the shape".into(),
        ));
    }
    let (da, db) = (shape.dim_a(), shape.dim_b());
    let mut m = Array2::<Complex64>::zeros((da, db));
    for i in 0..da {
        for j in 0..db {
            m[(i, j)] = psi.amplitudes()[i * db + j];
        }
    }
    let svd = linalg::jacobi_svd(&m);

    // With M = U S V^dagger the right Schmidt kets are the conjugated
    // columns of V: psi = sum_s s_s (U col s) (x) conj(V col s).
    let rank_bound = da.min(db);
    let mut left = Vec::with_capacity(rank_bound);
    let mut right = Vec::with_capacity(rank_bound);
    for s in 0..rank_bound {
        let u_col: Vec<Complex64> = (0..da).map(|i| svd.u[(i, s)]).collect();
        let v_col: Vec<Complex64> = (0..db).map(|j| svd.v[(j, s)].conj()).collect();
        left.push(StateVector::new(shape.a_labels().to_vec(), u_col)?);
        right.push(StateVector::new(shape.b_labels().to_vec(), v_col)?);
    }

    Ok(SchmidtDecomposition {
        coefficients: svd.singular_values,
        left_vectors: left,
        right_vectors: right,
    })
}

/// Debug-style check that a decomposition satisfies its invariants.
pub fn check_schmidt<A: BasisLabel, B: BasisLabel>(
    dec: &SchmidtDecomposition<A, B>,
    psi: &StateVector<(A, B)>,
) -> Result<()> {
    let sum_sq: f64 = dec.coefficients.iter().map(|c| c * c).sum();
    if (sum_sq - 1.0).abs() > tolerances::SCHMIDT {
        return Err(Error::InvalidDensity(format!(
            "Schmidt coefficients sum to {sum_sq}"
        )));
    }
    let recon = dec.reconstruct()?;
    let worst = recon
        .amplitudes()
        .iter()
        .zip(psi.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if worst > tolerances::SCHMIDT {
        return Err(Error::InvalidDensity(format!(
            "reconstruction defect {worst:.3e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::label::Oam;
    use crate::qudit::random;
    use rand::SeedableRng;

    fn shape(da: i32, db: i32) -> BipartiteShape<Oam, Oam> {
        BipartiteShape::new((0..da).map(Oam).collect(), (0..db).map(Oam).collect()).unwrap()
    }

    #[test]
    fn product_state_has_single_coefficient() {
        let sh = shape(2, 2);
        let psi = StateVector::basis_state(sh.joint_labels(), &(Oam(0), Oam(0))).unwrap();
        let dec = schmidt_decompose(&psi, &sh).unwrap();
        assert!((dec.coefficients[0] - 1.0).abs() < 1e-14);
        assert!(dec.coefficients[1].abs() < 1e-14);
        check_schmidt(&dec, &psi).unwrap();
    }

    #[test]
    fn maximally_entangled_four_dims() {
        // psi_00 for D=4 has four Schmidt coefficients of 1/2.
        let sh = shape(4, 4);
        let mut psi = StateVector::zero(sh.joint_labels()).unwrap();
        for k in 0..4 {
            psi.set_amplitude(&(Oam(k), Oam(k)), Complex64::new(0.5, 0.0))
                .unwrap();
        }
        let dec = schmidt_decompose(&psi, &sh).unwrap();
        for c in &dec.coefficients {
            assert!((c - 0.5).abs() < 1e-14);
        }
        check_schmidt(&dec, &psi).unwrap();
    }

    #[test]
    fn two_by_two_by_hand() {
        // (2|00> + |11>)/sqrt5 -> coefficients 2/sqrt5, 1/sqrt5.
        let sh = shape(2, 2);
        let s5 = 5f64.sqrt();
        let mut psi = StateVector::zero(sh.joint_labels()).unwrap();
        psi.set_amplitude(&(Oam(0), Oam(0)), Complex64::new(2.0 / s5, 0.0))
            .unwrap();
        psi.set_amplitude(&(Oam(1), Oam(1)), Complex64::new(1.0 / s5, 0.0))
            .unwrap();
        let dec = schmidt_decompose(&psi, &sh).unwrap();
        assert!((dec.coefficients[0] - 2.0 / s5).abs() < 1e-14);
        assert!((dec.coefficients[1] - 1.0 / s5).abs() < 1e-14);
        check_schmidt(&dec, &psi).unwrap();
    }

    #[test]
    fn rejects_unnormalized_input() {
        let sh = shape(2, 2);
        let psi = StateVector::new(sh.joint_labels(), vec![Complex64::new(2.0, 0.0); 4]).unwrap();
        assert!(matches!(
            schmidt_decompose(&psi, &sh),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn random_states_reconstruct() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        for (da, db) in [(2, 2), (3, 4), (4, 4), (5, 3), (6, 6)] {
            let sh = shape(da, db);
            for _ in 0..50 {
                let psi = random::random_state(sh.joint_labels(), &mut rng);
                let dec = schmidt_decompose(&psi, &sh).unwrap();
                check_schmidt(&dec, &psi).unwrap();
            }
        }
    }
}
