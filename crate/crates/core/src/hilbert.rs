//! Dense complex linear algebra for small bipartite Hilbert spaces.
//!
//! States and operators are plain dense objects over `Complex64`. Composite
//! indices follow the A-major convention throughout the crate: the basis
//! vector `|i⟩_A ⊗ |j⟩_B` sits at composite index `i * d_B + j`. The same
//! convention defines the amplitude-matrix reshape used by the Schmidt
//! decomposition, so `tensor` and `schmidt` agree by construction.
//!
//! Everything here is immutable after construction and all operations are
//! pure functions, so values can be shared and sent across threads freely.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex matrix, the carrier for all operators.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// One of the two parties holding a subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    A,
    B,
}

impl std::fmt::Display for Party {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Party::A => "A",
            Party::B => "B",
        })
    }
}

fn all_finite<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> bool {
    entries
        .into_iter()
        .all(|c| c.re.is_finite() && c.im.is_finite())
}

fn check_factor_dims(dim: usize, factor_dims: Option<(usize, usize)>) -> Result<()> {
    if let Some((da, db)) = factor_dims {
        if da == 0 || db == 0 || da * db != dim {
            return Err(Error::InvalidState(format!(
                "factor dims {}x{} do not multiply to {}",
                da, db, dim
            )));
        }
        if da > tol::DIM_CAP || db > tol::DIM_CAP {
            return Err(Error::InvalidState(format!(
                "factor dims {}x{} exceed the per-party cap of {}",
                da,
                db,
                tol::DIM_CAP
            )));
        }
    }
    Ok(())
}

/// Identity matrix of the given dimension.
pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product of two operators, A-major.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Entrywise Hermiticity test: `|m - m†| <= eps` everywhere.
pub fn is_hermitian(m: &CMatrix, eps: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > eps {
                return false;
            }
        }
    }
    true
}

/// Tr(a b) for square matrices of equal dimension.
pub fn product_trace(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Normalised pure state on a small Hilbert space.
///
/// When `factor_dims = (d_A, d_B)` is present the state lives on a bipartite
/// space and `d_A * d_B` must equal the vector dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    factor_dims: Option<(usize, usize)>,
}

impl StateVector {
    /// Builds a state from amplitudes that are already normalised to
    /// within [`tol::EPS`].
    pub fn new(amplitudes: Vec<Complex64>, factor_dims: Option<(usize, usize)>) -> Result<Self> {
        let v = CVector::from_vec(amplitudes);
        if v.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        if !all_finite(v.iter()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        if v.len() > tol::DIM_CAP * tol::DIM_CAP {
            return Err(Error::InvalidState(format!(
                "dimension {} exceeds the supported maximum {}",
                v.len(),
                tol::DIM_CAP * tol::DIM_CAP
            )));
        }
        let norm_sq: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol::EPS {
            return Err(Error::InvalidState(format!(
                "state not normalised: sum of squared amplitudes is {}",
                norm_sq
            )));
        }
        check_factor_dims(v.len(), factor_dims)?;
        Ok(StateVector {
            amplitudes: v,
            factor_dims,
        })
    }

    /// Builds a state from arbitrary non-zero amplitudes, normalising them.
    pub fn normalized(
        amplitudes: Vec<Complex64>,
        factor_dims: Option<(usize, usize)>,
    ) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < tol::EPS {
            return Err(Error::InvalidState(
                "cannot normalise a (near-)zero state vector".into(),
            ));
        }
        let scaled = amplitudes.into_iter().map(|c| c / norm).collect();
        Self::new(scaled, factor_dims)
    }

    /// Computational basis vector `|index⟩` on a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {} out of range {}", index, dim);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector {
            amplitudes: CVector::from_vec(amps),
            factor_dims: None,
        }
    }

    /// Same state with bipartite structure attached.
    pub fn with_factor_dims(mut self, dims: (usize, usize)) -> Result<Self> {
        check_factor_dims(self.dim(), Some(dims))?;
        self.factor_dims = Some(dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn factor_dims(&self) -> Option<(usize, usize)> {
        self.factor_dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Reshapes the amplitudes into the `d_A x d_B` matrix
    /// `M[i, j] = ⟨i ⊗ j | ψ⟩`. Requires factor dims.
    pub fn amplitude_matrix(&self) -> Result<CMatrix> {
        let (da, db) = self.factor_dims.ok_or_else(|| {
            Error::Precondition("state carries no factor dims; cannot reshape".into())
        })?;
        Ok(CMatrix::from_row_slice(da, db, self.amplitudes.as_slice()))
    }

    /// Schmidt decomposition across the A/B split.
    ///
    /// The rank counts singular values above [`tol::EPS_SCHMIDT`]; rank 1
    /// identifies product states.
    pub fn schmidt(&self) -> Result<Schmidt> {
        let m = self.amplitude_matrix()?;
        let svd = m.svd(false, false);
        let mut coefficients: Vec<f64> = svd.singular_values.iter().copied().collect();
        coefficients.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
        let rank = coefficients
            .iter()
            .take_while(|&&s| s > tol::EPS_SCHMIDT)
            .count();
        Ok(Schmidt { coefficients, rank })
    }
}

/// Singular values of the amplitude matrix, largest first.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub rank: usize,
}

/// Tensor product of two pure states; the result records
/// `factor_dims = (a.dim, b.dim)`.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let amps = a.amplitudes.kronecker(&b.amplitudes);
    check_factor_dims(amps.len(), Some((a.dim(), b.dim())))?;
    Ok(StateVector {
        amplitudes: CVector::from_vec(amps.as_slice().to_vec()),
        factor_dims: Some((a.dim(), b.dim())),
    })
}

/// Inner product `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            context: "inner product",
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.amplitudes.dotc(&b.amplitudes))
}

/// Rank-1 projector `|ψ⟩⟨ψ|`.
pub fn projector(psi: &StateVector) -> CMatrix {
    let v = &psi.amplitudes;
    CMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
}

/// Density operator: Hermitian, positive semidefinite, unit trace, each
/// within [`tol::EPS`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    factor_dims: Option<(usize, usize)>,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, factor_dims: Option<(usize, usize)>) -> Result<Self> {
        let rho = DensityOperator {
            matrix,
            factor_dims,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|`; inherits the state's factor dims.
    pub fn from_pure(psi: &StateVector) -> Self {
        DensityOperator {
            matrix: projector(psi),
            factor_dims: psi.factor_dims,
        }
    }

    /// `𝟙/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let p = Complex64::new(1.0 / dim as f64, 0.0);
        DensityOperator {
            matrix: identity(dim) * p,
            factor_dims: None,
        }
    }

    /// Internal constructor for matrices that are valid by construction
    /// (projections, renormalised branch outputs, partial traces).
    pub(crate) fn trusted(matrix: CMatrix, factor_dims: Option<(usize, usize)>) -> Self {
        DensityOperator {
            matrix,
            factor_dims,
        }
    }

    /// Checks all density-operator invariants.
    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() || m.is_empty() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        if !all_finite(m.iter()) {
            return Err(Error::InvalidState("non-finite matrix entry".into()));
        }
        check_factor_dims(m.nrows(), self.factor_dims)?;
        if !is_hermitian(m, tol::EPS) {
            return Err(Error::InvalidState("density matrix not Hermitian".into()));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > tol::EPS || trace.im.abs() > tol::EPS {
            return Err(Error::InvalidState(format!(
                "density matrix trace is {}, not 1",
                trace
            )));
        }
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let eigenvalues = herm.symmetric_eigen().eigenvalues;
        if let Some(min) = eigenvalues.iter().cloned().reduce(f64::min) {
            if min < -tol::EPS {
                return Err(Error::InvalidState(format!(
                    "density matrix not positive semidefinite: min eigenvalue {}",
                    min
                )));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn factor_dims(&self) -> Option<(usize, usize)> {
        self.factor_dims
    }

    /// Same operator with bipartite structure attached.
    pub fn with_factor_dims(mut self, dims: (usize, usize)) -> Result<Self> {
        check_factor_dims(self.dim(), Some(dims))?;
        self.factor_dims = Some(dims);
        Ok(self)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Reduced state of the kept party. Requires factor dims; the result
    /// carries none (it is single-party).
    pub fn partial_trace(&self, keep: Party) -> Result<DensityOperator> {
        let (da, db) = self.factor_dims.ok_or_else(|| {
            Error::Precondition("state carries no factor dims; cannot take partial trace".into())
        })?;
        let m = &self.matrix;
        let out = match keep {
            Party::A => CMatrix::from_fn(da, da, |i, ip| {
                (0..db).map(|j| m[(i * db + j, ip * db + j)]).sum()
            }),
            Party::B => CMatrix::from_fn(db, db, |j, jp| {
                (0..da).map(|i| m[(i * db + j, i * db + jp)]).sum()
            }),
        };
        Ok(DensityOperator::trusted(out, None))
    }
}

/// One point of a merged spectrum: an eigenvalue together with the
/// projector onto its eigenspace.
#[derive(Debug, Clone)]
pub struct EigenSpace {
    pub value: f64,
    pub projector: CMatrix,
}

impl EigenSpace {
    /// Dimension of the eigenspace (the projector's rank).
    pub fn rank(&self) -> usize {
        self.projector.trace().re.round() as usize
    }
}

/// Hermitian operator with cached spectral decomposition. Eigenvalues
/// within [`tol::EPS_SPEC`] of each other are merged into one degenerate
/// eigenspace, since value assignment concerns eigenspaces.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: CMatrix,
    spectrum: Vec<EigenSpace>,
}

impl Observable {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        spectral_decompose(&matrix)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues ascending, one entry per merged eigenspace.
    pub fn spectrum(&self) -> &[EigenSpace] {
        &self.spectrum
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let mut sum = CMatrix::zeros(n, n);
        for line in &self.spectrum {
            let p = &line.projector;
            let idem = p * p - p;
            if idem.iter().any(|c| c.norm() > tol::EPS) {
                return Err(Error::Internal("eigenprojector not idempotent".into()));
            }
            sum += p;
        }
        if (&sum - identity(n)).iter().any(|c| c.norm() > tol::EPS) {
            return Err(Error::Internal(
                "eigenprojectors do not sum to the identity".into(),
            ));
        }
        for (i, a) in self.spectrum.iter().enumerate() {
            for b in self.spectrum.iter().skip(i + 1) {
                let cross = &a.projector * &b.projector;
                if cross.iter().any(|c| c.norm() > tol::EPS) {
                    return Err(Error::Internal("eigenprojectors not orthogonal".into()));
                }
            }
        }
        let mut recon = CMatrix::zeros(n, n);
        for line in &self.spectrum {
            recon += &line.projector * Complex64::new(line.value, 0.0);
        }
        if (&recon - &self.matrix).iter().any(|c| c.norm() > tol::EPS_RECON) {
            return Err(Error::Internal(
                "spectral reconstruction does not reproduce the input".into(),
            ));
        }
        Ok(())
    }
}

/// Spectral decomposition of a Hermitian matrix into merged eigenspaces.
///
/// Adjacent eigenvalues whose gap is at most [`tol::EPS_SPEC`] fall into
/// the same eigenspace; the reported value is the mean over the group.
pub fn spectral_decompose(m: &CMatrix) -> Result<Observable> {
    if !m.is_square() || m.is_empty() {
        return Err(Error::InvalidState("observable must be square".into()));
    }
    if !all_finite(m.iter()) {
        return Err(Error::InvalidState("non-finite matrix entry".into()));
    }
    if !is_hermitian(m, tol::EPS) {
        return Err(Error::InvalidState("observable not Hermitian".into()));
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let n = m.nrows();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .expect("eigenvalues are finite")
    });

    let mut spectrum: Vec<EigenSpace> = Vec::new();
    let mut group: Vec<usize> = Vec::new();
    let flush = |group: &mut Vec<usize>, spectrum: &mut Vec<EigenSpace>| {
        if group.is_empty() {
            return;
        }
        let value = group.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / group.len() as f64;
        let mut projector = CMatrix::zeros(n, n);
        for &k in group.iter() {
            let v = eig.eigenvectors.column(k);
            projector += CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        }
        spectrum.push(EigenSpace { value, projector });
        group.clear();
    };

    for &k in &order {
        if let Some(&last) = group.last() {
            if eig.eigenvalues[k] - eig.eigenvalues[last] > tol::EPS_SPEC {
                flush(&mut group, &mut spectrum);
            }
        }
        group.push(k);
    }
    flush(&mut group, &mut spectrum);

    let obs = Observable {
        matrix: m.clone(),
        spectrum,
    };
    obs.validate()?;
    Ok(obs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// (|01⟩ - |10⟩)/√2 on 2x2.
    fn psi_minus() -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::new(vec![r(0.0), r(s), r(-s), r(0.0)], Some((2, 2))).unwrap()
    }

    #[test]
    fn tensor_basis_bookkeeping() {
        let a = StateVector::basis(2, 0);
        let b = StateVector::basis(2, 1);
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.dim(), 4);
        assert_eq!(t.factor_dims(), Some((2, 2)));
        for k in 0..4 {
            let expect = if k == 1 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(t.amplitude(k).re, expect, epsilon = 1e-15);
            assert_abs_diff_eq!(t.amplitude(k).im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn tensor_superposition_linearity() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = StateVector::new(vec![r(s), r(s)], None).unwrap();
        let b = StateVector::basis(3, 2);
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.dim(), 6);
        for k in 0..6 {
            let expect = if k == 2 || k == 5 { s } else { 0.0 };
            assert_abs_diff_eq!(t.amplitude(k).re, expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&identity(2), &identity(2));
        assert_eq!(i4, identity(4));
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let rho = DensityOperator::from_pure(&psi_minus());
        let reduced = rho.partial_trace(Party::A).unwrap();
        let expected = DensityOperator::maximally_mixed(2);
        for (x, y) in reduced.matrix().iter().zip(expected.matrix().iter()) {
            assert!((x - y).norm() < 1e-12);
        }
        reduced.validate().unwrap();
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        // rho_A with off-diagonal coherence, rho_B diagonal.
        let rho_a = DensityOperator::new(
            CMatrix::from_row_slice(2, 2, &[r(0.7), c(0.1, 0.2), c(0.1, -0.2), r(0.3)]),
            None,
        )
        .unwrap();
        let rho_b = DensityOperator::new(
            CMatrix::from_row_slice(2, 2, &[r(0.4), r(0.0), r(0.0), r(0.6)]),
            None,
        )
        .unwrap();
        let joint = DensityOperator::new(
            kron(rho_a.matrix(), rho_b.matrix()),
            Some((2, 2)),
        )
        .unwrap();
        let back = joint.partial_trace(Party::A).unwrap();
        for (x, y) in back.matrix().iter().zip(rho_a.matrix().iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_keep_b_by_index_contraction() {
        // |1⟩|1⟩ on 3x3; oracle: contract indices by hand.
        let psi = tensor(&StateVector::basis(3, 1), &StateVector::basis(3, 1)).unwrap();
        let rho = DensityOperator::from_pure(&psi);

        // Hand contraction: sigma[j,j'] = sum_i rho[(i,j),(i,j')].
        let m = rho.matrix();
        let mut oracle = CMatrix::zeros(3, 3);
        for j in 0..3 {
            for jp in 0..3 {
                let mut acc = r(0.0);
                for i in 0..3 {
                    acc += m[(i * 3 + j, i * 3 + jp)];
                }
                oracle[(j, jp)] = acc;
            }
        }

        let reduced = rho.partial_trace(Party::B).unwrap();
        assert_eq!(reduced.dim(), 3);
        for (x, y) in reduced.matrix().iter().zip(oracle.iter()) {
            assert!((x - y).norm() < 1e-15);
        }
        // and the oracle itself is |1⟩⟨1| on the 3-dim space
        assert_abs_diff_eq!(oracle[(1, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(oracle.trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_requires_factor_dims() {
        let rho = DensityOperator::maximally_mixed(4);
        assert!(matches!(
            rho.partial_trace(Party::A),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn schmidt_rank_of_product_state_is_one() {
        let psi = tensor(&StateVector::basis(2, 1), &StateVector::basis(2, 1)).unwrap();
        let s = psi.schmidt().unwrap();
        assert_eq!(s.rank, 1);
        assert_abs_diff_eq!(s.coefficients[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_rank_of_bell_state_is_two() {
        let s = psi_minus().schmidt().unwrap();
        assert_eq!(s.rank, 2);
        assert_abs_diff_eq!(s.coefficients[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(s.coefficients[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn spectral_decompose_sigma_z() {
        let sigma_z = CMatrix::from_row_slice(2, 2, &[r(1.0), r(0.0), r(0.0), r(-1.0)]);
        let obs = spectral_decompose(&sigma_z).unwrap();
        assert_eq!(obs.spectrum().len(), 2);
        assert_abs_diff_eq!(obs.spectrum()[0].value, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(obs.spectrum()[1].value, 1.0, epsilon = 1e-12);
        // projector of +1 is |0⟩⟨0|
        let p_plus = &obs.spectrum()[1].projector;
        assert_abs_diff_eq!(p_plus[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p_plus[(1, 1)].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_decompose_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[r(0.0), r(1.0), r(0.0), r(0.0)]);
        assert!(spectral_decompose(&m).is_err());
    }

    #[test]
    fn spectral_decompose_merges_degenerate_eigenvalues() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                r(2.0), r(0.0), r(0.0),
                r(0.0), r(2.0), r(0.0),
                r(0.0), r(0.0), r(5.0),
            ],
        );
        let obs = spectral_decompose(&m).unwrap();
        assert_eq!(obs.spectrum().len(), 2);
        assert_eq!(obs.spectrum()[0].rank(), 2);
        assert_eq!(obs.spectrum()[1].rank(), 1);
    }

    #[test]
    fn inner_products() {
        let psi = psi_minus();
        let ip = inner(&psi, &psi).unwrap();
        assert_abs_diff_eq!(ip.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-12);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = StateVector::basis(2, 0);
        let plus = StateVector::new(vec![r(s), r(s)], None).unwrap();
        let ip = inner(&zero, &plus).unwrap();
        assert_abs_diff_eq!(ip.re, s, epsilon = 1e-12);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = StateVector::new(vec![r(s), c(0.0, s)], None).unwrap();
        let w = StateVector::basis(2, 1);
        // ⟨v|w⟩ = conj(i/√2) = -i/√2
        let ip = inner(&v, &w).unwrap();
        assert_abs_diff_eq!(ip.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, -s, epsilon = 1e-12);
    }

    #[test]
    fn inner_rejects_dim_mismatch() {
        let a = StateVector::basis(2, 0);
        let b = StateVector::basis(3, 0);
        assert!(matches!(inner(&a, &b), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn state_vector_rejects_unnormalised_input() {
        assert!(StateVector::new(vec![r(1.0), r(1.0)], None).is_err());
        assert!(StateVector::normalized(vec![r(1.0), r(1.0)], None).is_ok());
        assert!(StateVector::normalized(vec![r(0.0), r(0.0)], None).is_err());
    }

    #[test]
    fn factor_dims_must_multiply_out() {
        assert!(StateVector::basis(4, 0).with_factor_dims((2, 2)).is_ok());
        assert!(StateVector::basis(4, 0).with_factor_dims((3, 2)).is_err());
    }

    #[test]
    fn density_operator_validation() {
        assert!(DensityOperator::new(identity(2), None).is_err()); // trace 2
        let half = identity(2) * r(0.5);
        DensityOperator::new(half, None).unwrap().validate().unwrap();
        // negative eigenvalue
        let m = CMatrix::from_row_slice(2, 2, &[r(1.5), r(0.0), r(0.0), r(-0.5)]);
        assert!(DensityOperator::new(m, None).is_err());
    }

    #[test]
    fn amplitude_matrix_matches_tensor_convention() {
        // (a ⊗ b) reshaped A-major must equal the outer product a b^T.
        let a = StateVector::normalized(vec![c(0.3, 0.1), c(-0.2, 0.7), r(0.55)], None).unwrap();
        let b = StateVector::normalized(vec![c(0.9, -0.2), c(0.1, 0.4)], None).unwrap();
        let t = tensor(&a, &b).unwrap();
        let m = t.amplitude_matrix().unwrap();
        for i in 0..3 {
            for j in 0..2 {
                let expect = a.amplitude(i) * b.amplitude(j);
                assert!((m[(i, j)] - expect).norm() < 1e-15);
            }
        }
    }
}
