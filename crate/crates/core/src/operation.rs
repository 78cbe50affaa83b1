//! General quantum operations as completely positive trace-non-increasing
//! maps in Kraus form.
//!
//! A [`QuantumOperation`] is a finite Kraus set `{K_i}` with
//! `Σ K_i† K_i ≼ 𝟙`; equality (within tolerance) marks it trace-preserving.
//! Input and output dimensions may differ, which is what record-appending
//! maps like `S_i = |i⟩_A |i⟩_B ⟨ψ_i|` need. An [`Instrument`] partitions a
//! trace-preserving operation into labelled outcome branches.
//!
//! The Kraus representation keeps branch weights explicit; the Choi form
//! appears only inside verification tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{identity, kron, CMatrix, DensityOperator, Party};
use crate::tol;

/// Completely positive trace-non-increasing map as a finite Kraus set.
/// Every Kraus operator is `out_dim x in_dim`.
#[derive(Debug, Clone)]
pub struct QuantumOperation {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMatrix>,
    label: String,
    out_factor_dims: Option<(usize, usize)>,
}

/// Result of pushing a state through one operation branch.
#[derive(Debug, Clone)]
pub enum BranchOutcome {
    /// The branch weight fell below [`tol::EPS_PRUNE`]; no post-state exists.
    Null,
    /// Renormalised post-state together with the branch weight
    /// `Tr(Σ K ρ K†)`.
    Realized { post: DensityOperator, weight: f64 },
}

impl BranchOutcome {
    pub fn weight(&self) -> f64 {
        match self {
            BranchOutcome::Null => 0.0,
            BranchOutcome::Realized { weight, .. } => *weight,
        }
    }

    pub fn post(&self) -> Option<&DensityOperator> {
        match self {
            BranchOutcome::Null => None,
            BranchOutcome::Realized { post, .. } => Some(post),
        }
    }
}

/// Outcome of checking `Σ K† K` against the identity.
#[derive(Debug, Clone, Copy)]
pub struct CptnReport {
    pub trace_preserving: bool,
    pub max_eigenvalue: f64,
}

/// Verifies that a raw Kraus set is trace-non-increasing.
///
/// Reports the largest eigenvalue of `Σ K† K` and whether the sum equals
/// the identity within [`tol::EPS`]; a set whose largest eigenvalue
/// exceeds `1 + EPS` is rejected.
pub fn verify_cptn(kraus: &[CMatrix]) -> Result<CptnReport> {
    if kraus.is_empty() {
        return Err(Error::InvalidOperation("empty Kraus set".into()));
    }
    let in_dim = kraus[0].ncols();
    let mut sum = CMatrix::zeros(in_dim, in_dim);
    for k in kraus {
        if k.ncols() != in_dim || k.nrows() != kraus[0].nrows() {
            return Err(Error::InvalidOperation(
                "Kraus operators disagree on shape".into(),
            ));
        }
        sum += k.adjoint() * k;
    }
    let herm = (&sum + sum.adjoint()) * Complex64::new(0.5, 0.0);
    let eigenvalues = herm.symmetric_eigen().eigenvalues;
    let max_eigenvalue = eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    if max_eigenvalue > 1.0 + tol::EPS {
        return Err(Error::InvalidOperation(format!(
            "Kraus set is trace-increasing: max eigenvalue of ΣK†K is {}",
            max_eigenvalue
        )));
    }
    let trace_preserving = (&sum - identity(in_dim))
        .iter()
        .all(|c| c.norm() <= tol::EPS);
    Ok(CptnReport {
        trace_preserving,
        max_eigenvalue,
    })
}

impl QuantumOperation {
    /// Builds an operation from its Kraus set, validating shapes,
    /// finiteness and trace-non-increase.
    pub fn new(label: impl Into<String>, kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidOperation("empty Kraus set".into()));
        }
        let out_dim = kraus[0].nrows();
        let in_dim = kraus[0].ncols();
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::InvalidOperation("zero-dimensional Kraus".into()));
        }
        for k in &kraus {
            if !k.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidOperation("non-finite Kraus entry".into()));
            }
        }
        verify_cptn(&kraus)?;
        Ok(QuantumOperation {
            in_dim,
            out_dim,
            kraus,
            label: label.into(),
            out_factor_dims: None,
        })
    }

    /// The identity operation on a `dim`-dimensional space.
    pub fn identity_op(dim: usize) -> Self {
        QuantumOperation {
            in_dim: dim,
            out_dim: dim,
            kraus: vec![identity(dim)],
            label: "identity".into(),
            out_factor_dims: None,
        }
    }

    /// Single-Kraus branch given by a projector (or any valid operator).
    pub fn branch(label: impl Into<String>, kraus: CMatrix) -> Result<Self> {
        Self::new(label, vec![kraus])
    }

    /// Declares the bipartite structure of the output space.
    pub fn with_out_factor_dims(mut self, dims: (usize, usize)) -> Result<Self> {
        if dims.0 * dims.1 != self.out_dim {
            return Err(Error::InvalidOperation(format!(
                "output factor dims {}x{} do not multiply to {}",
                dims.0, dims.1, self.out_dim
            )));
        }
        self.out_factor_dims = Some(dims);
        Ok(self)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Recomputes the trace-non-increase report for this operation.
    pub fn cptn_report(&self) -> CptnReport {
        verify_cptn(&self.kraus).expect("validated at construction")
    }

    /// Applies the operation: `ρ → Σ K ρ K† / weight` with
    /// `weight = Tr(Σ K ρ K†)`. A weight at or below [`tol::EPS_PRUNE`]
    /// yields [`BranchOutcome::Null`] instead of a fabricated post-state.
    pub fn apply(&self, state: &DensityOperator) -> Result<BranchOutcome> {
        if state.dim() != self.in_dim {
            return Err(Error::DimMismatch {
                context: "operation application",
                expected: self.in_dim,
                actual: state.dim(),
            });
        }
        let mut unnorm = CMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            unnorm += k * state.matrix() * k.adjoint();
        }
        let weight = unnorm.trace().re;
        if weight <= tol::EPS_PRUNE {
            return Ok(BranchOutcome::Null);
        }
        // K ρ K† is Hermitian up to rounding; symmetrise before wrapping.
        let post = (&unnorm + unnorm.adjoint()) * Complex64::new(0.5 / weight, 0.0);
        let factor_dims = self
            .out_factor_dims
            .or_else(|| (self.out_dim == self.in_dim).then(|| state.factor_dims()).flatten());
        Ok(BranchOutcome::Realized {
            post: DensityOperator::trusted(post, factor_dims),
            weight: weight.min(1.0 + tol::EPS),
        })
    }

    /// Embeds a local operation into a bipartite space: each Kraus operator
    /// becomes `K ⊗ 𝟙` (party A) or `𝟙 ⊗ K` (party B), A-major.
    ///
    /// `dims` are the factor dimensions of the composite input space; the
    /// operation must act on the chosen party's dimension.
    pub fn embed_local(&self, party: Party, dims: (usize, usize)) -> Result<Self> {
        let (da, db) = dims;
        let local_dim = match party {
            Party::A => da,
            Party::B => db,
        };
        if self.in_dim != local_dim {
            return Err(Error::DimMismatch {
                context: "local embedding",
                expected: local_dim,
                actual: self.in_dim,
            });
        }
        let kraus = self
            .kraus
            .iter()
            .map(|k| match party {
                Party::A => kron(k, &identity(db)),
                Party::B => kron(&identity(da), k),
            })
            .collect();
        let out_factor_dims = match party {
            Party::A => (self.out_dim, db),
            Party::B => (da, self.out_dim),
        };
        Ok(QuantumOperation {
            in_dim: da * db,
            out_dim: out_factor_dims.0 * out_factor_dims.1,
            kraus,
            label: format!("{}[{}]", self.label, party),
            out_factor_dims: Some(out_factor_dims),
        })
    }

    /// Sequential composition `second ∘ first`: the Kraus set of the result
    /// is all products `K₂ K₁`. Trace-non-increase is preserved.
    pub fn compose(second: &Self, first: &Self) -> Result<Self> {
        if first.out_dim != second.in_dim {
            return Err(Error::DimMismatch {
                context: "operation composition",
                expected: first.out_dim,
                actual: second.in_dim,
            });
        }
        let mut kraus = Vec::with_capacity(first.kraus.len() * second.kraus.len());
        for k2 in &second.kraus {
            for k1 in &first.kraus {
                kraus.push(k2 * k1);
            }
        }
        let mut composed = QuantumOperation::new(
            format!("{} . {}", second.label, first.label),
            kraus,
        )?;
        composed.out_factor_dims = second.out_factor_dims;
        Ok(composed)
    }
}

/// A finite partition of a trace-preserving operation into labelled
/// outcome branches: the pooled Kraus set must satisfy `Σ K† K = 𝟙`.
#[derive(Debug, Clone)]
pub struct Instrument {
    branches: Vec<(String, QuantumOperation)>,
}

impl Instrument {
    pub fn new(branches: Vec<(String, QuantumOperation)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidOperation("instrument has no branches".into()));
        }
        let in_dim = branches[0].1.in_dim;
        let mut labels = std::collections::BTreeSet::new();
        let mut pooled: Vec<CMatrix> = Vec::new();
        for (label, op) in &branches {
            if op.in_dim != in_dim {
                return Err(Error::InvalidOperation(
                    "instrument branches disagree on input dimension".into(),
                ));
            }
            if !labels.insert(label.clone()) {
                return Err(Error::InvalidOperation(format!(
                    "duplicate outcome label '{}'",
                    label
                )));
            }
            pooled.extend(op.kraus.iter().cloned());
        }
        let mut sum = CMatrix::zeros(in_dim, in_dim);
        for k in &pooled {
            sum += k.adjoint() * k;
        }
        if (&sum - identity(in_dim)).iter().any(|c| c.norm() > tol::EPS) {
            return Err(Error::InvalidOperation(
                "instrument branches are not complete: ΣK†K differs from 𝟙".into(),
            ));
        }
        Ok(Instrument { branches })
    }

    /// Rank-1 projective measurement in the columns of a unitary matrix;
    /// outcome labels are the column indices "0", "1", ...
    pub fn from_basis(basis: &CMatrix) -> Result<Self> {
        if !basis.is_square() || basis.is_empty() {
            return Err(Error::InvalidOperation("basis must be square".into()));
        }
        let d = basis.nrows();
        let gram = basis.adjoint() * basis;
        if (&gram - identity(d)).iter().any(|c| c.norm() > tol::EPS) {
            return Err(Error::InvalidOperation("basis columns not orthonormal".into()));
        }
        let mut branches = Vec::with_capacity(d);
        for k in 0..d {
            let col = basis.column(k);
            let p = CMatrix::from_fn(d, d, |i, j| col[i] * col[j].conj());
            branches.push((k.to_string(), QuantumOperation::branch(k.to_string(), p)?));
        }
        Instrument::new(branches)
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        Self::from_basis(&identity(dim)).expect("identity basis is orthonormal")
    }

    pub fn branches(&self) -> &[(String, QuantumOperation)] {
        &self.branches
    }

    pub fn in_dim(&self) -> usize {
        self.branches[0].1.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.branches[0].1.out_dim
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.branches.iter().map(|(l, _)| l.as_str())
    }
}
