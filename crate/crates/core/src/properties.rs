//! Property assignment and property inference for quantum states.
//!
//! Ontology side: a system possesses the value λ of a quantity exactly when
//! its state is supported in the λ-eigenspace of the corresponding
//! observable ([`assign_property`]). Epistemology side: ideal von Neumann
//! measurement with Born-rule statistics ([`measure`]). The two sides agree
//! on eigenstates, which is itself a tested invariant.
//!
//! ħ = 1 throughout; total-spin eigenvalues are reported in units of ħ².

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{is_hermitian, kron, product_trace, CMatrix, DensityOperator, Observable};
use crate::tol;

/// Outcome of the eigenspace-membership property rule.
///
/// `Definite` carries the assigned eigenvalue and the dimension of its
/// eigenspace. Mixed states spread across a single eigenspace still count
/// as `Definite`: the proposition "the value is λ" is true of them.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertyVerdict {
    Definite { value: f64, eigenspace_dim: usize },
    Indefinite,
}

impl PropertyVerdict {
    pub fn is_definite(&self) -> bool {
        matches!(self, PropertyVerdict::Definite { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            PropertyVerdict::Definite { value, .. } => Some(*value),
            PropertyVerdict::Indefinite => None,
        }
    }
}

/// One branch of an ideal von Neumann measurement.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub eigenvalue: f64,
    pub probability: f64,
    pub post_state: DensityOperator,
}

/// Complete record of a measurement: the realised branches plus the
/// eigenvalues of branches whose probability fell below [`tol::EPS`] and
/// were omitted (no normalisable post-state exists for them).
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcomes: Vec<MeasurementOutcome>,
    pub omitted: Vec<f64>,
}

/// Assigns the value of `obs` to `state` by eigenspace membership:
/// `Definite(λ)` iff `Tr(P_λ ρ) > 1 − EPS_EIG`.
pub fn assign_property(state: &DensityOperator, obs: &Observable) -> Result<PropertyVerdict> {
    if state.dim() != obs.dim() {
        return Err(Error::DimMismatch {
            context: "property assignment",
            expected: obs.dim(),
            actual: state.dim(),
        });
    }
    for line in obs.spectrum() {
        let weight = product_trace(&line.projector, state.matrix()).re;
        if weight > 1.0 - tol::EPS_EIG {
            return Ok(PropertyVerdict::Definite {
                value: line.value,
                eigenspace_dim: line.rank(),
            });
        }
    }
    Ok(PropertyVerdict::Indefinite)
}

/// Born probability `Tr(ρ P)` for a projector `P`, clamped to `[0, 1]`.
pub fn born_probability(state: &DensityOperator, projector: &CMatrix) -> Result<f64> {
    if !projector.is_square() || projector.nrows() != state.dim() {
        return Err(Error::DimMismatch {
            context: "Born probability",
            expected: state.dim(),
            actual: projector.nrows(),
        });
    }
    if !is_hermitian(projector, tol::EPS) {
        return Err(Error::InvalidOperation("projector not Hermitian".into()));
    }
    let idem = projector * projector - projector;
    if idem.iter().any(|c| c.norm() > tol::EPS) {
        return Err(Error::InvalidOperation("operator not idempotent".into()));
    }
    let p = product_trace(state.matrix(), projector).re;
    Ok(p.clamp(0.0, 1.0))
}

/// Ideal von Neumann measurement of `obs` on `state`.
///
/// One outcome per spectral point with `probability = Tr(P_λ ρ)` and
/// `post_state = P_λ ρ P_λ / Tr(P_λ ρ)`; branches with probability at or
/// below [`tol::EPS`] land in `omitted`.
pub fn measure(state: &DensityOperator, obs: &Observable) -> Result<Measurement> {
    if state.dim() != obs.dim() {
        return Err(Error::DimMismatch {
            context: "measurement",
            expected: obs.dim(),
            actual: state.dim(),
        });
    }
    let mut outcomes = Vec::new();
    let mut omitted = Vec::new();
    for line in obs.spectrum() {
        let p = product_trace(&line.projector, state.matrix()).re;
        if p <= tol::EPS {
            omitted.push(line.value);
            continue;
        }
        let sandwich = &line.projector * state.matrix() * &line.projector;
        let post = sandwich * Complex64::new(1.0 / p, 0.0);
        outcomes.push(MeasurementOutcome {
            eigenvalue: line.value,
            probability: p.clamp(0.0, 1.0),
            post_state: DensityOperator::trusted(post, state.factor_dims()),
        });
    }
    Ok(Measurement { outcomes, omitted })
}

/// The total-spin observable `(S_1 + S_2)²` on a pair of spin-1/2 systems,
/// in ħ² units: eigenvalue 0 on the singlet line, 2 on the triplet space.
pub fn total_spin_squared() -> Observable {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let sigma_x = CMatrix::from_row_slice(2, 2, &[z, one, one, z]);
    let sigma_y = CMatrix::from_row_slice(2, 2, &[z, -i, i, z]);
    let sigma_z = CMatrix::from_row_slice(2, 2, &[one, z, z, -one]);

    // (S1+S2)^2 = 3/2 * I + 1/2 * (σx⊗σx + σy⊗σy + σz⊗σz) with S = σ/2.
    let mut m = CMatrix::identity(4, 4) * Complex64::new(1.5, 0.0);
    for sigma in [&sigma_x, &sigma_y, &sigma_z] {
        m += kron(sigma, sigma) * Complex64::new(0.5, 0.0);
    }
    Observable::from_matrix(m).expect("total-spin operator is Hermitian by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{projector, spectral_decompose, tensor, StateVector};
    use approx::assert_abs_diff_eq;

    fn r(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sigma_z() -> Observable {
        spectral_decompose(&CMatrix::from_row_slice(
            2,
            2,
            &[r(1.0), r(0.0), r(0.0), r(-1.0)],
        ))
        .unwrap()
    }

    fn bell(signs: (f64, f64), kind: char) -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = match kind {
            // psi: |01⟩, |10⟩ support
            'p' => vec![r(0.0), r(signs.0 * s), r(signs.1 * s), r(0.0)],
            // phi: |00⟩, |11⟩ support
            _ => vec![r(signs.0 * s), r(0.0), r(0.0), r(signs.1 * s)],
        };
        StateVector::new(amps, Some((2, 2))).unwrap()
    }

    #[test]
    fn singlet_has_definite_total_spin_zero() {
        let psi_minus = bell((1.0, -1.0), 'p');
        let verdict = assign_property(
            &DensityOperator::from_pure(&psi_minus),
            &total_spin_squared(),
        )
        .unwrap();
        match verdict {
            PropertyVerdict::Definite {
                value,
                eigenspace_dim,
            } => {
                assert_abs_diff_eq!(value, 0.0, epsilon = 1e-9);
                assert_eq!(eigenspace_dim, 1);
            }
            PropertyVerdict::Indefinite => panic!("singlet must be definite"),
        }
    }

    #[test]
    fn phi_minus_has_definite_total_spin_two() {
        let phi_minus = bell((1.0, -1.0), 'f');
        let verdict = assign_property(
            &DensityOperator::from_pure(&phi_minus),
            &total_spin_squared(),
        )
        .unwrap();
        assert_abs_diff_eq!(verdict.value().unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn basis_product_state_lies_in_triplet_space() {
        // |00⟩ is not a Bell state but sits inside the triplet eigenspace.
        let zz = tensor(&StateVector::basis(2, 0), &StateVector::basis(2, 0)).unwrap();
        let obs = total_spin_squared();
        let verdict = assign_property(&DensityOperator::from_pure(&zz), &obs).unwrap();
        match verdict {
            PropertyVerdict::Definite {
                value,
                eigenspace_dim,
            } => {
                assert_abs_diff_eq!(value, 2.0, epsilon = 1e-9);
                assert_eq!(eigenspace_dim, 3);
            }
            PropertyVerdict::Indefinite => panic!("|00⟩ lies in the triplet eigenspace"),
        }
        // cross-check through the spectral projector directly
        let p2 = &obs.spectrum()[1].projector;
        let w = product_trace(p2, DensityOperator::from_pure(&zz).matrix()).re;
        assert_abs_diff_eq!(w, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn maximally_mixed_qubit_has_no_spin_property() {
        let verdict =
            assign_property(&DensityOperator::maximally_mixed(2), &sigma_z()).unwrap();
        assert_eq!(verdict, PropertyVerdict::Indefinite);
    }

    #[test]
    fn mixed_state_inside_one_eigenspace_is_definite() {
        // Equal mixture of |00⟩ and |11⟩: both triplet, so total spin is 2.
        let zz = tensor(&StateVector::basis(2, 0), &StateVector::basis(2, 0)).unwrap();
        let oo = tensor(&StateVector::basis(2, 1), &StateVector::basis(2, 1)).unwrap();
        let m = (projector(&zz) + projector(&oo)) * r(0.5);
        let rho = DensityOperator::new(m, Some((2, 2))).unwrap();
        let verdict = assign_property(&rho, &total_spin_squared()).unwrap();
        assert_abs_diff_eq!(verdict.value().unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn born_probabilities() {
        let zero = DensityOperator::from_pure(&StateVector::basis(2, 0));
        let p0 = projector(&StateVector::basis(2, 0));
        assert_abs_diff_eq!(born_probability(&zero, &p0).unwrap(), 1.0, epsilon = 1e-12);

        let mixed = DensityOperator::maximally_mixed(2);
        assert_abs_diff_eq!(born_probability(&mixed, &p0).unwrap(), 0.5, epsilon = 1e-12);

        // |⟨0|+⟩|² = 1/2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![r(s), r(s)], None).unwrap();
        let rho = DensityOperator::from_pure(&plus);
        assert_abs_diff_eq!(born_probability(&rho, &p0).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn born_probability_rejects_non_projector() {
        let rho = DensityOperator::maximally_mixed(2);
        let half = CMatrix::identity(2, 2) * r(0.5);
        assert!(born_probability(&rho, &half).is_err());
    }

    #[test]
    fn born_probability_on_identity_and_zero() {
        let rho = DensityOperator::maximally_mixed(3);
        let id = CMatrix::identity(3, 3);
        let zero = CMatrix::zeros(3, 3);
        assert_abs_diff_eq!(born_probability(&rho, &id).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(born_probability(&rho, &zero).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn measure_symmetric_superposition() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::new(vec![r(s), r(s)], None).unwrap();
        let m = measure(&DensityOperator::from_pure(&plus), &sigma_z()).unwrap();
        assert_eq!(m.outcomes.len(), 2);
        for outcome in &m.outcomes {
            assert_abs_diff_eq!(outcome.probability, 0.5, epsilon = 1e-12);
            // post states collapse onto the basis states
            let idx = if outcome.eigenvalue > 0.0 { 0 } else { 1 };
            assert_abs_diff_eq!(
                outcome.post_state.matrix()[(idx, idx)].re,
                1.0,
                epsilon = 1e-12
            );
            outcome.post_state.validate().unwrap();
        }
    }

    #[test]
    fn measuring_an_eigenstate_is_certain() {
        let psi_minus = bell((1.0, -1.0), 'p');
        let rho = DensityOperator::from_pure(&psi_minus);
        let m = measure(&rho, &total_spin_squared()).unwrap();
        assert_eq!(m.outcomes.len(), 1);
        assert_abs_diff_eq!(m.outcomes[0].eigenvalue, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.outcomes[0].probability, 1.0, epsilon = 1e-12);
        assert_eq!(m.omitted, vec![2.0]);
        // the post state is the singlet again
        let diff = m.outcomes[0].post_state.matrix() - rho.matrix();
        assert!(diff.iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn measure_maximally_mixed_two_qubits() {
        // Oracle: Tr(P ρ) = rank(P)/4 for ρ = 𝟙/4.
        let rho = DensityOperator::maximally_mixed(4);
        let m = measure(&rho, &total_spin_squared()).unwrap();
        assert_eq!(m.outcomes.len(), 2);
        assert_abs_diff_eq!(m.outcomes[0].eigenvalue, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.outcomes[0].probability, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(m.outcomes[1].eigenvalue, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.outcomes[1].probability, 0.75, epsilon = 1e-12);
        // post state of the 0 branch is the singlet projector itself
        let psi_minus = bell((1.0, -1.0), 'p');
        let singlet = DensityOperator::from_pure(&psi_minus);
        let diff = m.outcomes[0].post_state.matrix() - singlet.matrix();
        assert!(diff.iter().all(|c| c.norm() < 1e-9));
        for outcome in &m.outcomes {
            outcome.post_state.validate().unwrap();
        }
    }

    #[test]
    fn measurement_probabilities_sum_to_one_and_repeat_is_idempotent() {
        let s = 0.6_f64;
        let t = (1.0 - s * s).sqrt();
        let psi = StateVector::new(vec![r(s), r(t)], None).unwrap();
        let obs = sigma_z();
        let m = measure(&DensityOperator::from_pure(&psi), &obs).unwrap();
        let total: f64 = m.outcomes.iter().map(|o| o.probability).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        for outcome in &m.outcomes {
            let again = measure(&outcome.post_state, &obs).unwrap();
            assert_eq!(again.outcomes.len(), 1);
            assert_abs_diff_eq!(again.outcomes[0].eigenvalue, outcome.eigenvalue, epsilon = 1e-12);
            assert_abs_diff_eq!(again.outcomes[0].probability, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn distinct_states_with_identical_z_statistics() {
        // |0⟩+|1⟩ and |0⟩+i|1⟩ give the same σz outcome distribution while
        // being different states: no one-to-one state/statistics link.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = StateVector::new(vec![r(s), r(s)], None).unwrap();
        let b = StateVector::new(vec![r(s), Complex64::new(0.0, s)], None).unwrap();
        let obs = sigma_z();
        let ma = measure(&DensityOperator::from_pure(&a), &obs).unwrap();
        let mb = measure(&DensityOperator::from_pure(&b), &obs).unwrap();
        for (oa, ob) in ma.outcomes.iter().zip(mb.outcomes.iter()) {
            assert_abs_diff_eq!(oa.probability, ob.probability, epsilon = 1e-12);
        }
        let overlap = crate::hilbert::inner(&a, &b).unwrap().norm();
        assert!(overlap < 1.0 - 1e-3, "witness states must differ");
    }

    #[test]
    fn dim_mismatch_is_rejected() {
        let rho = DensityOperator::maximally_mixed(3);
        assert!(assign_property(&rho, &sigma_z()).is_err());
        assert!(measure(&rho, &sigma_z()).is_err());
    }
}
