//! LOCC protocols as finite trees of party-local instruments with
//! classical-communication branching.
//!
//! A protocol node names the acting party and a local [`Instrument`]; its
//! children are indexed by the instrument's outcome labels, so later
//! measurements are conditioned on everything communicated so far. Leaves
//! carry an optional guess. Executing a protocol on a bipartite state
//! expands the tree depth-first into a distribution of [`Transcript`]s;
//! discrimination scores those guesses against a labelled [`Ensemble`].
//!
//! Measurement records are carried classically in the transcripts rather
//! than as extra Hilbert-space factors, which is equivalent to appending
//! orthonormal register states and keeps dimensions flat.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbert::{inner, projector, CMatrix, DensityOperator, Party, StateVector};
use crate::operation::Instrument;
use crate::tol;

/// Reserved configuration-flag name for the spatial-relations resource.
///
/// The resource basis implemented by this crate is finite-round LOCC.
/// Determination of spatial relations is an acknowledged further
/// candidate resource; for labelled finite systems it would be
/// indistinguishable from reading labels, so the flag exists in name only
/// and nothing in the crate computes it.
pub const SPATIAL_RELATIONS_FLAG: &str = "resource.spatial-relations";

/// A labelled set of bipartite states with prior weights.
#[derive(Debug, Clone)]
pub struct Ensemble {
    id: String,
    dims: (usize, usize),
    members: Vec<EnsembleMember>,
}

#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub label: String,
    pub state: MemberState,
    pub prior: f64,
}

/// Pure members keep their state vector so orthogonality and Schmidt
/// checks stay exact; mixed members carry the density operator only.
#[derive(Debug, Clone)]
pub enum MemberState {
    Pure(StateVector),
    Mixed(DensityOperator),
}

impl MemberState {
    pub fn density(&self) -> DensityOperator {
        match self {
            MemberState::Pure(psi) => DensityOperator::from_pure(psi),
            MemberState::Mixed(rho) => rho.clone(),
        }
    }

    pub fn pure(&self) -> Option<&StateVector> {
        match self {
            MemberState::Pure(psi) => Some(psi),
            MemberState::Mixed(_) => None,
        }
    }
}

impl Ensemble {
    /// Validates priors (nonnegative, unit sum within [`tol::EPS`]),
    /// distinct labels and consistent dimensions.
    pub fn new(
        id: impl Into<String>,
        dims: (usize, usize),
        members: Vec<EnsembleMember>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Precondition("ensemble has no members".into()));
        }
        let mut labels = std::collections::BTreeSet::new();
        let mut prior_sum = 0.0;
        for member in &members {
            if !labels.insert(member.label.clone()) {
                return Err(Error::Precondition(format!(
                    "duplicate member label '{}'",
                    member.label
                )));
            }
            if member.prior < 0.0 {
                return Err(Error::Precondition(format!(
                    "negative prior for '{}'",
                    member.label
                )));
            }
            prior_sum += member.prior;
            let (state_dim, factor_dims) = match &member.state {
                MemberState::Pure(psi) => (psi.dim(), psi.factor_dims()),
                MemberState::Mixed(rho) => (rho.dim(), rho.factor_dims()),
            };
            if state_dim != dims.0 * dims.1 || factor_dims != Some(dims) {
                return Err(Error::Precondition(format!(
                    "member '{}' does not live on the declared {}x{} space",
                    member.label, dims.0, dims.1
                )));
            }
        }
        if (prior_sum - 1.0).abs() > tol::EPS {
            return Err(Error::Precondition(format!(
                "priors sum to {}, not 1",
                prior_sum
            )));
        }
        Ok(Ensemble {
            id: id.into(),
            dims,
            members,
        })
    }

    /// Convenience constructor for uniform-prior pure ensembles.
    pub fn uniform_pure(
        id: impl Into<String>,
        dims: (usize, usize),
        states: Vec<(String, StateVector)>,
    ) -> Result<Self> {
        let n = states.len();
        let members = states
            .into_iter()
            .map(|(label, psi)| EnsembleMember {
                label,
                state: MemberState::Pure(psi),
                prior: 1.0 / n as f64,
            })
            .collect();
        Ensemble::new(id, dims, members)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Same ensemble under a different identifier.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|m| m.label.as_str())
    }

    pub fn member(&self, label: &str) -> Option<&EnsembleMember> {
        self.members.iter().find(|m| m.label == label)
    }

    /// All member states as pure vectors, or an error naming the first
    /// mixed member.
    pub fn pure_states(&self) -> Result<Vec<&StateVector>> {
        self.members
            .iter()
            .map(|m| {
                m.state.pure().ok_or_else(|| {
                    Error::Precondition(format!(
                        "member '{}' is mixed; pure states required",
                        m.label
                    ))
                })
            })
            .collect()
    }

    /// Same ensemble with one member's prior rescaled and the whole prior
    /// vector renormalised.
    pub fn reweighted(&self, label: &str, factor: f64) -> Result<Ensemble> {
        let mut members = self.members.clone();
        let m = members
            .iter_mut()
            .find(|m| m.label == label)
            .ok_or_else(|| Error::Precondition(format!("no member '{}'", label)))?;
        m.prior *= factor;
        let total: f64 = members.iter().map(|m| m.prior).sum();
        for m in &mut members {
            m.prior /= total;
        }
        Ensemble::new(self.id.clone(), self.dims, members)
    }
}

/// A node of the protocol tree: either a local measurement with one child
/// per outcome, or a leaf with an optional guess.
#[derive(Debug, Clone)]
pub enum ProtocolNode {
    Measure {
        party: Party,
        instrument: Instrument,
        children: BTreeMap<String, ProtocolNode>,
    },
    Leaf {
        guess: Option<String>,
    },
}

impl ProtocolNode {
    pub fn leaf(guess: Option<&str>) -> Self {
        ProtocolNode::Leaf {
            guess: guess.map(str::to_owned),
        }
    }
}

/// Finite-round LOCC protocol on a fixed bipartite dimension pair.
#[derive(Debug, Clone)]
pub struct LoccProtocol {
    name: String,
    dims: (usize, usize),
    root: ProtocolNode,
    max_rounds: usize,
}

/// One root-to-leaf history: communicated events, the leaf guess, the path
/// probability and (for realised branches) the final bipartite state.
/// Branches pruned as null keep their event prefix with probability 0.
#[derive(Debug, Clone)]
pub struct Transcript {
    pub events: Vec<(Party, String)>,
    pub final_guess: Option<String>,
    pub probability: f64,
    pub post_state: Option<DensityOperator>,
}

/// Scoring of a protocol (or a global measurement) against an ensemble.
#[derive(Debug, Clone)]
pub struct DiscriminationReport {
    /// Σ_m prior_m · P(guess = m | state m).
    pub success_probability: f64,
    /// Per-member conditional success probability.
    pub per_member: BTreeMap<String, f64>,
    /// success > 1 − [`tol::EPS_PERFECT`].
    pub perfect: bool,
}

impl LoccProtocol {
    /// Validates the tree: instruments act on the declared party dimension
    /// and preserve it, children cover exactly the outcome labels, and the
    /// measurement depth stays within `max_rounds`.
    pub fn new(
        name: impl Into<String>,
        dims: (usize, usize),
        root: ProtocolNode,
        max_rounds: usize,
    ) -> Result<Self> {
        fn walk(node: &ProtocolNode, dims: (usize, usize), rounds_left: usize) -> Result<()> {
            match node {
                ProtocolNode::Leaf { .. } => Ok(()),
                ProtocolNode::Measure {
                    party,
                    instrument,
                    children,
                } => {
                    if rounds_left == 0 {
                        return Err(Error::InvalidProtocol(
                            "tree exceeds the allowed number of rounds".into(),
                        ));
                    }
                    let local_dim = match party {
                        Party::A => dims.0,
                        Party::B => dims.1,
                    };
                    if instrument.in_dim() != local_dim {
                        return Err(Error::InvalidProtocol(format!(
                            "instrument on party {} has input dimension {}, expected {}",
                            party,
                            instrument.in_dim(),
                            local_dim
                        )));
                    }
                    if instrument.out_dim() != local_dim {
                        return Err(Error::InvalidProtocol(
                            "protocol instruments must preserve the local dimension".into(),
                        ));
                    }
                    let outcome_labels: std::collections::BTreeSet<&str> =
                        instrument.labels().collect();
                    let child_labels: std::collections::BTreeSet<&str> =
                        children.keys().map(String::as_str).collect();
                    if outcome_labels != child_labels {
                        return Err(Error::InvalidProtocol(format!(
                            "children {:?} do not cover the instrument outcomes {:?}",
                            child_labels, outcome_labels
                        )));
                    }
                    for child in children.values() {
                        walk(child, dims, rounds_left - 1)?;
                    }
                    Ok(())
                }
            }
        }
        walk(&root, dims, max_rounds)?;
        Ok(LoccProtocol {
            name: name.into(),
            dims,
            root,
            max_rounds,
        })
    }

    /// Tree with the default round bound of [`tol::DEFAULT_MAX_ROUNDS`].
    pub fn with_default_rounds(
        name: impl Into<String>,
        dims: (usize, usize),
        root: ProtocolNode,
    ) -> Result<Self> {
        Self::new(name, dims, root, tol::DEFAULT_MAX_ROUNDS)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn max_rounds(&self) -> usize {
        self.max_rounds
    }

    pub fn root(&self) -> &ProtocolNode {
        &self.root
    }

    /// Leaf guesses appearing anywhere in the tree.
    pub fn guesses(&self) -> Vec<&str> {
        fn collect<'a>(node: &'a ProtocolNode, out: &mut Vec<&'a str>) {
            match node {
                ProtocolNode::Leaf { guess } => {
                    if let Some(g) = guess {
                        out.push(g);
                    }
                }
                ProtocolNode::Measure { children, .. } => {
                    for child in children.values() {
                        collect(child, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        collect(&self.root, &mut out);
        out
    }

    /// Expands the protocol on `state` depth-first.
    ///
    /// Each branch multiplies the running probability by its weight; the
    /// transcript probabilities form a distribution. Branches whose weight
    /// falls below [`tol::EPS_PRUNE`] are not expanded further and appear
    /// with probability 0 and no post-state.
    pub fn execute(&self, state: &DensityOperator) -> Result<Vec<Transcript>> {
        if state.dim() != self.dims.0 * self.dims.1 || state.factor_dims() != Some(self.dims) {
            return Err(Error::DimMismatch {
                context: "protocol execution",
                expected: self.dims.0 * self.dims.1,
                actual: state.dim(),
            });
        }
        let mut transcripts = Vec::new();
        self.expand(&self.root, state, 1.0, Vec::new(), &mut transcripts)?;
        Ok(transcripts)
    }

    fn expand(
        &self,
        node: &ProtocolNode,
        state: &DensityOperator,
        probability: f64,
        events: Vec<(Party, String)>,
        out: &mut Vec<Transcript>,
    ) -> Result<()> {
        match node {
            ProtocolNode::Leaf { guess } => {
                out.push(Transcript {
                    events,
                    final_guess: guess.clone(),
                    probability,
                    post_state: Some(state.clone()),
                });
                Ok(())
            }
            ProtocolNode::Measure {
                party,
                instrument,
                children,
            } => {
                for (label, op) in instrument.branches() {
                    let embedded = op.embed_local(*party, self.dims)?;
                    let mut next_events = events.clone();
                    next_events.push((*party, label.clone()));
                    match embedded.apply(state)? {
                        crate::operation::BranchOutcome::Null => {
                            out.push(Transcript {
                                events: next_events,
                                final_guess: None,
                                probability: 0.0,
                                post_state: None,
                            });
                        }
                        crate::operation::BranchOutcome::Realized { post, weight } => {
                            let child = children
                                .get(label)
                                .expect("children cover outcomes (validated)");
                            self.expand(child, &post, probability * weight, next_events, out)?;
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Scores the protocol against an ensemble: runs it on every member and
    /// credits transcripts whose guess names that member.
    pub fn discriminate(&self, ensemble: &Ensemble) -> Result<DiscriminationReport> {
        if ensemble.dims() != self.dims {
            return Err(Error::DimMismatch {
                context: "discrimination",
                expected: self.dims.0 * self.dims.1,
                actual: ensemble.dims().0 * ensemble.dims().1,
            });
        }
        let labels: std::collections::BTreeSet<&str> = ensemble.labels().collect();
        for guess in self.guesses() {
            if !labels.contains(guess) {
                return Err(Error::Precondition(format!(
                    "protocol guesses '{}', which is not an ensemble member",
                    guess
                )));
            }
        }
        let mut per_member = BTreeMap::new();
        let mut success = 0.0;
        for member in ensemble.members() {
            let transcripts = self.execute(&member.state.density())?;
            let p_correct: f64 = transcripts
                .iter()
                .filter(|t| t.final_guess.as_deref() == Some(member.label.as_str()))
                .map(|t| t.probability)
                .sum();
            success += member.prior * p_correct;
            per_member.insert(member.label.clone(), p_correct);
        }
        Ok(DiscriminationReport {
            success_probability: success,
            per_member,
            perfect: success > 1.0 - tol::EPS_PERFECT,
        })
    }
}

/// The two-round parity protocol: both parties measure their spin in the
/// z-direction and compare; equal parity means the total-spin-2 state
/// "phi-minus", unequal parity the singlet "psi-minus".
pub fn bell_parity_protocol() -> LoccProtocol {
    let leaf = |guess: &str| ProtocolNode::leaf(Some(guess));
    let b_round = |a_outcome: usize| {
        let mut children = BTreeMap::new();
        children.insert(
            "0".to_string(),
            leaf(if a_outcome == 0 { "phi-minus" } else { "psi-minus" }),
        );
        children.insert(
            "1".to_string(),
            leaf(if a_outcome == 1 { "phi-minus" } else { "psi-minus" }),
        );
        ProtocolNode::Measure {
            party: Party::B,
            instrument: Instrument::computational(2),
            children,
        }
    };
    let mut children = BTreeMap::new();
    children.insert("0".to_string(), b_round(0));
    children.insert("1".to_string(), b_round(1));
    let root = ProtocolNode::Measure {
        party: Party::A,
        instrument: Instrument::computational(2),
        children,
    };
    LoccProtocol::new("bell-parity", (2, 2), root, 2)
        .expect("the parity tree is well-formed")
}

/// Baseline: the joint von Neumann measurement in the ensemble's own basis
/// (completed arbitrarily on the orthogonal complement). Requires mutually
/// orthogonal pure members; succeeds with probability 1 on them.
pub fn global_discrimination(ensemble: &Ensemble) -> Result<DiscriminationReport> {
    let states = ensemble.pure_states()?;
    for (i, a) in states.iter().enumerate() {
        for b in states.iter().skip(i + 1) {
            let overlap = inner(a, b)?.norm();
            if overlap >= tol::EPS {
                return Err(Error::Precondition(format!(
                    "ensemble is not orthogonal (overlap {}); the basis measurement \
                     baseline does not apply",
                    overlap
                )));
            }
        }
    }
    let projectors: Vec<CMatrix> = states.iter().map(|psi| projector(psi)).collect();
    let mut per_member = BTreeMap::new();
    let mut success = 0.0;
    for (member, p) in ensemble.members().iter().zip(projectors.iter()) {
        let rho = member.state.density();
        let p_correct = crate::hilbert::product_trace(p, rho.matrix()).re.clamp(0.0, 1.0);
        success += member.prior * p_correct;
        per_member.insert(member.label.clone(), p_correct);
    }
    Ok(DiscriminationReport {
        success_probability: success,
        per_member,
        perfect: success > 1.0 - tol::EPS_PERFECT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::tensor;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn r(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_pair() -> (StateVector, StateVector) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi_minus =
            StateVector::new(vec![r(0.0), r(s), r(-s), r(0.0)], Some((2, 2))).unwrap();
        let phi_minus =
            StateVector::new(vec![r(s), r(0.0), r(0.0), r(-s)], Some((2, 2))).unwrap();
        (psi_minus, phi_minus)
    }

    fn two_bell_ensemble() -> Ensemble {
        let (psi_minus, phi_minus) = bell_pair();
        Ensemble::uniform_pure(
            "bell-2",
            (2, 2),
            vec![
                ("psi-minus".into(), psi_minus),
                ("phi-minus".into(), phi_minus),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_leaf_protocol_returns_the_state() {
        let protocol = LoccProtocol::with_default_rounds(
            "noop",
            (2, 2),
            ProtocolNode::leaf(None),
        )
        .unwrap();
        let rho = DensityOperator::from_pure(&bell_pair().0);
        let transcripts = protocol.execute(&rho).unwrap();
        assert_eq!(transcripts.len(), 1);
        assert_abs_diff_eq!(transcripts[0].probability, 1.0, epsilon = 1e-12);
        let post = transcripts[0].post_state.as_ref().unwrap();
        assert!(post
            .matrix()
            .iter()
            .zip(rho.matrix().iter())
            .all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn parity_protocol_on_psi_minus() {
        let protocol = bell_parity_protocol();
        let rho = DensityOperator::from_pure(&bell_pair().0);
        let transcripts = protocol.execute(&rho).unwrap();
        let total: f64 = transcripts.iter().map(|t| t.probability).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);

        let realised: Vec<&Transcript> =
            transcripts.iter().filter(|t| t.probability > 0.0).collect();
        assert_eq!(realised.len(), 2);
        for t in &realised {
            assert_abs_diff_eq!(t.probability, 0.5, epsilon = 1e-12);
            assert_eq!(t.final_guess.as_deref(), Some("psi-minus"));
            // unequal parity on the two events
            assert_ne!(t.events[0].1, t.events[1].1);
        }
    }

    #[test]
    fn parity_protocol_on_phi_minus() {
        let protocol = bell_parity_protocol();
        let rho = DensityOperator::from_pure(&bell_pair().1);
        let transcripts = protocol.execute(&rho).unwrap();
        let realised: Vec<&Transcript> =
            transcripts.iter().filter(|t| t.probability > 0.0).collect();
        assert_eq!(realised.len(), 2);
        for t in &realised {
            assert_abs_diff_eq!(t.probability, 0.5, epsilon = 1e-12);
            assert_eq!(t.final_guess.as_deref(), Some("phi-minus"));
            assert_eq!(t.events[0].1, t.events[1].1);
        }
    }

    #[test]
    fn parity_protocol_on_basis_state() {
        let protocol = bell_parity_protocol();
        let zz = tensor(&StateVector::basis(2, 0), &StateVector::basis(2, 0)).unwrap();
        let transcripts = protocol
            .execute(&DensityOperator::from_pure(&zz))
            .unwrap();
        let realised: Vec<&Transcript> =
            transcripts.iter().filter(|t| t.probability > 0.0).collect();
        assert_eq!(realised.len(), 1);
        assert_abs_diff_eq!(realised[0].probability, 1.0, epsilon = 1e-12);
        assert_eq!(realised[0].final_guess.as_deref(), Some("phi-minus"));
        assert_eq!(realised[0].events.len(), 2);
    }

    #[test]
    fn parity_protocol_discriminates_the_two_bell_states() {
        let report = bell_parity_protocol()
            .discriminate(&two_bell_ensemble())
            .unwrap();
        assert_abs_diff_eq!(report.success_probability, 1.0, epsilon = 1e-12);
        assert!(report.perfect);
    }

    #[test]
    fn constant_guess_scores_the_prior() {
        let protocol = LoccProtocol::with_default_rounds(
            "always-psi-minus",
            (2, 2),
            ProtocolNode::leaf(Some("psi-minus")),
        )
        .unwrap();
        let report = protocol.discriminate(&two_bell_ensemble()).unwrap();
        assert_abs_diff_eq!(report.success_probability, 0.5, epsilon = 1e-12);
        assert!(!report.perfect);
    }

    #[test]
    fn unknown_guess_label_is_rejected() {
        let protocol = LoccProtocol::with_default_rounds(
            "bad",
            (2, 2),
            ProtocolNode::leaf(Some("nonexistent")),
        )
        .unwrap();
        assert!(matches!(
            protocol.discriminate(&two_bell_ensemble()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn execute_rejects_mismatched_states() {
        let protocol = bell_parity_protocol();
        let rho = DensityOperator::maximally_mixed(9)
            .with_factor_dims((3, 3))
            .unwrap();
        assert!(matches!(
            protocol.execute(&rho),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn tree_validation_catches_uncovered_outcomes() {
        let mut children = BTreeMap::new();
        children.insert("0".to_string(), ProtocolNode::leaf(None));
        // outcome "1" missing
        let root = ProtocolNode::Measure {
            party: Party::A,
            instrument: Instrument::computational(2),
            children,
        };
        assert!(LoccProtocol::with_default_rounds("bad", (2, 2), root).is_err());
    }

    #[test]
    fn tree_validation_enforces_round_bound() {
        let leaf = ProtocolNode::leaf(None);
        let mut node = leaf;
        for _ in 0..3 {
            let mut children = BTreeMap::new();
            children.insert("0".to_string(), node);
            children.insert("1".to_string(), ProtocolNode::leaf(None));
            node = ProtocolNode::Measure {
                party: Party::A,
                instrument: Instrument::computational(2),
                children,
            };
        }
        assert!(LoccProtocol::new("deep", (2, 2), node.clone(), 2).is_err());
        assert!(LoccProtocol::new("deep", (2, 2), node, 3).is_ok());
    }

    #[test]
    fn transcript_probabilities_are_a_distribution() {
        // protocol with an interior second round on A
        let mut inner_children = BTreeMap::new();
        inner_children.insert("0".to_string(), ProtocolNode::leaf(Some("psi-minus")));
        inner_children.insert("1".to_string(), ProtocolNode::leaf(Some("phi-minus")));
        let second = ProtocolNode::Measure {
            party: Party::A,
            instrument: Instrument::computational(2),
            children: inner_children,
        };
        let mut children = BTreeMap::new();
        children.insert("0".to_string(), second);
        children.insert("1".to_string(), ProtocolNode::leaf(Some("psi-minus")));
        let root = ProtocolNode::Measure {
            party: Party::B,
            instrument: Instrument::computational(2),
            children,
        };
        let protocol = LoccProtocol::with_default_rounds("mixed-order", (2, 2), root).unwrap();
        for member in two_bell_ensemble().members() {
            let transcripts = protocol.execute(&member.state.density()).unwrap();
            let total: f64 = transcripts.iter().map(|t| t.probability).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn discrimination_is_prior_linear() {
        let protocol = bell_parity_protocol();
        let base = two_bell_ensemble();
        let reweighted = base.reweighted("psi-minus", 2.0).unwrap();
        let r1 = protocol.discriminate(&base).unwrap();
        let r2 = protocol.discriminate(&reweighted).unwrap();
        // convex recombination from the per-member numbers
        let p_psi = r1.per_member["psi-minus"];
        let p_phi = r1.per_member["phi-minus"];
        let expected = (2.0 / 3.0) * p_psi + (1.0 / 3.0) * p_phi;
        assert_abs_diff_eq!(r2.success_probability, expected, epsilon = 1e-12);
    }

    #[test]
    fn no_signalling_before_communication() {
        // averaging B's reduced state over A's first-round outcomes leaves
        // B exactly where it started
        let (psi_minus, _) = bell_pair();
        let rho = DensityOperator::from_pure(&psi_minus);
        let instrument = Instrument::computational(2);
        let before = rho.partial_trace(Party::B).unwrap();
        let mut averaged = CMatrix::zeros(2, 2);
        for (_, op) in instrument.branches() {
            let embedded = op.embed_local(Party::A, (2, 2)).unwrap();
            if let crate::operation::BranchOutcome::Realized { post, weight } =
                embedded.apply(&rho).unwrap()
            {
                averaged += post.partial_trace(Party::B).unwrap().matrix() * r(weight);
            }
        }
        assert!(before
            .matrix()
            .iter()
            .zip(averaged.iter())
            .all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn global_discrimination_on_orthogonal_ensembles() {
        let report = global_discrimination(&two_bell_ensemble()).unwrap();
        assert_abs_diff_eq!(report.success_probability, 1.0, epsilon = 1e-12);
        assert!(report.perfect);
    }

    #[test]
    fn global_discrimination_rejects_non_orthogonal_members() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = tensor(&StateVector::basis(2, 0), &StateVector::basis(2, 0)).unwrap();
        let plus = tensor(
            &StateVector::new(vec![r(s), r(s)], None).unwrap(),
            &StateVector::basis(2, 0),
        )
        .unwrap();
        let ensemble = Ensemble::uniform_pure(
            "overlapping",
            (2, 2),
            vec![("zero".into(), zero), ("plus".into(), plus)],
        )
        .unwrap();
        assert!(matches!(
            global_discrimination(&ensemble),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ensemble_validation() {
        let (psi_minus, _) = bell_pair();
        // bad prior sum
        let bad = Ensemble::new(
            "bad",
            (2, 2),
            vec![EnsembleMember {
                label: "x".into(),
                state: MemberState::Pure(psi_minus),
                prior: 0.5,
            }],
        );
        assert!(bad.is_err());
    }
}
