//! Finite classical phase spaces with Cartesian-product composition.
//!
//! Propositions about a finite space are just subsets of its points, and
//! the proposition algebra of a product space is generated by rectangles
//! `Λ₁ × Λ₂`. The module exhibits this constructively: every global
//! property decomposes into disjoint rectangles, and two agents who each
//! read their own component and communicate can evaluate any global
//! property. [`verify_all_properties_local`] checks that by brute force
//! over the full power set, which is the non-holism verdict for theories
//! whose composite state space is a Cartesian product (classical phase
//! space, Bohmian configuration space).
//!
//! Finite spaces stand in for the continuum: at this scale the Boolean
//! σ-algebra of a space is its power set and the generated product algebra
//! is the power set of the product, so the decomposition is total.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest product space the exhaustive verifier will enumerate
/// (2^points subsets).
pub const EXHAUSTIVE_POINT_LIMIT: usize = 16;

/// A finite state space: distinct point labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePhaseSpace {
    points: Vec<String>,
}

impl FinitePhaseSpace {
    pub fn new(points: Vec<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition(
                "phase space needs at least one point".into(),
            ));
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::Precondition(
                "phase space labels must be distinct".into(),
            ));
        }
        Ok(FinitePhaseSpace { points })
    }

    /// Space with points "0", "1", ..., "n-1".
    pub fn numbered(n: usize) -> Self {
        FinitePhaseSpace {
            points: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }
}

/// Cartesian product of two finite spaces; points are index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    left: FinitePhaseSpace,
    right: FinitePhaseSpace,
}

impl ProductSpace {
    pub fn new(left: FinitePhaseSpace, right: FinitePhaseSpace) -> Self {
        ProductSpace { left, right }
    }

    pub fn left(&self) -> &FinitePhaseSpace {
        &self.left
    }

    pub fn right(&self) -> &FinitePhaseSpace {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.left.len() * self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        false // both factors are nonempty by construction
    }

    pub fn contains(&self, point: (usize, usize)) -> bool {
        point.0 < self.left.len() && point.1 < self.right.len()
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let right = self.right.len();
        (0..self.left.len()).flat_map(move |i| (0..right).map(move |j| (i, j)))
    }
}

/// A global property: the subset of product-space points where the
/// proposition holds.
#[derive(Debug, Clone)]
pub struct GlobalProperty {
    space: ProductSpace,
    truth_set: BTreeSet<(usize, usize)>,
    name: String,
}

/// Cartesian product `left_set × right_set` of subsystem subsets, the
/// generators of the product proposition algebra. Factors are nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub left_set: BTreeSet<usize>,
    pub right_set: BTreeSet<usize>,
}

impl Rectangle {
    pub fn contains(&self, point: (usize, usize)) -> bool {
        self.left_set.contains(&point.0) && self.right_set.contains(&point.1)
    }

    pub fn len(&self) -> usize {
        self.left_set.len() * self.right_set.len()
    }

    pub fn is_empty(&self) -> bool {
        false // factors are nonempty by construction
    }
}

/// What each agent read and what the communicated labels evaluated to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceTranscript {
    /// Label agent 1 read off its own component.
    pub left_read: String,
    /// Label agent 2 read off its own component.
    pub right_read: String,
    /// Truth value computed from the two communicated labels.
    pub evaluation: bool,
}

#[derive(Debug, Clone)]
pub struct LocalInference {
    pub truth: bool,
    pub transcript: InferenceTranscript,
}

#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveReport {
    pub properties_checked: usize,
    pub all_inferable: bool,
}

impl GlobalProperty {
    pub fn new(
        space: ProductSpace,
        truth_set: BTreeSet<(usize, usize)>,
        name: impl Into<String>,
    ) -> Result<Self> {
        for point in &truth_set {
            if !space.contains(*point) {
                return Err(Error::Precondition(format!(
                    "truth set point {:?} lies outside the {}x{} space",
                    point,
                    space.left.len(),
                    space.right.len()
                )));
            }
        }
        Ok(GlobalProperty {
            space,
            truth_set,
            name: name.into(),
        })
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn truth_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.truth_set
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn holds_at(&self, point: (usize, usize)) -> bool {
        self.truth_set.contains(&point)
    }

    /// Canonical row-wise decomposition into disjoint rectangles: one
    /// rectangle `{x₁} × {x₂ | (x₁,x₂) ∈ truth set}` per nonempty row.
    /// The union is exact and uses at most |Ω₁| rectangles, which places
    /// every finite global property inside the product algebra.
    pub fn decompose_into_rectangles(&self) -> Vec<Rectangle> {
        let mut rectangles = Vec::new();
        for i in 0..self.space.left.len() {
            let row: BTreeSet<usize> = self
                .truth_set
                .iter()
                .filter(|(x1, _)| *x1 == i)
                .map(|(_, x2)| *x2)
                .collect();
            if !row.is_empty() {
                rectangles.push(Rectangle {
                    left_set: BTreeSet::from([i]),
                    right_set: row,
                });
            }
        }
        rectangles
    }

    /// Local inference of the property at `actual`: each agent reads only
    /// its own component, the labels are communicated, and the truth value
    /// is computed from the labels alone.
    pub fn infer_locally(&self, actual: (usize, usize)) -> Result<LocalInference> {
        if !self.space.contains(actual) {
            return Err(Error::Precondition(format!(
                "point {:?} lies outside the space",
                actual
            )));
        }
        // each read sees one component and nothing else
        let left_read = self.space.left.labels()[actual.0].clone();
        let right_read = self.space.right.labels()[actual.1].clone();

        // evaluation resolves the communicated labels, never `actual`
        let li = self
            .space
            .left
            .index_of(&left_read)
            .expect("label came from the space");
        let rj = self
            .space
            .right
            .index_of(&right_read)
            .expect("label came from the space");
        let evaluation = self.truth_set.contains(&(li, rj));

        Ok(LocalInference {
            truth: evaluation,
            transcript: InferenceTranscript {
                left_read,
                right_read,
                evaluation,
            },
        })
    }
}

/// Brute-force non-holism check: enumerates every subset of the product
/// space as a global property and verifies that local reads plus
/// communication infer it correctly at every point, and that the rectangle
/// decomposition is disjoint with exact union.
///
/// Spaces beyond [`EXHAUSTIVE_POINT_LIMIT`] points are rejected.
pub fn verify_all_properties_local(space: &ProductSpace) -> Result<ExhaustiveReport> {
    let n_points = space.len();
    if n_points > EXHAUSTIVE_POINT_LIMIT {
        return Err(Error::Precondition(format!(
            "space has {} points; exhaustive mode handles at most {}",
            n_points, EXHAUSTIVE_POINT_LIMIT
        )));
    }
    let points: Vec<(usize, usize)> = space.points().collect();
    let n_properties: u64 = 1u64 << n_points;

    let all_inferable = (0..n_properties)
        .into_par_iter()
        .map(|mask| {
            let truth_set: BTreeSet<(usize, usize)> = points
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, p)| *p)
                .collect();
            let property = GlobalProperty::new(space.clone(), truth_set, format!("mask-{}", mask))
                .expect("mask subsets lie inside the space");

            // local inference agrees with direct membership everywhere
            for &point in &points {
                let inferred = property
                    .infer_locally(point)
                    .expect("points lie inside the space");
                if inferred.truth != property.holds_at(point) {
                    return false;
                }
            }

            // rectangles: disjoint, exact union, at most |Ω₁| of them
            let rectangles = property.decompose_into_rectangles();
            if rectangles.len() > space.left.len() {
                return false;
            }
            for &point in &points {
                let covering = rectangles.iter().filter(|r| r.contains(point)).count();
                let expected = usize::from(property.holds_at(point));
                if covering != expected {
                    return false;
                }
            }
            true
        })
        .reduce(|| true, |a, b| a && b);

    Ok(ExhaustiveReport {
        properties_checked: n_properties as usize,
        all_inferable,
    })
}
