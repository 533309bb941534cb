//! Spectral entropy of a state, defined through its decompositions.

use serde::Serialize;

use super::{enumerate_pdp_decompositions, quantum_pdp, DecompositionSet};
use crate::error::{Error, Result};
use crate::linalg::{self, eig_herm};
use crate::space::{MatrixKind, Representation, State, StateSpace, EQ_TOL};

/// Probabilities at or below this contribute nothing.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
/// Entropies closer than this count as equal.
pub const ENTROPY_TOL: f64 = 1e-9;

/// `-Σ p_i ln p_i` in nats.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidProbabilities("empty distribution".into()));
    }
    if let Some(x) = p.iter().find(|x| x.is_nan() || **x < -EQ_TOL) {
        return Err(Error::InvalidProbabilities(format!("entry {x}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > EQ_TOL {
        return Err(Error::InvalidProbabilities(format!("sum {sum}")));
    }
    Ok(-p
        .iter()
        .filter(|x| **x > ENTROPY_CUTOFF)
        .map(|x| x * x.ln())
        .sum::<f64>())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "entropies", rename_all = "kebab-case")]
pub enum Uniqueness {
    Unique(f64),
    NonUnique(Vec<f64>),
    Empty,
}

/// Compares the Shannon entropies of all decompositions in the set.
pub fn check_entropy_uniqueness(set: &DecompositionSet) -> Uniqueness {
    let mut values: Vec<f64> = Vec::new();
    for d in &set.decompositions {
        let h = d.entropy();
        if !values.iter().any(|v| (v - h).abs() <= ENTROPY_TOL) {
            values.push(h);
        }
    }
    match values.len() {
        0 => Uniqueness::Empty,
        1 => Uniqueness::Unique(values[0]),
        _ => Uniqueness::NonUnique(values),
    }
}

/// Entropy assigned to states of some model.
pub trait EntropyOracle: Sync {
    fn entropy(&self, state: &State) -> Result<f64>;
}

/// States are probability vectors.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClassicalEntropy;

impl EntropyOracle for ClassicalEntropy {
    fn entropy(&self, state: &State) -> Result<f64> {
        shannon_entropy(state.coords())
    }
}

/// Von Neumann entropy of a `dim`-dimensional density matrix given by its coordinates.
#[derive(Clone, Copy, Debug)]
pub struct QuantumEntropy {
    pub dim: usize,
}

impl EntropyOracle for QuantumEntropy {
    fn entropy(&self, state: &State) -> Result<f64> {
        let rho = linalg::from_coords(self.dim, state.coords())?;
        let eig = eig_herm(&rho)?;
        if *eig.values.last().unwrap() < -EQ_TOL {
            return Err(Error::NotMember);
        }
        let clipped: Vec<f64> = eig.values.iter().map(|v| v.max(0.0)).collect();
        shannon_entropy(&clipped)
    }
}

impl QuantumEntropy {
    /// The decomposition set of a quantum state: its spectral decomposition.
    pub fn decomposition_set(&self, state: &State) -> Result<DecompositionSet> {
        let rho = linalg::from_coords(self.dim, state.coords())?;
        Ok(DecompositionSet {
            target: state.clone(),
            decompositions: vec![quantum_pdp(&rho)?],
            complete: false,
            rejected_dependent: 0,
        })
    }
}

/// Entropy of a polytope state, defined only when every decomposition agrees.
pub struct PolytopeEntropy<'a> {
    pub space: &'a StateSpace,
    pub max_size: usize,
}

impl<'a> PolytopeEntropy<'a> {
    pub fn new(space: &'a StateSpace) -> Self {
        let max_size = space.vertices().map_or(0, <[_]>::len);
        Self { space, max_size }
    }
}

impl EntropyOracle for PolytopeEntropy<'_> {
    fn entropy(&self, state: &State) -> Result<f64> {
        let set = enumerate_pdp_decompositions(state, self.space, self.max_size)?;
        match check_entropy_uniqueness(&set) {
            Uniqueness::Unique(h) => Ok(h),
            Uniqueness::NonUnique(v) => Err(Error::EntropyNotUnique(v)),
            Uniqueness::Empty => Err(Error::EntropyUndefined(format!(
                "no decomposition into distinguishable pure states in `{}`",
                self.space.name()
            ))),
        }
    }
}

/// The entropy oracle a model supplies, if any; separable-type models have none.
pub fn oracle_for(space: &StateSpace) -> Option<Box<dyn EntropyOracle + '_>> {
    match space.representation() {
        Representation::Polytope { .. } => Some(Box::new(PolytopeEntropy::new(space))),
        Representation::Matrix(m) if m.kind == MatrixKind::Quantum => {
            Some(Box::new(QuantumEntropy { dim: m.dim() }))
        }
        Representation::Matrix(_) => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Concavity {
    pub mixed: f64,
    pub average: f64,
    /// `H(mixture) - average`, nonnegative for a concave entropy.
    pub slack: f64,
    pub holds: bool,
}

/// Compares `H(pρ1 + (1-p)ρ2)` with `pH(ρ1) + (1-p)H(ρ2)`.
pub fn concavity_check(
    rho1: &State,
    rho2: &State,
    p: f64,
    oracle: &dyn EntropyOracle,
) -> Result<Concavity> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbabilities(format!("mixing weight {p}")));
    }
    let mixed = oracle.entropy(&rho1.mix(rho2, p))?;
    let average = p * oracle.entropy(rho1)? + (1.0 - p) * oracle.entropy(rho2)?;
    let slack = mixed - average;
    Ok(Concavity {
        mixed,
        average,
        slack,
        holds: slack >= -ENTROPY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermMat;
    use crate::models::{make_classical, make_square_bit};

    fn st(v: &[f64]) -> State {
        State::from_coords_unchecked(v.to_vec())
    }

    #[test]
    fn shannon_values() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!(
            (shannon_entropy(&[1.0 / 3.0, 2.0 / 3.0]).unwrap() - 0.636_514_168_294_812_8).abs()
                < 1e-12
        );
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
        assert!(shannon_entropy(&[]).is_err());
    }

    #[test]
    fn classical_uniqueness() {
        let space = make_classical(3).unwrap();
        let oracle = PolytopeEntropy::new(&space);
        let h = oracle.entropy(&st(&[0.2, 0.3, 0.5])).unwrap();
        assert!((h - ClassicalEntropy.entropy(&st(&[0.2, 0.3, 0.5])).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn square_bit_entropy_defined_at_center_not_at_interior_point() {
        let space = make_square_bit();
        let oracle = PolytopeEntropy::new(&space);
        assert!((oracle.entropy(&st(&[1.0, 0.0, 0.0])).unwrap() - 2f64.ln()).abs() < 1e-12);
        // off the diagonals and edges nothing decomposes into two distinguishable vertices
        assert!(matches!(
            oracle.entropy(&st(&[1.0, 0.3, 0.1])),
            Err(Error::EntropyUndefined(_))
        ));
    }

    #[test]
    fn quantum_oracle_and_set() {
        let q = QuantumEntropy { dim: 2 };
        let s = st(&linalg::to_coords(&HermMat::qubit(0.0, 0.0, 1.0 / 3.0)));
        let h = q.entropy(&s).unwrap();
        assert!((h - 0.636_514_168_294_812_8).abs() < 1e-12);
        let set = q.decomposition_set(&s).unwrap();
        assert_eq!(
            check_entropy_uniqueness(&set),
            Uniqueness::Unique(set.decompositions[0].entropy())
        );
    }

    #[test]
    fn concavity_classical() {
        let c =
            concavity_check(&st(&[1.0, 0.0]), &st(&[0.0, 1.0]), 0.5, &ClassicalEntropy).unwrap();
        assert!(c.holds && (c.slack - 2f64.ln()).abs() < 1e-15);
        assert!(
            concavity_check(&st(&[1.0, 0.0]), &st(&[0.0, 1.0]), 1.5, &ClassicalEntropy).is_err()
        );
    }
}
