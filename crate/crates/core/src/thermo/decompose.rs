//! Decompositions of a state into perfectly distinguishable pure states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, eig_herm, HermMat};
use crate::space::{max_abs_diff, Effect, MatrixKind, Measurement, State, StateSpace, EQ_TOL};

/// Smallest probability a component may carry.
pub const MIN_PROB: f64 = 1e-12;
/// Tolerance on `Σ p_i = 1`.
pub const PROB_SUM_TOL: f64 = 1e-12;
/// Least-squares residual accepted when solving for weights.
pub const LSQ_TOL: f64 = 1e-9;

/// `ρ = Σ p_i ρ_i` with pure, perfectly distinguishable `ρ_i` and the measurement witnessing it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PdpDecomposition {
    probs: Vec<f64>,
    states: Vec<State>,
    witness: Measurement,
}

impl PdpDecomposition {
    /// Checked construction: positive weights summing to one, pure members, and
    /// `e_j(ρ_j') = δ_jj'` for the witness.
    pub fn new(
        space: &StateSpace,
        probs: Vec<f64>,
        states: Vec<State>,
        witness: Measurement,
    ) -> Result<Self> {
        if probs.is_empty() || probs.len() != states.len() || witness.len() != states.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} weights, {} states, {} witness effects",
                probs.len(),
                states.len(),
                witness.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| p.is_nan() || **p <= MIN_PROB) {
            return Err(Error::InvalidDecomposition(format!(
                "weight {p} is not positive"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDecomposition(format!("weights sum to {sum}")));
        }
        for (i, s) in states.iter().enumerate() {
            if s.coords().len() != space.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.ambient_dim(),
                    got: s.coords().len(),
                });
            }
            if !space.is_pure(s) {
                return Err(Error::InvalidDecomposition(format!(
                    "state {i} is not pure"
                )));
            }
        }
        for (j, e) in witness.effects().iter().enumerate() {
            for (jp, s) in states.iter().enumerate() {
                let want = if j == jp { 1.0 } else { 0.0 };
                let got = e.eval(s.coords());
                if (got - want).abs() > EQ_TOL {
                    return Err(Error::InvalidDecomposition(format!(
                        "witness effect {j} gives {got} on state {jp}"
                    )));
                }
            }
        }
        Ok(Self {
            probs,
            states,
            witness,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn witness(&self) -> &Measurement {
        &self.witness
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `Σ p_i ρ_i`.
    pub fn target(&self) -> State {
        let d = self.states[0].coords().len();
        let mut acc = vec![0.0; d];
        for (p, s) in self.probs.iter().zip(&self.states) {
            for (a, v) in acc.iter_mut().zip(s.coords()) {
                *a += p * v;
            }
        }
        State::from_coords_unchecked(acc)
    }

    /// Shannon entropy of the weights, in nats.
    pub fn entropy(&self) -> f64 {
        super::shannon_entropy(&self.probs).expect("weights validated on construction")
    }
}

/// All decompositions of a state found by enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionSet {
    pub target: State,
    pub decompositions: Vec<PdpDecomposition>,
    /// Whether the enumeration covered every candidate within its size cap.
    pub complete: bool,
    /// Vertex subsets skipped because they are affinely dependent.
    pub rejected_dependent: usize,
}

impl DecompositionSet {
    /// Distinct weight distributions, each sorted in decreasing order.
    pub fn distributions(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for d in &self.decompositions {
            let mut p = d.probs().to_vec();
            p.sort_by(|a, b| b.total_cmp(a));
            let seen = out
                .iter()
                .any(|q| q.len() == p.len() && max_abs_diff(q, &p) <= EQ_TOL);
            if !seen {
                out.push(p);
            }
        }
        out
    }
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, f)?;
            cur.pop();
        }
        Ok(())
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

/// Enumerates decompositions of `ρ` over subsets of at most `max_size` vertices (polytopes).
///
/// For each affinely independent subset the weights are the least-squares
/// solution of `Σ p_i v_i = ρ`; subsets with a residual above `1e-9`, a
/// vanishing weight, or no distinguishing measurement are discarded.
pub fn enumerate_pdp_decompositions(
    rho: &State,
    space: &StateSpace,
    max_size: usize,
) -> Result<DecompositionSet> {
    let vertices = space.vertices().ok_or_else(|| {
        Error::Unsupported("decomposition enumeration needs an explicit vertex list".into())
    })?;
    if !space.contains(rho.coords())? {
        return Err(Error::NotMember);
    }
    let d = space.ambient_dim();
    let n = vertices.len();
    let mut found = Vec::new();
    let mut rejected = 0;
    let target = DVector::from_column_slice(rho.coords());
    for k in 1..=max_size.min(n) {
        for_each_subset(n, k, &mut |subset| {
            // affine independence of vertices on the normalization hyperplane is linear independence
            let m = DMatrix::from_fn(d, k, |r, c| vertices[subset[c]][r]);
            let svd = m.clone().svd(true, true);
            if svd.rank(1e-10) < k {
                rejected += 1;
                return Ok(());
            }
            let p = svd
                .solve(&target, 1e-12)
                .map_err(|e| Error::InvalidDecomposition(e.to_string()))?;
            if (&m * &p - &target).amax() > LSQ_TOL || p.iter().any(|x| *x <= MIN_PROB) {
                return Ok(());
            }
            let sum = p.sum();
            let probs: Vec<f64> = p.iter().map(|x| x / sum).collect();
            let states: Vec<State> = subset
                .iter()
                .map(|&i| State::from_coords_unchecked(vertices[i].clone()))
                .collect();
            let witness = if k == 1 {
                Some(Measurement::new_unchecked(vec![space.unit().clone()]))
            } else {
                space.perfectly_distinguishable(&states)?
            };
            if let Some(w) = witness {
                found.push(PdpDecomposition::new(space, probs, states, w)?);
            }
            Ok(())
        })?;
    }
    Ok(DecompositionSet {
        target: rho.clone(),
        decompositions: found,
        complete: true,
        rejected_dependent: rejected,
    })
}

/// A distinguishing measurement for `states`.
///
/// Polytopes use the distinguishability LP. Matrix models accept mutually
/// orthogonal pure states and use their projectors, the last one completed
/// to the identity; the result is checked as a measurement of the model.
pub fn find_witness(space: &StateSpace, states: &[State]) -> Result<Measurement> {
    if states.len() == 1 {
        return Ok(Measurement::new_unchecked(vec![space.unit().clone()]));
    }
    if space.vertices().is_some() {
        return space
            .perfectly_distinguishable(states)?
            .ok_or(Error::NotDistinguishable);
    }
    let mats: Vec<HermMat> = states
        .iter()
        .map(|s| space.matrix_of(s.coords()))
        .collect::<Result<_>>()?;
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            if linalg::hs_inner(a, b)?.abs() > EQ_TOL {
                return Err(Error::NotDistinguishable);
            }
        }
    }
    let k = mats.len();
    let rest = mats[..k - 1]
        .iter()
        .fold(HermMat::zeros(mats[0].dim()), |acc, m| &acc + m);
    let mut effects: Vec<Effect> = mats[..k - 1].iter().map(Effect::from_matrix).collect();
    effects.push(Effect::from_matrix(
        &(&HermMat::identity(mats[0].dim()) - &rest),
    ));
    space.measurement(effects)
}

/// Checked decomposition with an automatically found witness.
pub fn decomposition_with_witness(
    space: &StateSpace,
    probs: Vec<f64>,
    states: Vec<State>,
) -> Result<PdpDecomposition> {
    let witness = find_witness(space, &states)?;
    PdpDecomposition::new(space, probs, states, witness)
}

/// Decomposition along an orthonormal basis of kets, dropping zero-weight directions.
///
/// The witness consists of the basis projectors; projectors of dropped
/// directions are merged into the last kept effect.
pub fn basis_decomposition(
    space: &StateSpace,
    rho: &HermMat,
    basis: &[Vec<Complex64>],
) -> Result<PdpDecomposition> {
    let dim = rho.dim();
    if basis.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: basis.len(),
        });
    }
    let mut probs = Vec::new();
    let mut states = Vec::new();
    let mut effects: Vec<HermMat> = Vec::new();
    let mut dropped = HermMat::zeros(dim);
    for v in basis {
        let p = rho.expectation(v);
        let proj = HermMat::projector(v);
        if p > MIN_PROB {
            probs.push(p);
            states.push(State::from_coords_unchecked(linalg::to_coords(&proj)));
            effects.push(proj);
        } else {
            if p < -EQ_TOL {
                return Err(Error::InvalidDecomposition(format!("negative weight {p}")));
            }
            dropped = &dropped + &proj;
        }
    }
    let last = effects
        .last_mut()
        .ok_or_else(|| Error::InvalidDecomposition("zero state".into()))?;
    *last = &*last + &dropped;
    let sum: f64 = probs.iter().sum();
    let probs = probs.into_iter().map(|p| p / sum).collect();
    let effects = effects.iter().map(Effect::from_matrix).collect();
    PdpDecomposition::new(space, probs, states, Measurement::new_unchecked(effects))
}

/// Spectral decomposition of a density matrix, in the quantum model of matching dimension.
pub fn quantum_pdp(rho: &HermMat) -> Result<PdpDecomposition> {
    let dim = rho.dim();
    if (rho.trace() - 1.0).abs() > EQ_TOL {
        return Err(Error::NotNormalized(rho.trace()));
    }
    let eig = eig_herm(rho)?;
    if *eig.values.last().unwrap() < -EQ_TOL {
        return Err(Error::NotMember);
    }
    let space = StateSpace::matrix(format!("quantum:{dim}"), vec![dim], MatrixKind::Quantum);
    basis_decomposition(&space, rho, &eig.vectors)
}
