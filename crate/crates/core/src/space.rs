//! State spaces and the effects that measure them.
//!
//! Every model lives in a real coordinate space. Polytope models list their
//! pure states explicitly; matrix models vectorize density matrices with
//! [`crate::linalg::to_coords`] and delegate membership to a model oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_herm, HermMat};
use crate::lp::{self, Bound, LinearProgram};
use crate::models::sep;

/// Equality tolerance for coordinates and probabilities.
pub const EQ_TOL: f64 = 1e-9;
/// Vertices closer than this (max-norm) are merged.
pub const DUP_TOL: f64 = 1e-12;
/// Measurements must sum to the unit effect coefficientwise within this.
pub const UNIT_SUM_TOL: f64 = 1e-12;
/// Slack accepted by the product-state minimization when validating SEP effects.
pub const SEP_EFFECT_TOL: f64 = 1e-6;

/// Affine functional `x ↦ coeffs·x + constant`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Effect {
    pub coeffs: Vec<f64>,
    #[serde(default)]
    pub constant: f64,
}

impl Effect {
    pub fn new(coeffs: Vec<f64>, constant: f64) -> Self {
        Self { coeffs, constant }
    }

    pub fn linear(coeffs: Vec<f64>) -> Self {
        Self::new(coeffs, 0.0)
    }

    /// `x ↦ Tr(E x)` in the Hermitian coordinates.
    pub fn from_matrix(e: &HermMat) -> Self {
        Self::linear(linalg::to_coords(e))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.coeffs, x) + self.constant
    }

    /// Linear form agreeing with `self` on the hyperplane `unit = 1`; this is
    /// the extension used on subnormalized states.
    pub fn homogenized(&self, unit: &Effect) -> Vec<f64> {
        self.coeffs
            .iter()
            .zip(&unit.coeffs)
            .map(|(a, u)| a + self.constant * u)
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(
            self.coeffs.iter().map(|a| a * s).collect(),
            self.constant * s,
        )
    }

    pub fn plus(&self, other: &Effect) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            self.constant + other.constant,
        )
    }

    pub fn minus(&self, other: &Effect) -> Self {
        self.plus(&other.scaled(-1.0))
    }

    /// Largest coefficient difference, constant included.
    pub fn max_abs_diff(&self, other: &Effect) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold((self.constant - other.constant).abs(), f64::max)
    }
}

/// A normalized state, as coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(Vec<f64>);

impl State {
    /// Wraps coordinates without any membership check.
    pub fn from_coords_unchecked(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// `p·self + (1-p)·other`.
    pub fn mix(&self, other: &State, p: f64) -> State {
        State(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| p * a + (1.0 - p) * b)
                .collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &State) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

/// A subnormalized state; its weight is the unit effect applied to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubState(Vec<f64>);

impl SubState {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn weight(&self, space: &StateSpace) -> f64 {
        space.unit().eval(&self.0)
    }

    /// `coords / weight`, or `None` when the weight is negligible.
    pub fn normalized(&self, space: &StateSpace) -> Option<State> {
        let w = self.weight(space);
        (w > 1e-12).then(|| State(self.0.iter().map(|v| v / w).collect()))
    }
}

/// An ordered list of effects summing to the unit effect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    effects: Vec<Effect>,
}

impl Measurement {
    /// Wraps effects without validation; use [`StateSpace::measurement`] for checked construction.
    pub fn new_unchecked(effects: Vec<Effect>) -> Self {
        Self { effects }
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Outcome probabilities on a state.
    pub fn probabilities(&self, x: &[f64]) -> Vec<f64> {
        self.effects.iter().map(|e| e.eval(x)).collect()
    }
}

/// Which family of matrices a matrix model is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    /// All density matrices.
    Quantum,
    /// Convex hull of pure product states on `C^2 ⊗ C^2`.
    Separable,
    /// The separable states extended by the two entangled pure states of the omega-bar fixture.
    OmegaBar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixModel {
    pub hilbert_dims: Vec<usize>,
    pub kind: MatrixKind,
}

impl MatrixModel {
    pub fn dim(&self) -> usize {
        self.hilbert_dims.iter().product()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Polytope { vertices: Vec<Vec<f64>> },
    Matrix(MatrixModel),
}

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Inside,
    Outside,
    /// The oracle found no certificate either way (sampling-based separability).
    Unknown,
}

impl Membership {
    pub fn is_inside(self) -> bool {
        self == Membership::Inside
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    name: String,
    ambient_dim: usize,
    unit: Effect,
    repr: Representation,
}

impl StateSpace {
    /// Polytope from its vertices. Duplicates are pruned; every vertex must be normalized.
    pub fn polytope(
        name: impl Into<String>,
        unit: Effect,
        vertices: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let d = unit.coeffs.len();
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
            let u = unit.eval(&v);
            if (u - 1.0).abs() > EQ_TOL {
                return Err(Error::NotNormalized(u));
            }
            if !kept.iter().any(|k| max_abs_diff(k, &v) <= DUP_TOL) {
                kept.push(v);
            }
        }
        if kept.is_empty() {
            return Err(Error::InvalidDecomposition(
                "polytope without vertices".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            ambient_dim: d,
            unit,
            repr: Representation::Polytope { vertices: kept },
        })
    }

    pub fn matrix(name: impl Into<String>, hilbert_dims: Vec<usize>, kind: MatrixKind) -> Self {
        let model = MatrixModel { hilbert_dims, kind };
        let d = model.dim();
        Self {
            name: name.into(),
            ambient_dim: linalg::coord_len(d),
            unit: Effect::from_matrix(&HermMat::identity(d)),
            repr: Representation::Matrix(model),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn unit(&self) -> &Effect {
        &self.unit
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn vertices(&self) -> Option<&[Vec<f64>]> {
        match &self.repr {
            Representation::Polytope { vertices } => Some(vertices),
            Representation::Matrix(_) => None,
        }
    }

    pub fn matrix_model(&self) -> Option<&MatrixModel> {
        match &self.repr {
            Representation::Matrix(m) => Some(m),
            Representation::Polytope { .. } => None,
        }
    }

    /// Hilbert-space dimension for matrix models.
    pub fn matrix_dim(&self) -> Option<usize> {
        self.matrix_model().map(MatrixModel::dim)
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Density matrix represented by a coordinate vector (matrix models only).
    pub fn matrix_of(&self, x: &[f64]) -> Result<HermMat> {
        let d = self.matrix_dim().ok_or_else(|| {
            Error::Unsupported(format!("`{}` has no matrix representation", self.name))
        })?;
        linalg::from_coords(d, x)
    }

    pub fn state_from_matrix(&self, rho: &HermMat) -> Result<State> {
        let d = self.matrix_dim().ok_or_else(|| {
            Error::Unsupported(format!("`{}` has no matrix representation", self.name))
        })?;
        if rho.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: rho.dim(),
            });
        }
        self.state(linalg::to_coords(rho))
    }

    /// Checked state construction: normalized and inside the space.
    pub fn state(&self, coords: Vec<f64>) -> Result<State> {
        match self.membership(&coords)? {
            Membership::Inside => Ok(State(coords)),
            _ => Err(Error::NotMember),
        }
    }

    /// Membership of a normalized point.
    pub fn membership(&self, x: &[f64]) -> Result<Membership> {
        self.check_len(x)?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let u = self.unit.eval(x);
        if (u - 1.0).abs() > EQ_TOL {
            return Err(Error::NotNormalized(u));
        }
        match &self.repr {
            Representation::Polytope { vertices } => {
                Ok(if hull_coefficients(vertices, x)?.is_some() {
                    Membership::Inside
                } else {
                    Membership::Outside
                })
            }
            Representation::Matrix(model) => {
                let rho = linalg::from_coords(model.dim(), x)?;
                match model.kind {
                    MatrixKind::Quantum => {
                        let eig = eig_herm(&rho)?;
                        Ok(if *eig.values.last().unwrap() >= -EQ_TOL {
                            Membership::Inside
                        } else {
                            Membership::Outside
                        })
                    }
                    MatrixKind::Separable => sep::membership(&rho, &[]),
                    MatrixKind::OmegaBar => {
                        let (s1, s2) = crate::models::omega_bar::sigma_pair();
                        sep::membership(&rho, &[s1, s2])
                    }
                }
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.membership(x)?.is_inside())
    }

    /// Extremality test: a listed vertex for polytopes, top eigenvalue one for matrix models.
    pub fn is_pure(&self, state: &State) -> bool {
        match &self.repr {
            Representation::Polytope { vertices } => vertices
                .iter()
                .any(|v| max_abs_diff(v, state.coords()) <= EQ_TOL),
            Representation::Matrix(model) => linalg::from_coords(model.dim(), state.coords())
                .and_then(|m| eig_herm(&m))
                .map(|e| e.values[0] >= 1.0 - EQ_TOL)
                .unwrap_or(false),
        }
    }

    /// Checks `0 <= e <= 1` on the whole space.
    pub fn validate_effect(&self, e: &Effect) -> Result<()> {
        self.check_len(&e.coeffs)?;
        match &self.repr {
            Representation::Polytope { vertices } => {
                for (i, v) in vertices.iter().enumerate() {
                    let val = e.eval(v);
                    if !(-EQ_TOL..=1.0 + EQ_TOL).contains(&val) {
                        return Err(Error::InvalidEffect(format!("value {val} at vertex {i}")));
                    }
                }
                Ok(())
            }
            Representation::Matrix(model) => {
                let unit_m = HermMat::identity(model.dim());
                let em = linalg::from_coords(model.dim(), &e.homogenized(&self.unit))?;
                let complement = &unit_m - &em;
                match model.kind {
                    MatrixKind::Quantum => {
                        let eig = eig_herm(&em)?;
                        let (lo, hi) = (*eig.values.last().unwrap(), eig.values[0]);
                        if lo < -EQ_TOL || hi > 1.0 + EQ_TOL {
                            return Err(Error::InvalidEffect(format!(
                                "spectrum [{lo}, {hi}] outside [0, 1]"
                            )));
                        }
                        Ok(())
                    }
                    MatrixKind::Separable | MatrixKind::OmegaBar => {
                        for (label, m) in [("e", &em), ("u - e", &complement)] {
                            let min =
                                sep::min_over_product_states(m, sep::MinimizerConfig::default());
                            if min < -SEP_EFFECT_TOL {
                                return Err(Error::InvalidEffect(format!(
                                    "{label} reaches {min} on product states"
                                )));
                            }
                        }
                        if model.kind == MatrixKind::OmegaBar {
                            let (s1, s2) = crate::models::omega_bar::sigma_pair();
                            for s in [&s1, &s2] {
                                let val = linalg::hs_inner(&em, s)?;
                                if !(-EQ_TOL..=1.0 + EQ_TOL).contains(&val) {
                                    return Err(Error::InvalidEffect(format!(
                                        "value {val} on an entangled extreme point"
                                    )));
                                }
                            }
                        }
                        Ok(())
                    }
                }
            }
        }
    }

    /// Checked measurement: every effect valid and the sum equal to the unit effect.
    pub fn measurement(&self, effects: Vec<Effect>) -> Result<Measurement> {
        if effects.is_empty() {
            return Err(Error::InvalidMeasurement("no effects".into()));
        }
        let mut sum = Effect::new(vec![0.0; self.ambient_dim], 0.0);
        for e in &effects {
            self.check_len(&e.coeffs)?;
            sum = sum.plus(e);
        }
        let dev = sum.max_abs_diff(&self.unit);
        if dev > UNIT_SUM_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "effects sum to the unit effect only within {dev:e}"
            )));
        }
        for e in &effects {
            self.validate_effect(e)?;
        }
        Ok(Measurement { effects })
    }

    /// Searches for a measurement with `e_j(ρ_j') = δ_jj'` (polytope models).
    ///
    /// The LP has one free affine functional per state, a nonnegative slack for
    /// each (effect, vertex) pair carrying `e_j(v) >= 0`, and the rows
    /// `Σ_j e_j = u` and `e_j(ρ_j') = δ`. The upper bound `e_j(v) <= 1` follows
    /// from the other two.
    pub fn perfectly_distinguishable(&self, states: &[State]) -> Result<Option<Measurement>> {
        let Representation::Polytope { vertices } = &self.repr else {
            return Err(Error::Unsupported(
                "distinguishability LP needs an explicit vertex list".into(),
            ));
        };
        if states.len() < 2 {
            return Err(Error::InvalidMeasurement("need at least two states".into()));
        }
        for s in states {
            if !self.contains(s.coords())? {
                return Err(Error::NotMember);
            }
        }
        let d = self.ambient_dim;
        let k = states.len();
        let width = d + 1;
        let slack0 = k * width;
        let mut lp = LinearProgram::new(slack0 + k * vertices.len());
        for j in 0..slack0 {
            lp.set_bounds(j, Bound::FREE.lower, Bound::FREE.upper);
        }
        for j in 0..k {
            for (vi, v) in vertices.iter().enumerate() {
                let mut row: Vec<(usize, f64)> = v
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| (j * width + i, x))
                    .collect();
                row.push((j * width + d, 1.0));
                row.push((slack0 + j * vertices.len() + vi, -1.0));
                lp.add_eq_sparse(&row, 0.0);
            }
        }
        for i in 0..width {
            let row: Vec<(usize, f64)> = (0..k).map(|j| (j * width + i, 1.0)).collect();
            let rhs = if i < d {
                self.unit.coeffs[i]
            } else {
                self.unit.constant
            };
            lp.add_eq_sparse(&row, rhs);
        }
        for j in 0..k {
            for (jp, s) in states.iter().enumerate() {
                let mut row: Vec<(usize, f64)> = s
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| (j * width + i, x))
                    .collect();
                row.push((j * width + d, 1.0));
                lp.add_eq_sparse(&row, if j == jp { 1.0 } else { 0.0 });
            }
        }
        let res = lp::solve(&lp)?;
        let Some(x) = res.point() else {
            return Ok(None);
        };
        let mut effects: Vec<Effect> = (0..k)
            .map(|j| Effect::new(x[j * width..j * width + d].to_vec(), x[j * width + d]))
            .collect();
        // Make the unit-sum identity exact.
        let partial = effects[..k - 1]
            .iter()
            .fold(Effect::new(vec![0.0; d], 0.0), |acc, e| acc.plus(e));
        effects[k - 1] = self.unit.minus(&partial);
        for (j, e) in effects.iter().enumerate() {
            for (jp, s) in states.iter().enumerate() {
                let want = if j == jp { 1.0 } else { 0.0 };
                if (e.eval(s.coords()) - want).abs() > EQ_TOL {
                    return Ok(None);
                }
            }
        }
        Ok(Some(self.measurement(effects)?))
    }
}

/// Convex weights `λ` over `vertices` reproducing `x`, if any.
pub fn hull_coefficients(vertices: &[Vec<f64>], x: &[f64]) -> Result<Option<Vec<f64>>> {
    let n = vertices.len();
    let mut lp = LinearProgram::new(n);
    for i in 0..x.len() {
        lp.add_eq(vertices.iter().map(|v| v[i]).collect(), x[i]);
    }
    lp.add_eq(vec![1.0; n], 1.0);
    let res = lp::solve(&lp)?;
    Ok(res.point().map(<[f64]>::to_vec))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{make_classical, make_qubit, make_square_bit};

    fn square_vertex(x: f64, y: f64) -> State {
        State::from_coords_unchecked(vec![1.0, x, y])
    }

    #[test]
    fn square_bit_membership() {
        let s = make_square_bit();
        assert!(s.contains(&[1.0, 0.0, 0.0]).unwrap());
        // vertex + 0.1 (vertex - center)
        assert!(!s.contains(&[1.0, 1.1, 1.1]).unwrap());
        for v in s.vertices().unwrap() {
            assert!(s.contains(v).unwrap());
        }
    }

    #[test]
    fn membership_requires_normalization() {
        let s = make_square_bit();
        assert!(matches!(
            s.membership(&[0.5, 0.0, 0.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            s.membership(&[1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn duplicate_vertices_pruned() {
        let unit = Effect::linear(vec![1.0, 1.0]);
        let s = StateSpace::polytope(
            "dup",
            unit,
            vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(s.vertices().unwrap().len(), 2);
    }

    #[test]
    fn opposite_square_vertices_are_distinguishable() {
        let s = make_square_bit();
        let m = s
            .perfectly_distinguishable(&[square_vertex(1.0, 1.0), square_vertex(-1.0, -1.0)])
            .unwrap()
            .expect("diagonal pair is distinguishable");
        assert_eq!(m.len(), 2);
        assert!((m.effects()[0].eval(&[1.0, 1.0, 1.0]) - 1.0).abs() < 1e-9);
        assert!(m.effects()[0].eval(&[1.0, -1.0, -1.0]).abs() < 1e-9);
    }

    #[test]
    fn identical_states_are_not_distinguishable() {
        let s = make_square_bit();
        let v = square_vertex(1.0, -1.0);
        assert!(s
            .perfectly_distinguishable(&[v.clone(), v])
            .unwrap()
            .is_none());
    }

    #[test]
    fn classical_vertices_get_indicator_effects() {
        let s = make_classical(3).unwrap();
        let states: Vec<State> = s
            .vertices()
            .unwrap()
            .iter()
            .map(|v| State::from_coords_unchecked(v.clone()))
            .collect();
        let m = s.perfectly_distinguishable(&states).unwrap().unwrap();
        for (j, e) in m.effects().iter().enumerate() {
            for (i, st) in states.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.eval(&st.0) - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn purity_checks() {
        let sq = make_square_bit();
        assert!(!sq.is_pure(&State::from_coords_unchecked(vec![1.0, 0.0, 0.0])));
        assert!(sq.is_pure(&square_vertex(-1.0, 1.0)));
        let q = make_qubit();
        let pure = q
            .state_from_matrix(&HermMat::bloch([0.0, 0.6, 0.8]))
            .unwrap();
        assert!(q.is_pure(&pure));
        let mixed = q
            .state_from_matrix(&HermMat::qubit(0.0, 0.6 * 0.99, 0.8 * 0.99))
            .unwrap();
        assert!(!q.is_pure(&mixed));
    }

    #[test]
    fn qubit_membership_is_bloch_ball() {
        let q = make_qubit();
        assert!(q
            .contains(&linalg::to_coords(&HermMat::qubit(0.6, 0.0, 0.8)))
            .unwrap());
        assert!(!q
            .contains(&linalg::to_coords(&HermMat::qubit(0.7, 0.0, 0.8)))
            .unwrap());
    }

    #[test]
    fn measurement_must_sum_to_unit() {
        let s = make_square_bit();
        let e = Effect::new(vec![0.0, 0.5, 0.0], 0.5);
        assert!(s.measurement(vec![e.clone(), e.clone()]).is_err());
        let comp = s.unit().minus(&e);
        assert_eq!(s.measurement(vec![e, comp]).unwrap().len(), 2);
    }

    #[test]
    fn effect_outside_unit_interval_rejected() {
        let s = make_square_bit();
        let e = Effect::new(vec![0.0, 1.0, 0.0], 0.5);
        assert!(matches!(
            s.validate_effect(&e),
            Err(Error::InvalidEffect(_))
        ));
        let q = make_qubit();
        let too_big = Effect::from_matrix(&HermMat::identity(2).scale(1.5));
        assert!(q.validate_effect(&too_big).is_err());
    }

    #[test]
    fn distinguishability_rejects_foreign_states() {
        let s = make_square_bit();
        let outside = State::from_coords_unchecked(vec![1.0, 2.0, 0.0]);
        let err = s
            .perfectly_distinguishable(&[outside, square_vertex(1.0, 1.0)])
            .unwrap_err();
        assert!(matches!(err, Error::NotMember));
    }
}
