//! Instruments as families of affine maps, and the preorder comparing them at a state.
//!
//! Events act on subnormalized states through their linear extension: an
//! affine map `x ↦ M x + o` agrees on normalized states with
//! `y ↦ M y + o u(y)`, which is what composition and repeatability need.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_herm, HermMat};
use crate::lp::{self, LinearProgram};
use crate::space::{
    dot, hull_coefficients, max_abs_diff, Effect, MatrixKind, Representation, State, StateSpace,
    SubState, EQ_TOL,
};
use crate::thermo::{decomposition_with_witness, PdpDecomposition};

/// Outcome probabilities at or below this are treated as impossible.
pub const ZERO_WEIGHT: f64 = 1e-12;
/// Column sums of a conditional kernel must equal one within this.
pub const KERNEL_TOL: f64 = 1e-12;

/// Square matrix plus offset acting on ambient coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn linear(matrix: Vec<Vec<f64>>) -> Self {
        let d = matrix.len();
        Self {
            matrix,
            offset: vec![0.0; d],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::linear(
            (0..d)
                .map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect())
                .collect(),
        )
    }

    fn check(&self, d: usize) -> Result<()> {
        if self.matrix.len() != d || self.matrix.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: self.matrix.len(),
            });
        }
        if !self.offset.is_empty() && self.offset.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: self.offset.len(),
            });
        }
        Ok(())
    }

    /// Linear extension `M + o uᵀ`.
    fn homogenized(&self, unit: &Effect) -> Vec<Vec<f64>> {
        self.matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let o = self.offset.get(i).copied().unwrap_or(0.0);
                row.iter()
                    .zip(&unit.coeffs)
                    .map(|(m, u)| m + o * u)
                    .collect()
            })
            .collect()
    }
}

/// How an outcome of a refined instrument relates to the instrument it refines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeLabel {
    /// Outcome kept from the original instrument.
    Original(usize),
    /// Piece `piece` of the split output of outcome `parent`.
    Split { parent: usize, piece: usize },
}

/// Measure-and-prepare-pure: on outcome `j` prepare the pure state `σ_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MppInstrument {
    effects: Vec<Effect>,
    outputs: Vec<State>,
    labels: Vec<OutcomeLabel>,
}

impl MppInstrument {
    /// Checked construction: the effects form a measurement and every output is a pure member.
    pub fn new(space: &StateSpace, effects: Vec<Effect>, outputs: Vec<State>) -> Result<Self> {
        if effects.len() != outputs.len() {
            return Err(Error::InvalidInstrument(format!(
                "{} effects but {} outputs",
                effects.len(),
                outputs.len()
            )));
        }
        let meas = space.measurement(effects)?;
        for (j, s) in outputs.iter().enumerate() {
            if !space.contains(s.coords())? {
                return Err(Error::InvalidInstrument(format!(
                    "output {j} is not a state"
                )));
            }
            if !space.is_pure(s) {
                return Err(Error::InvalidInstrument(format!("output {j} is not pure")));
            }
        }
        let labels = (0..outputs.len()).map(OutcomeLabel::Original).collect();
        Ok(Self {
            effects: meas.effects().to_vec(),
            outputs,
            labels,
        })
    }

    pub fn new_unchecked(
        effects: Vec<Effect>,
        outputs: Vec<State>,
        labels: Vec<OutcomeLabel>,
    ) -> Self {
        Self {
            effects,
            outputs,
            labels,
        }
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn outputs(&self) -> &[State] {
        &self.outputs
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.labels
    }
}

/// Arbitrary family of affine maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericInstrument {
    events: Vec<AffineMap>,
}

impl GenericInstrument {
    /// Checked construction; see [`Instrument::validate`].
    pub fn new(space: &StateSpace, events: Vec<AffineMap>) -> Result<Self> {
        let inst = Self { events };
        Instrument::Generic(inst.clone()).validate(space)?;
        Ok(inst)
    }

    pub fn new_unchecked(events: Vec<AffineMap>) -> Self {
        Self { events }
    }

    pub fn events(&self) -> &[AffineMap] {
        &self.events
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instrument {
    Mpp(MppInstrument),
    Generic(GenericInstrument),
}

impl From<MppInstrument> for Instrument {
    fn from(m: MppInstrument) -> Self {
        Instrument::Mpp(m)
    }
}

impl From<GenericInstrument> for Instrument {
    fn from(g: GenericInstrument) -> Self {
        Instrument::Generic(g)
    }
}

impl Instrument {
    /// The single-outcome instrument that does nothing.
    pub fn identity(space: &StateSpace) -> Self {
        Instrument::Generic(GenericInstrument::new_unchecked(vec![AffineMap::identity(
            space.ambient_dim(),
        )]))
    }

    pub fn num_outcomes(&self) -> usize {
        match self {
            Instrument::Mpp(m) => m.effects.len(),
            Instrument::Generic(g) => g.events.len(),
        }
    }

    /// Linear map of event `j` on the cone generated by the states.
    pub fn event_matrix(&self, space: &StateSpace, j: usize) -> Result<Vec<Vec<f64>>> {
        self.check_outcome(j)?;
        let unit = space.unit();
        Ok(match self {
            Instrument::Mpp(m) => {
                let a = m.effects[j].homogenized(unit);
                m.outputs[j]
                    .coords()
                    .iter()
                    .map(|s| a.iter().map(|x| s * x).collect())
                    .collect()
            }
            Instrument::Generic(g) => {
                g.events[j].check(space.ambient_dim())?;
                g.events[j].homogenized(unit)
            }
        })
    }

    /// Outcome effect `u ∘ s_j` as a linear functional.
    pub fn outcome_effect(&self, space: &StateSpace, j: usize) -> Result<Effect> {
        match self {
            Instrument::Mpp(m) => {
                self.check_outcome(j)?;
                Ok(Effect::linear(m.effects[j].homogenized(space.unit())))
            }
            Instrument::Generic(_) => {
                let mat = self.event_matrix(space, j)?;
                let d = space.ambient_dim();
                let u = &space.unit().coeffs;
                Ok(Effect::linear(
                    (0..d)
                        .map(|c| (0..d).map(|r| u[r] * mat[r][c]).sum())
                        .collect(),
                ))
            }
        }
    }

    fn check_outcome(&self, j: usize) -> Result<()> {
        let count = self.num_outcomes();
        if j >= count {
            return Err(Error::OutcomeOutOfRange { index: j, count });
        }
        Ok(())
    }

    /// `s_j(x)` for a normalized or subnormalized `x`.
    pub fn apply(&self, space: &StateSpace, j: usize, x: &[f64]) -> Result<SubState> {
        self.check_outcome(j)?;
        if x.len() != space.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(match self {
            Instrument::Mpp(m) => {
                let w = dot(&m.effects[j].homogenized(space.unit()), x);
                SubState::new(m.outputs[j].coords().iter().map(|s| s * w).collect())
            }
            Instrument::Generic(_) => {
                let mat = self.event_matrix(space, j)?;
                SubState::new(mat.iter().map(|row| dot(row, x)).collect())
            }
        })
    }

    /// All outputs `s_j(ρ)`.
    pub fn outputs_at(&self, space: &StateSpace, x: &[f64]) -> Result<Vec<SubState>> {
        (0..self.num_outcomes())
            .map(|j| self.apply(space, j, x))
            .collect()
    }

    /// Outcome probabilities `e_j(ρ)`.
    pub fn probabilities(&self, space: &StateSpace, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .outputs_at(space, x)?
            .iter()
            .map(|s| s.weight(space))
            .collect())
    }

    /// Normalization and positivity.
    ///
    /// Polytopes are checked at every vertex, which is complete. For matrix
    /// models MPP instruments get the full measurement check; generic ones
    /// are checked for normalization and for positive outputs on the Pauli
    /// eigenstate products only.
    pub fn validate(&self, space: &StateSpace) -> Result<()> {
        if self.num_outcomes() == 0 {
            return Err(Error::InvalidInstrument("no outcomes".into()));
        }
        if let Instrument::Mpp(m) = self {
            MppInstrument::new(space, m.effects.clone(), m.outputs.clone())?;
            return Ok(());
        }
        let probes: Vec<Vec<f64>> = match space.representation() {
            Representation::Polytope { vertices } => vertices.clone(),
            Representation::Matrix(model) => pauli_probes(model.dim())
                .iter()
                .map(linalg::to_coords)
                .collect(),
        };
        let total = (0..self.num_outcomes())
            .try_fold(Effect::linear(vec![0.0; space.ambient_dim()]), |acc, j| {
                self.outcome_effect(space, j).map(|e| acc.plus(&e))
            })?;
        let dev = total.max_abs_diff(space.unit());
        if dev > EQ_TOL {
            return Err(Error::InvalidInstrument(format!(
                "outcome effects sum to the unit effect only within {dev:e}"
            )));
        }
        for (pi, x) in probes.iter().enumerate() {
            for j in 0..self.num_outcomes() {
                let out = self.apply(space, j, x)?;
                let w = out.weight(space);
                if w < -EQ_TOL {
                    return Err(Error::InvalidInstrument(format!(
                        "negative probability {w} for outcome {j} on probe {pi}"
                    )));
                }
                match out.normalized(space) {
                    Some(st) => {
                        if !output_is_member(space, &st)? {
                            return Err(Error::InvalidInstrument(format!(
                                "outcome {j} maps probe {pi} outside the space"
                            )));
                        }
                    }
                    None => {
                        if out.coords().iter().any(|v| v.abs() > EQ_TOL) {
                            return Err(Error::InvalidInstrument(format!(
                                "outcome {j} has zero weight but a nonzero output on probe {pi}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn output_is_member(space: &StateSpace, st: &State) -> Result<bool> {
    match space.representation() {
        // sampling-based separability cannot refute, so only the quantum part is checked here
        Representation::Matrix(m) if m.kind != MatrixKind::Quantum => {
            let rho = space.matrix_of(st.coords())?;
            Ok(*eig_herm(&rho)?.values.last().unwrap() >= -EQ_TOL)
        }
        _ => space.contains(st.coords()),
    }
}

/// Tensor products of Pauli eigenstates for a `dim`-dimensional system made of qubits,
/// or computational-basis and two-level superpositions otherwise.
fn pauli_probes(dim: usize) -> Vec<HermMat> {
    let dirs = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut probes: Vec<HermMat> = vec![HermMat::identity(1)];
    let mut d = 1;
    while d < dim {
        probes = probes
            .iter()
            .flat_map(|p| {
                dirs.iter()
                    .map(move |r| linalg::kron(p, &HermMat::bloch(*r)))
            })
            .collect();
        d *= 2;
    }
    if d == dim {
        probes
    } else {
        (0..dim)
            .map(|i| HermMat::projector(&linalg::ket(dim, i)))
            .collect()
    }
}

/// Conditional distribution `p(j|k)`, stored as rows `j` and columns `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConditionalKernel {
    p: Vec<Vec<f64>>,
}

impl ConditionalKernel {
    pub fn new(p: Vec<Vec<f64>>) -> Result<Self> {
        let rows = p.len();
        if rows == 0 {
            return Err(Error::NonStochastic("empty kernel".into()));
        }
        let cols = p[0].len();
        if p.iter().any(|r| r.len() != cols) {
            return Err(Error::NonStochastic("ragged rows".into()));
        }
        for k in 0..cols {
            let mut sum = 0.0;
            for (j, row) in p.iter().enumerate() {
                let v = row[k];
                if v.is_nan() || v < -KERNEL_TOL {
                    return Err(Error::NonStochastic(format!("p({j}|{k}) = {v}")));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > KERNEL_TOL {
                return Err(Error::NonStochastic(format!("column {k} sums to {sum}")));
            }
        }
        Ok(Self { p })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            p: (0..n)
                .map(|j| (0..n).map(|k| f64::from(u8::from(j == k))).collect())
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.p.len()
    }

    pub fn cols(&self) -> usize {
        self.p.first().map_or(0, Vec::len)
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.p[j][k]
    }

    pub fn as_rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    /// Kernel of the composite post-processing: first `self`, then `next`.
    pub fn then(&self, next: &ConditionalKernel) -> Result<ConditionalKernel> {
        if next.cols() != self.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                got: next.cols(),
            });
        }
        let p = (0..next.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|k| (0..self.rows()).map(|j| next.p[i][j] * self.p[j][k]).sum())
                    .collect()
            })
            .collect();
        Ok(ConditionalKernel { p })
    }

    pub fn max_abs_diff(&self, other: &ConditionalKernel) -> f64 {
        self.p
            .iter()
            .flatten()
            .zip(other.p.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `s_j := Σ_k p(j|k) t_k`.
pub fn coarse_grain(
    space: &StateSpace,
    t: &Instrument,
    kernel: &ConditionalKernel,
) -> Result<GenericInstrument> {
    let k_count = t.num_outcomes();
    if kernel.cols() != k_count {
        return Err(Error::DimensionMismatch {
            expected: k_count,
            got: kernel.cols(),
        });
    }
    let d = space.ambient_dim();
    let maps: Vec<Vec<Vec<f64>>> = (0..k_count)
        .map(|k| t.event_matrix(space, k))
        .collect::<Result<_>>()?;
    let events = (0..kernel.rows())
        .map(|j| {
            let mut acc = vec![vec![0.0; d]; d];
            for (k, m) in maps.iter().enumerate() {
                let w = kernel.get(j, k);
                if w == 0.0 {
                    continue;
                }
                for (ar, mr) in acc.iter_mut().zip(m) {
                    for (a, v) in ar.iter_mut().zip(mr) {
                        *a += w * v;
                    }
                }
            }
            AffineMap::linear(acc)
        })
        .collect();
    Ok(GenericInstrument::new_unchecked(events))
}

/// Decides `t ≻_ρ s`: a kernel with `s_j(ρ) = Σ_k p(j|k) t_k(ρ)` for all `j`.
pub fn groenewold_majorizes(
    space: &StateSpace,
    t: &Instrument,
    s: &Instrument,
    rho: &State,
) -> Result<Option<ConditionalKernel>> {
    let t_out = t.outputs_at(space, rho.coords())?;
    let s_out = s.outputs_at(space, rho.coords())?;
    let (kc, jc) = (t_out.len(), s_out.len());
    let d = space.ambient_dim();
    let var = |j: usize, k: usize| j * kc + k;
    let mut lp = LinearProgram::new(jc * kc);
    for k in 0..kc {
        let row: Vec<(usize, f64)> = (0..jc).map(|j| (var(j, k), 1.0)).collect();
        lp.add_eq_sparse(&row, 1.0);
    }
    for (j, sj) in s_out.iter().enumerate() {
        for i in 0..d {
            let row: Vec<(usize, f64)> = t_out
                .iter()
                .enumerate()
                .filter(|(_, tk)| tk.coords()[i] != 0.0)
                .map(|(k, tk)| (var(j, k), tk.coords()[i]))
                .collect();
            lp.add_eq_sparse(&row, sj.coords()[i]);
        }
    }
    let res = lp::solve(&lp)?;
    let Some(x) = res.point() else {
        return Ok(None);
    };
    let mut p: Vec<Vec<f64>> = (0..jc)
        .map(|j| (0..kc).map(|k| x[var(j, k)].max(0.0)).collect())
        .collect();
    for k in 0..kc {
        let sum: f64 = (0..jc).map(|j| p[j][k]).sum();
        for row in p.iter_mut() {
            row[k] /= sum;
        }
    }
    Ok(Some(ConditionalKernel::new(p)?))
}

/// Pure-state decomposition of a normalized state, when the model provides one.
pub fn pure_decomposition(space: &StateSpace, state: &State) -> Result<Vec<(f64, State)>> {
    match space.representation() {
        Representation::Polytope { vertices } => {
            let lambda = hull_coefficients(vertices, state.coords())?.ok_or(Error::NotMember)?;
            let pieces: Vec<(f64, State)> = lambda
                .iter()
                .zip(vertices)
                .filter(|(l, _)| **l > ZERO_WEIGHT)
                .map(|(l, v)| (*l, State::from_coords_unchecked(v.clone())))
                .collect();
            Ok(renormalize(pieces))
        }
        Representation::Matrix(model) => {
            if space.is_pure(state) {
                return Ok(vec![(1.0, state.clone())]);
            }
            if model.kind != MatrixKind::Quantum {
                return Err(Error::NotDecomposable(format!(
                    "no pure-decomposition oracle for `{}`",
                    space.name()
                )));
            }
            let eig = eig_herm(&space.matrix_of(state.coords())?)?;
            let pieces = eig
                .values
                .iter()
                .zip(&eig.vectors)
                .filter(|(l, _)| **l > ZERO_WEIGHT)
                .map(|(l, v)| {
                    (
                        *l,
                        State::from_coords_unchecked(linalg::to_coords(&HermMat::projector(v))),
                    )
                })
                .collect();
            Ok(renormalize(pieces))
        }
    }
}

fn renormalize(pieces: Vec<(f64, State)>) -> Vec<(f64, State)> {
    let total: f64 = pieces.iter().map(|p| p.0).sum();
    pieces.into_iter().map(|(w, s)| (w / total, s)).collect()
}

/// Some pure state of the model, used as the output of impossible outcomes.
fn any_pure_state(space: &StateSpace) -> State {
    match space.representation() {
        Representation::Polytope { vertices } => State::from_coords_unchecked(vertices[0].clone()),
        Representation::Matrix(model) => {
            let d = model.dim();
            State::from_coords_unchecked(linalg::to_coords(&HermMat::projector(&linalg::ket(d, 0))))
        }
    }
}

/// Splits every mixed output of `s` at `ρ` into pure pieces, giving an MPP
/// instrument `t` with `t ≻_ρ s`.
///
/// Outcome `j` with normalized output `Σ_l q_l σ_l` becomes outcomes
/// `(l, j)` with effects `q_l e_j` and outputs `σ_l`; outcomes whose output is
/// already pure keep their effect. Outcomes with zero probability at `ρ` are
/// kept unsplit.
pub fn refine_to_pure(space: &StateSpace, s: &Instrument, rho: &State) -> Result<MppInstrument> {
    let mut effects = Vec::new();
    let mut outputs = Vec::new();
    let mut labels = Vec::new();
    for j in 0..s.num_outcomes() {
        let e = s.outcome_effect(space, j)?;
        let out = s.apply(space, j, rho.coords())?;
        let Some(normalized) = (out.weight(space) > ZERO_WEIGHT)
            .then(|| out.normalized(space))
            .flatten()
        else {
            effects.push(e);
            outputs.push(any_pure_state(space));
            labels.push(OutcomeLabel::Original(j));
            continue;
        };
        let pieces = pure_decomposition(space, &normalized)?;
        if pieces.len() == 1 {
            effects.push(e);
            outputs.push(pieces.into_iter().next().unwrap().1);
            labels.push(OutcomeLabel::Original(j));
        } else {
            for (l, (q, sigma)) in pieces.into_iter().enumerate() {
                effects.push(e.scaled(q));
                outputs.push(sigma);
                labels.push(OutcomeLabel::Split {
                    parent: j,
                    piece: l,
                });
            }
        }
    }
    Ok(MppInstrument::new_unchecked(effects, outputs, labels))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Repeatability {
    pub holds: bool,
    /// Whether the probes span the space; if not, `holds` only speaks for the probes.
    pub probes_span: bool,
    pub max_deviation: f64,
}

fn rank(points: &[Vec<f64>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let d = points[0].len();
    let m = DMatrix::from_fn(points.len(), d, |r, c| points[r][c]);
    m.svd(false, false).rank(1e-9)
}

/// Probes certifying repeatability: the vertices of a polytope, nothing for matrix models.
pub fn default_probes(space: &StateSpace) -> Vec<State> {
    space
        .vertices()
        .map(|vs| {
            vs.iter()
                .map(|v| State::from_coords_unchecked(v.clone()))
                .collect()
        })
        .unwrap_or_default()
}

/// Checks `s_{j'} ∘ s_j = δ_{j'j} s_j` on the probe states.
pub fn is_repeatable(
    space: &StateSpace,
    instr: &Instrument,
    probes: &[State],
) -> Result<Repeatability> {
    let mut max_dev: f64 = 0.0;
    let n = instr.num_outcomes();
    for x in probes {
        for j in 0..n {
            let y = instr.apply(space, j, x.coords())?;
            for jp in 0..n {
                let z = instr.apply(space, jp, y.coords())?;
                let dev = if j == jp {
                    max_abs_diff(z.coords(), y.coords())
                } else {
                    z.coords().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
                };
                max_dev = max_dev.max(dev);
            }
        }
    }
    let coords: Vec<Vec<f64>> = probes.iter().map(|p| p.coords().to_vec()).collect();
    let full = match space.vertices() {
        Some(vs) => rank(vs),
        None => space.ambient_dim(),
    };
    Ok(Repeatability {
        holds: max_dev <= EQ_TOL,
        probes_span: rank(&coords) >= full,
        max_deviation: max_dev,
    })
}

/// `max |Σ_j s_j(ρ) - ρ|`.
pub fn preservation_defect(space: &StateSpace, instr: &Instrument, rho: &State) -> Result<f64> {
    let mut total = vec![0.0; space.ambient_dim()];
    for out in instr.outputs_at(space, rho.coords())? {
        for (t, v) in total.iter_mut().zip(out.coords()) {
            *t += v;
        }
    }
    Ok(max_abs_diff(&total, rho.coords()))
}

pub fn is_state_preserving(space: &StateSpace, instr: &Instrument, rho: &State) -> Result<bool> {
    Ok(preservation_defect(space, instr, rho)? <= EQ_TOL)
}

/// The MPP instrument `{e_j, σ_j}` built from a decomposition and its witness.
pub fn make_separating_spm(decomp: &PdpDecomposition) -> Result<MppInstrument> {
    let effects = decomp.witness().effects();
    for (j, e) in effects.iter().enumerate() {
        for (jp, s) in decomp.states().iter().enumerate() {
            let want = if j == jp { 1.0 } else { 0.0 };
            if (e.eval(s.coords()) - want).abs() > EQ_TOL {
                return Err(Error::NotDistinguishable);
            }
        }
    }
    let labels = (0..effects.len()).map(OutcomeLabel::Original).collect();
    Ok(MppInstrument::new_unchecked(
        effects.to_vec(),
        decomp.states().to_vec(),
        labels,
    ))
}

/// Finds a distinguishing measurement for `states` and builds the separating SPM.
pub fn separating_spm_from_states(
    space: &StateSpace,
    probs: Vec<f64>,
    states: Vec<State>,
) -> Result<MppInstrument> {
    make_separating_spm(&decomposition_with_witness(space, probs, states)?)
}
