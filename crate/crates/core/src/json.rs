//! JSON input formats for models and the objects defined on them.
//!
//! Numbers may be JSON numbers, decimal strings of at most 17 significant
//! digits, or rationals such as `"1/3"`, which are read as two exact integers
//! and divided once.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::instruments::{AffineMap, GenericInstrument, Instrument, MppInstrument};
use crate::linalg::{self, HermMat};
use crate::models::{self, OmegaBarFixture, SepQuadruple};
use crate::space::{Effect, MatrixKind, Representation, State, StateSpace};

/// Maximum significant digits accepted in a decimal string.
pub const MAX_DIGITS: usize = 17;

/// A number as written in a model file.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Number(f64),
    Text(String),
}

impl Num {
    pub fn value(&self) -> Result<f64> {
        match self {
            Num::Number(x) => Ok(*x),
            Num::Text(s) => parse_number(s),
        }
    }
}

fn values(v: &[Num]) -> Result<Vec<f64>> {
    v.iter().map(Num::value).collect()
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or("");
    mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|c| *c == '0')
        .count()
}

/// Parses a decimal or rational string.
pub fn parse_number(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a number: `{s}`"));
    if let Some((num, den)) = t.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(n as f64 / d as f64);
    }
    if significant_digits(t) > MAX_DIGITS {
        return Err(Error::Parse(format!(
            "more than {MAX_DIGITS} significant digits in `{s}`"
        )));
    }
    let x: f64 = t.parse().map_err(|_| bad())?;
    if !x.is_finite() {
        return Err(bad());
    }
    Ok(x)
}

/// Shortest decimal string that reads back to `x`.
pub fn format_number(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceSpec {
    Polytope {
        dim: usize,
        unit: Vec<Num>,
        vertices: Vec<Vec<Num>>,
        #[serde(default)]
        name: Option<String>,
    },
    Matrix {
        hilbert_dims: Vec<usize>,
        model: String,
    },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<StateSpace> {
        match self {
            SpaceSpec::Polytope {
                dim,
                unit,
                vertices,
                name,
            } => {
                let unit = values(unit)?;
                let vertices: Vec<Vec<f64>> =
                    vertices.iter().map(|v| values(v)).collect::<Result<_>>()?;
                for v in std::iter::once(&unit).chain(&vertices) {
                    if v.len() != *dim {
                        return Err(Error::DimensionMismatch {
                            expected: *dim,
                            got: v.len(),
                        });
                    }
                }
                StateSpace::polytope(
                    name.clone().unwrap_or_else(|| format!("polytope:{dim}")),
                    Effect::linear(unit),
                    vertices,
                )
            }
            SpaceSpec::Matrix {
                hilbert_dims,
                model,
            } => {
                if hilbert_dims.is_empty() || hilbert_dims.contains(&0) {
                    return Err(Error::Parse(format!("bad hilbert_dims {hilbert_dims:?}")));
                }
                let kind = match model.as_str() {
                    "quantum" | "qubit" => MatrixKind::Quantum,
                    "sep22" | "separable" => MatrixKind::Separable,
                    "omega-bar" => MatrixKind::OmegaBar,
                    other => return Err(Error::UnknownModel(other.to_string())),
                };
                if kind != MatrixKind::Quantum && hilbert_dims != &[2, 2] {
                    return Err(Error::UnknownModel(format!(
                        "{model} with hilbert_dims {hilbert_dims:?}"
                    )));
                }
                let name = match (model.as_str(), hilbert_dims.as_slice()) {
                    ("qubit" | "quantum", [2]) => "qubit".to_string(),
                    ("quantum", dims) => format!("quantum:{dims:?}"),
                    (m, _) => m.to_string(),
                };
                Ok(StateSpace::matrix(name, hilbert_dims.clone(), kind))
            }
        }
    }
}

pub fn parse_space(text: &str) -> Result<StateSpace> {
    serde_json::from_str::<SpaceSpec>(text)?.build()
}

/// A model name or an inline JSON description.
pub fn resolve_space(spec: &str) -> Result<StateSpace> {
    if spec.trim_start().starts_with('{') {
        parse_space(spec)
    } else {
        models::model_by_name(spec)
    }
}

pub fn space_to_json(space: &StateSpace) -> Value {
    let nums = |v: &[f64]| v.iter().map(|x| format_number(*x)).collect::<Vec<_>>();
    match space.representation() {
        Representation::Polytope { vertices } => json!({
            "kind": "polytope",
            "name": space.name(),
            "dim": space.ambient_dim(),
            "unit": nums(&space.unit().coeffs),
            "vertices": vertices.iter().map(|v| nums(v)).collect::<Vec<_>>(),
        }),
        Representation::Matrix(m) => json!({
            "kind": "matrix",
            "hilbert_dims": m.hilbert_dims,
            "model": match m.kind {
                MatrixKind::Quantum => "quantum",
                MatrixKind::Separable => "sep22",
                MatrixKind::OmegaBar => "omega-bar",
            },
        }),
    }
}

/// Coordinates, or a density/effect matrix as `[re, im]` pairs or real rows.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum VectorSpec {
    Coords(Vec<Num>),
    Complex(Vec<Vec<[Num; 2]>>),
    Real(Vec<Vec<Num>>),
}

impl VectorSpec {
    fn matrix(&self) -> Result<Option<HermMat>> {
        match self {
            VectorSpec::Coords(_) => Ok(None),
            VectorSpec::Complex(rows) => {
                let pairs: Vec<Vec<[f64; 2]>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|[a, b]| Ok([a.value()?, b.value()?]))
                            .collect::<Result<_>>()
                    })
                    .collect::<Result<_>>()?;
                HermMat::from_pairs(&pairs).map(Some)
            }
            VectorSpec::Real(rows) => {
                let rows: Vec<Vec<f64>> = rows.iter().map(|r| values(r)).collect::<Result<_>>()?;
                HermMat::from_real_rows(&rows).map(Some)
            }
        }
    }

    /// Ambient coordinates in `space`.
    pub fn coords(&self, space: &StateSpace) -> Result<Vec<f64>> {
        let x = match (self, self.matrix()?) {
            (VectorSpec::Coords(c), _) => values(c)?,
            (_, Some(m)) => {
                let d = space
                    .matrix_dim()
                    .ok_or_else(|| Error::Parse("matrix given for a polytope model".into()))?;
                if m.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: m.dim(),
                    });
                }
                linalg::to_coords(&m)
            }
            (_, None) => unreachable!("non-coordinate specs carry a matrix"),
        };
        if x.len() != space.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(x)
    }

    pub fn state(&self, space: &StateSpace) -> Result<State> {
        space.state(self.coords(space)?)
    }
}

/// Parses a state: coordinates or a matrix, or `"center"` for the maximally mixed state
/// or vertex barycenter.
pub fn parse_state(space: &StateSpace, text: &str) -> Result<State> {
    if text.trim() == "center" {
        return Ok(center_state(space));
    }
    serde_json::from_str::<VectorSpec>(text)?.state(space)
}

pub fn center_state(space: &StateSpace) -> State {
    match space.representation() {
        Representation::Polytope { vertices } => {
            let n = vertices.len() as f64;
            let mut c = vec![0.0; space.ambient_dim()];
            for v in vertices {
                for (a, x) in c.iter_mut().zip(v) {
                    *a += x / n;
                }
            }
            State::from_coords_unchecked(c)
        }
        Representation::Matrix(m) => {
            let d = m.dim();
            State::from_coords_unchecked(linalg::to_coords(
                &HermMat::identity(d).scale(1.0 / d as f64),
            ))
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct AffineMapSpec {
    pub matrix: Vec<Vec<Num>>,
    #[serde(default)]
    pub offset: Vec<Num>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstrumentSpec {
    Mpp {
        effects: Vec<VectorSpec>,
        outputs: Vec<VectorSpec>,
    },
    Generic {
        events: Vec<AffineMapSpec>,
    },
}

impl InstrumentSpec {
    pub fn build(&self, space: &StateSpace) -> Result<Instrument> {
        match self {
            InstrumentSpec::Mpp { effects, outputs } => {
                let effects = effects
                    .iter()
                    .map(|e| e.coords(space).map(Effect::linear))
                    .collect::<Result<Vec<_>>>()?;
                let outputs = outputs
                    .iter()
                    .map(|o| o.state(space))
                    .collect::<Result<Vec<_>>>()?;
                Ok(MppInstrument::new(space, effects, outputs)?.into())
            }
            InstrumentSpec::Generic { events } => {
                let maps = events
                    .iter()
                    .map(|e| {
                        Ok(AffineMap {
                            matrix: e.matrix.iter().map(|r| values(r)).collect::<Result<_>>()?,
                            offset: values(&e.offset)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(GenericInstrument::new(space, maps)?.into())
            }
        }
    }
}

pub fn parse_instrument(space: &StateSpace, text: &str) -> Result<Instrument> {
    serde_json::from_str::<InstrumentSpec>(text)?.build(space)
}

/// Instrument in the file format, effects as homogenized coordinates.
pub fn instrument_to_json(space: &StateSpace, instr: &Instrument) -> Value {
    let nums = |v: &[f64]| v.iter().map(|x| format_number(*x)).collect::<Vec<_>>();
    match instr {
        Instrument::Mpp(m) => json!({
            "kind": "mpp",
            "effects": m.effects().iter().map(|e| nums(&e.homogenized(space.unit()))).collect::<Vec<_>>(),
            "outputs": m.outputs().iter().map(|o| nums(o.coords())).collect::<Vec<_>>(),
        }),
        Instrument::Generic(g) => json!({
            "kind": "generic",
            "events": g.events().iter().map(|e| json!({
                "matrix": e.matrix.iter().map(|r| nums(r)).collect::<Vec<_>>(),
                "offset": nums(&e.offset),
            })).collect::<Vec<_>>(),
        }),
    }
}

/// `{"probs": [...], "states": [...]}` with states as coordinates or matrices.
#[derive(Clone, Debug, Deserialize)]
pub struct DecompositionSpec {
    pub probs: Vec<Num>,
    pub states: Vec<VectorSpec>,
}

impl DecompositionSpec {
    pub fn build(&self, space: &StateSpace) -> Result<crate::thermo::PdpDecomposition> {
        let probs = values(&self.probs)?;
        let states = self
            .states
            .iter()
            .map(|s| s.state(space))
            .collect::<Result<Vec<_>>>()?;
        crate::thermo::decomposition_with_witness(space, probs, states)
    }
}

pub fn parse_decomposition(
    space: &StateSpace,
    text: &str,
) -> Result<crate::thermo::PdpDecomposition> {
    serde_json::from_str::<DecompositionSpec>(text)?.build(space)
}

#[derive(Serialize)]
struct QuadrupleExport {
    rho1: HermMat,
    rho2: HermMat,
    sigma1: HermMat,
    sigma2: HermMat,
}

/// The extended-space fixture with matrices as `[re, im]` pairs.
pub fn omega_bar_fixture_json(fx: &OmegaBarFixture) -> Result<Value> {
    Ok(serde_json::to_value(fx)?)
}

/// The two-pair product-state fixture with matrices as `[re, im]` pairs.
pub fn sep_quadruple_json(quad: &SepQuadruple) -> Result<Value> {
    Ok(serde_json::to_value(QuadrupleExport {
        rho1: quad.rho1.matrix(),
        rho2: quad.rho2.matrix(),
        sigma1: quad.sigma1.matrix(),
        sigma2: quad.sigma2.matrix(),
    })?)
}
