//! Built-in models, from classical simplices up to two-qubit spaces.
//!
//! `model_by_name` lists the accepted names.

pub mod omega_bar;
pub mod sep;

use crate::error::{Error, Result};
use crate::space::{Effect, MatrixKind, StateSpace};

pub use omega_bar::{load_omega_bar, OmegaBarFixture};
pub use sep::{
    apply_sep_automorphism, lemma2_sum, min_over_product_states, sep_distinguishable,
    verify_not_2_symmetric, ProductPureState, SepAutomorphism, SepQuadruple, SymmetryReport,
    TwoSymmetry,
};

/// Probability simplex with `n` vertices; the unit effect sums coordinates.
pub fn make_classical(n: usize) -> Result<StateSpace> {
    if n < 2 {
        return Err(Error::UnknownModel(format!("classical:{n} (need n >= 2)")));
    }
    let vertices = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    StateSpace::polytope(
        format!("classical:{n}"),
        Effect::linear(vec![1.0; n]),
        vertices,
    )
}

pub fn make_qubit() -> StateSpace {
    StateSpace::matrix("qubit", vec![2], MatrixKind::Quantum)
}

/// Square with vertices `(1, ±1, ±1)`; the first coordinate is the normalization.
pub fn make_square_bit() -> StateSpace {
    let vertices = vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, 1.0, -1.0],
        vec![1.0, -1.0, -1.0],
        vec![1.0, -1.0, 1.0],
    ];
    StateSpace::polytope("square-bit", Effect::linear(vec![1.0, 0.0, 0.0]), vertices)
        .expect("square bit vertices are normalized")
}

pub fn make_sep22() -> StateSpace {
    StateSpace::matrix("sep22", vec![2, 2], MatrixKind::Separable)
}

pub fn make_omega_bar() -> StateSpace {
    StateSpace::matrix("omega-bar", vec![2, 2], MatrixKind::OmegaBar)
}

/// Resolves `classical:n`, `qubit`, `square-bit`, `sep22` or `omega-bar`.
pub fn model_by_name(name: &str) -> Result<StateSpace> {
    match name {
        "qubit" => Ok(make_qubit()),
        "square-bit" => Ok(make_square_bit()),
        "sep22" => Ok(make_sep22()),
        "omega-bar" => Ok(make_omega_bar()),
        _ => {
            let n = name
                .strip_prefix("classical:")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownModel(name.to_string()))?;
            make_classical(n)
        }
    }
}
