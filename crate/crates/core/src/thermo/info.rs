//! Information gain of an instrument and its monotonicity under the majorization preorder.

use serde::Serialize;

use super::EntropyOracle;
use crate::error::Result;
use crate::instruments::{groenewold_majorizes, Instrument, ZERO_WEIGHT};
use crate::space::{State, StateSpace};

/// Slack below which a monotonicity inequality counts as violated.
pub const MONOTONICITY_TOL: f64 = 1e-9;

/// `I(s, ρ) = H(ρ) - Σ_j e_j(ρ) H(ρ_j)` with `ρ_j` the normalized post-measurement states.
pub fn info_gain(
    space: &StateSpace,
    rho: &State,
    instr: &Instrument,
    oracle: &dyn EntropyOracle,
) -> Result<f64> {
    let mut gain = oracle.entropy(rho)?;
    for out in instr.outputs_at(space, rho.coords())? {
        let w = out.weight(space);
        if w <= ZERO_WEIGHT {
            continue;
        }
        if let Some(post) = out.normalized(space) {
            gain -= w * oracle.entropy(&post)?;
        }
    }
    Ok(gain)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Monotonicity {
    Holds {
        gain_t: f64,
        gain_s: f64,
        slack: f64,
    },
    Violated {
        gain_t: f64,
        gain_s: f64,
        slack: f64,
    },
    NotComparable,
}

/// When `t ≻_ρ s`, checks `I(t, ρ) >= I(s, ρ)`.
pub fn monotonicity_check(
    space: &StateSpace,
    rho: &State,
    t: &Instrument,
    s: &Instrument,
    oracle: &dyn EntropyOracle,
) -> Result<Monotonicity> {
    if groenewold_majorizes(space, t, s, rho)?.is_none() {
        return Ok(Monotonicity::NotComparable);
    }
    let gain_t = info_gain(space, rho, t, oracle)?;
    let gain_s = info_gain(space, rho, s, oracle)?;
    let slack = gain_t - gain_s;
    Ok(if slack >= -MONOTONICITY_TOL {
        Monotonicity::Holds {
            gain_t,
            gain_s,
            slack,
        }
    } else {
        Monotonicity::Violated {
            gain_t,
            gain_s,
            slack,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instruments::{
        coarse_grain, default_probes, AffineMap, ConditionalKernel, GenericInstrument,
        MppInstrument,
    };
    use crate::linalg::{self, HermMat};
    use crate::models::{make_classical, make_qubit};
    use crate::space::Effect;
    use crate::thermo::{ClassicalEntropy, QuantumEntropy};

    fn indicator(n: usize) -> (StateSpace, Instrument) {
        let space = make_classical(n).unwrap();
        let effects = (0..n)
            .map(|j| Effect::linear((0..n).map(|i| f64::from(u8::from(i == j))).collect()))
            .collect();
        let outputs = default_probes(&space);
        let m = MppInstrument::new(&space, effects, outputs).unwrap();
        (space, m.into())
    }

    #[test]
    fn noisy_indicator_gain() {
        let space = make_classical(2).unwrap();
        let t: Instrument = GenericInstrument::new(
            &space,
            vec![
                AffineMap::linear(vec![vec![0.9, 0.0], vec![0.0, 0.1]]),
                AffineMap::linear(vec![vec![0.1, 0.0], vec![0.0, 0.9]]),
            ],
        )
        .unwrap()
        .into();
        let rho = State::from_coords_unchecked(vec![0.5, 0.5]);
        let g = info_gain(&space, &rho, &t, &ClassicalEntropy).unwrap();
        assert!((g - 0.368_064_207_168_497_07).abs() < 1e-12);
    }

    #[test]
    fn complete_classical_measurement_gains_full_entropy() {
        let (space, t) = indicator(3);
        let rho = State::from_coords_unchecked(vec![0.2, 0.3, 0.5]);
        let g = info_gain(&space, &rho, &t, &ClassicalEntropy).unwrap();
        assert!((g - ClassicalEntropy.entropy(&rho).unwrap()).abs() < 1e-12);
        let id = Instrument::identity(&space);
        assert!(
            info_gain(&space, &rho, &id, &ClassicalEntropy)
                .unwrap()
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn qubit_noisy_z_measurement() {
        // effects (I ± 0.8 Z)/2 prepare the matching eigenstate of Z
        let space = make_qubit();
        let half = HermMat::identity(2).scale(0.5);
        let z = HermMat::qubit(0.0, 0.0, 1.0);
        let effects = vec![
            Effect::from_matrix(&(&half + &(0.4 * &(&z - &half)).scale(2.0))),
            Effect::from_matrix(&(&half - &(0.4 * &(&z - &half)).scale(2.0))),
        ];
        let outputs = vec![
            State::from_coords_unchecked(linalg::to_coords(&HermMat::qubit(0.0, 0.0, 1.0))),
            State::from_coords_unchecked(linalg::to_coords(&HermMat::qubit(0.0, 0.0, -1.0))),
        ];
        let t: Instrument = MppInstrument::new(&space, effects, outputs).unwrap().into();
        let rho = State::from_coords_unchecked(linalg::to_coords(&HermMat::identity(2).scale(0.5)));
        let g = info_gain(&space, &rho, &t, &QuantumEntropy { dim: 2 }).unwrap();
        assert!((g - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn coarse_graining_loses_information() {
        let (space, t) = indicator(3);
        let rho = State::from_coords_unchecked(vec![0.2, 0.3, 0.5]);
        let k = ConditionalKernel::new(vec![vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let s: Instrument = coarse_grain(&space, &t, &k).unwrap().into();
        match monotonicity_check(&space, &rho, &t, &s, &ClassicalEntropy).unwrap() {
            Monotonicity::Holds { slack, .. } => assert!(slack > 0.1),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            monotonicity_check(&space, &rho, &s, &t, &ClassicalEntropy).unwrap(),
            Monotonicity::NotComparable
        );
    }
}
