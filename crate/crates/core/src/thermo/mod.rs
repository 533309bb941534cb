//! Thermodynamics on top of the state spaces.
//!
//! Entropy is defined through decompositions into distinguishable pure states
//! and drives both the engine cycle and the information gain of instruments.

mod cycle;
mod decompose;
mod entropy;
mod info;

pub use cycle::{
    cycle_delta_work, separation_work, work_curve, CycleReport, Gas, Leg, WorkPoint, CLOSURE_TOL,
};
pub use decompose::{
    basis_decomposition, decomposition_with_witness, enumerate_pdp_decompositions, find_witness,
    quantum_pdp, DecompositionSet, PdpDecomposition, LSQ_TOL, MIN_PROB, PROB_SUM_TOL,
};
pub use entropy::{
    check_entropy_uniqueness, concavity_check, oracle_for, shannon_entropy, ClassicalEntropy,
    Concavity, EntropyOracle, PolytopeEntropy, QuantumEntropy, Uniqueness, ENTROPY_CUTOFF,
    ENTROPY_TOL,
};
pub use info::{info_gain, monotonicity_check, Monotonicity, MONOTONICITY_TOL};
