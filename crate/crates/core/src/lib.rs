//! Generalized probabilistic theories with thermodynamic bookkeeping.
//!
//! States live in convex spaces given by vertices or by matrix models. Spectral
//! entropy comes from decompositions into perfectly distinguishable pure states,
//! and the semipermeable-membrane cycle turns entropy differences into work.

pub mod error;
pub mod instruments;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod models;
pub mod random;
pub mod report;
pub mod space;
pub mod suites;
pub mod thermo;

pub use error::{Error, Result};
pub use instruments::{ConditionalKernel, GenericInstrument, Instrument, MppInstrument};
pub use linalg::HermMat;
pub use lp::{LinearProgram, LpResult, LpStatus};
pub use space::{Effect, Measurement, Membership, State, StateSpace, SubState};
pub use thermo::{DecompositionSet, PdpDecomposition};
