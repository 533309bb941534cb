//! Work bookkeeping for the semipermeable-membrane engine.
//!
//! One leg separates the gas along a decomposition `q` using membranes built
//! from its separating measurement, then the pure components are transformed
//! reversibly at no cost, and the last leg mixes them back along a second
//! decomposition `p` of the same state. Work carries the units of `N k_B T`
//! and entropies are in nats.

use serde::{Deserialize, Serialize};

use super::PdpDecomposition;
use crate::error::{Error, Result};

/// Tolerance on the two decompositions describing the same state.
pub const CLOSURE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gas {
    /// Number of particles `N`.
    pub particles: f64,
    pub temperature: f64,
    #[serde(default = "unit_boltzmann")]
    pub k_b: f64,
}

fn unit_boltzmann() -> f64 {
    1.0
}

impl Gas {
    pub fn new(particles: f64, temperature: f64) -> Self {
        Self {
            particles,
            temperature,
            k_b: 1.0,
        }
    }

    /// `N k_B T`.
    pub fn nkt(&self) -> f64 {
        self.particles * self.k_b * self.temperature
    }
}

/// Work consumed isothermally separating the components of `decomp`: `H N k_B T`.
pub fn separation_work(decomp: &PdpDecomposition, gas: &Gas) -> f64 {
    decomp.entropy() * gas.nkt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CycleReport {
    pub h_separation: f64,
    pub h_mixing: f64,
    /// Work consumed separating along the first decomposition.
    pub w_separation: f64,
    /// Work extracted mixing along the second decomposition.
    pub w_mixing: f64,
    /// Net work extracted over the cycle.
    pub delta_w: f64,
    pub particles: f64,
    pub temperature: f64,
    pub k_b: f64,
}

/// Net work `(H(p) - H(q)) N k_B T` of the cycle separating along `q` and mixing along `p`.
pub fn cycle_delta_work(
    q: &PdpDecomposition,
    p: &PdpDecomposition,
    gas: &Gas,
) -> Result<CycleReport> {
    let (tq, tp) = (q.target(), p.target());
    if tq.coords().len() != tp.coords().len() {
        return Err(Error::DimensionMismatch {
            expected: tq.coords().len(),
            got: tp.coords().len(),
        });
    }
    let gap = tq.max_abs_diff(&tp);
    if gap > CLOSURE_TOL {
        return Err(Error::CycleNotClosed(gap));
    }
    let w_separation = separation_work(q, gas);
    let w_mixing = separation_work(p, gas);
    Ok(CycleReport {
        h_separation: q.entropy(),
        h_mixing: p.entropy(),
        w_separation,
        w_mixing,
        delta_w: w_mixing - w_separation,
        particles: gas.particles,
        temperature: gas.temperature,
        k_b: gas.k_b,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Leg {
    Separation,
    Mixing,
}

/// A point on the cumulative work curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkPoint {
    pub leg: Leg,
    pub component: usize,
    /// Volume of the current component relative to the whole vessel.
    pub volume_fraction: f64,
    /// Work consumed so far on the separation leg, or extracted so far on the mixing leg.
    pub cumulative_work: f64,
}

/// Cumulative work along both legs, `steps + 1` points per component.
///
/// Component `i` of the separation leg is compressed isothermally from the
/// full volume to `q_i`, costing `-q_i N k_B T ln f` at fraction `f`; on the
/// mixing leg component `i` expands from `p_i` back to the full volume.
pub fn work_curve(
    q: &PdpDecomposition,
    p: &PdpDecomposition,
    gas: &Gas,
    steps: usize,
) -> Vec<WorkPoint> {
    let steps = steps.max(1);
    let nkt = gas.nkt();
    let mut out = Vec::new();
    let mut offset = 0.0;
    for (i, &qi) in q.probs().iter().enumerate() {
        for s in 0..=steps {
            let f = 1.0 - (1.0 - qi) * s as f64 / steps as f64;
            out.push(WorkPoint {
                leg: Leg::Separation,
                component: i,
                volume_fraction: f,
                cumulative_work: offset - qi * nkt * f.ln(),
            });
        }
        offset -= qi * nkt * qi.ln();
    }
    let mut offset = 0.0;
    for (i, &pi) in p.probs().iter().enumerate() {
        for s in 0..=steps {
            let f = pi + (1.0 - pi) * s as f64 / steps as f64;
            out.push(WorkPoint {
                leg: Leg::Mixing,
                component: i,
                volume_fraction: f,
                cumulative_work: offset + pi * nkt * (f / pi).ln(),
            });
        }
        offset -= pi * nkt * pi.ln();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::make_classical;
    use crate::space::{Effect, Measurement, State};

    fn classical_decomp(p: &[f64]) -> PdpDecomposition {
        let n = p.len();
        let space = make_classical(n).unwrap();
        let onehot = |j: usize| {
            (0..n)
                .map(|i| f64::from(u8::from(i == j)))
                .collect::<Vec<f64>>()
        };
        PdpDecomposition::new(
            &space,
            p.to_vec(),
            (0..n)
                .map(|j| State::from_coords_unchecked(onehot(j)))
                .collect(),
            Measurement::new_unchecked((0..n).map(|j| Effect::linear(onehot(j))).collect()),
        )
        .unwrap()
    }

    #[test]
    fn same_decomposition_closes_with_zero_work() {
        let q = classical_decomp(&[0.25, 0.75]);
        let r = cycle_delta_work(&q, &q, &Gas::new(100.0, 1.0)).unwrap();
        assert_eq!(r.delta_w, 0.0);
    }

    #[test]
    fn mismatched_targets_rejected() {
        let q = classical_decomp(&[0.25, 0.75]);
        let p = classical_decomp(&[0.5, 0.5]);
        assert!(matches!(
            cycle_delta_work(&q, &p, &Gas::new(1.0, 1.0)),
            Err(Error::CycleNotClosed(_))
        ));
    }

    #[test]
    fn curve_endpoints_match_leg_totals() {
        let q = classical_decomp(&[0.25, 0.75]);
        let gas = Gas::new(10.0, 2.0);
        let curve = work_curve(&q, &q, &gas, 8);
        let total = separation_work(&q, &gas);
        let last_sep = curve.iter().rfind(|w| w.leg == Leg::Separation).unwrap();
        let last_mix = curve.last().unwrap();
        assert!((last_sep.cumulative_work - total).abs() < 1e-12);
        assert!((last_mix.cumulative_work - total).abs() < 1e-12);
        assert_eq!(curve.len(), 2 * 2 * 9);
        assert_eq!(curve[0].cumulative_work, 0.0);
    }
}
