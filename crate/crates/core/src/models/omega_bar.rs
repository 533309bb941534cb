//! Two-qubit separable states extended by two entangled pure states `σ1`, `σ2`.
//!
//! The state `ρ = ρ1/3 + 2ρ2/3` of two distinguishable product states equals
//! `((3+√3)/6) σ1 + ((3-√3)/6) σ2`, and the two weight vectors have different
//! Shannon entropies.

use serde::Serialize;

use super::{make_omega_bar, SepQuadruple};
use crate::error::{Error, Result};
use crate::linalg::{hs_inner, HermMat};
use crate::space::{max_abs_diff, Effect, State, StateSpace};
use crate::thermo::PdpDecomposition;

/// Tolerance of the fixture invariants.
pub const FIXTURE_TOL: f64 = 1e-12;

/// The entangled pair `σ1`, `σ2`.
pub fn sigma_pair() -> (HermMat, HermMat) {
    let r = 3f64.sqrt();
    let build = |s: f64| {
        HermMat::from_real_rows(&[
            [3.0, s * r, s * r, s * r],
            [s * r, 1.0, 1.0, 1.0],
            [s * r, 1.0, 1.0, 1.0],
            [s * r, 1.0, 1.0, 1.0],
        ])
        .expect("symmetric")
        .scale(1.0 / 6.0)
    };
    (build(1.0), build(-1.0))
}

/// Measurement operators discriminating `ρ1 = |00⟩⟨00|` from `ρ2 = |++⟩⟨++|`.
pub fn e_pair() -> (HermMat, HermMat) {
    let e1 = HermMat::from_real_rows(&[
        [2.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 2.0],
    ])
    .expect("symmetric")
    .scale(0.5);
    let e2 = HermMat::from_real_rows(&[
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 2.0, 1.0, 0.0],
        [0.0, 1.0, 2.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ])
    .expect("symmetric")
    .scale(0.5);
    (e1, e2)
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaBarFixture {
    pub rho1: HermMat,
    pub rho2: HermMat,
    pub sigma1: HermMat,
    pub sigma2: HermMat,
    pub e1: HermMat,
    pub e2: HermMat,
    pub rho_mix: HermMat,
    /// `{(1/3, ρ1), (2/3, ρ2)}` witnessed by `(E1, E2)`.
    pub decomp_q: PdpDecomposition,
    /// `{((3+√3)/6, σ1), ((3-√3)/6, σ2)}` witnessed by `(σ1, I - σ1)`.
    pub decomp_p: PdpDecomposition,
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::FixtureInvariant(what()))
    }
}

/// Builds the fixture and checks every invariant, including validity of both witnesses on the space.
pub fn load_omega_bar() -> Result<(StateSpace, OmegaBarFixture)> {
    let space = make_omega_bar();
    let quad = SepQuadruple::default();
    let rho1 = quad.rho1.matrix();
    let rho2 = quad.rho2.matrix();
    let (sigma1, sigma2) = sigma_pair();
    let (e1, e2) = e_pair();
    let identity = HermMat::identity(4);

    invariant((&e1 + &e2).max_abs_diff(&identity) == 0.0, || {
        "E1 + E2 != I".into()
    })?;
    for (j, e) in [&e1, &e2].into_iter().enumerate() {
        for (jp, r) in [&rho1, &rho2].into_iter().enumerate() {
            let v = hs_inner(e, r)?;
            let want = if j == jp { 1.0 } else { 0.0 };
            invariant((v - want).abs() <= FIXTURE_TOL, || {
                format!("Tr(E{} ρ{}) = {v}", j + 1, jp + 1)
            })?;
        }
    }
    let overlap = hs_inner(&sigma1, &sigma2)?;
    invariant(overlap.abs() <= FIXTURE_TOL, || {
        format!("Tr(σ1 σ2) = {overlap}")
    })?;

    let r3 = 3f64.sqrt();
    let q = [1.0 / 3.0, 2.0 / 3.0];
    let p = [(3.0 + r3) / 6.0, (3.0 - r3) / 6.0];
    let mix_q = &rho1.scale(q[0]) + &rho2.scale(q[1]);
    let mix_p = &sigma1.scale(p[0]) + &sigma2.scale(p[1]);
    let gap = mix_q.max_abs_diff(&mix_p);
    invariant(gap <= FIXTURE_TOL, || {
        format!("the two mixtures differ by {gap:e}")
    })?;

    let st = |m: &HermMat| space.state_from_matrix(m);
    let witness_q = space.measurement(vec![Effect::from_matrix(&e1), Effect::from_matrix(&e2)])?;
    let witness_p = space.measurement(vec![
        Effect::from_matrix(&sigma1),
        Effect::from_matrix(&(&identity - &sigma1)),
    ])?;
    let decomp_q =
        PdpDecomposition::new(&space, q.to_vec(), vec![st(&rho1)?, st(&rho2)?], witness_q)?;
    let decomp_p = PdpDecomposition::new(
        &space,
        p.to_vec(),
        vec![st(&sigma1)?, st(&sigma2)?],
        witness_p,
    )?;
    let tq: State = decomp_q.target();
    let dev = max_abs_diff(tq.coords(), decomp_p.target().coords());
    invariant(dev <= FIXTURE_TOL, || {
        format!("decomposition targets differ by {dev:e}")
    })?;

    Ok((
        space,
        OmegaBarFixture {
            rho1,
            rho2,
            sigma1,
            sigma2,
            e1,
            e2,
            rho_mix: mix_q,
            decomp_q,
            decomp_p,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_herm;
    use crate::models::sep::{min_over_product_states, MinimizerConfig};

    #[test]
    fn fixture_loads() {
        let (space, fx) = load_omega_bar().unwrap();
        assert_eq!(space.name(), "omega-bar");
        assert!(
            fx.rho_mix.max_abs_diff(
                &(&fx.sigma1.scale((3.0 + 3f64.sqrt()) / 6.0)
                    + &fx.sigma2.scale((3.0 - 3f64.sqrt()) / 6.0))
            ) <= 1e-12
        );
        assert!((fx.decomp_q.entropy() - 0.636_514_168_294_812_8).abs() < 1e-12);
        assert!((fx.decomp_p.entropy() - 0.515_706_736_463_554_4).abs() < 1e-12);
    }

    #[test]
    fn measurement_operators_are_not_positive() {
        let (e1, e2) = e_pair();
        for e in [e1, e2] {
            assert!(*eig_herm(&e).unwrap().values.last().unwrap() < -0.4);
            assert!(min_over_product_states(&e, MinimizerConfig::default()).abs() < 1e-6);
        }
    }

    #[test]
    fn sigmas_are_pure_and_entangled() {
        let (s1, s2) = sigma_pair();
        for s in [&s1, &s2] {
            let ev = eig_herm(s).unwrap().values;
            assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12);
            assert!(make_omega_bar()
                .contains(&crate::linalg::to_coords(s))
                .unwrap());
            assert!(!crate::models::make_sep22()
                .contains(&crate::linalg::to_coords(s))
                .unwrap());
        }
    }
}
