//! Two-qubit separable states built from product pure states.
//!
//! Effects are certified block-positive by minimizing over product states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_herm, hs_inner, kron, kron_vec, HermMat};
use crate::lp::{self, LinearProgram};
use crate::random::{self, trial_rng};
use crate::space::{Membership, EQ_TOL};

/// Criterion boundary: sums up to `1 + LEMMA2_TOL` count as distinguishable.
pub const LEMMA2_TOL: f64 = 1e-12;
/// Unitarity tolerance for automorphism factors.
pub const UNITARY_TOL: f64 = 1e-10;
/// Trace-invariance tolerance for automorphism sampling.
pub const INVARIANCE_TOL: f64 = 1e-10;

const MAX_COLUMN_ROUNDS: usize = 400;

type Ket2 = [Complex64; 2];

/// Qubit ket with the given Bloch direction.
pub fn bloch_ket(r: [f64; 3]) -> Ket2 {
    let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let z = (r[2] / n).clamp(-1.0, 1.0);
    let theta = z.acos();
    let phi = r[1].atan2(r[0]);
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Bloch vector of a (not necessarily normalized) qubit ket.
pub fn ket_bloch(psi: &[Complex64]) -> [f64; 3] {
    let n = psi[0].norm_sqr() + psi[1].norm_sqr();
    let c = psi[0].conj() * psi[1];
    [
        2.0 * c.re / n,
        2.0 * c.im / n,
        (psi[0].norm_sqr() - psi[1].norm_sqr()) / n,
    ]
}

/// `ρ^A ⊗ ρ^B` with both factors pure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductPureState {
    pub bloch_a: [f64; 3],
    pub bloch_b: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    matrix: Option<HermMat>,
}

impl ProductPureState {
    pub fn new(bloch_a: [f64; 3], bloch_b: [f64; 3]) -> Self {
        let norm = |r: [f64; 3]| {
            let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            [r[0] / n, r[1] / n, r[2] / n]
        };
        let (a, b) = (norm(bloch_a), norm(bloch_b));
        let matrix = kron(&HermMat::bloch(a), &HermMat::bloch(b));
        Self {
            bloch_a: a,
            bloch_b: b,
            matrix: Some(matrix),
        }
    }

    pub fn from_kets(a: &[Complex64], b: &[Complex64]) -> Self {
        Self::new(ket_bloch(a), ket_bloch(b))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(random::unit_vector3(rng), random::unit_vector3(rng))
    }

    pub fn local_a(&self) -> HermMat {
        HermMat::bloch(self.bloch_a)
    }

    pub fn local_b(&self) -> HermMat {
        HermMat::bloch(self.bloch_b)
    }

    pub fn matrix(&self) -> HermMat {
        self.matrix
            .clone()
            .unwrap_or_else(|| kron(&self.local_a(), &self.local_b()))
    }
}

/// `Tr ρ1^A ρ2^A + Tr ρ1^B ρ2^B`.
pub fn lemma2_sum(p: &ProductPureState, q: &ProductPureState) -> f64 {
    let overlap = |x: [f64; 3], y: [f64; 3]| (1.0 + x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) / 2.0;
    overlap(p.bloch_a, q.bloch_a) + overlap(p.bloch_b, q.bloch_b)
}

/// Whether two pure product states are perfectly distinguishable in SEP.
pub fn sep_distinguishable(p: &ProductPureState, q: &ProductPureState) -> bool {
    lemma2_sum(p, q) <= 1.0 + LEMMA2_TOL
}

/// A linear bijection of SEP: local unitaries, optionally preceded by local
/// transposes, optionally followed by swapping the factors.
#[derive(Clone, Debug)]
pub struct SepAutomorphism {
    local_a: DMatrix<Complex64>,
    transpose_a: bool,
    local_b: DMatrix<Complex64>,
    transpose_b: bool,
    swap: bool,
}

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

impl SepAutomorphism {
    pub fn new(
        local_a: DMatrix<Complex64>,
        transpose_a: bool,
        local_b: DMatrix<Complex64>,
        transpose_b: bool,
        swap: bool,
    ) -> Result<Self> {
        for u in [&local_a, &local_b] {
            if u.nrows() != u.ncols() {
                return Err(Error::DimensionMismatch {
                    expected: u.nrows(),
                    got: u.ncols(),
                });
            }
            let defect = unitarity_defect(u);
            if defect > UNITARY_TOL {
                return Err(Error::InvalidInstrument(format!(
                    "local map not unitary ({defect:e})"
                )));
            }
        }
        if swap && local_a.nrows() != local_b.nrows() {
            return Err(Error::SwapDimension(local_a.nrows(), local_b.nrows()));
        }
        Ok(Self {
            local_a,
            transpose_a,
            local_b,
            transpose_b,
            swap,
        })
    }

    pub fn identity() -> Self {
        let id = DMatrix::identity(2, 2);
        Self::new(id.clone(), false, id, false, false).expect("identity is unitary")
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let ua = random::su2(rng);
        let ub = random::su2(rng);
        let ta = rng.random::<bool>();
        let tb = rng.random::<bool>();
        let sw = rng.random::<bool>();
        Self::new(ua, ta, ub, tb, sw).expect("Haar samples are unitary")
    }

    /// Local unitaries carrying `from` to `to`, which exist for any two pure products.
    pub fn between(from: &ProductPureState, to: &ProductPureState) -> Self {
        let rotate = |x: [f64; 3], y: [f64; 3]| {
            let (p, q) = (bloch_ket(x), bloch_ket(y));
            let perp = |v: Ket2| [-v[1].conj(), v[0].conj()];
            let (pp, qp) = (perp(p), perp(q));
            DMatrix::from_fn(2, 2, |i, j| q[i] * p[j].conj() + qp[i] * pp[j].conj())
        };
        Self::new(
            rotate(from.bloch_a, to.bloch_a),
            false,
            rotate(from.bloch_b, to.bloch_b),
            false,
            false,
        )
        .expect("constructed from orthonormal bases")
    }

    pub fn swaps(&self) -> bool {
        self.swap
    }

    fn local_dims(&self) -> (usize, usize) {
        (self.local_a.nrows(), self.local_b.nrows())
    }
}

fn partial_transpose(
    m: &DMatrix<Complex64>,
    da: usize,
    db: usize,
    on_a: bool,
) -> DMatrix<Complex64> {
    DMatrix::from_fn(da * db, da * db, |r, c| {
        let (i1, i2) = (r / db, r % db);
        let (j1, j2) = (c / db, c % db);
        let (r2, c2) = if on_a {
            (j1 * db + i2, i1 * db + j2)
        } else {
            (i1 * db + j2, j1 * db + i2)
        };
        m[(r2, c2)]
    })
}

/// Applies `F` to a bipartite operator.
pub fn apply_sep_automorphism(f: &SepAutomorphism, rho: &HermMat) -> Result<HermMat> {
    let (da, db) = f.local_dims();
    if rho.dim() != da * db {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            got: rho.dim(),
        });
    }
    let mut m = rho.as_matrix().clone();
    if f.transpose_a {
        m = partial_transpose(&m, da, db, true);
    }
    if f.transpose_b {
        m = partial_transpose(&m, da, db, false);
    }
    let u = f.local_a.kronecker(&f.local_b);
    m = &u * m * u.adjoint();
    if f.swap {
        let d = da;
        m = DMatrix::from_fn(d * d, d * d, |r, c| {
            let (i1, i2) = (r / d, r % d);
            let (j1, j2) = (c / d, c % d);
            m[(i2 * d + i1, j2 * d + j1)]
        });
    }
    HermMat::from_matrix((&m + m.adjoint()).scale(0.5))
}

/// Two pairs of product pure states to be compared for simultaneous reachability.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SepQuadruple {
    pub rho1: ProductPureState,
    pub rho2: ProductPureState,
    pub sigma1: ProductPureState,
    pub sigma2: ProductPureState,
}

impl Default for SepQuadruple {
    /// `ρ1 = |00⟩, ρ2 = |++⟩, σ1 = |00⟩, σ2 = |11⟩`.
    fn default() -> Self {
        let z = [0.0, 0.0, 1.0];
        let mz = [0.0, 0.0, -1.0];
        let x = [1.0, 0.0, 0.0];
        Self {
            rho1: ProductPureState::new(z, z),
            rho2: ProductPureState::new(x, x),
            sigma1: ProductPureState::new(z, z),
            sigma2: ProductPureState::new(mz, mz),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoSymmetry {
    NotTwoSymmetric,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub trace_rho: f64,
    pub trace_sigma: f64,
    pub lemma2_rho: f64,
    pub lemma2_sigma: f64,
    pub rho_pair_distinguishable: bool,
    pub sigma_pair_distinguishable: bool,
    pub invariance_samples: usize,
    pub invariance_max_dev: f64,
    pub verdict: TwoSymmetry,
    pub gap: f64,
}

/// Every automorphism preserves `Tr(ρ1 ρ2)`, so two distinguishable pairs
/// with different overlaps cannot be mapped onto each other.
pub fn verify_not_2_symmetric(
    quad: &SepQuadruple,
    samples: usize,
    seed: u64,
) -> Result<SymmetryReport> {
    let trace_rho = hs_inner(&quad.rho1.matrix(), &quad.rho2.matrix())?;
    let trace_sigma = hs_inner(&quad.sigma1.matrix(), &quad.sigma2.matrix())?;
    let lemma2_rho = lemma2_sum(&quad.rho1, &quad.rho2);
    let lemma2_sigma = lemma2_sum(&quad.sigma1, &quad.sigma2);
    let invariance_max_dev = automorphism_invariance(samples, seed)?;
    let rho_ok = sep_distinguishable(&quad.rho1, &quad.rho2);
    let sigma_ok = sep_distinguishable(&quad.sigma1, &quad.sigma2);
    let gap = (trace_rho - trace_sigma).abs();
    let verdict =
        if rho_ok && sigma_ok && invariance_max_dev <= INVARIANCE_TOL && gap > INVARIANCE_TOL {
            TwoSymmetry::NotTwoSymmetric
        } else {
            TwoSymmetry::Inconclusive
        };
    Ok(SymmetryReport {
        trace_rho,
        trace_sigma,
        lemma2_rho,
        lemma2_sigma,
        rho_pair_distinguishable: rho_ok,
        sigma_pair_distinguishable: sigma_ok,
        invariance_samples: samples,
        invariance_max_dev,
        verdict,
        gap,
    })
}

/// Largest `|Tr(F(p)F(q)) - Tr(pq)|` over random product pairs and random automorphisms.
pub fn automorphism_invariance(samples: usize, seed: u64) -> Result<f64> {
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let p = ProductPureState::random(&mut rng).matrix();
            let q = ProductPureState::random(&mut rng).matrix();
            let f = SepAutomorphism::random(&mut rng);
            let before = hs_inner(&p, &q)?;
            let after = hs_inner(
                &apply_sep_automorphism(&f, &p)?,
                &apply_sep_automorphism(&f, &q)?,
            )?;
            Ok((after - before).abs())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Settings for [`min_over_product_states`].
#[derive(Clone, Copy, Debug)]
pub struct MinimizerConfig {
    /// Random starting points for the alternating minimization.
    pub restarts: usize,
    /// Points per Bloch angle in the deterministic grid; `0` disables the grid.
    pub grid: usize,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            grid: 30,
            max_sweeps: 500,
            seed: 0x5e9a_2022,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProductMinimum {
    pub value: f64,
    pub see_saw: f64,
    pub grid: f64,
    pub ket_a: Ket2,
    pub ket_b: Ket2,
}

impl ProductMinimum {
    pub fn state(&self) -> ProductPureState {
        ProductPureState::from_kets(&self.ket_a, &self.ket_b)
    }
}

/// Smallest eigenpair of a 2x2 Hermitian matrix `[[p, z], [z*, q]]`.
fn min_eig2(p: f64, z: Complex64, q: f64) -> (f64, Ket2) {
    let mean = (p + q) / 2.0;
    let rad = (((p - q) / 2.0).powi(2) + z.norm_sqr()).sqrt();
    let lambda = mean - rad;
    let v1 = [z, Complex64::new(lambda - p, 0.0)];
    let v2 = [Complex64::new(lambda - q, 0.0), z.conj()];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
    if n < 1e-300 {
        return (lambda, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }
    let s = n.sqrt();
    (lambda, [v[0] / s, v[1] / s])
}

/// `(⟨a| ⊗ I) E (|a⟩ ⊗ I)` as `(p, z, q)`.
fn contract_a(e: &DMatrix<Complex64>, a: &Ket2) -> (f64, Complex64, f64) {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (k, row) in m.iter_mut().enumerate() {
        for (l, cell) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc += a[i].conj() * a[j] * e[(i * 2 + k, j * 2 + l)];
                }
            }
            *cell = acc;
        }
    }
    (m[0][0].re, m[0][1], m[1][1].re)
}

/// `(I ⊗ ⟨b|) E (I ⊗ |b⟩)` as `(p, z, q)`.
fn contract_b(e: &DMatrix<Complex64>, b: &Ket2) -> (f64, Complex64, f64) {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                for l in 0..2 {
                    acc += b[k].conj() * b[l] * e[(i * 2 + k, j * 2 + l)];
                }
            }
            *cell = acc;
        }
    }
    (m[0][0].re, m[0][1], m[1][1].re)
}

fn see_saw(e: &DMatrix<Complex64>, start: Ket2, max_sweeps: usize) -> (f64, Ket2, Ket2) {
    let mut a = start;
    let (p, z, q) = contract_a(e, &a);
    let (mut best, mut b) = min_eig2(p, z, q);
    for _ in 0..max_sweeps {
        let (p, z, q) = contract_b(e, &b);
        let (_, na) = min_eig2(p, z, q);
        a = na;
        let (p, z, q) = contract_a(e, &a);
        let (val, nb) = min_eig2(p, z, q);
        b = nb;
        let improved = best - val;
        best = best.min(val);
        if improved < 1e-15 {
            break;
        }
    }
    (best, a, b)
}

/// Minimizes `Tr(E ρ_A ⊗ ρ_B)` over pure product states of two qubits.
pub fn minimize_over_product_states(e: &HermMat, cfg: MinimizerConfig) -> ProductMinimum {
    assert_eq!(e.dim(), 4, "product minimization is defined on C^2 ⊗ C^2");
    let m = e.as_matrix();

    let restarts: Vec<(f64, Ket2, Ket2)> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(cfg.seed, r);
            see_saw(m, bloch_ket(random::unit_vector3(&mut rng)), cfg.max_sweeps)
        })
        .collect();
    let mut best = restarts
        .into_iter()
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .unwrap_or_else(|| see_saw(m, bloch_ket([0.0, 0.0, 1.0]), cfg.max_sweeps));
    let see_saw_value = best.0;

    let mut grid_value = f64::INFINITY;
    if cfg.grid >= 2 {
        let n = cfg.grid;
        let kets: Vec<Ket2> = (0..n)
            .flat_map(|t| {
                let theta = std::f64::consts::PI * t as f64 / (n - 1) as f64;
                (0..n).map(move |f| {
                    let phi = 2.0 * std::f64::consts::PI * f as f64 / n as f64;
                    [
                        Complex64::new((theta / 2.0).cos(), 0.0),
                        Complex64::from_polar((theta / 2.0).sin(), phi),
                    ]
                })
            })
            .collect();
        let grid_best = kets
            .par_iter()
            .map(|a| {
                let (p, z, q) = contract_a(m, a);
                kets.iter()
                    .map(|b| {
                        let v = p * b[0].norm_sqr()
                            + q * b[1].norm_sqr()
                            + 2.0 * (b[0].conj() * z * b[1]).re;
                        (v, *a, *b)
                    })
                    .min_by(|x, y| x.0.total_cmp(&y.0))
                    .expect("grid is nonempty")
            })
            .min_by(|x, y| x.0.total_cmp(&y.0))
            .expect("grid is nonempty");
        grid_value = grid_best.0;
        if grid_best.0 < best.0 {
            best = grid_best;
        }
    }
    ProductMinimum {
        value: best.0,
        see_saw: see_saw_value,
        grid: grid_value,
        ket_a: best.1,
        ket_b: best.2,
    }
}

/// `min Tr(E ρ_A ⊗ ρ_B)` over pure product states; the smaller of the
/// alternating-minimization and grid estimates.
pub fn min_over_product_states(e: &HermMat, cfg: MinimizerConfig) -> f64 {
    minimize_over_product_states(e, cfg).value
}

/// Products of the six Pauli eigenstates on each side.
fn stabilizer_products() -> Vec<HermMat> {
    let dirs = [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    dirs.iter()
        .flat_map(|a| {
            dirs.iter()
                .map(move |b| kron(&HermMat::bloch(*a), &HermMat::bloch(*b)))
        })
        .collect()
}

/// Membership in the convex hull of pure product states plus `extra` points.
///
/// Column generation: solve the hull LP over a pool of points; when it is
/// infeasible, the phase-1 dual ray `y` prices candidate columns and the
/// product state maximizing `y·(x, 1)` joins the pool. Failure to find an
/// improving column yields `Unknown`. Without extra points, a negative
/// partial transpose certifies `Outside`.
pub fn membership(rho: &HermMat, extra: &[HermMat]) -> Result<Membership> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let eig = eig_herm(rho)?;
    if *eig.values.last().unwrap() < -EQ_TOL {
        return Ok(Membership::Outside);
    }
    if extra.is_empty() {
        let pt = HermMat::from_matrix(partial_transpose(rho.as_matrix(), 2, 2, false))?;
        if *eig_herm(&pt)?.values.last().unwrap() < -EQ_TOL {
            return Ok(Membership::Outside);
        }
    }

    let mut target = linalg::to_coords(rho);
    target.push(1.0);
    let column = |m: &HermMat| {
        let mut c = linalg::to_coords(m);
        c.push(1.0);
        c
    };
    let mut pool: Vec<Vec<f64>> = extra
        .iter()
        .chain(stabilizer_products().iter())
        .map(column)
        .collect();
    let pricing = MinimizerConfig {
        restarts: 12,
        grid: 0,
        max_sweeps: 200,
        seed: 0x00c0_1a6e,
    };
    for round in 0..MAX_COLUMN_ROUNDS {
        let mut lp = LinearProgram::new(pool.len());
        for (i, &t) in target.iter().enumerate() {
            lp.add_eq(pool.iter().map(|c| c[i]).collect(), t);
        }
        let res = lp::solve(&lp)?;
        if res.is_feasible() {
            return Ok(Membership::Inside);
        }
        let Some(y) = res.certificate else {
            return Ok(Membership::Unknown);
        };
        let w = linalg::from_coords(4, &y[..16])?;
        let cfg = MinimizerConfig {
            seed: pricing.seed.wrapping_add(round as u64),
            ..pricing
        };
        let best = minimize_over_product_states(&w.scale(-1.0), cfg);
        let gain = -best.value + y[16];
        if gain <= 1e-12 {
            return Ok(Membership::Unknown);
        }
        pool.push(column(&best.state().matrix()));
    }
    Ok(Membership::Unknown)
}

/// Product state with the given kets, as a 4x4 projector.
pub fn product_projector(a: &[Complex64], b: &[Complex64]) -> HermMat {
    HermMat::projector(&kron_vec(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z() -> [f64; 3] {
        [0.0, 0.0, 1.0]
    }

    #[test]
    fn lemma2_examples() {
        let q = SepQuadruple::default();
        assert_abs_diff_eq!(lemma2_sum(&q.rho1, &q.rho2), 1.0, epsilon = 1e-15);
        assert!(sep_distinguishable(&q.rho1, &q.rho2));
        assert_abs_diff_eq!(lemma2_sum(&q.sigma1, &q.sigma2), 0.0, epsilon = 1e-15);
        assert!(sep_distinguishable(&q.sigma1, &q.sigma2));
        assert_abs_diff_eq!(lemma2_sum(&q.rho1, &q.rho1), 2.0, epsilon = 1e-15);
        assert!(!sep_distinguishable(&q.rho1, &q.rho1));
    }

    #[test]
    fn identity_and_bit_flip() {
        let q = SepQuadruple::default();
        let rho = q.rho2.matrix();
        let out = apply_sep_automorphism(&SepAutomorphism::identity(), &rho).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
        let x = linalg::pauli('X');
        let flip = SepAutomorphism::new(x.clone(), false, x, false, false).unwrap();
        let out = apply_sep_automorphism(&flip, &q.sigma1.matrix()).unwrap();
        assert!(out.max_abs_diff(&q.sigma2.matrix()) < 1e-15);
    }

    #[test]
    fn swap_needs_equal_dims() {
        let a = DMatrix::<Complex64>::identity(2, 2);
        let b = DMatrix::<Complex64>::identity(3, 3);
        assert!(matches!(
            SepAutomorphism::new(a, false, b, false, true),
            Err(Error::SwapDimension(2, 3))
        ));
    }

    #[test]
    fn swap_exchanges_factors() {
        let p = ProductPureState::new(z(), [1.0, 0.0, 0.0]);
        let id = DMatrix::identity(2, 2);
        let f = SepAutomorphism::new(id.clone(), false, id, false, true).unwrap();
        let out = apply_sep_automorphism(&f, &p.matrix()).unwrap();
        let want = ProductPureState::new([1.0, 0.0, 0.0], z()).matrix();
        assert!(out.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn partial_transpose_maps_products_to_products() {
        let p = ProductPureState::new([0.3, 0.5, -0.2], [0.1, -0.7, 0.4]);
        let id = DMatrix::identity(2, 2);
        let f = SepAutomorphism::new(id.clone(), true, id, false, false).unwrap();
        let out = apply_sep_automorphism(&f, &p.matrix()).unwrap();
        // transposing a qubit projector flips the y component of its Bloch vector
        let want = ProductPureState::new([0.3, -0.5, -0.2], [0.1, -0.7, 0.4]).matrix();
        assert!(out.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn invariance_on_random_samples() {
        assert!(automorphism_invariance(500, 3).unwrap() <= INVARIANCE_TOL);
    }

    #[test]
    fn one_symmetry_probe() {
        let mut rng = trial_rng(11, 0);
        for _ in 0..50 {
            let p = ProductPureState::random(&mut rng);
            let q = ProductPureState::random(&mut rng);
            let f = SepAutomorphism::between(&p, &q);
            let out = apply_sep_automorphism(&f, &p.matrix()).unwrap();
            assert!(out.max_abs_diff(&q.matrix()) < 1e-10);
        }
    }

    #[test]
    fn default_quadruple_is_not_two_symmetric() {
        let r = verify_not_2_symmetric(&SepQuadruple::default(), 200, 1).unwrap();
        assert_eq!(r.verdict, TwoSymmetry::NotTwoSymmetric);
        assert_abs_diff_eq!(r.trace_rho, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(r.trace_sigma, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gap, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn same_pair_is_inconclusive() {
        let mut q = SepQuadruple::default();
        q.sigma2 = q.rho2.clone();
        let r = verify_not_2_symmetric(&q, 100, 1).unwrap();
        assert_eq!(r.verdict, TwoSymmetry::Inconclusive);
    }

    #[test]
    fn minimization_examples() {
        let cfg = MinimizerConfig::default();
        assert_abs_diff_eq!(
            min_over_product_states(&HermMat::identity(4), cfg),
            1.0,
            epsilon = 1e-12
        );
        let p00 = SepQuadruple::default().rho1.matrix().scale(-1.0);
        assert_abs_diff_eq!(min_over_product_states(&p00, cfg), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn min_eig2_matches_general_solver() {
        let m = HermMat::qubit(0.3, -0.4, 0.1);
        let (l, v) = min_eig2(m.get(0, 0).re, m.get(0, 1), m.get(1, 1).re);
        let e = eig_herm(&m).unwrap();
        assert_abs_diff_eq!(l, e.values[1], epsilon = 1e-14);
        assert_abs_diff_eq!(m.expectation(&v), l, epsilon = 1e-14);
    }

    #[test]
    fn separable_membership() {
        let q = SepQuadruple::default();
        let mix = &q.rho1.matrix().scale(1.0 / 3.0) + &q.rho2.matrix().scale(2.0 / 3.0);
        assert_eq!(membership(&mix, &[]).unwrap(), Membership::Inside);
        assert_eq!(
            membership(&HermMat::identity(4).scale(0.25), &[]).unwrap(),
            Membership::Inside
        );
        // Bell state: negative partial transpose
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = HermMat::projector(&[
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ]);
        assert_eq!(membership(&bell, &[]).unwrap(), Membership::Outside);
    }

    #[test]
    fn random_separable_mixture_is_found() {
        let mut rng = trial_rng(5, 0);
        let w = random::probability_vector(&mut rng, 6);
        let rho = w.iter().fold(HermMat::zeros(4), |acc, &p| {
            &acc + &ProductPureState::random(&mut rng).matrix().scale(p)
        });
        assert_eq!(membership(&rho, &[]).unwrap(), Membership::Inside);
    }
}
