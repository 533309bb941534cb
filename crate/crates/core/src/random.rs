//! Seeded generators for randomized trials.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, index)`, so
//! trial outcomes do not depend on execution order or thread count.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::HermMat;

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point on the unit sphere in R^3.
pub fn unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Uniform point in the unit ball in R^3.
pub fn ball_vector3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let dir = unit_vector3(rng);
    let r: f64 = rng.random::<f64>().cbrt();
    [r * dir[0], r * dir[1], r * dir[2]]
}

/// Flat Dirichlet sample on the probability simplex.
pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// `rows × cols` matrix whose columns are probability vectors.
pub fn stochastic_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let columns: Vec<Vec<f64>> = (0..cols).map(|_| probability_vector(rng, rows)).collect();
    (0..rows)
        .map(|j| (0..cols).map(|k| columns[k][j]).collect())
        .collect()
}

/// Haar-random element of SU(2).
pub fn su2<R: Rng + ?Sized>(rng: &mut R) -> DMatrix<Complex64> {
    let q: Vec<f64> = (0..4).map(|_| StandardNormal.sample(rng)).collect();
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b, c, d) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(a, b),
            Complex64::new(c, d),
            Complex64::new(-c, d),
            Complex64::new(a, -b),
        ],
    )
}

/// Random qubit POVM with `n` rank-one elements, `E_k = S^{-1/2} A_k S^{-1/2}`.
pub fn qubit_povm<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<HermMat> {
    loop {
        let parts: Vec<HermMat> = (0..n)
            .map(|_| HermMat::bloch(unit_vector3(rng)).scale(0.2 + rng.random::<f64>()))
            .collect();
        let total = parts.iter().fold(HermMat::zeros(2), |acc, p| &acc + p);
        let Ok(eig) = crate::linalg::eig_herm(&total) else {
            continue;
        };
        if *eig.values.last().unwrap() < 1e-3 {
            continue;
        }
        let mut inv_sqrt = DMatrix::<Complex64>::zeros(2, 2);
        for (l, v) in eig.values.iter().zip(&eig.vectors) {
            let p = HermMat::projector(v);
            inv_sqrt += p.as_matrix().scale(1.0 / l.sqrt());
        }
        return parts.iter().map(|p| p.conjugate_by(&inv_sqrt)).collect();
    }
}
