//! Small dense Hermitian matrices and their real coordinate vectors.
//!
//! Matrix-derived state spaces are vectorized in an orthonormal Hermitian
//! basis: `I/sqrt(d)` first, then for every index pair `j < k` the symmetric
//! and antisymmetric off-diagonal elements, then the traceless diagonal
//! elements. Every basis element `G` satisfies `Tr(G G') = δ`, so the
//! Hilbert–Schmidt inner product becomes the Euclidean dot product and
//! `Tr(E ρ)` is a plain linear functional on the coordinates. For `d = 2`
//! this is `(I, X, Y, Z) / sqrt(2)`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the Hermiticity check at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest imaginary residue accepted when a trace must be real.
pub const REAL_TOL: f64 = 1e-12;
/// Sweep cap passed to the eigensolver.
pub const EIG_MAX_ITER: usize = 10_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A Hermitian matrix of small dimension.
#[derive(Clone, PartialEq)]
pub struct HermMat {
    m: DMatrix<Complex64>,
}

impl fmt::Debug for HermMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HermMat({})", self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.m[(i, j)];
                    if z.im == 0.0 {
                        format!("{:.6}", z.re)
                    } else {
                        format!("{:.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl HermMat {
    /// Builds a matrix from a square nalgebra matrix, checking Hermiticity.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = (&m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        // Symmetrize away the sub-tolerance residue so downstream traces are exact.
        let m = (&m + m.adjoint()).scale(0.5);
        Ok(Self { m })
    }

    /// Row-major complex entries.
    pub fn from_entries(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Real symmetric matrix given by rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_entries(dim, &entries)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { m }
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn projector(psi: &[Complex64]) -> Self {
        let v = DVector::from_column_slice(psi);
        let n = v.norm_squared();
        Self {
            m: (&v * v.adjoint()).unscale(n),
        }
    }

    /// Projector onto the qubit pure state with Bloch vector `r` (normalized internally).
    pub fn bloch(r: [f64; 3]) -> Self {
        let n = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        let (x, y, z) = if n > 0.0 {
            (r[0] / n, r[1] / n, r[2] / n)
        } else {
            (0.0, 0.0, 0.0)
        };
        Self::qubit(x, y, z)
    }

    /// `(I + x X + y Y + z Z) / 2` for an arbitrary (not normalized) Bloch vector.
    pub fn qubit(x: f64, y: f64, z: f64) -> Self {
        let entries = [
            Complex64::new((1.0 + z) / 2.0, 0.0),
            Complex64::new(x / 2.0, -y / 2.0),
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new((1.0 - z) / 2.0, 0.0),
        ];
        Self {
            m: DMatrix::from_row_slice(2, 2, &entries),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.scale(s) }
    }

    /// `U A U†`, which stays Hermitian for any square `U`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Self {
        let m = u * &self.m * u.adjoint();
        Self {
            m: (&m + m.adjoint()).scale(0.5),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        (&self.m - &other.m)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Expectation `⟨ψ|A|ψ⟩` for an unnormalized vector.
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let d = self.dim();
        let mut acc = ZERO;
        for (i, pi) in psi.iter().enumerate().take(d) {
            let row: Complex64 = psi
                .iter()
                .enumerate()
                .map(|(j, pj)| self.m[(i, j)] * pj)
                .sum();
            acc += pi.conj() * row;
        }
        acc.re
    }

    /// Entries as `[re, im]` pairs, row-major nested.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| [self.m[(i, j)].re, self.m[(i, j)].im])
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|p| Complex64::new(p[0], p[1])));
        }
        Self::from_entries(dim, &entries)
    }
}

impl Serialize for HermMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        HermMat::from_pairs(&rows).map_err(serde::de::Error::custom)
    }
}

impl Add for &HermMat {
    type Output = HermMat;
    fn add(self, rhs: &HermMat) -> HermMat {
        HermMat {
            m: &self.m + &rhs.m,
        }
    }
}

impl Sub for &HermMat {
    type Output = HermMat;
    fn sub(self, rhs: &HermMat) -> HermMat {
        HermMat {
            m: &self.m - &rhs.m,
        }
    }
}

impl Mul<&HermMat> for f64 {
    type Output = HermMat;
    fn mul(self, rhs: &HermMat) -> HermMat {
        rhs.scale(self)
    }
}

/// Hilbert–Schmidt inner product `Tr(AB)`.
pub fn hs_inner(a: &HermMat, b: &HermMat) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let d = a.dim();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += a.m[(i, j)] * b.m[(j, i)];
        }
    }
    if acc.im.abs() > REAL_TOL {
        return Err(Error::ComplexResidue(acc.im));
    }
    Ok(acc.re)
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &HermMat, b: &HermMat) -> HermMat {
    HermMat {
        m: a.m.kronecker(&b.m),
    }
}

/// Kronecker product of two state vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Spectral decomposition with eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Unit eigenvectors, `vectors[i]` belonging to `values[i]`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl Eigen {
    /// `Σ λ_i v_i v_i†`.
    pub fn reconstruct(&self) -> HermMat {
        let d = self.vectors.first().map_or(0, |v| v.len());
        let mut acc = HermMat::zeros(d);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            acc = &acc + &HermMat::projector(v).scale(*lambda);
        }
        acc
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eig_herm(a: &HermMat) -> Result<Eigen> {
    let eig =
        a.m.clone()
            .try_symmetric_eigen(f64::EPSILON, EIG_MAX_ITER)
            .ok_or(Error::EigenNonConvergence(EIG_MAX_ITER))?;
    let mut order: Vec<usize> = (0..a.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Ok(Eigen { values, vectors })
}

/// Number of real coordinates for a `d × d` Hermitian matrix.
pub fn coord_len(dim: usize) -> usize {
    dim * dim
}

/// Coordinates of `A` in the orthonormal Hermitian basis.
pub fn to_coords(a: &HermMat) -> Vec<f64> {
    let d = a.dim();
    let mut x = Vec::with_capacity(d * d);
    x.push(a.trace() / (d as f64).sqrt());
    let s2 = std::f64::consts::SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let z = a.m[(j, k)];
            x.push(s2 * z.re);
            x.push(-s2 * z.im);
        }
    }
    for l in 1..d {
        let c = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let head: f64 = (0..l).map(|m| a.m[(m, m)].re).sum();
        x.push(c * (head - l as f64 * a.m[(l, l)].re));
    }
    x
}

/// Inverse of [`to_coords`].
pub fn from_coords(dim: usize, x: &[f64]) -> Result<HermMat> {
    if x.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            got: x.len(),
        });
    }
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let t = x[0] / (dim as f64).sqrt();
    for i in 0..dim {
        m[(i, i)] = Complex64::new(t, 0.0);
    }
    let s2 = std::f64::consts::SQRT_2;
    let mut idx = 1;
    for j in 0..dim {
        for k in (j + 1)..dim {
            let re = x[idx] / s2;
            let im = -x[idx + 1] / s2;
            m[(j, k)] = Complex64::new(re, im);
            m[(k, j)] = Complex64::new(re, -im);
            idx += 2;
        }
    }
    for l in 1..dim {
        let c = x[idx] / ((l * (l + 1)) as f64).sqrt();
        for mm in 0..l {
            m[(mm, mm)].re += c;
        }
        m[(l, l)].re -= l as f64 * c;
        idx += 1;
    }
    Ok(HermMat { m })
}

/// The `index`-th element of the orthonormal Hermitian basis.
pub fn basis_element(dim: usize, index: usize) -> HermMat {
    let mut x = vec![0.0; dim * dim];
    x[index] = 1.0;
    from_coords(dim, &x).expect("length matches")
}

/// Computational basis ket `|i⟩` of dimension `dim`.
pub fn ket(dim: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; dim];
    v[i] = ONE;
    v
}

/// Discrete Fourier basis of dimension `dim`; for a qubit this is the X eigenbasis.
pub fn fourier_basis(dim: usize) -> Vec<Vec<Complex64>> {
    let norm = 1.0 / (dim as f64).sqrt();
    (0..dim)
        .map(|k| {
            (0..dim)
                .map(|j| {
                    Complex64::from_polar(
                        norm,
                        2.0 * std::f64::consts::PI * (j * k) as f64 / dim as f64,
                    )
                })
                .collect()
        })
        .collect()
}

/// Pauli matrices as complex 2x2 nalgebra matrices.
pub fn pauli(which: char) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let entries = match which {
        'I' => [ONE, ZERO, ZERO, ONE],
        'X' => [ZERO, ONE, ONE, ZERO],
        'Y' => [ZERO, -i, i, ZERO],
        'Z' => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("unknown Pauli `{which}`"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ket0() -> HermMat {
        HermMat::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap()
    }
    fn ket1() -> HermMat {
        HermMat::from_real_rows(&[[0.0, 0.0], [0.0, 1.0]]).unwrap()
    }
    fn plus() -> HermMat {
        HermMat::from_real_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap()
    }

    #[test]
    fn hs_inner_fixture_values() {
        let rho1 = kron(&ket0(), &ket0());
        let rho2 = kron(&plus(), &plus());
        assert_abs_diff_eq!(hs_inner(&rho1, &rho2).unwrap(), 0.25, epsilon = 1e-12);
        let sigma2 = kron(&ket1(), &ket1());
        assert_abs_diff_eq!(hs_inner(&rho1, &sigma2).unwrap(), 0.0, epsilon = 1e-12);
        let p = HermMat::bloch([0.3, -0.4, 0.5]);
        assert_abs_diff_eq!(hs_inner(&p, &p).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hs_inner_dimension_mismatch() {
        let err = hs_inner(&HermMat::identity(2), &HermMat::identity(4)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn kron_examples() {
        let k = kron(&ket0(), &ket0());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(k.get(i, j), Complex64::new(want, 0.0));
            }
        }
        let half = HermMat::identity(2).scale(0.5);
        assert!(kron(&half, &half).max_abs_diff(&HermMat::identity(4).scale(0.25)) < 1e-15);
        let pp = kron(&plus(), &plus());
        let quarter = HermMat::from_real_rows(&[[0.25; 4]; 4]).unwrap();
        assert!(pp.max_abs_diff(&quarter) < 1e-15);
    }

    #[test]
    fn eig_examples() {
        let e = eig_herm(&HermMat::identity(2).scale(0.5)).unwrap();
        assert_abs_diff_eq!(e.values[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 0.5, epsilon = 1e-14);
        let e = eig_herm(&HermMat::diag(&[0.25, 0.75])).unwrap();
        assert_abs_diff_eq!(e.values[0], 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 0.25, epsilon = 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let e = HermMat::from_real_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap_err();
        assert!(matches!(e, Error::NotHermitian(_)));
        let e = HermMat::from_real_rows(&[[f64::NAN, 0.0], [0.0, 1.0]]).unwrap_err();
        assert!(matches!(e, Error::NonFinite));
    }

    #[test]
    fn basis_is_orthonormal() {
        for d in 1..=4 {
            let n = coord_len(d);
            for a in 0..n {
                for b in 0..n {
                    let ip = hs_inner(&basis_element(d, a), &basis_element(d, b)).unwrap();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(ip, want, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn qubit_coordinates_are_scaled_bloch() {
        let rho = HermMat::qubit(0.1, -0.2, 0.3);
        let x = to_coords(&rho);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let want = [s, 0.1 * s, -0.2 * s, 0.3 * s];
        for (a, b) in x.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn serde_pairs_round_trip() {
        let a = HermMat::qubit(0.2, 0.4, -0.1);
        let s = serde_json::to_string(&a).unwrap();
        let b: HermMat = serde_json::from_str(&s).unwrap();
        assert!(a.max_abs_diff(&b) == 0.0);
    }
}
