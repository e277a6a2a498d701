//! Tolerance-certified complex linear algebra.
//!
//! Every rank or membership decision goes through a single `tol`. A
//! [`Subspace`] carries the tolerance it was certified at, and all derived
//! subspaces inherit it.

use nalgebra::{DMatrix, DVector, Dim, Matrix, RawStorage, SymmetricEigen, SVD};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const DEFAULT_TOL: f64 = 1e-8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Seed for every randomized step. Independent consumers draw from
/// distinct ChaCha streams of the same seed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

/// Standard complex Gaussian entries.
pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| random_complex(rng))
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Largest entry modulus of any matrix or vector view.
pub fn max_abs<R: Dim, C: Dim, S: RawStorage<C64, R, C>>(m: &Matrix<C64, R, C, S>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A linear subspace of `C^ambient_dim` with an orthonormal basis stored
/// column-wise.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMatrix,
    tol: f64,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: CMatrix::zeros(ambient_dim, 0),
            tol,
        }
    }

    pub fn full(ambient_dim: usize, tol: f64) -> Self {
        Subspace {
            ambient_dim,
            basis: CMatrix::identity(ambient_dim, ambient_dim),
            tol,
        }
    }

    /// Span of the standard basis vectors `e_start, …, e_{start+len−1}`.
    pub fn coordinate_block(ambient_dim: usize, start: usize, len: usize, tol: f64) -> Self {
        let mut basis = CMatrix::zeros(ambient_dim, len);
        for i in 0..len {
            basis[(start + i, i)] = ONE;
        }
        Subspace {
            ambient_dim,
            basis,
            tol,
        }
    }

    /// Orthonormal basis of the span. A direction is discarded when its
    /// residual after orthogonalization has norm at most
    /// `tol · max(1, largest input norm)`.
    pub fn span<'a, I>(ambient_dim: usize, vectors: I, tol: f64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a CVector>,
    {
        let vectors: Vec<&CVector> = vectors.into_iter().collect();
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        let scale = vectors.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let threshold = tol * scale;
        let mut cols: Vec<CVector> = Vec::new();
        for v in vectors {
            if cols.len() == ambient_dim {
                break;
            }
            let mut w = v.clone();
            // Twice is enough.
            for _ in 0..2 {
                for q in &cols {
                    let c = q.dotc(&w);
                    w.axpy(-c, q, ONE);
                }
            }
            let norm = w.norm();
            if norm > threshold {
                cols.push(w.unscale(norm));
            }
        }
        Ok(Self::from_orthonormal(ambient_dim, &cols, tol))
    }

    /// Column span of a matrix.
    pub fn column_span(m: &CMatrix, tol: f64) -> Result<Self> {
        let cols: Vec<CVector> = m.column_iter().map(|c| c.into_owned()).collect();
        Self::span(m.nrows(), &cols, tol)
    }

    fn from_orthonormal(ambient_dim: usize, cols: &[CVector], tol: f64) -> Self {
        let basis = if cols.is_empty() {
            CMatrix::zeros(ambient_dim, 0)
        } else {
            CMatrix::from_columns(cols)
        };
        Subspace {
            ambient_dim,
            basis,
            tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<CVector> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    pub fn residual_norm(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    /// `‖v − P v‖ ≤ tol · max(1, ‖v‖)`.
    pub fn contains(&self, v: &CVector) -> Result<bool> {
        self.check_dim(v.len())?;
        Ok(self.residual_norm(v) <= self.tol * v.norm().max(1.0))
    }

    /// Whether every basis vector of `other` lies in `self`.
    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_dim(other.ambient_dim)?;
        for v in other.basis.column_iter() {
            if !self.contains(&v.into_owned())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        self.check_dim(other.ambient_dim)?;
        Ok(self.dim() == other.dim()
            && self.contains_subspace(other)?
            && other.contains_subspace(self)?)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dim(other.ambient_dim)?;
        let cols: Vec<CVector> = self
            .basis
            .column_iter()
            .chain(other.basis.column_iter())
            .map(|c| c.into_owned())
            .collect();
        Subspace::span(self.ambient_dim, &cols, self.tol)
    }

    /// `A ∩ B` as `A·y` for `y` in the nullspace of `(I − P_B)·A`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dim(other.ambient_dim)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient_dim, self.tol));
        }
        let a = &self.basis;
        let constraint = a - &other.basis * (other.basis.adjoint() * a);
        let null = nullspace(&constraint, self.tol);
        Subspace::column_span(&(a * null), self.tol)
    }

    /// Orthogonal complement in the ambient space.
    pub fn complement(&self) -> Result<Subspace> {
        let residual = CMatrix::identity(self.ambient_dim, self.ambient_dim) - self.projector();
        Subspace::column_span(&residual, self.tol)
    }

    /// Largest entry of `B*B − I`.
    pub fn gram_error(&self) -> f64 {
        let gram = self.basis.adjoint() * &self.basis;
        max_abs(&(gram - CMatrix::identity(self.dim(), self.dim())))
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, m: &CMatrix) -> Result<Subspace> {
        self.check_dim(m.ncols())?;
        Subspace::column_span(&(m * &self.basis), self.tol)
    }
}

/// Orthonormal basis (as columns) of `{x : m·x = 0}`, deciding rank by
/// singular values at most `tol · max(1, largest singular value)`.
pub fn nullspace(m: &CMatrix, tol: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    let padded;
    let m = if rows < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let svd = SVD::new(m.clone(), false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let scale = svd.singular_values.iter().cloned().fold(1.0, f64::max);
    let null: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * scale)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if null.is_empty() {
        CMatrix::zeros(cols, 0)
    } else {
        CMatrix::from_columns(&null)
    }
}

/// One eigenvalue cluster of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub eigenvalue: f64,
    pub space: Subspace,
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues within
/// `10·tol` of their neighbour merged into one cluster. Clusters come back in
/// ascending eigenvalue order.
pub fn hermitian_eigensplit(m: &CMatrix, tol: f64) -> Result<Vec<Eigenspace>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let deviation = max_abs(&(m - m.adjoint()));
    if deviation > tol * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let gap = 10.0 * tol;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()] <= gap => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    clusters
        .into_iter()
        .map(|c| {
            let eigenvalue = c.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / c.len() as f64;
            let cols: Vec<CVector> = c.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
            let space = Subspace::span(n, &cols, tol)?;
            Ok(Eigenspace { eigenvalue, space })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[i] = ONE;
        v
    }

    #[test]
    fn span_examples() {
        let empty: Vec<CVector> = Vec::new();
        assert_eq!(Subspace::span(3, &empty, DEFAULT_TOL).unwrap().dim(), 0);

        let v = CVector::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0)]);
        let w = v.scale(2.0);
        assert_eq!(Subspace::span(2, [&v, &w], DEFAULT_TOL).unwrap().dim(), 1);

        let vs = [&e(3, 0) + &e(3, 1), &e(3, 0) - &e(3, 1), e(3, 0)];
        let s = Subspace::span(3, &vs, DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.gram_error() < DEFAULT_TOL);
    }

    #[test]
    fn span_rejects_wrong_length() {
        let vs = [e(3, 0), e(2, 0)];
        assert!(matches!(
            Subspace::span(3, &vs, DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn subspace_op_examples() {
        let x = Subspace::span(3, &[e(3, 0), &e(3, 1) + &e(3, 2)], DEFAULT_TOL).unwrap();
        assert!(x.intersect(&x).unwrap().equal(&x).unwrap());

        let a = Subspace::span(2, &[e(2, 0)], DEFAULT_TOL).unwrap();
        let b = Subspace::span(2, &[e(2, 1)], DEFAULT_TOL).unwrap();
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);

        let c = Subspace::span(2, &[&e(2, 0) + &e(2, 1)], DEFAULT_TOL).unwrap();
        assert_eq!(a.sum(&c).unwrap().dim(), 2);

        let other = Subspace::full(4, DEFAULT_TOL);
        assert!(matches!(a.sum(&other), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.contains(&e(3, 0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn eigensplit_examples() {
        let id = CMatrix::identity(3, 3);
        let split = hermitian_eigensplit(&id, DEFAULT_TOL).unwrap();
        assert_eq!(split.len(), 1);
        assert!((split[0].eigenvalue - 1.0).abs() < 1e-12);
        assert_eq!(split[0].space.dim(), 3);

        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, C64::new(2.0, 0.0)]));
        let split = hermitian_eigensplit(&d, DEFAULT_TOL).unwrap();
        assert_eq!(split.iter().map(|c| c.space.dim()).collect::<Vec<_>>(), vec![1, 1]);

        let near = CMatrix::from_diagonal(&CVector::from_vec(vec![
            ONE,
            C64::new(1.0 + DEFAULT_TOL / 100.0, 0.0),
        ]));
        let split = hermitian_eigensplit(&near, DEFAULT_TOL).unwrap();
        assert_eq!(split.len(), 1);
        assert_eq!(split[0].space.dim(), 2);
    }

    #[test]
    fn eigensplit_rejects_non_hermitian() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = ONE;
        assert!(matches!(
            hermitian_eigensplit(&m, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = CMatrix::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let n = nullspace(&m, DEFAULT_TOL);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&m * &n)) < 1e-12);
    }

    /// Random subspace of a given dimension, built from seeded Gaussians.
    fn random_subspace(seed: u64, ambient: usize, dim: usize) -> Subspace {
        let mut rng = RngSeed(seed).rng(0);
        let vs: Vec<CVector> = (0..dim).map(|_| random_vector(&mut rng, ambient)).collect();
        Subspace::span(ambient, &vs, DEFAULT_TOL).unwrap()
    }

    proptest! {
        #[test]
        fn dimension_formula(seed in any::<u64>(), ambient in 1usize..9, da in 0usize..9, db in 0usize..9, shared in 0usize..4) {
            // Build A and B sharing a common random piece of dimension `shared`.
            let da = da.min(ambient);
            let db = db.min(ambient);
            let shared = shared.min(da).min(db);
            let mut rng = RngSeed(seed).rng(1);
            let common: Vec<CVector> = (0..shared).map(|_| random_vector(&mut rng, ambient)).collect();
            let mut va = common.clone();
            va.extend((shared..da).map(|_| random_vector(&mut rng, ambient)));
            let mut vb = common;
            vb.extend((shared..db).map(|_| random_vector(&mut rng, ambient)));
            let a = Subspace::span(ambient, &va, DEFAULT_TOL).unwrap();
            let b = Subspace::span(ambient, &vb, DEFAULT_TOL).unwrap();
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(s.gram_error() < DEFAULT_TOL);
            prop_assert!(i.gram_error() < DEFAULT_TOL);
            prop_assert!(a.contains_subspace(&i).unwrap() && b.contains_subspace(&i).unwrap());
        }

        #[test]
        fn contains_is_scale_invariant(seed in any::<u64>(), re in -1e3f64..1e3, im in -1e3f64..1e3) {
            prop_assume!(re.hypot(im) > 1e-3);
            let a = random_subspace(seed, 6, 3);
            let mut rng = RngSeed(seed).rng(2);
            let inside = a.project(&random_vector(&mut rng, 6));
            let outside = random_vector(&mut rng, 6);
            let c = C64::new(re, im);
            prop_assert_eq!(a.contains(&inside).unwrap(), a.contains(&inside.map(|z| z * c)).unwrap());
            prop_assert_eq!(a.contains(&outside).unwrap(), a.contains(&outside.map(|z| z * c)).unwrap());
        }

        #[test]
        fn eigensplit_reconstructs(seed in any::<u64>(), n in 1usize..8) {
            let mut rng = RngSeed(seed).rng(3);
            let x = CMatrix::from_fn(n, n, |_, _| random_complex(&mut rng));
            let h = &x + x.adjoint();
            let split = hermitian_eigensplit(&h, DEFAULT_TOL).unwrap();
            let total: usize = split.iter().map(|c| c.space.dim()).sum();
            prop_assert_eq!(total, n);
            let mut rebuilt = CMatrix::zeros(n, n);
            for c in &split {
                rebuilt += c.space.projector().scale(c.eigenvalue);
                prop_assert!(c.space.gram_error() < DEFAULT_TOL);
            }
            prop_assert!(max_abs(&(rebuilt - &h)) <= 10.0 * DEFAULT_TOL);
        }
    }
}
