//! Signature-aware dense linear algebra on small coordinate spaces.
//!
//! Every ambient metric in this crate is a constant diagonal form
//! `inner(u, v) = Σ signs[i] u_i v_i` with `signs[i] ∈ {−1, +1}`. Subspaces are
//! carried as explicit bases together with their Gram matrices, so that
//! degenerate (null) directions can be detected rather than silently divided by.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Absolute pivot / degeneracy threshold for O(1) data.
pub const TOL_ALG: f64 = 1e-9;

/// Constant diagonal indefinite metric on a flat coordinate space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureMetric {
    signs: Vec<f64>,
}

impl SignatureMetric {
    pub fn new(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidArgument("metric dimension must be positive".into()));
        }
        if let Some(bad) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::InvalidArgument(format!("metric sign {bad} is not ±1")));
        }
        Ok(Self { signs: signs.iter().map(|&s| f64::from(s)).collect() })
    }

    /// `n_minus` negative directions followed by `n_plus` positive ones.
    pub fn split(n_minus: usize, n_plus: usize) -> Self {
        let mut signs = vec![-1.0; n_minus];
        signs.extend(std::iter::repeat(1.0).take(n_plus));
        assert!(!signs.is_empty(), "metric dimension must be positive");
        Self { signs }
    }

    /// Block-diagonal sum of two metrics.
    pub fn direct_sum(&self, other: &SignatureMetric) -> Self {
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        Self { signs }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn sign(&self, i: usize) -> f64 {
        self.signs[i]
    }

    /// `(n_minus, n_plus)` of the full space.
    pub fn index_counts(&self) -> (usize, usize) {
        let minus = self.signs.iter().filter(|s| **s < 0.0).count();
        (minus, self.signs.len() - minus)
    }

    pub fn inner(&self, u: &Vector, v: &Vector) -> Result<f64> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.dot(u, v))
    }

    /// Unchecked inner product. The summand `s_i u_i v_i` is symmetric in
    /// `u, v` term by term, so `dot(u, v) == dot(v, u)` bit for bit.
    pub fn dot(&self, u: &Vector, v: &Vector) -> f64 {
        debug_assert_eq!(u.len(), self.signs.len());
        debug_assert_eq!(v.len(), self.signs.len());
        self.signs
            .iter()
            .zip(u.iter().zip(v.iter()))
            .map(|(s, (a, b))| s * (a * b))
            .sum()
    }

    /// Metric-lowered covector `g·v` as a coordinate vector.
    pub fn lower(&self, v: &Vector) -> Vector {
        Vector::from_iterator(v.len(), self.signs.iter().zip(v.iter()).map(|(s, x)| s * x))
    }

    pub fn gram(&self, vectors: &[Vector]) -> Matrix {
        let k = vectors.len();
        let mut g = Matrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = self.dot(&vectors[i], &vectors[j]);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_diagonal(&Vector::from_column_slice(&self.signs))
    }

    pub fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.len() != self.signs.len() {
            return Err(Error::DimensionMismatch { expected: self.signs.len(), found: v.len() });
        }
        Ok(())
    }
}

/// Counts of negative, positive and null eigenvalues of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub n_minus: usize,
    pub n_plus: usize,
    pub n_null: usize,
}

/// A linear subspace of a coordinate space, stored by an independent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
    gram: Matrix,
}

impl Subspace {
    pub fn new(basis: Vec<Vector>, g: &SignatureMetric) -> Result<Self> {
        for v in &basis {
            g.check_dim(v)?;
        }
        let r = rank(&basis);
        if r < basis.len() {
            return Err(Error::LinearlyDependent { rank: r, count: basis.len() });
        }
        let gram = g.gram(&basis);
        Ok(Self { ambient_dim: g.dim(), basis, gram })
    }

    /// Subspace spanned by the given coordinate axes (0-based).
    pub fn coordinate(axes: &[usize], g: &SignatureMetric) -> Result<Self> {
        let basis = axes
            .iter()
            .map(|&i| {
                if i >= g.dim() {
                    Err(Error::DimensionMismatch { expected: g.dim(), found: i + 1 })
                } else {
                    Ok(unit(g.dim(), i))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(basis, g)
    }

    /// Whole coordinate space.
    pub fn full(g: &SignatureMetric) -> Self {
        let basis: Vec<Vector> = (0..g.dim()).map(|i| unit(g.dim(), i)).collect();
        let gram = g.gram(&basis);
        Self { ambient_dim: g.dim(), basis, gram }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// True when `v` lies in the span within `tol` (Euclidean residual of a
    /// least-squares fit).
    pub fn contains(&self, v: &Vector, tol: f64) -> bool {
        if self.basis.is_empty() {
            return v.amax() < tol;
        }
        let b = Matrix::from_columns(&self.basis);
        let btb = b.transpose() * &b;
        let Some(c) = btb.lu().solve(&(b.transpose() * v)) else {
            return false;
        };
        (v - b * c).amax() < tol
    }
}

pub fn unit(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Reduced row echelon form with partial pivoting. Returns the pivot columns.
fn rref(a: &mut Matrix, tol: f64) -> Vec<usize> {
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, a[(i, c)].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val < tol {
            continue;
        }
        a.swap_rows(r, best);
        let p = a[(r, c)];
        for j in 0..cols {
            a[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r {
                let f = a[(i, c)];
                if f != 0.0 {
                    for j in 0..cols {
                        a[(i, j)] -= f * a[(r, j)];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Numerical rank of a set of vectors (pivot threshold [`TOL_ALG`]).
pub fn rank(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let n = vectors[0].len();
    let mut a = Matrix::from_fn(vectors.len(), n, |i, j| vectors[i][j]);
    rref(&mut a, TOL_ALG).len()
}

/// Basis of the null space `{x : A x = 0}`.
pub fn null_space(a: &Matrix, tol: f64) -> Vec<Vector> {
    let cols = a.ncols();
    let mut m = a.clone();
    let pivots = rref(&mut m, tol);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = Vector::zeros(cols);
            v[f] = 1.0;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(row, f)];
            }
            v
        })
        .collect()
}

/// Annihilator `{v : inner(v, w) = 0 for all w in W}`.
///
/// Well defined for degenerate `W`; in that case the result intersects `W`.
pub fn orthogonal_complement(w: &Subspace, g: &SignatureMetric) -> Subspace {
    let n = g.dim();
    if w.basis.is_empty() {
        return Subspace::full(g);
    }
    let constraints =
        Matrix::from_fn(w.basis.len(), n, |i, j| g.sign(j) * w.basis[i][j]);
    let basis = null_space(&constraints, TOL_ALG);
    let gram = g.gram(&basis);
    Subspace { ambient_dim: n, basis, gram }
}

/// Coefficients `c` with `Σ c_i w_i` the orthogonal projection of `v` onto `W`.
pub fn project_coefficients(v: &Vector, w: &Subspace, g: &SignatureMetric) -> Result<Vector> {
    g.check_dim(v)?;
    if w.basis.is_empty() {
        return Ok(Vector::zeros(0));
    }
    let det = w.gram.determinant();
    if det.abs() < TOL_ALG {
        return Err(Error::DegenerateSubspace(format!("|det gram| = {:e}", det.abs())));
    }
    let rhs = Vector::from_iterator(w.basis.len(), w.basis.iter().map(|b| g.dot(v, b)));
    w.gram
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateSubspace("singular gram matrix".into()))
}

/// The unique `p ∈ span(W)` with `v − p ⊥ W`.
pub fn project(v: &Vector, w: &Subspace, g: &SignatureMetric) -> Result<Vector> {
    let c = project_coefficients(v, w, g)?;
    let mut out = Vector::zeros(v.len());
    for (ci, b) in c.iter().zip(&w.basis) {
        out.axpy(*ci, b, 1.0);
    }
    Ok(out)
}

/// Eigenvalue sign counts of the Gram matrix of `W`.
pub fn signature_of(w: &Subspace, g: &SignatureMetric) -> Signature {
    let _ = g;
    gram_signature(&w.gram, TOL_ALG)
}

/// Eigenvalue sign counts of a symmetric matrix.
pub fn gram_signature(gram: &Matrix, tol: f64) -> Signature {
    let mut sig = Signature { n_minus: 0, n_plus: 0, n_null: 0 };
    if gram.nrows() == 0 {
        return sig;
    }
    let eig = SymmetricEigen::new(gram.clone());
    for &l in eig.eigenvalues.iter() {
        if l.abs() < tol {
            sig.n_null += 1;
        } else if l < 0.0 {
            sig.n_minus += 1;
        } else {
            sig.n_plus += 1;
        }
    }
    sig
}

/// Gram–Schmidt with pivoting on the largest `|inner(v, v)|`.
///
/// Returns `(u_i, s_i)` with `inner(u_i, u_j) = s_i δ_ij`. When every remaining
/// candidate is null but two of them pair non-trivially, the pair `(a, b)` is
/// replaced by `(a + b, a − b)` before continuing.
pub fn pseudo_orthonormalize(w: &Subspace, g: &SignatureMetric) -> Result<Vec<(Vector, f64)>> {
    pseudo_orthonormalize_against(&[], w.basis.clone(), g)
}

/// Pseudo-orthonormalizes `candidates` after making them orthogonal to the
/// already pseudo-orthonormal `fixed` vectors. Only the new vectors are returned.
pub fn pseudo_orthonormalize_against(
    fixed: &[(Vector, f64)],
    mut candidates: Vec<Vector>,
    g: &SignatureMetric,
) -> Result<Vec<(Vector, f64)>> {
    let mut chosen: Vec<(Vector, f64)> = Vec::new();
    let remove_components = |v: &mut Vector, frame: &[(Vector, f64)]| {
        for (u, s) in frame {
            let c = s * g.dot(v, u);
            v.axpy(-c, u, 1.0);
        }
    };
    for c in candidates.iter_mut() {
        remove_components(c, fixed);
    }
    loop {
        candidates.retain(|c| c.amax() >= TOL_ALG);
        if candidates.is_empty() {
            break;
        }
        let selfs: Vec<f64> = candidates.iter().map(|c| g.dot(c, c)).collect();
        let (best, best_val) = selfs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.abs() > acc.1 { (i, s.abs()) } else { acc });
        if best_val < TOL_ALG {
            // all null: look for a pair with non-zero mutual inner product
            let mut pair = None;
            let mut pair_val = TOL_ALG;
            for i in 0..candidates.len() {
                for j in (i + 1)..candidates.len() {
                    let m = g.dot(&candidates[i], &candidates[j]).abs();
                    if m >= pair_val {
                        if pair.is_none() || m > pair_val {
                            pair = Some((i, j));
                            pair_val = m;
                        }
                    }
                }
            }
            let Some((i, j)) = pair else {
                return Err(Error::DegenerateSubspace(format!(
                    "{} remaining null directions with no non-null combination",
                    candidates.len()
                )));
            };
            let a = candidates[i].clone();
            let b = candidates[j].clone();
            candidates[i] = &a + &b;
            candidates[j] = &a - &b;
            continue;
        }
        let v = candidates.remove(best);
        let sv = selfs[best];
        let u = v / sv.abs().sqrt();
        let s = sv.signum();
        for c in candidates.iter_mut() {
            let coef = s * g.dot(c, &u);
            c.axpy(-coef, &u, 1.0);
        }
        chosen.push((u, s));
    }
    Ok(chosen)
}

/// Max-norm of a vector; the residual convention used throughout the crate.
pub fn max_norm(v: &Vector) -> f64 {
    v.amax()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r84() -> SignatureMetric {
        SignatureMetric::split(4, 4)
    }

    fn e(i: usize) -> Vector {
        // 1-based to match coordinate labels
        unit(8, i - 1)
    }

    #[test]
    fn inner_examples() {
        let g = r84();
        assert_eq!(g.inner(&e(1), &e(1)).unwrap(), -1.0);
        assert_eq!(g.inner(&e(1), &e(2)).unwrap(), 0.0);
        let v = e(1) + e(5);
        assert_eq!(g.inner(&v, &v).unwrap(), 0.0);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let g = r84();
        let err = g.inner(&unit(7, 0), &e(1)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 8, found: 7 });
    }

    #[test]
    fn metric_rejects_bad_signs() {
        assert!(SignatureMetric::new(&[1, 0, -1]).is_err());
        assert!(SignatureMetric::new(&[]).is_err());
        assert_eq!(SignatureMetric::new(&[-1, 1, 1]).unwrap().index_counts(), (1, 2));
    }

    #[test]
    fn complement_of_axis() {
        let g = r84();
        let w = Subspace::coordinate(&[0], &g).unwrap();
        let c = orthogonal_complement(&w, &g);
        assert_eq!(c.dim(), 7);
        for i in 2..=8 {
            assert!(c.contains(&e(i), 1e-12), "e{i}");
        }
        assert!(!c.contains(&e(1), 1e-6));
    }

    #[test]
    fn complement_of_two_axes() {
        let g = r84();
        let w = Subspace::coordinate(&[4, 6], &g).unwrap();
        let c = orthogonal_complement(&w, &g);
        assert_eq!(c.dim(), 6);
        for i in [1, 2, 3, 4, 6, 8] {
            assert!(c.contains(&e(i), 1e-12), "e{i}");
        }
    }

    #[test]
    fn complement_of_null_line_contains_it() {
        let g = r84();
        let null = e(1) + e(5);
        let w = Subspace::new(vec![null.clone()], &g).unwrap();
        let c = orthogonal_complement(&w, &g);
        assert_eq!(c.dim(), 7);
        // direct evaluation: the null vector annihilates itself
        assert_eq!(g.dot(&null, &null), 0.0);
        assert!(c.contains(&null, 1e-12));
        for b in c.basis() {
            assert!(g.dot(b, &null).abs() < 1e-12);
        }
    }

    #[test]
    fn project_examples() {
        let g = r84();
        let w1 = Subspace::coordinate(&[0], &g).unwrap();
        assert!((project(&e(1), &w1, &g).unwrap() - e(1)).amax() < 1e-15);
        let w5 = Subspace::coordinate(&[4], &g).unwrap();
        assert!((project(&(e(1) + e(5)), &w5, &g).unwrap() - e(5)).amax() < 1e-15);
        let wn = Subspace::new(vec![e(1) + e(5)], &g).unwrap();
        assert!(matches!(project(&e(1), &wn, &g), Err(Error::DegenerateSubspace(_))));
    }

    #[test]
    fn signature_examples() {
        let g = r84();
        let w = Subspace::coordinate(&[0, 4], &g).unwrap();
        assert_eq!(signature_of(&w, &g), Signature { n_minus: 1, n_plus: 1, n_null: 0 });
        let n = Subspace::new(vec![e(1) + e(5)], &g).unwrap();
        assert_eq!(signature_of(&n, &g), Signature { n_minus: 0, n_plus: 0, n_null: 1 });
        assert_eq!(
            signature_of(&Subspace::full(&g), &g),
            Signature { n_minus: 4, n_plus: 4, n_null: 0 }
        );
    }

    #[test]
    fn orthonormalize_scaling() {
        let g = r84();
        let w = Subspace::new(vec![e(1) * 2.0], &g).unwrap();
        let out = pseudo_orthonormalize(&w, &g).unwrap();
        assert_eq!(out.len(), 1);
        assert!((&out[0].0 - e(1)).amax() < 1e-15);
        assert_eq!(out[0].1, -1.0);
    }

    #[test]
    fn orthonormalize_classical() {
        let g = r84();
        let w = Subspace::new(vec![e(1), e(1) + e(2)], &g).unwrap();
        let out = pseudo_orthonormalize(&w, &g).unwrap();
        // |self| ties at 1 vs 2: e1+e2 has self-inner −2 and is picked first
        let signs: Vec<f64> = out.iter().map(|p| p.1).collect();
        assert_eq!(signs, vec![-1.0, -1.0]);
        let gram = g.gram(&out.iter().map(|p| p.0.clone()).collect::<Vec<_>>());
        assert!((gram + Matrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn orthonormalize_null_pair() {
        let g = r84();
        let w = Subspace::new(vec![e(1) + e(5), e(1) - e(5)], &g).unwrap();
        let out = pseudo_orthonormalize(&w, &g).unwrap();
        // oracle: closed-form eigenvalues of [[0,-2],[-2,0]] are ±2
        let (a, b, d) = (0.0f64, -2.0f64, 0.0f64);
        let disc = ((a - d) * (a - d) / 4.0 + b * b).sqrt();
        let eig = [(a + d) / 2.0 - disc, (a + d) / 2.0 + disc];
        let mut expected: Vec<f64> = eig.iter().map(|l| l.signum()).collect();
        let mut got: Vec<f64> = out.iter().map(|p| p.1).collect();
        expected.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        assert_eq!(got, expected);
        assert_eq!(out[0].1, -1.0);
        assert!((&out[0].0 - e(1)).amax() < 1e-14);
        assert!((&out[1].0 - e(5)).amax() < 1e-14);
    }

    #[test]
    fn orthonormalize_degenerate_errors() {
        let g = r84();
        let w = Subspace::new(vec![e(1) + e(5), e(2) + e(6)], &g).unwrap();
        assert!(matches!(pseudo_orthonormalize(&w, &g), Err(Error::DegenerateSubspace(_))));
    }

    #[test]
    fn dependent_basis_rejected() {
        let g = r84();
        assert!(matches!(
            Subspace::new(vec![e(1), e(1) * 3.0], &g),
            Err(Error::LinearlyDependent { rank: 1, count: 2 })
        ));
    }
}
