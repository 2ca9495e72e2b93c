//! Dense complex linear algebra for the handful of small matrices this crate
//! needs (at most 256×256, usually 4×4 or 16×16).
//!
//! Decompositions use Jacobi rotations: one-sided (Hestenes) for the SVD and
//! two-sided cyclic for Hermitian eigenproblems. Both are accurate to a few
//! ulps at these sizes.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance accepted by [`eigh`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Tolerance on eigen/singular decompositions.
pub const EIG_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_finite(entries: &[C64]) -> Result<()> {
    if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![C64::default(); dim],
        }
    }

    /// Unit vector `e_index` of length `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = c64(1.0, 0.0);
        v
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.entries[i]
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c64(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c64(d, 0.0);
        }
        m
    }

    /// `|a⟩⟨b|`
    pub fn outer(a: &ComplexVector, b: &ComplexVector) -> Self {
        let mut m = Self::zeros(a.dim(), b.dim());
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, ComplexVector::dim);
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.dim() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: col.dim(),
                });
            }
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(m)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|m_ij − conj(m_ji)|`, or infinity for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Entry `i·dim(b) + j` of the result is `a[i]·b[j]`.
pub fn tensor_product_vec(a: &ComplexVector, b: &ComplexVector) -> Result<ComplexVector> {
    if a.dim() == 0 || b.dim() == 0 {
        return Err(Error::Empty("tensor product operand"));
    }
    let mut out = Vec::with_capacity(a.dim() * b.dim());
    for x in a.entries() {
        out.extend(b.entries().iter().map(|y| x * y));
    }
    Ok(ComplexVector { entries: out })
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.dagger()
}

pub fn apply(m: &ComplexMatrix, v: &ComplexVector) -> Result<ComplexVector> {
    if m.cols() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            got: v.dim(),
        });
    }
    let entries = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect();
    Ok(ComplexVector { entries })
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Thin singular value decomposition `m = U·diag(s)·V†`.
///
/// `U` is `rows × k` and `V` is `cols × k` with `k = min(rows, cols)`; both
/// have orthonormal columns, including columns paired with zero singular
/// values.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::Empty("matrix"));
    }
    if m.cols() > m.rows() {
        // m† = V s U†
        let t = svd_tall(&m.dagger());
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    Ok(svd_tall(m))
}

pub fn svd_singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(m)?.singular_values)
}

/// One-sided Jacobi on the columns of a matrix with `rows >= cols`.
fn svd_tall(m: &ComplexMatrix) -> Svd {
    let rows = m.rows();
    let n = m.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j).entries).collect();
    let mut v: Vec<Vec<C64>> = (0..n).map(|j| ComplexVector::basis(n, j).entries).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q's phase so the overlap is real, then apply a
                // real Jacobi rotation.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep column order
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let scale = norms.iter().cloned().fold(0.0, f64::max);
    let mut u_cols: Vec<ComplexVector> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        if norms[j] > scale * 1e-13 && norms[j] > 0.0 {
            let inv = 1.0 / norms[j];
            u_cols.push(ComplexVector {
                entries: cols[j].iter().map(|z| z * inv).collect(),
            });
        } else {
            missing.push(k);
            u_cols.push(ComplexVector::zeros(rows));
        }
    }
    complete_orthonormal(&mut u_cols, &missing);

    let singular_values = order.iter().map(|&j| norms[j]).collect();
    let v_cols: Vec<ComplexVector> = order
        .iter()
        .map(|&j| ComplexVector {
            entries: v[j].clone(),
        })
        .collect();
    Svd {
        u: ComplexMatrix::from_columns(&u_cols).expect("uniform column length"),
        singular_values,
        v: ComplexMatrix::from_columns(&v_cols).expect("uniform column length"),
    }
}

/// `(x_p, x_q) ← (c·x_p − s·e·x_q, s·x_p + c·e·x_q)` with `e` a unit phase.
fn rotate_pair(vecs: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (head, tail) = vecs.split_at_mut(q);
    let xp = &mut head[p];
    let xq = &mut tail[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

/// Fill the vectors at `missing` positions so the whole list is orthonormal,
/// by Gram–Schmidt over the standard basis.
fn complete_orthonormal(vecs: &mut [ComplexVector], missing: &[usize]) {
    if missing.is_empty() {
        return;
    }
    let dim = vecs[0].dim();
    let mut candidate = 0;
    for &slot in missing {
        while candidate < dim {
            let mut w = ComplexVector::basis(dim, candidate);
            candidate += 1;
            // unfilled slots are zero and contribute nothing
            for u in vecs.iter() {
                let overlap = u.inner(&w).expect("same dim");
                for i in 0..dim {
                    w[i] -= u[i] * overlap;
                }
            }
            let norm = w.norm();
            if norm > 1e-6 {
                vecs[slot] = w.scale(c64(1.0 / norm, 0.0));
                break;
            }
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Descending; ties keep their diagonal order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` paired with `values[k]`.
    pub vectors: Vec<ComplexVector>,
}

/// Hermitian eigensolver by cyclic complex Jacobi rotations.
pub fn eigh(m: &ComplexMatrix) -> Result<Eigh> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Err(Error::Empty("matrix"));
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.rows();
    // work on the exactly-Hermitian part
    let mut h = m.add(&m.dagger())?.scale(c64(0.5, 0.0));
    let mut vecs = ComplexMatrix::identity(n);

    let total = h.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| h[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * total {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h[(p, q)];
                let g = hpq.norm();
                if g == 0.0 {
                    continue;
                }
                let a = h[(p, p)].re;
                let b = h[(q, q)].re;
                // P = diag(1, e^{-iφ}) makes the pivot real; then a real rotation.
                let phase = (hpq / g).conj();
                let theta = (b - a) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: H ← H·U
                for k in 0..n {
                    let xp = h[(k, p)];
                    let xq = h[(k, q)] * phase;
                    h[(k, p)] = xp * c - xq * s;
                    h[(k, q)] = xp * s + xq * c;
                    let vp = vecs[(k, p)];
                    let vq = vecs[(k, q)] * phase;
                    vecs[(k, p)] = vp * c - vq * s;
                    vecs[(k, q)] = vp * s + vq * c;
                }
                // rows: H ← U†·H
                let phase_c = phase.conj();
                for k in 0..n {
                    let xp = h[(p, k)];
                    let xq = h[(q, k)] * phase_c;
                    h[(p, k)] = xp * c - xq * s;
                    h[(q, k)] = xp * s + xq * c;
                }
                h[(p, q)] = C64::default();
                h[(q, p)] = C64::default();
                h[(p, p)] = c64(h[(p, p)].re, 0.0);
                h[(q, q)] = c64(h[(q, q)].re, 0.0);
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[b].total_cmp(&diag[a]));
    Ok(Eigh {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: order.iter().map(|&i| vecs.column(i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn tensor_of_basis_kets() {
        let up = ComplexVector::from_real(&[1.0, 0.0]).unwrap();
        let v = tensor_product_vec(&up, &up).unwrap();
        assert_eq!(v, ComplexVector::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap());
    }

    #[test]
    fn tensor_of_two_singlets() {
        let s = ComplexVector::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).unwrap();
        let v = tensor_product_vec(&s, &s).unwrap();
        for i in 0..16 {
            let expected = match i {
                0b0101 | 0b1010 => 0.5,
                0b0110 | 0b1001 => -0.5,
                _ => 0.0,
            };
            assert_close(v[i].re, expected, 1e-15);
            assert_eq!(v[i].im, 0.0);
        }
    }

    #[test]
    fn tensor_with_unit_scalar_is_identity() {
        let v = ComplexVector::new(vec![c64(0.6, 0.0), c64(0.0, 0.8)]).unwrap();
        let one = ComplexVector::from_real(&[1.0]).unwrap();
        assert_eq!(tensor_product_vec(&v, &one).unwrap(), v);
    }

    #[test]
    fn tensor_rejects_empty() {
        let v = ComplexVector::from_real(&[1.0]).unwrap();
        let empty = ComplexVector::zeros(0);
        assert!(tensor_product_vec(&v, &empty).is_err());
    }

    #[test]
    fn non_finite_entries_rejected() {
        assert_eq!(
            ComplexVector::from_real(&[f64::NAN]).unwrap_err(),
            Error::NonFinite
        );
        assert!(ComplexMatrix::from_real(1, 1, &[f64::INFINITY]).is_err());
        assert!(ComplexMatrix::from_real(2, 2, &[1.0]).is_err());
    }

    #[test]
    fn dagger_examples() {
        let m = ComplexMatrix::new(1, 1, vec![c64(0.0, 1.0)]).unwrap();
        assert_eq!(m.dagger()[(0, 0)], c64(0.0, -1.0));
        let id = ComplexMatrix::identity(3);
        assert_eq!(dagger(&id), id);
        let n = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            n.dagger(),
            ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap()
        );
    }

    #[test]
    fn apply_examples() {
        let v = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert_eq!(apply(&ComplexMatrix::identity(2), &v).unwrap(), v);
        assert_eq!(
            apply(&ComplexMatrix::zeros(2, 2), &v).unwrap(),
            ComplexVector::zeros(2)
        );
        let up = ComplexVector::from_real(&[1.0, 0.0]).unwrap();
        let proj = ComplexMatrix::outer(&up, &up);
        assert_eq!(
            apply(&proj, &v).unwrap(),
            ComplexVector::from_real(&[FRAC_1_SQRT_2, 0.0]).unwrap()
        );
        assert!(apply(&ComplexMatrix::identity(3), &v).is_err());
    }

    #[test]
    fn singular_value_examples() {
        let s = svd_singular_values(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(s, vec![1.0, 1.0]);

        let d = ComplexMatrix::from_diag(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let s = svd_singular_values(&d).unwrap();
        assert_close(s[0], FRAC_1_SQRT_2, 1e-15);
        assert_close(s[1], FRAC_1_SQRT_2, 1e-15);

        // rank one: σ₁ = ‖m‖_F = 1, σ₂ = 0
        let r1 = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let s = svd_singular_values(&r1).unwrap();
        assert_close(s[0], 1.0, 1e-14);
        assert_close(s[1], 0.0, 1e-14);
    }

    #[test]
    fn svd_of_wide_matrix_has_min_dim_values() {
        let m = ComplexMatrix::from_real(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0]).unwrap();
        let d = svd(&m).unwrap();
        assert_eq!(d.singular_values.len(), 2);
        assert_close(d.singular_values[0], 2.0, 1e-15);
        assert_close(d.singular_values[1], 1.0, 1e-15);
        assert_eq!((d.u.rows(), d.u.cols()), (2, 2));
        assert_eq!((d.v.rows(), d.v.cols()), (4, 2));
    }

    #[test]
    fn svd_of_zero_matrix_still_orthonormal() {
        let d = svd(&ComplexMatrix::zeros(3, 2)).unwrap();
        assert_eq!(d.singular_values, vec![0.0, 0.0]);
        let gram = d.u.dagger().matmul(&d.u).unwrap();
        assert!(frobenius_distance(&gram, &ComplexMatrix::identity(2)).unwrap() < 1e-12);
    }

    #[test]
    fn eigh_examples() {
        let e = eigh(&ComplexMatrix::from_diag(&[1.0, 3.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 1.0]);

        let e = eigh(&ComplexMatrix::identity(4).scale(c64(0.25, 0.0))).unwrap();
        assert_eq!(e.values, vec![0.25; 4]);

        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = eigh(&x).unwrap();
        assert_close(e.values[0], 1.0, 1e-14);
        assert_close(e.values[1], -1.0, 1e-14);
    }

    #[test]
    fn eigh_complex_hermitian() {
        // σy has eigenvalues ±1 with eigenvectors (1, ±i)/√2
        let y = ComplexMatrix::new(
            2,
            2,
            vec![c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)],
        )
        .unwrap();
        let e = eigh(&y).unwrap();
        assert_close(e.values[0], 1.0, 1e-14);
        assert_close(e.values[1], -1.0, 1e-14);
        let mv = apply(&y, &e.vectors[0]).unwrap();
        assert!(mv.sub(&e.vectors[0]).unwrap().norm() < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(eigh(&m), Err(Error::NotHermitian(_))));
        assert!(eigh(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(frobenius_distance(&m, &m).unwrap(), 0.0);
        let id = ComplexMatrix::identity(2);
        assert_close(
            frobenius_distance(&id, &ComplexMatrix::zeros(2, 2)).unwrap(),
            2f64.sqrt(),
            1e-15,
        );
        let a = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_diag(&[0.0, 1.0]);
        assert_close(frobenius_distance(&a, &b).unwrap(), 2f64.sqrt(), 1e-15);
        assert!(frobenius_distance(&a, &ComplexMatrix::identity(3)).is_err());
    }
}
