//! Dense exact linear algebra over a [`Scalar`] field.

mod lp;

use std::fmt;

use crate::scalar::Scalar;

pub use lp::{lp_solve, Constraint, LpResult, LpStatus, Sense};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("expected {expected} entries, got {found}")]
    Shape { expected: usize, found: usize },
    #[error("rows have inconsistent lengths")]
    Ragged,
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Ragged);
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix with `cols` columns from a list of equal-length vectors.
    pub fn from_row_slices(rows: &[Vec<F>], cols: usize) -> Result<Self, LinalgError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Ragged);
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() })
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

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<F> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = F::zero();
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        acc = acc + &(a.clone() * b);
                    }
                }
                out.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data: out }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> =
                self.data[r * self.cols..(r + 1) * self.cols].iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl<F: Scalar> fmt::Display for Matrix<F> {
    /// One row per line, entries separated by a single space.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc + &(x.clone() * y);
        }
    }
    acc
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref<F: Scalar> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination. The pivot in each column is the first nonzero
/// entry at or below the current row, so the result is deterministic.
pub fn rref<F: Scalar>(m: &Matrix<F>) -> Rref<F> {
    let mut rows: Vec<Vec<F>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let pivots = eliminate(&mut rows, m.cols(), None);
    let matrix = Matrix::from_row_slices(&rows, m.cols()).expect("consistent rows");
    Rref { matrix, pivots }
}

/// In-place Gauss-Jordan on `rows` (first `cols` columns). When `track` is
/// given, the same row operations are applied to it. Returns pivot columns;
/// pivot rows end up first.
fn eliminate<F: Scalar>(rows: &mut [Vec<F>], cols: usize, mut track: Option<&mut [Vec<F>]>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if let Some(t) = track.as_deref_mut() {
            t.swap(r, p);
        }
        let inv = rows[r][c].recip().expect("nonzero pivot");
        if inv != F::one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() * &inv;
                }
            }
            if let Some(t) = track.as_deref_mut() {
                for x in t[r].iter_mut() {
                    if !x.is_zero() {
                        *x = x.clone() * &inv;
                    }
                }
            }
        }
        let pivot_row = rows[r].clone();
        let pivot_track = track.as_deref().map(|t| t[r].clone());
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - &(factor.clone() * p);
                }
            }
            if let (Some(t), Some(pt)) = (track.as_deref_mut(), pivot_track.as_ref()) {
                for (x, p) in t[i].iter_mut().zip(pt) {
                    if !p.is_zero() {
                        *x = x.clone() - &(factor.clone() * p);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Scalar>(m: &Matrix<F>) -> usize {
    rank_of_rows(&(0..m.rows()).map(|r| m.row(r).to_vec()).collect::<Vec<_>>(), m.cols())
}

/// Rank of a list of vectors, each of length `cols`.
pub fn rank_of_rows<F: Scalar>(rows: &[Vec<F>], cols: usize) -> usize {
    let mut work = rows.to_vec();
    forward_rank(&mut work, cols)
}

/// Row echelon (not reduced) rank computation; cheaper than full Gauss-Jordan.
fn forward_rank<F: Scalar>(rows: &mut [Vec<F>], cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip().expect("nonzero pivot");
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone() * &inv;
            for (x, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *x = x.clone() - &(factor.clone() * pv);
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel `{x : m·x = 0}`, one vector per free column.
pub fn kernel_basis<F: Scalar>(m: &Matrix<F>) -> Vec<Vec<F>> {
    let Rref { matrix, pivots } = rref(m);
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); m.cols()];
        v[free] = F::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -matrix.get(i, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: Scalar>(m: &Matrix<F>) -> Option<Matrix<F>> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut rows: Vec<Vec<F>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.extend((0..n).map(|c| if c == r { F::one() } else { F::zero() }));
            row
        })
        .collect();
    let pivots = eliminate(&mut rows, n, None);
    if pivots.len() < n {
        return None;
    }
    let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
    Some(Matrix { rows: n, cols: n, data })
}

/// Outcome of [`solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution<F> {
    /// A solution of `m·x = rhs`; free variables are set to zero.
    Consistent(Vec<F>),
    /// A vector `y` with `yᵀ·m = 0` and `yᵀ·rhs = 1`.
    Inconsistent(Vec<F>),
}

pub fn solve<F: Scalar>(m: &Matrix<F>, rhs: &[F]) -> Solution<F> {
    assert_eq!(m.rows(), rhs.len(), "rhs length must equal the row count");
    let n = m.rows();
    let mut rows: Vec<Vec<F>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut track: Vec<Vec<F>> = Matrix::<F>::identity(n)
        .data
        .chunks(n.max(1))
        .take(n)
        .map(<[F]>::to_vec)
        .collect();
    let pivots = eliminate(&mut rows, m.cols(), Some(&mut track));
    let rank = pivots.len();
    for i in rank..n {
        let b = &rows[i][m.cols()];
        if !b.is_zero() {
            let inv = b.recip().expect("nonzero");
            return Solution::Inconsistent(track[i].iter().map(|x| x.clone() * &inv).collect());
        }
    }
    let mut x = vec![F::zero(); m.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i][m.cols()].clone();
    }
    Solution::Consistent(x)
}

/// Affine hull of a point set: `origin` is the first point and `basis` is
/// the reduced row echelon basis of the difference space. `pivots[k]` is the
/// coordinate that reads off the `k`-th hull coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineHull<F> {
    pub origin: Vec<F>,
    pub basis: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> AffineHull<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Hull coordinates of a point lying in the hull.
    pub fn coordinates(&self, point: &[F]) -> Vec<F> {
        self.pivots.iter().map(|&p| point[p].clone() - &self.origin[p]).collect()
    }

    pub fn reconstruct(&self, coords: &[F]) -> Vec<F> {
        let mut out = self.origin.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, bv) in out.iter_mut().zip(b) {
                if !bv.is_zero() {
                    *o = o.clone() + &(c.clone() * bv);
                }
            }
        }
        out
    }

    pub fn contains(&self, point: &[F]) -> bool {
        self.reconstruct(&self.coordinates(point)) == point
    }
}

/// # Panics
/// Panics on an empty point list or points of different lengths.
pub fn affine_hull<F: Scalar>(points: &[Vec<F>]) -> AffineHull<F> {
    let origin = points.first().expect("affine hull of an empty set").clone();
    let n = origin.len();
    let diffs: Vec<Vec<F>> = points[1..]
        .iter()
        .map(|p| {
            assert_eq!(p.len(), n, "points must share a dimension");
            p.iter().zip(&origin).map(|(a, b)| a.clone() - b).collect()
        })
        .collect();
    let mut rows = diffs;
    let pivots = eliminate(&mut rows, n, None);
    rows.truncate(pivots.len());
    AffineHull { origin, basis: rows, pivots }
}

/// Affine rank (dimension of the affine hull) of the given points.
pub fn affine_rank<F: Scalar>(points: &[&[F]]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let n = first.len();
    let mut rows: Vec<Vec<F>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a.clone() - b).collect())
        .collect();
    forward_rank(&mut rows, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Sqrt5};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        let a1 = qm(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, -1]]);
        assert_eq!(rank(&a1), 1);
        assert_eq!(rank(&Matrix::<Rational>::identity(4)), 4);
        // Orbit-2 representative of F4 (scaled by 4): row4 = row1 - (row3 - row2).
        let a2 = qm(&[&[1, 0, 1, 0], &[0, 1, 0, -1], &[0, 1, 0, 1], &[1, 0, 1, -2]]);
        assert_eq!(rank(&a2), 3);
        assert_eq!(rank(&Matrix::<Rational>::zeros(0, 3)), 0);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let v: Vec<Rational> = [3, -1, 2].iter().map(|&x| Rational::from_integer(x)).collect();
        assert_eq!(solve(&Matrix::identity(3), &v), Solution::Consistent(v.clone()));
        let z = Matrix::<Rational>::zeros(2, 2);
        let rhs = vec![Rational::zero(), Rational::one()];
        match solve(&z, &rhs) {
            Solution::Inconsistent(y) => {
                assert_eq!(dot(&y, &rhs), Rational::one());
                assert!(z.transpose().mul_vec(&y).iter().all(|x| x.is_zero()));
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn solve_over_sqrt5_round_trips() {
        let e = |a: i64, b: i64| Sqrt5::from_ints(a, b);
        let m = Matrix::from_rows(vec![
            vec![e(1, 1), e(0, 1), e(2, 0)],
            vec![e(-1, 0), e(3, -1), e(0, 0)],
            vec![e(0, 2), e(1, 0), e(1, 1)],
        ])
        .unwrap();
        let rhs = vec![e(1, 0), e(0, 1), e(-2, 3)];
        let Solution::Consistent(x) = solve(&m, &rhs) else { panic!("singular") };
        assert_eq!(m.mul_vec(&x), rhs);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::<Rational>::identity(3)).is_empty());
        let k = kernel_basis(&qm(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![Rational::from_integer(-1), Rational::one()]);
    }

    #[test]
    fn affine_hull_examples() {
        let p = |xs: &[i64]| xs.iter().map(|&x| Rational::from_integer(x)).collect::<Vec<_>>();
        let h = affine_hull(&[p(&[1, 2, 3])]);
        assert_eq!(h.dim(), 0);
        let pts = vec![p(&[0, 0, 0]), p(&[1, 1, 1]), p(&[3, 3, 3])];
        let h = affine_hull(&pts);
        assert_eq!(h.dim(), 1);
        for q in &pts {
            assert!(h.contains(q));
        }
        assert!(!h.contains(&p(&[1, 0, 0])));
    }
}
