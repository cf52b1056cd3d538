//! Elements of finite free modules `A^r` and matrices acting on them.

use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::{PolyRing, Polynomial};
use crate::scalar::Scalar;

/// A vector in `A^r`; the `i`-th component is the coefficient of the basis
/// vector `e_i` (the delta function of the `i`-th index).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeElement {
    ring: Arc<PolyRing>,
    comps: Vec<Polynomial>,
}

impl FreeElement {
    pub fn zero(ring: &Arc<PolyRing>, rank: usize) -> Self {
        FreeElement {
            ring: Arc::clone(ring),
            comps: vec![ring.zero(); rank],
        }
    }

    pub fn unit(ring: &Arc<PolyRing>, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.comps[i] = ring.one();
        v
    }

    pub fn new(ring: &Arc<PolyRing>, comps: Vec<Polynomial>) -> Result<Self, AlgebraError> {
        if comps.iter().any(|c| !Arc::ptr_eq(c.ring(), ring) && **c.ring() != **ring) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(FreeElement {
            ring: Arc::clone(ring),
            comps,
        })
    }

    pub(crate) fn from_parts(ring: &Arc<PolyRing>, comps: Vec<Polynomial>) -> Self {
        FreeElement {
            ring: Arc::clone(ring),
            comps,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Polynomial {
        &self.comps[i]
    }

    pub(crate) fn comps_mut(&mut self) -> &mut Vec<Polynomial> {
        &mut self.comps
    }

    pub fn into_comps(self) -> Vec<Polynomial> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        debug_assert_eq!(self.rank(), other.rank());
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        debug_assert_eq!(self.rank(), other.rank());
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> FreeElement {
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps: self.comps.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, f: &Polynomial) -> FreeElement {
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps: self.comps.iter().map(|a| a.mul(f)).collect(),
        }
    }

    pub fn mul_term(&self, c: &Scalar, m: &Monomial) -> FreeElement {
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps: self.comps.iter().map(|a| a.mul_term(c, m)).collect(),
        }
    }

    /// `self - c * m * other`.
    pub fn sub_scaled(&self, c: &Scalar, m: &Monomial, other: &FreeElement) -> FreeElement {
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| if b.is_zero() { a.clone() } else { a.sub_scaled(c, m, b) })
                .collect(),
        }
    }

    /// Leading `(position, monomial, coefficient)` under `order`.
    pub fn lead(&self, order: &TermOrder) -> Option<(usize, &Monomial, &Scalar)> {
        let mut best: Option<(usize, &Monomial, &Scalar)> = None;
        for (i, c) in self.comps.iter().enumerate() {
            if let Some((m, s)) = c.lead() {
                best = match best {
                    Some(b) if order.cmp((b.1, b.0), (m, i)).is_ge() => Some(b),
                    _ => Some((i, m, s)),
                };
            }
        }
        best
    }

    pub fn monic(&self, order: &TermOrder) -> FreeElement {
        match self.lead(order) {
            Some((_, _, c)) if !c.is_one() => {
                let inv = c.inv().unwrap();
                FreeElement {
                    ring: Arc::clone(&self.ring),
                    comps: self.comps.iter().map(|a| a.scale(&inv)).collect(),
                }
            }
            _ => self.clone(),
        }
    }

    /// Largest total degree of a component, shifted by the generator degrees.
    pub fn degree(&self, shifts: Option<&[i64]>) -> Option<i64> {
        self.comps
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                c.total_degree()
                    .map(|d| d as i64 + shifts.map_or(0, |s| s[i]))
            })
            .max()
    }

    /// Degree of a homogeneous vector with respect to generator degrees `shifts`.
    pub fn homogeneous_degree(&self, shifts: &[i64]) -> Option<i64> {
        let mut deg = None;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = c.homogeneous_degree()? as i64 + shifts[i];
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn concat(&self, other: &FreeElement) -> FreeElement {
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps,
        }
    }

    pub fn slice(&self, start: usize, end: usize) -> FreeElement {
        FreeElement {
            ring: Arc::clone(&self.ring),
            comps: self.comps[start..end].to_vec(),
        }
    }

    /// Embeds into a larger free module starting at `offset`.
    pub fn embed(&self, rank: usize, offset: usize) -> FreeElement {
        let mut v = FreeElement::zero(&self.ring, rank);
        for (i, c) in self.comps.iter().enumerate() {
            v.comps[offset + i] = c.clone();
        }
        v
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A matrix stored by columns; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Arc<PolyRing>,
    rows: usize,
    cols: Vec<FreeElement>,
}

impl Matrix {
    pub fn from_columns(
        ring: &Arc<PolyRing>,
        rows: usize,
        cols: Vec<FreeElement>,
    ) -> Result<Matrix, AlgebraError> {
        for c in &cols {
            if c.rank() != rows {
                return Err(AlgebraError::RankMismatch {
                    expected: rows,
                    found: c.rank(),
                });
            }
        }
        Ok(Matrix {
            ring: Arc::clone(ring),
            rows,
            cols,
        })
    }

    pub(crate) fn from_cols_unchecked(ring: &Arc<PolyRing>, rows: usize, cols: Vec<FreeElement>) -> Matrix {
        debug_assert!(cols.iter().all(|c| c.rank() == rows));
        Matrix {
            ring: Arc::clone(ring),
            rows,
            cols,
        }
    }

    /// Row-major construction: `entries[i][j]` is the `(i, j)` entry.
    pub fn from_rows(
        ring: &Arc<PolyRing>,
        ncols: usize,
        entries: Vec<Vec<Polynomial>>,
    ) -> Result<Matrix, AlgebraError> {
        let rows = entries.len();
        let mut cols = vec![FreeElement::zero(ring, rows); ncols];
        for (i, row) in entries.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(AlgebraError::RankMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            for (j, e) in row.into_iter().enumerate() {
                cols[j].comps[i] = e;
            }
        }
        Ok(Matrix {
            ring: Arc::clone(ring),
            rows,
            cols,
        })
    }

    pub fn identity(ring: &Arc<PolyRing>, n: usize) -> Matrix {
        Matrix {
            ring: Arc::clone(ring),
            rows: n,
            cols: (0..n).map(|i| FreeElement::unit(ring, n, i)).collect(),
        }
    }

    pub fn zero(ring: &Arc<PolyRing>, rows: usize, ncols: usize) -> Matrix {
        Matrix {
            ring: Arc::clone(ring),
            rows,
            cols: vec![FreeElement::zero(ring, rows); ncols],
        }
    }

    /// Multiplication by a scalar polynomial on `A^n`.
    pub fn scalar(ring: &Arc<PolyRing>, n: usize, f: &Polynomial) -> Matrix {
        Matrix {
            ring: Arc::clone(ring),
            rows: n,
            cols: (0..n).map(|i| FreeElement::unit(ring, n, i).scale(f)).collect(),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[FreeElement] {
        &self.cols
    }

    pub fn column(&self, j: usize) -> &FreeElement {
        &self.cols[j]
    }

    pub fn into_columns(self) -> Vec<FreeElement> {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.cols[j].comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// `self * v`.
    pub fn apply(&self, v: &FreeElement) -> FreeElement {
        debug_assert_eq!(v.rank(), self.ncols());
        let mut acc = FreeElement::zero(&self.ring, self.rows);
        for (j, c) in v.comps.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.cols[j].scale(c));
            }
        }
        acc
    }

    /// `self * other`.
    pub fn compose(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.ncols(), other.nrows());
        Matrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let entries: Vec<Vec<Polynomial>> = (0..self.ncols())
            .map(|j| self.cols[j].comps.clone())
            .collect();
        Matrix::from_rows(&self.ring, self.rows, entries).expect("shape")
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// `self ⊗ I_s`: basis `e_a ⊗ n_b` is indexed `a * s + b`.
    pub fn kron_identity(&self, s: usize) -> Matrix {
        let mut cols = Vec::with_capacity(self.ncols() * s);
        for c in &self.cols {
            for b in 0..s {
                let mut v = FreeElement::zero(&self.ring, self.rows * s);
                for (a, e) in c.comps.iter().enumerate() {
                    v.comps[a * s + b] = e.clone();
                }
                cols.push(v);
            }
        }
        Matrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows * s,
            cols,
        }
    }

    /// `I_r ⊗ self`: basis `m_a ⊗ e_b` indexed `a * rows + b`.
    pub fn identity_kron(&self, r: usize) -> Matrix {
        let mut cols = Vec::with_capacity(self.ncols() * r);
        for a in 0..r {
            for c in &self.cols {
                cols.push(c.embed(self.rows * r, a * self.rows));
            }
        }
        Matrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows * r,
            cols,
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Matrix {
            ring: Arc::clone(&self.ring),
            rows: self.rows,
            cols,
        }
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let rows = self.rows + other.rows;
        let mut cols: Vec<FreeElement> = self.cols.iter().map(|c| c.embed(rows, 0)).collect();
        cols.extend(other.cols.iter().map(|c| c.embed(rows, self.rows)));
        Matrix {
            ring: Arc::clone(&self.ring),
            rows,
            cols,
        }
    }

    /// Row-major entries as strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.ncols()).map(|j| self.entry(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_strings();
        write!(f, "[")?;
        for (i, r) in rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", r.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_transpose() {
        let r = PolyRing::rational(&["x", "y"]);
        let x = r.var(0);
        let y = r.var(1);
        let row = Matrix::from_rows(&r, 2, vec![vec![x.clone(), y.clone()]]).unwrap();
        let col = Matrix::from_rows(&r, 1, vec![vec![y.clone()], vec![x.neg()]]).unwrap();
        assert!(row.compose(&col).is_zero());
        assert_eq!(row.transpose().transpose(), row);
        assert_eq!(row.transpose().nrows(), 2);
        let k = row.kron_identity(2);
        assert_eq!(k.nrows(), 2);
        assert_eq!(k.ncols(), 4);
        assert_eq!(k.entry(1, 3), &y);
    }
}
