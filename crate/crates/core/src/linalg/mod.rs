//! Exact linear algebra over GF(p) and Q: rank, kernels, span membership
//! and subspace intersection. Everything downstream (defects, widths,
//! decompositions, the verifiers) reduces to these four operations.

mod elim;
mod rref;
mod scalar;

pub use elim::{Gf2Elim, GfpElim};
pub use scalar::{FieldSpec, Scalar};

use num_rational::BigRational;

use crate::error::{Error, Result};
use rref::Echelon;

/// A dense exact matrix together with its coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            field.validate(e)?;
        }
        Ok(ScalarMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(field, nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        ScalarMatrix {
            field,
            rows,
            cols,
            entries: vec![z; rows * cols],
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        ScalarMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Exact rank. GF(2) goes through the bit-packed path.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.field {
            FieldSpec::Gf(2) => {
                let words = self.cols.div_ceil(64);
                let mut packed = vec![0u64; self.rows * words];
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        if let Scalar::Gf(1) = self.get(r, c) {
                            packed[r * words + c / 64] |= 1 << (c % 64);
                        }
                    }
                }
                rref::rank_gf2_packed(&packed, words)
            }
            FieldSpec::Gf(_) => self.rref_gfp().rank,
            FieldSpec::Q => self.rref_q().rank,
        }
    }

    /// Rank by plain (non-packed) elimination; the independent route used to
    /// cross-check the GF(2) fast path.
    pub fn rank_plain(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match self.field {
            FieldSpec::Gf(_) => self.rref_gfp().rank,
            FieldSpec::Q => self.rref_q().rank,
        }
    }

    fn rows_gfp(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|s| match s {
                        Scalar::Gf(x) => *x,
                        Scalar::Q(_) => unreachable!("validated at construction"),
                    })
                    .collect()
            })
            .collect()
    }

    fn rows_q(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|s| match s {
                        Scalar::Q(x) => x.clone(),
                        Scalar::Gf(_) => unreachable!("validated at construction"),
                    })
                    .collect()
            })
            .collect()
    }

    fn rref_gfp(&self) -> Echelon<u64> {
        let p = self.field.modulus().expect("finite field");
        rref::rref_gfp(p, self.rows_gfp(), self.cols)
    }

    fn rref_q(&self) -> Echelon<BigRational> {
        rref::rref_q(self.rows_q(), self.cols)
    }

    /// Unique RREF as scalar rows (nonzero rows only) with pivot columns.
    pub fn rref(&self) -> (usize, Vec<usize>, Vec<Vec<Scalar>>) {
        match self.field {
            FieldSpec::Gf(_) => {
                let e = self.rref_gfp();
                let rows = e
                    .rows
                    .into_iter()
                    .map(|r| r.into_iter().map(Scalar::Gf).collect())
                    .collect();
                (e.rank, e.pivots, rows)
            }
            FieldSpec::Q => {
                let e = self.rref_q();
                let rows = e
                    .rows
                    .into_iter()
                    .map(|r| r.into_iter().map(Scalar::Q).collect())
                    .collect();
                (e.rank, e.pivots, rows)
            }
        }
    }

    /// Basis of the right kernel {v : M v = 0}, derived from the unique RREF,
    /// one vector per free column in ascending column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (rank, pivots, rref_rows) = self.rref();
        let zero = self.field.zero();
        let one = self.field.one();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![zero.clone(); self.cols];
            v[free] = one.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = self.field.neg(&rref_rows[i][free]);
            }
            basis.push(v);
        }
        basis
    }

    /// M v for a column vector v.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    acc = self.field.add(&acc, &self.field.mul(a, b));
                }
                acc
            })
            .collect())
    }
}

/// Span membership: is `v` in the row span of `basis`? On success returns
/// the exact coefficients c with sum(c_i * basis_i) = v.
pub fn in_span(field: FieldSpec, v: &[Scalar], basis: &[Vec<Scalar>]) -> Result<Option<Vec<Scalar>>> {
    let n = v.len();
    if basis.iter().any(|b| b.len() != n) {
        return Err(Error::DimensionMismatch(
            "span basis vectors have mismatched lengths".into(),
        ));
    }
    if basis.is_empty() {
        return Ok(if v.iter().all(Scalar::is_zero) {
            Some(Vec::new())
        } else {
            None
        });
    }
    // Solve x * B = v  <=>  B^T x^T = v^T via RREF of [B^T | v^T].
    let m = basis.len();
    let mut rows = Vec::with_capacity(n);
    for c in 0..n {
        let mut row: Vec<Scalar> = basis.iter().map(|b| b[c].clone()).collect();
        row.push(v[c].clone());
        rows.push(row);
    }
    let aug = ScalarMatrix::from_rows(field, rows)?;
    let (_, pivots, rref_rows) = aug.rref();
    if pivots.contains(&m) {
        return Ok(None); // pivot in the augmented column: inconsistent
    }
    let mut coeffs = vec![field.zero(); m];
    for (i, &pc) in pivots.iter().enumerate() {
        coeffs[pc] = rref_rows[i][m].clone();
    }
    Ok(Some(coeffs))
}

/// Basis of span(U) ∩ span(V) via the Zassenhaus block trick: row-reduce
/// [U | U; V | 0]; rows whose left half vanished carry intersection vectors
/// in their right half.
pub fn subspace_intersection(
    field: FieldSpec,
    u: &[Vec<Scalar>],
    v: &[Vec<Scalar>],
) -> Result<Vec<Vec<Scalar>>> {
    let n = match (u.first(), v.first()) {
        (Some(a), Some(b)) if a.len() != b.len() => {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions differ: {} vs {}",
                a.len(),
                b.len()
            )))
        }
        (Some(a), _) => a.len(),
        (None, Some(b)) => b.len(),
        (None, None) => return Ok(Vec::new()),
    };
    if u.iter().chain(v).any(|w| w.len() != n) {
        return Err(Error::DimensionMismatch("ragged basis vectors".into()));
    }
    let zero = field.zero();
    let mut rows = Vec::with_capacity(u.len() + v.len());
    for a in u {
        let mut row = a.clone();
        row.extend(a.iter().cloned());
        rows.push(row);
    }
    for b in v {
        let mut row = b.clone();
        row.extend(std::iter::repeat(zero.clone()).take(n));
        rows.push(row);
    }
    let block = ScalarMatrix::from_rows(field, rows)?;
    let (_, pivots, rref_rows) = block.rref();
    let mut out = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        if pc >= n {
            out.push(rref_rows[i][n..].to_vec());
        }
    }
    Ok(out)
}

/// Dimension of the linear span of a list of vectors.
pub fn span_dim(field: FieldSpec, vecs: &[Vec<Scalar>]) -> Result<usize> {
    if vecs.is_empty() {
        return Ok(0);
    }
    Ok(ScalarMatrix::from_rows(field, vecs.to_vec())?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(field: FieldSpec, vals: &[&[i64]]) -> ScalarMatrix {
        ScalarMatrix::from_rows(
            field,
            vals.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_identity_gf5() {
        let f = FieldSpec::prime(5).unwrap();
        let m = gf(f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn rank_equal_rows_gf2() {
        let f = FieldSpec::prime(2).unwrap();
        let m = gf(f, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_empty() {
        let f = FieldSpec::Q;
        let m = ScalarMatrix::from_rows(f, vec![]).unwrap();
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn kernel_identity_empty() {
        let f = FieldSpec::prime(3).unwrap();
        let m = gf(f, &[&[1, 0], &[0, 1]]);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_zero_matrix() {
        let f = FieldSpec::prime(3).unwrap();
        let m = ScalarMatrix::zero(f, 2, 3);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3);
        assert_eq!(span_dim(f, &k).unwrap(), 3);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let f = FieldSpec::Q;
        let m = gf(f, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 4 - m.rank());
        for v in &k {
            assert!(m.apply(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn in_span_basic() {
        let f = FieldSpec::prime(7).unwrap();
        let b = vec![
            vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)],
            vec![f.from_i64(0), f.from_i64(1), f.from_i64(0)],
        ];
        let coeffs = in_span(f, &[f.from_i64(1), f.from_i64(0), f.from_i64(0)], &b)
            .unwrap()
            .unwrap();
        assert_eq!(coeffs, vec![f.from_i64(1), f.from_i64(0)]);
        assert!(in_span(f, &[f.from_i64(0), f.from_i64(0), f.from_i64(1)], &b)
            .unwrap()
            .is_none());
    }

    #[test]
    fn intersection_line_and_axes() {
        let f = FieldSpec::Q;
        let e = |i: usize| {
            let mut v = vec![f.zero(); 3];
            v[i] = f.one();
            v
        };
        // U = V = one nonzero vector -> that line.
        let u = vec![vec![f.from_i64(1), f.from_i64(2), f.from_i64(3)]];
        let got = subspace_intersection(f, &u, &u).unwrap();
        assert_eq!(got.len(), 1);
        assert!(in_span(f, &got[0], &u).unwrap().is_some());
        // Two distinct coordinate axes: trivial intersection.
        assert!(subspace_intersection(f, &[e(0)], &[e(1)]).unwrap().is_empty());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let f = FieldSpec::Q;
        let u = vec![vec![f.one(), f.zero()]];
        let v = vec![vec![f.one(), f.zero(), f.zero()]];
        assert!(matches!(
            subspace_intersection(f, &u, &v),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(in_span(f, &[f.one()], &u).is_err());
    }
}
