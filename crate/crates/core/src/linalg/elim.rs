//! Incremental eliminators for the enumeration harness: push a vector,
//! learn whether the rank grew, roll back to a checkpoint. The subset DFS
//! leans on the rollback to share elimination work across a whole subtree.

use super::scalar::{inv_mod, mul_mod};

/// GF(2) eliminator over a single 64-bit word per row (ambient dim <= 64).
#[derive(Debug, Clone, Default)]
pub struct Gf2Elim {
    // (pivot bit, reduced row) pairs, in insertion order.
    basis: Vec<(u32, u64)>,
}

impl Gf2Elim {
    pub fn new() -> Self {
        Gf2Elim { basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis without inserting.
    #[inline]
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &(piv, row) in &self.basis {
            if (v >> piv) & 1 == 1 {
                v ^= row;
            }
        }
        v
    }

    /// Pushes a vector; returns true when the rank increased.
    #[inline]
    pub fn push(&mut self, v: u64) -> bool {
        let w = self.reduce(v);
        if w == 0 {
            false
        } else {
            self.basis.push((w.trailing_zeros(), w));
            true
        }
    }

    /// Rolls back to a previous rank (checkpoint from `rank()`).
    #[inline]
    pub fn truncate(&mut self, rank: usize) {
        self.basis.truncate(rank);
    }
}

/// GF(p) eliminator on dense u64 rows. Basis rows are normalized so each
/// pivot entry is 1, making every reduction a fused multiply-subtract pass.
#[derive(Debug, Clone)]
pub struct GfpElim {
    p: u64,
    cols: usize,
    // (pivot column, normalized row) in insertion order.
    basis: Vec<(usize, Vec<u64>)>,
}

impl GfpElim {
    pub fn new(p: u64, cols: usize) -> Self {
        GfpElim {
            p,
            cols,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn reduce_into(&self, v: &[u64], out: &mut Vec<u64>) {
        out.clear();
        out.extend_from_slice(v);
        for (piv, row) in &self.basis {
            let f = out[*piv] % self.p;
            if f != 0 {
                let neg = self.p - f;
                for (x, s) in out.iter_mut().zip(row.iter()) {
                    *x = (*x + mul_mod(neg, *s, self.p)) % self.p;
                }
            }
        }
    }

    #[inline]
    pub fn push(&mut self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut w = Vec::new();
        self.reduce_into(v, &mut w);
        let Some(piv) = w.iter().position(|&x| x % self.p != 0) else {
            return false;
        };
        let inv = inv_mod(w[piv] % self.p, self.p);
        for x in w.iter_mut() {
            *x = mul_mod(*x % self.p, inv, self.p);
        }
        self.basis.push((piv, w));
        true
    }

    #[inline]
    pub fn truncate(&mut self, rank: usize) {
        self.basis.truncate(rank);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_push_and_rollback() {
        let mut e = Gf2Elim::new();
        assert!(e.push(0b001));
        assert!(e.push(0b011));
        assert!(!e.push(0b010)); // 001 ^ 011
        let cp = e.rank();
        assert!(e.push(0b100));
        e.truncate(cp);
        assert_eq!(e.rank(), 2);
        assert!(e.push(0b111));
    }

    #[test]
    fn gfp_matches_matrix_rank() {
        use crate::linalg::{FieldSpec, ScalarMatrix};
        let p = 5;
        let rows: Vec<Vec<u64>> = vec![
            vec![1, 2, 3, 4],
            vec![2, 4, 1, 3],
            vec![3, 1, 4, 2],
            vec![4, 3, 2, 1],
            vec![0, 0, 1, 1],
        ];
        let mut e = GfpElim::new(p, 4);
        let mut inc = 0;
        for r in &rows {
            if e.push(r) {
                inc += 1;
            }
        }
        let f = FieldSpec::prime(p).unwrap();
        let m = ScalarMatrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x as i64)).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(inc, m.rank());
        assert_eq!(e.rank(), m.rank());
    }
}
