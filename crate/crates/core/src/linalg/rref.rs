//! Row-reduction engines.
//!
//! Three paths share one contract: a unique reduced row echelon form with
//! pivots chosen left-to-right, first nonzero row wins. Uniqueness of the
//! RREF is what gives bitwise-reproducible kernels and intersections.
//!
//! * GF(p): word-size residues.
//! * GF(2): bit-packed words, rank only (the generic path covers the rest).
//! * Q: fraction-free Bareiss forward pass on integers, so intermediate
//!   entries stay within determinant bounds, then one exact normalization
//!   pass to reach the rational RREF.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{inv_mod, mul_mod};

pub struct Echelon<T> {
    pub rank: usize,
    /// Column of the pivot of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// RREF rows; exactly `rank` nonzero rows, in pivot order.
    pub rows: Vec<Vec<T>>,
}

/// RREF over GF(p). Rows are residue vectors.
pub fn rref_gfp(p: u64, mut rows: Vec<Vec<u64>>, cols: usize) -> Echelon<u64> {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c] % p, p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x % p, inv, p);
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row exists");
        for other in head.iter_mut().chain(below.iter_mut()) {
            let f = other[c] % p;
            if f != 0 {
                for (o, s) in other.iter_mut().zip(pivot_row.iter()) {
                    *o = (*o + mul_mod(p - f, *s, p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Echelon {
        rank: r,
        pivots,
        rows,
    }
}

/// Rank of a bit-packed GF(2) matrix; each row is `words` u64 words.
pub fn rank_gf2_packed(rows: &[u64], words: usize) -> usize {
    if words == 0 {
        return 0;
    }
    let n = rows.len() / words;
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot bit position, row)
    let mut rank = 0;
    for i in 0..n {
        let mut v = rows[i * words..(i + 1) * words].to_vec();
        for (piv, row) in &basis {
            if (v[piv / 64] >> (piv % 64)) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(row.iter()) {
                    *a ^= b;
                }
            }
        }
        if let Some(piv) = first_set_bit(&v) {
            basis.push((piv, v));
            rank += 1;
        }
    }
    rank
}

fn first_set_bit(v: &[u64]) -> Option<usize> {
    for (w, word) in v.iter().enumerate() {
        if *word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

/// RREF over Q. The forward pass is one-step Bareiss on a common-denominator
/// integer matrix (all divisions exact); back-substitution then normalizes to
/// the rational RREF.
pub fn rref_q(rows: Vec<Vec<BigRational>>, cols: usize) -> Echelon<BigRational> {
    // Clear denominators row by row; row scaling changes neither rank,
    // pivot columns, nor the RREF.
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| {
                num_integer::lcm(acc, x.denom().abs())
            });
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();

    // Forward pass: one-step Bareiss, rows strictly below the pivot only so
    // that Sylvester's identity keeps every division exact.
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let pivot_val = m[r][c].clone();
        let (pivot_row, below) = m[r..].split_first_mut().expect("pivot row exists");
        for other in below.iter_mut() {
            let f = other[c].clone();
            for (x, s) in other.iter_mut().zip(pivot_row.iter()) {
                let q = (&*x * &pivot_val - &f * s) / &prev;
                *x = q;
            }
        }
        prev = pivot_val;
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);

    // Back-substitution on the (small) echelon form, in rationals.
    let mut rows: Vec<Vec<BigRational>> = m
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let pv = row[pivots[i]].clone();
            row.into_iter()
                .map(|x| BigRational::new(x, pv.clone()))
                .collect()
        })
        .collect();
    for i in (0..r).rev() {
        for j in 0..i {
            let f = rows[j][pivots[i]].clone();
            if !f.is_zero() {
                let (upper, lower) = rows.split_at_mut(i);
                for (x, s) in upper[j].iter_mut().zip(lower[0].iter()) {
                    *x -= &f * s;
                }
            }
        }
    }
    Echelon {
        rank: r,
        pivots,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn gfp_identity() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(rref_gfp(5, rows, 3).rank, 3);
    }

    #[test]
    fn gfp_equal_rows() {
        let rows = vec![vec![1, 1], vec![1, 1]];
        let e = rref_gfp(2, rows, 2);
        assert_eq!(e.rank, 1);
        assert_eq!(e.rows, vec![vec![1, 1]]);
    }

    #[test]
    fn gf2_packed_matches_generic() {
        // 3x5 matrix
        let dense = [
            [1u64, 0, 1, 1, 0],
            [0, 1, 1, 0, 1],
            [1, 1, 0, 1, 1],
        ];
        let packed: Vec<u64> = dense
            .iter()
            .map(|r| r.iter().enumerate().fold(0u64, |w, (i, &b)| w | (b << i)))
            .collect();
        let generic = rref_gfp(2, dense.iter().map(|r| r.to_vec()).collect(), 5).rank;
        assert_eq!(rank_gf2_packed(&packed, 1), generic);
    }

    #[test]
    fn bareiss_exact_and_unique() {
        // Rank-2 rational matrix with fractions.
        let rows = vec![
            vec![
                BigRational::new(BigInt::from(1), BigInt::from(2)),
                q(1),
                q(3),
            ],
            vec![q(1), q(2), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        let e1 = rref_q(rows.clone(), 3);
        let e2 = rref_q(rows, 3);
        assert_eq!(e1.rank, 2);
        assert_eq!(e1.rows, e2.rows);
        assert_eq!(e1.pivots, vec![0, 1]);
        // RREF rows: (1, 0, 4), (0, 1, 1)
        assert_eq!(e1.rows[0], vec![q(1), q(0), q(4)]);
        assert_eq!(e1.rows[1], vec![q(0), q(1), q(1)]);
    }
}
