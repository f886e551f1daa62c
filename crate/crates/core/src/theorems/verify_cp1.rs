//! Rank-2 decomposition spaces: for a rank-2 tensor q concise for
//! Y = (P^1)^k, a 2-point decomposition A, an enlargement W of Y (one
//! factor grown to P^2, or a new P^1 factor), and any concise 3-point
//! decomposition B of q in W, either
//!
//! * A and B share a point and B is an elementary increasing of A, or
//! * A and B are disjoint, W is one of P^2 x P^1, P^1 x P^1,
//!   P^1 x P^1 x P^1, the union S = A ∪ B is equally dependent and has
//!   defect 1, or defect 2 with W = P^1 x P^1 and S on a (1,1)-divisor.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::as_elementary_increasing;
use crate::dependence::binomial;
use crate::error::{Error, Result};
use crate::io::PointSetDoc;
use crate::linalg::{GfpElim, Scalar};
use crate::multiproj::{MultiPoint, MultiprojectiveSpace, PointSet, ProjPoint};
use crate::theorems::{Mode, Outcome, VerificationJob, VerificationReport};

struct WTable {
    space: MultiprojectiveSpace,
    points: Vec<MultiPoint>,
    rows: Vec<Vec<u64>>,
    p: u64,
}

impl WTable {
    fn build(space: MultiprojectiveSpace) -> Result<WTable> {
        let p = space
            .field()
            .modulus()
            .ok_or_else(|| Error::UnsupportedDomain("finite field required".into()))?;
        let points = space.enumerate_points()?;
        let rows = points
            .iter()
            .map(|pt| {
                Ok(pt
                    .segre_embed(&space)?
                    .iter()
                    .map(residue)
                    .collect::<Vec<u64>>())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WTable {
            space,
            points,
            rows,
            p,
        })
    }

    fn rank_of_rows(&self, rows: &[&[u64]]) -> usize {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut e = GfpElim::new(self.p, cols);
        for r in rows {
            e.push(r);
        }
        e.rank()
    }

    fn in_span(&self, q: &[u64], rows: &[&[u64]]) -> bool {
        let base = self.rank_of_rows(rows);
        let mut all: Vec<&[u64]> = rows.to_vec();
        all.push(q);
        self.rank_of_rows(&all) == base
    }

    fn concise(&self, idxs: &[usize]) -> bool {
        let dims = self.space.factor_dims();
        for (f, &n) in dims.iter().enumerate() {
            let cols = n + 1;
            let mut e = GfpElim::new(self.p, cols);
            for &i in idxs {
                let row: Vec<u64> = self.points[i].components()[f]
                    .coords()
                    .iter()
                    .map(residue)
                    .collect();
                e.push(&row);
            }
            if e.rank() != n + 1 {
                return false;
            }
        }
        true
    }
}

fn residue(s: &Scalar) -> u64 {
    match s {
        Scalar::Gf(x) => *x,
        Scalar::Q(_) => unreachable!("finite field"),
    }
}

/// How Y sits inside W.
enum Enlargement {
    Identity,
    GrowFactor(usize),
    AppendFactor,
}

impl Enlargement {
    fn w_space(&self, y: &MultiprojectiveSpace) -> Result<MultiprojectiveSpace> {
        let field = y.field();
        let mut dims = y.factor_dims().to_vec();
        match self {
            Enlargement::Identity => {}
            Enlargement::GrowFactor(t) => dims[*t] += 1,
            Enlargement::AppendFactor => dims.push(1),
        }
        MultiprojectiveSpace::new(dims, field)
    }

    fn lift_point(&self, w: &MultiprojectiveSpace, p: &MultiPoint) -> Result<MultiPoint> {
        let field = w.field();
        let mut comps = p.components().to_vec();
        match self {
            Enlargement::Identity => {}
            Enlargement::GrowFactor(t) => {
                let mut coords = comps[*t].coords().to_vec();
                coords.push(field.zero());
                comps[*t] = ProjPoint::new(field, coords)?;
            }
            Enlargement::AppendFactor => {
                comps.push(ProjPoint::new(field, vec![field.one(), field.zero()])?);
            }
        }
        MultiPoint::new(w, comps)
    }

    /// Pushes a tensor coordinate vector along the factor-wise inclusion.
    fn lift_tensor(&self, y: &MultiprojectiveSpace, q: &[u64]) -> Vec<u64> {
        let y_dims: Vec<usize> = y.factor_dims().iter().map(|n| n + 1).collect();
        match self {
            Enlargement::Identity => q.to_vec(),
            Enlargement::GrowFactor(t) => {
                let mut w_dims = y_dims.clone();
                w_dims[*t] += 1;
                let w_len: usize = w_dims.iter().product();
                let mut out = vec![0u64; w_len];
                for (flat, &val) in q.iter().enumerate() {
                    // Decode the Y multi-index, re-encode into W.
                    let mut rem = flat;
                    let mut multi = vec![0usize; y_dims.len()];
                    for f in (0..y_dims.len()).rev() {
                        multi[f] = rem % y_dims[f];
                        rem /= y_dims[f];
                    }
                    let mut enc = 0usize;
                    for f in 0..w_dims.len() {
                        enc = enc * w_dims[f] + multi[f];
                    }
                    out[enc] = val;
                }
                out
            }
            Enlargement::AppendFactor => {
                let mut out = vec![0u64; q.len() * 2];
                for (i, &val) in q.iter().enumerate() {
                    out[i * 2] = val;
                }
                out
            }
        }
    }
}

pub(crate) fn verify(job: &VerificationJob) -> Result<VerificationReport> {
    let field = job.field;
    let p = field
        .modulus()
        .ok_or_else(|| Error::UnsupportedDomain("cp1 runs over finite fields".into()))?;
    let y_dims = if job.spaces.is_empty() {
        vec![1, 1]
    } else {
        job.spaces[0].clone()
    };
    if y_dims.iter().any(|&n| n != 1) || y_dims.len() < 2 {
        return Err(Error::UnsupportedDomain(
            "the base space must be a product of at least two projective lines".into(),
        ));
    }
    let k = y_dims.len();
    let y = MultiprojectiveSpace::new(y_dims.clone(), field)?;
    let yt = WTable::build(y.clone())?;
    let mut report = VerificationReport::skeleton(job, vec![y_dims], vec![3]);

    // All rank-2 tensors concise for Y, from lines through concise pairs.
    let segre_set: BTreeSet<Vec<u64>> = yt.rows.iter().cloned().collect();
    let mut qs: BTreeSet<Vec<u64>> = BTreeSet::new();
    let n_pts = yt.points.len();
    let mut concise_pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..n_pts {
        for b in a + 1..n_pts {
            let pa = &yt.points[a];
            let pb = &yt.points[b];
            if (0..k).any(|f| pa.component(f) == pb.component(f)) {
                continue;
            }
            concise_pairs.push((a, b));
            for t in 1..p {
                let vec: Vec<u64> = yt.rows[a]
                    .iter()
                    .zip(&yt.rows[b])
                    .map(|(x, y)| (x + t * y) % p)
                    .collect();
                let canon = normalize_mod(&vec, p);
                if !segre_set.contains(&canon) {
                    qs.insert(canon);
                }
            }
        }
    }
    let mut q_list: Vec<Vec<u64>> = qs.into_iter().collect();
    if let Mode::Sampled { .. } = job.mode {
        let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
        q_list.shuffle(&mut rng);
    }

    // Enlargements: identity, each factor grown to P^2, one appended P^1.
    let mut enlargements = vec![Enlargement::Identity];
    for t in 0..k {
        enlargements.push(Enlargement::GrowFactor(t));
    }
    enlargements.push(Enlargement::AppendFactor);
    let w_tables: Vec<WTable> = enlargements
        .iter()
        .map(|e| WTable::build(e.w_space(&y)?))
        .collect::<Result<Vec<_>>>()?;

    let per_q: u128 = w_tables
        .iter()
        .map(|wt| binomial(wt.points.len() as u128, 3))
        .sum();
    let domain = per_q * q_list.len() as u128;
    report.domain_size = domain.to_string();
    let target = match job.mode {
        Mode::Exhaustive => {
            if domain > job.budget as u128 {
                report.outcome = Outcome::BudgetRefused {
                    required: domain.to_string(),
                    budget: job.budget,
                };
                return Ok(report);
            }
            u64::MAX
        }
        Mode::Sampled { count } => count,
    };

    let allowed_disjoint: [Vec<usize>; 3] = [vec![2, 1], vec![1, 1], vec![1, 1, 1]];

    'qloop: for q in &q_list {
        // A-list: 2-point decompositions of q in Y.
        let mut a_list: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in &concise_pairs {
            let qr: &[u64] = q;
            if normalize_mod(&yt.rows[a], p) == *q || normalize_mod(&yt.rows[b], p) == *q {
                continue;
            }
            if yt.in_span(qr, &[&yt.rows[a], &yt.rows[b]]) {
                a_list.push((a, b));
            }
        }
        if a_list.is_empty() {
            continue;
        }
        for (enl, wt) in enlargements.iter().zip(&w_tables) {
            let q_w = enl.lift_tensor(&y, q);
            // B-list: irredundant concise 3-point decompositions in W.
            let m = wt.points.len();
            let mut b_list: Vec<[usize; 3]> = Vec::new();
            for i in 0..m {
                for j in i + 1..m {
                    for l in j + 1..m {
                        let rows = [&wt.rows[i][..], &wt.rows[j][..], &wt.rows[l][..]];
                        if !wt.in_span(&q_w, &rows) {
                            continue;
                        }
                        if wt.in_span(&q_w, &rows[..2])
                            || wt.in_span(&q_w, &[rows[0], rows[2]])
                            || wt.in_span(&q_w, &rows[1..])
                        {
                            continue;
                        }
                        if !wt.concise(&[i, j, l]) {
                            continue;
                        }
                        b_list.push([i, j, l]);
                    }
                }
            }
            if b_list.is_empty() {
                continue;
            }
            for &(a, b) in &a_list {
                let a_pts = [
                    enl.lift_point(&wt.space, &yt.points[a])?,
                    enl.lift_point(&wt.space, &yt.points[b])?,
                ];
                let a_set = PointSet::new(wt.space.clone(), a_pts.to_vec())?;
                for bidx in &b_list {
                    report.instances_checked += 1;
                    report.relevant += 1;
                    let b_set = PointSet::new(
                        wt.space.clone(),
                        bidx.iter().map(|&i| wt.points[i].clone()).collect(),
                    )?;
                    let shared: Vec<&MultiPoint> =
                        a_set.iter().filter(|pt| b_set.contains(pt)).collect();
                    let ok = if !shared.is_empty() {
                        let incr = as_elementary_increasing(&a_set, &b_set)?.is_some();
                        if incr {
                            report.tally("case1-elementary-increasing", 1);
                        }
                        incr
                    } else {
                        check_disjoint_case(&wt.space, &a_set, &b_set, &allowed_disjoint, &mut report)?
                    };
                    if !ok {
                        let union = a_set.union(&b_set)?;
                        report.counterexamples.push(PointSetDoc::from_set(&union));
                    }
                    if report.instances_checked >= target {
                        break 'qloop;
                    }
                }
            }
        }
    }
    report.finalize();
    Ok(report)
}

fn check_disjoint_case(
    w: &MultiprojectiveSpace,
    a_set: &PointSet,
    b_set: &PointSet,
    allowed: &[Vec<usize>; 3],
    report: &mut VerificationReport,
) -> Result<bool> {
    if !allowed.contains(&w.shape()) {
        return Ok(false);
    }
    let s = a_set.union(b_set)?;
    if !crate::dependence::is_equally_dependent(&s)? {
        return Ok(false);
    }
    let e = crate::dependence::defect(&s)?;
    match e {
        1 => {
            report.tally("case2-defect-1", 1);
            Ok(true)
        }
        2 => {
            // Defect 2 pins W = P^1 x P^1 and the five points lie on a
            // (1,1)-divisor: a nonzero form in the kernel of the embedded
            // evaluation matrix.
            if w.shape() != vec![1, 1] {
                return Ok(false);
            }
            let kernel = s.embed_matrix()?.kernel_basis();
            if kernel.is_empty() {
                return Ok(false);
            }
            report.tally("case2-defect-2-quadric", 1);
            Ok(true)
        }
        _ => Ok(false),
    }
}

fn normalize_mod(v: &[u64], p: u64) -> Vec<u64> {
    let Some(lead) = v.iter().position(|&x| x % p != 0) else {
        return v.to_vec();
    };
    let inv = mod_inverse(v[lead] % p, p);
    v.iter().map(|&x| (x % p) * inv % p).collect()
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat inverse; p is a small prime.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;
    use crate::theorems::StatementId;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn exhaustive_k2_gf2() {
        let job = VerificationJob::new(StatementId::CP1, gf(2));
        let rep = verify(&job).unwrap();
        assert_eq!(rep.outcome, Outcome::Verified, "{:?}", rep.branch_tallies);
        assert!(rep.branch_tallies["case1-elementary-increasing"] > 0);
        assert!(rep.branch_tallies.contains_key("case2-defect-1"));
    }

    #[test]
    fn sampled_k3_gf2() {
        let mut job = VerificationJob::new(StatementId::CP1, gf(2));
        job.spaces = vec![vec![1, 1, 1]];
        job.mode = Mode::Sampled { count: 2_000 };
        job.seed = 3;
        let rep = verify(&job).unwrap();
        assert_eq!(rep.outcome, Outcome::Verified);
        assert!(rep.instances_checked >= 2_000);
    }
}
