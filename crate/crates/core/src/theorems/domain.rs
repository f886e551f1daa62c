//! Enumeration and sampling machinery for the verifiers: precomputed point
//! tables with embedded coordinates, subset DFS with incremental rank and
//! prefix pruning, optional symmetry reduction by factor permutations, and
//! budget accounting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dependence::binomial;
use crate::error::{Error, Result};
use crate::linalg::{Gf2Elim, GfpElim, Scalar};
use crate::multiproj::{enumerate_proj_points, MultiPoint, MultiprojectiveSpace, PointSet, ProjPoint};

/// A fully enumerated finite domain Y(F) with embedded coordinates and
/// per-factor component ids.
pub(crate) struct SpaceTable {
    pub space: MultiprojectiveSpace,
    pub points: Vec<MultiPoint>,
    /// comp_ids[p][f] = index of point p's f-th component in the factor's
    /// canonical enumeration.
    pub comp_ids: Vec<Vec<u32>>,
    pub emb: Emb,
    /// Point-index permutations induced by factor permutations among
    /// equal-dimension factors (identity first).
    pub symmetry: Vec<Vec<u32>>,
}

pub(crate) enum Emb {
    /// One 64-bit word per point (GF(2), ambient dimension < 64).
    Gf2(Vec<u64>),
    /// Dense residue rows.
    Fp {
        p: u64,
        cols: usize,
        rows: Vec<Vec<u64>>,
    },
}

pub(crate) enum AnyElim {
    Gf2(Gf2Elim),
    Fp(GfpElim, Vec<u64>),
}

impl AnyElim {
    pub fn new(table: &SpaceTable) -> Self {
        match &table.emb {
            Emb::Gf2(_) => AnyElim::Gf2(Gf2Elim::new()),
            Emb::Fp { p, cols, .. } => AnyElim::Fp(GfpElim::new(*p, *cols), Vec::new()),
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        match self {
            AnyElim::Gf2(e) => e.rank(),
            AnyElim::Fp(e, _) => e.rank(),
        }
    }

    #[inline]
    pub fn push(&mut self, emb: &Emb, idx: usize) -> bool {
        match (self, emb) {
            (AnyElim::Gf2(e), Emb::Gf2(rows)) => e.push(rows[idx]),
            (AnyElim::Fp(e, _), Emb::Fp { rows, .. }) => e.push(&rows[idx]),
            _ => unreachable!("eliminator matches its table"),
        }
    }

    /// Would pushing `idx` increase the rank? No state change.
    #[inline]
    pub fn peek_increases(&mut self, emb: &Emb, idx: usize) -> bool {
        match (self, emb) {
            (AnyElim::Gf2(e), Emb::Gf2(rows)) => e.reduce(rows[idx]) != 0,
            (AnyElim::Fp(e, scratch), Emb::Fp { rows, p, .. }) => {
                e.reduce_into(&rows[idx], scratch);
                scratch.iter().any(|&x| x % p != 0)
            }
            _ => unreachable!("eliminator matches its table"),
        }
    }

    #[inline]
    pub fn truncate(&mut self, to: usize) {
        match self {
            AnyElim::Gf2(e) => e.truncate(to),
            AnyElim::Fp(e, _) => e.truncate(to),
        }
    }
}

impl SpaceTable {
    pub fn build(space: &MultiprojectiveSpace) -> Result<SpaceTable> {
        let field = space.field();
        if !field.is_finite() {
            return Err(Error::UnsupportedDomain(
                "enumeration needs a finite field".into(),
            ));
        }
        let p = field.modulus().expect("finite");
        let factor_points: Vec<Vec<ProjPoint>> = space
            .factor_dims()
            .iter()
            .map(|&n| enumerate_proj_points(n, field))
            .collect();
        let points = space.enumerate_points()?;
        let cols = space.segre_dim() + 1;
        let comp_ids: Vec<Vec<u32>> = points
            .iter()
            .map(|pt| {
                pt.components()
                    .iter()
                    .enumerate()
                    .map(|(f, c)| {
                        factor_points[f]
                            .binary_search(c)
                            .expect("component is enumerated") as u32
                    })
                    .collect()
            })
            .collect();
        let emb = if p == 2 && cols <= 64 {
            let rows = points
                .iter()
                .map(|pt| {
                    let v = pt.segre_embed(space)?;
                    let mut w = 0u64;
                    for (i, s) in v.iter().enumerate() {
                        if !s.is_zero() {
                            w |= 1 << i;
                        }
                    }
                    Ok(w)
                })
                .collect::<Result<Vec<u64>>>()?;
            Emb::Gf2(rows)
        } else {
            let rows = points
                .iter()
                .map(|pt| {
                    Ok(pt
                        .segre_embed(space)?
                        .iter()
                        .map(|s| match s {
                            Scalar::Gf(x) => *x,
                            Scalar::Q(_) => unreachable!("finite field"),
                        })
                        .collect())
                })
                .collect::<Result<Vec<Vec<u64>>>>()?;
            Emb::Fp { p, cols, rows }
        };
        let symmetry = factor_symmetries(space, &comp_ids, &factor_points);
        Ok(SpaceTable {
            space: space.clone(),
            points,
            comp_ids,
            emb,
            symmetry,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn point_set(&self, idxs: &[u32]) -> Result<PointSet> {
        PointSet::new(
            self.space.clone(),
            idxs.iter().map(|&i| self.points[i as usize].clone()).collect(),
        )
    }

    /// Rank of the embedded rows of a subset.
    pub fn rank_of(&self, idxs: &[u32]) -> usize {
        let mut e = AnyElim::new(self);
        for &i in idxs {
            e.push(&self.emb, i as usize);
        }
        e.rank()
    }

    /// Number of distinct components of the subset in one factor.
    pub fn distinct_in_factor(&self, idxs: &[u32], f: usize) -> usize {
        let mut ids: Vec<u32> = idxs.iter().map(|&i| self.comp_ids[i as usize][f]).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Projective dimension of the span of the subset's components in one
    /// factor.
    pub fn factor_span_dim(&self, idxs: &[u32], f: usize) -> usize {
        let field = self.space.field();
        let p = field.modulus().expect("finite");
        let cols = self.space.factor_dims()[f] + 1;
        let mut elim = GfpElim::new(p, cols);
        for &i in idxs {
            let c = &self.points[i as usize].components()[f];
            let row: Vec<u64> = c
                .coords()
                .iter()
                .map(|s| match s {
                    Scalar::Gf(x) => *x,
                    Scalar::Q(_) => unreachable!("finite field"),
                })
                .collect();
            elim.push(&row);
        }
        elim.rank().saturating_sub(1)
    }

    /// Concise for the ambient: every factor's components span it.
    pub fn concise(&self, idxs: &[u32]) -> bool {
        self.space.factor_dims().iter().enumerate().all(|(f, &n)| {
            if n == 0 {
                true
            } else if n == 1 {
                self.distinct_in_factor(idxs, f) >= 2
            } else {
                self.factor_span_dim(idxs, f) == n
            }
        })
    }

    /// Width of the subset: factors with more than one component.
    pub fn width_of(&self, idxs: &[u32]) -> usize {
        (0..self.space.factors())
            .filter(|&f| self.distinct_in_factor(idxs, f) > 1)
            .count()
    }

    /// Hull shape: positive per-factor span dimensions, sorted descending.
    pub fn hull_shape(&self, idxs: &[u32]) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.space.factors())
            .map(|f| self.factor_span_dim(idxs, f))
            .filter(|&d| d > 0)
            .collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Equally dependent given the full-set rank: every maximal proper
    /// subset spans the same space.
    pub fn equally_dependent(&self, idxs: &[u32], full_rank: usize) -> bool {
        if idxs.len() <= full_rank {
            return false; // independent
        }
        for skip in 0..idxs.len() {
            let mut e = AnyElim::new(self);
            for (j, &i) in idxs.iter().enumerate() {
                if j != skip {
                    e.push(&self.emb, i as usize);
                }
            }
            if e.rank() != full_rank {
                return false;
            }
        }
        true
    }

    /// Is the subset the canonical representative of its orbit under the
    /// factor-permutation group?
    pub fn is_canonical(&self, idxs: &[u32]) -> bool {
        if self.symmetry.len() <= 1 {
            return true;
        }
        let mut orig: Vec<u32> = idxs.to_vec();
        orig.sort_unstable();
        let mut buf: Vec<u32> = Vec::with_capacity(idxs.len());
        for perm in &self.symmetry[1..] {
            buf.clear();
            buf.extend(idxs.iter().map(|&i| perm[i as usize]));
            buf.sort_unstable();
            if buf[..] < orig[..] {
                return false;
            }
        }
        true
    }
}

/// Point-index permutations induced by permuting equal-dimension factors.
fn factor_symmetries(
    space: &MultiprojectiveSpace,
    comp_ids: &[Vec<u32>],
    factor_points: &[Vec<ProjPoint>],
) -> Vec<Vec<u32>> {
    let k = space.factors();
    let dims = space.factor_dims();
    // Group the factor indices by dimension and enumerate products of
    // permutations within each class.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; k];
    for i in 0..k {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = (i..k).filter(|&j| dims[j] == dims[i]).collect();
        for &j in &class {
            seen[j] = true;
        }
        classes.push(class);
    }
    // Build factor permutations as maps old_factor -> new_factor.
    let mut maps: Vec<Vec<usize>> = vec![(0..k).collect()];
    for class in &classes {
        let perms = permutations(class.len());
        let mut next = Vec::new();
        for m in &maps {
            for p in &perms {
                let mut m2 = m.clone();
                for (slot, &src) in p.iter().enumerate() {
                    m2[class[slot]] = class[src];
                }
                next.push(m2);
            }
        }
        maps = next;
    }

    // Strides of the mixed-radix point code.
    let sizes: Vec<usize> = factor_points.iter().map(Vec::len).collect();
    let mut strides = vec![1usize; k];
    for f in (0..k.saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * sizes[f + 1];
    }
    let code = |ids: &[u32]| -> usize {
        ids.iter()
            .enumerate()
            .map(|(f, &c)| c as usize * strides[f])
            .sum()
    };
    let mut out = Vec::with_capacity(maps.len());
    for m in &maps {
        // new component at factor f comes from old factor m[f]
        let perm: Vec<u32> = comp_ids
            .iter()
            .map(|ids| {
                let new_ids: Vec<u32> = (0..k).map(|f| ids[m[f]]).collect();
                code(&new_ids) as u32
            })
            .collect();
        out.push(perm);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Subtree pruning policy for the subset DFS.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScanPolicy {
    /// Skip subtrees (and leaves) once the prefix rank exceeds this.
    pub rank_cap: Option<usize>,
    /// Skip subtrees whose proper prefix is already dependent.
    pub prune_dependent_prefix: bool,
}

/// Depth-first enumeration of all `size`-subsets with an incremental
/// eliminator; the leaf callback receives (indices, rank). Returns the
/// number of leaves visited (pruned leaves are not visited).
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn scan<T>(
    table: &SpaceTable,
    size: usize,
    policy: ScanPolicy,
    acc: &mut T,
    leaf: &mut dyn FnMut(&mut T, &[u32], usize),
) -> u64 {
    let n = table.len();
    if size == 0 || size > n {
        return 0;
    }
    let mut idxs: Vec<u32> = Vec::with_capacity(size);
    let mut elim = AnyElim::new(table);
    let mut visited = 0u64;
    scan_rec(table, size, policy, &mut elim, &mut idxs, 0, acc, leaf, &mut visited);
    visited
}

#[allow(clippy::too_many_arguments)]
fn scan_rec<T>(
    table: &SpaceTable,
    size: usize,
    policy: ScanPolicy,
    elim: &mut AnyElim,
    idxs: &mut Vec<u32>,
    start: usize,
    acc: &mut T,
    leaf: &mut dyn FnMut(&mut T, &[u32], usize),
    visited: &mut u64,
) {
    let n = table.len();
    let depth = idxs.len();
    if depth + 1 == size {
        // Last level: no basis mutation, just a membership probe.
        for i in start..n {
            let inc = elim.peek_increases(&table.emb, i);
            let rank = elim.rank() + usize::from(inc);
            if let Some(cap) = policy.rank_cap {
                if rank > cap {
                    continue;
                }
            }
            *visited += 1;
            idxs.push(i as u32);
            leaf(acc, idxs, rank);
            idxs.pop();
        }
        return;
    }
    let last_start = n - (size - depth) + 1;
    for i in start..last_start {
        let cp = elim.rank();
        let inc = elim.push(&table.emb, i);
        let mut prune = false;
        if policy.prune_dependent_prefix && !inc {
            prune = true;
        }
        if let Some(cap) = policy.rank_cap {
            if elim.rank() > cap {
                prune = true;
            }
        }
        if !prune {
            idxs.push(i as u32);
            scan_rec(table, size, policy, elim, idxs, i + 1, acc, leaf, visited);
            idxs.pop();
        }
        elim.truncate(cp);
    }
}

/// Parallel scan split on the first index; per-chunk accumulators are
/// returned in first-index order so merges are deterministic.
pub(crate) fn scan_par<T, I, F>(
    table: &SpaceTable,
    size: usize,
    policy: ScanPolicy,
    init: I,
    leaf: F,
) -> (u64, Vec<T>)
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u32], usize) + Sync,
{
    let n = table.len();
    if size == 0 || size > n {
        return (0, Vec::new());
    }
    let firsts: Vec<usize> = (0..=n - size).collect();
    let chunks: Vec<(u64, T)> = firsts
        .par_iter()
        .map(|&first| {
            let mut acc = init();
            let mut idxs: Vec<u32> = Vec::with_capacity(size);
            let mut elim = AnyElim::new(table);
            let mut visited = 0u64;
            let inc = elim.push(&table.emb, first);
            let mut prune = false;
            if policy.prune_dependent_prefix && !inc && size > 1 {
                prune = true;
            }
            if let Some(cap) = policy.rank_cap {
                if elim.rank() > cap {
                    prune = true;
                }
            }
            if size == 1 {
                if !prune {
                    visited += 1;
                    leaf(&mut acc, &[first as u32], elim.rank());
                }
            } else if !prune {
                idxs.push(first as u32);
                let mut leaf_mut = |acc: &mut T, idxs: &[u32], rank: usize| leaf(acc, idxs, rank);
                scan_rec(
                    table,
                    size,
                    policy,
                    &mut elim,
                    &mut idxs,
                    first + 1,
                    &mut acc,
                    &mut leaf_mut,
                    &mut visited,
                );
            }
            (visited, acc)
        })
        .collect();
    let mut visited = 0;
    let mut accs = Vec::with_capacity(chunks.len());
    for (v, a) in chunks {
        visited += v;
        accs.push(a);
    }
    (visited, accs)
}

/// Seeded sampling of `count` distinct `size`-subsets; the callback gets
/// (indices ascending, rank).
pub(crate) fn sample<T>(
    table: &SpaceTable,
    size: usize,
    count: u64,
    seed: u64,
    acc: &mut T,
    leaf: &mut dyn FnMut(&mut T, &[u32], usize),
) -> u64 {
    let n = table.len();
    if size > n {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let mut idxs: Vec<u32> = rand::seq::index::sample(&mut rng, n, size)
            .iter()
            .map(|i| i as u32)
            .collect();
        idxs.sort_unstable();
        let rank = table.rank_of(&idxs);
        leaf(acc, &idxs, rank);
    }
    count
}

/// Exhaustive instance count for one shape, used for budget refusal.
pub(crate) fn domain_size(table: &SpaceTable, size: usize) -> u128 {
    binomial(table.len() as u128, size as u128)
}

// ---------------------------------------------------------------------------
// Public enumeration surface
// ---------------------------------------------------------------------------

/// Iterator over all `size`-subsets of Y(F) as `PointSet`s, lexicographic
/// by point index; refuses upfront when the count exceeds the budget.
pub fn enumerate_domain(
    space: &MultiprojectiveSpace,
    size: usize,
    budget: u64,
) -> Result<impl Iterator<Item = PointSet>> {
    let points = space.enumerate_points()?;
    let n = points.len();
    let required = binomial(n as u128, size as u128);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let space = space.clone();
    let mut idxs: Vec<usize> = (0..size).collect();
    let mut done = size > n;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let set = PointSet::new(
            space.clone(),
            idxs.iter().map(|&i| points[i].clone()).collect(),
        )
        .expect("enumerated points are valid");
        // Advance.
        let mut i = size;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idxs[i] != i + n - size {
                idxs[i] += 1;
                for j in i + 1..size {
                    idxs[j] = idxs[j - 1] + 1;
                }
                break;
            }
        }
        Some(set)
    }))
}

/// Seeded stream of uniformly sampled `size`-subsets of Y(F).
pub fn sample_domain(
    space: &MultiprojectiveSpace,
    size: usize,
    count: u64,
    seed: u64,
) -> Result<impl Iterator<Item = PointSet>> {
    let points = space.enumerate_points()?;
    let n = points.len();
    if size > n {
        return Err(Error::FieldTooSmall {
            family: "sampler",
            reason: format!("|Y(F)| = {n} < {size}"),
        });
    }
    let space = space.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = count;
    Ok(std::iter::from_fn(move || {
        if remaining == 0 {
            return None;
        }
        remaining -= 1;
        let picked = rand::seq::index::sample(&mut rng, n, size);
        Some(
            PointSet::new(
                space.clone(),
                picked.iter().map(|i| points[i].clone()).collect(),
            )
            .expect("sampled points are valid"),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn scan_counts_match_binomial() {
        let y = MultiprojectiveSpace::new(vec![1, 1], gf(2)).unwrap();
        let t = SpaceTable::build(&y).unwrap();
        let policy = ScanPolicy {
            rank_cap: None,
            prune_dependent_prefix: false,
        };
        let mut count = 0u64;
        let visited = scan(&t, 3, policy, &mut count, &mut |c, _, _| *c += 1);
        assert_eq!(visited, 84); // C(9,3)
        assert_eq!(count, 84);
    }

    #[test]
    fn enumerate_domain_counts() {
        let y = MultiprojectiveSpace::new(vec![1, 1], gf(2)).unwrap();
        assert_eq!(enumerate_domain(&y, 3, 1 << 20).unwrap().count(), 84);
        let y3 = MultiprojectiveSpace::new(vec![1, 1, 1], gf(2)).unwrap();
        assert_eq!(enumerate_domain(&y3, 6, 1 << 20).unwrap().count(), 296_010);
    }

    #[test]
    fn enumerate_domain_budget_refusal() {
        // (P^1)^4 over GF(2), size 6: C(81,6) = 324,540,216 exceeds a small
        // budget and must refuse with the exact count.
        let y = MultiprojectiveSpace::new(vec![1, 1, 1, 1], gf(2)).unwrap();
        match enumerate_domain(&y, 6, 1 << 20) {
            Err(Error::BudgetExceeded { required, .. }) => {
                assert_eq!(required, 324_540_216);
            }
            _ => panic!("expected budget refusal"),
        }
    }

    #[test]
    fn scan_rank_matches_matrix_rank() {
        let y = MultiprojectiveSpace::new(vec![1, 1], gf(3)).unwrap();
        let t = SpaceTable::build(&y).unwrap();
        let policy = ScanPolicy {
            rank_cap: None,
            prune_dependent_prefix: false,
        };
        let mut bad = 0u64;
        scan(&t, 4, policy, &mut bad, &mut |bad, idxs, rank| {
            let set = t.point_set(idxs).unwrap();
            if set.embed_matrix().unwrap().rank() != rank {
                *bad += 1;
            }
        });
        assert_eq!(bad, 0);
    }

    #[test]
    fn parallel_scan_agrees_with_sequential() {
        let y = MultiprojectiveSpace::new(vec![1, 1, 1], gf(2)).unwrap();
        let t = SpaceTable::build(&y).unwrap();
        let policy = ScanPolicy {
            rank_cap: Some(2),
            prune_dependent_prefix: false,
        };
        let mut seq: Vec<Vec<u32>> = Vec::new();
        let v1 = scan(&t, 3, policy, &mut seq, &mut |acc, idxs, _| {
            acc.push(idxs.to_vec())
        });
        let (v2, chunks) = scan_par(
            &t,
            3,
            policy,
            Vec::new,
            |acc: &mut Vec<Vec<u32>>, idxs, _| acc.push(idxs.to_vec()),
        );
        let par: Vec<Vec<u32>> = chunks.into_iter().flatten().collect();
        assert_eq!(v1, v2);
        assert_eq!(seq, par);
    }

    #[test]
    fn symmetry_group_size_and_soundness() {
        let y = MultiprojectiveSpace::new(vec![1, 1, 1], gf(2)).unwrap();
        let t = SpaceTable::build(&y).unwrap();
        assert_eq!(t.symmetry.len(), 6); // S_3 on three equal factors
        // Each permutation maps points to points with permuted components.
        for perm in &t.symmetry {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..t.len() as u32).collect::<Vec<_>>());
        }
        let m = MultiprojectiveSpace::new(vec![2, 1], gf(2)).unwrap();
        let tm = SpaceTable::build(&m).unwrap();
        assert_eq!(tm.symmetry.len(), 1); // nothing to permute
    }

    #[test]
    fn canonical_orbit_reduction_counts() {
        // Orbit representatives partition the subsets: summing orbit sizes
        // over canonical 2-subsets recovers C(9,2).
        let y = MultiprojectiveSpace::new(vec![1, 1], gf(2)).unwrap();
        let t = SpaceTable::build(&y).unwrap();
        let policy = ScanPolicy {
            rank_cap: None,
            prune_dependent_prefix: false,
        };
        let mut reps = 0u64;
        let mut total = 0u64;
        scan(&t, 2, policy, &mut (), &mut |_, idxs, _| {
            total += 1;
            if t.is_canonical(idxs) {
                reps += 1;
            }
        });
        assert_eq!(total, 36);
        assert!(reps < total);
        // Recompute orbit sizes from representatives.
        let mut covered = 0u64;
        scan(&t, 2, policy, &mut (), &mut |_, idxs, _| {
            if t.is_canonical(idxs) {
                let mut orbit = std::collections::BTreeSet::new();
                for perm in &t.symmetry {
                    let mut img: Vec<u32> =
                        idxs.iter().map(|&i| perm[i as usize]).collect();
                    img.sort_unstable();
                    orbit.insert(img);
                }
                covered += orbit.len() as u64;
            }
        });
        assert_eq!(covered, 36);
    }
}
