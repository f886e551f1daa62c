//! Dependency invariants of embedded point sets: the defect e(S), the
//! dependency classes (circuit, equally / uniformly dependent, e-circuit),
//! irredundant spanning, brute-force tensor rank over finite fields, and
//! decomposition enumeration.
//!
//! The defect is computed from the span identity e(S) = #S - 1 - dim<ν(S)>,
//! i.e. #S minus the rank of the embedded coordinate matrix; everything in
//! this module reduces to exact rank computations.

use serde::Serialize;

use crate::constructions::{match_family, FamilyMatch};
use crate::error::{Error, Result};
use crate::linalg::{self, FieldSpec, Scalar, ScalarMatrix};
use crate::multiproj::{MultiPoint, MultiprojectiveSpace, PointSet};

/// Subset-size cap for the exponential whole-powerset checks.
pub const UNIFORM_CHECK_CAP: usize = 12;
/// Subset profile is emitted only up to this set size.
pub const SUBSET_PROFILE_CAP: usize = 8;
/// Hard cap on tensor-rank searches.
pub const TENSOR_RANK_CAP: usize = 6;

/// A projective point of the ambient Segre space P^r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPoint {
    vector: Vec<Scalar>,
    origin: String,
}

impl TensorPoint {
    pub fn new(field: FieldSpec, vector: Vec<Scalar>, origin: impl Into<String>) -> Result<Self> {
        for c in &vector {
            field.validate(c)?;
        }
        let Some(lead) = vector.iter().position(|c| !c.is_zero()) else {
            return Err(Error::InvalidPoint("zero tensor point".into()));
        };
        let inv = field.inv(&vector[lead]);
        Ok(TensorPoint {
            vector: vector.iter().map(|c| field.mul(c, &inv)).collect(),
            origin: origin.into(),
        })
    }

    pub fn vector(&self) -> &[Scalar] {
        &self.vector
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }
}

/// e(S) = #S - 1 - dim<ν(S)> = #S - rank of the embedded matrix.
pub fn defect(set: &PointSet) -> Result<usize> {
    if set.is_empty() {
        return Ok(0);
    }
    Ok(set.len() - set.embed_matrix()?.rank())
}

/// Equally dependent: e(S) > 0 and e(S') < e(S) for every proper subset.
/// Checking the maximal proper subsets suffices because the defect drops by
/// at most one per removed point.
pub fn is_equally_dependent(set: &PointSet) -> Result<bool> {
    if set.len() < 2 {
        return Ok(false);
    }
    let e = defect(set)?;
    if e == 0 {
        return Ok(false);
    }
    for i in 0..set.len() {
        if defect(&set.without(i))? >= e {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Circuit: equally dependent with defect exactly 1 (equivalently: dependent
/// with every proper subset independent).
pub fn is_circuit(set: &PointSet) -> Result<bool> {
    Ok(defect(set)? == 1 && is_equally_dependent(set)?)
}

/// Uniformly dependent: e(S') = max(0, e(S) - #S + #S') for all subsets,
/// checked exhaustively over the whole powerset.
pub fn is_uniformly_dependent(set: &PointSet) -> Result<bool> {
    let s = set.len();
    if s < 2 {
        return Ok(false);
    }
    if s > UNIFORM_CHECK_CAP {
        return Err(Error::SizeCapExceeded {
            what: "uniform dependence check",
            size: s,
            cap: UNIFORM_CHECK_CAP,
        });
    }
    let e = defect(set)?;
    if e == 0 {
        return Ok(false);
    }
    for mask in 0u32..(1 << s) {
        let idxs: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
        let expected = (e + idxs.len()).saturating_sub(s);
        if defect(&set.subset(&idxs)?)? != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// If S is an e-circuit, returns e = e(S): the defect is positive and some
/// subset of cardinality #S - e + 1 is a circuit.
pub fn e_circuit_degree(set: &PointSet) -> Result<Option<usize>> {
    let s = set.len();
    let e = defect(set)?;
    if e == 0 {
        return Ok(None);
    }
    let target = s - e + 1;
    let mut found = false;
    for_each_subset_of_size(s, target, &mut |idxs| {
        if found {
            return Ok(());
        }
        if is_circuit(&set.subset(idxs)?)? {
            found = true;
        }
        Ok(())
    })?;
    Ok(if found { Some(e) } else { None })
}

/// q in <ν(S)> but in no proper subset's span. Checking the maximal proper
/// subsets suffices by span monotonicity.
pub fn irredundantly_spans(set: &PointSet, q: &TensorPoint) -> Result<bool> {
    let field = set.space().field();
    let m = set.embed_matrix()?;
    if q.vector.len() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "tensor point has length {}, ambient needs {}",
            q.vector.len(),
            m.cols()
        )));
    }
    let rows = m.row_vecs();
    if linalg::in_span(field, &q.vector, &rows)?.is_none() {
        return Ok(false);
    }
    for i in 0..set.len() {
        let sub: Vec<Vec<Scalar>> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r.clone())
            .collect();
        if linalg::in_span(field, &q.vector, &sub)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tensor rank of q with respect to Y, searched up to `cap`.
///
/// Over a finite field the search is exhaustive over subsets of Y(F); for
/// two factors the rank equals the matrix rank of the reshaped vector and
/// works over any field. Rationals with three or more factors have no
/// enumerable domain and are rejected.
pub fn tensor_rank(
    q: &TensorPoint,
    space: &MultiprojectiveSpace,
    cap: usize,
) -> Result<Option<usize>> {
    if cap > TENSOR_RANK_CAP {
        return Err(Error::SizeCapExceeded {
            what: "tensor rank search",
            size: cap,
            cap: TENSOR_RANK_CAP,
        });
    }
    if space.factors() == 2 {
        let r = matrix_rank_of_reshape(q, space)?;
        return Ok(if r <= cap { Some(r) } else { None });
    }
    if !space.field().is_finite() {
        return Err(Error::UnsupportedDomain(
            "tensor rank over the rationals needs exactly two factors".into(),
        ));
    }
    tensor_rank_exhaustive(q, space, cap)
}

/// The two-factor shortcut: rank of the (n1+1) x (n2+1) reshape.
pub fn matrix_rank_of_reshape(q: &TensorPoint, space: &MultiprojectiveSpace) -> Result<usize> {
    if space.factors() != 2 {
        return Err(Error::UnsupportedDomain(
            "reshape rank needs exactly two factors".into(),
        ));
    }
    let rows = space.factor_dims()[0] + 1;
    let cols = space.factor_dims()[1] + 1;
    if q.vector.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "tensor point length {} vs ambient {}",
            q.vector.len(),
            rows * cols
        )));
    }
    ScalarMatrix::new(space.field(), rows, cols, q.vector.clone()).map(|m| m.rank())
}

/// Exhaustive rank search over Y(F): the independent route, also used to
/// cross-check the two-factor shortcut.
pub fn tensor_rank_exhaustive(
    q: &TensorPoint,
    space: &MultiprojectiveSpace,
    cap: usize,
) -> Result<Option<usize>> {
    if !space.field().is_finite() {
        return Err(Error::UnsupportedDomain(
            "exhaustive tensor rank needs a finite field".into(),
        ));
    }
    let field = space.field();
    let points = space.enumerate_points()?;
    let emb: Vec<Vec<Scalar>> = points
        .iter()
        .map(|p| p.segre_embed(space))
        .collect::<Result<Vec<_>>>()?;
    if q.vector.len() != emb.first().map_or(0, Vec::len) {
        return Err(Error::DimensionMismatch(
            "tensor point does not match the ambient Segre dimension".into(),
        ));
    }
    for t in 1..=cap.min(points.len()) {
        let mut found = false;
        for_each_subset_of_size(points.len(), t, &mut |idxs| {
            if found {
                return Ok(());
            }
            let rows: Vec<Vec<Scalar>> = idxs.iter().map(|&i| emb[i].clone()).collect();
            if linalg::in_span(field, &q.vector, &rows)?.is_some() {
                found = true;
            }
            Ok(())
        })?;
        if found {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// All cardinality-t subsets of Y(F) irredundantly spanning q, in
/// lexicographic order of point indices: the set S(Y, q, t).
pub fn decompositions(
    space: &MultiprojectiveSpace,
    q: &TensorPoint,
    t: usize,
    budget: u64,
) -> Result<Vec<PointSet>> {
    if !space.field().is_finite() {
        return Err(Error::UnsupportedDomain(
            "decomposition enumeration needs a finite field".into(),
        ));
    }
    let points = space.enumerate_points()?;
    let n = points.len();
    let required = binomial(n as u128, t as u128);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let field = space.field();
    let emb: Vec<Vec<Scalar>> = points
        .iter()
        .map(|p| p.segre_embed(space))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for_each_subset_of_size(n, t, &mut |idxs| {
        let rows: Vec<Vec<Scalar>> = idxs.iter().map(|&i| emb[i].clone()).collect();
        if linalg::in_span(field, &q.vector, &rows)?.is_none() {
            return Ok(());
        }
        for drop in 0..t {
            let sub: Vec<Vec<Scalar>> = (0..t)
                .filter(|&j| j != drop)
                .map(|j| rows[j].clone())
                .collect();
            if linalg::in_span(field, &q.vector, &sub)?.is_some() {
                return Ok(());
            }
        }
        let pts: Vec<MultiPoint> = idxs.iter().map(|&i| points[i].clone()).collect();
        out.push(PointSet::new(space.clone(), pts)?);
        Ok(())
    })?;
    Ok(out)
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Visits all k-subsets of {0..n} in lexicographic order.
pub(crate) fn for_each_subset_of_size(
    n: usize,
    k: usize,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if k > n {
        return Ok(());
    }
    let mut idxs: Vec<usize> = (0..k).collect();
    if k == 0 {
        return f(&idxs);
    }
    loop {
        f(&idxs)?;
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idxs[i] != i + n - k {
                break;
            }
        }
        idxs[i] += 1;
        for j in i + 1..k {
            idxs[j] = idxs[j - 1] + 1;
        }
    }
}

/// The dependency class of a set, most specific label first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DependencyClass {
    Independent,
    Circuit,
    UniformlyDependent,
    ECircuit,
    EquallyDependent,
    DependentOther,
}

impl DependencyClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            DependencyClass::Independent => "independent",
            DependencyClass::Circuit => "circuit",
            DependencyClass::UniformlyDependent => "uniformly-dependent",
            DependencyClass::ECircuit => "e-circuit",
            DependencyClass::EquallyDependent => "equally-dependent",
            DependencyClass::DependentOther => "dependent-other",
        }
    }
}

/// Defect of one subset, keyed by ascending point indices.
#[derive(Debug, Clone, Serialize)]
pub struct SubsetDefect {
    pub subset: Vec<usize>,
    pub defect: usize,
}

/// Every invariant of a point set in one record.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub size: usize,
    pub defect: usize,
    pub width: usize,
    pub concise: bool,
    pub hull_dims: Vec<usize>,
    pub class: DependencyClass,
    /// Present exactly when the set is an e-circuit (degree = defect).
    pub e_circuit_degree: Option<usize>,
    /// Family recognition, attempted only for 6-point sets.
    pub family: Option<FamilyMatch>,
    /// Minimal dependent subset (by size, then lex) when the class is
    /// `dependent-other`.
    pub witness: Option<Vec<usize>>,
    /// Full powerset defect profile for small sets.
    pub subset_defects: Option<Vec<SubsetDefect>>,
}

/// The classification ladder, most specific first, plus the e-circuit
/// degree. Powerset-sized checks are skipped above the size cap, where the
/// ladder degrades to the weaker true label.
pub fn classification(set: &PointSet) -> Result<(DependencyClass, Option<usize>)> {
    let size = set.len();
    let e = defect(set)?;
    if e == 0 {
        return Ok((DependencyClass::Independent, None));
    }
    let equally = is_equally_dependent(set)?;
    let uniformly = if equally && size <= UNIFORM_CHECK_CAP {
        is_uniformly_dependent(set)?
    } else {
        false
    };
    let degree = if size <= UNIFORM_CHECK_CAP {
        e_circuit_degree(set)?
    } else {
        None
    };
    let class = if equally && e == 1 {
        DependencyClass::Circuit
    } else if uniformly {
        DependencyClass::UniformlyDependent
    } else if degree.is_some() {
        DependencyClass::ECircuit
    } else if equally {
        DependencyClass::EquallyDependent
    } else {
        DependencyClass::DependentOther
    };
    Ok((class, degree))
}

/// Computes the full report: defect, width, concision, classification,
/// e-circuit degree, family match and (for small sets) the subset profile.
pub fn analyze(set: &PointSet) -> Result<AnalysisReport> {
    if set.is_empty() {
        return Err(Error::EmptySet("analyze"));
    }
    let size = set.len();
    let e = defect(set)?;
    let hull = set.concision_hull()?;
    let width = set.width()?;
    let concise = hull.hull_dims() == set.space().factor_dims();
    let (class, degree) = classification(set)?;

    let witness = if class == DependencyClass::DependentOther {
        minimal_dependent_subset(set)?
    } else {
        None
    };

    let family = if size == 6 {
        Some(match_family(set)?)
    } else {
        None
    };

    let subset_defects = if size <= SUBSET_PROFILE_CAP {
        let mut profile = Vec::new();
        for card in 1..=size {
            for_each_subset_of_size(size, card, &mut |idxs| {
                profile.push(SubsetDefect {
                    subset: idxs.to_vec(),
                    defect: defect(&set.subset(idxs)?)?,
                });
                Ok(())
            })?;
        }
        Some(profile)
    } else {
        None
    };

    Ok(AnalysisReport {
        size,
        defect: e,
        width,
        concise,
        hull_dims: hull.hull_dims().to_vec(),
        class,
        e_circuit_degree: degree,
        family,
        witness,
        subset_defects,
    })
}

fn minimal_dependent_subset(set: &PointSet) -> Result<Option<Vec<usize>>> {
    for card in 2..=set.len() {
        let mut found: Option<Vec<usize>> = None;
        for_each_subset_of_size(set.len(), card, &mut |idxs| {
            if found.is_some() {
                return Ok(());
            }
            if defect(&set.subset(idxs)?)? > 0 {
                found = Some(idxs.to_vec());
            }
            Ok(())
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Grassmann bookkeeping of a partition S = A ⊔ B: span dimensions, the
/// intersection of the two spans, the admissible intersection points
/// (irredundantly spanned by both halves) and their tensor ranks.
#[derive(Debug, Clone)]
pub struct PartitionAnalysis {
    pub defect_s: usize,
    pub defect_a: usize,
    pub defect_b: usize,
    /// Linear dimensions of span ν(A), span ν(B), span ν(S).
    pub span_a: usize,
    pub span_b: usize,
    pub span_s: usize,
    /// Linear dimension of span ν(A) ∩ span ν(B)
    /// (= e(S) − e(A) − e(B) by Grassmann).
    pub intersection_dim: usize,
    pub intersection_basis: Vec<Vec<Scalar>>,
    /// Intersection points irredundantly spanned by both halves, paired
    /// with their tensor rank where computable (None over Q with k >= 3).
    pub admissible: Vec<(TensorPoint, Option<usize>)>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PartitionOptions {
    /// Allow |A| != 3 or |B| != 3.
    pub any_sizes: bool,
    /// Seed for the rational-field generic-point sampler.
    pub seed: u64,
}

/// Analyzes the partition S = A ⊔ B given by index sets into `set`.
///
/// Over a finite field every projective point of the span intersection is
/// enumerated and filtered to those irredundantly spanned by both halves;
/// over the rationals a seeded random combination is drawn and rejected
/// until the finitely many genericity conditions (non-membership in each
/// maximal proper-subset span) hold.
pub fn partition_analysis(
    set: &PointSet,
    a_idx: &[usize],
    b_idx: &[usize],
    opts: PartitionOptions,
) -> Result<PartitionAnalysis> {
    let s = set.len();
    let mut seen = vec![false; s];
    for &i in a_idx.iter().chain(b_idx) {
        if i >= s {
            return Err(Error::InvalidPartition(format!("index {i} out of range")));
        }
        if seen[i] {
            return Err(Error::InvalidPartition(format!(
                "index {i} appears in both halves"
            )));
        }
        seen[i] = true;
    }
    if seen.iter().any(|&x| !x) {
        return Err(Error::InvalidPartition("A ∪ B must cover S".into()));
    }
    if !opts.any_sizes && (a_idx.len() != 3 || b_idx.len() != 3) {
        return Err(Error::InvalidPartition(
            "halves must have size 3 (pass any_sizes to override)".into(),
        ));
    }

    let field = set.space().field();
    let a = set.subset(a_idx)?;
    let b = set.subset(b_idx)?;
    let rows_a = a.embed_matrix()?.row_vecs();
    let rows_b = b.embed_matrix()?.row_vecs();
    let span_a = linalg::span_dim(field, &rows_a)?;
    let span_b = linalg::span_dim(field, &rows_b)?;
    let span_s = set.embed_matrix()?.rank();
    let basis = linalg::subspace_intersection(field, &rows_a, &rows_b)?;

    let mut admissible = Vec::new();
    if !basis.is_empty() {
        let cap = a.len().max(b.len()).min(TENSOR_RANK_CAP);
        let mut consider = |vec: Vec<Scalar>| -> Result<bool> {
            let q = TensorPoint::new(field, vec, "partition intersection")?;
            if irredundantly_spans(&a, &q)? && irredundantly_spans(&b, &q)? {
                let rank = match tensor_rank(&q, set.space(), cap) {
                    Ok(r) => r,
                    Err(Error::UnsupportedDomain(_)) => None,
                    Err(e) => return Err(e),
                };
                admissible.push((q, rank));
                Ok(true)
            } else {
                Ok(false)
            }
        };
        if field.is_finite() {
            for combo in projective_combinations(field, basis.len()) {
                let mut v = vec![field.zero(); basis[0].len()];
                for (c, bv) in combo.iter().zip(&basis) {
                    for (x, y) in v.iter_mut().zip(bv) {
                        *x = field.add(x, &field.mul(c, y));
                    }
                }
                consider(v)?;
            }
        } else {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..1000 {
                let mut v = vec![field.zero(); basis[0].len()];
                for bv in &basis {
                    let c = field.from_i64(rng.gen_range(-9i64..=9));
                    for (x, y) in v.iter_mut().zip(bv) {
                        *x = field.add(x, &field.mul(&c, y));
                    }
                }
                if v.iter().all(Scalar::is_zero) {
                    continue;
                }
                if consider(v)? {
                    break;
                }
            }
        }
    }

    Ok(PartitionAnalysis {
        defect_s: set.len() - span_s,
        defect_a: a.len() - span_a,
        defect_b: b.len() - span_b,
        span_a,
        span_b,
        span_s,
        intersection_dim: basis.len(),
        intersection_basis: basis,
        admissible,
    })
}

/// Canonical coefficient tuples of P^{d-1}(F): first nonzero entry 1.
fn projective_combinations(field: FieldSpec, d: usize) -> Vec<Vec<Scalar>> {
    let elems = field.elements().expect("finite field");
    let p = elems.len();
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        let total = p.pow(free as u32);
        for idx in 0..total {
            let mut v = vec![field.zero(); d];
            v[lead] = field.one();
            let mut t = idx;
            for j in (0..free).rev() {
                v[lead + 1 + j] = elems[t % p].clone();
                t /= p;
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiproj::MultiprojectiveSpace;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn line_points(space: &MultiprojectiveSpace, ts: &[i64]) -> Vec<MultiPoint> {
        ts.iter()
            .map(|&t| MultiPoint::from_ints(space, &[&[1, t]]).unwrap())
            .collect()
    }

    #[test]
    fn defect_small_sets() {
        let y = MultiprojectiveSpace::new(vec![1], gf(5)).unwrap();
        let one = PointSet::new(y.clone(), line_points(&y, &[0])).unwrap();
        assert_eq!(defect(&one).unwrap(), 0);
        let two = PointSet::new(y.clone(), line_points(&y, &[0, 1])).unwrap();
        assert_eq!(defect(&two).unwrap(), 0);
        // 3 distinct points of P^1 have defect 1.
        let three = PointSet::new(y.clone(), line_points(&y, &[0, 1, 2])).unwrap();
        assert_eq!(defect(&three).unwrap(), 1);
        assert!(is_circuit(&three).unwrap());
    }

    #[test]
    fn equally_dependent_rejects_independent() {
        let y = MultiprojectiveSpace::new(vec![2], gf(5)).unwrap();
        let pts = vec![
            MultiPoint::from_ints(&y, &[&[1, 0, 0]]).unwrap(),
            MultiPoint::from_ints(&y, &[&[0, 1, 0]]).unwrap(),
            MultiPoint::from_ints(&y, &[&[0, 0, 1]]).unwrap(),
        ];
        let s = PointSet::new(y, pts).unwrap();
        assert!(!is_equally_dependent(&s).unwrap());
        assert_eq!(e_circuit_degree(&s).unwrap(), None);
    }

    #[test]
    fn four_points_of_p1_uniformly_dependent() {
        let y = MultiprojectiveSpace::new(vec![1], gf(5)).unwrap();
        let s = PointSet::new(y.clone(), line_points(&y, &[0, 1, 2, 3])).unwrap();
        assert_eq!(defect(&s).unwrap(), 2);
        assert!(is_equally_dependent(&s).unwrap());
        assert!(is_uniformly_dependent(&s).unwrap());
        assert_eq!(e_circuit_degree(&s).unwrap(), Some(2));
    }

    #[test]
    fn irredundant_spanning_basics() {
        let y = MultiprojectiveSpace::new(vec![1, 1], gf(5)).unwrap();
        let p = MultiPoint::from_ints(&y, &[&[1, 0], &[1, 0]]).unwrap();
        let p2 = MultiPoint::from_ints(&y, &[&[1, 1], &[1, 1]]).unwrap();
        let q = TensorPoint::new(gf(5), p.segre_embed(&y).unwrap(), "nu(p)").unwrap();
        let single = PointSet::new(y.clone(), vec![p.clone()]).unwrap();
        assert!(irredundantly_spans(&single, &q).unwrap());
        let pair = PointSet::new(y, vec![p, p2]).unwrap();
        assert!(!irredundantly_spans(&pair, &q).unwrap());
    }

    #[test]
    fn rank_one_tensor_rank() {
        let y = MultiprojectiveSpace::new(vec![1, 1, 1], gf(2)).unwrap();
        let p = MultiPoint::from_ints(&y, &[&[1, 1], &[1, 0], &[0, 1]]).unwrap();
        let q = TensorPoint::new(gf(2), p.segre_embed(&y).unwrap(), "nu(p)").unwrap();
        assert_eq!(tensor_rank(&q, &y, 3).unwrap(), Some(1));
        assert_eq!(tensor_rank_exhaustive(&q, &y, 3).unwrap(), Some(1));
    }

    #[test]
    fn invertible_matrix_has_rank_two() {
        let f = gf(5);
        let y = MultiprojectiveSpace::new(vec![1, 1], f).unwrap();
        // Identity 2x2 as a tensor point.
        let q = TensorPoint::new(
            f,
            vec![f.from_i64(1), f.from_i64(0), f.from_i64(0), f.from_i64(1)],
            "identity",
        )
        .unwrap();
        assert_eq!(tensor_rank(&q, &y, 3).unwrap(), Some(2));
        assert_eq!(matrix_rank_of_reshape(&q, &y).unwrap(), 2);
    }

    #[test]
    fn rank_distribution_over_cube_f2() {
        // Distribution computed by an independent exhaustive search before
        // the build: ranks over P^7(F2) w.r.t. (P^1)^3 are
        // {1: 27, 2: 162, 3: 66}.
        let f = gf(2);
        let y = MultiprojectiveSpace::new(vec![1, 1, 1], f).unwrap();
        let mut counts = [0usize; 4];
        for pt in crate::multiproj::enumerate_proj_points(7, f) {
            let q = TensorPoint::new(f, pt.coords().to_vec(), "enumerated").unwrap();
            let r = tensor_rank(&q, &y, 4).unwrap().expect("rank within cap");
            counts[r] += 1;
        }
        assert_eq!(counts, [0, 27, 162, 66, 0][..4]);
    }

    #[test]
    fn decompositions_rank_one_witnesses() {
        let f = gf(2);
        let y = MultiprojectiveSpace::new(vec![1, 1], f).unwrap();
        let p = MultiPoint::from_ints(&y, &[&[1, 1], &[0, 1]]).unwrap();
        let q = TensorPoint::new(f, p.segre_embed(&y).unwrap(), "nu(p)").unwrap();
        let d1 = decompositions(&y, &q, 1, 1_000_000).unwrap();
        assert_eq!(d1.len(), 1);
        assert!(d1[0].contains(&p));
    }

    #[test]
    fn decomposition_counts_match_oracle() {
        // Counts computed by an independent exhaustive enumeration before
        // the build, for q = identity over GF(2) and GF(3).
        let q_of = |f: FieldSpec| {
            TensorPoint::new(
                f,
                vec![f.from_i64(1), f.from_i64(0), f.from_i64(0), f.from_i64(1)],
                "identity",
            )
            .unwrap()
        };
        let y2 = MultiprojectiveSpace::new(vec![1, 1], gf(2)).unwrap();
        assert_eq!(decompositions(&y2, &q_of(gf(2)), 3, 1 << 20).unwrap().len(), 7);
        let y3 = MultiprojectiveSpace::new(vec![1, 1], gf(3)).unwrap();
        assert_eq!(decompositions(&y3, &q_of(gf(3)), 3, 1 << 20).unwrap().len(), 60);
    }

    #[test]
    fn decomposition_budget_refused() {
        let f = gf(3);
        let y = MultiprojectiveSpace::new(vec![1, 1], f).unwrap();
        let q = q_identity(f);
        assert!(matches!(
            decompositions(&y, &q, 3, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    fn q_identity(f: FieldSpec) -> TensorPoint {
        TensorPoint::new(
            f,
            vec![f.from_i64(1), f.from_i64(0), f.from_i64(0), f.from_i64(1)],
            "identity",
        )
        .unwrap()
    }

    #[test]
    fn partition_of_independent_set_has_empty_intersection() {
        let y = MultiprojectiveSpace::new(vec![2], gf(7)).unwrap();
        let pts = vec![
            MultiPoint::from_ints(&y, &[&[1, 0, 0]]).unwrap(),
            MultiPoint::from_ints(&y, &[&[0, 1, 0]]).unwrap(),
            MultiPoint::from_ints(&y, &[&[0, 0, 1]]).unwrap(),
        ];
        let s = PointSet::new(y, pts).unwrap();
        let pa = partition_analysis(
            &s,
            &[0, 1],
            &[2],
            PartitionOptions {
                any_sizes: true,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(pa.defect_s, 0);
        assert_eq!(pa.intersection_dim, 0);
        assert!(pa.admissible.is_empty());
    }

    #[test]
    fn six_circuit_partition_single_point() {
        // e_0..e_4 and the all-ones vector in P^4: a circuit of size 6.
        let f = gf(7);
        let y = MultiprojectiveSpace::new(vec![4], f).unwrap();
        let mut pts = Vec::new();
        for i in 0..5 {
            let mut c = [0i64; 5];
            c[i] = 1;
            pts.push(MultiPoint::from_ints(&y, &[&c]).unwrap());
        }
        pts.push(MultiPoint::from_ints(&y, &[&[1, 1, 1, 1, 1]]).unwrap());
        let s = PointSet::new(y, pts).unwrap();
        assert!(is_circuit(&s).unwrap());
        // Both halves independent: the intersection is a single projective
        // point (linear dimension 1 = e(S) - 1 + ... Grassmann).
        let pa = partition_analysis(&s, &[0, 1, 2], &[3, 4, 5], PartitionOptions::default())
            .unwrap();
        assert_eq!(pa.defect_a, 0);
        assert_eq!(pa.defect_b, 0);
        assert_eq!(pa.intersection_dim, 1);
        assert_eq!(pa.defect_s, 1);
        // Cross-check the Grassmann route against the defect route.
        assert_eq!(pa.intersection_dim, pa.defect_s - pa.defect_a - pa.defect_b);
        assert!(!pa.admissible.is_empty());
    }

    #[test]
    fn overlapping_partition_rejected() {
        let y = MultiprojectiveSpace::new(vec![1], gf(5)).unwrap();
        let s = PointSet::new(y.clone(), line_points(&y, &[0, 1, 2])).unwrap();
        assert!(partition_analysis(
            &s,
            &[0, 1],
            &[1, 2],
            PartitionOptions {
                any_sizes: true,
                seed: 0
            }
        )
        .is_err());
    }

    #[test]
    fn uniform_cap_enforced() {
        let y = MultiprojectiveSpace::new(vec![1], gf(17)).unwrap();
        let s = PointSet::new(
            y.clone(),
            (0..13)
                .map(|t| MultiPoint::from_ints(&y, &[&[1, t]]).unwrap())
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            is_uniformly_dependent(&s),
            Err(Error::SizeCapExceeded { .. })
        ));
    }
}
