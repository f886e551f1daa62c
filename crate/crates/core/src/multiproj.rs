//! Multiprojective spaces P^{n_1} x ... x P^{n_k}, their points and finite
//! point sets, the Segre embedding, factor projections, width and concision.
//!
//! Projective points are stored as canonical representatives (leftmost
//! nonzero coordinate scaled to 1), point sets are deduplicated and kept in
//! lexicographic order, and the Segre basis order is mixed-radix with the
//! first factor most significant. Those three conventions together pin a
//! bit-exact serialization for every downstream report.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, FieldSpec, Scalar, ScalarMatrix};

/// The shape (n_1, ..., n_k) of Y = P^{n1} x ... x P^{nk} plus the field.
///
/// Degenerate factors (n_i = 0) are allowed and carried along; they matter
/// to the elementary-increasing construction and to concision hulls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiprojectiveSpace {
    factor_dims: Vec<usize>,
    field: FieldSpec,
}

impl MultiprojectiveSpace {
    pub fn new(factor_dims: Vec<usize>, field: FieldSpec) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidSpace("need at least one factor".into()));
        }
        Ok(MultiprojectiveSpace { factor_dims, field })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn factors(&self) -> usize {
        self.factor_dims.len()
    }

    /// Ambient Segre dimension r with ν: Y -> P^r, i.e. ∏(n_i+1) − 1.
    pub fn segre_dim(&self) -> usize {
        self.factor_dims.iter().map(|n| n + 1).product::<usize>() - 1
    }

    /// Number of factors with n_i >= 1.
    pub fn width(&self) -> usize {
        self.factor_dims.iter().filter(|&&n| n > 0).count()
    }

    /// Shape with degenerate factors dropped, sorted descending; the
    /// isomorphism-invariant signature used when comparing spaces.
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.factor_dims.iter().copied().filter(|&n| n > 0).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Number of rational points |Y(F)| for finite fields.
    pub fn point_count(&self) -> Option<u128> {
        let p = self.field.modulus()? as u128;
        let mut total: u128 = 1;
        for &n in &self.factor_dims {
            let mut fac: u128 = 0;
            for j in 0..=n {
                fac += p.pow(j as u32);
            }
            total = total.checked_mul(fac)?;
        }
        Some(total)
    }

    /// All points of Y(F) in lexicographic order (factor 1 most significant).
    pub fn enumerate_points(&self) -> Result<Vec<MultiPoint>> {
        if !self.field.is_finite() {
            return Err(Error::UnsupportedDomain(
                "point enumeration needs a finite field".into(),
            ));
        }
        let per_factor: Vec<Vec<ProjPoint>> = self
            .factor_dims
            .iter()
            .map(|&n| enumerate_proj_points(n, self.field))
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_factor.len()];
        'outer: loop {
            out.push(MultiPoint {
                components: idx
                    .iter()
                    .enumerate()
                    .map(|(f, &i)| per_factor[f][i].clone())
                    .collect(),
            });
            for f in (0..idx.len()).rev() {
                idx[f] += 1;
                if idx[f] < per_factor[f].len() {
                    continue 'outer;
                }
                idx[f] = 0;
            }
            break;
        }
        Ok(out)
    }
}

impl fmt::Display for MultiprojectiveSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.factor_dims.iter().map(|n| format!("P^{n}")).collect();
        write!(f, "{} over {}", dims.join(" x "), self.field)
    }
}

/// Canonical representatives of P^n(F), lex order on coordinate tuples.
pub fn enumerate_proj_points(n: usize, field: FieldSpec) -> Vec<ProjPoint> {
    let p = field.modulus().expect("finite field");
    let mut pts = Vec::new();
    let mut coords = vec![0u64; n + 1];
    loop {
        if let Some(lead) = coords.iter().position(|&c| c != 0) {
            if coords[lead] == 1 {
                pts.push(ProjPoint {
                    coords: coords.iter().map(|&c| Scalar::Gf(c)).collect(),
                });
            }
        }
        let mut i = n + 1;
        loop {
            if i == 0 {
                return pts;
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < p {
                break;
            }
            coords[i] = 0;
        }
    }
}

/// A point of one factor P^{n_i}: nonzero, first nonzero coordinate = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    /// Normalizes an arbitrary nonzero representative.
    pub fn new(field: FieldSpec, coords: Vec<Scalar>) -> Result<Self> {
        for c in &coords {
            field.validate(c)?;
        }
        let Some(lead) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(Error::InvalidPoint("all-zero coordinate vector".into()));
        };
        let inv = field.inv(&coords[lead]);
        Ok(ProjPoint {
            coords: coords.iter().map(|c| field.mul(c, &inv)).collect(),
        })
    }

    pub fn from_ints(field: FieldSpec, coords: &[i64]) -> Result<Self> {
        Self::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// A point of Y: one `ProjPoint` per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoint {
    components: Vec<ProjPoint>,
}

impl MultiPoint {
    pub fn new(space: &MultiprojectiveSpace, components: Vec<ProjPoint>) -> Result<Self> {
        if components.len() != space.factors() {
            return Err(Error::InvalidPoint(format!(
                "expected {} components, got {}",
                space.factors(),
                components.len()
            )));
        }
        for (i, (c, &n)) in components.iter().zip(space.factor_dims()).enumerate() {
            if c.dim() != n {
                return Err(Error::InvalidPoint(format!(
                    "component {i} has dimension {} but factor is P^{n}",
                    c.dim()
                )));
            }
        }
        Ok(MultiPoint { components })
    }

    pub fn from_ints(space: &MultiprojectiveSpace, comps: &[&[i64]]) -> Result<Self> {
        let components = comps
            .iter()
            .map(|c| ProjPoint::from_ints(space.field(), c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, components)
    }

    pub fn components(&self) -> &[ProjPoint] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &ProjPoint {
        &self.components[i]
    }

    /// Segre embedding: the iterated Kronecker product of the component
    /// coordinate vectors, factor 1 most significant. Components are
    /// canonical, so the result's first nonzero coordinate is 1.
    pub fn segre_embed(&self, space: &MultiprojectiveSpace) -> Result<Vec<Scalar>> {
        if self.components.len() != space.factors() {
            return Err(Error::InvalidPoint(format!(
                "point has {} components, space has {} factors",
                self.components.len(),
                space.factors()
            )));
        }
        let field = space.field();
        let mut acc = vec![field.one()];
        for comp in &self.components {
            let mut next = Vec::with_capacity(acc.len() * comp.coords.len());
            for a in &acc {
                for b in &comp.coords {
                    next.push(field.mul(a, b));
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}

/// A deduplicated finite set of points of one space, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    space: MultiprojectiveSpace,
    points: Vec<MultiPoint>,
}

impl PointSet {
    pub fn new(space: MultiprojectiveSpace, mut points: Vec<MultiPoint>) -> Result<Self> {
        for p in &points {
            // Re-validate shape against the space.
            MultiPoint::new(&space, p.components.clone())?;
        }
        points.sort();
        points.dedup();
        Ok(PointSet { space, points })
    }

    pub fn space(&self) -> &MultiprojectiveSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[MultiPoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiPoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: &MultiPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Subset by point indices (deduplicated, order-normalized).
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let points = indices
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidPoint(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(self.space.clone(), points)
    }

    /// Removes the point at `index`.
    pub fn without(&self, index: usize) -> PointSet {
        let mut points = self.points.clone();
        points.remove(index);
        PointSet {
            space: self.space.clone(),
            points,
        }
    }

    /// Set union within the same space.
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.space != other.space {
            return Err(Error::FieldMismatch(
                "union of point sets over different spaces".into(),
            ));
        }
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        PointSet::new(self.space.clone(), pts)
    }

    /// The #S x (r+1) matrix of Segre-embedded rows, in set order.
    pub fn embed_matrix(&self) -> Result<ScalarMatrix> {
        let rows = self
            .points
            .iter()
            .map(|p| p.segre_embed(&self.space))
            .collect::<Result<Vec<_>>>()?;
        ScalarMatrix::from_rows(self.space.field(), rows)
    }

    /// Image of the i-th factor projection π_i, as a sorted set.
    pub fn project_factor(&self, i: usize) -> Result<Vec<ProjPoint>> {
        if i >= self.space.factors() {
            return Err(Error::FactorIndex {
                index: i,
                factors: self.space.factors(),
            });
        }
        let mut out: Vec<ProjPoint> = self
            .points
            .iter()
            .map(|p| p.components[i].clone())
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// η_i: deletes the i-th component; image as a set over Y_i.
    pub fn project_forget_one(&self, i: usize) -> Result<PointSet> {
        self.project_forget(&[i])
    }

    /// π_E: forgets all components with index in `forget`; E must be a
    /// proper subset of the factors.
    pub fn project_forget(&self, forget: &[usize]) -> Result<PointSet> {
        let k = self.space.factors();
        for &i in forget {
            if i >= k {
                return Err(Error::FactorIndex {
                    index: i,
                    factors: k,
                });
            }
        }
        let mut drop = vec![false; k];
        for &i in forget {
            drop[i] = true;
        }
        if drop.iter().all(|&d| d) {
            return Err(Error::InvalidProjection(
                "cannot forget every factor".into(),
            ));
        }
        let dims: Vec<usize> = self
            .space
            .factor_dims()
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop[*i])
            .map(|(_, &n)| n)
            .collect();
        let target = MultiprojectiveSpace::new(dims, self.space.field())?;
        let points = self
            .points
            .iter()
            .map(|p| MultiPoint {
                components: p
                    .components
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !drop[*i])
                    .map(|(_, c)| c.clone())
                    .collect(),
            })
            .collect();
        PointSet::new(target, points)
    }

    /// Is η_i injective on this set?
    pub fn forget_one_injective(&self, i: usize) -> Result<bool> {
        let k = self.space.factors();
        if i >= k {
            return Err(Error::FactorIndex {
                index: i,
                factors: k,
            });
        }
        if k == 1 {
            // Forgetting the only factor maps everything to a point.
            return Ok(self.points.len() <= 1);
        }
        Ok(self.project_forget_one(i)?.len() == self.points.len())
    }

    /// Width: number of factors on which the set has more than one image.
    pub fn width(&self) -> Result<usize> {
        if self.points.is_empty() {
            return Err(Error::EmptySet("width"));
        }
        let mut w = 0;
        for i in 0..self.space.factors() {
            if self.project_factor(i)?.len() > 1 {
                w += 1;
            }
        }
        Ok(w)
    }

    /// Per-factor spans of the projections: the minimal multiprojective
    /// subspace of Y containing the set.
    pub fn concision_hull(&self) -> Result<ConcisionHull> {
        if self.points.is_empty() {
            return Err(Error::EmptySet("concision_hull"));
        }
        let field = self.space.field();
        let mut bases = Vec::new();
        let mut hull_dims = Vec::new();
        for i in 0..self.space.factors() {
            let comps: Vec<Vec<Scalar>> = self
                .points
                .iter()
                .map(|p| p.components[i].coords().to_vec())
                .collect();
            let m = ScalarMatrix::from_rows(field, comps)?;
            let (rank, _, rows) = m.rref();
            hull_dims.push(rank - 1);
            bases.push(rows);
        }
        Ok(ConcisionHull {
            space: self.space.clone(),
            hull_dims,
            bases,
        })
    }

    /// Concise for its ambient space: every factor projection spans.
    pub fn is_concise(&self) -> Result<bool> {
        Ok(self.concision_hull()?.hull_dims == self.space.factor_dims)
    }

    /// Reorders factors: new factor f is old factor `perm[f]`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<PointSet> {
        let k = self.space.factors();
        let mut seen = vec![false; k];
        for &p in perm {
            if p >= k || seen[p] {
                return Err(Error::InvalidSpace(format!(
                    "not a factor permutation: {perm:?}"
                )));
            }
            seen[p] = true;
        }
        if perm.len() != k {
            return Err(Error::InvalidSpace(format!(
                "permutation length {} vs {k} factors",
                perm.len()
            )));
        }
        let dims: Vec<usize> = perm.iter().map(|&p| self.space.factor_dims[p]).collect();
        let target = MultiprojectiveSpace::new(dims, self.space.field())?;
        let points = self
            .points
            .iter()
            .map(|pt| {
                MultiPoint::new(
                    &target,
                    perm.iter().map(|&p| pt.components[p].clone()).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(target, points)
    }

    /// Applies an invertible linear change of coordinates to one factor.
    pub fn transform_factor(&self, factor: usize, map: &ScalarMatrix) -> Result<PointSet> {
        let k = self.space.factors();
        if factor >= k {
            return Err(Error::FactorIndex {
                index: factor,
                factors: k,
            });
        }
        let n = self.space.factor_dims[factor] + 1;
        if map.rows() != n || map.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "factor map must be {n}x{n}"
            )));
        }
        if map.rank() != n {
            return Err(Error::InvalidSpace("factor map must be invertible".into()));
        }
        let field = self.space.field();
        let points = self
            .points
            .iter()
            .map(|pt| {
                let mut comps = pt.components.clone();
                let image = map.apply(comps[factor].coords())?;
                comps[factor] = ProjPoint::new(field, image)?;
                MultiPoint::new(&self.space, comps)
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(self.space.clone(), points)
    }
}

/// Per-factor bases of the projection spans, with the coordinate change
/// into hull coordinates.
#[derive(Debug, Clone)]
pub struct ConcisionHull {
    space: MultiprojectiveSpace,
    hull_dims: Vec<usize>,
    /// RREF basis rows of span(π_i(S)) inside each factor's K^{n_i+1}.
    bases: Vec<Vec<Vec<Scalar>>>,
}

impl ConcisionHull {
    pub fn hull_dims(&self) -> &[usize] {
        &self.hull_dims
    }

    pub fn basis(&self, factor: usize) -> &[Vec<Scalar>] {
        &self.bases[factor]
    }

    /// The hull as a space; degenerate factors are kept.
    pub fn hull_space(&self) -> Result<MultiprojectiveSpace> {
        MultiprojectiveSpace::new(self.hull_dims.clone(), self.space.field())
    }

    /// Shape of the hull (degenerate factors dropped, sorted descending).
    pub fn shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.hull_dims.iter().copied().filter(|&n| n > 0).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Width of the hull: factors with positive hull dimension.
    pub fn width(&self) -> usize {
        self.hull_dims.iter().filter(|&&n| n > 0).count()
    }

    /// Rewrites a set of the original space into hull coordinates. The
    /// rewritten set lives in the hull space (degenerate factors kept) and
    /// has the same defect and width.
    pub fn rewrite(&self, set: &PointSet) -> Result<PointSet> {
        if set.space() != &self.space {
            return Err(Error::FieldMismatch(
                "hull rewrite applied to a set from another space".into(),
            ));
        }
        let field = self.space.field();
        let hull = self.hull_space()?;
        let points = set
            .points()
            .iter()
            .map(|p| {
                let comps = p
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let coeffs = linalg::in_span(field, c.coords(), &self.bases[i])?
                            .ok_or_else(|| {
                                Error::InvalidPoint(
                                    "point leaves its own projection span".into(),
                                )
                            })?;
                        ProjPoint::new(field, coeffs)
                    })
                    .collect::<Result<Vec<_>>>()?;
                MultiPoint::new(&hull, comps)
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(hull, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn space(dims: &[usize], f: FieldSpec) -> MultiprojectiveSpace {
        MultiprojectiveSpace::new(dims.to_vec(), f).unwrap()
    }

    #[test]
    fn segre_dim_cube() {
        let y = space(&[1, 1, 1], gf(2));
        assert_eq!(y.segre_dim(), 7);
        let p = MultiPoint::from_ints(&y, &[&[1, 0], &[1, 0], &[1, 0]]).unwrap();
        assert_eq!(p.segre_embed(&y).unwrap().len(), 8);
    }

    #[test]
    fn embed_unit_vector() {
        let y = space(&[2, 1], gf(5));
        let p = MultiPoint::from_ints(&y, &[&[1, 0, 0], &[1, 0]]).unwrap();
        let v = p.segre_embed(&y).unwrap();
        assert!(v[0].is_one());
        assert!(v[1..].iter().all(Scalar::is_zero));
    }

    #[test]
    fn embed_kronecker_order() {
        let y = space(&[1, 1], gf(5));
        let p = MultiPoint::from_ints(&y, &[&[1, 1], &[1, 2]]).unwrap();
        let v = p.segre_embed(&y).unwrap();
        let f = gf(5);
        assert_eq!(
            v,
            vec![f.from_i64(1), f.from_i64(2), f.from_i64(1), f.from_i64(2)]
        );
    }

    #[test]
    fn normalization_and_dedup() {
        let y = space(&[1], gf(5));
        let a = MultiPoint::from_ints(&y, &[&[2, 4]]).unwrap(); // ~ (1,2)
        let b = MultiPoint::from_ints(&y, &[&[1, 2]]).unwrap();
        assert_eq!(a, b);
        let s = PointSet::new(y, vec![a, b]).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn proj_point_counts() {
        assert_eq!(enumerate_proj_points(1, gf(2)).len(), 3);
        assert_eq!(enumerate_proj_points(2, gf(2)).len(), 7);
        assert_eq!(enumerate_proj_points(1, gf(3)).len(), 4);
        assert_eq!(enumerate_proj_points(2, gf(3)).len(), 13);
        let y = space(&[1, 1], gf(2));
        assert_eq!(y.point_count(), Some(9));
        assert_eq!(y.enumerate_points().unwrap().len(), 9);
    }

    #[test]
    fn projections_of_singleton() {
        let y = space(&[1, 1, 2], gf(3));
        let p = MultiPoint::from_ints(&y, &[&[1, 0], &[1, 1], &[0, 1, 1]]).unwrap();
        let s = PointSet::new(y, vec![p]).unwrap();
        for i in 0..3 {
            assert_eq!(s.project_factor(i).unwrap().len(), 1);
        }
        assert_eq!(s.project_forget_one(0).unwrap().len(), 1);
        assert_eq!(s.width().unwrap(), 0);
        assert_eq!(s.concision_hull().unwrap().hull_dims(), &[0, 0, 0]);
    }

    #[test]
    fn forget_all_rejected() {
        let y = space(&[1, 1], gf(3));
        let p = MultiPoint::from_ints(&y, &[&[1, 0], &[1, 1]]).unwrap();
        let s = PointSet::new(y, vec![p]).unwrap();
        assert!(matches!(
            s.project_forget(&[0, 1]),
            Err(Error::InvalidProjection(_))
        ));
    }

    #[test]
    fn collinear_triple_rank_two() {
        // Three points varying on one line in factor 0, constant elsewhere.
        let y = space(&[1, 1, 1], gf(5));
        let pts: Vec<MultiPoint> = (0..3)
            .map(|t| MultiPoint::from_ints(&y, &[&[1, t], &[1, 0], &[1, 2]]).unwrap())
            .collect();
        let s = PointSet::new(y, pts).unwrap();
        assert_eq!(s.embed_matrix().unwrap().rank(), 2);
        assert_eq!(s.width().unwrap(), 1);
    }

    #[test]
    fn chosen_quadruple_is_independent() {
        // Expected rank computed by an independent row-reduction before the
        // build: 4 points of P^1 x P^1 over GF(3), rank 4.
        let y = space(&[1, 1], gf(3));
        let pts = vec![
            MultiPoint::from_ints(&y, &[&[1, 0], &[1, 0]]).unwrap(),
            MultiPoint::from_ints(&y, &[&[1, 1], &[1, 2]]).unwrap(),
            MultiPoint::from_ints(&y, &[&[1, 2], &[1, 1]]).unwrap(),
            MultiPoint::from_ints(&y, &[&[0, 1], &[1, 1]]).unwrap(),
        ];
        let s = PointSet::new(y, pts).unwrap();
        assert_eq!(s.embed_matrix().unwrap().rank(), 4);
    }

    #[test]
    fn two_disjoint_lines_rank_four_over_q() {
        // Expected rank computed by an independent row-reduction before the
        // build: 3 points on each of two disjoint Segre lines in (P^1)^3.
        let y = space(&[1, 1, 1], FieldSpec::Q);
        let mut pts = Vec::new();
        for x in 0..3 {
            pts.push(MultiPoint::from_ints(&y, &[&[1, x], &[1, 0], &[1, 0]]).unwrap());
            pts.push(MultiPoint::from_ints(&y, &[&[1, x], &[0, 1], &[1, 1]]).unwrap());
        }
        let s = PointSet::new(y, pts).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.embed_matrix().unwrap().rank(), 4);
    }

    #[test]
    fn hull_rewrite_preserves_rank_and_width() {
        // A set inside a sub-line of the P^2 factor.
        let y = space(&[2, 1], gf(5));
        let pts: Vec<MultiPoint> = (0..4)
            .map(|t| MultiPoint::from_ints(&y, &[&[1, t, 0], &[1, t % 2]]).unwrap())
            .collect();
        let s = PointSet::new(y.clone(), pts).unwrap();
        let hull = s.concision_hull().unwrap();
        assert_eq!(hull.hull_dims(), &[1, 1]);
        assert!(!s.is_concise().unwrap());
        let rewritten = hull.rewrite(&s).unwrap();
        assert_eq!(rewritten.space().factor_dims(), &[1, 1]);
        assert_eq!(
            rewritten.embed_matrix().unwrap().rank(),
            s.embed_matrix().unwrap().rank()
        );
        assert_eq!(rewritten.width().unwrap(), s.width().unwrap());
    }

    #[test]
    fn empty_width_rejected() {
        let y = space(&[1], gf(3));
        let s = PointSet::new(y, vec![]).unwrap();
        assert!(matches!(s.width(), Err(Error::EmptySet(_))));
    }
}
