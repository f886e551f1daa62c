//! The JSON interchange format for point sets:
//!
//! ```json
//! {"field":{"kind":"GF","p":3},
//!  "space":[1,1,2],
//!  "points":[[["1","0"],["1","1"],["0","1","1"]]]}
//! ```
//!
//! Coordinates are decimal or fraction strings; the reader normalizes and
//! deduplicates, the writer always emits canonical representatives in the
//! set's deterministic order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::FieldSpec;
use crate::multiproj::{MultiPoint, MultiprojectiveSpace, PointSet, ProjPoint};

/// Serialized form of a point set.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointSetDoc {
    pub field: FieldSpec,
    pub space: Vec<usize>,
    pub points: Vec<Vec<Vec<String>>>,
}

impl PointSetDoc {
    pub fn from_set(set: &PointSet) -> Self {
        PointSetDoc {
            field: set.space().field(),
            space: set.space().factor_dims().to_vec(),
            points: set
                .points()
                .iter()
                .map(|p| {
                    p.components()
                        .iter()
                        .map(|c| c.coords().iter().map(|s| s.to_display_string()).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Validates, normalizes and deduplicates into a `PointSet`.
    pub fn into_set(&self) -> Result<PointSet> {
        let space = MultiprojectiveSpace::new(self.space.clone(), self.field)?;
        let mut points = Vec::with_capacity(self.points.len());
        for (pi, raw) in self.points.iter().enumerate() {
            if raw.len() != space.factors() {
                return Err(Error::Schema(format!(
                    "point {pi}: expected {} components, got {}",
                    space.factors(),
                    raw.len()
                )));
            }
            let comps = raw
                .iter()
                .enumerate()
                .map(|(ci, coords)| {
                    if coords.len() != self.space[ci] + 1 {
                        return Err(Error::Schema(format!(
                            "point {pi} component {ci}: expected {} coordinates, got {}",
                            self.space[ci] + 1,
                            coords.len()
                        )));
                    }
                    let scalars = coords
                        .iter()
                        .map(|s| self.field.parse(s))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| Error::Schema(format!("point {pi} component {ci}: {e}")))?;
                    ProjPoint::new(self.field, scalars)
                        .map_err(|e| Error::Schema(format!("point {pi} component {ci}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            points.push(MultiPoint::new(&space, comps)?);
        }
        PointSet::new(space, points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("doc serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("doc serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_canonicalizes() {
        let doc = PointSetDoc::from_json(
            r#"{"field":{"kind":"GF","p":3},
                "space":[1,1,2],
                "points":[[["2","0"],["1","1"],["0","2","2"]],
                          [["1","0"],["1","1"],["0","1","1"]]]}"#,
        )
        .unwrap();
        let set = doc.into_set().unwrap();
        // The two points coincide after normalization.
        assert_eq!(set.len(), 1);
        let out = PointSetDoc::from_set(&set);
        assert_eq!(out.points[0][0], vec!["1", "0"]);
        assert_eq!(out.points[0][2], vec!["0", "1", "1"]);
        // Writer output re-reads to the identical set.
        let again = PointSetDoc::from_json(&out.to_json())
            .unwrap()
            .into_set()
            .unwrap();
        assert_eq!(again, set);
    }

    #[test]
    fn rational_fractions() {
        let doc = PointSetDoc::from_json(
            r#"{"field":{"kind":"Q"},"space":[1],"points":[[["-3/6","1"]]]}"#,
        )
        .unwrap();
        let set = doc.into_set().unwrap();
        let out = PointSetDoc::from_set(&set);
        // Normalized: leading coordinate scaled to 1.
        assert_eq!(out.points[0][0], vec!["1", "-2"]);
    }

    #[test]
    fn schema_violations() {
        // Wrong coordinate count.
        let doc = PointSetDoc::from_json(
            r#"{"field":{"kind":"GF","p":3},"space":[1],"points":[[["1","0","0"]]]}"#,
        )
        .unwrap();
        assert!(matches!(doc.into_set(), Err(Error::Schema(_))));
        // Zero point.
        let doc = PointSetDoc::from_json(
            r#"{"field":{"kind":"GF","p":3},"space":[1],"points":[[["0","0"]]]}"#,
        )
        .unwrap();
        assert!(doc.into_set().is_err());
        // Bad field.
        assert!(PointSetDoc::from_json(
            r#"{"field":{"kind":"GF","p":9},"space":[1],"points":[]}"#
        )
        .is_err());
    }
}
