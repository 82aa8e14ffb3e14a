//! JSON and DOT formats for complexes.
//!
//! JSON: `{"rank": k, "faces": [{"id", "rank", "vertices"}], "covers": [[low, high]]}`.
//! Face ids must be dense and rank-major, which is what [`to_json`] writes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, FaceId, IncidenceComplex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub rank: usize,
    pub faces: Vec<Face>,
    pub covers: Vec<[FaceId; 2]>,
}

impl ComplexDocument {
    pub fn from_complex(c: &IncidenceComplex) -> Self {
        ComplexDocument {
            rank: c.rank(),
            faces: c.faces().to_vec(),
            covers: c.covers().map(|(lo, hi)| [lo, hi]).collect(),
        }
    }

    /// Rebuilds the complex. The listed vertex sets must agree with the
    /// ones implied by the covers.
    pub fn into_complex(mut self) -> Result<IncidenceComplex> {
        self.faces.sort_by_key(|f| f.id);
        for (i, f) in self.faces.iter().enumerate() {
            if f.id != i {
                return Err(Error::MalformedPoset(format!("face ids are not dense: expected {i}, found {}", f.id)));
            }
        }
        if self.faces.windows(2).any(|w| w[0].rank > w[1].rank) {
            return Err(Error::MalformedPoset("face ids are not rank-major".into()));
        }
        let parts = self.faces.iter().map(|f| (f.rank, None)).collect();
        let covers = self.covers.iter().map(|&[lo, hi]| (lo, hi)).collect();
        let complex = IncidenceComplex::from_parts(self.rank, parts, covers)?;
        for f in &self.faces {
            if complex.face(f.id).vertices != f.vertices {
                return Err(Error::MalformedPoset(format!(
                    "face {} lists vertices {:?} but lies over {:?}",
                    f.id,
                    f.vertices,
                    complex.face(f.id).vertices
                )));
            }
        }
        Ok(complex)
    }
}

pub fn to_json(c: &IncidenceComplex) -> String {
    serde_json::to_string_pretty(&ComplexDocument::from_complex(c)).expect("plain data serializes")
}

pub fn from_json(text: &str) -> Result<IncidenceComplex> {
    let doc: ComplexDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_complex()
}

/// The Hasse diagram, bottom to top, one row per rank.
pub fn to_dot(c: &IncidenceComplex) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for r in -1..=c.rank() as i32 {
        let _ = write!(out, "  {{ rank=same;");
        for f in c.faces_of_rank(r) {
            let _ = write!(out, " f{f};");
        }
        out.push_str(" }\n");
    }
    for f in c.faces() {
        let label = if f.id == c.least() {
            "∅".to_string()
        } else if f.rank == 0 {
            format!("{}", f.vertices[0])
        } else if f.id == c.greatest() {
            "top".to_string()
        } else {
            let vs: Vec<String> = f.vertices.iter().map(u32::to_string).collect();
            vs.join(",")
        };
        let _ = writeln!(out, "  f{} [label=\"{label}\"];", f.id);
    }
    for (lo, hi) in c.covers() {
        let _ = writeln!(out, "  f{lo} -> f{hi};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::power::power_complex;
    use proptest::prelude::*;

    fn fixtures() -> Vec<IncidenceComplex> {
        vec![
            catalog::edge(3),
            catalog::polygon(5),
            catalog::simplex(3),
            catalog::cube(3),
            catalog::fano_plane(),
            catalog::moebius_kantor(),
            catalog::digon(),
            power_complex(2, &catalog::edge(3), 100).unwrap().into_complex(),
        ]
    }

    #[test]
    fn catalog_round_trips() {
        for c in fixtures() {
            let text = to_json(&c);
            assert_eq!(from_json(&text).unwrap(), c);
            assert_eq!(to_json(&from_json(&text).unwrap()), text);
        }
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let mut doc = ComplexDocument::from_complex(&catalog::polygon(3));
        doc.faces[4].vertices = vec![0, 2];
        assert!(matches!(doc.into_complex(), Err(Error::MalformedPoset(_))));
        let mut doc = ComplexDocument::from_complex(&catalog::polygon(3));
        doc.faces.pop();
        assert!(doc.into_complex().is_err());
        assert!(matches!(from_json("{\"rank\": 1}"), Err(Error::Parse(_))));
    }

    #[test]
    fn dot_has_every_cover() {
        let c = catalog::cube(3);
        let dot = to_dot(&c);
        assert_eq!(dot.matches(" -> ").count(), c.cover_count());
        assert_eq!(dot.matches("rank=same").count(), c.rank() + 2);
    }

    proptest! {
        #[test]
        fn round_trip_is_stable(which in 0usize..8, skeleton in 0i32..3, order in any::<u64>()) {
            let base = fixtures().swap_remove(which);
            let c = if skeleton < base.rank() as i32 { base.skeleton(skeleton).unwrap() } else { base };
            let mut doc = ComplexDocument::from_complex(&c);
            // Listing order of faces and covers does not matter.
            let n = doc.faces.len() as u64;
            doc.faces.rotate_left((order % n) as usize);
            doc.covers.reverse();
            let back = doc.into_complex().unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(to_json(&back), to_json(&c));
        }
    }
}
