//! JSON form of a [`ManifoldSpec`].
//!
//! ```json
//! {
//!   "name": "cp1",
//!   "group": { "rank": 1, "gram": [[1]], "simple_roots": [] },
//!   "points": [
//!     { "id": "p0", "tangent": [[-1]], "moment": [[-1, 1]], "bundles": { "L": [[-1]] } }
//!   ],
//!   "zero_regular": true,
//!   "bundles": ["L"],
//!   "moment_bundle": "L"
//! }
//! ```
//!
//! Every number is an integer except the moment coordinates, which are
//! either integers or `[numerator, denominator]` pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FixedPointDatum, GeometryError, ManifoldSpec};
use crate::lattice_weyl::{Gram, Rational, RationalWeight, RootDatum, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub simple_roots: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MomentCoord {
    Integer(i64),
    Fraction([i64; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDocument {
    pub id: String,
    pub tangent: Vec<Vec<i64>>,
    pub moment: Vec<MomentCoord>,
    #[serde(default)]
    pub bundles: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default)]
    pub name: String,
    pub group: GroupDocument,
    pub points: Vec<PointDocument>,
    #[serde(default)]
    pub zero_regular: bool,
    /// Declared bundle names; when empty, the names used by the points.
    #[serde(default)]
    pub bundles: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_bundle: Option<String>,
}

fn weight(v: &[i64], rank: usize, field: impl FnOnce() -> String) -> Result<Weight, GeometryError> {
    if v.len() != rank {
        return Err(GeometryError::Parse(format!(
            "{}: expected {rank} coordinates, got {}",
            field(),
            v.len()
        )));
    }
    Ok(Weight::new(v.to_vec()))
}

impl SpecDocument {
    pub fn to_spec(&self) -> Result<ManifoldSpec, GeometryError> {
        let rank = self.group.rank;
        let simple = self
            .group
            .simple_roots
            .iter()
            .enumerate()
            .map(|(i, a)| weight(a, rank, || format!("group.simple_roots[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let datum = RootDatum::new(rank, Gram::new(self.group.gram.clone()), simple)?;
        let mut points = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            let tangent = p
                .tangent
                .iter()
                .enumerate()
                .map(|(j, a)| weight(a, rank, || format!("points[{i}] ({}).tangent[{j}]", p.id)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut bundles = BTreeMap::new();
            for (name, fibers) in &p.bundles {
                let f = fibers
                    .iter()
                    .enumerate()
                    .map(|(j, a)| {
                        weight(a, rank, || format!("points[{i}] ({}).bundles.{name}[{j}]", p.id))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                bundles.insert(name.clone(), f);
            }
            if p.moment.len() != rank {
                return Err(GeometryError::Parse(format!(
                    "points[{i}] ({}).moment: expected {rank} coordinates, got {}",
                    p.id,
                    p.moment.len()
                )));
            }
            let moment = p
                .moment
                .iter()
                .map(|c| match *c {
                    MomentCoord::Integer(n) => Ok(Rational::from_integer(n)),
                    MomentCoord::Fraction([_, 0]) => Err(GeometryError::Parse(format!(
                        "points[{i}] ({}).moment: zero denominator",
                        p.id
                    ))),
                    MomentCoord::Fraction([n, d]) => Ok(Rational::new(n, d)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            points.push(FixedPointDatum {
                id: p.id.clone(),
                tangent,
                bundles,
                moment: RationalWeight::new(moment),
            });
        }
        let bundle_names = if self.bundles.is_empty() {
            let mut names: Vec<String> = points
                .iter()
                .flat_map(|p| p.bundles.keys().cloned())
                .collect();
            names.sort();
            names.dedup();
            names
        } else {
            self.bundles.clone()
        };
        Ok(ManifoldSpec {
            name: self.name.clone(),
            datum,
            points,
            bundle_names,
            zero_regular: self.zero_regular,
            moment_bundle: self.moment_bundle.clone(),
        })
    }

    pub fn from_spec(spec: &ManifoldSpec) -> Self {
        let coords = |w: &Weight| w.coords().to_vec();
        SpecDocument {
            name: spec.name.clone(),
            group: GroupDocument {
                rank: spec.rank(),
                gram: spec.gram().rows().to_vec(),
                simple_roots: spec.datum.simple_roots().iter().map(coords).collect(),
            },
            points: spec
                .points
                .iter()
                .map(|p| PointDocument {
                    id: p.id.clone(),
                    tangent: p.tangent.iter().map(coords).collect(),
                    moment: p
                        .moment
                        .coords()
                        .iter()
                        .map(|c| {
                            if c.is_integer() {
                                MomentCoord::Integer(*c.numer())
                            } else {
                                MomentCoord::Fraction([*c.numer(), *c.denom()])
                            }
                        })
                        .collect(),
                    bundles: p
                        .bundles
                        .iter()
                        .map(|(k, v)| (k.clone(), v.iter().map(coords).collect()))
                        .collect(),
                })
                .collect(),
            zero_regular: spec.zero_regular,
            bundles: spec.bundle_names.clone(),
            moment_bundle: spec.moment_bundle.clone(),
        }
    }
}

/// Parses a spec document. Syntax errors carry the line and column.
pub fn from_json(text: &str) -> Result<ManifoldSpec, GeometryError> {
    let doc: SpecDocument =
        serde_json::from_str(text).map_err(|e| GeometryError::Parse(e.to_string()))?;
    doc.to_spec()
}

/// Pretty-printed document; weights and other arrays of scalars stay on one
/// line.
pub fn to_json(spec: &ManifoldSpec) -> String {
    let value = serde_json::to_value(SpecDocument::from_spec(spec)).expect("spec documents always serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(is_flat) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(x, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_flag_manifold, make_projective_space};

    #[test]
    fn round_trip() {
        let specs = [
            make_projective_space(&[Weight::new(vec![0]), Weight::new(vec![1])], 2, &Weight::new(vec![-1]))
                .unwrap(),
            make_flag_manifold(&RootDatum::a2(), &Weight::new(vec![1, 1])).unwrap(),
        ];
        for spec in specs {
            assert_eq!(from_json(&to_json(&spec)).unwrap(), spec);
        }
    }

    #[test]
    fn rational_moments() {
        let text = r#"{
            "group": {"rank": 1, "gram": [[1]]},
            "points": [
                {"id": "a", "tangent": [[1]], "moment": [[1, 2]], "bundles": {"O": [[0]]}},
                {"id": "b", "tangent": [[-1]], "moment": [-3], "bundles": {"O": [[0]]}}
            ],
            "zero_regular": true
        }"#;
        let spec = from_json(text).unwrap();
        assert_eq!(spec.points[0].moment, RationalWeight::new(vec![Rational::new(1, 2)]));
        assert_eq!(spec.bundle_names, vec!["O".to_string()]);
        assert!(to_json(&spec).contains(r#""moment": [[1, 2]]"#), "{}", to_json(&spec));
    }

    #[test]
    fn errors_carry_locations() {
        let err = from_json("{\"group\": {\"rank\": 1, \"gram\": [[1]]},\n \"points\": 3}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = from_json(
            r#"{"group": {"rank": 1, "gram": [[1]]},
                "points": [{"id": "q", "tangent": [[1, 2]], "moment": [0]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("points[0] (q).tangent[0]"), "{err}");
        let err = from_json(
            r#"{"group": {"rank": 1, "gram": [[1]]},
                "points": [{"id": "q", "tangent": [[1]], "moment": [[1, 0]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("zero denominator"));
        assert!(matches!(
            from_json(r#"{"group": {"rank": 1, "gram": [[0]]}, "points": []}"#),
            Err(GeometryError::Lattice(_))
        ));
    }
}
