//! JSON domain files.
//!
//! ```json
//! {
//!   "schemaVersion": 1,
//!   "kind": "monomial",
//!   "constraints": [
//!     { "alpha": [{"a": "1", "b": "0", "d": 1}, {"a": "1", "b": "1", "d": 2}],
//!       "lowerLog": null, "upperLog": {"a": "0", "b": "0", "d": 1} }
//!   ],
//!   "axes": { "z1": false, "z2": false }
//! }
//! ```
//!
//! Quadratic values must already be canonical: `d` squarefree, and every
//! irrational value in one file shares the same `d`.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{DomainDesc, DomainShape, MonomialConstraint, Violation};
use crate::exact_arith::{format_rat, parse_rat, squarefree_split, QuadExt, Rat};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadJson {
    pub a: String,
    pub b: String,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ConstraintJson {
    pub alpha: [QuadJson; 2],
    #[serde(default)]
    pub lower_log: Option<QuadJson>,
    #[serde(default)]
    pub upper_log: Option<QuadJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxesJson {
    pub z1: bool,
    pub z2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicJson {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Monomial,
    Parabolic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DomainFile {
    pub schema_version: u32,
    pub kind: DomainKind,
    #[serde(default)]
    pub constraints: Vec<ConstraintJson>,
    pub axes: AxesJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parabolic: Option<ParabolicJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid value at {path}: {message}")]
    Value { path: String, message: String },
    #[error("invalid domain: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

fn value_error(path: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError::Value {
        path: path.into(),
        message: message.into(),
    }
}

fn parse_rational(text: &str, path: &str) -> Result<Rat, SchemaError> {
    parse_rat(text)
        .ok_or_else(|| value_error(path, format!("{text:?} is not a rational \"num/den\"")))
}

/// Reads a canonical quadratic value, recording its field in `field`.
fn parse_quad(q: &QuadJson, path: &str, field: &mut Option<u64>) -> Result<QuadExt, SchemaError> {
    let a = parse_rational(&q.a, &format!("{path}.a"))?;
    let b = parse_rational(&q.b, &format!("{path}.b"))?;
    if q.d == 0 {
        return Err(value_error(format!("{path}.d"), "d must be positive"));
    }
    let (_, free) = squarefree_split(&BigUint::from(q.d));
    if free != BigUint::from(q.d) {
        return Err(value_error(format!("{path}.d"), "d must be squarefree"));
    }
    if b == Rat::from_integer(0.into()) {
        return Ok(QuadExt::from_rat(a));
    }
    if q.d == 1 {
        return Err(value_error(
            format!("{path}.d"),
            "d must exceed 1 when b is nonzero",
        ));
    }
    match field {
        Some(d) if *d != q.d => {
            return Err(value_error(
                format!("{path}.d"),
                format!("mixes Q(sqrt {d}) with Q(sqrt {})", q.d),
            ));
        }
        _ => *field = Some(q.d),
    }
    QuadExt::from_canonical_parts(a, b, q.d).ok_or_else(|| value_error(path, "not canonical"))
}

pub fn quad_to_json(value: &QuadExt) -> QuadJson {
    QuadJson {
        a: format_rat(value.a()),
        b: format_rat(value.b()),
        d: value.d(),
    }
}

impl DomainFile {
    pub fn to_desc(&self) -> Result<DomainDesc, SchemaError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(value_error(
                "schemaVersion",
                format!("unsupported version {}", self.schema_version),
            ));
        }
        let desc = match self.kind {
            DomainKind::Monomial => {
                if self.parabolic.is_some() {
                    return Err(value_error(
                        "parabolic",
                        "only allowed when kind is \"parabolic\"",
                    ));
                }
                let mut field = None;
                let mut constraints = Vec::with_capacity(self.constraints.len());
                for (i, c) in self.constraints.iter().enumerate() {
                    let path = format!("constraints[{i}]");
                    let a1 = parse_quad(&c.alpha[0], &format!("{path}.alpha[0]"), &mut field)?;
                    let a2 = parse_quad(&c.alpha[1], &format!("{path}.alpha[1]"), &mut field)?;
                    let lower = c
                        .lower_log
                        .as_ref()
                        .map(|q| parse_quad(q, &format!("{path}.lowerLog"), &mut field))
                        .transpose()?;
                    let upper = c
                        .upper_log
                        .as_ref()
                        .map(|q| parse_quad(q, &format!("{path}.upperLog"), &mut field))
                        .transpose()?;
                    constraints.push(MonomialConstraint::new(a1, a2, lower, upper));
                }
                DomainDesc::polyhedron(constraints, self.axes.z1, self.axes.z2)
            }
            DomainKind::Parabolic => {
                if !self.constraints.is_empty() {
                    return Err(value_error(
                        "constraints",
                        "must be empty when kind is \"parabolic\"",
                    ));
                }
                let p = self
                    .parabolic
                    .as_ref()
                    .ok_or_else(|| value_error("parabolic", "missing coefficients"))?;
                if self.axes.z2 {
                    return Err(SchemaError::Validation(vec![Violation::ParabolicAxis2]));
                }
                DomainDesc::parabolic(
                    parse_rational(&p.a, "parabolic.a")?,
                    parse_rational(&p.b, "parabolic.b")?,
                    parse_rational(&p.c, "parabolic.c")?,
                    self.axes.z1,
                )
            }
        };
        desc.validate().map_err(SchemaError::Validation)?;
        Ok(desc)
    }

    pub fn from_desc(desc: &DomainDesc) -> DomainFile {
        let axes = AxesJson {
            z1: desc.axis(1),
            z2: desc.axis(2),
        };
        match &desc.shape {
            DomainShape::MonomialPolyhedron { constraints } => DomainFile {
                schema_version: SCHEMA_VERSION,
                kind: DomainKind::Monomial,
                constraints: constraints
                    .iter()
                    .map(|c| ConstraintJson {
                        alpha: [quad_to_json(&c.alpha1), quad_to_json(&c.alpha2)],
                        lower_log: c.lower.as_ref().map(quad_to_json),
                        upper_log: c.upper.as_ref().map(quad_to_json),
                    })
                    .collect(),
                axes,
                parabolic: None,
            },
            DomainShape::Parabolic { a, b, c } => DomainFile {
                schema_version: SCHEMA_VERSION,
                kind: DomainKind::Parabolic,
                constraints: vec![],
                axes,
                parabolic: Some(ParabolicJson {
                    a: format_rat(a),
                    b: format_rat(b),
                    c: format_rat(c),
                }),
            },
        }
    }
}

/// Strict parse: unknown fields are rejected, errors name the JSON path and position.
pub fn parse_domain_file(bytes: &[u8]) -> Result<DomainDesc, SchemaError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let file: DomainFile =
        serde_path_to_error::deserialize(&mut de).map_err(|e| SchemaError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    de.end().map_err(|e| SchemaError::Parse {
        path: ".".into(),
        message: e.to_string(),
    })?;
    file.to_desc()
}

pub fn write_domain_file(desc: &DomainDesc) -> String {
    serde_json::to_string_pretty(&DomainFile::from_desc(desc))
        .expect("domain files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::tests::{d1, polydisc, q, s2};
    use crate::exact_arith::rat_int;

    const POLYDISC: &str = r#"{
        "schemaVersion": 1, "kind": "monomial",
        "constraints": [
            {"alpha": [{"a": "1", "b": "0", "d": 1}, {"a": "0", "b": "0", "d": 1}], "lowerLog": null, "upperLog": {"a": "0", "b": "0", "d": 1}},
            {"alpha": [{"a": "0", "b": "0", "d": 1}, {"a": "1", "b": "0", "d": 1}], "upperLog": {"a": "0", "b": "0", "d": 1}}
        ],
        "axes": {"z1": true, "z2": true}
    }"#;

    #[test]
    fn parses_polydisc() {
        let desc = parse_domain_file(POLYDISC.as_bytes()).unwrap();
        assert!(desc.same_domain(&polydisc()).unwrap());
    }

    #[test]
    fn rejects_non_squarefree() {
        let text = POLYDISC.replacen(
            r#""b": "0", "d": 1}, {"a": "0""#,
            r#""b": "1", "d": 8}, {"a": "0""#,
            1,
        );
        let err = parse_domain_file(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("d must be squarefree"), "{err}");
    }

    #[test]
    fn rejects_unknown_fields_with_path() {
        let text = POLYDISC.replace(r#""z2": true"#, r#""z2": true, "z3": false"#);
        match parse_domain_file(text.as_bytes()).unwrap_err() {
            SchemaError::Parse { path, message } => {
                assert_eq!(path, "axes.z3");
                assert!(
                    message.contains("z3") && message.contains("line"),
                    "{message}"
                );
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn convex_parabola_fails_validation() {
        let text = r#"{"schemaVersion": 1, "kind": "parabolic", "axes": {"z1": true, "z2": false},
                       "parabolic": {"a": "1/1", "b": "0", "c": "0"}}"#;
        assert!(matches!(
            parse_domain_file(text.as_bytes()),
            Err(SchemaError::Validation(_))
        ));
    }

    #[test]
    fn round_trips() {
        let strip = DomainDesc::polyhedron(
            vec![MonomialConstraint::below(q(1), &q(1) + &s2(), q(0))],
            false,
            false,
        );
        let para = DomainDesc::parabolic(rat_int(-1), rat_int(0), rat_int(2), true);
        for desc in [polydisc(), d1(), strip, para] {
            let back = parse_domain_file(write_domain_file(&desc).as_bytes()).unwrap();
            assert_eq!(back, desc);
        }
    }

    #[test]
    fn one_field_per_file() {
        let s3 = QuadExt::sqrt(3).unwrap();
        let desc = DomainDesc::polyhedron(
            vec![
                MonomialConstraint::below(q(1), s2(), q(0)),
                MonomialConstraint::below(q(1), s3, q(1)),
            ],
            false,
            false,
        );
        let err = parse_domain_file(write_domain_file(&desc).as_bytes()).unwrap_err();
        assert!(err.to_string().contains("mixes"), "{err}");
    }
}
