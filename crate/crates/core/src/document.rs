//! The system document: the self-describing JSON input consumed by the CLI
//! and the C API. A document carries the field descriptor, the time group,
//! the transition matrix, and a seed; it is validated structurally before
//! any computation runs.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::rep::{Representation, TimeGroup};

/// JSON Schema for the system document format.
pub const SYSTEM_DOCUMENT_SCHEMA: &str = r##"{
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "SystemDocument",
  "type": "object",
  "required": ["field", "matrix"],
  "additionalProperties": false,
  "properties": {
    "field": {
      "oneOf": [
        {
          "type": "object",
          "required": ["kind", "p"],
          "properties": {
            "kind": {"const": "prime"},
            "p": {"type": "integer", "minimum": 2, "exclusiveMaximum": 2147483648}
          },
          "additionalProperties": false
        },
        {
          "type": "object",
          "required": ["kind", "p", "modulus"],
          "properties": {
            "kind": {"const": "extension"},
            "p": {"type": "integer", "minimum": 2},
            "modulus": {
              "type": "array",
              "items": {"type": "integer", "minimum": 0},
              "minItems": 2,
              "description": "monic irreducible over F_p, low-degree-first"
            }
          },
          "additionalProperties": false
        },
        {
          "type": "object",
          "required": ["kind"],
          "properties": {"kind": {"const": "rational"}},
          "additionalProperties": false
        }
      ]
    },
    "group": {
      "type": "object",
      "required": ["kind"],
      "properties": {
        "kind": {"enum": ["integers", "naturals", "cyclic"]},
        "T": {"type": "integer", "minimum": 1}
      },
      "additionalProperties": false,
      "default": {"kind": "integers"}
    },
    "matrix": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "array",
        "minItems": 1,
        "items": {
          "description": "canonical field element: residue integer (prime), coefficient array (extension), or integer / \"n/d\" string (rational)"
        }
      },
      "description": "square, row-major"
    },
    "seed": {"type": "integer", "minimum": 0, "default": 0}
  }
}"##;

/// A validated system description.
#[derive(Debug, Clone)]
pub struct SystemDocument {
    pub field: Field,
    pub group: TimeGroup,
    pub matrix: Matrix,
    pub seed: u64,
}

impl SystemDocument {
    /// Parse and validate a document from JSON text. Syntax errors carry
    /// serde's line/column diagnostics; structural errors name the field.
    pub fn parse_str(text: &str) -> Result<SystemDocument> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidDocument(format!("JSON syntax: {e}")))?;
        SystemDocument::from_json(&value)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SystemDocument> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidDocument("document must be a JSON object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "field" | "group" | "matrix" | "seed") {
                return Err(Error::InvalidDocument(format!(
                    "unknown key {key:?} (schema allows field, group, matrix, seed)"
                )));
            }
        }
        let field_val = obj
            .get("field")
            .ok_or_else(|| Error::InvalidDocument("missing required key \"field\"".into()))?;
        let field = Field::from_json(field_val)?;
        let group = match obj.get("group") {
            Some(g) => TimeGroup::from_json(g)?,
            None => TimeGroup::Integers,
        };
        let matrix_val = obj
            .get("matrix")
            .ok_or_else(|| Error::InvalidDocument("missing required key \"matrix\"".into()))?;
        let matrix = Matrix::from_json(&field, matrix_val)?;
        if !matrix.is_square() {
            return Err(Error::InvalidDocument(format!(
                "matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let seed = match obj.get("seed") {
            None => 0,
            Some(s) => s.as_u64().ok_or_else(|| {
                Error::InvalidDocument("seed must be a nonnegative 64-bit integer".into())
            })?,
        };
        Ok(SystemDocument {
            field,
            group,
            matrix,
            seed,
        })
    }

    /// Canonical JSON echo of the document.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field.to_json(),
            "group": self.group.to_json(),
            "matrix": self.matrix.to_json(),
            "seed": self.seed,
        })
    }

    /// Build the representation, enforcing the group/generator
    /// compatibility rules.
    pub fn representation(&self) -> Result<Representation> {
        Representation::new(self.group, self.matrix.clone())
    }
}

/// Parse a state vector for the document's field. Accepts a JSON array of
/// canonical element encodings (`[1,0]`, `["1/2","3"]`, `[[1,0],[0,1]]`)
/// or a comma-separated list for prime and rational fields (`1,0`).
pub fn parse_state(field: &Field, text: &str) -> Result<Vec<FieldElement>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let value: serde_json::Value = serde_json::from_str(trimmed)
            .map_err(|e| Error::InvalidElement(format!("state vector JSON: {e}")))?;
        let arr = value
            .as_array()
            .ok_or_else(|| Error::InvalidElement("state vector must be an array".into()))?;
        return arr.iter().map(|e| field.parse_element(e)).collect();
    }
    trimmed
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Ok(n) = tok.parse::<i64>() {
                return Ok(field.int(n));
            }
            field.parse_element(&serde_json::Value::String(tok.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_document() {
        let doc = SystemDocument::parse_str(
            r#"{"field": {"kind": "prime", "p": 2}, "matrix": [[1, 1], [1, 0]]}"#,
        )
        .unwrap();
        assert_eq!(doc.group, TimeGroup::Integers);
        assert_eq!(doc.seed, 0);
        assert_eq!(doc.matrix.rows(), 2);
        doc.representation().unwrap();
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(
            SystemDocument::parse_str("{"),
            Err(Error::InvalidDocument(_))
        ));
        assert!(matches!(
            SystemDocument::parse_str(r#"{"matrix": [[1]]}"#),
            Err(Error::InvalidDocument(_))
        ));
        // non-square
        assert!(matches!(
            SystemDocument::parse_str(
                r#"{"field": {"kind": "prime", "p": 5}, "matrix": [[1, 2, 3], [4, 5, 6]]}"#
            ),
            Err(Error::InvalidDocument(_))
        ));
        // unknown key
        assert!(matches!(
            SystemDocument::parse_str(
                r#"{"field": {"kind": "prime", "p": 5}, "matrix": [[1]], "extra": 1}"#
            ),
            Err(Error::InvalidDocument(_))
        ));
        // unknown group
        assert!(matches!(
            SystemDocument::parse_str(
                r#"{"field": {"kind": "prime", "p": 5}, "group": {"kind": "free"}, "matrix": [[1]]}"#
            ),
            Err(Error::UnsupportedGroup(_))
        ));
        // bad field element for the declared field
        assert!(matches!(
            SystemDocument::parse_str(
                r#"{"field": {"kind": "prime", "p": 5}, "matrix": [["1/2"]]}"#
            ),
            Err(Error::InvalidElement(_))
        ));
    }

    #[test]
    fn document_echo_is_canonical() {
        let text = r#"{"seed": 7, "matrix": [[1, 1], [1, 0]], "field": {"kind": "prime", "p": 2}}"#;
        let doc = SystemDocument::parse_str(text).unwrap();
        let echo = serde_json::to_string(&doc.to_json()).unwrap();
        assert_eq!(
            echo,
            r#"{"field":{"kind":"prime","p":2},"group":{"kind":"integers"},"matrix":[[1,1],[1,0]],"seed":7}"#
        );
    }

    #[test]
    fn parse_state_forms() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(
            parse_state(&f5, "1,0").unwrap(),
            vec![f5.int(1), f5.int(0)]
        );
        assert_eq!(
            parse_state(&f5, "[1, 4]").unwrap(),
            vec![f5.int(1), f5.int(4)]
        );
        let q = Field::rational();
        assert_eq!(
            parse_state(&q, "1/2, -3").unwrap(),
            vec![q.ratio(1, 2).unwrap(), q.int(-3)]
        );
        let f4 = Field::extension(2, vec![1, 1, 1]).unwrap();
        assert_eq!(
            parse_state(&f4, "[[1,0],[0,1]]").unwrap(),
            vec![f4.one(), f4.ext_generator().unwrap()]
        );
        assert!(parse_state(&f5, "[oops").is_err());
    }

    #[test]
    fn schema_constant_is_valid_json() {
        let v: serde_json::Value = serde_json::from_str(SYSTEM_DOCUMENT_SCHEMA).unwrap();
        assert_eq!(v["title"], "SystemDocument");
    }
}
