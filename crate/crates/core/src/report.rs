//! Report assembly shared by the CLI and the C API: every command produces
//! canonical JSON (sorted keys, no insignificant whitespace, canonical
//! element encodings) plus a deterministic human-readable rendering.

use crate::canonical;
use crate::decomp;
use crate::document::SystemDocument;
use crate::dynamics;
use crate::error::{Error, Result};
use crate::factor;
use crate::field::FieldElement;
use crate::poly::Polynomial;
use crate::prng::Prng;
use crate::rep::DEFAULT_HOM_TRIALS;
use crate::smith;

/// Knobs shared by the reporting entry points.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Sample count for homomorphism-style property suites.
    pub trials: u32,
    /// Guard on the orbit-census state count.
    pub max_states: u64,
    /// Worker count for orbit enumeration.
    pub workers: usize,
    /// Overrides the document seed when present.
    pub seed_override: Option<u64>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            trials: DEFAULT_HOM_TRIALS,
            max_states: dynamics::DEFAULT_MAX_STATES,
            workers: 1,
            seed_override: None,
        }
    }
}

impl AnalysisOptions {
    fn seed_for(&self, doc: &SystemDocument) -> u64 {
        self.seed_override.unwrap_or(doc.seed)
    }
}

/// A finished report: canonical JSON plus its text rendering.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub json: serde_json::Value,
    pub text: String,
}

/// JSON Schema for the emitted reports, one definition per command.
pub const REPORT_SCHEMA: &str = r##"{
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "SysrepReports",
  "$defs": {
    "element": {
      "oneOf": [
        {"type": "integer"},
        {"type": "string"},
        {"type": "array", "items": {"type": "integer"}}
      ]
    },
    "vector": {"type": "array", "items": {"$ref": "#/$defs/element"}},
    "polynomial": {"type": "array", "items": {"$ref": "#/$defs/element"}},
    "matrix": {"type": "array", "items": {"$ref": "#/$defs/vector"}, "minItems": 1},
    "skipped": {
      "type": "object",
      "required": ["skipped"],
      "properties": {"skipped": {"type": "string"}},
      "additionalProperties": false
    },
    "factorization": {
      "type": "object",
      "required": ["unit", "factors"],
      "properties": {
        "unit": {"$ref": "#/$defs/element"},
        "factors": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["poly", "multiplicity"],
            "properties": {
              "poly": {"$ref": "#/$defs/polynomial"},
              "multiplicity": {"type": "integer", "minimum": 1}
            },
            "additionalProperties": false
          }
        }
      },
      "additionalProperties": false
    },
    "primary_component": {
      "type": "object",
      "required": ["factor", "multiplicity", "dimension", "basis", "projector"],
      "properties": {
        "factor": {"$ref": "#/$defs/polynomial"},
        "multiplicity": {"type": "integer", "minimum": 1},
        "dimension": {"type": "integer", "minimum": 0},
        "basis": {"type": "array", "items": {"$ref": "#/$defs/vector"}},
        "projector": {"$ref": "#/$defs/matrix"}
      },
      "additionalProperties": false
    },
    "planar_block": {
      "type": "object",
      "required": ["factor", "a", "b", "form", "basis"],
      "properties": {
        "factor": {"$ref": "#/$defs/polynomial"},
        "a": {"$ref": "#/$defs/element"},
        "b": {"oneOf": [{"$ref": "#/$defs/element"}, {"type": "null"}]},
        "form": {"enum": ["rotation", "companion"]},
        "basis": {"type": "array", "items": {"$ref": "#/$defs/vector"}, "minItems": 2, "maxItems": 2}
      },
      "additionalProperties": false
    },
    "invariant_factors": {
      "type": "object",
      "required": ["invariant_factors", "generators", "P", "C"],
      "properties": {
        "invariant_factors": {"type": "array", "items": {"$ref": "#/$defs/polynomial"}},
        "generators": {"type": "array", "items": {"$ref": "#/$defs/vector"}},
        "P": {"$ref": "#/$defs/matrix"},
        "C": {"$ref": "#/$defs/matrix"}
      },
      "additionalProperties": false
    },
    "period": {
      "type": "object",
      "required": ["T", "factors", "lcm_of_orders", "all_divide"],
      "properties": {
        "T": {"type": "integer", "minimum": 1},
        "factors": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["factor", "order", "divides"],
            "properties": {
              "factor": {"$ref": "#/$defs/polynomial"},
              "order": {"type": "integer", "minimum": 1},
              "divides": {"type": "boolean"}
            },
            "additionalProperties": false
          }
        },
        "lcm_of_orders": {"type": "integer", "minimum": 1},
        "all_divide": {"type": "boolean"}
      },
      "additionalProperties": false
    },
    "census": {
      "type": "object",
      "required": ["states", "T", "cycles", "fixed_points"],
      "properties": {
        "states": {"type": "string"},
        "T": {"type": "integer", "minimum": 1},
        "cycles": {"type": "object", "additionalProperties": {"type": "string"}},
        "fixed_points": {"type": "object", "additionalProperties": {"type": "string"}}
      },
      "additionalProperties": false
    },
    "homomorphism_check": {
      "type": "object",
      "required": ["trials", "pass", "counterexample"],
      "properties": {
        "trials": {"type": "integer", "minimum": 1},
        "pass": {"type": "boolean"},
        "counterexample": {
          "oneOf": [
            {"type": "null"},
            {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}
          ]
        }
      },
      "additionalProperties": false
    },
    "analyze": {
      "type": "object",
      "required": ["input", "seed", "minimal_polynomial", "characteristic_polynomial",
                   "factorization", "primary_components", "planar_blocks",
                   "invariant_factors", "period", "orbit_census", "homomorphism_check"],
      "properties": {
        "input": {"type": "object"},
        "seed": {"type": "integer"},
        "minimal_polynomial": {"$ref": "#/$defs/polynomial"},
        "characteristic_polynomial": {"$ref": "#/$defs/polynomial"},
        "factorization": {"$ref": "#/$defs/factorization"},
        "primary_components": {"type": "array", "items": {"$ref": "#/$defs/primary_component"}},
        "planar_blocks": {
          "oneOf": [
            {"type": "array", "items": {"$ref": "#/$defs/planar_block"}},
            {"$ref": "#/$defs/skipped"}
          ]
        },
        "invariant_factors": {"$ref": "#/$defs/invariant_factors"},
        "period": {"oneOf": [{"$ref": "#/$defs/period"}, {"$ref": "#/$defs/skipped"}]},
        "orbit_census": {"oneOf": [{"$ref": "#/$defs/census"}, {"$ref": "#/$defs/skipped"}]},
        "homomorphism_check": {"$ref": "#/$defs/homomorphism_check"}
      },
      "additionalProperties": false
    },
    "factors": {
      "type": "object",
      "required": ["input", "seed", "minimal_polynomial", "characteristic_polynomial",
                   "factorization", "characteristic_factorization"],
      "additionalProperties": false,
      "properties": {
        "input": {"type": "object"},
        "seed": {"type": "integer"},
        "minimal_polynomial": {"$ref": "#/$defs/polynomial"},
        "characteristic_polynomial": {"$ref": "#/$defs/polynomial"},
        "factorization": {"$ref": "#/$defs/factorization"},
        "characteristic_factorization": {"$ref": "#/$defs/factorization"}
      }
    },
    "decompose": {
      "type": "object",
      "required": ["input", "seed", "primary_components", "invariant_factors"],
      "additionalProperties": false,
      "properties": {
        "input": {"type": "object"},
        "seed": {"type": "integer"},
        "primary_components": {"type": "array", "items": {"$ref": "#/$defs/primary_component"}},
        "invariant_factors": {"$ref": "#/$defs/invariant_factors"}
      }
    },
    "orbits": {
      "type": "object",
      "required": ["input", "census", "enumeration"],
      "additionalProperties": false,
      "properties": {
        "input": {"type": "object"},
        "census": {"$ref": "#/$defs/census"},
        "enumeration": {"oneOf": [{"const": "verified"}, {"$ref": "#/$defs/skipped"}]}
      }
    },
    "simulate": {
      "type": "object",
      "required": ["input", "x0", "steps", "trajectory"],
      "additionalProperties": false,
      "properties": {
        "input": {"type": "object"},
        "x0": {"$ref": "#/$defs/vector"},
        "steps": {"type": "integer"},
        "trajectory": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["t", "state"],
            "properties": {
              "t": {"type": "integer"},
              "t_mod": {"type": "integer", "minimum": 0},
              "state": {"$ref": "#/$defs/vector"}
            },
            "additionalProperties": false
          }
        }
      }
    },
    "verify": {
      "type": "object",
      "required": ["input", "seed", "suites", "pass"],
      "additionalProperties": false,
      "properties": {
        "input": {"type": "object"},
        "seed": {"type": "integer"},
        "pass": {"type": "boolean"},
        "suites": {
          "type": "array",
          "items": {
            "type": "object",
            "required": ["name", "status", "detail"],
            "properties": {
              "name": {"type": "string"},
              "status": {"enum": ["pass", "fail", "skipped"]},
              "detail": {"oneOf": [{"type": "string"}, {"type": "null"}]}
            },
            "additionalProperties": false
          }
        }
      }
    }
  }
}"##;

/// The report family a JSON document claims to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Analyze,
    Factors,
    Decompose,
    Orbits,
    Simulate,
    Verify,
}

/// Structural validation of an emitted report against the shapes fixed by
/// [`REPORT_SCHEMA`]: required keys, no unknown keys, and value shapes.
pub fn validate_report(kind: ReportKind, v: &serde_json::Value) -> std::result::Result<(), String> {
    let obj = v.as_object().ok_or("report must be an object")?;
    let check_keys = |required: &[&str]| -> std::result::Result<(), String> {
        for k in required {
            if !obj.contains_key(*k) {
                return Err(format!("missing key {k:?}"));
            }
        }
        for k in obj.keys() {
            if !required.contains(&k.as_str()) {
                return Err(format!("unknown key {k:?}"));
            }
        }
        Ok(())
    };
    match kind {
        ReportKind::Analyze => {
            check_keys(&[
                "input",
                "seed",
                "minimal_polynomial",
                "characteristic_polynomial",
                "factorization",
                "primary_components",
                "planar_blocks",
                "invariant_factors",
                "period",
                "orbit_census",
                "homomorphism_check",
            ])?;
            expect_poly(&obj["minimal_polynomial"])?;
            expect_poly(&obj["characteristic_polynomial"])?;
            expect_factorization(&obj["factorization"])?;
            for c in expect_array(&obj["primary_components"])? {
                expect_keys(c, &["factor", "multiplicity", "dimension", "basis", "projector"])?;
            }
            if obj["planar_blocks"].is_array() {
                for b in expect_array(&obj["planar_blocks"])? {
                    expect_keys(b, &["factor", "a", "b", "form", "basis"])?;
                }
            } else {
                expect_skipped(&obj["planar_blocks"])?;
            }
            expect_keys(&obj["invariant_factors"], &["invariant_factors", "generators", "P", "C"])?;
            if obj["period"].get("skipped").is_none() {
                expect_keys(&obj["period"], &["T", "factors", "lcm_of_orders", "all_divide"])?;
            }
            if obj["orbit_census"].get("skipped").is_none() {
                expect_census(&obj["orbit_census"])?;
            }
            expect_keys(&obj["homomorphism_check"], &["trials", "pass", "counterexample"])?;
        }
        ReportKind::Factors => {
            check_keys(&[
                "input",
                "seed",
                "minimal_polynomial",
                "characteristic_polynomial",
                "factorization",
                "characteristic_factorization",
            ])?;
            expect_poly(&obj["minimal_polynomial"])?;
            expect_poly(&obj["characteristic_polynomial"])?;
            expect_factorization(&obj["factorization"])?;
            expect_factorization(&obj["characteristic_factorization"])?;
        }
        ReportKind::Decompose => {
            check_keys(&["input", "seed", "primary_components", "invariant_factors"])?;
            for c in expect_array(&obj["primary_components"])? {
                expect_keys(c, &["factor", "multiplicity", "dimension", "basis", "projector"])?;
            }
            expect_keys(&obj["invariant_factors"], &["invariant_factors", "generators", "P", "C"])?;
        }
        ReportKind::Orbits => {
            check_keys(&["input", "census", "enumeration"])?;
            expect_census(&obj["census"])?;
            let e = &obj["enumeration"];
            if e != "verified" {
                expect_skipped(e)?;
            }
        }
        ReportKind::Simulate => {
            check_keys(&["input", "x0", "steps", "trajectory"])?;
            for row in expect_array(&obj["trajectory"])? {
                let r = row.as_object().ok_or("trajectory row must be an object")?;
                if !r.contains_key("t") || !r.contains_key("state") {
                    return Err("trajectory row needs t and state".into());
                }
            }
        }
        ReportKind::Verify => {
            check_keys(&["input", "seed", "suites", "pass"])?;
            for s in expect_array(&obj["suites"])? {
                expect_keys(s, &["name", "status", "detail"])?;
                let status = s["status"].as_str().ok_or("suite status must be a string")?;
                if !matches!(status, "pass" | "fail" | "skipped") {
                    return Err(format!("bad suite status {status:?}"));
                }
            }
        }
    }
    Ok(())
}

fn expect_array(v: &serde_json::Value) -> std::result::Result<&Vec<serde_json::Value>, String> {
    v.as_array().ok_or_else(|| format!("expected an array, got {v}"))
}

fn expect_keys(v: &serde_json::Value, keys: &[&str]) -> std::result::Result<(), String> {
    let obj = v.as_object().ok_or_else(|| format!("expected an object, got {v}"))?;
    for k in keys {
        if !obj.contains_key(*k) {
            return Err(format!("missing key {k:?} in {v}"));
        }
    }
    for k in obj.keys() {
        if !keys.contains(&k.as_str()) {
            return Err(format!("unknown key {k:?} in {v}"));
        }
    }
    Ok(())
}

fn expect_element(v: &serde_json::Value) -> std::result::Result<(), String> {
    let ok = v.is_i64()
        || v.is_u64()
        || v.is_string()
        || v.as_array().is_some_and(|a| a.iter().all(|c| c.is_u64()));
    if ok {
        Ok(())
    } else {
        Err(format!("bad element encoding {v}"))
    }
}

fn expect_poly(v: &serde_json::Value) -> std::result::Result<(), String> {
    for c in expect_array(v)? {
        expect_element(c)?;
    }
    Ok(())
}

fn expect_factorization(v: &serde_json::Value) -> std::result::Result<(), String> {
    expect_keys(v, &["unit", "factors"])?;
    expect_element(&v["unit"])?;
    for f in expect_array(&v["factors"])? {
        expect_keys(f, &["poly", "multiplicity"])?;
        expect_poly(&f["poly"])?;
    }
    Ok(())
}

fn expect_census(v: &serde_json::Value) -> std::result::Result<(), String> {
    expect_keys(v, &["states", "T", "cycles", "fixed_points"])?;
    for key in ["cycles", "fixed_points"] {
        let map = v[key]
            .as_object()
            .ok_or_else(|| format!("{key} must be an object"))?;
        for (k, count) in map {
            k.parse::<u64>().map_err(|_| format!("bad {key} key {k:?}"))?;
            count
                .as_str()
                .and_then(|s| s.parse::<num_bigint::BigUint>().ok())
                .ok_or_else(|| format!("bad {key} count {count}"))?;
        }
    }
    Ok(())
}

fn expect_skipped(v: &serde_json::Value) -> std::result::Result<(), String> {
    expect_keys(v, &["skipped"])?;
    v["skipped"]
        .as_str()
        .map(|_| ())
        .ok_or_else(|| "skipped marker must carry a string".into())
}

/// Serialize canonically: sorted keys, compact separators.
pub fn canonical_string(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("JSON value serializes")
}

fn states_within(q: u64, n: usize, cap: u64) -> bool {
    let mut total: u128 = 1;
    for _ in 0..n {
        total *= q as u128;
        if total > cap as u128 {
            return false;
        }
    }
    true
}

fn system_line(doc: &SystemDocument) -> String {
    format!(
        "system: field {}, group {}, dimension {}, seed {}",
        doc.field,
        doc.group,
        doc.matrix.rows(),
        doc.seed
    )
}

fn factorization_line(fac: &factor::Factorization) -> String {
    if fac.factors.is_empty() {
        return format!("unit {}", fac.unit);
    }
    let parts: Vec<String> = fac
        .factors
        .iter()
        .map(|(g, e)| {
            if *e == 1 {
                format!("({g})")
            } else {
                format!("({g})^{e}")
            }
        })
        .collect();
    if fac.unit.is_one() {
        parts.join(" ")
    } else {
        format!("{} * {}", fac.unit, parts.join(" "))
    }
}

/// Full analysis: polynomials, factorization, decompositions, and the
/// finite-field extras (period, divisibility, orbit census) when they
/// apply.
pub fn analyze(doc: &SystemDocument, opts: &AnalysisOptions) -> Result<Rendered> {
    let rep = doc.representation()?;
    let seed = opts.seed_for(doc);
    let a = &doc.matrix;
    let field = &doc.field;

    let minimal = a.minimal_polynomial()?;
    let characteristic = smith::characteristic_polynomial(a)?;
    let fac = factor::factor(&minimal, seed)?;
    let components = decomp::primary_decomposition(a, seed)?;
    let dec = canonical::invariant_factors(a, seed)?;
    let hom = rep.check_homomorphism(opts.trials, seed);

    let mut text = String::new();
    text.push_str(&system_line(doc));
    text.push('\n');
    text.push_str(&format!("minimal polynomial: {minimal}\n"));
    text.push_str(&format!("characteristic polynomial: {characteristic}\n"));
    text.push_str(&format!("factorization: {}\n", factorization_line(&fac)));

    text.push_str(&format!("primary components ({}):\n", components.len()));
    for c in &components {
        text.push_str(&format!(
            "  factor {}  multiplicity {}  dimension {}\n",
            c.factor,
            c.multiplicity,
            c.dimension()
        ));
    }

    let planar_json;
    if field.characteristic() == 2 {
        planar_json = serde_json::json!({"skipped": "characteristic two has no rotation form"});
        text.push_str("planar blocks: skipped (characteristic two)\n");
    } else {
        let blocks = decomp::planar_blocks(a, seed)?;
        text.push_str(&format!("planar blocks ({}):\n", blocks.len()));
        for b in &blocks {
            match &b.b {
                Some(bv) => text.push_str(&format!(
                    "  factor {}  rotation a={} b={}\n",
                    b.factor, b.a, bv
                )),
                None => text.push_str(&format!("  factor {}  companion a={}\n", b.factor, b.a)),
            }
        }
        planar_json =
            serde_json::Value::Array(blocks.iter().map(decomp::PlanarBlock::to_json).collect());
    }

    let chain: Vec<String> = dec.factors.iter().map(|f| f.to_string()).collect();
    text.push_str(&format!("invariant factors: {}\n", chain.join(" | ")));

    let finite_invertible = field.is_finite() && a.inverse().is_ok();
    let period_json;
    let census_json;
    if finite_invertible {
        let t = dynamics::order_of_matrix(a)?;
        let div = canonical::verify_period_divisibility(&dec, t)?;
        text.push_str(&format!(
            "period: T = {t}; every invariant factor divides x^T - 1: {}\n",
            div.all_divide
        ));
        period_json = div.to_json();
        let q = field.order().unwrap();
        if states_within(q, a.rows(), opts.max_states) {
            let census = dynamics::orbit_census_analytic(a)?;
            let cyc: Vec<String> = census
                .cycle_counts
                .iter()
                .map(|(len, count)| format!("{len} x{count}"))
                .collect();
            text.push_str(&format!(
                "orbit census: states {}; cycles: {}\n",
                census.states,
                cyc.join(", ")
            ));
            census_json = census.to_json();
        } else {
            census_json = serde_json::json!({
                "skipped": format!("state count exceeds the guard of {} states", opts.max_states)
            });
            text.push_str(&format!(
                "orbit census: skipped (state count exceeds {} states)\n",
                opts.max_states
            ));
        }
    } else {
        let reason = if field.is_finite() {
            "generator is singular"
        } else {
            "field is not finite"
        };
        period_json = serde_json::json!({"skipped": reason});
        census_json = serde_json::json!({"skipped": reason});
        text.push_str(&format!("period: skipped ({reason})\n"));
        text.push_str(&format!("orbit census: skipped ({reason})\n"));
    }

    text.push_str(&format!(
        "homomorphism check: {} ({} trials)\n",
        if hom.pass { "pass" } else { "FAIL" },
        hom.trials
    ));

    let json = serde_json::json!({
        "input": doc.to_json(),
        "seed": seed,
        "minimal_polynomial": minimal.to_json(),
        "characteristic_polynomial": characteristic.to_json(),
        "factorization": fac.to_json(),
        "primary_components": components
            .iter()
            .map(decomp::PrimaryComponent::to_json)
            .collect::<Vec<_>>(),
        "planar_blocks": planar_json,
        "invariant_factors": dec.to_json(),
        "period": period_json,
        "orbit_census": census_json,
        "homomorphism_check": {
            "trials": hom.trials,
            "pass": hom.pass,
            "counterexample": hom.counterexample
                .map(|(t1, t2)| serde_json::json!([t1, t2]))
                .unwrap_or(serde_json::Value::Null),
        },
    });
    Ok(Rendered { json, text })
}

/// Factorization-only view: minimal and characteristic polynomials with
/// their factorizations.
pub fn factors_report(doc: &SystemDocument, opts: &AnalysisOptions) -> Result<Rendered> {
    doc.representation()?;
    let seed = opts.seed_for(doc);
    let minimal = doc.matrix.minimal_polynomial()?;
    let characteristic = smith::characteristic_polynomial(&doc.matrix)?;
    let min_fac = factor::factor(&minimal, seed)?;
    let char_fac = factor::factor(&characteristic, seed)?;
    let text = format!(
        "{}\nminimal polynomial: {}\n  factorization: {}\ncharacteristic polynomial: {}\n  factorization: {}\n",
        system_line(doc),
        minimal,
        factorization_line(&min_fac),
        characteristic,
        factorization_line(&char_fac),
    );
    let json = serde_json::json!({
        "input": doc.to_json(),
        "seed": seed,
        "minimal_polynomial": minimal.to_json(),
        "characteristic_polynomial": characteristic.to_json(),
        "factorization": min_fac.to_json(),
        "characteristic_factorization": char_fac.to_json(),
    });
    Ok(Rendered { json, text })
}

/// Primary decomposition and invariant factors only.
pub fn decompose_report(doc: &SystemDocument, opts: &AnalysisOptions) -> Result<Rendered> {
    doc.representation()?;
    let seed = opts.seed_for(doc);
    let components = decomp::primary_decomposition(&doc.matrix, seed)?;
    let dec = canonical::invariant_factors(&doc.matrix, seed)?;
    let mut text = String::new();
    text.push_str(&system_line(doc));
    text.push('\n');
    text.push_str(&format!("primary components ({}):\n", components.len()));
    for c in &components {
        text.push_str(&format!(
            "  factor {}  multiplicity {}  dimension {}\n",
            c.factor,
            c.multiplicity,
            c.dimension()
        ));
    }
    let chain: Vec<String> = dec.factors.iter().map(|f| f.to_string()).collect();
    text.push_str(&format!("invariant factors: {}\n", chain.join(" | ")));
    let json = serde_json::json!({
        "input": doc.to_json(),
        "seed": seed,
        "primary_components": components
            .iter()
            .map(decomp::PrimaryComponent::to_json)
            .collect::<Vec<_>>(),
        "invariant_factors": dec.to_json(),
    });
    Ok(Rendered { json, text })
}

/// Orbit census: the analytic census, cross-checked against enumeration
/// when the state count is within the guard.
pub fn orbits_report(doc: &SystemDocument, opts: &AnalysisOptions) -> Result<Rendered> {
    doc.representation()?;
    let a = &doc.matrix;
    let census = dynamics::orbit_census_analytic(a)?;
    let q = doc.field.order().unwrap();
    let enumeration_json;
    let enumeration_line;
    if states_within(q, a.rows(), opts.max_states) {
        let enumerated = dynamics::orbit_census_enumerate(a, opts.max_states, opts.workers)?;
        assert_eq!(
            enumerated, census,
            "analytic and enumerated censuses must agree"
        );
        enumeration_json = serde_json::json!("verified");
        enumeration_line = "enumeration: verified".to_string();
    } else {
        enumeration_json = serde_json::json!({
            "skipped": format!("state count exceeds the guard of {} states", opts.max_states)
        });
        enumeration_line = format!(
            "enumeration: skipped (state count exceeds {} states)",
            opts.max_states
        );
    }
    let cyc: Vec<String> = census
        .cycle_counts
        .iter()
        .map(|(len, count)| format!("{len} x{count}"))
        .collect();
    let fixed: Vec<String> = census
        .fixed_point_counts
        .iter()
        .map(|(d, count)| format!("d={d}: {count}"))
        .collect();
    let text = format!(
        "{}\nT = {}\nstates = {}\ncycles: {}\nfixed points: {}\n{}\n",
        system_line(doc),
        census.period,
        census.states,
        cyc.join(", "),
        fixed.join(", "),
        enumeration_line,
    );
    let json = serde_json::json!({
        "input": doc.to_json(),
        "census": census.to_json(),
        "enumeration": enumeration_json,
    });
    Ok(Rendered { json, text })
}

/// Trajectory listing for `t` from 0 to `steps` (negative steps walk
/// backwards and require an invertible group).
pub fn simulate_report(
    doc: &SystemDocument,
    x0: &[FieldElement],
    steps: i64,
) -> Result<Rendered> {
    let rep = doc.representation()?;
    let mut rows = Vec::new();
    let mut text = String::new();
    text.push_str(&system_line(doc));
    text.push('\n');
    let count = steps.unsigned_abs();
    let dir: i64 = if steps < 0 { -1 } else { 1 };
    let mut state = x0.to_vec();
    if state.len() != doc.matrix.rows() {
        return Err(Error::DimensionMismatch(format!(
            "x0 has length {}, expected {}",
            state.len(),
            doc.matrix.rows()
        )));
    }
    let stepper = if dir >= 0 {
        doc.matrix.clone()
    } else {
        // semigroup time cannot run backwards
        rep.rho(-1)?
    };
    for k in 0..=count {
        let t = dir * k as i64;
        let state_json =
            serde_json::Value::Array(state.iter().map(FieldElement::to_json).collect());
        let shown: Vec<String> = state.iter().map(|e| e.to_string()).collect();
        match rep.group() {
            crate::rep::TimeGroup::CyclicMod(tm) => {
                let m = tm as i128;
                let red = ((t as i128 % m) + m) % m;
                rows.push(serde_json::json!({"t": t, "t_mod": red as u64, "state": state_json}));
                text.push_str(&format!("t={t} [t mod {tm} = {red}] x=({})\n", shown.join(", ")));
            }
            _ => {
                rows.push(serde_json::json!({"t": t, "state": state_json}));
                text.push_str(&format!("t={t} x=({})\n", shown.join(", ")));
            }
        }
        if k < count {
            state = stepper.matvec(&state);
        }
    }
    let json = serde_json::json!({
        "input": doc.to_json(),
        "x0": serde_json::Value::Array(x0.iter().map(FieldElement::to_json).collect()),
        "steps": steps,
        "trajectory": rows,
    });
    Ok(Rendered { json, text })
}

struct Suite {
    name: &'static str,
    status: &'static str,
    detail: Option<String>,
}

impl Suite {
    fn pass(name: &'static str) -> Suite {
        Suite {
            name,
            status: "pass",
            detail: None,
        }
    }

    fn fail(name: &'static str, detail: String) -> Suite {
        Suite {
            name,
            status: "fail",
            detail: Some(detail),
        }
    }

    fn skipped(name: &'static str, detail: String) -> Suite {
        Suite {
            name,
            status: "skipped",
            detail: Some(detail),
        }
    }
}

/// Property verification: homomorphism and algebra-homomorphism laws,
/// projector algebra, direct sums, divisibility chains, census
/// equivalence, and optionally a byte-level regression check against a
/// stored analysis report. Returns the report and the overall verdict.
pub fn verify_report(
    doc: &SystemDocument,
    opts: &AnalysisOptions,
    expected_analysis: Option<&str>,
) -> Result<(Rendered, bool)> {
    let rep = doc.representation()?;
    let seed = opts.seed_for(doc);
    let a = &doc.matrix;
    let field = &doc.field;
    let mut suites: Vec<Suite> = Vec::new();

    // 1. homomorphism law
    let hom = rep.check_homomorphism(opts.trials, seed);
    suites.push(if hom.pass {
        Suite::pass("homomorphism")
    } else {
        Suite::fail(
            "homomorphism",
            format!("counterexample (t1, t2) = {:?}", hom.counterexample.unwrap()),
        )
    });

    // 2. polynomial action is an algebra homomorphism
    suites.push(algebra_homomorphism_suite(&rep, seed));

    // 3. projector algebra and direct sum
    suites.push(projector_suite(a, seed)?);

    // 4. invariant factor chain
    suites.push(divisibility_chain_suite(a, seed)?);

    // 5. period and x^T - 1 divisibility
    let finite_invertible = field.is_finite() && a.inverse().is_ok();
    if finite_invertible {
        let t = dynamics::order_of_matrix(a)?;
        let dec = canonical::invariant_factors(a, seed)?;
        let div = canonical::verify_period_divisibility(&dec, t)?;
        suites.push(if div.all_divide {
            Suite::pass("period_divisibility")
        } else {
            Suite::fail(
                "period_divisibility",
                format!("report: {}", canonical_string(&div.to_json())),
            )
        });
    } else {
        suites.push(Suite::skipped(
            "period_divisibility",
            "needs a finite field and an invertible generator".into(),
        ));
    }

    // 6. census equivalence
    if finite_invertible {
        let q = field.order().unwrap();
        if states_within(q, a.rows(), opts.max_states) {
            let analytic = dynamics::orbit_census_analytic(a)?;
            let enumerated = dynamics::orbit_census_enumerate(a, opts.max_states, opts.workers)?;
            suites.push(if analytic == enumerated {
                Suite::pass("census_equivalence")
            } else {
                Suite::fail(
                    "census_equivalence",
                    format!(
                        "analytic {} vs enumerated {}",
                        canonical_string(&analytic.to_json()),
                        canonical_string(&enumerated.to_json())
                    ),
                )
            });
        } else {
            suites.push(Suite::skipped(
                "census_equivalence",
                format!("state count exceeds the guard of {} states", opts.max_states),
            ));
        }
    } else {
        suites.push(Suite::skipped(
            "census_equivalence",
            "needs a finite field and an invertible generator".into(),
        ));
    }

    // 7. regression against a stored report
    if let Some(expected) = expected_analysis {
        let actual = canonical_string(&analyze(doc, opts)?.json);
        let expected_trim = expected.trim_end_matches('\n');
        suites.push(if actual == expected_trim {
            Suite::pass("regression")
        } else {
            Suite::fail(
                "regression",
                "stored analysis report differs from the recomputed one".into(),
            )
        });
    }

    let pass = suites.iter().all(|s| s.status != "fail");
    let mut text = String::new();
    text.push_str(&system_line(doc));
    text.push('\n');
    for s in &suites {
        match &s.detail {
            Some(d) => text.push_str(&format!("{}: {} ({})\n", s.name, s.status, d)),
            None => text.push_str(&format!("{}: {}\n", s.name, s.status)),
        }
    }
    text.push_str(&format!("overall: {}\n", if pass { "pass" } else { "FAIL" }));
    let json = serde_json::json!({
        "input": doc.to_json(),
        "seed": seed,
        "suites": suites
            .iter()
            .map(|s| {
                serde_json::json!({
                    "name": s.name,
                    "status": s.status,
                    "detail": s.detail.clone().map(serde_json::Value::String)
                        .unwrap_or(serde_json::Value::Null),
                })
            })
            .collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok((Rendered { json, text }, pass))
}

fn algebra_homomorphism_suite(rep: &crate::rep::Representation, seed: u64) -> Suite {
    let field = rep.field().clone();
    let n = rep.dim();
    let mut rng = Prng::new(seed ^ 0xa19e_b7a0);
    let random_poly = |rng: &mut Prng| {
        let d = rng.below(7) as usize;
        Polynomial::from_coeffs(
            &field,
            (0..=d).map(|_| random_element(&field, rng)).collect(),
        )
    };
    for _ in 0..64 {
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        let v: Vec<FieldElement> = (0..n).map(|_| random_element(&field, &mut rng)).collect();
        let prod = rep.poly_action(&(&f * &g), &v).unwrap();
        let nested = rep
            .poly_action(&f, &rep.poly_action(&g, &v).unwrap())
            .unwrap();
        if prod != nested {
            return Suite::fail(
                "algebra_homomorphism",
                format!("(fg) action differs from composed action for f = {f}, g = {g}"),
            );
        }
        let sum = rep.poly_action(&(&f + &g), &v).unwrap();
        let split: Vec<FieldElement> = rep
            .poly_action(&f, &v)
            .unwrap()
            .iter()
            .zip(&rep.poly_action(&g, &v).unwrap())
            .map(|(a, b)| a + b)
            .collect();
        if sum != split {
            return Suite::fail(
                "algebra_homomorphism",
                format!("(f+g) action differs from summed actions for f = {f}, g = {g}"),
            );
        }
    }
    Suite::pass("algebra_homomorphism")
}

fn random_element(field: &crate::field::Field, rng: &mut Prng) -> FieldElement {
    match field.order() {
        Some(q) => field.element_from_index(rng.below(q)).unwrap(),
        None => field.int(rng.range_i64(-9, 9)),
    }
}

fn projector_suite(a: &crate::matrix::Matrix, seed: u64) -> Result<Suite> {
    let comps = decomp::primary_decomposition(a, seed)?;
    let field = a.field();
    let n = a.rows();
    let mut sum = crate::matrix::Matrix::zero(field, n, n);
    for c in &comps {
        if (&c.projector * &c.projector) != c.projector {
            return Ok(Suite::fail(
                "projectors",
                format!("projector of {} is not idempotent", c.factor),
            ));
        }
        if (a * &c.projector) != (&c.projector * a) {
            return Ok(Suite::fail(
                "projectors",
                format!("projector of {} does not commute with A", c.factor),
            ));
        }
        sum = &sum + &c.projector;
    }
    if !sum.is_identity() {
        return Ok(Suite::fail(
            "projectors",
            "projectors do not sum to the identity".into(),
        ));
    }
    for (i, ci) in comps.iter().enumerate() {
        for (j, cj) in comps.iter().enumerate() {
            if i != j && !(&ci.projector * &cj.projector).is_zero() {
                return Ok(Suite::fail(
                    "projectors",
                    format!(
                        "projectors of {} and {} are not orthogonal",
                        ci.factor, cj.factor
                    ),
                ));
            }
        }
    }
    let total: usize = comps.iter().map(decomp::PrimaryComponent::dimension).sum();
    if total != n {
        return Ok(Suite::fail(
            "projectors",
            format!("component dimensions sum to {total}, expected {n}"),
        ));
    }
    Ok(Suite::pass("projectors"))
}

fn divisibility_chain_suite(a: &crate::matrix::Matrix, seed: u64) -> Result<Suite> {
    let dec = canonical::invariant_factors(a, seed)?;
    for w in dec.factors.windows(2) {
        if !w[0].divides(&w[1]) {
            return Ok(Suite::fail(
                "divisibility_chain",
                format!("{} does not divide {}", w[0], w[1]),
            ));
        }
    }
    let char_poly = smith::characteristic_polynomial(a)?;
    let prod = dec
        .factors
        .iter()
        .fold(Polynomial::one(a.field()), |acc, f| &acc * f);
    if prod != char_poly {
        return Ok(Suite::fail(
            "divisibility_chain",
            "product of invariant factors is not the characteristic polynomial".into(),
        ));
    }
    if dec.factors.last() != Some(&a.minimal_polynomial()?) {
        return Ok(Suite::fail(
            "divisibility_chain",
            "largest invariant factor is not the minimal polynomial".into(),
        ));
    }
    Ok(Suite::pass("divisibility_chain"))
}
