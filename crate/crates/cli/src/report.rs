//! Canonical JSON reports.
//!
//! Object keys are sorted (serde_json's default map is ordered), scalars are
//! exact strings and cochains are listed over named basis cochains, so two
//! runs of one command on one input differ only in `timing_ms`.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use supercohom_core::cochain::{Cochain, CochainSpace};
use supercohom_core::{Field, GModule, SparseVector, SuperAlgebra};

use crate::error::{CliError, Result};
use crate::spec_file::FamilySpec;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex SHA-256 of an input file.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub algebra: Value,
    pub field: String,
    pub parameters: Value,
    pub results: Value,
    pub timing_ms: u64,
}

impl Report {
    pub fn to_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("algebra".into(), self.algebra.clone());
        map.insert("command".into(), Value::String(self.command.clone()));
        map.insert("field".into(), Value::String(self.field.clone()));
        map.insert("parameters".into(), self.parameters.clone());
        map.insert("results".into(), self.results.clone());
        map.insert("timing_ms".into(), Value::from(self.timing_ms));
        map.insert("tool_version".into(), Value::String(TOOL_VERSION.into()));
        Value::Object(map)
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("JSON values serialise");
        s.push('\n');
        s
    }
}

/// Writes `text` to `path`, or to stdout for `None` and `-`.
pub fn emit_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source })
        }
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn emit_report(report: &Report, path: Option<&Path>) -> Result<()> {
    emit_text(&report.to_canonical_string(), path)
}

/// Family and parameters when known, plus the hash of the input file.
pub fn algebra_descriptor<F: Field>(g: &SuperAlgebra<F>, sha256: Option<&str>) -> Value {
    let mut v = json!({
        "label": g.label(),
        "even_dim": g.even_dim(),
        "odd_dim": g.odd_dim(),
    });
    if let Some(f) = g.family() {
        v["family"] = serde_json::to_value(FamilySpec::from(f)).expect("family serialises");
    }
    if let Some(h) = sha256 {
        v["input_sha256"] = Value::String(h.into());
    }
    v
}

pub fn scalar<F: Field>(field: &F, c: &F::Elem) -> String {
    field.to_scalar(c).to_string()
}

/// `[{"basis": "X1", "coeff": "2"}, ...]`.
pub fn element<F: Field>(g: &SuperAlgebra<F>, v: &SparseVector<F::Elem>) -> Value {
    Value::Array(v.entries().iter().map(|(i, c)| json!({"basis": g.name(*i), "coeff": scalar(g.field(), c)})).collect())
}

/// `[{"cochain": "X1^Y3 -> Y1", "coeff": "1"}, ...]`.
pub fn cochain<F: Field>(g: &SuperAlgebra<F>, module: &GModule<F>, c: &Cochain<F>) -> Value {
    let space = CochainSpace::new(g, module, c.degree()).expect("cochain degree fits its algebra");
    Value::Array(
        c.coefficients()
            .entries()
            .iter()
            .map(|(i, v)| json!({"cochain": space.element(*i).name(g, module), "coeff": scalar(g.field(), v)}))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use supercohom_core::families::solvable_model_filiform;
    use supercohom_core::{PrimeField, Rationals};

    use super::*;

    #[test]
    fn scalars_are_exact_strings() {
        let q = Rationals;
        assert_eq!(scalar(&q, &q.from_ratio(&(-3).into(), &2.into()).unwrap()), "-3/2");
        assert_eq!(scalar(&q, &q.from_i64(4)), "4");
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(scalar(&f5, &f5.from_i64(-3)), "2 mod 5");
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn canonical_keys_are_sorted() {
        let g = solvable_model_filiform(&Rationals, 3, 2).unwrap();
        let r = Report {
            command: "validate".into(),
            algebra: algebra_descriptor(&g, None),
            field: "Q".into(),
            parameters: json!({"z": 1, "a": 2}),
            results: json!({}),
            timing_ms: 0,
        };
        let text = r.to_canonical_string();
        assert!(text.find("\"a\"").unwrap() < text.find("\"z\"").unwrap());
        assert!(text.find("\"command\"").unwrap() < text.find("\"tool_version\"").unwrap());
        assert_eq!(r.to_value()["algebra"]["family"], json!({"kind": "SL", "n": 3, "m": 2}));
    }
}
