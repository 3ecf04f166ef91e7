//! JSON algebra description files.
//!
//! ```json
//! {
//!   "field": "Q",
//!   "even_basis": ["X1", "X2", "T1"],
//!   "odd_basis": ["Y1"],
//!   "brackets": [
//!     {"left": "T1", "right": "X1", "result": [{"basis": "X1", "coeff": "1"}]}
//!   ],
//!   "family": {"kind": "SL", "n": 2, "m": 1}
//! }
//! ```
//!
//! The field is `"Q"` or `{"Fp": p}`. Coefficients are integers or strings
//! holding an integer or a fraction `a/b`. Unlisted brackets are zero; only
//! one orientation of each pair may be given with a conflicting value.

use std::fmt;

use serde::{Deserialize, Serialize};
use supercohom_core::families::{model_filiform, model_nilpotent, solvable_model_filiform, solvable_model_nilpotent};
use supercohom_core::field::parse_ratio;
use supercohom_core::{Family, Field, PrimeField, Rationals, SuperAlgebra, SuperAlgebraBuilder};

use crate::any::AnyAlgebra;
use crate::error::{CliError, Result};
use crate::with_algebra;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpecFile {
    pub field: FieldSpec,
    pub even_basis: Vec<String>,
    pub odd_basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub result: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub basis: String,
    pub coeff: CoeffSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Integer(i64),
    Text(String),
}

/// Optional record of the constructor an algebra came from. When present the
/// file is rebuilt from the constructor and compared constant by constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FamilySpec {
    L { n: usize, m: usize },
    SL { n: usize, m: usize },
    N { ns: Vec<usize>, ms: Vec<usize> },
    SN { ns: Vec<usize>, ms: Vec<usize> },
}

impl From<&Family> for FamilySpec {
    fn from(f: &Family) -> Self {
        match f {
            Family::ModelFiliform { n, m } => FamilySpec::L { n: *n, m: *m },
            Family::SolvableModelFiliform { n, m } => FamilySpec::SL { n: *n, m: *m },
            Family::ModelNilpotent { ns, ms } => FamilySpec::N { ns: ns.clone(), ms: ms.clone() },
            Family::SolvableModelNilpotent { ns, ms } => FamilySpec::SN { ns: ns.clone(), ms: ms.clone() },
        }
    }
}

impl FamilySpec {
    pub fn build<F: Field>(&self, field: &F) -> Result<SuperAlgebra<F>> {
        Ok(match self {
            FamilySpec::L { n, m } => model_filiform(field, *n, *m)?,
            FamilySpec::SL { n, m } => solvable_model_filiform(field, *n, *m)?,
            FamilySpec::N { ns, ms } => model_nilpotent(field, ns, ms)?,
            FamilySpec::SN { ns, ms } => solvable_model_nilpotent(field, ns, ms)?,
        })
    }

    pub fn build_any(&self, field: &FieldSpec) -> Result<AnyAlgebra> {
        Ok(match field.resolve()? {
            None => AnyAlgebra::Rational(self.build(&Rationals)?),
            Some(p) => AnyAlgebra::Prime(self.build(&prime_field(p)?)?),
        })
    }
}

impl fmt::Display for CoeffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffSpec::Integer(n) => write!(f, "{n}"),
            CoeffSpec::Text(t) => write!(f, "{t:?}"),
        }
    }
}

fn prime_field(p: u64) -> Result<PrimeField> {
    PrimeField::new(p).map_err(|e| CliError::Usage(format!("field: {e}")))
}

impl FieldSpec {
    /// `None` for ℚ, `Some(p)` for 𝔽_p.
    pub fn resolve(&self) -> Result<Option<u64>> {
        match self {
            FieldSpec::Named(s) if s == "Q" => Ok(None),
            FieldSpec::Named(s) => match s.strip_prefix("Fp:").map(str::parse::<u64>) {
                Some(Ok(p)) => Ok(Some(p)),
                _ => Err(CliError::Usage(format!("unknown field {s:?}; expected \"Q\" or {{\"Fp\": p}}"))),
            },
            FieldSpec::Prime { fp } => Ok(Some(*fp)),
        }
    }

    pub fn parse_cli(text: &str) -> Result<FieldSpec> {
        let spec = match text.trim() {
            "Q" | "q" => FieldSpec::Named("Q".into()),
            other => {
                let digits = other.strip_prefix("Fp:").or_else(|| other.strip_prefix("F")).unwrap_or(other);
                let p = digits.parse().map_err(|_| CliError::Usage(format!("unknown field {other:?}")))?;
                FieldSpec::Prime { fp: p }
            }
        };
        spec.resolve()?;
        Ok(spec)
    }
}

impl CoeffSpec {
    fn value<F: Field>(&self, field: &F) -> Option<F::Elem> {
        match self {
            CoeffSpec::Integer(v) => Some(field.from_i64(*v)),
            CoeffSpec::Text(s) => {
                let (n, d) = parse_ratio(s)?;
                field.from_ratio(&n, &d)
            }
        }
    }
}

/// Parses and builds an algebra without running the Jacobi check.
pub fn parse_unvalidated(text: &str) -> Result<AnyAlgebra> {
    let spec: AlgebraSpecFile = serde_json::from_str(text).map_err(|e| {
        CliError::Usage(format!("line {} column {}: {}", e.line(), e.column(), strip_position(&e.to_string())))
    })?;
    spec.build()
}

/// Parses, builds and validates an algebra file.
pub fn parse(text: &str) -> Result<AnyAlgebra> {
    let any = parse_unvalidated(text)?;
    let failure = with_algebra!(&any, g => describe_failure(g));
    match failure {
        Some(msg) => Err(CliError::Math(msg)),
        None => Ok(any),
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Human-readable first axiom violation, if any.
pub fn describe_failure<F: Field>(g: &SuperAlgebra<F>) -> Option<String> {
    let report = g.validate();
    if let Some((i, j, k)) = report.parity {
        return Some(format!("[{}, {}] has a component on {} of the wrong parity", g.name(i), g.name(j), g.name(k)));
    }
    if let Some((i, j)) = report.antisymmetry {
        return Some(format!("[{}, {}] violates super-antisymmetry", g.name(i), g.name(j)));
    }
    report
        .jacobi
        .map(|(i, j, k)| format!("graded Jacobi identity fails on ({}, {}, {})", g.name(i), g.name(j), g.name(k)))
}

impl AlgebraSpecFile {
    pub fn build(&self) -> Result<AnyAlgebra> {
        let any = match self.field.resolve()? {
            None => AnyAlgebra::Rational(self.build_over(&Rationals)?),
            Some(p) => AnyAlgebra::Prime(self.build_over(&prime_field(p)?)?),
        };
        if let Some(family) = &self.family {
            let expected = family.build_any(&self.field)?;
            let same = match (&any, &expected) {
                (AnyAlgebra::Rational(a), AnyAlgebra::Rational(b)) => same_algebra(a, b),
                (AnyAlgebra::Prime(a), AnyAlgebra::Prime(b)) => same_algebra(a, b),
                _ => false,
            };
            if !same {
                return Err(CliError::Usage(format!(
                    "family metadata says {} but the listed brackets differ from that constructor",
                    expected.label()
                )));
            }
            return Ok(expected);
        }
        Ok(any)
    }

    fn build_over<F: Field>(&self, field: &F) -> Result<SuperAlgebra<F>> {
        let mut builder = SuperAlgebraBuilder::new(field, &self.even_basis, &self.odd_basis)?;
        let names: Vec<&String> = self.even_basis.iter().chain(&self.odd_basis).collect();
        let lookup = |name: &str, at: &str| {
            names
                .iter()
                .position(|n| n.as_str() == name)
                .ok_or_else(|| CliError::Usage(format!("{at}: unknown basis element {name:?}")))
        };
        for (b, br) in self.brackets.iter().enumerate() {
            let i = lookup(&br.left, &format!("brackets[{b}].left"))?;
            let j = lookup(&br.right, &format!("brackets[{b}].right"))?;
            let mut result = Vec::with_capacity(br.result.len());
            for (t, term) in br.result.iter().enumerate() {
                let at = format!("brackets[{b}].result[{t}]");
                let k = lookup(&term.basis, &format!("{at}.basis"))?;
                let c = term
                    .coeff
                    .value(field)
                    .ok_or_else(|| CliError::Usage(format!("{at}.coeff: {} is not a valid scalar", term.coeff)))?;
                result.push((k, c));
            }
            builder.bracket(i, j, &result).map_err(|e| CliError::Usage(format!("brackets[{b}]: {e}")))?;
        }
        Ok(builder.build())
    }

    /// Serialisable description of an algebra, one entry per stored pair.
    pub fn from_algebra<F: Field>(g: &SuperAlgebra<F>) -> Self {
        let field = match g.field().descriptor() {
            supercohom_core::FieldDescriptor::Rational => FieldSpec::Named("Q".into()),
            supercohom_core::FieldDescriptor::Prime(p) => FieldSpec::Prime { fp: p },
        };
        let brackets = g
            .constants()
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&(i, j), v)| BracketSpec {
                left: g.name(i).to_string(),
                right: g.name(j).to_string(),
                result: v
                    .entries()
                    .iter()
                    .map(|(k, c)| TermSpec { basis: g.name(*k).to_string(), coeff: CoeffSpec::Text(coeff_text(g, c)) })
                    .collect(),
            })
            .collect();
        AlgebraSpecFile {
            field,
            even_basis: (0..g.even_dim()).map(|i| g.name(i).to_string()).collect(),
            odd_basis: (g.even_dim()..g.dim()).map(|i| g.name(i).to_string()).collect(),
            brackets,
            family: g.family().map(FamilySpec::from),
        }
    }
}

fn coeff_text<F: Field>(g: &SuperAlgebra<F>, c: &F::Elem) -> String {
    match g.field().to_scalar(c) {
        supercohom_core::Scalar::PrimeField { residue, .. } => residue.to_string(),
        s => s.to_string(),
    }
}

fn same_algebra<F: Field>(a: &SuperAlgebra<F>, b: &SuperAlgebra<F>) -> bool {
    let names = |g: &SuperAlgebra<F>| (g.even_dim(), g.basis().iter().map(|v| v.name.clone()).collect::<Vec<_>>());
    if names(a) != names(b) {
        return false;
    }
    (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.bracket(i, j) == b.bracket(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_names() {
        assert_eq!(FieldSpec::parse_cli("Q").unwrap().resolve().unwrap(), None);
        assert_eq!(FieldSpec::parse_cli("Fp:7").unwrap().resolve().unwrap(), Some(7));
        assert!(FieldSpec::parse_cli("R").is_err());
        let named: FieldSpec = serde_json::from_str("\"Fp:5\"").unwrap();
        assert_eq!(named.resolve().unwrap(), Some(5));
        let tagged: FieldSpec = serde_json::from_str("{\"Fp\": 5}").unwrap();
        assert_eq!(tagged.resolve().unwrap(), Some(5));
    }

    #[test]
    fn coefficients_reduce_into_the_field() {
        let q = Rationals;
        let half = CoeffSpec::Text("-3/2".into()).value(&q).unwrap();
        assert_eq!(half, q.from_ratio(&(-3).into(), &2.into()).unwrap());
        assert_eq!(CoeffSpec::Integer(-4).value(&q).unwrap(), q.from_i64(-4));
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(CoeffSpec::Text("1/2".into()).value(&f3).unwrap(), f3.from_i64(2));
        assert!(CoeffSpec::Text("1/3".into()).value(&f3).is_none());
        assert!(CoeffSpec::Text("x".into()).value(&q).is_none());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = parse_unvalidated(r#"{"field": "Q", "even_basis": [], "odd_basis": [], "brackets": [], "extra": 1}"#)
            .err()
            .unwrap();
        assert!(matches!(err, CliError::Usage(ref m) if m.starts_with("line 1 column")), "{err}");
    }

    #[test]
    fn fractions_survive_a_round_trip() {
        let text = r#"{"field": "Q", "even_basis": ["T", "X"], "odd_basis": [],
            "brackets": [{"left": "T", "right": "X", "result": [{"basis": "X", "coeff": "-3/2"}]}]}"#;
        let any = parse(text).unwrap();
        let file = with_algebra!(&any, g => AlgebraSpecFile::from_algebra(g));
        assert_eq!(file.brackets[0].result[0].coeff, CoeffSpec::Text("-3/2".into()));
        let again = serde_json::to_string(&file).unwrap();
        let back = with_algebra!(&parse(&again).unwrap(), g => AlgebraSpecFile::from_algebra(g));
        assert_eq!(back, file);
    }
}
