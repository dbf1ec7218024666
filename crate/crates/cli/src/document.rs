//! JSON file formats: systems, inverse specs and curves.
//!
//! Coefficients are integers or `"p/q"` strings. Decimal literals are
//! rejected so nothing inexact enters the symbolic pipeline.

use std::collections::BTreeMap;
use std::fmt;

use centerfocus::inverse::InverseSpec;
use centerfocus::rational::{format_rational, parse_rational};
use centerfocus::{BiPoly, PlanarField, Rational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient(pub Rational);

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

struct CoefficientVisitor;

impl Visitor<'_> for CoefficientVisitor {
    type Value = Coefficient;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Coefficient, E> {
        Ok(Coefficient(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Coefficient, E> {
        Ok(Coefficient(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Coefficient, E> {
        Err(E::custom(format!(
            "decimal literal {v} is not accepted; write the coefficient as an integer or a \"p/q\" string"
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Coefficient, E> {
        parse_rational(v).map(Coefficient).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(CoefficientVisitor)
    }
}

/// One monomial `c x^i y^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub i: u32,
    pub j: u32,
    pub c: Coefficient,
}

pub fn terms_of(p: &BiPoly) -> Vec<Term> {
    p.terms()
        .map(|(m, c)| Term {
            i: m.i,
            j: m.j,
            c: Coefficient(c.clone()),
        })
        .collect()
}

/// Repeated monomials are summed.
pub fn poly_of(terms: &[Term]) -> BiPoly {
    BiPoly::from_terms(terms.iter().map(|t| (t.i, t.j, t.c.0.clone())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub name: String,
    pub x_dot: Vec<Term>,
    pub y_dot: Vec<Term>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl SystemDocument {
    pub fn from_field(name: impl Into<String>, field: &PlanarField, metadata: Map<String, Value>) -> Self {
        SystemDocument {
            name: name.into(),
            x_dot: terms_of(&field.p),
            y_dot: terms_of(&field.q),
            metadata,
        }
    }

    pub fn field(&self) -> PlanarField {
        PlanarField::new(poly_of(&self.x_dot), poly_of(&self.y_dot))
    }
}

/// `h` is keyed by degree `3..=m+1`, `g` by degree `1..=m-1`; missing keys
/// are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseDocument {
    pub name: String,
    pub m: u32,
    #[serde(default)]
    pub h: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    pub g: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    pub nu: Option<Coefficient>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl InverseDocument {
    pub fn spec(&self) -> Result<InverseSpec, CliError> {
        let keyed = |map: &BTreeMap<String, Vec<Term>>, what: &str| -> Result<BTreeMap<u32, BiPoly>, CliError> {
            map.iter()
                .map(|(k, v)| {
                    let d = k
                        .parse::<u32>()
                        .map_err(|_| CliError::Input(format!("{what} key `{k}` is not a degree")))?;
                    Ok((d, poly_of(v)))
                })
                .collect()
        };
        let nu = self.nu.as_ref().map(|c| c.0.clone()).unwrap_or_default();
        Ok(InverseSpec::from_maps(self.m, &keyed(&self.h, "h")?, &keyed(&self.g, "g")?, nu)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub name: String,
    pub poly: Vec<Term>,
}

/// Parses JSON, reporting failures with line and column.
pub fn parse<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use centerfocus::rational::{frac, int};

    const BAUTIN: &str = r#"{
        "name": "bautin",
        "x_dot": [{"i": 0, "j": 1, "c": -1}, {"i": 2, "j": 0, "c": "-1"}, {"i": 1, "j": 1, "c": "2"}],
        "y_dot": [{"i": 1, "j": 0, "c": 1}, {"i": 1, "j": 1, "c": "2"}],
        "metadata": {"note": "l3 = 1, l5 = 2"}
    }"#;

    #[test]
    fn system_parses_to_field() {
        let doc: SystemDocument = parse("b.json", BAUTIN).unwrap();
        let f = doc.field();
        assert_eq!(f.p.coeff(0, 1), int(-1));
        assert_eq!(f.p.coeff(1, 1), int(2));
        assert_eq!(f.q.coeff(1, 1), int(2));
        assert_eq!(doc.metadata["note"], "l3 = 1, l5 = 2");
    }

    #[test]
    fn decimals_are_rejected_with_position() {
        let text = "{\"name\": \"x\",\n \"x_dot\": [{\"i\": 0, \"j\": 1, \"c\": -1.0}], \"y_dot\": []}";
        match parse::<SystemDocument>("d.json", text) {
            Err(CliError::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("decimal literal"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse::<SystemDocument>("d.json", r#"{"name":"x","x_dot":[{"i":0,"j":1,"c":"0.5"}],"y_dot":[]}"#).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse::<SystemDocument>("d.json", r#"{"name":"x","x_dot":[],"y_dot":[],"z_dot":[]}"#).is_err());
    }

    #[test]
    fn repeated_monomials_are_summed() {
        let doc: SystemDocument = parse(
            "d.json",
            r#"{"name":"x","x_dot":[{"i":0,"j":1,"c":-1},{"i":2,"j":0,"c":"1/2"},{"i":2,"j":0,"c":"1/3"}],"y_dot":[{"i":1,"j":0,"c":1}]}"#,
        )
        .unwrap();
        assert_eq!(doc.field().p.coeff(2, 0), frac(5, 6));
    }

    #[test]
    fn round_trip_preserves_the_field() {
        let f = PlanarField::from_nonlinear(
            BiPoly::from_terms([(2, 0, frac(-3, 7)), (0, 3, int(5))]),
            BiPoly::from_terms([(1, 1, frac(1, 2))]),
        );
        let doc = SystemDocument::from_field("t", &f, Map::new());
        let text = serde_json::to_string(&doc).unwrap();
        let back: SystemDocument = parse("t.json", &text).unwrap();
        assert_eq!(back.field(), f);
        assert_eq!(back, doc);
    }

    #[test]
    fn inverse_document_builds_spec() {
        let doc: InverseDocument = parse(
            "s.json",
            r#"{"name":"s","m":3,"h":{"4":[{"i":4,"j":0,"c":"1/4"}]},"g":{"1":[{"i":0,"j":1,"c":1}]}}"#,
        )
        .unwrap();
        let spec = doc.spec().unwrap();
        assert_eq!(spec.h_of(4).coeff(4, 0), frac(1, 4));
        assert_eq!(spec.g_of(1).coeff(0, 1), int(1));
        let bad: InverseDocument = parse("s.json", r#"{"name":"s","m":3,"h":{"7":[]}}"#).unwrap();
        assert!(bad.spec().is_err());
        let bad_key: InverseDocument = parse("s.json", r#"{"name":"s","m":3,"g":{"one":[]}}"#).unwrap();
        assert!(matches!(bad_key.spec(), Err(CliError::Input(_))));
    }
}
