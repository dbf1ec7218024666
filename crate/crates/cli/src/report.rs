//! Machine-readable reports. Key order and float formatting are fixed so
//! identical runs give byte-identical output.

use centerfocus::numeric::IntegratorConfig;
use centerfocus::rational::{format_rational, to_f64};
use centerfocus::Rational;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENGINE: &str = concat!("centerfocus ", env!("CARGO_PKG_VERSION"));

/// A rational as an exact string plus a decimal hint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub approx: f64,
}

impl From<&Rational> for Exact {
    fn from(q: &Rational) -> Self {
        Exact {
            exact: format_rational(q),
            approx: to_f64(q),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputRef {
    pub path: String,
    pub sha256: String,
}

impl InputRef {
    pub fn new(path: &str, bytes: &[u8]) -> Self {
        InputRef {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_time: f64,
}

impl From<&IntegratorConfig> for Tolerances {
    fn from(c: &IntegratorConfig) -> Self {
        Tolerances {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_step: c.max_step,
            max_time: c.max_time,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub engine: &'static str,
    pub inputs: Vec<InputRef>,
    pub results: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use centerfocus::rational::frac;

    #[test]
    fn exact_keeps_the_fraction() {
        let e = Exact::from(&frac(-9, 8));
        assert_eq!(e.exact, "-9/8");
        assert_eq!(e.approx, -1.125);
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"exact":"-9/8","approx":-1.125}"#);
    }

    #[test]
    fn digest_is_sha256_hex() {
        let r = InputRef::new("a", b"abc");
        assert_eq!(r.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn floats_use_shortest_round_trip() {
        let v = serde_json::json!({"x": 0.1 + 0.2, "y": std::f64::consts::PI});
        assert_eq!(v.to_string(), r#"{"x":0.30000000000000004,"y":3.141592653589793}"#);
    }
}
