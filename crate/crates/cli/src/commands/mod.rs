//! One function per subcommand. Each returns the JSON report, a human
//! rendering and the exit status.

pub mod catalog;
pub mod numeric;
pub mod symbolic;

use centerfocus::lyapunov::{LyapunovResult, Verdict};
use centerfocus::{Orientation, PlanarField};
use serde::Serialize;
use serde_json::Value;

use crate::document::{parse, SystemDocument};
use crate::error::CliError;
use crate::report::{Exact, InputRef, Report, ENGINE};

pub const DEFAULT_MAX_DEGREE: usize = 24;

pub struct Output {
    pub report: Report,
    pub text: String,
    pub code: u8,
}

impl Output {
    pub fn new(inputs: Vec<InputRef>, results: Value, text: String, code: u8) -> Self {
        Output {
            report: Report {
                command: std::env::args().skip(1).collect(),
                engine: ENGINE,
                inputs,
                results,
            },
            text,
            code,
        }
    }
}

pub fn read(path: &str) -> Result<(String, InputRef), CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    let input = InputRef::new(path, &bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{path}: not UTF-8")))?;
    Ok((text, input))
}

pub fn load_system(path: &str) -> Result<(SystemDocument, InputRef), CliError> {
    let (text, input) = read(path)?;
    Ok((parse(path, &text)?, input))
}

/// Cap on the symbolic order, from `CF_MAX_DEGREE`.
pub fn max_order() -> Result<usize, CliError> {
    match std::env::var("CF_MAX_DEGREE") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 2)
            .ok_or_else(|| CliError::Usage(format!("CF_MAX_DEGREE={v} is not an integer >= 2"))),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

pub fn check_order(order: usize) -> Result<(), CliError> {
    let cap = max_order()?;
    if order > cap {
        return Err(CliError::Usage(format!(
            "order {order} exceeds the cap {cap} (raise CF_MAX_DEGREE to allow it)"
        )));
    }
    Ok(())
}

/// Field with linear part `(-y, x)`; clockwise input is time reversed.
pub fn oriented(field: &PlanarField) -> Result<(PlanarField, bool), CliError> {
    let reversed = field.orientation() == Orientation::Clockwise;
    let f = field.normalized();
    f.require_normalized()?;
    Ok((f, reversed))
}

pub fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::CounterClockwise => "counterclockwise",
        Orientation::Clockwise => "clockwise",
        Orientation::Other => "other",
    }
}

pub fn verdict_text(v: Verdict) -> String {
    match v {
        Verdict::CenterCandidate(n) => format!("center candidate (all constants vanish through order {n})"),
        Verdict::StableFocus(k) => format!("stable focus (V_{k} < 0)"),
        Verdict::UnstableFocus(k) => format!("unstable focus (V_{k} > 0)"),
    }
}

#[derive(Serialize)]
pub struct ConstantRow {
    pub k: usize,
    /// The power of `x^2 + y^2` this constant multiplies.
    pub multiplies: String,
    pub value: Exact,
}

pub fn constant_rows(res: &LyapunovResult) -> Vec<ConstantRow> {
    res.v
        .iter()
        .enumerate()
        .map(|(i, v)| ConstantRow {
            k: i + 1,
            multiplies: format!("(x^2+y^2)^{}", i + 2),
            value: Exact::from(v),
        })
        .collect()
}

pub fn constants_text(res: &LyapunovResult) -> String {
    let mut out = String::new();
    for row in constant_rows(res) {
        out.push_str(&format!(
            "  V_{} = {}  (~ {}), coefficient of {}\n",
            row.k, row.value.exact, row.value.approx, row.multiplies
        ));
    }
    if let Some((k, _)) = res.first_nonzero() {
        if k < res.v.len() {
            out.push_str("  (constants after the first nonzero one depend on the normalization)\n");
        }
    }
    out
}

pub fn error_value(path: &str, e: &CliError) -> Value {
    serde_json::json!({"path": path, "error": e.to_string(), "exit": e.exit_code()})
}
