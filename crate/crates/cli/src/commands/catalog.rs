use std::fmt::Write as _;

use centerfocus::catalog::{self, CatalogEntry};
use centerfocus::rational::format_rational;
use serde_json::{json, Map, Value};

use super::{orientation_name, Output};
use crate::document::SystemDocument;
use crate::error::CliError;

pub fn list() -> Output {
    let families = catalog::list();
    let mut text = String::new();
    let width = families.iter().map(|f| f.name.len()).max().unwrap_or(0);
    for f in families {
        let params = if f.params.is_empty() { "-".to_string() } else { f.params.join(",") };
        let _ = writeln!(text, "{:<width$}  {:<28}  {}", f.name, params, f.summary);
    }
    Output::new(Vec::new(), json!(families), text, 0)
}

pub fn document_of(e: &CatalogEntry) -> SystemDocument {
    let mut meta = Map::new();
    meta.insert("catalog".into(), json!(e.name));
    let params: Map<String, Value> = e.params.iter().map(|(k, v)| (k.clone(), json!(format_rational(v)))).collect();
    meta.insert("params".into(), Value::Object(params));
    meta.insert("orientation".into(), json!(orientation_name(e.orientation)));
    meta.insert("expectations".into(), json!(e.expectations));
    meta.insert("unverified_source".into(), json!(e.unverified_source));
    if !e.equilibria.is_empty() {
        meta.insert("equilibria".into(), json!(e.equilibria));
    }
    if let Some(d) = &e.darboux {
        meta.insert(
            "darboux".into(),
            json!({"g": d.g.to_string(), "lambda": format_rational(&d.lambda), "form": d.form}),
        );
    }
    SystemDocument::from_field(e.name, &e.field, meta)
}

/// `params` are `k=v` pairs.
pub fn get(name: &str, params: &[String]) -> Result<String, CliError> {
    let map = catalog::parse_params(params.iter().map(String::as_str)).map_err(|e| CliError::Usage(e.to_string()))?;
    let entry = catalog::get(name, &map).map_err(|e| match e {
        centerfocus::Error::UnknownName(_) | centerfocus::Error::MissingParam(_) | centerfocus::Error::InvalidParam { .. } => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Engine(other),
    })?;
    Ok(serde_json::to_string_pretty(&document_of(&entry)).expect("plain data") + "\n")
}
