use std::f64::consts::PI;
use std::fmt::Write as _;

use centerfocus::numeric::{integrate, period as period_of, return_map, IntegratorConfig};
use serde_json::{json, Value};

use super::{load_system, oriented, Output};
use crate::error::CliError;
use crate::report::Tolerances;

fn check_grid(grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() || grid.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
        return Err(CliError::Usage("--c needs positive radii, e.g. --c 0.05,0.1".into()));
    }
    Ok(())
}

fn check_cfg(cfg: &IntegratorConfig) -> Result<(), CliError> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))
}

pub fn returnmap(path: &str, grid: &[f64], cfg: &IntegratorConfig) -> Result<Output, CliError> {
    check_grid(grid)?;
    check_cfg(cfg)?;
    let (doc, input) = load_system(path)?;
    let (f, reversed) = oriented(&doc.field())?;
    let mut code = 0;
    let mut rows = Vec::new();
    let mut text = format!("{} return map on the positive x-axis\n", doc.name);
    if reversed {
        text.push_str("  clockwise input: map of the time-reversed field (the inverse map)\n");
    }
    for &c in grid {
        match return_map(&f, c, cfg) {
            Ok(s) => {
                rows.push(json!({"c": c, "p": s.p_of_c, "delta": s.delta}));
                let _ = writeln!(text, "  c = {c}: P(c) = {:.15e}, P(c) - c = {:e}", s.p_of_c, s.delta);
            }
            Err(e) => {
                code = 2;
                rows.push(json!({"c": c, "error": e.to_string()}));
                let _ = writeln!(text, "  c = {c}: error: {e}");
            }
        }
    }
    let _ = writeln!(text, "  tolerances: rel {:e}, abs {:e}", cfg.rel_tol, cfg.abs_tol);
    let results = json!({
        "name": doc.name,
        "time_reversed": reversed,
        "samples": rows,
        "tolerances": Tolerances::from(cfg),
    });
    Ok(Output::new(vec![input], results, text, code))
}

pub fn period(path: &str, grid: &[f64], cfg: &IntegratorConfig) -> Result<Output, CliError> {
    check_grid(grid)?;
    check_cfg(cfg)?;
    let (doc, input) = load_system(path)?;
    let (f, reversed) = oriented(&doc.field())?;
    let mut code = 0;
    let mut rows = Vec::new();
    let mut text = format!("{} period of the orbit through (c, 0)\n", doc.name);
    for &c in grid {
        match period_of(&f, c, cfg) {
            Ok(s) => {
                let dev = s.period - 2.0 * PI;
                rows.push(json!({"c": c, "period": s.period, "minus_two_pi": dev}));
                let _ = writeln!(text, "  c = {c}: T = {:.15}, T - 2pi = {dev:e}", s.period);
            }
            Err(e) => {
                code = 2;
                rows.push(json!({"c": c, "error": e.to_string()}));
                let _ = writeln!(text, "  c = {c}: error: {e}");
            }
        }
    }
    let _ = writeln!(text, "  tolerances: rel {:e}, abs {:e}", cfg.rel_tol, cfg.abs_tol);
    let results = json!({
        "name": doc.name,
        "time_reversed": reversed,
        "samples": rows,
        "tolerances": Tolerances::from(cfg),
    });
    Ok(Output::new(vec![input], results, text, code))
}

pub fn orbit(path: &str, x0: f64, y0: f64, t: f64, out: &str, cfg: &IntegratorConfig) -> Result<Output, CliError> {
    check_cfg(cfg)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Usage("--t must be a positive time".into()));
    }
    let (doc, input) = load_system(path)?;
    let tr = integrate(&doc.field(), x0, y0, t, cfg)?;
    std::fs::write(out, tr.to_csv()).map_err(|source| CliError::Io {
        path: out.to_string(),
        source,
    })?;
    let (t_end, (x, y)) = tr.last();
    let results: Value = json!({
        "name": doc.name,
        "start": [x0, y0],
        "t_end": t_end,
        "end": [x, y],
        "points": tr.t.len(),
        "csv": out,
        "tolerances": Tolerances::from(cfg),
    });
    let text = format!(
        "{}: {} points written to {out}; state at t = {t_end}: ({x:.15e}, {y:.15e}) (rel tol {:e})\n",
        doc.name,
        tr.t.len(),
        cfg.rel_tol
    );
    Ok(Output::new(vec![input], results, text, 0))
}
