use std::fmt::Write as _;

use centerfocus::inverse::{
    build_field, complementary_residuals, find_cofactor, verify_darboux, DarbouxCandidate, DarbouxForm,
};
use centerfocus::lyapunov::{compute_lyapunov, Verdict};
use centerfocus::numeric::{numeric_classify, IntegratorConfig, NumericVerdict};
use centerfocus::rational::{format_rational, int};
use centerfocus::structure::{
    bautin_classify, detect_symmetries, hg_decompose, schlomiuk_classify, weak_center_check,
};
use centerfocus::{BiPoly, PlanarField, Rational};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::{
    check_order, constant_rows, constants_text, error_value, load_system, orientation_name, oriented, read,
    verdict_text, Output,
};
use crate::document::{parse, poly_of, CurveDocument, InverseDocument, SystemDocument};
use crate::error::CliError;
use crate::report::{Exact, InputRef, Tolerances};

struct Analyzed {
    input: InputRef,
    json: Value,
    text: String,
}

fn analyze_one(path: &str, order: usize) -> Result<Analyzed, CliError> {
    let (doc, input) = load_system(path)?;
    let field = doc.field();
    let (f, reversed) = oriented(&field)?;
    let res = compute_lyapunov(&f, order)?;
    let h: Vec<Value> = res
        .h
        .iter()
        .skip(1)
        .map(|hj| json!({"degree": hj.degree(), "terms": hj.poly().terms().count(), "poly": hj.poly().to_string()}))
        .collect();
    let json = json!({
        "path": path,
        "name": doc.name,
        "orientation": orientation_name(field.orientation()),
        "time_reversed": reversed,
        "order": order,
        "h": h,
        "constants": constant_rows(&res),
        "verdict": res.verdict,
    });
    let mut text = format!("{} [{}, sha256 {}]\n", doc.name, path, &input.sha256[..16]);
    if reversed {
        text.push_str("  clockwise input: constants are for the time-reversed field\n");
    }
    let summary: Vec<String> = res
        .h
        .iter()
        .skip(1)
        .map(|hj| format!("H_{}: {} terms", hj.degree(), hj.poly().terms().count()))
        .collect();
    let _ = writeln!(text, "  {}", summary.join(", "));
    text.push_str(&constants_text(&res));
    let _ = writeln!(text, "  verdict: {}", verdict_text(res.verdict));
    Ok(Analyzed { input, json, text })
}

pub fn analyze(inputs: &[String], order: usize, jobs: usize) -> Result<Output, CliError> {
    check_order(order)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    let results: Vec<(String, Result<Analyzed, CliError>)> =
        pool.install(|| inputs.par_iter().map(|p| (p.clone(), analyze_one(p, order))).collect());
    let mut code = 0;
    let mut refs = Vec::new();
    let mut items = Vec::new();
    let mut text = String::new();
    for (path, r) in results {
        match r {
            Ok(a) => {
                refs.push(a.input);
                items.push(a.json);
                text.push_str(&a.text);
            }
            Err(e) => {
                code = code.max(e.exit_code());
                items.push(error_value(&path, &e));
                let _ = writeln!(text, "{path}: error: {e}");
            }
        }
    }
    Ok(Output::new(refs, Value::Array(items), text, code))
}

/// Parameters of the Bautin normal form, when the field is in it.
fn bautin_params(f: &PlanarField) -> Option<[Rational; 5]> {
    let (xn, yn) = f.nonlinear();
    let quadratic = |p: &BiPoly| p.terms().all(|(m, _)| m.i + m.j == 2);
    if !quadratic(&xn) || !quadratic(&yn) {
        return None;
    }
    let l2 = yn.coeff(2, 0);
    if yn.coeff(0, 2) != -l2.clone() {
        return None;
    }
    let l3 = -xn.coeff(2, 0);
    let l6 = xn.coeff(0, 2);
    let l5 = xn.coeff(1, 1) - int(2) * &l2;
    let l4 = yn.coeff(1, 1) - int(2) * &l3;
    Some([l2, l3, l4, l5, l6])
}

fn is_quadratic(f: &PlanarField) -> bool {
    let (xn, yn) = f.nonlinear();
    !(xn.is_zero() && yn.is_zero()) && xn.terms().chain(yn.terms()).all(|(m, _)| m.i + m.j == 2)
}

pub fn classify(path: &str, order: usize, grid: &[f64], cfg: &IntegratorConfig) -> Result<Output, CliError> {
    check_order(order)?;
    let (doc, input) = load_system(path)?;
    let field = doc.field();
    let (f, reversed) = oriented(&field)?;
    let mut code = 0;
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut center_claims: Vec<String> = Vec::new();
    let mut results = Map::new();

    let sym = detect_symmetries(&f);
    results.insert("symmetries".into(), json!(sym));
    for (flag, label) in [
        (sym.rev_x_axis, "reversible about the x-axis"),
        (sym.rev_y_axis, "reversible about the y-axis"),
        (sym.cauchy_riemann, "holomorphic (Cauchy-Riemann) nonlinearity"),
        (sym.hamiltonian, "Hamiltonian (zero divergence)"),
    ] {
        if flag {
            center_claims.push(label.to_string());
            rows.push(("symmetry".into(), format!("center: {label}")));
        }
    }
    if center_claims.is_empty() {
        rows.push(("symmetry".into(), "no reversibility, holomorphy or zero divergence".into()));
    }

    if sym.hamiltonian {
        let h = hg_decompose(&f).map(|d| &BiPoly::r2().scale(&Rational::new(1.into(), 2.into())) + &d.h);
        match h {
            Ok(h) => {
                let ok = f.lie(&h).is_zero();
                results.insert("hamiltonian".into(), json!({"conserved": h.to_string(), "verified": ok}));
                rows.push(("hamiltonian".into(), format!("conserved H = {h} (exact check: {ok})")));
            }
            Err(e) => {
                results.insert("hamiltonian".into(), json!({"error": e.to_string()}));
            }
        }
    }

    match weak_center_check(&f) {
        Some(w) => {
            results.insert(
                "weak_center".into(),
                json!({
                    "mu": Exact::from(&w.mu),
                    "integral_ok": w.integral_ok,
                    "lambda_darboux": w.lambda_darboux.as_ref().map(Exact::from),
                }),
            );
            rows.push((
                "weak center".into(),
                format!("r^2 div = mu (xX + yY) with mu = {}, averages vanish: {}", format_rational(&w.mu), w.integral_ok),
            ));
        }
        None => {
            results.insert("weak_center".into(), Value::Null);
        }
    }

    match hg_decompose(&f) {
        Ok(d) => {
            results.insert("hg".into(), json!({"h": d.h.to_string(), "g": d.g.to_string()}));
        }
        Err(e) => {
            results.insert("hg".into(), json!({"error": e.to_string()}));
        }
    }

    if is_quadratic(&f) {
        let mut quad = Map::new();
        if let Some(l) = bautin_params(&f) {
            let cases = bautin_classify(&l[0], &l[1], &l[2], &l[3], &l[4]);
            let names: Vec<String> = cases.iter().map(|c| format!("{c:?}")).collect();
            quad.insert(
                "bautin".into(),
                json!({"lambda": l.iter().map(Exact::from).collect::<Vec<_>>(), "cases": names}),
            );
            if !cases.is_empty() {
                center_claims.push(format!("Bautin case {}", names.join(",")));
                rows.push(("bautin".into(), format!("center: case {}", names.join(","))));
            }
        }
        // clockwise form y + ..., -x + ... of the same quadratic
        let (xn, yn) = f.nonlinear();
        let c = |p: &BiPoly, i, j| -p.coeff(i, j);
        let cases = schlomiuk_classify(
            &c(&xn, 2, 0),
            &c(&xn, 1, 1),
            &c(&xn, 0, 2),
            &c(&yn, 2, 0),
            &c(&yn, 1, 1),
            &c(&yn, 0, 2),
        );
        let names: Vec<String> = cases.iter().map(|c| format!("{c:?}")).collect();
        if !cases.is_empty() {
            center_claims.push(format!("quadratic center condition {}", names.join(",")));
            rows.push(("quadratic".into(), format!("center: condition {}", names.join(","))));
        }
        quad.insert("schlomiuk".into(), json!({"cases": names}));
        results.insert("quadratic".into(), Value::Object(quad));
    }

    let lyap = compute_lyapunov(&f, order)?;
    results.insert(
        "lyapunov".into(),
        json!({"order": order, "constants": constant_rows(&lyap), "verdict": lyap.verdict}),
    );
    rows.push(("lyapunov".into(), verdict_text(lyap.verdict)));

    let mut disagreements = Vec::new();
    if lyap.verdict.sign() != 0 {
        for claim in &center_claims {
            disagreements.push(format!("{claim} but the symbolic verdict is {}", verdict_text(lyap.verdict)));
        }
    }
    match numeric_classify(&f, grid, cfg) {
        Ok(nv) => {
            let (text, value) = match nv {
                NumericVerdict::CenterLike { tol, max_delta } => (
                    format!("center-like (max |P(c)-c| = {max_delta:e} < {tol:e})"),
                    json!({"kind": "CenterLike", "tol": tol, "max_delta": max_delta}),
                ),
                NumericVerdict::FocusLike { sign } => (
                    format!("focus-like, sign {}", if sign > 0 { "+" } else { "-" }),
                    json!({"kind": "FocusLike", "sign": sign}),
                ),
            };
            rows.push(("numeric".into(), text.clone()));
            results.insert(
                "numeric".into(),
                json!({"c": grid, "verdict": value, "tolerances": Tolerances::from(cfg)}),
            );
            let clash = match (lyap.verdict, nv) {
                (Verdict::CenterCandidate(_), NumericVerdict::FocusLike { .. }) => true,
                (v, NumericVerdict::CenterLike { .. }) => v.sign() != 0,
                (v, NumericVerdict::FocusLike { sign }) => v.sign() != sign,
            };
            if clash {
                disagreements.push(format!("numeric {text} vs symbolic {}", verdict_text(lyap.verdict)));
            }
        }
        Err(e) => {
            code = 2;
            rows.push(("numeric".into(), format!("error: {e}")));
            results.insert("numeric".into(), json!({"c": grid, "error": e.to_string()}));
        }
    }
    if !disagreements.is_empty() {
        code = 3;
    }
    results.insert("disagreements".into(), json!(disagreements));
    results.insert("name".into(), json!(doc.name));
    results.insert("orientation".into(), json!(orientation_name(field.orientation())));
    results.insert("time_reversed".into(), json!(reversed));
    results.insert(
        "table".into(),
        Value::Array(rows.iter().map(|(s, v)| json!({"source": s, "verdict": v})).collect()),
    );

    let mut text = format!("{} [{}]\n", doc.name, path);
    if reversed {
        text.push_str("  clockwise input: analysed after time reversal\n");
    }
    let width = rows.iter().map(|(s, _)| s.len()).max().unwrap_or(0);
    for (s, v) in &rows {
        let _ = writeln!(text, "  {s:<width$}  {v}");
    }
    for d in &disagreements {
        let _ = writeln!(text, "  DISAGREEMENT: {d}");
    }
    Ok(Output::new(vec![input], Value::Object(results), text, code))
}

pub fn inverse(path: &str, check_order_n: usize, emit: Option<&str>) -> Result<Output, CliError> {
    check_order(check_order_n)?;
    let (text_in, input) = read(path)?;
    let doc: InverseDocument = parse(path, &text_in)?;
    let spec = doc.spec()?;
    let field = build_field(&spec);
    let div_cond = spec.divergence_condition();
    let hamiltonian = spec.hamiltonian().map(|h| {
        let ok = field.lie(&h).is_zero();
        (h, ok)
    });
    let residuals = complementary_residuals(&spec, check_order_n as u32);
    let res = compute_lyapunov(&field, check_order_n)?;
    let system = SystemDocument::from_field(doc.name.clone(), &field, Map::new());
    if let Some(out) = emit {
        let body = serde_json::to_string_pretty(&system).expect("plain data");
        std::fs::write(out, body + "\n").map_err(|source| CliError::Io {
            path: out.to_string(),
            source,
        })?;
    }
    let residual_rows: Vec<Value> = residuals
        .iter()
        .enumerate()
        .map(|(i, r)| json!({"n": spec.m as usize + i, "residual": r.to_string(), "zero": r.is_zero()}))
        .collect();
    let results = json!({
        "name": doc.name,
        "m": spec.m,
        "system": system,
        "divergence_condition": div_cond.to_string(),
        "hamiltonian_condition_holds": div_cond.is_zero(),
        "hamiltonian": hamiltonian.as_ref().map(|(h, ok)| json!({"H": h.to_string(), "verified": ok})),
        "complementary_residuals": residual_rows,
        "lyapunov": {"order": check_order_n, "constants": constant_rows(&res), "verdict": res.verdict},
    });
    let mut text = format!("{} (m = {})\n  field: {}\n", doc.name, spec.m, field);
    let _ = writeln!(
        text,
        "  divergence condition: {}",
        if div_cond.is_zero() { "holds (Hamiltonian)".to_string() } else { div_cond.to_string() }
    );
    if let Some((h, ok)) = &hamiltonian {
        let _ = writeln!(text, "  H = {h} (exact check: {ok})");
    }
    let nonzero: Vec<usize> = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(i, _)| spec.m as usize + i)
        .collect();
    if nonzero.is_empty() {
        let _ = writeln!(text, "  complementary residuals vanish for n = {}..{}", spec.m, check_order_n);
    } else {
        let _ = writeln!(text, "  nonzero complementary residuals at n = {nonzero:?}");
    }
    text.push_str(&constants_text(&res));
    let _ = writeln!(text, "  verdict: {}", verdict_text(res.verdict));
    if let Some(out) = emit {
        let _ = writeln!(text, "  system written to {out}");
    }
    Ok(Output::new(vec![input], results, text, 0))
}

/// `g` for the two-curve integral: the curve is `1 + (1 - lambda) g`
/// (scaled so its constant term is 1), or `g` itself when `lambda = 1`.
fn darboux_g(curve: &BiPoly, lambda: &Rational) -> Result<BiPoly, CliError> {
    if lambda.is_one() {
        return Ok(curve.clone());
    }
    let c0 = curve.coeff(0, 0);
    if c0.is_zero() {
        return Err(CliError::Input(
            "with lambda != 1 the curve must have a nonzero constant term (it is 1 + (1 - lambda) g)".into(),
        ));
    }
    let normalized = curve.scale(&(Rational::one() / &c0));
    Ok((&normalized - &BiPoly::one()).scale(&(Rational::one() / (Rational::one() - lambda))))
}

pub fn darboux(path: &str, curve_path: &str, lambda: Option<&Rational>) -> Result<Output, CliError> {
    let (doc, input) = load_system(path)?;
    let (curve_text, curve_input) = read(curve_path)?;
    let curve_doc: CurveDocument = parse(curve_path, &curve_text)?;
    let curve = poly_of(&curve_doc.poly);
    let field = doc.field();
    let cert = find_cofactor(&field, &curve)?;
    let mut results = Map::new();
    results.insert("name".into(), json!(doc.name));
    results.insert("curve".into(), json!(curve.to_string()));
    results.insert(
        "cofactor".into(),
        cert.as_ref().map_or(Value::Null, |c| json!(c.cofactor.to_string())),
    );
    let mut text = format!("{} with curve {} = 0\n", doc.name, curve);
    match &cert {
        Some(c) => {
            let _ = writeln!(text, "  invariant: X(f) = K f with cofactor K = {}", c.cofactor);
        }
        None => text.push_str("  not invariant: X(f) is not divisible by f\n"),
    }
    if let Some(lam) = lambda {
        let (f, _) = oriented(&field)?;
        let g = darboux_g(&curve, lam)?;
        let cand = DarbouxCandidate::new(g, lam.clone())?;
        let ok = verify_darboux(&f, &cand);
        let form = match cand.form {
            DarbouxForm::Power => "H2^(1-lambda) (1 + (1-lambda) g)^(-lambda)",
            DarbouxForm::Exponential => "H2 exp(-g)",
            DarbouxForm::Rational => "rational (lambda = 1/m)",
        };
        results.insert(
            "darboux".into(),
            json!({"lambda": Exact::from(lam), "g": cand.g.to_string(), "form": cand.form, "verified": ok}),
        );
        let _ = writeln!(
            text,
            "  lambda = {}: g = {}, first integral {} verified: {}",
            format_rational(lam),
            cand.g,
            form,
            ok
        );
    }
    Ok(Output::new(vec![input, curve_input], Value::Object(results), text, 0))
}
