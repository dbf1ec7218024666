//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 1 and 4 assert published claims that the exact engine and the
//! numeric oracle both refute (a sign error and two fields that are foci).
//! They are run literally and reported as FAIL; by default they do not make
//! the process exit nonzero. Set `ACCEPTANCE_STRICT=1` to fail on them too.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use centerfocus::catalog;
use centerfocus::homological::{apply_rotational, r_power, solve_homological};
use centerfocus::inverse::{build_field, verify_darboux, weak_center_family, InverseSpec};
use centerfocus::lyapunov::{compute_lyapunov, compute_lyapunov_gauged, constants_quasihomogeneous};
use centerfocus::numeric::{find_equilibria, max_drift, period, return_map, BoundingBox, IntegratorConfig};
use centerfocus::rational::{frac, int};
use centerfocus::structure::{bautin_classify, bautin_field, BautinCase};
use centerfocus::{BiPoly, HomogeneousPoly, PlanarField, Rational};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5EED_CF01;
const KNOWN_UNATTAINABLE: &[usize] = &[1, 4];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn rat(rng: &mut impl Rng, bound: i64) -> Rational {
    frac(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

fn nonzero_rat(rng: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let q = rat(rng, bound);
        if !q.is_zero() {
            return q;
        }
    }
}

fn homogeneous(rng: &mut impl Rng, degree: u32, bound: i64) -> HomogeneousPoly {
    let p = BiPoly::from_terms((0..=degree).map(|i| (i, degree - i, rat(rng, bound))));
    HomogeneousPoly::new(degree, p).unwrap()
}

fn bautin_tuple(rng: &mut impl Rng) -> [Rational; 5] {
    std::array::from_fn(|_| rat(rng, 9))
}

fn bautin(l: &[Rational; 5]) -> PlanarField {
    bautin_field(&l[0], &l[1], &l[2], &l[3], &l[4])
}

/// `(A, B, C, D, K, L, M, N)`.
fn cubic_coeffs(rng: &mut impl Rng) -> [Rational; 8] {
    std::array::from_fn(|_| rat(rng, 9))
}

fn cubic(c: &[Rational; 8]) -> PlanarField {
    PlanarField::from_nonlinear(
        BiPoly::from_terms([(3, 0, c[0].clone()), (2, 1, c[1].clone()), (1, 2, c[2].clone()), (0, 3, c[3].clone())]),
        BiPoly::from_terms([(3, 0, c[4].clone()), (2, 1, c[5].clone()), (1, 2, c[6].clone()), (0, 3, c[7].clone())]),
    )
}

fn radial_cubic() -> PlanarField {
    PlanarField::from_nonlinear(&BiPoly::x() * &BiPoly::r2(), &BiPoly::y() * &BiPoly::r2())
}

fn first_of(items: &[String]) -> String {
    items.first().map(|s| format!("; first: {s}")).unwrap_or_default()
}

fn first_nonzero(v: &[Rational]) -> Option<(usize, Rational)> {
    v.iter().position(|q| !q.is_zero()).map(|i| (i + 1, v[i].clone()))
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut literal, mut negated) = (0, 0);
    let mut first_mismatch = None;
    for _ in 0..100 {
        let l = bautin_tuple(rng);
        let v1 = compute_lyapunov(&bautin(&l), 2).unwrap().v[0].clone();
        let printed = &l[3] * (&l[1] - &l[4]) / int(8);
        if v1 == printed {
            literal += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(format!("l={:?} V1={v1} printed={printed}", l.iter().map(|q| q.to_string()).collect::<Vec<_>>()));
        }
        if v1 == -printed {
            negated += 1;
        }
    }
    Outcome::new(
        literal == 100,
        format!(
            "{literal}/100 equal l5(l3-l6)/8, {negated}/100 equal -l5(l3-l6)/8; first mismatch: {}",
            first_mismatch.unwrap_or_else(|| "none".into())
        ),
    )
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = Vec::new();
    for case in [BautinCase::I, BautinCase::II, BautinCase::III, BautinCase::IV] {
        for _ in 0..25 {
            let mut l = bautin_tuple(rng);
            match case {
                BautinCase::I => {
                    l[2] = int(0);
                    l[3] = int(0);
                }
                BautinCase::II => {
                    l[0] = int(0);
                    l[3] = int(0);
                }
                BautinCase::III => l[4] = l[1].clone(),
                BautinCase::IV => {
                    // l2^2 = l6 (l3 - 2 l6) solved for l3
                    l[4] = nonzero_rat(rng, 9);
                    l[1] = (&l[0] * &l[0] + int(2) * &l[4] * &l[4]) / &l[4];
                    l[2] = int(-5) * (&l[1] - &l[4]);
                    l[3] = int(0);
                }
            }
            assert!(bautin_classify(&l[0], &l[1], &l[2], &l[3], &l[4]).contains(&case));
            let v = compute_lyapunov(&bautin(&l), 6).unwrap().v;
            if v.len() != 3 || v.iter().any(|q| !q.is_zero()) {
                bad.push(format!("{case:?}: {v:?}"));
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("100 instances, {} with a nonzero V1..V3{}", bad.len(), first_of(&bad)))
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut formula, mut routes) = (0, 0);
    for _ in 0..100 {
        let c = cubic_coeffs(rng);
        let f = cubic(&c);
        let full = compute_lyapunov(&f, 6).unwrap();
        let qh = constants_quasihomogeneous(&f, 6).unwrap();
        let expected = (int(3) * (&c[0] + &c[7]) + &c[5] + &c[2]) / int(8);
        if full.v[0] == expected {
            formula += 1;
        }
        if full.v == qh.v {
            routes += 1;
        }
    }
    Outcome::new(
        formula == 100 && routes == 100,
        format!("{formula}/100 match (3(A+N)+L+C)/8, {routes}/100 with both routes equal to order 6"),
    )
}

fn criterion_4() -> Outcome {
    let cfg = IntegratorConfig::default();
    let none = Default::default();
    let fields = [
        ("uuu", catalog::get("quartic_uuu", &none).unwrap()),
        ("ttt", catalog::get("quartic_ttt", &[("a".to_string(), int(1))].into()).unwrap()),
        ("ssss", catalog::get("quintic_ssss", &none).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, e) in &fields {
        let f = e.normalized_field();
        let v = compute_lyapunov(&f, 6).unwrap().v;
        let exact = v.iter().all(|q| q.is_zero());
        let mut worst: f64 = 0.0;
        let mut numeric = true;
        for c in [0.05, 0.1, 0.2] {
            let d = return_map(&f, c, &cfg).unwrap().delta;
            worst = worst.max(d.abs() / c);
            numeric &= d.abs() < 1e-8 * c;
        }
        pass &= exact && numeric;
        let vs: Vec<String> = v.iter().map(|q| q.to_string()).collect();
        parts.push(format!("{name}: V=[{}] max|P(c)-c|/c={worst:.2e}", vs.join(", ")));
    }
    let uuu = fields[0].1.normalized_field();
    let eq = find_equilibria(&uuu, BoundingBox::square(2.0), 80);
    let star = eq.iter().find(|(x, y)| (y - 1.0).abs() < 1e-6 && (x + 1.324718).abs() < 1e-6);
    pass &= star.is_some();
    parts.push(format!("uuu equilibrium (x*,1): {star:?}"));
    Outcome::new(pass, parts.join("; "))
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = 0;
    for i in 0..200 {
        let n = 2 + (i % 11) as u32;
        let g = homogeneous(rng, n, 9);
        let sol = solve_homological(&g);
        let mut lhs = apply_rotational(&sol.f).into_poly();
        if n.is_multiple_of(2) {
            lhs += &r_power(n).scale(&sol.k_const);
        } else if !sol.k_const.is_zero() {
            bad += 1;
        }
        if &lhs != g.poly() {
            bad += 1;
        }
    }
    Outcome::new(bad == 0, format!("200 instances of degree 2..12, {bad} failures"))
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let lambdas = [frac(1, 3), frac(1, 2), frac(2, 3), int(1), int(2)];
    let (mut darboux, mut zero) = (0, 0);
    for i in 0..50 {
        let m = 2 + (i % 4) as u32;
        let lam = &lambdas[rng.gen_range(0..lambdas.len())];
        let g = homogeneous(rng, m - 1, 3);
        let fam = weak_center_family(m, lam, &g).unwrap();
        if verify_darboux(&fam.field, &fam.candidate) {
            darboux += 1;
        }
        if compute_lyapunov(&fam.field, 10).unwrap().v.iter().all(|q| q.is_zero()) {
            zero += 1;
        }
    }
    Outcome::new(
        darboux == 50 && zero == 50,
        format!("{darboux}/50 Darboux certificates, {zero}/50 with V1..V5 = 0"),
    )
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let cfg = IntegratorConfig::default();
    let mut fields = vec![(
        "chava56(1,0)".to_string(),
        catalog::get("chava56", &[("a".to_string(), int(1)), ("b".to_string(), int(0))].into()).unwrap().field,
    )];
    for _ in 0..3 {
        let g = homogeneous(rng, 2, 3);
        let label = format!("m=3, lambda=1/2, g2={}", g.poly());
        fields.push((label, weak_center_family(3, &frac(1, 2), &g).unwrap().field));
    }
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (label, f) in &fields {
        for c in [0.05, 0.1, 0.2] {
            match period(f, c, &cfg) {
                Ok(s) => {
                    let err = (s.period - 2.0 * PI).abs();
                    worst = worst.max(err);
                    if err >= 1e-8 {
                        failures.push(format!("{label} c={c}: T={}", s.period));
                    }
                }
                Err(e) => failures.push(format!("{label} c={c}: {e}")),
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("{} fields x 3 radii, max |T-2pi| = {worst:.2e}{}", fields.len(), first_of(&failures)),
    )
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let cfg = IntegratorConfig::default();
    let mut fields = vec![radial_cubic()];
    while fields.len() < 20 {
        let l: [Rational; 5] = std::array::from_fn(|_| int(rng.gen_range(-3..=3)));
        if !(&l[3] * (&l[1] - &l[4])).is_zero() {
            fields.push(bautin(&l));
        }
    }
    let mut agree = 0;
    for f in &fields {
        let v = compute_lyapunov(f, 2).unwrap().v[0].clone();
        let d = return_map(f, 0.05, &cfg).unwrap().delta;
        if d != 0.0 && (d > 0.0) == v.is_positive() {
            agree += 1;
        }
    }
    let p = return_map(&radial_cubic(), 0.1, &cfg).unwrap().p_of_c;
    let closed = 0.1 / (1.0 - 4.0 * PI * 0.01f64).sqrt();
    let ok = agree == 20 && (p - 0.106945).abs() < 1e-6 && (p - closed).abs() < 1e-8;
    Outcome::new(
        ok,
        format!("{agree}/20 signs agree at c=0.05; radial P(0.1) = {p:.12} (closed form {closed:.12})"),
    )
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Outcome {
    let mut fields: Vec<PlanarField> = (0..100).map(|_| bautin(&bautin_tuple(rng))).collect();
    fields.extend((0..100).map(|_| cubic(&cubic_coeffs(rng))));
    let mut changed = 0;
    for f in &fields {
        let base = first_nonzero(&compute_lyapunov(f, 6).unwrap().v);
        for _ in 0..5 {
            let gauged = compute_lyapunov_gauged(f, 6, |_| rat(rng, 9)).unwrap();
            if first_nonzero(&gauged.v) != base {
                changed += 1;
            }
        }
    }
    Outcome::new(changed == 0, format!("200 fields x 5 gauges at order 6, {changed} changed the first nonzero constant"))
}

fn criterion_10(rng: &mut ChaCha8Rng) -> Outcome {
    let cfg = IntegratorConfig::default();
    let (mut symbolic, mut worst) = (0, 0.0f64);
    for i in 0..100 {
        let m = 2 + (i % 4) as u32;
        let h: Vec<HomogeneousPoly> = (3..=m + 1).map(|d| homogeneous(rng, d, 3)).collect();
        let g: Vec<HomogeneousPoly> = (1..m).map(HomogeneousPoly::zero).collect();
        let nu = if m % 2 == 1 { rat(rng, 3) } else { int(0) };
        let spec = InverseSpec::new(m, h, g, nu).unwrap();
        assert!(spec.divergence_condition().is_zero());
        let f = build_field(&spec);
        let ham = spec.hamiltonian().unwrap();
        if f.divergence().is_zero() && f.lie(&ham).is_zero() {
            symbolic += 1;
        }
        let drift = max_drift(&f, &ham, 0.05, 0.0, 100.0, &cfg).unwrap();
        worst = worst.max(drift);
    }
    Outcome::new(
        symbolic == 100 && worst < 1e-9,
        format!("{symbolic}/100 with div = 0 and X(H) = 0; max energy drift over t<=100: {worst:.2e}"),
    )
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let titles = [
        "Bautin first constant identity",
        "Bautin center cases",
        "quasi-homogeneous cubic first constant",
        "published quartic/quintic examples",
        "homological solver round trip",
        "Darboux certificates",
        "isochrony",
        "sign oracle",
        "gauge independence",
        "Hamiltonian round trip",
    ];
    let mut unexpected = 0;
    let total = Instant::now();
    for (i, title) in titles.iter().enumerate() {
        let n = i + 1;
        let t = Instant::now();
        let out = match n {
            1 => criterion_1(&mut rng),
            2 => criterion_2(&mut rng),
            3 => criterion_3(&mut rng),
            4 => criterion_4(),
            5 => criterion_5(&mut rng),
            6 => criterion_6(&mut rng),
            7 => criterion_7(&mut rng),
            8 => criterion_8(&mut rng),
            9 => criterion_9(&mut rng),
            _ => criterion_10(&mut rng),
        };
        let known = KNOWN_UNATTAINABLE.contains(&n);
        let status = if out.pass { "PASS" } else { "FAIL" };
        let note = if !out.pass && known { " (known: published claim refuted)" } else { "" };
        println!("criterion {n:>2} {status} {title}: {} [{:.1}s]{note}", out.detail, t.elapsed().as_secs_f64());
        if !out.pass && (strict || !known) {
            unexpected += 1;
        }
    }
    println!("acceptance finished in {:.1}s", total.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
