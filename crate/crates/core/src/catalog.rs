//! Named fixture families with the properties each one is expected to have.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Orientation, PlanarField};
use crate::inverse::{weak_center_family, DarbouxCandidate};
use crate::lyapunov::compute_lyapunov;
use crate::poly::{BiPoly, HomogeneousPoly};
use crate::rational::{frac, int, sign, Rational};
use crate::structure::{bautin_classify, bautin_field, schlomiuk_classify, schlomiuk_field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tag {
    CenterCandidate,
    Isochronous,
    UniformlyIsochronous,
    Hamiltonian,
    Reversible,
    CauchyRiemann,
    FocusSign(i8),
    DarbouxCandidate,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: Vec<(String, Rational)>,
    /// As printed; see `orientation`.
    pub field: PlanarField,
    pub orientation: Orientation,
    pub expectations: BTreeSet<Tag>,
    pub darboux: Option<DarbouxCandidate>,
    /// Known equilibria other than the origin.
    pub equilibria: Vec<(f64, f64)>,
    /// The coefficients as published do not reproduce the claimed property.
    /// `expectations` still records the claim; tests check what the engines
    /// actually certify for these entries.
    pub unverified_source: bool,
}

impl CatalogEntry {
    /// Field with linear part `(-y, x)`, reversing time for clockwise entries.
    pub fn normalized_field(&self) -> PlanarField {
        self.field.normalized()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySignature {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub summary: &'static str,
}

const FAMILIES: &[FamilySignature] = &[
    FamilySignature { name: "bautin", params: &["l2", "l3", "l4", "l5", "l6"], summary: "general quadratic center-focus normal form" },
    FamilySignature { name: "chava23", params: &["a", "b", "L", "M"], summary: "cubic with degenerate infinity, isochronous" },
    FamilySignature { name: "chava56", params: &["a", "b"], summary: "quadratic with degenerate infinity, uniformly isochronous" },
    FamilySignature { name: "cubic_qh", params: &["A", "B", "C", "D", "K", "L", "M", "N"], summary: "cubic homogeneous nonlinearity" },
    FamilySignature { name: "kukles", params: &["alpha", "beta", "gamma", "K", "L", "M", "N"], summary: "Kukles cubic, x' = -y" },
    FamilySignature { name: "loud1", params: &[], summary: "isochronous quadratic (clockwise)" },
    FamilySignature { name: "loud2", params: &[], summary: "isochronous quadratic (clockwise)" },
    FamilySignature { name: "loud3", params: &[], summary: "isochronous quadratic (clockwise)" },
    FamilySignature { name: "loud4", params: &[], summary: "isochronous quadratic (clockwise)" },
    FamilySignature { name: "quartic_family", params: &["L40", "L22", "K04", "K22", "lambda"], summary: "quartic homogeneous nonlinearity with Darboux integral" },
    FamilySignature { name: "quartic_ttt", params: &["a"], summary: "non-reversible quartic, published as a center (computed: focus)" },
    FamilySignature { name: "quartic_uuu", params: &[], summary: "quartic published as a center (computed: focus), focus at (x*, 1)" },
    FamilySignature { name: "quintic_family", params: &["L50", "L41", "L23", "K05", "Lambda", "lambda"], summary: "quintic homogeneous nonlinearity with Darboux integral" },
    FamilySignature { name: "quintic_ssss", params: &[], summary: "non-reversible quintic center" },
    FamilySignature { name: "r01200", params: &["b", "c", "beta", "gamma"], summary: "cubic reversible in both axes (a = -1, alpha = 1)" },
    FamilySignature { name: "req", params: &["alpha", "r", "s"], summary: "reversible quadratic" },
    FamilySignature { name: "reqq", params: &["b", "c", "beta"], summary: "reversible quadratic" },
    FamilySignature { name: "rgg", params: &["l4", "l5"], summary: "holomorphic quadratic center" },
    FamilySignature { name: "rloud_cubic1", params: &[], summary: "isochronous cubic (clockwise)" },
    FamilySignature { name: "rloud_cubic2", params: &[], summary: "isochronous cubic (clockwise)" },
    FamilySignature { name: "rloud_cubic3", params: &[], summary: "isochronous cubic (clockwise)" },
    FamilySignature { name: "rloud_cubic4", params: &[], summary: "isochronous cubic (clockwise)" },
    FamilySignature { name: "schl", params: &["a", "b", "c", "k", "l", "m"], summary: "quadratic with clockwise linear part" },
    FamilySignature { name: "schl1", params: &["a", "beta", "lambda"], summary: "quadratic weak-center family" },
];

/// Families in a stable (alphabetical) order.
pub fn list() -> &'static [FamilySignature] {
    FAMILIES
}

struct Params<'a> {
    given: &'a BTreeMap<String, Rational>,
    sig: &'static FamilySignature,
}

impl Params<'_> {
    fn get(&self, k: &str) -> Result<Rational> {
        self.given.get(k).cloned().ok_or_else(|| Error::MissingParam(k.to_string()))
    }

    fn ordered(&self) -> Vec<(String, Rational)> {
        self.sig.params.iter().map(|k| (k.to_string(), self.given[*k].clone())).collect()
    }
}

fn poly(terms: Vec<(u32, u32, Rational)>) -> BiPoly {
    BiPoly::from_terms(terms)
}

fn ints(terms: &[(u32, u32, i64, i64)]) -> BiPoly {
    BiPoly::from_ints(terms)
}

fn tags(t: &[Tag]) -> BTreeSet<Tag> {
    t.iter().copied().collect()
}

pub fn get(name: &str, params: &BTreeMap<String, Rational>) -> Result<CatalogEntry> {
    let sig = FAMILIES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    for k in params.keys() {
        if !sig.params.contains(&k.as_str()) {
            return Err(Error::InvalidParam {
                name: k.clone(),
                reason: format!("`{name}` takes {:?}", sig.params),
            });
        }
    }
    let p = Params { given: params, sig };
    for k in sig.params {
        p.get(k)?;
    }
    let mut e = build(sig, &p)?;
    e.params = p.ordered();
    e.orientation = e.field.orientation();
    Ok(e)
}

fn entry(name: &'static str, field: PlanarField, expectations: BTreeSet<Tag>) -> CatalogEntry {
    CatalogEntry {
        name,
        params: Vec::new(),
        orientation: field.orientation(),
        field,
        expectations,
        darboux: None,
        equilibria: Vec::new(),
        unverified_source: false,
    }
}

fn nonzero(name: &str, v: &Rational) -> Result<()> {
    if v.is_zero() {
        Err(Error::InvalidParam {
            name: name.into(),
            reason: "must be nonzero".into(),
        })
    } else {
        Ok(())
    }
}

fn build(sig: &'static FamilySignature, p: &Params) -> Result<CatalogEntry> {
    use Tag::*;
    let x = BiPoly::x();
    let y = BiPoly::y();
    let e = match sig.name {
        "bautin" => {
            let [l2, l3, l4, l5, l6] = ["l2", "l3", "l4", "l5", "l6"].map(|k| p.get(k));
            let (l2, l3, l4, l5, l6) = (l2?, l3?, l4?, l5?, l6?);
            let field = bautin_field(&l2, &l3, &l4, &l5, &l6);
            let mut ex = BTreeSet::new();
            if !bautin_classify(&l2, &l3, &l4, &l5, &l6).is_empty() {
                ex.insert(CenterCandidate);
            } else {
                let v1 = compute_lyapunov(&field, 2)?.v[0].clone();
                if !v1.is_zero() {
                    ex.insert(FocusSign(sign(&v1)));
                }
            }
            entry("bautin", field, ex)
        }
        "schl" => {
            let [a, b, c, k, l, m] = ["a", "b", "c", "k", "l", "m"].map(|k| p.get(k));
            let (a, b, c, k, l, m) = (a?, b?, c?, k?, l?, m?);
            let ex = if schlomiuk_classify(&a, &b, &c, &k, &l, &m).is_empty() {
                BTreeSet::new()
            } else {
                tags(&[CenterCandidate])
            };
            entry("schl", schlomiuk_field(&a, &b, &c, &k, &l, &m), ex)
        }
        "schl1" => {
            let (a, beta, lam) = (p.get("a")?, p.get("beta")?, p.get("lambda")?);
            nonzero("lambda", &lam)?;
            // g = 2 (a y - beta x) / lambda
            let g = poly(vec![(0, 1, int(2) * &a / &lam), (1, 0, int(-2) * &beta / &lam)]);
            let fam = weak_center_family(2, &lam, &HomogeneousPoly::new(1, g).expect("linear"))?;
            let mut ex = tags(&[CenterCandidate, DarbouxCandidate]);
            if lam == frac(2, 3) {
                ex.insert(UniformlyIsochronous);
            }
            if lam == frac(1, 2) {
                ex.insert(CauchyRiemann);
                ex.insert(Isochronous);
            }
            let mut out = entry("schl1", fam.field, ex);
            out.darboux = Some(fam.candidate);
            out
        }
        "rgg" => {
            let (l4, l5) = (p.get("l4")?, p.get("l5")?);
            let q4 = &l4 / int(4);
            let q5 = &l5 / int(4);
            let field = PlanarField::from_nonlinear(
                poly(vec![(2, 0, q4.clone()), (0, 2, -q4.clone()), (1, 1, &l5 / int(2))]),
                poly(vec![(2, 0, -q5.clone()), (0, 2, q5.clone()), (1, 1, &l4 / int(2))]),
            );
            entry("rgg", field, tags(&[CauchyRiemann, Isochronous, CenterCandidate]))
        }
        "req" => {
            let (al, r, s) = (p.get("alpha")?, p.get("r")?, p.get("s")?);
            let field = PlanarField::from_nonlinear(
                poly(vec![(1, 1, int(-2) * al)]),
                poly(vec![(0, 2, r), (2, 0, s)]),
            );
            entry("req", field, tags(&[Reversible, CenterCandidate]))
        }
        "reqq" => {
            let (b, c, beta) = (p.get("b")?, p.get("c")?, p.get("beta")?);
            let field = PlanarField::from_nonlinear(poly(vec![(2, 0, b), (0, 2, c)]), poly(vec![(1, 1, beta)]));
            entry("reqq", field, tags(&[Reversible, CenterCandidate]))
        }
        "loud1" | "loud2" | "loud3" | "loud4" => {
            let yq = match sig.name {
                "loud1" => ints(&[(0, 2, 1, 1)]),
                "loud2" => ints(&[(0, 2, 1, 2), (2, 0, -1, 2)]),
                "loud3" => ints(&[(0, 2, 1, 4)]),
                _ => ints(&[(0, 2, 2, 1), (2, 0, -1, 2)]),
            };
            let field = PlanarField::new(&y + &(&x * &y), &(-&x) + &yq);
            entry(sig.name, field, tags(&[Isochronous, CenterCandidate, Reversible]))
        }
        "kukles" => {
            let ks = ["alpha", "beta", "gamma", "K", "L", "M", "N"].map(|k| p.get(k));
            let [al, be, ga, k, l, m, n] = ks;
            let yq = poly(vec![
                (2, 0, al?),
                (0, 2, be?),
                (1, 1, ga?),
                (3, 0, k?),
                (2, 1, l?),
                (1, 2, m?),
                (0, 3, n?),
            ]);
            entry("kukles", PlanarField::from_nonlinear(BiPoly::zero(), yq), BTreeSet::new())
        }
        "chava56" => {
            let (a, b) = (p.get("a")?, p.get("b")?);
            let g = poly(vec![(0, 1, int(3) * &a), (1, 0, int(-3) * &b)]);
            let fam = weak_center_family(2, &frac(2, 3), &HomogeneousPoly::new(1, g).expect("linear"))?;
            let mut out = entry(
                "chava56",
                fam.field,
                tags(&[UniformlyIsochronous, Isochronous, CenterCandidate, DarbouxCandidate]),
            );
            out.darboux = Some(fam.candidate);
            out
        }
        "chava23" => {
            let (a, b, l, m) = (p.get("a")?, p.get("b")?, p.get("L")?, p.get("M")?);
            let cubic = poly(vec![(2, 0, l.clone()), (1, 1, m), (0, 2, -l)]);
            let xq = &poly(vec![(2, 0, a.clone()), (0, 2, -a.clone()), (1, 1, int(2) * &b)]) + &(&x * &cubic);
            let yq = &poly(vec![(2, 0, -b.clone()), (0, 2, b.clone()), (1, 1, int(2) * &a)]) + &(&y * &cubic);
            let mut ex = tags(&[Isochronous, CenterCandidate]);
            if a.is_zero() && b.is_zero() {
                ex.insert(UniformlyIsochronous);
            }
            entry("chava23", PlanarField::from_nonlinear(xq, yq), ex)
        }
        "cubic_qh" => {
            let ks = ["A", "B", "C", "D", "K", "L", "M", "N"].map(|k| p.get(k));
            let [a, b, c, d, k, l, m, n] = ks;
            let (a, b, c, d, k, l, m, n) = (a?, b?, c?, d?, k?, l?, m?, n?);
            let field = PlanarField::from_nonlinear(
                poly(vec![(3, 0, a.clone()), (2, 1, b.clone()), (1, 2, c.clone()), (0, 3, d.clone())]),
                poly(vec![(3, 0, k.clone()), (2, 1, l.clone()), (1, 2, m.clone()), (0, 3, n.clone())]),
            );
            let first = cubic_first_constant(&a, &c, &l, &n);
            let ex = if !first.is_zero() {
                tags(&[FocusSign(sign(&first))])
            } else if cubic_center_conditions(&a, &b, &c, &d, &k, &l, &m, &n) {
                tags(&[CenterCandidate])
            } else {
                BTreeSet::new()
            };
            entry("cubic_qh", field, ex)
        }
        "rloud_cubic1" | "rloud_cubic2" | "rloud_cubic3" | "rloud_cubic4" => {
            let (fx, fy) = match sig.name {
                "rloud_cubic1" => (ints(&[(0, 0, 1, 1), (2, 0, 1, 1)]), ints(&[(0, 0, 1, 1), (0, 2, -1, 1)])),
                "rloud_cubic2" => (
                    ints(&[(0, 0, 1, 1), (2, 0, -3, 1), (0, 2, 1, 1)]),
                    ints(&[(0, 0, 1, 1), (0, 2, 3, 1), (2, 0, -1, 1)]),
                ),
                "rloud_cubic3" => (ints(&[(0, 0, 1, 1), (2, 0, 9, 1), (0, 2, -2, 1)]), ints(&[(0, 0, 1, 1), (0, 2, -3, 1)])),
                _ => (ints(&[(0, 0, 1, 1), (2, 0, -9, 1), (0, 2, 2, 1)]), ints(&[(0, 0, 1, 1), (0, 2, 3, 1)])),
            };
            let field = PlanarField::new(&y * &fx, -(&x * &fy));
            entry(sig.name, field, tags(&[Isochronous, CenterCandidate, Reversible]))
        }
        "quartic_uuu" => {
            let field = PlanarField::from_nonlinear(ints(&[(0, 4, 1, 1)]), ints(&[(4, 0, 1, 1), (2, 2, -1, 1)]));
            let mut out = entry("quartic_uuu", field, tags(&[CenterCandidate]));
            out.equilibria = vec![(-1.0, 0.0), (0.0, 1.0), (real_root_x3_minus_x_plus_1(), 1.0)];
            // V_3 = -1/64: the origin is a stable focus
            out.unverified_source = true;
            out
        }
        "quartic_ttt" => {
            let a = p.get("a")?;
            let field = PlanarField::from_nonlinear(
                BiPoly::zero(),
                poly(vec![(0, 4, a.clone()), (3, 1, int(-4) * a)]),
            );
            let mut out = entry("quartic_ttt", field, tags(&[CenterCandidate]));
            // V_3 = 3/32 at a = 1: a focus, not a center
            out.unverified_source = true;
            out
        }
        "quintic_ssss" => {
            let field = PlanarField::from_nonlinear(BiPoly::zero(), ints(&[(4, 1, -5, 1), (0, 5, 1, 1)]));
            entry("quintic_ssss", field, tags(&[CenterCandidate]))
        }
        "quartic_family" => quartic_family(p)?,
        "quintic_family" => quintic_family(p)?,
        "r01200" => {
            let (b, c, beta, gamma) = (p.get("b")?, p.get("c")?, p.get("beta")?, p.get("gamma")?);
            let fx = poly(vec![(0, 0, int(-1)), (2, 0, b), (0, 2, c)]);
            let fy = poly(vec![(0, 0, Rational::one()), (2, 0, beta), (0, 2, gamma)]);
            entry("r01200", PlanarField::new(&y * &fx, &x * &fy), tags(&[Reversible, CenterCandidate]))
        }
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok(e)
}

/// First constant of `-y + X_3, x + Y_3`: `(3(A + N) + L + C) / 8`.
pub fn cubic_first_constant(a: &Rational, c: &Rational, l: &Rational, n: &Rational) -> Rational {
    (int(3) * (a + n) + l + c) / int(8)
}

/// The two published center conditions for the cubic family.
#[allow(clippy::too_many_arguments)]
pub fn cubic_center_conditions(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    k: &Rational,
    l: &Rational,
    m: &Rational,
    n: &Rational,
) -> bool {
    let two = int(2);
    let three = int(3);
    let s = &three * a + l;
    let bm = b + m;
    let first = (&s + c + &three * n).is_zero();
    let i = first
        && (&s * (b + d + k + m) - &two * (a - n) * &bm).is_zero()
        && (&two * (a + n) * (&s * &s - &bm * &bm) + &s * &bm * (b + k - d - m)).is_zero();
    let ii = first
        && (&two * a + c - l - &two * n).is_zero()
        && (b + &three * d - &three * k - m).is_zero()
        && (b + int(5) * d + int(5) * k + m).is_zero()
        && ((a + &three * n) * (&three * a + n) - int(16) * d * k).is_zero();
    i || ii
}

fn real_root_x3_minus_x_plus_1() -> f64 {
    // Cardano for x^3 - x + 1 = 0 (one real root)
    let q = 0.5;
    let disc = (0.25f64 - 1.0 / 27.0).sqrt();
    -(q - disc).cbrt() - (q + disc).cbrt()
}

fn quartic_family(p: &Params) -> Result<CatalogEntry> {
    let (l40, l22, k04, k22, lam) = (p.get("L40")?, p.get("L22")?, p.get("K04")?, p.get("K22")?, p.get("lambda")?);
    nonzero("lambda", &lam)?;
    let one = Rational::one();
    let two = int(2);
    let three_l2 = int(3) * &lam * &lam;
    let q = int(15) * &lam * &lam - int(16) * &lam + int(4);
    let xq = poly(vec![
        (4, 0, l40.clone()),
        (2, 2, l22.clone()),
        (1, 3, -(&two * &k04 / &lam) * (&two * &lam - &one)),
        (3, 1, -((int(10) * &lam - int(4)) * &k04 + &two * &lam * (&lam - &one) * &k22) / &three_l2),
        (0, 4, -(&lam * (&two - int(5) * &lam) * &l22 + &q * &l40) / &three_l2),
    ]);
    let yq = poly(vec![
        (0, 4, k04.clone()),
        (2, 2, k22.clone()),
        (3, 1, -(&two * (&two * &lam - &one) * &l40 / &lam)),
        (1, 3, -(&two / &three_l2) * ((int(5) * &lam - &two) * &l40 + &lam * (&lam - &one) * &l22)),
        (4, 0, -(&two / &three_l2) * (&q * &k04 + (&two * &lam - int(5) * &lam * &lam) * &k22)),
    ]);
    let mut out = entry("quartic_family", PlanarField::from_nonlinear(xq, yq), tags(&[Tag::CenterCandidate]));
    // the y' x^4 coefficient carries 2/(3 lambda^2) where the Darboux
    // construction needs 1/(3 lambda^2)
    out.unverified_source = true;
    Ok(out)
}

fn quintic_family(p: &Params) -> Result<CatalogEntry> {
    let (l50, l41, l23, k05, big, lam) = (
        p.get("L50")?,
        p.get("L41")?,
        p.get("L23")?,
        p.get("K05")?,
        p.get("Lambda")?,
        p.get("lambda")?,
    );
    nonzero("lambda", &lam)?;
    let one = Rational::one();
    let two = int(2);
    let three = int(3);
    let five = int(5);
    let l2 = &lam * &lam;
    let l3 = &l2 * &lam;
    let xq = poly(vec![
        (5, 0, l50.clone()),
        (4, 1, l41.clone()),
        (2, 3, -(&three * &lam * &k05 + &l50 * (&two - &three * &lam)) / &lam),
        (1, 4, &k05 * (&five * &lam - &two) / &lam),
        (2, 3, l23.clone()),
        (
            0,
            5,
            (&three * &lam - &one) / (&two * &l3)
                * (&l2 * &l23 - &two * &big * (&two * &l2 - &three * &lam + &one) + &lam * (&one - &two * &lam) * &l41),
        ),
    ]);
    let yq = poly(vec![
        (4, 1, -(&two - &five * &lam) / &lam * &l50),
        (2, 3, -((&three * &lam - &two) * &k05 / &lam - &three * &l50)),
        (0, 5, -k05.clone()),
        (
            1,
            4,
            (&l2 * (&lam - &one) + &big * (int(6) * &l2 - int(8) * &lam + &two) + &lam * (&three * &lam - &one) * &l41)
                / (&two * &l3),
        ),
    ]);
    let mut out = entry("quintic_family", PlanarField::from_nonlinear(xq, yq), tags(&[Tag::CenterCandidate]));
    out.unverified_source = true;
    Ok(out)
}

/// Parses `k=v` pairs.
pub fn parse_params<'a, I: IntoIterator<Item = &'a str>>(pairs: I) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for kv in pairs {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("`{kv}` is not of the form name=value")))?;
        out.insert(k.trim().to_string(), crate::rational::parse_rational(v)?);
    }
    Ok(out)
}
