//! Structural tests on a field: the `(h, g)` splitting, the weak center
//! identity, reflection symmetries and the classical quadratic center
//! conditions.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::complex::field_coeffs;
use crate::error::{Error, Result};
use crate::field::PlanarField;
use crate::homological::solve_homological;
use crate::poly::{BiPoly, HomogeneousPoly};
use crate::rational::{int, Rational};

/// `X = -h_y - y g`, `Y = h_x + x g` for the nonlinear part `(X, Y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HGDecomposition {
    pub h: BiPoly,
    pub g: BiPoly,
}

impl HGDecomposition {
    /// The nonlinear part rebuilt from `(h, g)`.
    pub fn rebuild(&self) -> (BiPoly, BiPoly) {
        (
            &(-self.h.dy()) - &(&BiPoly::y() * &self.g),
            &self.h.dx() + &(&BiPoly::x() * &self.g),
        )
    }
}

pub fn hg_decompose(field: &PlanarField) -> Result<HGDecomposition> {
    field.require_normalized()?;
    let (xn, yn) = field.nonlinear();
    let top = field.degree();
    let mut h = BiPoly::zero();
    let mut g = BiPoly::zero();
    for j in 2..=top {
        let (xj, yj) = (xn.component(j), yn.component(j));
        if xj.is_zero() && yj.is_zero() {
            continue;
        }
        let div = HomogeneousPoly::new(j - 1, &xj.dx() + &yj.dy()).expect("homogeneous");
        let sol = solve_homological(&div);
        if !sol.k_const.is_zero() {
            return Err(Error::ObstructionNonzeroAverage {
                degree: j - 1,
                value: sol.k_const,
            });
        }
        let gj = sol.f.into_poly();
        // Euler: (j+1) h = x h_x + y h_y = x Y - y X - r^2 g
        let hj = (&(&(&BiPoly::x() * &yj) - &(&BiPoly::y() * &xj)) - &(&BiPoly::r2() * &gj))
            .scale(&(Rational::from_integer(1.into()) / int(j as i64 + 1)));
        h += &hj;
        g += &gj;
    }
    let out = HGDecomposition { h, g };
    let (rx, ry) = out.rebuild();
    if rx != xn || ry != yn {
        return Err(Error::PreconditionFailed("(h, g) reconstruction is not exact".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakCenterResult {
    pub mu: Rational,
    /// Every homogeneous component of `x X + y Y` and of `div` has zero
    /// circle average.
    pub integral_ok: bool,
    /// `2 / mu` when `mu != 0`.
    pub lambda_darboux: Option<Rational>,
}

/// Looks for `mu` with `(x^2 + y^2) div(X, Y) = mu (x X + y Y)`.
pub fn weak_center_check(field: &PlanarField) -> Option<WeakCenterResult> {
    let (xn, yn) = field.nonlinear();
    let div = &xn.dx() + &yn.dy();
    let lhs = &BiPoly::r2() * &div;
    let radial = &(&BiPoly::x() * &xn) + &(&BiPoly::y() * &yn);
    let mu = if lhs.is_zero() {
        Rational::zero()
    } else {
        let (m, c) = radial.leading()?;
        lhs.coeff(m.i, m.j) / c
    };
    if lhs != radial.scale(&mu) {
        return None;
    }
    let integral_ok = radial
        .components()
        .iter()
        .chain(div.components().iter())
        .all(|c| c.circle_average().is_zero());
    let lambda_darboux = (!mu.is_zero()).then(|| int(2) / &mu);
    Some(WeakCenterResult {
        mu,
        integral_ok,
        lambda_darboux,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    /// Invariant under `(x, y, t) -> (x, -y, -t)`.
    pub rev_x_axis: bool,
    /// Invariant under `(x, y, t) -> (-x, y, -t)`.
    pub rev_y_axis: bool,
    pub cauchy_riemann: bool,
    pub hamiltonian: bool,
}

pub fn detect_symmetries(field: &PlanarField) -> SymmetryReport {
    let a = field_coeffs(&field.p, &field.q);
    let rev_x_axis = a.iter().all(|(_, c)| c.re.is_zero());
    let rev_y_axis = a.iter().all(|((k, l), c)| {
        let cc = c.conj();
        if (k + l) % 2 == 0 {
            *c == cc
        } else {
            *c == -cc
        }
    });
    let (xn, yn) = field.nonlinear();
    let cauchy_riemann = xn.dx() == yn.dy() && xn.dy() == -yn.dx();
    SymmetryReport {
        rev_x_axis,
        rev_y_axis,
        cauchy_riemann,
        hamiltonian: field.divergence().is_zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum BautinCase {
    I,
    II,
    III,
    IV,
}

/// Center conditions for
/// `x' = -y - l3 x^2 + (2 l2 + l5) x y + l6 y^2`,
/// `y' = x + l2 x^2 + (2 l3 + l4) x y - l2 y^2`.
pub fn bautin_classify(
    l2: &Rational,
    l3: &Rational,
    l4: &Rational,
    l5: &Rational,
    l6: &Rational,
) -> BTreeSet<BautinCase> {
    let mut out = BTreeSet::new();
    if l4.is_zero() && l5.is_zero() {
        out.insert(BautinCase::I);
    }
    if l2.is_zero() && l5.is_zero() {
        out.insert(BautinCase::II);
    }
    if l3 == l6 {
        out.insert(BautinCase::III);
    }
    if l5.is_zero()
        && (l4 + int(5) * (l3 - l6)).is_zero()
        && (l3 * l6 - int(2) * l6 * l6 - l2 * l2).is_zero()
    {
        out.insert(BautinCase::IV);
    }
    out
}

pub fn bautin_field(
    l2: &Rational,
    l3: &Rational,
    l4: &Rational,
    l5: &Rational,
    l6: &Rational,
) -> PlanarField {
    let two = int(2);
    PlanarField::from_nonlinear(
        BiPoly::from_terms([
            (2, 0, -l3.clone()),
            (1, 1, &two * l2 + l5),
            (0, 2, l6.clone()),
        ]),
        BiPoly::from_terms([
            (2, 0, l2.clone()),
            (1, 1, &two * l3 + l4),
            (0, 2, -l2.clone()),
        ]),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SchlomiukCase {
    I,
    II,
    III,
}

/// Center conditions for
/// `x' = y + a x^2 + b x y + c y^2`, `y' = -x + k x^2 + l x y + m y^2`.
pub fn schlomiuk_classify(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    k: &Rational,
    l: &Rational,
    m: &Rational,
) -> BTreeSet<SchlomiukCase> {
    let two = int(2);
    let five = int(5);
    let ac = a + c;
    let km = k + m;
    let p = &two * a + l;
    let q = b + &two * m;
    let mut out = BTreeSet::new();
    let i1 = &ac * &q - &p * &km;
    let i2 = k * &ac * &ac * &ac + (l - a) * &ac * &ac * &km + (m - b) * &ac * &km * &km
        - c * &km * &km * &km;
    if i1.is_zero() && i2.is_zero() {
        out.insert(SchlomiukCase::I);
    }
    if p.is_zero() && q.is_zero() {
        out.insert(SchlomiukCase::II);
    }
    if (&five * &ac - &p).is_zero()
        && (&five * &km - &q).is_zero()
        && (c * c + c * &ac + k * k + k * &km).is_zero()
    {
        out.insert(SchlomiukCase::III);
    }
    out
}

pub fn schlomiuk_field(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    k: &Rational,
    l: &Rational,
    m: &Rational,
) -> PlanarField {
    PlanarField::new(
        &BiPoly::y() + &BiPoly::from_terms([(2, 0, a.clone()), (1, 1, b.clone()), (0, 2, c.clone())]),
        &(-BiPoly::x()) + &BiPoly::from_terms([(2, 0, k.clone()), (1, 1, l.clone()), (0, 2, m.clone())]),
    )
}
