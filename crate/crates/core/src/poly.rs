//! Sparse bivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, to_f64, Rational};

/// `x^i y^j`. Ordered by total degree, then by the power of `x`, so the
/// largest monomial of a polynomial is its graded-lex leading term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    pub const fn degree(self) -> u32 {
        self.i + self.j
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.i <= other.i && self.j <= other.j
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.i.cmp(&other.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::term(0, 0, c)
    }

    pub fn x() -> Self {
        BiPoly::term(1, 0, Rational::one())
    }

    pub fn y() -> Self {
        BiPoly::term(0, 1, Rational::one())
    }

    /// `c x^i y^j`
    pub fn term(i: u32, j: u32, c: Rational) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(Monomial::new(i, j), c);
        p
    }

    /// `x^2 + y^2`
    pub fn r2() -> Self {
        BiPoly::term(2, 0, Rational::one()) + BiPoly::term(0, 2, Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Rational)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for (i, j, c) in it {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    /// Convenience for tests and fixtures: integer numerator / denominator.
    pub fn from_ints(terms: &[(u32, u32, i64, i64)]) -> Self {
        BiPoly::from_terms(
            terms
                .iter()
                .map(|&(i, j, p, q)| (i, j, crate::rational::frac(p, q))),
        )
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Terms in increasing graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> BiPoly {
        let mut out = BiPoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn dx(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            if m.i > 0 {
                out.add_term(Monomial::new(m.i - 1, m.j), c * int(m.i as i64));
            }
        }
        out
    }

    pub fn dy(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            if m.j > 0 {
                out.add_term(Monomial::new(m.i, m.j - 1), c * int(m.j as i64));
            }
        }
        out
    }

    /// Part of total degree exactly `n`.
    pub fn component(&self, n: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .range(Monomial::new(0, n)..=Monomial::new(n, 0))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components, by increasing degree.
    pub fn components(&self) -> Vec<HomogeneousPoly> {
        let mut out: Vec<HomogeneousPoly> = Vec::new();
        for (m, c) in &self.terms {
            match out.last_mut() {
                Some(h) if h.degree == m.degree() => h.inner.add_term(*m, c.clone()),
                _ => out.push(HomogeneousPoly {
                    degree: m.degree(),
                    inner: BiPoly::term(m.i, m.j, c.clone()),
                }),
            }
        }
        out
    }

    /// Drops every term of degree above `max`.
    pub fn truncate(&self, max: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * num_traits::pow(x.clone(), m.i as usize) * num_traits::pow(y.clone(), m.j as usize);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| to_f64(c) * x.powi(m.i as i32) * y.powi(m.j as i32))
            .sum()
    }

    /// `(x, y) -> (-x, y)`
    pub fn reflect_x(&self) -> BiPoly {
        self.map_signs(|m| m.i % 2 == 1)
    }

    /// `(x, y) -> (x, -y)`
    pub fn reflect_y(&self) -> BiPoly {
        self.map_signs(|m| m.j % 2 == 1)
    }

    fn map_signs(&self, flip: impl Fn(Monomial) -> bool) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if flip(*m) { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// Substitutes polynomials for `x` and `y`.
    pub fn compose(&self, px: &BiPoly, py: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            out += &(&px.pow(m.i) * &py.pow(m.j)).scale(c);
        }
        out
    }

    /// Division with remainder in graded-lex order: `self = q * d + r` where
    /// no term of `r` is divisible by the leading monomial of `d`.
    pub fn div_rem(&self, d: &BiPoly) -> Option<(BiPoly, BiPoly)> {
        let (lm, lc) = d.leading()?;
        let lc = lc.clone();
        let mut q = BiPoly::zero();
        let mut r = BiPoly::zero();
        let mut p = self.clone();
        while let Some((m, c)) = p.leading() {
            let c = c.clone();
            if lm.divides(m) {
                let t = BiPoly::term(m.i - lm.i, m.j - lm.j, c / &lc);
                p -= &(&t * d);
                q += &t;
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Some((q, r))
    }

    /// Mean over the unit circle `x = cos t, y = sin t`.
    pub fn circle_average(&self) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * monomial_circle_average(m.i, m.j);
        }
        acc
    }

    /// Largest absolute value among the coefficients (zero polynomial gives 0).
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Average of `cos^a t sin^b t` over a period.
pub fn monomial_circle_average(a: u32, b: u32) -> Rational {
    if a % 2 == 1 || b % 2 == 1 {
        return Rational::zero();
    }
    let dfact = |n: i64| -> Rational {
        let mut acc = Rational::one();
        let mut k = n;
        while k > 1 {
            acc *= int(k);
            k -= 2;
        }
        acc
    };
    dfact(a as i64 - 1) * dfact(b as i64 - 1) / dfact((a + b) as i64)
}

/// `{f, g} = f_x g_y - f_y g_x`
pub fn poisson_bracket(f: &BiPoly, g: &BiPoly) -> BiPoly {
    &(&f.dx() * &g.dy()) - &(&f.dy() * &g.dx())
}

/// `D f = x f_y - y f_x`, the derivative along the rotation `(-y, x)`.
pub fn rotational_derivative(f: &BiPoly) -> BiPoly {
    &(&BiPoly::x() * &f.dy()) - &(&BiPoly::y() * &f.dx())
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(Monomial, &Rational)> = self.terms().collect();
        ordered.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(b.0.i.cmp(&a.0.i)));
        for (k, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = match (m.i, m.j) {
                (0, 0) => String::new(),
                (i, j) => {
                    let part = |v: &str, e: u32| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        e => format!("{v}^{e}"),
                    };
                    let xs = part("x", i);
                    let ys = part("y", j);
                    if !xs.is_empty() && !ys.is_empty() {
                        format!("{xs}*{ys}")
                    } else {
                        format!("{xs}{ys}")
                    }
                }
            };
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(Monomial::new(a.i + b.i, a.j + b.j), ca * cb);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl AddAssign<&BiPoly> for BiPoly {
    fn add_assign(&mut self, rhs: &BiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&BiPoly> for BiPoly {
    fn sub_assign(&mut self, rhs: &BiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $f(self, rhs: BiPoly) -> BiPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&BiPoly> for BiPoly {
            type Output = BiPoly;
            fn $f(self, rhs: &BiPoly) -> BiPoly {
                (&self).$f(rhs)
            }
        }
        impl $tr<BiPoly> for &BiPoly {
            type Output = BiPoly;
            fn $f(self, rhs: BiPoly) -> BiPoly {
                self.$f(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// A polynomial known to be homogeneous of a fixed degree (zero is allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    degree: u32,
    inner: BiPoly,
}

impl HomogeneousPoly {
    pub fn new(degree: u32, inner: BiPoly) -> Result<Self> {
        if inner.terms().any(|(m, _)| m.degree() != degree) {
            return Err(Error::NotHomogeneous(degree));
        }
        Ok(HomogeneousPoly { degree, inner })
    }

    pub fn zero(degree: u32) -> Self {
        HomogeneousPoly {
            degree,
            inner: BiPoly::zero(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &BiPoly {
        &self.inner
    }

    pub fn into_poly(self) -> BiPoly {
        self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn circle_average(&self) -> Rational {
        self.inner.circle_average()
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}
