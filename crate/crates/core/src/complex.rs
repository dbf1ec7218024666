//! Coordinates `z = x + iy`, `zbar = x - iy`. A real polynomial becomes a sum
//! of `c_kl z^k zbar^l` with `c_lk = conj(c_kl)`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Monomial};
use crate::rational::{int, Rational};

pub type Gaussian = Complex<Rational>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexCoeffs {
    entries: BTreeMap<(u32, u32), Gaussian>,
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for t in 0..k {
        acc = acc * int((n - t) as i64) / int((t + 1) as i64);
    }
    acc
}

fn i_pow(e: u32) -> Gaussian {
    let (re, im) = match e % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    Complex::new(int(re), int(im))
}

impl ComplexCoeffs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, k: u32, l: u32, c: Gaussian) {
        let e = self
            .entries
            .entry((k, l))
            .or_insert_with(|| Complex::new(Rational::zero(), Rational::zero()));
        *e += c;
        if e.is_zero() {
            self.entries.remove(&(k, l));
        }
    }

    pub fn get(&self, k: u32, l: u32) -> Gaussian {
        self.entries
            .get(&(k, l))
            .cloned()
            .unwrap_or_else(|| Complex::new(Rational::zero(), Rational::zero()))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &Gaussian)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self + i * other`
    pub fn add_times_i(&self, other: &ComplexCoeffs) -> ComplexCoeffs {
        let mut out = self.clone();
        for ((k, l), c) in other.iter() {
            out.add(k, l, c * i_pow(1));
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.entries
            .iter()
            .all(|(&(k, l), c)| self.get(l, k) == c.conj())
    }
}

/// Rewrites a real polynomial in the `z, zbar` basis.
pub fn to_complex(p: &BiPoly) -> ComplexCoeffs {
    let mut out = ComplexCoeffs::new();
    let half = Rational::new(1.into(), 2.into());
    for (m, c) in p.terms() {
        let (a, b) = (m.i, m.j);
        // x^a y^b = 2^-(a+b) (-i)^b (z + zbar)^a (z - zbar)^b
        let pre = Complex::new(c * num_traits::pow(half.clone(), (a + b) as usize), Rational::zero())
            * i_pow((4 - b % 4) % 4);
        for s in 0..=a {
            let bs = binomial(a, s);
            for t in 0..=b {
                let mut w = &bs * binomial(b, t);
                if (b - t) % 2 == 1 {
                    w = -w;
                }
                out.add(s + t, a - s + b - t, &pre * Complex::new(w, Rational::zero()));
            }
        }
    }
    out
}

/// Inverse of [`to_complex`]; fails unless the coefficients are conjugate
/// symmetric.
pub fn from_complex(c: &ComplexCoeffs) -> Result<BiPoly> {
    let mut acc: BTreeMap<Monomial, Gaussian> = BTreeMap::new();
    for ((k, l), v) in c.iter() {
        // z^k zbar^l = (x + iy)^k (x - iy)^l
        for s in 0..=k {
            let bs = binomial(k, s);
            for t in 0..=l {
                let w = &bs * binomial(l, t);
                let mut unit = i_pow(k - s) * i_pow(l - t);
                if (l - t) % 2 == 1 {
                    unit = -unit;
                }
                let term = v * unit * Complex::new(w, Rational::zero());
                let e = acc
                    .entry(Monomial::new(s + t, k - s + l - t))
                    .or_insert_with(|| Complex::new(Rational::zero(), Rational::zero()));
                *e += term;
            }
        }
    }
    let mut out = BiPoly::zero();
    for (m, v) in acc {
        if !v.im.is_zero() {
            return Err(Error::NonRealInput);
        }
        out.add_term(m, v.re);
    }
    Ok(out)
}

/// Coefficients of `P + iQ` for a field `(P, Q)`.
pub fn field_coeffs(p: &BiPoly, q: &BiPoly) -> ComplexCoeffs {
    to_complex(p).add_times_i(&to_complex(q))
}
