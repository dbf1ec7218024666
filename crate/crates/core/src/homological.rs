//! Inverting the rotation operator `D = x d/dy - y d/dx` on homogeneous
//! polynomials.

use num_complex::Complex;
use num_traits::Zero;

use crate::complex::{from_complex, to_complex, ComplexCoeffs};
use crate::poly::{rotational_derivative, BiPoly, HomogeneousPoly};
use crate::rational::{int, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct HomologicalSolution {
    /// Degree-n solution with `D f + k_const * r^n = g`.
    pub f: HomogeneousPoly,
    /// Obstruction, always zero for odd degree.
    pub k_const: Rational,
    /// Coefficient of `r^n` in `f` (the free kernel direction).
    pub gauge: Rational,
}

pub fn apply_rotational(f: &HomogeneousPoly) -> HomogeneousPoly {
    HomogeneousPoly::new(f.degree(), rotational_derivative(f.poly()))
        .expect("D preserves degree")
}

/// `r^n` as a polynomial; `n` must be even.
pub fn r_power(n: u32) -> BiPoly {
    debug_assert!(n.is_multiple_of(2));
    BiPoly::r2().pow(n / 2)
}

pub fn solve_homological(g: &HomogeneousPoly) -> HomologicalSolution {
    solve_homological_with_gauge(g, Rational::zero())
}

/// As [`solve_homological`] but with the `r^n` component of `f` set to
/// `gauge` (ignored for odd degree, where the kernel is trivial).
pub fn solve_homological_with_gauge(g: &HomogeneousPoly, gauge: Rational) -> HomologicalSolution {
    let n = g.degree();
    let gc = to_complex(g.poly());
    let mut fc = ComplexCoeffs::new();
    let mut k_const = Rational::zero();
    for ((k, l), c) in gc.iter() {
        if k == l {
            k_const = c.re.clone();
        } else {
            // D(z^k zbar^l) = i(k - l) z^k zbar^l
            let d = int(k as i64 - l as i64);
            fc.add(k, l, Complex::new(&c.im / &d, -&c.re / &d));
        }
    }
    let gauge = if n.is_multiple_of(2) { gauge } else { Rational::zero() };
    let mut f = from_complex(&fc).expect("conjugate symmetry is preserved");
    if !gauge.is_zero() {
        f += &r_power(n).scale(&gauge);
    }
    HomologicalSolution {
        f: HomogeneousPoly::new(n, f).expect("homogeneous by construction"),
        k_const,
        gauge,
    }
}
