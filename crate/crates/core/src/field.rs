//! Planar polynomial vector fields `x' = P, y' = Q`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::BiPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarField {
    pub p: BiPoly,
    pub q: BiPoly,
}

/// Sense of rotation of the linear part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `(-y, x)`
    CounterClockwise,
    /// `(y, -x)`
    Clockwise,
    Other,
}

impl PlanarField {
    pub fn new(p: BiPoly, q: BiPoly) -> Self {
        PlanarField { p, q }
    }

    /// `x' = -y + X, y' = x + Y`.
    pub fn from_nonlinear(x_part: BiPoly, y_part: BiPoly) -> Self {
        PlanarField {
            p: &x_part - &BiPoly::y(),
            q: &y_part + &BiPoly::x(),
        }
    }

    pub fn orientation(&self) -> Orientation {
        let lin = |f: &BiPoly| (f.coeff(0, 0), f.coeff(1, 0), f.coeff(0, 1));
        let (p0, px, py) = lin(&self.p);
        let (q0, qx, qy) = lin(&self.q);
        if !(p0.is_zero() && q0.is_zero() && px.is_zero() && qy.is_zero()) {
            return Orientation::Other;
        }
        if py == -num_traits::one::<crate::Rational>() && qx.is_one() {
            Orientation::CounterClockwise
        } else if py.is_one() && qx == -num_traits::one::<crate::Rational>() {
            Orientation::Clockwise
        } else {
            Orientation::Other
        }
    }

    pub fn require_normalized(&self) -> Result<()> {
        match self.orientation() {
            Orientation::CounterClockwise => Ok(()),
            _ => Err(Error::NonNormalizedLinearPart),
        }
    }

    /// The same orbits traversed backwards.
    pub fn time_reversed(&self) -> PlanarField {
        PlanarField {
            p: -&self.p,
            q: -&self.q,
        }
    }

    /// Brings a clockwise linear centre to `(-y, x)` by reversing time; other
    /// fields are returned unchanged.
    pub fn normalized(&self) -> PlanarField {
        match self.orientation() {
            Orientation::Clockwise => self.time_reversed(),
            _ => self.clone(),
        }
    }

    /// `(X, Y)`: everything except the rotation `(-y, x)`.
    pub fn nonlinear(&self) -> (BiPoly, BiPoly) {
        (&self.p + &BiPoly::y(), &self.q - &BiPoly::x())
    }

    pub fn degree(&self) -> u32 {
        self.p.degree().unwrap_or(0).max(self.q.degree().unwrap_or(0))
    }

    pub fn divergence(&self) -> BiPoly {
        &self.p.dx() + &self.q.dy()
    }

    /// Derivative of `f` along the flow.
    pub fn lie(&self, f: &BiPoly) -> BiPoly {
        &(&self.p * &f.dx()) + &(&self.q * &f.dy())
    }

    /// `x Q - y P`, i.e. `r^2 theta'`.
    pub fn angular(&self) -> BiPoly {
        &(&BiPoly::x() * &self.q) - &(&BiPoly::y() * &self.p)
    }

    pub fn is_linear_rotation(&self) -> bool {
        let (x, y) = self.nonlinear();
        self.orientation() == Orientation::CounterClockwise && x.is_zero() && y.is_zero()
    }
}

impl fmt::Display for PlanarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x' = {}, y' = {}", self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn orientation_detection() {
        let f = PlanarField::from_nonlinear(BiPoly::term(2, 0, int(1)), BiPoly::zero());
        assert_eq!(f.orientation(), Orientation::CounterClockwise);
        assert!(f.require_normalized().is_ok());
        let r = f.time_reversed();
        assert_eq!(r.orientation(), Orientation::Clockwise);
        assert_eq!(r.normalized(), f);
        let g = PlanarField::new(BiPoly::y(), BiPoly::x());
        assert_eq!(g.require_normalized(), Err(Error::NonNormalizedLinearPart));
    }

    #[test]
    fn lie_of_r2_for_rotation_vanishes() {
        let f = PlanarField::from_nonlinear(BiPoly::zero(), BiPoly::zero());
        assert!(f.lie(&BiPoly::r2()).is_zero());
        assert_eq!(f.angular(), BiPoly::r2());
    }
}
