//! Formal Lyapunov function `V = r^2/2 + H_3 + H_4 + ...` and the constants
//! `V_k` in `dV/dt = sum V_k r^(2k+2)`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::PlanarField;
use crate::homological::{r_power, solve_homological_with_gauge};
use crate::poly::{poisson_bracket, rotational_derivative, BiPoly, HomogeneousPoly};
use crate::rational::{frac, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", content = "index")]
pub enum Verdict {
    /// Every computed constant vanished up to this order.
    CenterCandidate(usize),
    /// First nonzero constant is `V_k < 0`.
    StableFocus(usize),
    /// First nonzero constant is `V_k > 0`.
    UnstableFocus(usize),
}

impl Verdict {
    /// Sign of the first nonzero constant, 0 for a center candidate.
    pub fn sign(self) -> i8 {
        match self {
            Verdict::CenterCandidate(_) => 0,
            Verdict::StableFocus(_) => -1,
            Verdict::UnstableFocus(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovResult {
    pub order: usize,
    /// `H_2, H_3, ..., H_{order+1}`.
    pub h: Vec<HomogeneousPoly>,
    /// `V_1, ..., V_{order/2}`.
    pub v: Vec<Rational>,
    pub verdict: Verdict,
}

impl LyapunovResult {
    /// `H_n` for `2 <= n <= order + 1`.
    pub fn h_of(&self, n: u32) -> Option<&HomogeneousPoly> {
        self.h.get(n.checked_sub(2)? as usize)
    }

    /// `V_k`, 1-based.
    pub fn v_of(&self, k: usize) -> Option<&Rational> {
        self.v.get(k.checked_sub(1)?)
    }

    pub fn first_nonzero(&self) -> Option<(usize, &Rational)> {
        self.v.iter().enumerate().find(|(_, v)| !v.is_zero()).map(|(i, v)| (i + 1, v))
    }
}

fn h2() -> HomogeneousPoly {
    HomogeneousPoly::new(2, BiPoly::r2().scale(&frac(1, 2))).expect("homogeneous")
}

fn verdict_of(order: usize, v: &[Rational]) -> Verdict {
    match v.iter().enumerate().find(|(_, v)| !v.is_zero()) {
        None => Verdict::CenterCandidate(order),
        Some((k, val)) if val.is_negative() => Verdict::StableFocus(k + 1),
        Some((k, _)) => Verdict::UnstableFocus(k + 1),
    }
}

fn check_order(order: usize) -> Result<()> {
    if order < 2 {
        Err(Error::OrderTooSmall(order))
    } else {
        Ok(())
    }
}

pub fn compute_lyapunov(field: &PlanarField, order: usize) -> Result<LyapunovResult> {
    compute_lyapunov_gauged(field, order, |_| Rational::zero())
}

/// Like [`compute_lyapunov`] with the `r^n` coefficient of every even `H_n`
/// chosen by `gauge(n)`. The first nonzero constant does not depend on it.
pub fn compute_lyapunov_gauged(
    field: &PlanarField,
    order: usize,
    mut gauge: impl FnMut(u32) -> Rational,
) -> Result<LyapunovResult> {
    field.require_normalized()?;
    check_order(order)?;
    let (xn, yn) = field.nonlinear();
    let top = order as u32 + 2;
    let xs: Vec<BiPoly> = (0..=top).map(|k| xn.component(k)).collect();
    let ys: Vec<BiPoly> = (0..=top).map(|k| yn.component(k)).collect();

    let mut h = vec![h2()];
    // gradients of H_j, index j - 2
    let mut grads = vec![(BiPoly::x(), BiPoly::y())];
    let mut v = Vec::new();
    for n in 3..=top {
        let mut c = BiPoly::zero();
        for j in 2..n {
            let k = (n + 1 - j) as usize;
            if xs[k].is_zero() && ys[k].is_zero() {
                continue;
            }
            let (hx, hy) = &grads[(j - 2) as usize];
            c += &(hx * &xs[k]);
            c += &(hy * &ys[k]);
        }
        if n % 2 == 0 {
            v.push(c.circle_average());
        }
        if n <= order as u32 + 1 {
            let g = HomogeneousPoly::new(n, -c).expect("cross terms are homogeneous");
            let sol = solve_homological_with_gauge(&g, gauge(n));
            grads.push((sol.f.poly().dx(), sol.f.poly().dy()));
            h.push(sol.f);
        }
    }
    let verdict = verdict_of(order, &v);
    Ok(LyapunovResult { order, h, v, verdict })
}

/// Second route for fields `-y + X_m, x + Y_m` with a single homogeneous
/// nonlinearity: split off the radial part, write the rest through a
/// potential `h` and an angular factor `g`, and run the recursion with a
/// single cross term per degree. Agrees exactly with [`compute_lyapunov`].
pub fn constants_quasihomogeneous(field: &PlanarField, order: usize) -> Result<LyapunovResult> {
    field.require_normalized()?;
    check_order(order)?;
    let (xn, yn) = field.nonlinear();
    let m = match (xn.degree(), yn.degree()) {
        (None, None) => return compute_lyapunov(field, order),
        (a, b) => a.max(b).expect("nonzero"),
    };
    let homogeneous = |f: &BiPoly| f.is_zero() || (f.is_homogeneous() && f.degree() == Some(m));
    if m < 2 || !homogeneous(&xn) || !homogeneous(&yn) {
        return Err(Error::NotQuasiHomogeneous);
    }
    let radial = &(&BiPoly::x() * &xn) + &(&BiPoly::y() * &yn);
    let rho = radial.circle_average();
    let (mut xr, mut yr) = (xn.clone(), yn.clone());
    if !rho.is_zero() {
        let rr = r_power(m - 1).scale(&rho);
        xr -= &(&BiPoly::x() * &rr);
        yr -= &(&BiPoly::y() * &rr);
    }
    let div = &xr.dx() + &yr.dy();
    let g = solve_homological_with_gauge(
        &HomogeneousPoly::new(m - 1, div).expect("homogeneous"),
        Rational::zero(),
    );
    debug_assert!(g.k_const.is_zero());
    let g = g.f.into_poly();
    let hpot = (&(&(&BiPoly::x() * &yr) - &(&BiPoly::y() * &xr)) - &(&BiPoly::r2() * &g))
        .scale(&(Rational::from_integer(1.into()) / int(m as i64 + 1)));
    let rad = if rho.is_zero() {
        BiPoly::zero()
    } else {
        r_power(m - 1).scale(&rho)
    };

    let top = order as u32 + 2;
    let mut h = vec![h2()];
    let mut v = Vec::new();
    for n in 3..=top {
        let c = if n > m {
            let j = n - m + 1;
            let hj = h[(j - 2) as usize].poly();
            let mut c = poisson_bracket(&hpot, hj);
            c += &(&g * &rotational_derivative(hj));
            if !rad.is_zero() {
                c += &(&rad * hj).scale(&int(j as i64));
            }
            c
        } else {
            BiPoly::zero()
        };
        if n % 2 == 0 {
            v.push(c.circle_average());
        }
        if n <= order as u32 + 1 {
            let sol = solve_homological_with_gauge(
                &HomogeneousPoly::new(n, -c).expect("homogeneous"),
                Rational::zero(),
            );
            h.push(sol.f);
        }
    }
    let verdict = verdict_of(order, &v);
    Ok(LyapunovResult { order, h, v, verdict })
}

/// `H_2 + ... + H_{order+1}`.
pub fn lyapunov_function(res: &LyapunovResult) -> BiPoly {
    let mut out = BiPoly::zero();
    for h in &res.h {
        out += h.poly();
    }
    out
}

/// `dV/dt - sum V_k r^(2k+2)` for the truncated `V`. Every term has degree
/// at least `order + 2`.
pub fn residual(field: &PlanarField, res: &LyapunovResult) -> BiPoly {
    let mut out = field.lie(&lyapunov_function(res));
    for (k, vk) in res.v.iter().enumerate() {
        out -= &r_power(2 * (k as u32 + 1) + 2).scale(vk);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn bautin(l: [i64; 5]) -> PlanarField {
        let [l2, l3, l4, l5, l6] = l;
        PlanarField::from_nonlinear(
            BiPoly::from_ints(&[(2, 0, -l3, 1), (1, 1, 2 * l2 + l5, 1), (0, 2, l6, 1)]),
            BiPoly::from_ints(&[(2, 0, l2, 1), (1, 1, 2 * l3 + l4, 1), (0, 2, -l2, 1)]),
        )
    }

    fn radial_cubic() -> PlanarField {
        PlanarField::from_nonlinear(
            &BiPoly::x() * &BiPoly::r2(),
            &BiPoly::y() * &BiPoly::r2(),
        )
    }

    #[test]
    fn radial_cubic_constants() {
        let r = compute_lyapunov(&radial_cubic(), 6).unwrap();
        assert_eq!(r.v, vec![int(1), int(0), int(0)]);
        assert_eq!(r.verdict, Verdict::UnstableFocus(1));
        assert!(r.h[1..].iter().all(|h| h.is_zero()));
        let q = constants_quasihomogeneous(&radial_cubic(), 6).unwrap();
        assert_eq!(q, r);
    }

    #[test]
    fn bautin_first_constant() {
        // -lambda5 (lambda3 - lambda6) / 8, the sign confirmed by the return map
        let r = compute_lyapunov(&bautin([1, 2, 0, 3, -1]), 2).unwrap();
        assert_eq!(r.v, vec![frac(-9, 8)]);
        assert_eq!(r.verdict, Verdict::StableFocus(1));
        let r = compute_lyapunov(&bautin([1, 2, 0, -3, -1]), 2).unwrap();
        assert_eq!(r.verdict, Verdict::UnstableFocus(1));
    }

    #[test]
    fn bautin_h3_for_lambda2() {
        // x' = -y + x^2 - y^2 ... with lambda2 = 1: H_3 solves D H_3 = -(x X + y Y)
        let r = compute_lyapunov(&bautin([1, 0, 0, 0, 0]), 2).unwrap();
        let h3 = r.h_of(3).unwrap().poly().clone();
        assert_eq!(h3, BiPoly::from_ints(&[(3, 0, 1, 3), (1, 2, -1, 1)]));
    }

    #[test]
    fn linear_rotation_is_center() {
        let f = PlanarField::from_nonlinear(BiPoly::zero(), BiPoly::zero());
        let r = compute_lyapunov(&f, 8).unwrap();
        assert_eq!(r.verdict, Verdict::CenterCandidate(8));
        assert_eq!(r.v.len(), 4);
    }

    #[test]
    fn errors() {
        let f = PlanarField::new(BiPoly::y(), -BiPoly::x());
        assert_eq!(compute_lyapunov(&f, 4), Err(Error::NonNormalizedLinearPart));
        assert_eq!(compute_lyapunov(&bautin([0; 5]), 1), Err(Error::OrderTooSmall(1)));
        let mixed = PlanarField::from_nonlinear(BiPoly::from_ints(&[(2, 0, 1, 1), (3, 0, 1, 1)]), BiPoly::zero());
        assert_eq!(constants_quasihomogeneous(&mixed, 4), Err(Error::NotQuasiHomogeneous));
    }

    fn arb_field() -> impl Strategy<Value = PlanarField> {
        proptest::collection::vec((0u32..4, 0u32..4, -4i64..5, 1i64..4, proptest::bool::ANY), 1..6).prop_map(|v| {
            let mut xp = BiPoly::zero();
            let mut yp = BiPoly::zero();
            for (i, j, a, b, which) in v {
                if i + j < 2 {
                    continue;
                }
                let t = BiPoly::term(i, j, frac(a, b));
                if which { xp += &t } else { yp += &t }
            }
            PlanarField::from_nonlinear(xp, yp)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn residual_starts_above_order(f in arb_field(), order in 2usize..7) {
            let r = compute_lyapunov(&f, order).unwrap();
            let res = residual(&f, &r);
            prop_assert!(res.min_degree().is_none_or(|d| d >= order as u32 + 2));
        }

        #[test]
        fn first_constant_is_gauge_free(f in arb_field(), a in -3i64..4, b in -3i64..4) {
            let plain = compute_lyapunov(&f, 6).unwrap();
            let g = compute_lyapunov_gauged(&f, 6, |n| frac(a * n as i64 + b, 3)).unwrap();
            prop_assert_eq!(plain.verdict, g.verdict);
            prop_assert_eq!(plain.first_nonzero(), g.first_nonzero());
        }

        #[test]
        fn time_reversal_flips_first_sign(f in arb_field()) {
            // (x, y, t) -> (x, -y, -t) maps the reversed field back to a normalized one
            let r = f.time_reversed();
            let mirrored = PlanarField::new(r.p.reflect_y(), -r.q.reflect_y());
            let a = compute_lyapunov(&f, 6).unwrap();
            let b = compute_lyapunov(&mirrored, 6).unwrap();
            prop_assert_eq!(a.verdict.sign(), -b.verdict.sign());
        }
    }
}
