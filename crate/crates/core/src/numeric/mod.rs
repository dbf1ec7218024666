//! Floating-point oracle: orbits, the first-return map on the positive
//! x-axis, the period function and equilibria.

mod dopri;

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::PlanarField;
use crate::poly::BiPoly;
use crate::rational::to_f64;

pub use dopri::Segment;
use dopri::{State, Stepper};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Largest span of simulated time a single call may cover.
    pub max_time: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_step: 0.1,
            max_time: 1e4,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t <= 1e-2;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::InvalidParam {
                name: "tolerance".into(),
                reason: "must lie in (0, 1e-2]".into(),
            });
        }
        if !(self.max_step > 0.0 && self.max_time > 0.0) {
            return Err(Error::InvalidParam {
                name: "max_step/max_time".into(),
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Bail out when an orbit leaves any reasonable neighbourhood.
const ESCAPE_RADIUS: f64 = 1e8;
const MAX_STEPS: usize = 20_000_000;

/// A polynomial compiled to `f64` coefficients.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<(i32, i32, f64)>,
}

impl FloatPoly {
    pub fn new(p: &BiPoly) -> Self {
        FloatPoly {
            terms: p.terms().map(|(m, c)| (m.i as i32, m.j as i32, to_f64(c))).collect(),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
    }
}

#[derive(Clone, Debug)]
pub struct FloatField {
    p: FloatPoly,
    q: FloatPoly,
    px: FloatPoly,
    py: FloatPoly,
    qx: FloatPoly,
    qy: FloatPoly,
}

impl FloatField {
    pub fn new(f: &PlanarField) -> Self {
        FloatField {
            p: FloatPoly::new(&f.p),
            q: FloatPoly::new(&f.q),
            px: FloatPoly::new(&f.p.dx()),
            py: FloatPoly::new(&f.p.dy()),
            qx: FloatPoly::new(&f.q.dx()),
            qy: FloatPoly::new(&f.q.dy()),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    pub fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        [
            [self.px.eval(x, y), self.py.eval(x, y)],
            [self.qx.eval(x, y), self.qy.eval(x, y)],
        ]
    }

    /// Right-hand side on `(x, y, theta)` with `theta' = (x Q - y P) / r^2`.
    fn polar(&self, s: &State<3>) -> State<3> {
        let (p, q) = self.eval(s[0], s[1]);
        let r2 = s[0] * s[0] + s[1] * s[1];
        [p, q, (s[0] * q - s[1] * p) / r2]
    }
}

fn escaped(x: f64, y: f64) -> bool {
    !(x.is_finite() && y.is_finite()) || x.hypot(y) > ESCAPE_RADIUS
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub xy: Vec<(f64, f64)>,
    segments: Vec<Segment<2>>,
}

impl Trajectory {
    /// Dense-output state at any time inside the integrated span.
    pub fn sample(&self, t: f64) -> Option<(f64, f64)> {
        let k = self.segments.partition_point(|s| s.t1() < t);
        let s = self.segments.get(k)?;
        (t >= s.t0).then(|| {
            let v = s.at(t);
            (v[0], v[1])
        })
    }

    /// `t,x,y` rows, one per accepted step (plus the initial point).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y\n");
        for (t, (x, y)) in self.t.iter().zip(&self.xy) {
            let _ = writeln!(out, "{t},{x},{y}");
        }
        out
    }

    pub fn last(&self) -> (f64, (f64, f64)) {
        (*self.t.last().expect("nonempty"), *self.xy.last().expect("nonempty"))
    }
}

pub fn integrate(field: &PlanarField, x0: f64, y0: f64, t_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let ff = FloatField::new(field);
    let mut st = Stepper::new(
        |s: &State<2>| {
            let (p, q) = ff.eval(s[0], s[1]);
            [p, q]
        },
        0.0,
        [x0, y0],
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_step,
    );
    let mut tr = Trajectory {
        t: vec![0.0],
        xy: vec![(x0, y0)],
        segments: Vec::new(),
    };
    let stop = t_end.min(cfg.max_time);
    while st.t < stop {
        let seg = st.advance(stop)?;
        if escaped(st.y[0], st.y[1]) || st.steps > MAX_STEPS {
            return Err(Error::StepFailure(st.t));
        }
        tr.t.push(st.t);
        tr.xy.push((st.y[0], st.y[1]));
        tr.segments.push(seg);
    }
    if t_end > cfg.max_time {
        return Err(Error::TimeBudgetExceeded(st.t));
    }
    Ok(tr)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReturnMapSample {
    pub c: f64,
    pub p_of_c: f64,
    pub theta_total: f64,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodSample {
    pub c: f64,
    pub period: f64,
}

struct FirstReturn {
    time: f64,
    x: f64,
    theta: f64,
}

/// Follows the orbit through `(c, 0)` until the polar angle reaches `2 pi`,
/// then pins the crossing of `y = 0` with Newton iterations on exact steps
/// from the last accepted point.
fn first_return(field: &PlanarField, c: f64, cfg: &IntegratorConfig) -> Result<FirstReturn> {
    cfg.validate()?;
    if !(c > 0.0) {
        return Err(Error::InvalidParam {
            name: "c".into(),
            reason: "initial radius must be positive".into(),
        });
    }
    let ff = FloatField::new(field);
    let rhs = |s: &State<3>| ff.polar(s);
    let target = 2.0 * PI;
    let mut st = Stepper::new(rhs, 0.0, [c, 0.0, 0.0], cfg.rel_tol, cfg.abs_tol, cfg.max_step);
    if ff.polar(&st.y)[2] <= 0.0 {
        return Err(Error::AngleStalled(0.0));
    }
    loop {
        let seg = st.advance(cfg.max_time)?;
        if escaped(st.y[0], st.y[1]) || st.steps > MAX_STEPS {
            return Err(Error::StepFailure(st.t));
        }
        if ff.polar(&st.y)[2] <= 0.0 {
            return Err(Error::AngleStalled(st.t));
        }
        if st.y[2] >= target {
            // bracket on the interpolant: bisection with Newton steps
            let (mut lo, mut hi) = (seg.t0, seg.t1());
            let mut s = lo + (hi - lo) * (target - seg.y0[2]) / (seg.y1[2] - seg.y0[2]);
            for _ in 0..100 {
                let v = seg.at(s);
                let g = v[2] - target;
                if g > 0.0 {
                    hi = s;
                } else {
                    lo = s;
                }
                let d = ff.polar(&v)[2];
                let mut next = s - g / d;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                let done = (next - s).abs() < 1e-13 || hi - lo < 1e-13;
                s = next;
                if done {
                    break;
                }
            }
            // exact steps from the start of the segment; Newton on y
            let base = Stepper::new(rhs, seg.t0, seg.y0, cfg.rel_tol, cfg.abs_tol, cfg.max_step);
            let mut state = base.trial(s - seg.t0).y;
            for _ in 0..8 {
                let q = ff.eval(state[0], state[1]).1;
                let ds = -state[1] / q;
                s += ds;
                state = base.trial(s - seg.t0).y;
                if ds.abs() < 1e-15 * s.max(1.0) {
                    break;
                }
            }
            return Ok(FirstReturn {
                time: s,
                x: state[0],
                theta: state[2],
            });
        }
        if st.t >= cfg.max_time {
            return Err(Error::TimeBudgetExceeded(st.t));
        }
    }
}

pub fn return_map(field: &PlanarField, c: f64, cfg: &IntegratorConfig) -> Result<ReturnMapSample> {
    let r = first_return(field, c, cfg)?;
    Ok(ReturnMapSample {
        c,
        p_of_c: r.x,
        theta_total: r.theta,
        delta: r.x - c,
    })
}

pub fn period(field: &PlanarField, c: f64, cfg: &IntegratorConfig) -> Result<PeriodSample> {
    let r = first_return(field, c, cfg)?;
    Ok(PeriodSample { c, period: r.time })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl BoundingBox {
    pub fn square(half: f64) -> Self {
        BoundingBox {
            x_min: -half,
            x_max: half,
            y_min: -half,
            y_max: half,
        }
    }
}

fn straddles(vals: [f64; 4]) -> bool {
    vals.iter().any(|v| *v <= 0.0) && vals.iter().any(|v| *v >= 0.0)
}

/// Equilibria in the box: cells where both components change sign seed a
/// Newton iteration. Points satisfy `|P|, |Q| < 1e-10`, duplicates within
/// `1e-6` are merged, output is sorted.
pub fn find_equilibria(field: &PlanarField, bbox: BoundingBox, grid_n: usize) -> Vec<(f64, f64)> {
    let ff = FloatField::new(field);
    let n = grid_n.max(1);
    let dx = (bbox.x_max - bbox.x_min) / n as f64;
    let dy = (bbox.y_max - bbox.y_min) / n as f64;
    let node = |i: usize, j: usize| ff.eval(bbox.x_min + i as f64 * dx, bbox.y_min + j as f64 * dy);
    let grid: Vec<Vec<(f64, f64)>> = (0..=n).map(|i| (0..=n).map(|j| node(i, j)).collect()).collect();
    let mut found: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corners = [grid[i][j], grid[i + 1][j], grid[i][j + 1], grid[i + 1][j + 1]];
            if !straddles(corners.map(|c| c.0)) || !straddles(corners.map(|c| c.1)) {
                continue;
            }
            let start = (bbox.x_min + (i as f64 + 0.5) * dx, bbox.y_min + (j as f64 + 0.5) * dy);
            if let Some(pt) = newton(&ff, start) {
                let inside = pt.0 >= bbox.x_min - dx
                    && pt.0 <= bbox.x_max + dx
                    && pt.1 >= bbox.y_min - dy
                    && pt.1 <= bbox.y_max + dy;
                if inside && !found.iter().any(|q| (q.0 - pt.0).hypot(q.1 - pt.1) < 1e-6) {
                    found.push(pt);
                }
            }
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    found
}

fn newton(ff: &FloatField, start: (f64, f64)) -> Option<(f64, f64)> {
    let (mut x, mut y) = start;
    for _ in 0..60 {
        let (p, q) = ff.eval(x, y);
        if p.abs() < 1e-13 && q.abs() < 1e-13 {
            break;
        }
        let [[a, b], [c, d]] = ff.jacobian(x, y);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        x -= (d * p - b * q) / det;
        y -= (a * q - c * p) / det;
        if !(x.is_finite() && y.is_finite()) {
            return None;
        }
    }
    let (p, q) = ff.eval(x, y);
    (p.abs() < 1e-10 && q.abs() < 1e-10).then_some((x, y))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NumericVerdict {
    /// Every displacement stayed below `tol`.
    CenterLike { tol: f64, max_delta: f64 },
    /// All displacements above `tol` share this sign.
    FocusLike { sign: i8 },
}

pub fn numeric_classify(field: &PlanarField, grid: &[f64], cfg: &IntegratorConfig) -> Result<NumericVerdict> {
    let cmax = grid.iter().cloned().fold(0.0, f64::max);
    numeric_classify_with_tol(field, grid, cfg, 1e-9 * cmax)
}

pub fn numeric_classify_with_tol(
    field: &PlanarField,
    grid: &[f64],
    cfg: &IntegratorConfig,
    tol: f64,
) -> Result<NumericVerdict> {
    if grid.is_empty() {
        return Err(Error::InvalidParam {
            name: "c_grid".into(),
            reason: "empty".into(),
        });
    }
    let deltas = grid
        .iter()
        .map(|&c| return_map(field, c, cfg).map(|s| s.delta))
        .collect::<Result<Vec<_>>>()?;
    let max_delta = deltas.iter().map(|d| d.abs()).fold(0.0, f64::max);
    if max_delta < tol {
        return Ok(NumericVerdict::CenterLike { tol, max_delta });
    }
    let signs: Vec<i8> = deltas
        .iter()
        .filter(|d| d.abs() >= tol)
        .map(|d| if *d > 0.0 { 1 } else { -1 })
        .collect();
    if signs.iter().all(|s| *s == signs[0]) {
        Ok(NumericVerdict::FocusLike { sign: signs[0] })
    } else {
        Err(Error::Inconsistent(deltas))
    }
}

/// Largest deviation `|F(x(t), y(t)) - F(x0, y0)|` over `[0, t_end]`,
/// sampled at accepted steps and segment midpoints.
pub fn max_drift(
    field: &PlanarField,
    f: &BiPoly,
    x0: f64,
    y0: f64,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let tr = integrate(field, x0, y0, t_end, cfg)?;
    let fp = FloatPoly::new(f);
    let f0 = fp.eval(x0, y0);
    let mut worst: f64 = 0.0;
    for (seg, &(x, y)) in tr.segments.iter().zip(tr.xy.iter().skip(1)) {
        let mid = seg.at(seg.t0 + 0.5 * seg.h);
        worst = worst.max((fp.eval(x, y) - f0).abs()).max((fp.eval(mid[0], mid[1]) - f0).abs());
    }
    Ok(worst)
}

/// Drift of `f` along one revolution starting at `(c, 0)`.
pub fn revolution_drift(field: &PlanarField, f: &BiPoly, c: f64, cfg: &IntegratorConfig) -> Result<f64> {
    let t = period(field, c, cfg)?.period;
    max_drift(field, f, c, 0.0, t, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn linear() -> PlanarField {
        PlanarField::from_nonlinear(BiPoly::zero(), BiPoly::zero())
    }

    fn radial() -> PlanarField {
        PlanarField::from_nonlinear(&BiPoly::x() * &BiPoly::r2(), &BiPoly::y() * &BiPoly::r2())
    }

    fn closed_form(c: f64) -> f64 {
        c / (1.0 - 4.0 * PI * c * c).sqrt()
    }

    #[test]
    fn rotation_returns() {
        let cfg = IntegratorConfig::default();
        let tr = integrate(&linear(), 1.0, 0.0, 2.0 * PI, &cfg).unwrap();
        let (_, (x, y)) = tr.last();
        assert!((x - 1.0).abs() < 1e-10 && y.abs() < 1e-10);
        let r = return_map(&linear(), 0.3, &cfg).unwrap();
        assert!(r.delta.abs() < 1e-11);
        assert!((r.theta_total - 2.0 * PI).abs() < 1e-9);
        let t = period(&linear(), 0.7, &cfg).unwrap();
        assert!((t.period - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn radial_cubic_closed_form() {
        let cfg = IntegratorConfig::default();
        for c in [0.05, 0.1, 0.15] {
            let r = return_map(&radial(), c, &cfg).unwrap();
            assert!((r.p_of_c - closed_form(c)).abs() < 1e-10, "{c}: {}", r.p_of_c);
        }
        assert!((closed_form(0.1) - 0.106945).abs() < 1e-6);
        assert_eq!(
            numeric_classify(&radial(), &[0.05, 0.1], &cfg).unwrap(),
            NumericVerdict::FocusLike { sign: 1 }
        );
    }

    #[test]
    fn equilibria() {
        let box2 = BoundingBox::square(2.0);
        let eq = find_equilibria(&linear(), box2, 40);
        assert_eq!(eq.len(), 1);
        assert!(eq[0].0.abs() < 1e-12 && eq[0].1.abs() < 1e-12);
        let f = PlanarField::from_nonlinear(BiPoly::zero(), BiPoly::term(2, 0, int(1)));
        let eq = find_equilibria(&f, box2, 40);
        assert_eq!(eq.len(), 2);
        assert!((eq[0].0 + 1.0).abs() < 1e-12 && eq[1].0.abs() < 1e-12);
    }

    #[test]
    fn csv_and_sampling() {
        let cfg = IntegratorConfig::default();
        let tr = integrate(&linear(), 1.0, 0.0, 1.0, &cfg).unwrap();
        let csv = tr.to_csv();
        assert!(csv.starts_with("t,x,y\n0,1,0\n"));
        assert_eq!(csv.lines().count(), tr.t.len() + 1);
        let (x, y) = tr.sample(0.5).unwrap();
        assert!((x - 0.5f64.cos()).abs() < 1e-10 && (y - 0.5f64.sin()).abs() < 1e-10);
        assert!(tr.sample(2.0).is_none());
    }

    #[test]
    fn errors() {
        let cfg = IntegratorConfig::default();
        // clockwise rotation: the angle decreases
        let cw = linear().time_reversed();
        assert!(matches!(return_map(&cw, 0.1, &cfg), Err(Error::AngleStalled(_))));
        let tight = IntegratorConfig { max_time: 1.0, ..cfg };
        assert!(matches!(return_map(&linear(), 0.1, &tight), Err(Error::TimeBudgetExceeded(_))));
        assert!(matches!(integrate(&linear(), 0.1, 0.0, 5.0, &tight), Err(Error::TimeBudgetExceeded(_))));
        // finite-time blow-up: x' = x^2
        let blow = PlanarField::new(BiPoly::term(2, 0, int(1)), BiPoly::zero());
        assert!(matches!(integrate(&blow, 1.0, 0.0, 2.0, &cfg), Err(Error::StepFailure(_))));
        let bad = IntegratorConfig { rel_tol: 0.5, ..cfg };
        assert!(integrate(&linear(), 1.0, 0.0, 1.0, &bad).is_err());
    }
}
