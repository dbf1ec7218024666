//! Dormand-Prince 5(4) with the standard continuous extension. Systems are
//! autonomous, so the node times never enter.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

pub type State<const N: usize> = [f64; N];

fn axpy<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (a, k) in terms {
        if *a != 0.0 {
            for i in 0..N {
                out[i] += h * a * k[i];
            }
        }
    }
    out
}

/// One accepted step together with its interpolant.
#[derive(Clone, Debug)]
pub struct Segment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    pub y0: State<N>,
    pub y1: State<N>,
    r: [State<N>; 5],
}

impl<const N: usize> Segment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// State at `t` in `[t0, t0 + h]`.
    pub fn at(&self, t: f64) -> State<N> {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut out = [0.0; N];
        for (i, o) in out.iter_mut().enumerate() {
            let r = &self.r;
            *o = r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
        }
        out
    }
}

pub struct Stepper<const N: usize, F: Fn(&State<N>) -> State<N>> {
    f: F,
    rtol: f64,
    atol: f64,
    max_step: f64,
    pub t: f64,
    pub y: State<N>,
    k1: State<N>,
    h: f64,
    pub steps: usize,
}

/// Result of a single trial step of fixed size.
pub struct Trial<const N: usize> {
    pub y: State<N>,
    err: f64,
    k: [State<N>; 7],
}

impl<const N: usize, F: Fn(&State<N>) -> State<N>> Stepper<N, F> {
    pub fn new(f: F, t0: f64, y0: State<N>, rtol: f64, atol: f64, max_step: f64) -> Self {
        let k1 = f(&y0);
        let scale = y0
            .iter()
            .map(|v| atol + rtol * v.abs())
            .fold(f64::INFINITY, f64::min);
        let speed = k1.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let h = if speed > 0.0 { 0.01 * (scale / speed).powf(0.2).max(1e-3) } else { 1e-3 };
        Stepper {
            f,
            rtol,
            atol,
            max_step,
            t: t0,
            y: y0,
            k1,
            h: h.min(max_step),
            steps: 0,
        }
    }

    /// A step of size `h` from the current state, without committing it.
    pub fn trial(&self, h: f64) -> Trial<N> {
        let f = &self.f;
        let y = &self.y;
        let k1 = self.k1;
        let k2 = f(&axpy(y, h, &[(A21, &k1)]));
        let k3 = f(&axpy(y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y1 = axpy(y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(&y1);
        let mut acc = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
            acc += (e / sc) * (e / sc);
        }
        Trial {
            y: y1,
            err: (acc / N as f64).sqrt(),
            k: [k1, k2, k3, k4, k5, k6, k7],
        }
    }

    fn segment(&self, h: f64, tr: &Trial<N>) -> Segment<N> {
        let [k1, _, k3, k4, k5, k6, k7] = &tr.k;
        let mut r = [[0.0; N]; 5];
        for i in 0..N {
            let dy = tr.y[i] - self.y[i];
            let bspl = h * k1[i] - dy;
            r[0][i] = self.y[i];
            r[1][i] = dy;
            r[2][i] = bspl;
            r[3][i] = dy - h * k7[i] - bspl;
            r[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        Segment {
            t0: self.t,
            h,
            y0: self.y,
            y1: tr.y,
            r,
        }
    }

    /// Takes one accepted step, never passing `t_stop`.
    pub fn advance(&mut self, t_stop: f64) -> Result<Segment<N>> {
        loop {
            let remaining = t_stop - self.t;
            let h = self.h.min(self.max_step).min(remaining);
            if !(h > 1e-14 * self.t.abs().max(1.0)) {
                return Err(Error::StepFailure(self.t));
            }
            let tr = self.trial(h);
            let ok = tr.err <= 1.0 && tr.y.iter().all(|v| v.is_finite());
            let factor = if tr.err == 0.0 {
                5.0
            } else if tr.err.is_finite() {
                (0.9 * tr.err.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                0.2
            };
            if ok {
                let seg = self.segment(h, &tr);
                self.t = if h == remaining { t_stop } else { self.t + h };
                self.y = tr.y;
                self.k1 = tr.k[6];
                self.steps += 1;
                // keep the proposal unless the step was clipped
                if h >= self.h * 0.999 || factor < 1.0 {
                    self.h = h * factor;
                }
                return Ok(seg);
            }
            self.h = h * factor;
        }
    }
}
