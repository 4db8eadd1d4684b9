//! Integration of `i dy/dt = H(t) y` for small complex state vectors.
//!
//! Two steppers are provided: classical fixed-step RK4 and the adaptive
//! Dormand-Prince 5(4) pair. Steps are clipped so that every sample time
//! is hit exactly; no interpolation is involved in the recorded rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source of the (possibly non-Hermitian) generator of the evolution.
pub trait Generator<const N: usize> {
    fn hamiltonian(&self, t: f64) -> [[Complex64; N]; N];
}

impl<const N: usize, F> Generator<N> for F
where
    F: Fn(f64) -> [[Complex64; N]; N],
{
    fn hamiltonian(&self, t: f64) -> [[Complex64; N]; N] {
        self(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step; the step itself for [`Method::Rk4`].
    pub max_step: f64,
    /// Spacing of recorded samples.
    pub sample_interval: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk45,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.1,
            sample_interval: 0.01,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("max_step", self.max_step)?;
        positive("sample_interval", self.sample_interval)
    }

    pub fn with_sample_interval(mut self, dt: f64) -> Self {
        self.sample_interval = dt;
        self
    }

    pub fn rk4(step: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            max_step: step,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<const N: usize> {
    pub t: f64,
    pub y: [Complex64; N],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<const N: usize> {
    pub final_state: [Complex64; N],
    pub samples: Vec<Sample<N>>,
}

fn rhs<const N: usize, G: Generator<N> + ?Sized>(
    gen: &G,
    t: f64,
    y: &[Complex64; N],
) -> [Complex64; N] {
    let h = gen.hamiltonian(t);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut out = [Complex64::new(0.0, 0.0); N];
    for (row, o) in h.iter().zip(out.iter_mut()) {
        let mut acc = Complex64::new(0.0, 0.0);
        for (hij, yj) in row.iter().zip(y) {
            acc += hij * yj;
        }
        *o = minus_i * acc;
    }
    out
}

/// `y + h * sum_k c_k k_k`
fn combine<const N: usize>(
    y: &[Complex64; N],
    h: f64,
    terms: &[(f64, &[Complex64; N])],
) -> [Complex64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c == 0.0 {
            continue;
        }
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += ki * (h * c);
        }
    }
    out
}

fn all_finite<const N: usize>(y: &[Complex64; N]) -> bool {
    y.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Sample times `t0, t0 + dt, ..., t1`.
fn sample_times(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let span = t1 - t0;
    let mut times = vec![t0];
    if span <= 0.0 {
        return times;
    }
    let n = (span / dt).ceil() as usize;
    for k in 1..n {
        let t = t0 + k as f64 * dt;
        // avoid a sliver segment right before the endpoint
        if t1 - t > 1e-9 * dt {
            times.push(t);
        }
    }
    times.push(t1);
    times
}

/// Propagates `y0` from `t0` to `t1` under `i dy/dt = H(t) y`.
pub fn integrate<const N: usize, G: Generator<N> + ?Sized>(
    gen: &G,
    y0: [Complex64; N],
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Solution<N>> {
    cfg.validate()?;
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(Error::Precondition(format!(
            "integration span must satisfy t0 <= t1, got [{t0}, {t1}]"
        )));
    }
    if !all_finite(&y0) {
        return Err(Error::Precondition("initial state is not finite".into()));
    }

    let times = sample_times(t0, t1, cfg.sample_interval);
    let mut samples = Vec::with_capacity(times.len());
    samples.push(Sample { t: t0, y: y0 });
    let mut y = y0;
    let mut stepper = match cfg.method {
        Method::Rk4 => Stepper::Rk4,
        Method::Rk45 => Stepper::Rk45(DoPri::new(cfg)),
    };
    for seg in times.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        y = match &mut stepper {
            Stepper::Rk4 => rk4_segment(gen, y, a, b, cfg.max_step)?,
            Stepper::Rk45(dp) => dp.segment(gen, y, a, b)?,
        };
        samples.push(Sample { t: b, y });
    }
    Ok(Solution {
        final_state: y,
        samples,
    })
}

enum Stepper<const N: usize> {
    Rk4,
    Rk45(DoPri<N>),
}

fn rk4_segment<const N: usize, G: Generator<N> + ?Sized>(
    gen: &G,
    mut y: [Complex64; N],
    a: f64,
    b: f64,
    max_step: f64,
) -> Result<[Complex64; N]> {
    let n = ((b - a) / max_step).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    for k in 0..n {
        let t = a + k as f64 * h;
        let k1 = rhs(gen, t, &y);
        let k2 = rhs(gen, t + 0.5 * h, &combine(&y, h, &[(0.5, &k1)]));
        let k3 = rhs(gen, t + 0.5 * h, &combine(&y, h, &[(0.5, &k2)]));
        let k4 = rhs(gen, t + h, &combine(&y, h, &[(1.0, &k3)]));
        y = combine(
            &y,
            h,
            &[
                (1.0 / 6.0, &k1),
                (1.0 / 3.0, &k2),
                (1.0 / 3.0, &k3),
                (1.0 / 6.0, &k4),
            ],
        );
        if !all_finite(&y) {
            return Err(Error::NonFinite { t: t + h });
        }
    }
    Ok(y)
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct DoPri<const N: usize> {
    rel_tol: f64,
    abs_tol: f64,
    max_step: f64,
    /// Proposed next step, carried across sample segments.
    h: Option<f64>,
    /// First stage reused from the previous accepted step (FSAL).
    k1: Option<(f64, [Complex64; N])>,
}

impl<const N: usize> DoPri<N> {
    fn new(cfg: &IntegratorConfig) -> Self {
        DoPri {
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            max_step: cfg.max_step,
            h: None,
            k1: None,
        }
    }

    fn initial_step<G: Generator<N> + ?Sized>(&self, gen: &G, t: f64, y: &[Complex64; N]) -> f64 {
        let f = rhs(gen, t, y);
        let scale: f64 = y
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(self.abs_tol);
        let fmax = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let h = if fmax > 0.0 {
            0.01 * scale / fmax
        } else {
            self.max_step
        };
        h.min(self.max_step)
    }

    fn segment<G: Generator<N> + ?Sized>(
        &mut self,
        gen: &G,
        mut y: [Complex64; N],
        a: f64,
        b: f64,
    ) -> Result<[Complex64; N]> {
        let mut t = a;
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(gen, t, &y),
        };
        while t < b {
            let remaining = b - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step < 1e-13 * t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow { t });
            }
            let k1 = match self.k1 {
                Some((tk, k)) if tk == t => k,
                _ => rhs(gen, t, &y),
            };
            let k2 = rhs(gen, t + C2 * step, &combine(&y, step, &[(A21, &k1)]));
            let k3 = rhs(
                gen,
                t + C3 * step,
                &combine(&y, step, &[(A31, &k1), (A32, &k2)]),
            );
            let k4 = rhs(
                gen,
                t + C4 * step,
                &combine(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = rhs(
                gen,
                t + C5 * step,
                &combine(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                gen,
                t + step,
                &combine(
                    &y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y5 = combine(
                &y,
                step,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let t_new = if last { b } else { t + step };
            let k7 = rhs(gen, t_new, &y5);

            let mut err = 0.0f64;
            for i in 0..N {
                let e =
                    (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                        * step;
                let sc = self.abs_tol + self.rel_tol * y[i].norm().max(y5[i].norm());
                err = err.max(e.norm() / sc);
            }
            if !err.is_finite() {
                return Err(Error::NonFinite { t });
            }

            if err <= 1.0 {
                t = t_new;
                y = y5;
                if !all_finite(&y) {
                    return Err(Error::NonFinite { t });
                }
                self.k1 = Some((t, k7));
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // a clipped final step says little about the natural step size
                if !last || step >= 0.5 * h {
                    h = (step * grow).min(self.max_step);
                }
            } else {
                h = step * (0.9 * err.powf(-0.2)).max(0.1);
                if h < 1e-13 * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow { t });
                }
            }
        }
        self.h = Some(h);
        Ok(y)
    }
}
