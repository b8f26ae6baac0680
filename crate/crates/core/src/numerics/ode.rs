//! Explicit Dormand-Prince 5(4) integrator with continuous (dense) output.
//!
//! The continuous extension is the standard quartic one of the pair, which
//! matches the state and its derivative at both ends of every step, so the
//! interpolant is C¹ across step boundaries.

use thiserror::Error;

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

#[derive(Debug, Clone, Error)]
pub enum OdeError {
    /// The step size collapsed while the state was still admissible.
    #[error("step size underflow at s = {s}")]
    StiffOrSingular { s: f64 },
    /// The state left the admissible region; the solution up to `last_valid`
    /// is kept in `partial`.
    #[error("state left the admissible region after s = {last_valid}")]
    DomainExit {
        last_valid: f64,
        partial: Box<DenseSolution>,
    },
    #[error("s = {s} lies outside the solved span [{lo}, {hi}]")]
    OutOfSpan { s: f64, lo: f64, hi: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("initial state or right-hand side is not finite")]
    NonFiniteInitial,
    #[error("exceeded {0} steps")]
    TooManySteps(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct IvpOptions {
    /// Mixed absolute/relative local error tolerance.
    pub tol: f64,
    /// Upper bound on |h|.
    pub max_step: f64,
    pub max_steps: usize,
}

impl IvpOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

impl Default for IvpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_step: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone)]
struct Segment {
    start: f64,
    h: f64,
    // Five coefficient rows of length `dim`, stored contiguously.
    cont: Vec<f64>,
}

/// Piecewise-polynomial solution of an initial value problem.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    dim: usize,
    s_start: f64,
    s_reached: f64,
    tolerance: f64,
    forward: bool,
    initial: Vec<f64>,
    segments: Vec<Segment>,
}

impl DenseSolution {
    /// Solved interval as `(min, max)`.
    pub fn span(&self) -> (f64, f64) {
        if self.forward {
            (self.s_start, self.s_reached)
        } else {
            (self.s_reached, self.s_start)
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> usize {
        self.segments.len()
    }

    /// Accepted step nodes `(s, y)` in integration order, from the initial
    /// point to the last point reached.
    pub fn nodes(&self) -> Vec<(f64, Vec<f64>)> {
        let n = self.dim;
        let mut out: Vec<(f64, Vec<f64>)> = self.segments.iter().map(|seg| (seg.start, seg.cont[..n].to_vec())).collect();
        if out.is_empty() {
            out.push((self.s_start, self.initial.clone()));
        }
        if let Some(last) = self.segments.last() {
            let end: Vec<f64> = (0..n).map(|i| last.cont[i] + last.cont[n + i]).collect();
            out.push((self.s_reached, end));
        }
        out
    }

    pub fn contains(&self, s: f64) -> bool {
        let (lo, hi) = self.span();
        s >= lo && s <= hi
    }

    pub fn eval(&self, s: f64) -> Result<Vec<f64>, OdeError> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(s, &mut out)?;
        Ok(out)
    }

    pub fn eval_into(&self, s: f64, out: &mut [f64]) -> Result<(), OdeError> {
        let (lo, hi) = self.span();
        if !(s >= lo && s <= hi) {
            return Err(OdeError::OutOfSpan { s, lo, hi });
        }
        if self.segments.is_empty() {
            out.copy_from_slice(&self.initial);
            return Ok(());
        }
        let idx = if self.forward {
            self.segments.partition_point(|seg| seg.start <= s)
        } else {
            self.segments.partition_point(|seg| seg.start >= s)
        };
        let seg = &self.segments[idx.saturating_sub(1)];
        let theta = ((s - seg.start) / seg.h).clamp(0.0, 1.0);
        let theta1 = 1.0 - theta;
        let n = self.dim;
        for (i, o) in out.iter_mut().enumerate() {
            let r = |k: usize| seg.cont[k * n + i];
            *o = r(0) + theta * (r(1) + theta1 * (r(2) + theta * (r(3) + theta1 * r(4))));
        }
        Ok(())
    }
}

/// Solves `y' = rhs(s, y)` from `s0` to `s_end` with local tolerance `tol`.
pub fn solve_ivp<F>(rhs: F, s0: f64, y0: &[f64], s_end: f64, tol: f64) -> Result<DenseSolution, OdeError>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    solve_ivp_with(rhs, s0, y0, s_end, &IvpOptions::with_tol(tol), |_, _| true)
}

/// Like [`solve_ivp`], but stops with [`OdeError::DomainExit`] once a step
/// would end in a state rejected by `admissible`. The exit point is located
/// by step halving down to a relative resolution of about 1e-12.
pub fn solve_ivp_with<F, A>(
    rhs: F,
    s0: f64,
    y0: &[f64],
    s_end: f64,
    opts: &IvpOptions,
    admissible: A,
) -> Result<DenseSolution, OdeError>
where
    F: Fn(f64, &[f64], &mut [f64]),
    A: Fn(f64, &[f64]) -> bool,
{
    let tol = opts.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(OdeError::InvalidTolerance(tol));
    }
    let n = y0.len();
    let forward = s_end >= s0;
    let dir = if forward { 1.0 } else { -1.0 };
    let mut sol = DenseSolution {
        dim: n,
        s_start: s0,
        s_reached: s0,
        tolerance: tol,
        forward,
        initial: y0.to_vec(),
        segments: Vec::new(),
    };
    if y0.iter().any(|v| !v.is_finite()) || !s0.is_finite() || !s_end.is_finite() {
        return Err(OdeError::NonFiniteInitial);
    }
    if !admissible(s0, y0) {
        return Err(OdeError::DomainExit {
            last_valid: s0,
            partial: Box::new(sol),
        });
    }

    let mut k1 = vec![0.0; n];
    rhs(s0, y0, &mut k1);
    if k1.iter().any(|v| !v.is_finite()) {
        return Err(OdeError::NonFiniteInitial);
    }
    if s0 == s_end {
        return Ok(sol);
    }

    let span = (s_end - s0).abs();
    let h_min = 1e-12 * (1.0 + s0.abs().max(s_end.abs()));
    let sk = |y: &[f64], i: usize| tol + tol * y[i].abs();
    let mut h = {
        let d0 = (0..n).map(|i| (y0[i] / sk(y0, i)).powi(2)).sum::<f64>().sqrt() / (n as f64).sqrt();
        let d1 = (0..n).map(|i| (k1[i] / sk(y0, i)).powi(2)).sum::<f64>().sqrt() / (n as f64).sqrt();
        let guess = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        guess.min(span).min(opts.max_step).max(h_min)
    };

    let mut s = s0;
    let mut y = y0.to_vec();
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut boundary: Option<f64> = None;

    for _ in 0..opts.max_steps {
        if (s_end - s) * dir <= 0.0 {
            sol.s_reached = s_end;
            return Ok(sol);
        }
        let remaining = (s_end - s).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = dir * h;

        for i in 0..n {
            ytmp[i] = y[i] + hs * A21 * k1[i];
        }
        rhs(s + C2 * hs, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(s + C3 * hs, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(s + C4 * hs, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(s + C5 * hs, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] = y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let s_new = if last { s_end } else { s + hs };
        rhs(s_new, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        rhs(s_new, &ynew, &mut k7);

        let finite = ynew.iter().chain(k7.iter()).all(|v| v.is_finite());
        let err = if finite {
            let mut acc = 0.0;
            for i in 0..n {
                let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = tol + tol * y[i].abs().max(ynew[i].abs());
                acc += (e / scale).powi(2);
            }
            (acc / n as f64).sqrt()
        } else {
            f64::INFINITY
        };

        let inside = finite && admissible(s_new, &ynew);
        if err <= 1.0 && inside {
            let mut cont = vec![0.0; 5 * n];
            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                cont[i] = y[i];
                cont[n + i] = ydiff;
                cont[2 * n + i] = bspl;
                cont[3 * n + i] = ydiff - hs * k7[i] - bspl;
                cont[4 * n + i] =
                    hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            sol.segments.push(Segment { start: s, h: hs, cont });
            s = s_new;
            sol.s_reached = s;
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k7);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(opts.max_step);
            if let Some(bad) = boundary {
                // Bisect toward the first rejected state.
                let gap = (bad - s).abs();
                if gap < h_min {
                    return Err(OdeError::DomainExit {
                        last_valid: s,
                        partial: Box::new(sol),
                    });
                }
                h = h.min(0.5 * gap);
            }
        } else {
            if !inside && err <= 1.0 {
                boundary = Some(s_new);
            }
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.2, 0.9) } else { 0.5 };
            h *= if inside { fac } else { 0.5 };
            if h < h_min {
                return if boundary.is_some() || !finite {
                    Err(OdeError::DomainExit {
                        last_valid: s,
                        partial: Box::new(sol),
                    })
                } else {
                    Err(OdeError::StiffOrSingular { s })
                };
            }
        }
    }
    Err(OdeError::TooManySteps(opts.max_steps))
}
