//! Method-of-steps integration on the grid `t_j = -1 + j/N`.
//!
//! On `[m, m+1]` the delayed terms are already known, so the equation is the
//! ODE `y' + f(y) = r(t)` with `r(t) = s(t) - c y'(t-1) - g(y(t-1))`. Each
//! step applies the implicit trapezoidal rule and solves the stage equation
//! by damped Newton. Derivatives are read off the ODE, with separate left and
//! right values at integer times where they jump.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::problem::{History, NddeProblem};

/// `|y|` beyond which a run is reported as blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-13;
const NEWTON_DAMPING: f64 = 0.5;

/// Grid solution with one-sided derivatives at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    n: usize,
    values: Vec<f64>,
    deriv_left: Vec<f64>,
    deriv_right: Vec<f64>,
    problem: NddeProblem,
}

impl Trajectory {
    /// Wraps externally computed samples on `[-1, t_end]`. All three
    /// sequences share the grid `-1 + j/n`.
    pub fn from_samples(
        problem: NddeProblem,
        n: usize,
        values: Vec<f64>,
        deriv_left: Vec<f64>,
        deriv_right: Vec<f64>,
    ) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidInput("trajectory grid needs N >= 4"));
        }
        if values.len() != deriv_left.len() || values.len() != deriv_right.len() {
            return Err(Error::InvalidInput("trajectory columns differ in length"));
        }
        if values.len() < 2 * n + 1 {
            return Err(Error::InvalidInput("trajectory must extend to t >= 1"));
        }
        Ok(Trajectory {
            n,
            values,
            deriv_left,
            deriv_right,
            problem,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid_step(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `t_j = -1 + j h`, computed from integers to keep nodes exact.
    #[inline]
    pub fn time(&self, j: usize) -> f64 {
        (j as f64 - self.n as f64) / self.n as f64
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.values.len() - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn deriv_left(&self) -> &[f64] {
        &self.deriv_left
    }

    pub fn deriv_right(&self) -> &[f64] {
        &self.deriv_right
    }

    pub fn problem(&self) -> &NddeProblem {
        &self.problem
    }

    /// Whether node `j` sits at an integer time.
    #[inline]
    pub fn is_breakpoint(&self, j: usize) -> bool {
        j % self.n == 0
    }

    /// Node index of time `t`, if `t` is a grid point within the run.
    pub fn node(&self, t: f64) -> Option<usize> {
        let s = (t + 1.0) * self.n as f64;
        let j = math::round(s);
        if j < 0.0 || (s - j).abs() > 1e-9 * s.abs().max(1.0) {
            return None;
        }
        let j = j as usize;
        (j < self.values.len()).then_some(j)
    }

    /// Pointwise residual at node `j > N`, or `None` at and before `t = 0`.
    ///
    /// `y'(t)` is a fourth-order five-point difference of the stored values
    /// inside the unit interval containing `t` (the left interval at integer
    /// times), `y'(t-1)` the stored derivative of matching side.
    pub fn node_residual(&self, j: usize) -> Option<f64> {
        let n = self.n;
        if j <= n || j >= self.values.len() {
            return None;
        }
        let start = if self.is_breakpoint(j) { j - n } else { j - j % n };
        let end = (start + n).min(self.values.len() - 1);
        if end - start < 4 {
            return None;
        }
        let j0 = j.saturating_sub(2).clamp(start, end - 4);
        let dy = five_point_derivative(&self.values[j0..j0 + 5], j - j0, self.grid_step());
        let delayed_dy = if self.is_breakpoint(j) {
            self.deriv_left[j - n]
        } else {
            self.deriv_right[j - n]
        };
        let p = &self.problem;
        let r = dy + p.c.value() * delayed_dy + p.f.eval(self.values[j]) + p.g.eval(self.values[j - n])
            - p.source.eval(self.time(j));
        Some(r.abs())
    }
}

/// Weights of the fourth-order derivative on five equispaced nodes, for
/// evaluation at node `i`.
fn five_point_derivative(y: &[f64], i: usize, h: f64) -> f64 {
    const W: [[f64; 5]; 5] = [
        [-25.0, 48.0, -36.0, 16.0, -3.0],
        [-3.0, -10.0, 18.0, -6.0, 1.0],
        [1.0, -8.0, 0.0, 8.0, -1.0],
        [-1.0, 6.0, -18.0, 10.0, 3.0],
        [3.0, -16.0, 36.0, -48.0, 25.0],
    ];
    let w = &W[i];
    (w[0] * y[0] + w[1] * y[1] + w[2] * y[2] + w[3] * y[3] + w[4] * y[4]) / (12.0 * h)
}

/// Integrates from the history to `t_end` with step `1/n`.
pub fn integrate(problem: &NddeProblem, history: &History, t_end: f64, n: usize) -> Result<Trajectory> {
    if n < 8 {
        return Err(Error::InvalidInput("integration needs N >= 8"));
    }
    if !(t_end >= 1.0) || !t_end.is_finite() {
        return Err(Error::InvalidInput("tEnd must be at least 1"));
    }
    let steps_f = t_end * n as f64;
    let steps = math::round(steps_f);
    if (steps_f - steps).abs() > 1e-9 * steps_f {
        return Err(Error::InvalidInput("tEnd must be a multiple of the grid step"));
    }
    let steps = steps as usize;
    let history = history.resample(n)?;

    let c = problem.c.value();
    let f = &problem.f;
    let g = &problem.g;
    let s = &problem.source;
    let h = 1.0 / n as f64;
    let total = n + 1 + steps;
    let time = |j: usize| (j as f64 - n as f64) / n as f64;

    let mut values = Vec::with_capacity(total);
    let mut deriv_left = Vec::with_capacity(total);
    let mut deriv_right = Vec::with_capacity(total);
    values.extend_from_slice(history.values());
    deriv_left.extend_from_slice(history.derivs());
    deriv_right.extend_from_slice(history.derivs());

    // Right-sided delayed forcing at node j (start of a step).
    let forcing_right = |j: usize, v: &[f64], dr: &[f64]| -> f64 {
        s.eval(time(j)) - c * dr[j - n] - g.eval(v[j - n])
    };
    let forcing_left = |j: usize, v: &[f64], dl: &[f64]| -> f64 {
        s.eval(time(j)) - c * dl[j - n] - g.eval(v[j - n])
    };

    // The derivative at t = 0 from the right comes from the equation.
    deriv_right[n] = forcing_right(n, &values, &deriv_right) - f.eval(values[n]);

    for j in n..n + steps {
        let yj = values[j];
        let r0 = forcing_right(j, &values, &deriv_right);
        let r1 = forcing_left(j + 1, &values, &deriv_left);
        let slope0 = r0 - f.eval(yj);
        let rhs = yj + 0.5 * h * (slope0 + r1);
        let t_next = time(j + 1);
        let y_next = stage_solve(f, h, rhs, yj + h * slope0, t_next)?;
        if !y_next.is_finite() || y_next.abs() > BLOW_UP_THRESHOLD {
            return Err(Error::BlowUp {
                t: t_next,
                threshold: BLOW_UP_THRESHOLD,
            });
        }
        values.push(y_next);
        let d = r1 - f.eval(y_next);
        deriv_left.push(d);
        deriv_right.push(d);
        if (j + 1) % n == 0 {
            let dr = forcing_right(j + 1, &values, &deriv_right) - f.eval(y_next);
            deriv_right[j + 1] = dr;
        }
    }

    Ok(Trajectory {
        n,
        values,
        deriv_left,
        deriv_right,
        problem: problem.clone(),
    })
}

/// Solves `Y + (h/2) f(Y) = rhs` by damped Newton. The map is increasing
/// whenever `f' > 0`, so the root is unique.
fn stage_solve(f: &crate::Nonlinearity, h: f64, rhs: f64, guess: f64, t: f64) -> Result<f64> {
    let half = 0.5 * h;
    let residual = |y: f64| y + half * f.eval(y) - rhs;
    let tol = NEWTON_TOL * rhs.abs().max(1.0);
    let mut y = guess;
    let mut r = residual(y);
    for _ in 0..NEWTON_MAX_ITER {
        if r.abs() <= tol {
            return Ok(y);
        }
        let slope = 1.0 + half * f.deriv(y);
        if !(slope > 0.0) || !slope.is_finite() {
            return Err(Error::NewtonDivergence { t });
        }
        let step = r / slope;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = y - lambda * step;
            let rt = residual(trial);
            if rt.abs() < r.abs() || rt.abs() <= tol {
                y = trial;
                r = rt;
                accepted = true;
                break;
            }
            lambda *= NEWTON_DAMPING;
        }
        if !accepted {
            // Stagnation at roundoff level is convergence.
            if r.abs() <= 1e3 * tol {
                return Ok(y);
            }
            return Err(Error::NewtonDivergence { t });
        }
    }
    if r.abs() <= tol {
        Ok(y)
    } else {
        Err(Error::NewtonDivergence { t })
    }
}

/// Largest pointwise residual over nodes with `t > 0`, `t ∉ ℤ`.
pub fn ndde_residual(traj: &Trajectory) -> f64 {
    (traj.n + 1..traj.len())
        .filter(|&j| !traj.is_breakpoint(j))
        .filter_map(|j| traj.node_residual(j))
        .fold(0.0, f64::max)
}

/// `(1/T) ∫_{t-T}^{t} y` by the trapezoidal rule on the grid.
pub fn mean_over_period(traj: &Trajectory, period: f64, t: f64) -> Result<f64> {
    if !(period > 0.0) {
        return Err(Error::OutOfRange { value: period });
    }
    let j1 = traj.node(t).ok_or(Error::OutOfRange { value: t })?;
    let j0 = traj.node(t - period).ok_or(Error::OutOfRange { value: t - period })?;
    if j0 >= j1 {
        return Err(Error::OutOfRange { value: period });
    }
    let v = &traj.values;
    let h = traj.grid_step();
    let inner: f64 = v[j0 + 1..j1].iter().sum();
    let integral = h * (0.5 * (v[j0] + v[j1]) + inner);
    Ok(integral / ((j1 - j0) as f64 * h))
}

/// Late-time behaviour of a finite run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LongTimeBehavior {
    /// `y` stays within the tolerance of `limit` over `[t_end/2, t_end]`.
    Converges { limit: f64 },
    /// The two-unit running mean keeps drifting at a non-decaying rate;
    /// `direction` is `+1` or `-1`.
    Diverging { direction: i8 },
    /// Neither: no constant limit is approached on the doubling window.
    NoConstantLimit,
}

/// Classifies a run by its second half. `y` converges when its oscillation
/// on `[t_end/2, t_end]` is within `tol`. Otherwise the mean over the last
/// two units (which removes the period-two oscillation of `c = +1`) is
/// compared over consecutive quarters: a drift of fixed sign whose late
/// increment is at least three quarters of the early one signals divergence.
pub fn classify_long_time(traj: &Trajectory, tol: f64) -> Result<LongTimeBehavior> {
    let n = traj.n;
    let last = traj.len() - 1;
    let steps = last - n;
    if steps < 16 * n {
        return Err(Error::InvalidInput("long-time classification needs tEnd >= 16"));
    }
    let half = n + steps / 2;
    let window = &traj.values[half..=last];
    let (lo, hi) = window
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
    if hi - lo <= tol {
        return Ok(LongTimeBehavior::Converges {
            limit: traj.values[last],
        });
    }
    let quarter = steps / 4;
    let t_at = |j: usize| traj.time(j);
    let a_half = mean_over_period(traj, 2.0, t_at(half))?;
    let a_three = mean_over_period(traj, 2.0, t_at(half + quarter))?;
    let a_end = mean_over_period(traj, 2.0, t_at(last))?;
    let early = a_three - a_half;
    let late = a_end - a_three;
    if early * late > 0.0 && late.abs() >= 0.75 * early.abs() && late.abs() > tol {
        return Ok(LongTimeBehavior::Diverging {
            direction: if late > 0.0 { 1 } else { -1 },
        });
    }
    Ok(LongTimeBehavior::NoConstantLimit)
}
