//! Energy functionals of the homogeneous equation.
//!
//! Squaring `y' + f(y) = -c y'(t-1) - g(y(t-1))` and integrating over
//! `[0, t]` gives, with `E(t) = ∫_{t-1}^t (y' + f(y))²` and
//! `H = 2(F - c G)`,
//!
//! ```text
//! E(t) + H(y(t-1)) + ∫_{-1}^{t-1} (f² - g²)(y) = E(0) + H(y(-1)).
//! ```
//!
//! With `|g| <= γ|f|` every term on the left is controlled, which yields the
//! bounds `E <= C0`, `2(1-γ) F(y) <= C0` and `(1-γ²) ∫ f(y)² <= C0`.
//! All integrals here use the trapezoidal rule on the solver grid, taking the
//! matching one-sided derivative on each side of an integer time.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::problem::{Interval, Neutral};
use crate::stepper::Trajectory;

/// The potentials at one point and the two-sided bound check
/// `2(1-γ)F <= H <= 2(1+γ)F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialBounds {
    pub f_potential: f64,
    pub h_potential: f64,
    /// `H - 2(1-γ)F`.
    pub lower_slack: f64,
    /// `2(1+γ)F - H`.
    pub upper_slack: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

/// Evaluates `F`, `H = 2(F - cG)` at `y` and checks both bounds (up to
/// rounding in the potentials).
pub fn lemma_fh_check(
    f: &Nonlinearity,
    g: &Nonlinearity,
    c: Neutral,
    gamma: f64,
    y: f64,
) -> Result<PotentialBounds> {
    let big_f = f.potential(y)?;
    let big_g = g.potential(y)?;
    let big_h = 2.0 * (big_f - c.value() * big_g);
    let lower_slack = big_h - 2.0 * (1.0 - gamma) * big_f;
    let upper_slack = 2.0 * (1.0 + gamma) * big_f - big_h;
    let tol = 8.0 * f64::EPSILON * (big_f.abs() + big_g.abs());
    Ok(PotentialBounds {
        f_potential: big_f,
        h_potential: big_h,
        lower_slack,
        upper_slack,
        lower_ok: lower_slack >= -tol && big_f >= -tol,
        upper_ok: upper_slack >= -tol,
    })
}

/// Energy diagnostics at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub t: f64,
    /// `∫_{t-1}^t (y' + f(y))²`.
    pub energy: f64,
    /// `F(y(t))`.
    pub potential: f64,
    /// `∫_0^t f(y)²`.
    pub cumulative_f_squared: f64,
    /// Defect of the energy identity.
    pub identity_residual: f64,
    /// History bound `C0`.
    pub c0: f64,
}

/// Running integrals shared by the nonlinear and linear diagnostics.
struct Integrals {
    /// `∫_{-1}^{t_j} (y' + f)²`.
    squared_rate: Vec<f64>,
    /// `∫_{-1}^{t_j} (f² - g²)`.
    dissipation: Vec<f64>,
    /// `∫_{-1}^{t_j} f²`.
    f_squared: Vec<f64>,
}

fn running_integrals(traj: &Trajectory, f: &Nonlinearity, g: &Nonlinearity) -> Integrals {
    let y = traj.values();
    let dl = traj.deriv_left();
    let dr = traj.deriv_right();
    let h = traj.grid_step();
    let len = y.len();
    let mut squared_rate = Vec::with_capacity(len);
    let mut dissipation = Vec::with_capacity(len);
    let mut f_squared = Vec::with_capacity(len);
    squared_rate.push(0.0);
    dissipation.push(0.0);
    f_squared.push(0.0);
    let fv: Vec<f64> = y.iter().map(|&v| f.eval(v)).collect();
    let gv: Vec<f64> = y.iter().map(|&v| g.eval(v)).collect();
    for j in 0..len - 1 {
        let a = dr[j] + fv[j];
        let b = dl[j + 1] + fv[j + 1];
        squared_rate.push(squared_rate[j] + 0.5 * h * (a * a + b * b));
        let d0 = fv[j] * fv[j] - gv[j] * gv[j];
        let d1 = fv[j + 1] * fv[j + 1] - gv[j + 1] * gv[j + 1];
        dissipation.push(dissipation[j] + 0.5 * h * (d0 + d1));
        f_squared.push(f_squared[j] + 0.5 * h * (fv[j] * fv[j] + fv[j + 1] * fv[j + 1]));
    }
    Integrals {
        squared_rate,
        dissipation,
        f_squared,
    }
}

/// `C0 = E(0) + 2(1+γ)F(y₀(-1)) - (1-γ²) ∫_{-1}^0 f(y₀)²`.
fn history_bound(traj: &Trajectory, f: &Nonlinearity, gamma: f64, ints: &Integrals) -> Result<f64> {
    let n = traj.n();
    let e0 = ints.squared_rate[n];
    let f_start = f.potential(traj.values()[0])?;
    Ok(e0 + 2.0 * (1.0 + gamma) * f_start - (1.0 - gamma * gamma) * ints.f_squared[n])
}

/// Energy diagnostics at every node with `t > 0` of a homogeneous run.
pub fn energy_series(traj: &Trajectory) -> Result<Vec<EnergyReport>> {
    let p = traj.problem();
    if !p.source.is_zero() {
        return Err(Error::SourceNotZero);
    }
    let (f, g) = (&p.f, &p.g);
    let c = p.c.value();
    let n = traj.n();
    let y = traj.values();
    let ints = running_integrals(traj, f, g);
    let c0 = history_bound(traj, f, p.gamma_bound, &ints)?;
    let big_h = |v: f64| -> Result<f64> { Ok(2.0 * (f.potential(v)? - c * g.potential(v)?)) };
    let rhs = ints.squared_rate[n] + big_h(y[0])?;

    let mut out = Vec::with_capacity(y.len() - n - 1);
    for j in n + 1..y.len() {
        let energy = ints.squared_rate[j] - ints.squared_rate[j - n];
        let lhs = energy + big_h(y[j - n])? + ints.dissipation[j - n];
        out.push(EnergyReport {
            t: traj.time(j),
            energy,
            potential: f.potential(y[j])?,
            cumulative_f_squared: ints.f_squared[j] - ints.f_squared[n],
            identity_residual: (lhs - rhs).abs(),
            c0,
        });
    }
    Ok(out)
}

/// Defect at `t_end` of the linear identity
///
/// ```text
/// ∫_{t-1}^t |y' + a y|² + (a - c b)|y(t-1)|² + (a² - b²) ∫_{-1}^{t-1} |y|²
///     = ∫_{-1}^0 |y₀' + a y₀|² + (a - c b)|y₀(-1)|²
/// ```
pub fn linear_energy_residual(traj: &Trajectory, a: f64, b: f64) -> Result<f64> {
    let p = traj.problem();
    match p.linear_slopes() {
        Some((pa, pb)) if pa == a && pb == b => {}
        Some(_) => return Err(Error::InvalidInput("slopes differ from the problem's")),
        None => return Err(Error::NotLinear),
    }
    if !p.source.is_zero() {
        return Err(Error::SourceNotZero);
    }
    let c = p.c.value();
    let n = traj.n();
    let y = traj.values();
    let last = y.len() - 1;
    let ints = running_integrals(traj, &p.f, &p.g);
    let k = a - c * b;
    let lhs = ints.squared_rate[last] - ints.squared_rate[last - n]
        + k * y[last - n] * y[last - n]
        + ints.dissipation[last - n];
    let rhs = ints.squared_rate[n] + k * y[0] * y[0];
    Ok((lhs - rhs).abs())
}

/// Samples of a periodic function on one period: values and derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples {
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
}

/// Outcome of the small-oscillation stability test for a periodic solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityCondition {
    pub holds: bool,
    /// `rhs - lhs`.
    pub margin: f64,
    /// `2 sup |P'|`.
    pub lhs: f64,
    /// `inf (f(w) - f(d))² / |f(w) - f(d) - (w - d) f'(d)|`.
    pub rhs: f64,
}

const CONDITION_GRID: usize = 512;
const REFINE_GRID: usize = 32;
const REFINE_ROUNDS: usize = 4;

/// Tests `2 sup|P'| < inf_{w ∈ I, d ∈ P(ℝ)} (f(w)-f(d))² / |f(w)-f(d)-(w-d)f'(d)|`
/// on a 512 × 512 product grid refined around the minimizer.
pub fn periodic_stability_condition(
    f: &Nonlinearity,
    p: &PeriodicSamples,
    interval: Interval,
) -> Result<StabilityCondition> {
    if !(interval.hi >= interval.lo) {
        return Err(Error::EmptyInterval {
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    if p.values.is_empty() {
        return Err(Error::InvalidInput("periodic samples are empty"));
    }
    let lhs = 2.0 * p.derivs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let (dlo, dhi) = p
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if dlo < interval.lo || dhi > interval.hi {
        return Err(Error::InvalidInput("interval must contain the range of the periodic function"));
    }

    let grid = |lo: f64, hi: f64, k: usize, i: usize| {
        if k <= 1 || hi <= lo {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (k - 1) as f64
        }
    };
    let mut best = (f64::INFINITY, interval.lo, dlo);
    for i in 0..CONDITION_GRID {
        let w = grid(interval.lo, interval.hi, CONDITION_GRID, i);
        for k in 0..CONDITION_GRID {
            let d = grid(dlo, dhi, CONDITION_GRID, k);
            let q = f.remainder_quotient(w, d);
            if q < best.0 {
                best = (q, w, d);
            }
        }
    }
    if best.0.is_finite() {
        let mut hw = (interval.hi - interval.lo) / (CONDITION_GRID - 1) as f64;
        let mut hd = (dhi - dlo) / (CONDITION_GRID - 1) as f64;
        for _ in 0..REFINE_ROUNDS {
            let (wlo, whi) = ((best.1 - hw).max(interval.lo), (best.1 + hw).min(interval.hi));
            let (lo_d, hi_d) = ((best.2 - hd).max(dlo), (best.2 + hd).min(dhi));
            for i in 0..REFINE_GRID {
                let w = grid(wlo, whi, REFINE_GRID, i);
                for k in 0..REFINE_GRID {
                    let d = grid(lo_d, hi_d, REFINE_GRID, k);
                    let q = f.remainder_quotient(w, d);
                    if q < best.0 {
                        best = (q, w, d);
                    }
                }
            }
            hw *= 2.0 / (REFINE_GRID - 1) as f64;
            hd *= 2.0 / (REFINE_GRID - 1) as f64;
        }
    }
    let rhs = best.0;
    Ok(StabilityCondition {
        holds: lhs < rhs,
        margin: rhs - lhs,
        lhs,
        rhs,
    })
}
