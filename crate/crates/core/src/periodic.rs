//! Periodic solutions.
//!
//! Three constructions:
//!
//! * [`linear_fourier_solve`] divides each source mode by the symbol,
//!   `y_k = s_k / calH(ikω)`;
//! * [`reduced_ode_solve`] handles periods `T = 1/n`, for which
//!   `y(t-1) = y(t)` collapses the equation to the ODE
//!   `(1+c) y' + (f+g)(y) = s`;
//! * [`nonlinear_small_source_solve`] splits off the linear part at zero and
//!   runs a damped Picard iteration on the Fourier side for small sources.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::PeriodicSamples;
use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::nonlinearity::{Nonlinearity, SumMap};
use crate::problem::{equilibrium_solve, Equilibrium, NddeProblem, Neutral};
use crate::source::SourceSpec;
use crate::spectrum::{cal_h, LinearCoefficients};

/// Divisors below this modulus are treated as resonant.
pub const DIVISOR_FLOOR: f64 = 1e-12;

/// Truncated Fourier series `Σ_{|k| <= K} y_k e^{ikωt}` of a real periodic
/// function.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSolution {
    pub omega: f64,
    /// `y_k` stored at index `k + K`.
    pub coefficients: Vec<Complex>,
    /// Discrete L² norm of the equation's defect.
    pub residual_l2: f64,
    pub iterations: usize,
}

impl FourierSolution {
    /// Truncation order `K`.
    pub fn kmax(&self) -> usize {
        (self.coefficients.len() - 1) / 2
    }

    pub fn coefficient(&self, k: i64) -> Complex {
        let kk = self.kmax() as i64;
        if k.abs() > kk {
            Complex::new(0.0, 0.0)
        } else {
            self.coefficients[(k + kk) as usize]
        }
    }

    pub fn period(&self) -> f64 {
        math::TAU / self.omega
    }

    /// Time average, the coefficient `y_0`.
    pub fn mean(&self) -> f64 {
        self.coefficient(0).re
    }

    pub fn eval(&self, t: f64) -> f64 {
        let kk = self.kmax() as i64;
        let mut acc = self.coefficient(0).re;
        for k in 1..=kk {
            acc += 2.0 * (self.coefficient(k) * math::cis(k as f64 * self.omega * t)).re;
        }
        acc
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let kk = self.kmax() as i64;
        let mut acc = 0.0;
        for k in 1..=kk {
            let kw = k as f64 * self.omega;
            acc += 2.0 * (self.coefficient(k) * Complex::new(0.0, kw) * math::cis(kw * t)).re;
        }
        acc
    }

    /// Values and derivatives on `points` equispaced nodes of one period.
    pub fn samples(&self, points: usize) -> PeriodicSamples {
        let grid = Grid::new(points);
        PeriodicSamples {
            values: grid.synthesize(&self.coefficients, |_| Complex::new(1.0, 0.0)),
            derivs: grid.synthesize(&self.coefficients, |k| Complex::new(0.0, k as f64 * self.omega)),
        }
    }

    /// L² distance over one period, from the coefficients (Parseval).
    pub fn l2_distance(&self, other: &FourierSolution) -> f64 {
        let kk = self.kmax().max(other.kmax()) as i64;
        let mut acc = 0.0;
        for k in -kk..=kk {
            acc += (self.coefficient(k) - other.coefficient(k)).norm_sqr();
        }
        math::sqrt(acc)
    }
}

/// Equispaced collocation grid `t_j = jT/M` with exact twiddle factors.
struct Grid {
    m: usize,
    /// `e^{2πi r/M}` for `0 <= r < M`.
    twiddle: Vec<Complex>,
}

impl Grid {
    fn new(m: usize) -> Self {
        let twiddle = (0..m).map(|r| math::cis(math::TAU * r as f64 / m as f64)).collect();
        Grid { m, twiddle }
    }

    /// `Σ_k y_k mult(k) e^{2πi kj/M}` at every node, real part.
    fn synthesize<F: Fn(i64) -> Complex>(&self, coeffs: &[Complex], mult: F) -> Vec<f64> {
        let kk = ((coeffs.len() - 1) / 2) as i64;
        let weighted: Vec<Complex> = (-kk..=kk).map(|k| coeffs[(k + kk) as usize] * mult(k)).collect();
        let m = self.m as i64;
        (0..m)
            .map(|j| {
                let mut acc = weighted[kk as usize].re;
                for k in 1..=kk {
                    let w = self.twiddle[((k * j).rem_euclid(m)) as usize];
                    acc += 2.0 * (weighted[(k + kk) as usize] * w).re;
                }
                acc
            })
            .collect()
    }

    /// `(1/M) Σ_j v_j e^{-2πi kj/M}` for `|k| <= K`.
    fn analyze(&self, values: &[f64], kmax: usize) -> Vec<Complex> {
        let m = self.m as i64;
        let kk = kmax as i64;
        let mut out = vec![Complex::new(0.0, 0.0); 2 * kmax + 1];
        for k in 0..=kk {
            let mut acc = Complex::new(0.0, 0.0);
            for (j, &v) in values.iter().enumerate() {
                acc += self.twiddle[((-k * j as i64).rem_euclid(m)) as usize] * v;
            }
            acc /= m as f64;
            out[(k + kk) as usize] = acc;
            if k > 0 {
                out[(kk - k) as usize] = acc.conj();
            } else {
                out[kk as usize] = Complex::new(acc.re, 0.0);
            }
        }
        out
    }
}

fn source_omega(source: &SourceSpec) -> f64 {
    // Time-independent sources are periodic with any period; use T = 1.
    source.omega().unwrap_or(math::TAU)
}

/// `y_k = s_k / calH(ikω)` with the floor check.
fn invert_modes(coeffs: &LinearCoefficients, omega: f64, rhs: &[Complex]) -> Result<Vec<Complex>> {
    let kk = ((rhs.len() - 1) / 2) as i64;
    let mut out = vec![Complex::new(0.0, 0.0); rhs.len()];
    for k in -kk..=kk {
        let sym = cal_h(Complex::new(0.0, k as f64 * omega), coeffs);
        let modulus = math::cabs(sym);
        if modulus < DIVISOR_FLOOR {
            return Err(Error::DivisorBelowFloor { k, modulus });
        }
        out[(k + kk) as usize] = rhs[(k + kk) as usize] / sym;
    }
    // Keep the reconstruction exactly real.
    out[kk as usize].im = 0.0;
    for k in 1..=kk {
        let v = out[(k + kk) as usize];
        out[(kk - k) as usize] = v.conj();
    }
    Ok(out)
}

fn require_stable(coeffs: &LinearCoefficients) -> Result<()> {
    if coeffs.a > coeffs.b.abs() {
        Ok(())
    } else {
        Err(Error::HypothesisViolated("periodic solvers require a > |b|"))
    }
}

/// Fourier-multiplier solution of the linear forced equation, truncated at
/// `|k| <= K`. The residual is the Parseval norm of `calH y_k - s_k`.
pub fn linear_fourier_solve(coeffs: &LinearCoefficients, source: &SourceSpec, kmax: usize) -> Result<FourierSolution> {
    require_stable(coeffs)?;
    let omega = source_omega(source);
    let s = source.fourier_coefficients(kmax);
    let y = invert_modes(coeffs, omega, &s)?;
    let mut defect = 0.0;
    let kk = kmax as i64;
    for k in -kk..=kk {
        let sym = cal_h(Complex::new(0.0, k as f64 * omega), coeffs);
        defect += (sym * y[(k + kk) as usize] - s[(k + kk) as usize]).norm_sqr();
    }
    Ok(FourierSolution {
        omega,
        coefficients: y,
        residual_l2: math::sqrt(defect),
        iterations: 1,
    })
}

/// RMS over `points` nodes of one period of
/// `y' + c y'(t-1) + f(y) + g(y(t-1)) - s`, with the delay applied as the
/// phase `e^{-ikω}` on each mode.
pub fn periodic_residual(sol: &FourierSolution, problem: &NddeProblem, points: usize) -> f64 {
    let points = points.max(1);
    let grid = Grid::new(points);
    let w = sol.omega;
    let delay = |k: i64| math::cis(-(k as f64) * w);
    let y = grid.synthesize(&sol.coefficients, |_| Complex::new(1.0, 0.0));
    let dy = grid.synthesize(&sol.coefficients, |k| Complex::new(0.0, k as f64 * w));
    let yd = grid.synthesize(&sol.coefficients, delay);
    let dyd = grid.synthesize(&sol.coefficients, |k| Complex::new(0.0, k as f64 * w) * delay(k));
    let c = problem.c.value();
    let period = sol.period();
    let mut acc = 0.0;
    for j in 0..points {
        let t = period * j as f64 / points as f64;
        let r = dy[j] + c * dyd[j] + problem.f.eval(y[j]) + problem.g.eval(yd[j]) - problem.source.eval(t);
        acc += r * r;
    }
    math::sqrt(acc / points as f64)
}

/// Periodic solution for `T = 1/n` through the reduced ODE
/// `(1+c) y' + (f+g)(y) = s`, sampled on `4K+1` nodes and transformed to
/// `|k| <= K`.
pub fn reduced_ode_solve(problem: &NddeProblem, n: u32, kmax: usize) -> Result<FourierSolution> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1"));
    }
    let omega = math::TAU * n as f64;
    if let Some(w) = problem.source.omega() {
        if (w - omega).abs() > 1e-12 * omega {
            return Err(Error::NotPeriodic);
        }
    }
    let m = 4 * kmax + 1;
    let grid = Grid::new(m);
    let period = 1.0 / n as f64;
    let sum = SumMap::new(&problem.f, &problem.g);
    let s = &problem.source;
    let (values, iterations) = match problem.c {
        Neutral::Minus => {
            let mut v = Vec::with_capacity(m);
            for j in 0..m {
                let t = period * j as f64 / m as f64;
                v.push(sum.inverse(s.eval(t))?);
            }
            (v, 1)
        }
        Neutral::Plus => shoot(&sum, s, period, m)?,
    };
    let coefficients = grid.analyze(&values, kmax);
    let mut sol = FourierSolution {
        omega,
        coefficients,
        residual_l2: 0.0,
        iterations,
    };
    sol.residual_l2 = periodic_residual(&sol, problem, m);
    Ok(sol)
}

const SHOOTING_MAX_ITER: usize = 50;
const RK4_MIN_STEPS: usize = 4096;

/// Periodic orbit of `y' = (s - (f+g)(y)) / 2` by Newton on the period map,
/// started at the equilibrium of the mean source. Returns the orbit on `m`
/// equispaced nodes and the Newton iteration count.
fn shoot(sum: &SumMap<'_>, s: &SourceSpec, period: f64, m: usize) -> Result<(Vec<f64>, usize)> {
    let per_node = RK4_MIN_STEPS.div_ceil(m);
    let steps = per_node * m;
    let h = period / steps as f64;
    let rhs = |t: f64, y: f64| 0.5 * (s.eval(t) - sum.eval(y));
    // One period of the orbit and its variational equation.
    let flow = |y0: f64, record: bool| -> (f64, f64, Vec<f64>) {
        let mut y = y0;
        let mut v = 1.0;
        let mut nodes = Vec::new();
        for i in 0..steps {
            if record && i % per_node == 0 {
                nodes.push(y);
            }
            let t = h * i as f64;
            let j = |y: f64| -0.5 * sum.deriv(y);
            let k1 = rhs(t, y);
            let l1 = j(y) * v;
            let y2 = y + 0.5 * h * k1;
            let k2 = rhs(t + 0.5 * h, y2);
            let l2 = j(y2) * (v + 0.5 * h * l1);
            let y3 = y + 0.5 * h * k2;
            let k3 = rhs(t + 0.5 * h, y3);
            let l3 = j(y3) * (v + 0.5 * h * l2);
            let y4 = y + h * k3;
            let k4 = rhs(t + h, y4);
            let l4 = j(y4) * (v + h * l3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            v += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        }
        (y, v, nodes)
    };

    let mut y0 = match equilibrium_solve(sum.f, sum.g, s.mean()) {
        Ok(Equilibrium::Point(d)) => d,
        _ => 0.0,
    };
    let mut defect = f64::INFINITY;
    for it in 1..=SHOOTING_MAX_ITER {
        let (y_t, v_t, _) = flow(y0, false);
        defect = y_t - y0;
        if !defect.is_finite() || !v_t.is_finite() {
            return Err(Error::ShootingDivergence { iterations: it, defect });
        }
        if defect.abs() <= 1e-13 * y0.abs().max(1.0) {
            let (_, _, nodes) = flow(y0, true);
            return Ok((nodes, it));
        }
        let slope = v_t - 1.0;
        if slope == 0.0 {
            return Err(Error::ShootingDivergence { iterations: it, defect });
        }
        y0 -= defect / slope;
    }
    Err(Error::ShootingDivergence {
        iterations: SHOOTING_MAX_ITER,
        defect,
    })
}

/// Remainder `n(y) - n'(0) y`.
fn remainder(n: &Nonlinearity, slope: f64, y: f64) -> f64 {
    n.eval(y) - slope * y
}

/// Damped Picard iteration `y ← y + (L⁻¹(s - N(y)) - y)/2`, where `L` is the
/// linearization at zero and `N` the nonlinear remainder of `f` and `g`.
pub fn nonlinear_small_source_solve(
    problem: &NddeProblem,
    kmax: usize,
    tol: f64,
    max_iter: usize,
) -> Result<FourierSolution> {
    let a = problem.f.deriv(0.0);
    let b = problem.g.deriv(0.0);
    let coeffs = LinearCoefficients::new(a, b, problem.c);
    require_stable(&coeffs)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive"));
    }
    let omega = source_omega(&problem.source);
    let s = problem.source.fourier_coefficients(kmax);
    let m = 4 * kmax + 1;
    let grid = Grid::new(m);
    let delay = |k: i64| math::cis(-(k as f64) * omega);

    let mut y = invert_modes(&coeffs, omega, &s)?;
    let mut last_step = f64::INFINITY;
    for it in 1..=max_iter {
        let vals = grid.synthesize(&y, |_| Complex::new(1.0, 0.0));
        let delayed = grid.synthesize(&y, delay);
        let nl: Vec<f64> = vals
            .iter()
            .zip(&delayed)
            .map(|(&v, &vd)| remainder(&problem.f, a, v) + remainder(&problem.g, b, vd))
            .collect();
        let nk = grid.analyze(&nl, kmax);
        let rhs: Vec<Complex> = s.iter().zip(&nk).map(|(&sk, &n)| sk - n).collect();
        let target = invert_modes(&coeffs, omega, &rhs)?;
        let mut step = 0.0;
        for (yk, tk) in y.iter_mut().zip(&target) {
            let delta = (*tk - *yk) * 0.5;
            step += delta.norm_sqr();
            *yk += delta;
        }
        last_step = math::sqrt(step);
        if !last_step.is_finite() || y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::ContractionFailed {
                iterations: it,
                last_step,
            });
        }
        if last_step <= tol {
            let mut sol = FourierSolution {
                omega,
                coefficients: y,
                residual_l2: 0.0,
                iterations: it,
            };
            sol.residual_l2 = periodic_residual(&sol, problem, m);
            return Ok(sol);
        }
    }
    Err(Error::ContractionFailed {
        iterations: max_iter,
        last_step,
    })
}
