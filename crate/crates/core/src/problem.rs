//! Problem model: the neutral coefficient, the nonlinearities, the forcing,
//! the initial history, hypothesis validation and equilibria.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::nonlinearity::{Nonlinearity, SumMap};
use crate::source::SourceSpec;

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput("interval endpoints must be finite"));
        }
        if hi < lo {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo <= y && y <= self.hi
    }
}

/// The neutral coefficient `c ∈ {+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Neutral {
    Plus,
    Minus,
}

impl Neutral {
    pub fn from_int(c: i64) -> Result<Self> {
        match c {
            1 => Ok(Neutral::Plus),
            -1 => Ok(Neutral::Minus),
            _ => Err(Error::InvalidInput("the neutral coefficient c must be +1 or -1")),
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Neutral::Plus => 1.0,
            Neutral::Minus => -1.0,
        }
    }

    #[inline]
    pub fn sign(self) -> i64 {
        match self {
            Neutral::Plus => 1,
            Neutral::Minus => -1,
        }
    }
}

/// Scalar neutral delay equation `y' + c y'(t-1) + f(y) + g(y(t-1)) = s`.
#[derive(Debug, Clone, PartialEq)]
pub struct NddeProblem {
    pub c: Neutral,
    pub f: Nonlinearity,
    pub g: Nonlinearity,
    pub source: SourceSpec,
    /// Sampled `sup |g| / |f|` over `validity` (the constant γ).
    pub gamma_bound: f64,
    /// Interval on which the hypotheses were checked.
    pub validity: Interval,
    /// Whether derivative domination and coercivity were certified too.
    pub strong_hypotheses: bool,
}

/// Samples used by [`NddeProblem::new`] to estimate γ.
const DEFAULT_SAMPLES: usize = 2048;

impl NddeProblem {
    /// Builds a problem and estimates γ on `validity`. No hypothesis is
    /// enforced here; use [`validate_problem`] for a report.
    pub fn new(
        c: Neutral,
        f: Nonlinearity,
        g: Nonlinearity,
        source: SourceSpec,
        validity: Interval,
    ) -> Result<Self> {
        for n in [&f, &g] {
            if let Some(d) = n.domain() {
                if validity.lo < d.lo || validity.hi > d.hi {
                    return Err(Error::InvalidInput(
                        "validity interval exceeds the tabulated domain",
                    ));
                }
            }
        }
        let mut problem = NddeProblem {
            c,
            f,
            g,
            source,
            gamma_bound: 0.0,
            validity,
            strong_hypotheses: false,
        };
        if !validity.is_degenerate() {
            let pts = sample_points(validity, DEFAULT_SAMPLES);
            problem.gamma_bound = value_ratio(&problem.f, &problem.g, &pts).0;
            problem.strong_hypotheses = derivative_ratio(&problem.f, &problem.g, &pts).0 < 1.0
                && coercive(&problem.f);
        }
        Ok(problem)
    }

    /// Homogeneous linear problem `y' + c y'(t-1) + a y + b y(t-1) = 0`.
    pub fn linear(c: Neutral, a: f64, b: f64, source: SourceSpec) -> Self {
        let gamma = if a == 0.0 {
            if b == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (b / a).abs()
        };
        NddeProblem {
            c,
            f: Nonlinearity::linear(a),
            g: Nonlinearity::linear(b),
            source,
            gamma_bound: gamma,
            validity: Interval { lo: -1e6, hi: 1e6 },
            strong_hypotheses: a > 0.0 && gamma < 1.0,
        }
    }

    /// Slopes `(a, b)` when both nonlinearities are linear.
    pub fn linear_slopes(&self) -> Option<(f64, f64)> {
        match (&self.f, &self.g) {
            (Nonlinearity::Linear { slope: a }, Nonlinearity::Linear { slope: b }) => Some((*a, *b)),
            _ => None,
        }
    }

    pub fn with_source(mut self, source: SourceSpec) -> Self {
        self.source = source;
        self
    }
}

/// Initial data `y₀` on `[-1, 0]` sampled on the grid `-1 + j/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    n: usize,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl History {
    /// From samples of `y₀` and `y₀'`, both of length `N + 1`.
    pub fn from_samples(values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        if values.len() != derivs.len() {
            return Err(Error::InvalidInput("history values and derivatives differ in length"));
        }
        if values.len() < 3 {
            return Err(Error::InvalidInput("history needs N >= 2"));
        }
        if values.iter().chain(derivs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("history samples must be finite"));
        }
        Ok(History {
            n: values.len() - 1,
            values,
            derivs,
        })
    }

    /// From values alone; derivatives by centered differences (one-sided
    /// second-order at the ends).
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidInput("history needs N >= 2"));
        }
        let n = values.len() - 1;
        let inv = n as f64;
        let mut derivs = Vec::with_capacity(n + 1);
        derivs.push(0.5 * inv * (-3.0 * values[0] + 4.0 * values[1] - values[2]));
        for j in 1..n {
            derivs.push(0.5 * inv * (values[j + 1] - values[j - 1]));
        }
        derivs.push(0.5 * inv * (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]));
        Self::from_samples(values, derivs)
    }

    /// Samples an analytic `y₀` and its derivative.
    pub fn from_fn<Y, D>(n: usize, y: Y, dy: D) -> Result<Self>
    where
        Y: Fn(f64) -> f64,
        D: Fn(f64) -> f64,
    {
        if n < 2 {
            return Err(Error::InvalidInput("history needs N >= 2"));
        }
        let h = 1.0 / n as f64;
        let ts = (0..=n).map(|j| -1.0 + j as f64 * h);
        let values = ts.clone().map(&y).collect();
        let derivs = ts.map(&dy).collect();
        Self::from_samples(values, derivs)
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::from_fn(n, |_| value, |_| 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid_step(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    /// `Σ h (y² + y'²)` over the samples.
    pub fn h1_norm_squared(&self) -> f64 {
        let h = self.grid_step();
        self.values
            .iter()
            .zip(&self.derivs)
            .map(|(y, d)| h * (y * y + d * d))
            .sum()
    }

    /// Cubic Hermite value and derivative at `t ∈ [-1, 0]`.
    pub fn interpolate(&self, t: f64) -> (f64, f64) {
        let s = ((t + 1.0) * self.n as f64).clamp(0.0, self.n as f64);
        let i = (math::floor(s) as usize).min(self.n - 1);
        let u = s - i as f64;
        let h = self.grid_step();
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i], self.derivs[i + 1]);
        let u2 = u * u;
        let u3 = u2 * u;
        let y = y0 * (2.0 * u3 - 3.0 * u2 + 1.0)
            + h * d0 * (u3 - 2.0 * u2 + u)
            + y1 * (-2.0 * u3 + 3.0 * u2)
            + h * d1 * (u3 - u2);
        let dy = (y0 - y1) * (6.0 * u2 - 6.0 * u) / h
            + d0 * (3.0 * u2 - 4.0 * u + 1.0)
            + d1 * (3.0 * u2 - 2.0 * u);
        (y, dy)
    }

    /// Resamples onto the grid with `n` steps. Values come from the cubic
    /// Hermite interpolant, derivatives are refitted from it.
    pub fn resample(&self, n: usize) -> Result<Self> {
        if n == self.n {
            return Ok(self.clone());
        }
        if n < 2 {
            return Err(Error::InvalidInput("history needs N >= 2"));
        }
        let h = 1.0 / n as f64;
        let (values, derivs) = (0..=n).map(|j| self.interpolate(-1.0 + j as f64 * h)).unzip();
        Self::from_samples(values, derivs)
    }
}

/// The hypotheses checked by [`validate_problem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// `c ∈ {+1, -1}`.
    NeutralCoefficient,
    /// `f(0) = 0` and `f' > 0`.
    IncreasingF,
    /// `|g| <= γ |f|` with `γ < 1`.
    DominatedG,
    /// `s` is periodic.
    PeriodicSource,
    /// `|g'| <= γ |f'|` with `γ < 1`.
    DominatedDerivative,
    /// `f(y) → ±∞` as `y → ±∞`.
    CoerciveF,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 6] = [
        Hypothesis::NeutralCoefficient,
        Hypothesis::IncreasingF,
        Hypothesis::DominatedG,
        Hypothesis::PeriodicSource,
        Hypothesis::DominatedDerivative,
        Hypothesis::CoerciveF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::NeutralCoefficient => "neutral_coefficient",
            Hypothesis::IncreasingF => "increasing_f",
            Hypothesis::DominatedG => "dominated_g",
            Hypothesis::PeriodicSource => "periodic_source",
            Hypothesis::DominatedDerivative => "dominated_derivative",
            Hypothesis::CoerciveF => "coercive_f",
        }
    }

    /// Whether the hypothesis belongs to the strengthened set needed for
    /// constant forcing with `g != 0` and for periodic solutions.
    pub fn is_strong(self) -> bool {
        matches!(self, Hypothesis::DominatedDerivative | Hypothesis::CoerciveF)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub hypothesis: Hypothesis,
    pub passed: bool,
    /// A sample where the hypothesis fails.
    pub witness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub interval: Interval,
    pub samples: usize,
    /// Tightened γ: the largest sampled `|g| / |f|`.
    pub gamma_bound: f64,
    /// Largest sampled `|g'| / |f'|`.
    pub derivative_ratio: f64,
    pub checks: Vec<HypothesisCheck>,
}

impl ValidationReport {
    pub fn check(&self, h: Hypothesis) -> &HypothesisCheck {
        self.checks
            .iter()
            .find(|c| c.hypothesis == h)
            .expect("every hypothesis is checked")
    }

    /// The standing hypotheses (all but the strengthened ones) hold.
    pub fn basic_passed(&self) -> bool {
        self.checks.iter().filter(|c| !c.hypothesis.is_strong()).all(|c| c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Van der Corput points in `[0, 1)`. Prefixes are nested, so a larger
/// sample count only adds points.
fn van_der_corput(mut i: usize) -> f64 {
    let mut x = 0.0;
    let mut base = 0.5;
    while i > 0 {
        if i & 1 == 1 {
            x += base;
        }
        base *= 0.5;
        i >>= 1;
    }
    x
}

/// The endpoints, the origin when inside, and `samples` nested points.
fn sample_points(interval: Interval, samples: usize) -> Vec<f64> {
    let mut pts = Vec::with_capacity(samples + 3);
    pts.push(interval.lo);
    pts.push(interval.hi);
    if interval.contains(0.0) {
        pts.push(0.0);
    }
    for i in 1..samples {
        pts.push(interval.lo + interval.len() * van_der_corput(i));
    }
    pts
}

/// `(sup |g|/|f|, argmax)` over the samples, with the derivative ratio at
/// the removable singularity `y = 0`.
fn value_ratio(f: &Nonlinearity, g: &Nonlinearity, pts: &[f64]) -> (f64, Option<f64>) {
    if let (Nonlinearity::Linear { slope: a }, Nonlinearity::Linear { slope: b }) = (f, g) {
        return (exact_ratio(*b, *a), None);
    }
    let mut worst = (0.0, None);
    for &y in pts {
        let r = if y == 0.0 {
            let g0 = g.eval(0.0);
            if g0 != 0.0 {
                f64::INFINITY
            } else {
                exact_ratio(g.deriv(0.0), f.deriv(0.0))
            }
        } else {
            exact_ratio(g.eval(y), f.eval(y))
        };
        if r > worst.0 || r.is_nan() {
            worst = (if r.is_nan() { f64::INFINITY } else { r }, Some(y));
        }
    }
    worst
}

fn derivative_ratio(f: &Nonlinearity, g: &Nonlinearity, pts: &[f64]) -> (f64, Option<f64>) {
    let mut worst = (0.0, None);
    for &y in pts {
        let r = exact_ratio(g.deriv(y), f.deriv(y));
        if r > worst.0 || r.is_nan() {
            worst = (if r.is_nan() { f64::INFINITY } else { r }, Some(y));
        }
    }
    worst
}

/// `|num| / |den|` with `0/0 = 0`.
fn exact_ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        (num / den).abs()
    }
}

fn coercive(f: &Nonlinearity) -> bool {
    match f.asymptote() {
        Some(a) => a.limit_pos() == f64::INFINITY && a.limit_neg() == f64::NEG_INFINITY,
        None => false,
    }
}

/// Checks every hypothesis on the problem's validity interval with
/// `samples` nested sample points (plus the endpoints and the origin).
pub fn validate_problem(problem: &NddeProblem, samples: usize) -> Result<ValidationReport> {
    let interval = problem.validity;
    if interval.is_degenerate() {
        return Err(Error::DegenerateInterval {
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    if samples < 100 {
        return Err(Error::InvalidInput("validation needs at least 100 samples"));
    }
    let pts = sample_points(interval, samples);
    let f = &problem.f;
    let g = &problem.g;

    let increasing_witness = if f.eval(0.0) != 0.0 {
        Some(0.0)
    } else {
        pts.iter().copied().find(|&y| !(f.deriv(y) > 0.0))
    };
    let (gamma, gamma_at) = value_ratio(f, g, &pts);
    let (dgamma, dgamma_at) = derivative_ratio(f, g, &pts);
    let coercive_witness = if coercive(f) {
        None
    } else {
        Some(match f.domain() {
            Some(d) => d.hi,
            None => interval.hi,
        })
    };
    let periodic = match &problem.source {
        SourceSpec::Zero | SourceSpec::Constant(_) => true,
        other => other.omega().is_some_and(|w| w > 0.0 && w.is_finite()),
    };

    let checks = alloc::vec![
        HypothesisCheck {
            hypothesis: Hypothesis::NeutralCoefficient,
            passed: true,
            witness: None,
        },
        HypothesisCheck {
            hypothesis: Hypothesis::IncreasingF,
            passed: increasing_witness.is_none(),
            witness: increasing_witness,
        },
        HypothesisCheck {
            hypothesis: Hypothesis::DominatedG,
            passed: gamma < 1.0,
            witness: if gamma < 1.0 { None } else { gamma_at.or(Some(interval.hi)) },
        },
        HypothesisCheck {
            hypothesis: Hypothesis::PeriodicSource,
            passed: periodic,
            witness: None,
        },
        HypothesisCheck {
            hypothesis: Hypothesis::DominatedDerivative,
            passed: dgamma < 1.0,
            witness: if dgamma < 1.0 { None } else { dgamma_at },
        },
        HypothesisCheck {
            hypothesis: Hypothesis::CoerciveF,
            passed: coercive_witness.is_none(),
            witness: coercive_witness,
        },
    ];
    Ok(ValidationReport {
        interval,
        samples,
        gamma_bound: gamma,
        derivative_ratio: dgamma,
        checks,
    })
}

/// Outcome of solving `f(d) + g(d) = D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equilibrium {
    Point(f64),
    /// `D` above the finite supremum of `f + g`: solutions grow without bound.
    DivergesPlus,
    /// `D` below the finite infimum of `f + g`.
    DivergesMinus,
    /// `D` equal to a finite, unattained supremum or infimum.
    NoConvergence,
}

/// Solves `f(d) + g(d) = D` for increasing `f + g`, or classifies `D`
/// relative to the range.
pub fn equilibrium_solve(f: &Nonlinearity, g: &Nonlinearity, target: f64) -> Result<Equilibrium> {
    if !target.is_finite() {
        return Err(Error::InvalidInput("constant source must be finite"));
    }
    let sum = SumMap::new(f, g);
    if let Some(d) = sum.domain() {
        let (lo, hi) = (sum.eval(d.lo), sum.eval(d.hi));
        if target < lo || target > hi {
            return Err(Error::NotBracketed { target });
        }
        return Ok(Equilibrium::Point(sum.inverse(target)?));
    }
    let (inf, sup) = sum.range();
    if sup.is_finite() && target >= sup {
        return Ok(if target > sup {
            Equilibrium::DivergesPlus
        } else {
            Equilibrium::NoConvergence
        });
    }
    if inf.is_finite() && target <= inf {
        return Ok(if target < inf {
            Equilibrium::DivergesMinus
        } else {
            Equilibrium::NoConvergence
        });
    }
    match sum.inverse(target) {
        Ok(d) => Ok(Equilibrium::Point(d)),
        Err(_) => Err(Error::NotBracketed { target }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(f: Nonlinearity, g: Nonlinearity) -> NddeProblem {
        NddeProblem::new(Neutral::Plus, f, g, SourceSpec::Zero, Interval::new(-5.0, 5.0).unwrap()).unwrap()
    }

    #[test]
    fn linear_pair_validates_with_exact_gamma() {
        let p = problem(Nonlinearity::linear(1.0), Nonlinearity::linear(0.5));
        let r = validate_problem(&p, 100).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.gamma_bound, 0.5);
    }

    #[test]
    fn equal_slopes_violate_domination() {
        let p = problem(Nonlinearity::linear(1.0), Nonlinearity::linear(1.0));
        let r = validate_problem(&p, 100).unwrap();
        assert!(!r.check(Hypothesis::DominatedG).passed);
    }

    #[test]
    fn decreasing_f_is_flagged() {
        let p = problem(Nonlinearity::linear(-1.0), Nonlinearity::zero());
        let r = validate_problem(&p, 100).unwrap();
        let c = r.check(Hypothesis::IncreasingF);
        assert!(!c.passed);
        assert!(c.witness.is_some());
    }

    #[test]
    fn degenerate_interval_is_an_error() {
        let mut p = problem(Nonlinearity::linear(1.0), Nonlinearity::zero());
        p.validity = Interval { lo: 1.0, hi: 1.0 };
        assert!(matches!(validate_problem(&p, 100), Err(Error::DegenerateInterval { .. })));
    }

    #[test]
    fn equilibria() {
        let d = equilibrium_solve(&Nonlinearity::linear(1.0), &Nonlinearity::linear(0.5), 3.0).unwrap();
        assert_eq!(d, Equilibrium::Point(2.0));
        let d = equilibrium_solve(&Nonlinearity::linear_plus_cubic(1.0, 1.0), &Nonlinearity::zero(), 2.0).unwrap();
        match d {
            Equilibrium::Point(x) => assert!((x - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let tanh = Nonlinearity::scaled_tanh(1.0, 1.0);
        assert_eq!(equilibrium_solve(&tanh, &Nonlinearity::zero(), 2.0).unwrap(), Equilibrium::DivergesPlus);
        assert_eq!(equilibrium_solve(&tanh, &Nonlinearity::zero(), 1.0).unwrap(), Equilibrium::NoConvergence);
        assert_eq!(equilibrium_solve(&tanh, &Nonlinearity::zero(), -3.0).unwrap(), Equilibrium::DivergesMinus);
    }

    #[test]
    fn history_resample_preserves_cubics() {
        let h = History::from_fn(8, |t| t * t * t - t, |t| 3.0 * t * t - 1.0).unwrap();
        let r = h.resample(20).unwrap();
        for (j, (&y, &d)) in r.values().iter().zip(r.derivs()).enumerate() {
            let t = -1.0 + j as f64 / 20.0;
            assert!((y - (t * t * t - t)).abs() < 1e-14);
            assert!((d - (3.0 * t * t - 1.0)).abs() < 1e-13);
        }
    }
}
