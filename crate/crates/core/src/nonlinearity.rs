//! Scalar nonlinearities used for `f` and `g`.
//!
//! Every family carries exact closed forms for its value, first and second
//! derivative and antiderivative from zero (the potentials `F`, `G`).
//! Inverses are exact where a closed form exists and otherwise come from a
//! safeguarded Newton solve on a bracket.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::problem::Interval;

/// Parametric scalar function with exact calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity {
    /// `slope * y`
    Linear { slope: f64 },
    /// `slope * y + cubic * y^3`
    LinearPlusCubic { slope: f64, cubic: f64 },
    /// `amplitude * tanh(rate * y)`
    ScaledTanh { amplitude: f64, rate: f64 },
    /// Monotone cubic Hermite interpolant of tabulated data.
    Tabulated(MonotoneSpline),
}

/// Leading behaviour at infinity, split into the constant, linear and cubic
/// parts. Sums of nonlinearities add these componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Asymptote {
    pub constant_pos: f64,
    pub constant_neg: f64,
    pub linear: f64,
    pub cubic: f64,
}

impl Asymptote {
    pub fn add(self, other: Asymptote) -> Asymptote {
        Asymptote {
            constant_pos: self.constant_pos + other.constant_pos,
            constant_neg: self.constant_neg + other.constant_neg,
            linear: self.linear + other.linear,
            cubic: self.cubic + other.cubic,
        }
    }

    /// `lim_{y -> +inf}`.
    pub fn limit_pos(&self) -> f64 {
        if self.cubic != 0.0 {
            self.cubic.signum() * f64::INFINITY
        } else if self.linear != 0.0 {
            self.linear.signum() * f64::INFINITY
        } else {
            self.constant_pos
        }
    }

    /// `lim_{y -> -inf}`.
    pub fn limit_neg(&self) -> f64 {
        if self.cubic != 0.0 {
            -self.cubic.signum() * f64::INFINITY
        } else if self.linear != 0.0 {
            -self.linear.signum() * f64::INFINITY
        } else {
            self.constant_neg
        }
    }
}

impl Nonlinearity {
    pub fn linear(slope: f64) -> Self {
        Nonlinearity::Linear { slope }
    }

    pub fn linear_plus_cubic(slope: f64, cubic: f64) -> Self {
        Nonlinearity::LinearPlusCubic { slope, cubic }
    }

    pub fn scaled_tanh(amplitude: f64, rate: f64) -> Self {
        Nonlinearity::ScaledTanh { amplitude, rate }
    }

    /// The zero function, as `Linear(0)`.
    pub fn zero() -> Self {
        Nonlinearity::Linear { slope: 0.0 }
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            Nonlinearity::Linear { slope } => slope * y,
            Nonlinearity::LinearPlusCubic { slope, cubic } => y * (slope + cubic * y * y),
            Nonlinearity::ScaledTanh { amplitude, rate } => amplitude * math::tanh(rate * y),
            Nonlinearity::Tabulated(s) => s.eval(y),
        }
    }

    pub fn deriv(&self, y: f64) -> f64 {
        match self {
            Nonlinearity::Linear { slope } => *slope,
            Nonlinearity::LinearPlusCubic { slope, cubic } => slope + 3.0 * cubic * y * y,
            Nonlinearity::ScaledTanh { amplitude, rate } => {
                let th = math::tanh(rate * y);
                amplitude * rate * (1.0 - th * th)
            }
            Nonlinearity::Tabulated(s) => s.deriv(y),
        }
    }

    pub fn second_deriv(&self, y: f64) -> f64 {
        match self {
            Nonlinearity::Linear { .. } => 0.0,
            Nonlinearity::LinearPlusCubic { cubic, .. } => 6.0 * cubic * y,
            Nonlinearity::ScaledTanh { amplitude, rate } => {
                let th = math::tanh(rate * y);
                -2.0 * amplitude * rate * rate * th * (1.0 - th * th)
            }
            Nonlinearity::Tabulated(s) => s.second_deriv(y),
        }
    }

    /// Value and derivative together.
    #[inline]
    pub fn eval_with_deriv(&self, y: f64) -> (f64, f64) {
        (self.eval(y), self.deriv(y))
    }

    /// Declared domain: the table interval for [`Nonlinearity::Tabulated`],
    /// `None` (the whole line) otherwise.
    pub fn domain(&self) -> Option<Interval> {
        match self {
            Nonlinearity::Tabulated(s) => Some(s.domain()),
            _ => None,
        }
    }

    fn check_domain(&self, y: f64) -> Result<()> {
        if !y.is_finite() {
            return Err(Error::OutOfDomain {
                value: y,
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            });
        }
        if let Some(d) = self.domain() {
            if y < d.lo || y > d.hi {
                return Err(Error::OutOfDomain {
                    value: y,
                    lo: d.lo,
                    hi: d.hi,
                });
            }
        }
        Ok(())
    }

    /// Antiderivative from zero: `∫_0^y n(z) dz`.
    pub fn potential(&self, y: f64) -> Result<f64> {
        self.check_domain(y)?;
        Ok(self.potential_unchecked(y))
    }

    pub(crate) fn potential_unchecked(&self, y: f64) -> f64 {
        match self {
            Nonlinearity::Linear { slope } => 0.5 * slope * y * y,
            Nonlinearity::LinearPlusCubic { slope, cubic } => {
                let y2 = y * y;
                0.5 * slope * y2 + 0.25 * cubic * y2 * y2
            }
            Nonlinearity::ScaledTanh { amplitude, rate } => {
                if *rate == 0.0 {
                    0.0
                } else {
                    amplitude / rate * math::ln_cosh(rate * y)
                }
            }
            Nonlinearity::Tabulated(s) => s.integral_from_zero(y),
        }
    }

    /// Behaviour at `±∞`. `None` for domain-limited tables.
    pub fn asymptote(&self) -> Option<Asymptote> {
        match self {
            Nonlinearity::Linear { slope } => Some(Asymptote {
                linear: *slope,
                ..Asymptote::default()
            }),
            Nonlinearity::LinearPlusCubic { slope, cubic } => Some(Asymptote {
                linear: *slope,
                cubic: *cubic,
                ..Asymptote::default()
            }),
            Nonlinearity::ScaledTanh { amplitude, rate } => {
                let s = if *rate > 0.0 {
                    1.0
                } else if *rate < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                Some(Asymptote {
                    constant_pos: amplitude * s,
                    constant_neg: -amplitude * s,
                    ..Asymptote::default()
                })
            }
            Nonlinearity::Tabulated(_) => None,
        }
    }

    /// Solves `n(y) = v` for strictly increasing instances.
    pub fn inverse(&self, v: f64) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::OutOfRange { value: v });
        }
        match self {
            Nonlinearity::Linear { slope } => {
                if *slope > 0.0 {
                    Ok(v / slope)
                } else {
                    Err(Error::OutOfRange { value: v })
                }
            }
            Nonlinearity::LinearPlusCubic { slope, cubic } => {
                if *slope <= 0.0 || *cubic < 0.0 {
                    return Err(Error::OutOfRange { value: v });
                }
                let (lo, hi) = math::bracket_increasing(|y| self.eval(y), v)
                    .ok_or(Error::OutOfRange { value: v })?;
                Ok(math::solve_increasing(|y| self.eval_with_deriv(y), v, lo, hi))
            }
            Nonlinearity::ScaledTanh { amplitude, rate } => {
                if *amplitude <= 0.0 || *rate <= 0.0 || v.abs() >= *amplitude {
                    return Err(Error::OutOfRange { value: v });
                }
                let guess = math::atanh(v / amplitude) / rate;
                // One Newton polish; atanh loses digits near the asymptotes.
                let (fv, dv) = self.eval_with_deriv(guess);
                if dv > 0.0 {
                    let polished = guess - (fv - v) / dv;
                    if (self.eval(polished) - v).abs() < (fv - v).abs() {
                        return Ok(polished);
                    }
                }
                Ok(guess)
            }
            Nonlinearity::Tabulated(s) => s.inverse(v),
        }
    }

    /// `(n(w) - n(d))^2 / |n(w) - n(d) - (w - d) n'(d)|`, with `+∞` where the
    /// quadratic remainder vanishes identically. Uses closed forms where the
    /// difference would cancel catastrophically.
    pub fn remainder_quotient(&self, w: f64, d: f64) -> f64 {
        match self {
            Nonlinearity::Linear { .. } => f64::INFINITY,
            Nonlinearity::LinearPlusCubic { slope, cubic } => {
                if *cubic == 0.0 {
                    return f64::INFINITY;
                }
                let num = slope + cubic * (w * w + w * d + d * d);
                let den = (cubic * (w + 2.0 * d)).abs();
                if den == 0.0 {
                    f64::INFINITY
                } else {
                    num * num / den
                }
            }
            _ => {
                let delta = w - d;
                if delta.abs() <= 1e-5 * (1.0 + d.abs()) {
                    let fp = self.deriv(d);
                    let fpp = self.second_deriv(d).abs();
                    if fpp == 0.0 {
                        f64::INFINITY
                    } else {
                        2.0 * fp * fp / fpp
                    }
                } else {
                    let df = self.eval(w) - self.eval(d);
                    let rem = (df - delta * self.deriv(d)).abs();
                    if rem == 0.0 {
                        f64::INFINITY
                    } else {
                        df * df / rem
                    }
                }
            }
        }
    }
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Butland slopes).
/// Outside the knot interval it extends linearly with the end slopes so the
/// function stays `C¹` for the time stepper.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    /// `∫_{knots[0]}^{knots[i]}` of the interpolant.
    cumulative: Vec<f64>,
}

impl MonotoneSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::InvalidInput("knots and values differ in length"));
        }
        if knots.len() < 2 {
            return Err(Error::InvalidInput("a table needs at least two points"));
        }
        if knots.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("table entries must be finite"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("knots must be strictly increasing"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("tabulated values must be nondecreasing"));
        }
        let n = knots.len();
        let secants: Vec<f64> = (0..n - 1)
            .map(|i| (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]))
            .collect();
        let mut slopes = Vec::with_capacity(n);
        slopes.push(secants[0]);
        for i in 1..n - 1 {
            let (d0, d1) = (secants[i - 1], secants[i]);
            if d0 <= 0.0 || d1 <= 0.0 {
                slopes.push(0.0);
            } else {
                let h0 = knots[i] - knots[i - 1];
                let h1 = knots[i + 1] - knots[i];
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                slopes.push((w0 + w1) / (w0 / d0 + w1 / d1));
            }
        }
        slopes.push(secants[n - 2]);
        let mut spline = MonotoneSpline {
            knots,
            values,
            slopes,
            cumulative: Vec::new(),
        };
        let mut cumulative = Vec::with_capacity(n);
        cumulative.push(0.0);
        for i in 0..n - 1 {
            let h = spline.knots[i + 1] - spline.knots[i];
            let prev = cumulative[i];
            cumulative.push(prev + spline.segment_integral(i, h));
        }
        spline.cumulative = cumulative;
        Ok(spline)
    }

    pub fn domain(&self) -> Interval {
        Interval {
            lo: self.knots[0],
            hi: self.knots[self.knots.len() - 1],
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.knots.len();
        match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&x).unwrap_or(core::cmp::Ordering::Less))
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x < self.knots[0] {
            return self.values[0] + self.slopes[0] * (x - self.knots[0]);
        }
        if x > self.knots[n - 1] {
            return self.values[n - 1] + self.slopes[n - 1] * (x - self.knots[n - 1]);
        }
        let i = self.segment(x);
        let h = self.knots[i + 1] - self.knots[i];
        let t = (x - self.knots[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        self.values[i] * (2.0 * t3 - 3.0 * t2 + 1.0)
            + h * self.slopes[i] * (t3 - 2.0 * t2 + t)
            + self.values[i + 1] * (-2.0 * t3 + 3.0 * t2)
            + h * self.slopes[i + 1] * (t3 - t2)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x < self.knots[0] {
            return self.slopes[0];
        }
        if x > self.knots[n - 1] {
            return self.slopes[n - 1];
        }
        let i = self.segment(x);
        let h = self.knots[i + 1] - self.knots[i];
        let t = (x - self.knots[i]) / h;
        let t2 = t * t;
        (self.values[i] * (6.0 * t2 - 6.0 * t) + self.values[i + 1] * (-6.0 * t2 + 6.0 * t)) / h
            + self.slopes[i] * (3.0 * t2 - 4.0 * t + 1.0)
            + self.slopes[i + 1] * (3.0 * t2 - 2.0 * t)
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x < self.knots[0] || x > self.knots[n - 1] {
            return 0.0;
        }
        let i = self.segment(x);
        let h = self.knots[i + 1] - self.knots[i];
        let t = (x - self.knots[i]) / h;
        (self.values[i] * (12.0 * t - 6.0) + self.values[i + 1] * (-12.0 * t + 6.0)) / (h * h)
            + (self.slopes[i] * (6.0 * t - 4.0) + self.slopes[i + 1] * (6.0 * t - 2.0)) / h
    }

    /// `∫_{knots[i]}^{knots[i] + s h}` on segment `i`, with `s = len / h`.
    fn segment_integral(&self, i: usize, len: f64) -> f64 {
        let h = self.knots[i + 1] - self.knots[i];
        let t = len / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t2 * t2;
        h * (self.values[i] * (t - t3 + 0.5 * t4)
            + h * self.slopes[i] * (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4)
            + self.values[i + 1] * (t3 - 0.5 * t4)
            + h * self.slopes[i + 1] * (-t3 / 3.0 + 0.25 * t4))
    }

    /// `∫_{knots[0]}^{x}`; linear extension outside the table.
    fn integral_from_start(&self, x: f64) -> f64 {
        let n = self.knots.len();
        let x0 = self.knots[0];
        if x <= x0 {
            let dx = x - x0;
            return self.values[0] * dx + 0.5 * self.slopes[0] * dx * dx;
        }
        if x >= self.knots[n - 1] {
            let dx = x - self.knots[n - 1];
            return self.cumulative[n - 1] + self.values[n - 1] * dx + 0.5 * self.slopes[n - 1] * dx * dx;
        }
        let i = self.segment(x);
        self.cumulative[i] + self.segment_integral(i, x - self.knots[i])
    }

    pub fn integral_from_zero(&self, x: f64) -> f64 {
        self.integral_from_start(x) - self.integral_from_start(0.0)
    }

    pub fn inverse(&self, v: f64) -> Result<f64> {
        let n = self.knots.len();
        let (vlo, vhi) = (self.values[0], self.values[n - 1]);
        if v < vlo || v > vhi || vhi <= vlo {
            return Err(Error::OutOfRange { value: v });
        }
        let d = self.domain();
        Ok(math::solve_increasing(
            |x| (self.eval(x), self.deriv(x)),
            v,
            d.lo,
            d.hi,
        ))
    }
}

/// `f + g` as a single increasing map, used by equilibrium and reduced-ODE
/// solves.
#[derive(Debug, Clone, Copy)]
pub struct SumMap<'a> {
    pub f: &'a Nonlinearity,
    pub g: &'a Nonlinearity,
}

impl<'a> SumMap<'a> {
    pub fn new(f: &'a Nonlinearity, g: &'a Nonlinearity) -> Self {
        SumMap { f, g }
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.f.eval(y) + self.g.eval(y)
    }

    pub fn deriv(&self, y: f64) -> f64 {
        self.f.deriv(y) + self.g.deriv(y)
    }

    /// Intersection of the two declared domains.
    pub fn domain(&self) -> Option<Interval> {
        match (self.f.domain(), self.g.domain()) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d),
            (Some(a), Some(b)) => Some(Interval {
                lo: a.lo.max(b.lo),
                hi: a.hi.min(b.hi),
            }),
        }
    }

    /// `(inf, sup)` of `f + g`, assuming it is increasing.
    pub fn range(&self) -> (f64, f64) {
        match (self.f.asymptote(), self.g.asymptote(), self.domain()) {
            (Some(a), Some(b), _) => {
                let s = a.add(b);
                (s.limit_neg(), s.limit_pos())
            }
            (_, _, Some(d)) => (self.eval(d.lo), self.eval(d.hi)),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Solves `f(y) + g(y) = v` for increasing `f + g`.
    pub fn inverse(&self, v: f64) -> Result<f64> {
        if let (Nonlinearity::Linear { slope: a }, Nonlinearity::Linear { slope: b }) = (self.f, self.g) {
            let s = a + b;
            return if s > 0.0 && v.is_finite() {
                Ok(v / s)
            } else {
                Err(Error::OutOfRange { value: v })
            };
        }
        let (lo, hi) = match self.domain() {
            Some(d) => {
                if v < self.eval(d.lo) || v > self.eval(d.hi) {
                    return Err(Error::OutOfRange { value: v });
                }
                (d.lo, d.hi)
            }
            None => {
                let (inf, sup) = self.range();
                if v <= inf || v >= sup || !v.is_finite() {
                    return Err(Error::OutOfRange { value: v });
                }
                math::bracket_increasing(|y| self.eval(y), v).ok_or(Error::OutOfRange { value: v })?
            }
        };
        Ok(math::solve_increasing(
            |y| (self.eval(y), self.deriv(y)),
            v,
            lo,
            hi,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn linear_potential_is_half_slope_square() {
        let n = Nonlinearity::linear(3.0);
        assert!(close(n.potential(2.0).unwrap(), 6.0, 1e-15));
    }

    #[test]
    fn potential_vanishes_at_origin() {
        let spline = MonotoneSpline::new(vec![-2.0, -0.5, 0.0, 1.0, 3.0], vec![-3.0, -0.4, 0.0, 1.5, 2.0]).unwrap();
        for n in [
            Nonlinearity::linear(2.0),
            Nonlinearity::linear_plus_cubic(1.0, 2.0),
            Nonlinearity::scaled_tanh(2.0, 0.7),
            Nonlinearity::Tabulated(spline),
        ] {
            assert_eq!(n.potential(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn cubic_potential_at_one() {
        let n = Nonlinearity::linear_plus_cubic(1.0, 2.0);
        assert!(close(n.potential(1.0).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Nonlinearity::linear(2.0).inverse(3.0).unwrap(), 1.5);
        assert!(matches!(
            Nonlinearity::scaled_tanh(1.0, 1.0).inverse(2.0),
            Err(Error::OutOfRange { .. })
        ));
        let y = Nonlinearity::linear_plus_cubic(1.0, 1.0).inverse(2.0).unwrap();
        assert!((y - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn tabulated_outside_domain_is_rejected() {
        let s = MonotoneSpline::new(vec![-1.0, 0.0, 1.0], vec![-1.0, 0.0, 2.0]).unwrap();
        let n = Nonlinearity::Tabulated(s);
        assert!(matches!(n.potential(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(n.inverse(2.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn spline_interpolates_knots() {
        let s = MonotoneSpline::new(vec![0.0, 1.0, 2.5], vec![0.0, 1.0, 1.2]).unwrap();
        assert_eq!(s.eval(0.0), 0.0);
        assert!((s.eval(1.0) - 1.0).abs() < 1e-15);
        assert!((s.eval(2.5) - 1.2).abs() < 1e-15);
        assert!(MonotoneSpline::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn cubic_remainder_quotient_matches_direct_formula() {
        let f = Nonlinearity::linear_plus_cubic(1.0, 1.0);
        let (w, d) = (0.7, -0.2);
        let df = f.eval(w) - f.eval(d);
        let rem = (df - (w - d) * f.deriv(d)).abs();
        assert!(close(f.remainder_quotient(w, d), df * df / rem, 1e-12));
    }

    #[test]
    fn sum_range_of_saturating_pair() {
        let f = Nonlinearity::scaled_tanh(1.0, 1.0);
        let g = Nonlinearity::zero();
        assert_eq!(SumMap::new(&f, &g).range(), (-1.0, 1.0));
        let c = Nonlinearity::linear_plus_cubic(1.0, 1.0);
        let (lo, hi) = SumMap::new(&c, &g).range();
        assert!(lo.is_infinite() && hi.is_infinite());
    }
}
