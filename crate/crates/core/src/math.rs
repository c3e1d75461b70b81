//! `libm` shims. Every transcendental call in the crate goes through here so
//! results do not depend on whether `std` happens to be linked.

pub use num_complex::Complex64 as Complex;

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub(crate) fn log1p(x: f64) -> f64 {
    libm::log1p(x)
}
#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub(crate) fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}
#[inline]
pub(crate) fn atanh(x: f64) -> f64 {
    libm::atanh(x)
}
#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}
#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}
#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

/// `e^{iθ}`.
#[inline]
pub(crate) fn cis(theta: f64) -> Complex {
    Complex::new(cos(theta), sin(theta))
}

/// `e^{z}` for complex `z`.
#[inline]
pub(crate) fn cexp(z: Complex) -> Complex {
    let m = exp(z.re);
    Complex::new(m * cos(z.im), m * sin(z.im))
}

#[inline]
pub(crate) fn cabs(z: Complex) -> f64 {
    libm::hypot(z.re, z.im)
}

/// `ln cosh x` without overflow.
pub(crate) fn ln_cosh(x: f64) -> f64 {
    let ax = abs(x);
    ax + log1p(exp(-2.0 * ax)) - core::f64::consts::LN_2
}

/// Safeguarded Newton for a nondecreasing scalar map on a bracket
/// `[lo, hi]` with `F(lo) <= target <= F(hi)`. Falls back to bisection
/// whenever the Newton step leaves the bracket.
pub(crate) fn solve_increasing<F>(map: F, target: f64, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let tol = 1e-13 * target.abs().max(1.0);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let (v, dv) = map(x);
        let r = v - target;
        if r.abs() <= tol {
            return x;
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - r / dv;
        x = if dv > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return x;
        }
    }
    x
}

/// Expands `[-1, 1]` geometrically until `F(lo) <= target <= F(hi)`.
pub(crate) fn bracket_increasing<F>(map: F, target: f64) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut lo = -1.0;
    let mut hi = 1.0;
    for _ in 0..1100 {
        let flo = map(lo);
        let fhi = map(hi);
        if flo <= target && target <= fhi {
            return Some((lo, hi));
        }
        if !flo.is_finite() || !fhi.is_finite() {
            return None;
        }
        if flo > target {
            lo *= 2.0;
        }
        if fhi < target {
            hi *= 2.0;
        }
        if lo < -1e300 || hi > 1e300 {
            return None;
        }
    }
    None
}
