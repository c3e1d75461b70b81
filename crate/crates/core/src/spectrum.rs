//! Characteristic roots of the linearization
//! `y' + c y'(t-1) + a y + b y(t-1) = 0`, i.e. the zeros of
//!
//! ```text
//! h(λ) = λ(e^λ + c) + a e^λ + b,
//! ```
//!
//! and the classification of the `(a, b)` plane for `c = ±1`.
//!
//! All zeros lie in the strip `|Re λ| < |a| + |b| + 2`: to the right of it the
//! term `e^λ(λ + a)` dominates, to the left `cλ + b` does. Far from the
//! origin they follow the branches `λ_n ≈ iΩ(n) + i(a - cb)/Ω(n)` with
//! `Ω(n) = (2n + (1+c)/2)π`. Roots are seeded from these asymptotics, from a
//! real-axis scan and from the local Taylor expansion at zero, then
//! certified by an argument-principle count over a box that covers the
//! requested branches; missing roots are recovered by subdividing the box.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::problem::{Interval, Neutral};

/// `(a, b, c)` of the linearized equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: Neutral,
}

impl LinearCoefficients {
    pub fn new(a: f64, b: f64, c: Neutral) -> Self {
        LinearCoefficients { a, b, c }
    }

    /// `d = a - c b`.
    pub fn detuning(&self) -> f64 {
        self.a - self.c.value() * self.b
    }

    /// Half-width of the strip containing every root.
    pub fn strip_half_width(&self) -> f64 {
        self.a.abs() + self.b.abs() + 2.0
    }
}

/// `h(λ) = λ(e^λ + c) + a e^λ + b`.
pub fn char_h(lambda: Complex, k: &LinearCoefficients) -> Complex {
    let e = math::cexp(lambda);
    lambda * (e + k.c.value()) + e * k.a + k.b
}

/// `h^{(m)}(λ) = e^λ(λ + a + m) + [m = 1] c` for `m >= 1`.
pub fn char_h_derivative(lambda: Complex, k: &LinearCoefficients, m: u32) -> Complex {
    let e = math::cexp(lambda);
    let mut v = e * (lambda + k.a + m as f64);
    if m == 1 {
        v += k.c.value();
    }
    v
}

/// `calH(λ) = e^{-λ} h(λ) = λ(1 + c e^{-λ}) + a + b e^{-λ}`, the symbol of the
/// linear operator on `e^{λt}`. On the imaginary axis `|calH| = |h|`.
pub fn cal_h(lambda: Complex, k: &LinearCoefficients) -> Complex {
    let e = math::cexp(-lambda);
    lambda * (e * k.c.value() + 1.0) + k.a + e * k.b
}

/// `Ω(n) = (2n + (1+c)/2)π`.
pub fn omega_asymptotic(n: i64, c: Neutral) -> f64 {
    let shift = match c {
        Neutral::Plus => 1.0,
        Neutral::Minus => 0.0,
    };
    (2.0 * n as f64 + shift) * math::PI
}

/// Index of the branch whose asymptote `Ω(n)` is nearest to `y`, ties to the
/// smaller index.
pub fn nearest_branch(y: f64, c: Neutral) -> i64 {
    let shift = match c {
        Neutral::Plus => 1.0,
        Neutral::Minus => 0.0,
    };
    let x = (y / math::PI - shift) / 2.0;
    let r = math::round(x);
    if (r - x).abs() == 0.5 && r > x {
        (r - 1.0) as i64
    } else {
        r as i64
    }
}

/// Second-order expansion `λ ≈ i m - (i/m) b + (1/(2m²) - i/m³) b²` of the
/// root near `i m` for `c = +1`, `a = 0` and small `b`.
pub fn quadrant3_expansion(b: f64, m: f64) -> Complex {
    let i = Complex::new(0.0, 1.0);
    i * m - i * (b / m) + (Complex::new(1.0 / (2.0 * m * m), 0.0) - i / (m * m * m)) * (b * b)
}

/// How a root was labeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Complex root attached to the asymptote `iΩ(n)`.
    Index(i64),
    /// Nonzero real root.
    Real,
    /// `λ = 0`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoot {
    pub lambda: Complex,
    pub branch: Branch,
    /// `|h(λ)|`.
    pub residual: f64,
    pub multiplicity: u32,
}

/// Result of [`find_roots`].
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub coefficients: LinearCoefficients,
    /// Sorted by imaginary part, then real part.
    pub roots: Vec<CharacteristicRoot>,
    /// Branch indices whose seed did not converge.
    pub stalled: Vec<i64>,
    /// The box that was certified.
    pub re_range: Interval,
    pub im_range: Interval,
    /// Argument-principle count in the box.
    pub certified_count: Option<u64>,
}

impl RootSet {
    /// Roots counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.roots.iter().map(|r| r.multiplicity as u64).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.certified_count == Some(self.total_multiplicity())
    }

    pub fn max_re(&self) -> f64 {
        self.roots.iter().map(|r| r.lambda.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

const NEWTON_MAX_ITER: usize = 100;
const ROOT_TOL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-8;
const MULTIPLE_DEDUP_TOL: f64 = 1e-6;
const MULTIPLICITY_TOL: f64 = 1e-8;

/// Damped Newton on `h^{(order)}`. Returns `None` if it does not converge.
fn newton(k: &LinearCoefficients, seed: Complex, order: u32) -> Option<Complex> {
    let eval = |z: Complex| {
        if order == 0 {
            char_h(z, k)
        } else {
            char_h_derivative(z, k, order)
        }
    };
    let mut z = seed;
    let mut hz = eval(z);
    for _ in 0..NEWTON_MAX_ITER {
        let scale = 1.0 + math::cabs(z);
        if math::cabs(hz) <= 1e-15 * scale {
            return Some(z);
        }
        let dz = char_h_derivative(z, k, order + 1);
        if math::cabs(dz) == 0.0 || !dz.re.is_finite() {
            return None;
        }
        let step = hz / dz;
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let trial = z - step * t;
            let ht = eval(trial);
            if math::cabs(ht) < math::cabs(hz) {
                z = trial;
                hz = ht;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved || math::cabs(step) * t <= 4.0 * f64::EPSILON * scale {
            break;
        }
    }
    let scale = 1.0 + math::cabs(z);
    if z.re.is_finite() && z.im.is_finite() && math::cabs(hz) <= ROOT_TOL * scale {
        Some(z)
    } else {
        None
    }
}

/// Refines a converged root onto a multiple root when `h'` nearly vanishes,
/// and returns the multiplicity.
fn refine_multiplicity(k: &LinearCoefficients, z: Complex) -> (Complex, u32) {
    if z.re == 0.0 && z.im == 0.0 {
        return (z, zero_multiplicity(k));
    }
    let mut z = z;
    let mut m = 1;
    for order in 1..3u32 {
        let scale = 1.0 + math::cabs(z);
        if math::cabs(char_h_derivative(z, k, order)) > 1e-6 * scale {
            break;
        }
        match newton(k, z, order) {
            Some(w) if math::cabs(char_h(w, k)) <= ROOT_TOL * (1.0 + math::cabs(w)) => {
                let all_lower_vanish = (1..order)
                    .all(|o| math::cabs(char_h_derivative(w, k, o)) <= MULTIPLICITY_TOL * (1.0 + math::cabs(w)));
                if all_lower_vanish {
                    z = w;
                    m = order + 1;
                } else {
                    break;
                }
            }
            _ => break,
        }
    }
    // Snap to the exact origin when it is the multiple root.
    if m > 1 && math::cabs(z) < 1e-6 && k.a + k.b == 0.0 {
        return (Complex::new(0.0, 0.0), zero_multiplicity(k));
    }
    (z, m)
}

/// Multiplicity of `λ = 0` from `h(0) = a + b`, `h'(0) = a + 1 + c`,
/// `h''(0) = a + 2`, `h'''(0) = a + 3`; zero if it is not a root.
fn zero_multiplicity(k: &LinearCoefficients) -> u32 {
    if k.a + k.b != 0.0 {
        0
    } else if k.a + 1.0 + k.c.value() != 0.0 {
        1
    } else if k.a + 2.0 != 0.0 {
        2
    } else {
        3
    }
}

/// Real roots on `[-R, R]` by sign changes and by touching minima.
fn real_roots(k: &LinearCoefficients, r: f64) -> Vec<Complex> {
    let h = |x: f64| char_h(Complex::new(x, 0.0), k).re;
    let dh = |x: f64| char_h_derivative(Complex::new(x, 0.0), k, 1).re;
    let samples = 4096;
    let xs: Vec<f64> = (0..=samples)
        .map(|i| -r + 2.0 * r * i as f64 / samples as f64)
        .collect();
    let hs: Vec<f64> = xs.iter().map(|&x| h(x)).collect();
    let dhs: Vec<f64> = xs.iter().map(|&x| dh(x)).collect();
    let mut out = Vec::new();
    for i in 0..samples {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let (h0, h1) = (hs[i], hs[i + 1]);
        if h0 == 0.0 {
            out.push(Complex::new(x0, 0.0));
            continue;
        }
        if h0 * h1 < 0.0 {
            out.push(Complex::new(bisect(&h, x0, x1, h0), 0.0));
        } else if dhs[i] * dhs[i + 1] < 0.0 {
            // A turning point: possibly a double root with no sign change.
            let xm = bisect(&dh, x0, x1, dhs[i]);
            let scale = 1.0 + xm.abs();
            if h(xm).abs() <= 1e-6 * scale {
                if let Some(z) = newton(k, Complex::new(xm, 0.0), 1) {
                    if math::cabs(char_h(z, k)) <= ROOT_TOL * (1.0 + math::cabs(z)) {
                        out.push(Complex::new(z.re, 0.0));
                    }
                }
            }
        }
    }
    if hs[samples] == 0.0 {
        out.push(Complex::new(xs[samples], 0.0));
    }
    out
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let neg_lo = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Seeds from the quadratic Taylor model of `h` at the origin.
fn origin_seeds(k: &LinearCoefficients) -> Vec<Complex> {
    let c2 = 0.5 * (k.a + 2.0);
    let c1 = k.a + 1.0 + k.c.value();
    let c0 = k.a + k.b;
    let mut out = Vec::new();
    if c2 != 0.0 {
        let disc = Complex::new(c1 * c1 - 4.0 * c2 * c0, 0.0).sqrt();
        out.push((disc - c1) / (2.0 * c2));
        out.push((-disc - c1) / (2.0 * c2));
    } else if c1 != 0.0 {
        out.push(Complex::new(-c0 / c1, 0.0));
    }
    out
}

/// Winding number of `h` around the rectangle, or `None` if the contour
/// passes within reach of a zero.
fn winding(k: &LinearCoefficients, x0: f64, x1: f64, y0: f64, y1: f64) -> core::result::Result<i64, Complex> {
    let corners = [
        Complex::new(x0, y0),
        Complex::new(x1, y0),
        Complex::new(x1, y1),
        Complex::new(x0, y1),
        Complex::new(x0, y0),
    ];
    let near_root = |z: Complex, hz: Complex| {
        let d = math::cabs(char_h_derivative(z, k, 1)).max(1.0);
        math::cabs(hz) < 1e-6 * d
    };
    let mut total = 0.0;
    for e in 0..4 {
        let (za, zb) = (corners[e], corners[e + 1]);
        let len = math::cabs(zb - za);
        let mut s = 0.0;
        let mut z = za;
        let mut hz = char_h(z, k);
        if near_root(z, hz) {
            return Err(z);
        }
        let mut ds = (0.25 / len).min(1.0);
        while s < 1.0 {
            let s_next = (s + ds).min(1.0);
            let zn = za + (zb - za) * s_next;
            let hn = char_h(zn, k);
            if near_root(zn, hn) {
                return Err(zn);
            }
            let q = hn / hz;
            let darg = math::atan2(q.im, q.re);
            if darg.abs() > math::PI / 6.0 {
                ds *= 0.5;
                if ds * len < 1e-9 {
                    return Err(zn);
                }
                continue;
            }
            total += darg;
            s = s_next;
            z = zn;
            hz = hn;
            ds = (ds * 1.5).min(0.25 / len);
        }
        let _ = z;
    }
    let w = total / math::TAU;
    let r = math::round(w);
    if (w - r).abs() > 0.1 {
        return Err(corners[0]);
    }
    Ok(r as i64)
}

/// Number of roots in `re_range × im_range`, counted with multiplicity, by
/// the argument principle. If the boundary comes too close to a root the
/// rectangle is pushed outward in steps of `1e-4` up to `1e-3`.
pub fn count_roots_rectangle(k: &LinearCoefficients, re_range: Interval, im_range: Interval) -> Result<u64> {
    if re_range.is_degenerate() || im_range.is_degenerate() {
        return Err(Error::DegenerateInterval {
            lo: re_range.lo.min(im_range.lo),
            hi: re_range.hi.min(im_range.hi),
        });
    }
    let mut last = Complex::new(re_range.lo, im_range.lo);
    for i in 0..=10 {
        let grow = 1e-4 * i as f64;
        match winding(
            k,
            re_range.lo - grow,
            re_range.hi + grow,
            im_range.lo - grow,
            im_range.hi + grow,
        ) {
            Ok(w) if w >= 0 => return Ok(w as u64),
            Ok(_) => return Err(Error::ContourThroughRoot { re: last.re, im: last.im }),
            Err(z) => last = z,
        }
    }
    Err(Error::ContourThroughRoot { re: last.re, im: last.im })
}

/// Inserts `z` unless an equivalent root is already present.
fn insert_root(roots: &mut Vec<(Complex, u32)>, z: Complex, m: u32) {
    for r in roots.iter_mut() {
        let tol = if r.1 > 1 || m > 1 { MULTIPLE_DEDUP_TOL } else { DEDUP_TOL };
        if math::cabs(r.0 - z) <= tol * (1.0 + math::cabs(z)) {
            if m > r.1 {
                *r = (z, m);
            }
            return;
        }
    }
    roots.push((z, m));
}

/// Recursively splits a box whose certified count exceeds the roots already
/// found, and runs Newton from interior points of the smallest boxes.
fn fill_missing(
    k: &LinearCoefficients,
    roots: &mut Vec<(Complex, u32)>,
    bx: (f64, f64, f64, f64),
    expected: i64,
    depth: u32,
) {
    let (x0, x1, y0, y1) = bx;
    let inside = |roots: &Vec<(Complex, u32)>| -> i64 {
        roots
            .iter()
            .filter(|(z, _)| z.re > x0 && z.re < x1 && z.im > y0 && z.im < y1)
            .map(|(_, m)| *m as i64)
            .sum()
    };
    if inside(roots) >= expected || depth > 24 {
        return;
    }
    // Newton from a few interior points first: cheap and usually enough.
    for (fx, fy) in [(0.5, 0.5), (0.25, 0.25), (0.75, 0.75), (0.25, 0.75), (0.75, 0.25)] {
        let seed = Complex::new(x0 + fx * (x1 - x0), y0 + fy * (y1 - y0));
        if let Some(z) = newton(k, seed, 0) {
            if z.re > x0 && z.re < x1 && z.im > y0 && z.im < y1 {
                let (z, m) = refine_multiplicity(k, z);
                insert_root(roots, z, m);
            }
        }
        if inside(roots) >= expected {
            return;
        }
    }
    // Split the longer side at a slightly off-center position.
    let split_x = (x1 - x0) >= (y1 - y0);
    for frac in [0.5137, 0.4711, 0.5523, 0.3917] {
        let (a, b) = if split_x {
            let xm = x0 + frac * (x1 - x0);
            ((x0, xm, y0, y1), (xm, x1, y0, y1))
        } else {
            let ym = y0 + frac * (y1 - y0);
            ((x0, x1, y0, ym), (x0, x1, ym, y1))
        };
        let (wa, wb) = match (winding(k, a.0, a.1, a.2, a.3), winding(k, b.0, b.1, b.2, b.3)) {
            (Ok(wa), Ok(wb)) => (wa, wb),
            _ => continue,
        };
        if wa > 0 {
            fill_missing(k, roots, a, wa, depth + 1);
        }
        if wb > 0 {
            fill_missing(k, roots, b, wb, depth + 1);
        }
        return;
    }
}

/// Seed range of branch indices so that the seeds are symmetric about the
/// real axis and cover `|Ω(n)| <= Ω(n_max)`.
fn branch_range(c: Neutral, n_max: i64) -> core::ops::RangeInclusive<i64> {
    match c {
        Neutral::Plus => -n_max - 1..=n_max,
        Neutral::Minus => -n_max..=n_max,
    }
}

/// Roots with `|Im λ| <= Ω(n_max) + π`, certified by an argument-principle
/// count over the strip.
pub fn find_roots(k: &LinearCoefficients, n_max: i64) -> Result<RootSet> {
    if n_max < 1 {
        return Err(Error::InvalidInput("nMax must be at least 1"));
    }
    if !k.a.is_finite() || !k.b.is_finite() {
        return Err(Error::InvalidInput("coefficients must be finite"));
    }
    let d = k.detuning();
    let y_max = omega_asymptotic(n_max, k.c) + math::PI;
    let x_max = k.strip_half_width() + 0.5;

    let mut found: Vec<(Complex, u32)> = Vec::new();
    let mut stalled = Vec::new();

    let zm = zero_multiplicity(k);
    if zm > 0 {
        found.push((Complex::new(0.0, 0.0), zm));
    }
    for z in real_roots(k, k.strip_half_width()) {
        if let Some(z) = newton(k, z, 0).or(Some(z)) {
            let z = Complex::new(z.re, 0.0);
            if math::cabs(char_h(z, k)) <= ROOT_TOL * (1.0 + z.re.abs()) {
                let (z, m) = refine_multiplicity(k, z);
                insert_root(&mut found, z, m);
            }
        }
    }
    for seed in origin_seeds(k) {
        if let Some(z) = newton(k, seed, 0) {
            let (z, m) = refine_multiplicity(k, z);
            insert_root(&mut found, z, m);
        }
    }
    for n in branch_range(k.c, n_max) {
        let om = omega_asymptotic(n, k.c);
        if om == 0.0 {
            continue;
        }
        let seed = Complex::new(0.0, om + d / om);
        match newton(k, seed, 0) {
            Some(z) => {
                let (z, m) = refine_multiplicity(k, z);
                insert_root(&mut found, z, m);
            }
            None => stalled.push(n),
        }
    }

    let in_box = |z: &Complex| z.im.abs() <= y_max && z.re.abs() <= x_max;
    found.retain(|(z, _)| in_box(z));

    let certified = winding(k, -x_max, x_max, -y_max, y_max).ok();
    if let Some(w) = certified {
        let have: i64 = found.iter().map(|(_, m)| *m as i64).sum();
        if w > have {
            fill_missing(k, &mut found, (-x_max, x_max, -y_max, y_max), w, 0);
        }
    }

    // Real-coefficient symmetry: snap nearly real roots onto the axis.
    let mut roots: Vec<CharacteristicRoot> = found
        .into_iter()
        .map(|(mut z, m)| {
            if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
                z.im = 0.0;
            }
            let branch = if z.re == 0.0 && z.im == 0.0 {
                Branch::Zero
            } else if z.im == 0.0 {
                Branch::Real
            } else {
                Branch::Index(nearest_branch(z.im, k.c))
            };
            CharacteristicRoot {
                lambda: z,
                branch,
                residual: math::cabs(char_h(z, k)),
                multiplicity: m,
            }
        })
        .collect();
    roots.sort_by(|p, q| {
        p.lambda
            .im
            .partial_cmp(&q.lambda.im)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(p.lambda.re.partial_cmp(&q.lambda.re).unwrap_or(core::cmp::Ordering::Equal))
    });

    Ok(RootSet {
        coefficients: *k,
        roots,
        stalled,
        re_range: Interval { lo: -x_max, hi: x_max },
        im_range: Interval { lo: -y_max, hi: y_max },
        certified_count: certified.and_then(|w| u64::try_from(w).ok()),
    })
}

/// Regions of the `(a, b)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    QuadrantStable,
    QuadrantAllUnstable,
    QuadrantOneStableRoot,
    QuadrantOneUnstableRoot,
    EdgeStable,
    EdgeUnstable,
    OriginStable,
    OriginWeaklyUnstable,
    DoubleRootEdgeCase,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::QuadrantStable => "QuadrantStable",
            Region::QuadrantAllUnstable => "QuadrantAllUnstable",
            Region::QuadrantOneStableRoot => "QuadrantOneStableRoot",
            Region::QuadrantOneUnstableRoot => "QuadrantOneUnstableRoot",
            Region::EdgeStable => "EdgeStable",
            Region::EdgeUnstable => "EdgeUnstable",
            Region::OriginStable => "OriginStable",
            Region::OriginWeaklyUnstable => "OriginWeaklyUnstable",
            Region::DoubleRootEdgeCase => "DoubleRootEdgeCase",
        }
    }
}

/// Root counts by sign of the real part, with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RealPartSigns {
    pub positive: u64,
    pub negative: u64,
    pub zero: u64,
    /// Multiplicity of `λ = 0` (0 if not a root).
    pub zero_root_multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub coefficients: LinearCoefficients,
    pub region: Region,
    pub witnesses: Vec<CharacteristicRoot>,
    pub signs: RealPartSigns,
    pub max_re: f64,
    pub roots: RootSet,
}

/// Tolerance for treating `(a, b)` as lying on an edge `a = ±b`.
fn edge_tol(a: f64, b: f64) -> f64 {
    1e-12 * (1.0 + a.abs() + b.abs())
}

/// The exact region of `(a, b, c)`.
pub fn analytic_region(k: &LinearCoefficients) -> Region {
    let (a, b) = (k.a, k.b);
    let tol = edge_tol(a, b);
    let origin = a.abs() <= tol && b.abs() <= tol;
    let on_plus = (a - b).abs() <= tol;
    let on_minus = (a + b).abs() <= tol;
    match k.c {
        Neutral::Plus => {
            if origin {
                Region::OriginStable
            } else if on_plus {
                if a > 0.0 {
                    Region::EdgeStable
                } else {
                    Region::EdgeUnstable
                }
            } else if on_minus {
                if a > 0.0 || b < 2.0 - tol {
                    Region::EdgeStable
                } else if b <= 2.0 + tol {
                    Region::DoubleRootEdgeCase
                } else {
                    Region::EdgeUnstable
                }
            } else if a > b.abs() {
                Region::QuadrantStable
            } else if b < -a.abs() {
                Region::QuadrantAllUnstable
            } else if b > a.abs() {
                Region::QuadrantOneStableRoot
            } else {
                Region::QuadrantOneUnstableRoot
            }
        }
        Neutral::Minus => {
            if origin {
                Region::OriginWeaklyUnstable
            } else if on_plus || on_minus {
                if a > 0.0 {
                    Region::EdgeStable
                } else {
                    Region::EdgeUnstable
                }
            } else if a > b.abs() {
                Region::QuadrantStable
            } else if b > a.abs() {
                Region::QuadrantAllUnstable
            } else if b < -a.abs() {
                Region::QuadrantOneStableRoot
            } else {
                Region::QuadrantOneUnstableRoot
            }
        }
    }
}

/// Whether a root's real part is numerically zero.
fn on_axis(z: Complex) -> bool {
    z.re.abs() <= 1e-10 * (1.0 + math::cabs(z))
}

fn count_signs(set: &RootSet) -> RealPartSigns {
    let mut s = RealPartSigns::default();
    for r in &set.roots {
        let m = r.multiplicity as u64;
        if r.branch == Branch::Zero {
            s.zero_root_multiplicity = r.multiplicity;
        }
        if on_axis(r.lambda) {
            s.zero += m;
        } else if r.lambda.re > 0.0 {
            s.positive += m;
        } else {
            s.negative += m;
        }
    }
    s
}

fn consistent(region: Region, s: &RealPartSigns) -> bool {
    match region {
        Region::QuadrantStable => s.positive == 0 && s.zero == 0,
        Region::QuadrantAllUnstable => s.negative == 0 && s.zero == 0 && s.positive > 0,
        Region::QuadrantOneStableRoot => s.negative == 1 && s.zero == 0,
        Region::QuadrantOneUnstableRoot => s.positive == 1 && s.zero == 0,
        Region::EdgeStable => s.positive == 0,
        Region::EdgeUnstable => s.positive >= 1,
        Region::OriginStable => s.positive == 0 && s.zero_root_multiplicity == 1,
        Region::OriginWeaklyUnstable => s.positive == 0 && s.zero_root_multiplicity == 2,
        Region::DoubleRootEdgeCase => s.positive == 0 && s.zero_root_multiplicity >= 2,
    }
}

/// Short description of a computed sign pattern, used in mismatch errors.
fn describe(s: &RealPartSigns) -> &'static str {
    match (s.positive, s.negative, s.zero) {
        (0, _, 0) => "all roots in the open left half-plane",
        (0, _, _) => "no root in the open right half-plane, some on the axis",
        (1, _, _) => "exactly one root in the open right half-plane",
        (_, 0, 0) => "all roots in the open right half-plane",
        (_, 1, 0) => "all roots but one in the open right half-plane",
        _ => "several roots in the open right half-plane",
    }
}

/// Classifies `(a, b, c)` analytically and verifies the label against the
/// computed roots.
pub fn classify(k: &LinearCoefficients, n_max: i64) -> Result<StabilityVerdict> {
    if n_max < 8 {
        return Err(Error::InvalidInput("classification needs nMax >= 8"));
    }
    let region = analytic_region(k);
    let set = find_roots(k, n_max)?;
    if !set.is_complete() {
        return Err(Error::VerificationMismatch {
            analytic: region.name(),
            computed: "incomplete root set",
        });
    }
    let signs = count_signs(&set);
    if !consistent(region, &signs) {
        return Err(Error::VerificationMismatch {
            analytic: region.name(),
            computed: describe(&signs),
        });
    }
    let mut witnesses: Vec<CharacteristicRoot> = Vec::new();
    let mut push = |r: &CharacteristicRoot| {
        if !witnesses.iter().any(|w| w.lambda == r.lambda) {
            witnesses.push(*r);
        }
    };
    if let Some(right) = set
        .roots
        .iter()
        .max_by(|p, q| p.lambda.re.partial_cmp(&q.lambda.re).unwrap_or(core::cmp::Ordering::Equal))
    {
        push(right);
    }
    for r in &set.roots {
        let minority = (signs.positive <= 3 && r.lambda.re > 0.0 && !on_axis(r.lambda))
            || (signs.negative <= 3 && r.lambda.re < 0.0 && !on_axis(r.lambda))
            || r.branch == Branch::Zero;
        if minority {
            push(r);
        }
    }
    Ok(StabilityVerdict {
        coefficients: *k,
        region,
        witnesses,
        signs,
        max_re: set.max_re(),
        roots: set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(a: f64, b: f64, c: Neutral) -> LinearCoefficients {
        LinearCoefficients::new(a, b, c)
    }

    #[test]
    fn h_examples() {
        let z = char_h(Complex::new(0.0, 0.0), &k(1.5, -0.25, Neutral::Plus));
        assert_eq!(z, Complex::new(1.25, 0.0));
        assert!(math::cabs(char_h(Complex::new(0.0, math::PI), &k(0.0, 0.0, Neutral::Plus))) < 1e-15);
        assert!(math::cabs(char_h(Complex::new(-2.0, 0.0), &k(2.0, 2.0, Neutral::Plus))) < 1e-15);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_asymptotic(0, Neutral::Plus), math::PI);
        assert_eq!(omega_asymptotic(3, Neutral::Minus), 6.0 * math::PI);
        assert_eq!(omega_asymptotic(-1, Neutral::Plus), -math::PI);
    }

    #[test]
    fn cal_h_matches_h_on_axis() {
        let kk = k(1.3, -0.4, Neutral::Minus);
        for w in [0.3, 2.0, 17.5] {
            let z = Complex::new(0.0, w);
            assert!((math::cabs(cal_h(z, &kk)) - math::cabs(char_h(z, &kk))).abs() < 1e-13 * w.max(1.0));
        }
    }

    #[test]
    fn zero_multiplicities() {
        assert_eq!(zero_multiplicity(&k(0.0, 0.0, Neutral::Plus)), 1);
        assert_eq!(zero_multiplicity(&k(0.0, 0.0, Neutral::Minus)), 2);
        assert_eq!(zero_multiplicity(&k(-2.0, 2.0, Neutral::Plus)), 3);
        assert_eq!(zero_multiplicity(&k(1.0, 1.0, Neutral::Plus)), 0);
    }

    #[test]
    fn nearest_branch_ties_down() {
        assert_eq!(nearest_branch(2.0 * math::PI, Neutral::Plus), 0);
        assert_eq!(nearest_branch(3.0 * math::PI, Neutral::Plus), 1);
        assert_eq!(nearest_branch(-math::PI, Neutral::Plus), -1);
    }

    #[test]
    fn small_box_around_double_zero() {
        let n = count_roots_rectangle(
            &k(0.0, 0.0, Neutral::Minus),
            Interval::new(-0.5, 0.5).unwrap(),
            Interval::new(-0.5, 0.5).unwrap(),
        )
        .unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn expansion_at_zero_b() {
        assert_eq!(quadrant3_expansion(0.0, math::PI), Complex::new(0.0, math::PI));
    }
}
