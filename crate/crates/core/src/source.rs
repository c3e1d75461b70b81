//! Forcing terms `s(t)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, Complex};

/// Real trigonometric series `Σ_k s_k e^{ikωt}` with `s_{-k} = conj(s_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    omega: f64,
    coefficients: BTreeMap<i64, Complex>,
}

impl FourierSeries {
    /// Builds a series from the nonnegative modes; negative modes are filled
    /// in by conjugation. The mean `s_0` must be real.
    pub fn from_nonnegative(omega: f64, modes: &[(u32, Complex)]) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        for &(k, v) in modes {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidInput("Fourier coefficients must be finite"));
            }
            let k = k as i64;
            if k == 0 {
                if v.im != 0.0 {
                    return Err(Error::InvalidInput("mean coefficient must be real"));
                }
                coefficients.insert(0, v);
            } else {
                coefficients.insert(k, v);
                coefficients.insert(-k, v.conj());
            }
        }
        Self::new(omega, coefficients)
    }

    /// Builds a series from a full coefficient map, checking conjugate
    /// symmetry to `1e-14` relative.
    pub fn new(omega: f64, coefficients: BTreeMap<i64, Complex>) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput("omega must be positive and finite"));
        }
        for (&k, &v) in &coefficients {
            let partner = coefficients.get(&-k).copied().unwrap_or(Complex::new(0.0, 0.0));
            let gap = math::cabs(v - partner.conj());
            if gap > 1e-14 * math::cabs(v).max(1.0) {
                return Err(Error::InvalidInput(
                    "Fourier coefficients must satisfy s(-k) = conj(s(k))",
                ));
            }
        }
        Ok(FourierSeries { omega, coefficients })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn coefficient(&self, k: i64) -> Complex {
        self.coefficients.get(&k).copied().unwrap_or(Complex::new(0.0, 0.0))
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, Complex> {
        &self.coefficients
    }

    /// Largest `|k|` with a stored coefficient.
    pub fn bandwidth(&self) -> u64 {
        self.coefficients.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.coefficient(0).re;
        for (&k, &v) in self.coefficients.range(1..) {
            acc += 2.0 * (v * math::cis(k as f64 * self.omega * t)).re;
        }
        acc
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (&k, &v) in self.coefficients.range(1..) {
            let kw = k as f64 * self.omega;
            acc += 2.0 * (v * Complex::new(0.0, kw) * math::cis(kw * t)).re;
        }
        acc
    }
}

/// The forcing `s(t)` of the equation.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Zero,
    Constant(f64),
    /// `amplitude * cos(omega * t + phase)`.
    Monochromatic { amplitude: f64, omega: f64, phase: f64 },
    FourierSeries(FourierSeries),
}

impl SourceSpec {
    pub fn monochromatic(amplitude: f64, omega: f64, phase: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput("omega must be positive and finite"));
        }
        Ok(SourceSpec::Monochromatic { amplitude, omega, phase })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            SourceSpec::Zero => 0.0,
            SourceSpec::Constant(d) => *d,
            SourceSpec::Monochromatic { amplitude, omega, phase } => {
                amplitude * math::cos(omega * t + phase)
            }
            SourceSpec::FourierSeries(fs) => fs.eval(t),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            SourceSpec::Zero | SourceSpec::Constant(_) => 0.0,
            SourceSpec::Monochromatic { amplitude, omega, phase } => {
                -amplitude * omega * math::sin(omega * t + phase)
            }
            SourceSpec::FourierSeries(fs) => fs.deriv(t),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SourceSpec::Zero => true,
            SourceSpec::Constant(d) => *d == 0.0,
            SourceSpec::Monochromatic { amplitude, .. } => *amplitude == 0.0,
            SourceSpec::FourierSeries(fs) => fs.coefficients.values().all(|v| v.re == 0.0 && v.im == 0.0),
        }
    }

    /// Angular frequency, `None` for time-independent sources.
    pub fn omega(&self) -> Option<f64> {
        match self {
            SourceSpec::Zero | SourceSpec::Constant(_) => None,
            SourceSpec::Monochromatic { omega, .. } => Some(*omega),
            SourceSpec::FourierSeries(fs) => Some(fs.omega),
        }
    }

    /// Period `2π/ω`, `None` for time-independent sources.
    pub fn period(&self) -> Option<f64> {
        self.omega().map(|w| math::TAU / w)
    }

    /// Time average over one period.
    pub fn mean(&self) -> f64 {
        match self {
            SourceSpec::Zero | SourceSpec::Monochromatic { .. } => 0.0,
            SourceSpec::Constant(d) => *d,
            SourceSpec::FourierSeries(fs) => fs.coefficient(0).re,
        }
    }

    /// Coefficients `s_k`, `-K <= k <= K`, as a vector indexed by `k + K`.
    /// Time-independent sources are expanded with `ω` as given.
    pub fn fourier_coefficients(&self, kmax: usize) -> Vec<Complex> {
        let mut out = alloc::vec![Complex::new(0.0, 0.0); 2 * kmax + 1];
        let k0 = kmax as i64;
        match self {
            SourceSpec::Zero => {}
            SourceSpec::Constant(d) => out[kmax] = Complex::new(*d, 0.0),
            SourceSpec::Monochromatic { amplitude, phase, .. } => {
                if kmax >= 1 {
                    let c = math::cis(*phase) * (0.5 * amplitude);
                    out[kmax + 1] = c;
                    out[kmax - 1] = c.conj();
                }
            }
            SourceSpec::FourierSeries(fs) => {
                for (&k, &v) in fs.coefficients.range(-k0..=k0) {
                    out[(k + k0) as usize] = v;
                }
            }
        }
        out
    }

    /// Whether the source has modes beyond `|k| = kmax`.
    pub fn truncated_by(&self, kmax: usize) -> bool {
        match self {
            SourceSpec::Zero | SourceSpec::Constant(_) => false,
            SourceSpec::Monochromatic { .. } => kmax < 1,
            SourceSpec::FourierSeries(fs) => fs.bandwidth() > kmax as u64,
        }
    }
}
