//! Small divisors of the Fourier-multiplier solution.
//!
//! For a forcing with frequencies `ω_k = kω`, the periodic solution divides
//! `s_k` by `calH(iω_k)`. Large `|ω_k|` makes `|calH(iω_k)|` small only when
//! `ω_k` approaches an asymptote `Ω(n)` of the characteristic roots, so each
//! mode is attached to its nearest branch `φ(k)` and measured by
//!
//! ```text
//! v_k = |kω - Ω(φ(k))|,   Z_k = |d - Ω(φ(k)) (kω - Ω(φ(k)))|,   d = a - c b.
//! ```
//!
//! Rational periods `T = p/q` are handled in integer arithmetic: with
//! `N_k = 4kq - (1+c)p`, the signed offset is `kω - Ω(φ(k)) = 2π r / (4p)`
//! where `r ≡ N_k (mod 4p)` is reduced to `(-2p, 2p]`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{self, Complex};
use crate::problem::Neutral;
use crate::spectrum::{cal_h, omega_asymptotic, LinearCoefficients};

/// Forcing frequency, either a floating angular frequency or an exact
/// rational period `T = p/q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    Angular(f64),
    RationalPeriod { p: u64, q: u64 },
}

impl Frequency {
    pub fn rational(p: u64, q: u64) -> Result<Self> {
        check_coprime(p, q)?;
        Ok(Frequency::RationalPeriod { p, q })
    }

    pub fn omega(&self) -> f64 {
        match *self {
            Frequency::Angular(w) => w,
            Frequency::RationalPeriod { p, q } => math::TAU * q as f64 / p as f64,
        }
    }
}

fn check_coprime(p: u64, q: u64) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidInput("p and q must be positive"));
    }
    let g = num_integer::gcd(p, q);
    if g != 1 {
        return Err(Error::NotCoprime { p, q, gcd: g });
    }
    Ok(())
}

/// Nearest branch `φ(k) = round((kω/π - (1+c)/2) / 2)`, ties to the smaller
/// index.
pub fn phi(k: i64, omega: f64, c: Neutral) -> i64 {
    crate::spectrum::nearest_branch(k as f64 * omega, c)
}

/// `(φ(k), r)` for a rational period, with `kω - Ω(φ(k)) = 2π r / (4p)` and
/// `r ∈ (-2p, 2p]`. Exact ties (`r = 2p`) resolve to the smaller branch.
pub fn rational_offset(k: i64, p: u64, q: u64, c: Neutral) -> (i64, i64) {
    let four_p = 4 * p as i128;
    let shift = match c {
        Neutral::Plus => 2 * p as i128,
        Neutral::Minus => 0,
    };
    let big_n = 4 * k as i128 * q as i128 - shift;
    let r = big_n.rem_euclid(four_p);
    let base = (big_n - r) / four_p;
    if r <= 2 * p as i128 {
        (base as i64, r as i64)
    } else {
        ((base + 1) as i64, (r - four_p) as i64)
    }
}

/// `4p · v_k / (2π)` as an exact integer.
pub fn rational_v_numerator(k: i64, p: u64, q: u64, c: Neutral) -> u64 {
    rational_offset(k, p, q, c).1.unsigned_abs()
}

/// `e^{-ikω}` for `ω = 2πq/p`, exact at quarter turns.
fn rational_phase(k: i64, p: u64, q: u64) -> Complex {
    let m = (k as i128 * q as i128).rem_euclid(p as i128) as u64;
    if (4 * m) % p == 0 {
        return match (4 * m) / p {
            0 => Complex::new(1.0, 0.0),
            1 => Complex::new(0.0, -1.0),
            2 => Complex::new(-1.0, 0.0),
            _ => Complex::new(0.0, 1.0),
        };
    }
    math::cis(-math::TAU * m as f64 / p as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisorEntry {
    pub k: i64,
    pub phi: i64,
    /// `|kω - Ω(φ(k))|`.
    pub v: f64,
    /// `Ω(φ(k)) (kω - Ω(φ(k)))`.
    pub signed_product: f64,
    /// `|d - signed_product|`.
    pub z: f64,
    /// `|h(ikω)| = |calH(ikω)|`.
    pub h_mod: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisorSequence {
    pub omega: f64,
    /// `a - c b`.
    pub d: f64,
    pub entries: Vec<DivisorEntry>,
}

fn require_stable(k: &LinearCoefficients) -> Result<()> {
    if k.a > k.b.abs() {
        Ok(())
    } else {
        Err(Error::HypothesisViolated("divisor analysis requires a > |b|"))
    }
}

fn entry(coeffs: &LinearCoefficients, freq: Frequency, k: i64) -> DivisorEntry {
    let d = coeffs.detuning();
    match freq {
        Frequency::Angular(omega) => {
            let kw = k as f64 * omega;
            let n = phi(k, omega, coeffs.c);
            let om = omega_asymptotic(n, coeffs.c);
            let off = kw - om;
            DivisorEntry {
                k,
                phi: n,
                v: off.abs(),
                signed_product: om * off,
                z: (d - om * off).abs(),
                h_mod: math::cabs(cal_h(Complex::new(0.0, kw), coeffs)),
            }
        }
        Frequency::RationalPeriod { p, q } => {
            let (n, r) = rational_offset(k, p, q, coeffs.c);
            let om = omega_asymptotic(n, coeffs.c);
            let off = math::TAU * r as f64 / (4 * p) as f64;
            let kw = math::TAU * (k as f64 * q as f64) / p as f64;
            let e = rational_phase(k, p, q);
            let i_kw = Complex::new(0.0, kw);
            let calh = i_kw * (e * coeffs.c.value() + 1.0) + coeffs.a + e * coeffs.b;
            DivisorEntry {
                k,
                phi: n,
                v: off.abs(),
                signed_product: om * off,
                z: (d - om * off).abs(),
                h_mod: math::cabs(calh),
            }
        }
    }
}

/// Entries for `1 <= k <= k_max`.
pub fn divisor_sequence(coeffs: &LinearCoefficients, freq: Frequency, k_max: usize) -> Result<DivisorSequence> {
    if k_max == 0 {
        return Err(Error::InvalidInput("kMax must be at least 1"));
    }
    check_inputs(coeffs, freq)?;
    Ok(DivisorSequence {
        omega: freq.omega(),
        d: coeffs.detuning(),
        entries: (1..=k_max as i64).map(|k| entry(coeffs, freq, k)).collect(),
    })
}

/// The entry for a single `k >= 1`, for callers that split the sweep.
pub fn divisor_entry(coeffs: &LinearCoefficients, freq: Frequency, k: i64) -> Result<DivisorEntry> {
    if k < 1 {
        return Err(Error::InvalidInput("k must be at least 1"));
    }
    check_inputs(coeffs, freq)?;
    Ok(entry(coeffs, freq, k))
}

fn check_inputs(coeffs: &LinearCoefficients, freq: Frequency) -> Result<()> {
    require_stable(coeffs)?;
    if let Frequency::RationalPeriod { p, q } = freq {
        check_coprime(p, q)?;
    } else if !(freq.omega() > 0.0) || !freq.omega().is_finite() {
        return Err(Error::InvalidInput("omega must be positive and finite"));
    }
    Ok(())
}

/// Near-resonant frequencies `ω_k = Ω(φ_k) + d/Ω(φ_k) + s_k/Ω(φ_k)`.
pub fn bad_frequency_sequence(coeffs: &LinearCoefficients, phi_targets: &[i64], s_seq: &[f64]) -> Result<Vec<f64>> {
    require_stable(coeffs)?;
    if phi_targets.len() != s_seq.len() {
        return Err(Error::InvalidInput("phi targets and s sequence differ in length"));
    }
    let d = coeffs.detuning();
    phi_targets
        .iter()
        .zip(s_seq)
        .map(|(&n, &s)| {
            let om = omega_asymptotic(n, coeffs.c);
            if om == 0.0 {
                Err(Error::InvalidInput("phi target has Ω = 0"))
            } else {
                Ok(om + d / om + s / om)
            }
        })
        .collect()
}

/// Leading terms `-s + i(a² - b²)/(2Ω)` of `calH(iω)` at a near-resonant
/// frequency built from `Ω` and `s`.
pub fn near_resonance_expansion(coeffs: &LinearCoefficients, omega_branch: f64, s: f64) -> Complex {
    let (a, b) = (coeffs.a, coeffs.b);
    Complex::new(-s, (a * a - b * b) / (2.0 * omega_branch))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalPeriodReport {
    pub p: u64,
    pub q: u64,
    pub c: Neutral,
    pub d: f64,
    /// `min_k v_k`.
    pub v_min: f64,
    /// `min_k v_k` as the integer numerator of `v / (2π) · 4p`.
    pub v_min_numerator: u64,
    pub condition_satisfied: bool,
    pub smoothing: bool,
    /// Distinct values of `v_k`, ascending.
    pub distinct_v: Vec<f64>,
    pub distinct_v_numerators: Vec<u64>,
}

/// Exact analysis of a rational period `T = p/q`.
pub fn rational_period_analysis(p: u64, q: u64, c: Neutral, d: f64) -> Result<RationalPeriodReport> {
    check_coprime(p, q)?;
    if !(d > 0.0) {
        return Err(Error::HypothesisViolated("rational period analysis requires d > 0"));
    }
    let mut nums: Vec<u64> = (0..p as i64).map(|k| rational_v_numerator(k, p, q, c)).collect();
    nums.sort_unstable();
    nums.dedup();
    let scale = math::TAU / (4 * p) as f64;
    let v_min_numerator = nums[0];
    Ok(RationalPeriodReport {
        p,
        q,
        c,
        d,
        v_min: scale * v_min_numerator as f64,
        v_min_numerator,
        // With v_k either zero (then Z_k = d > 0) or bounded below (then
        // Z_k grows like k), the liminf is positive.
        condition_satisfied: true,
        smoothing: v_min_numerator > 0,
        distinct_v: nums.iter().map(|&n| scale * n as f64).collect(),
        distinct_v_numerators: nums,
    })
}

/// `min Z_k` over `k <= k_max` restricted to near-resonant modes
/// `v_k <= 1/√k`; `+∞` if there are none.
pub fn diophantine_margin(coeffs: &LinearCoefficients, freq: Frequency, k_max: usize) -> Result<f64> {
    require_stable(coeffs)?;
    if k_max < 100 {
        return Err(Error::InvalidInput("the Diophantine margin needs kMax >= 100"));
    }
    let seq = divisor_sequence(coeffs, freq, k_max)?;
    Ok(seq
        .entries
        .iter()
        .filter(|e| e.v <= 1.0 / math::sqrt(e.k as f64))
        .map(|e| e.z)
        .fold(f64::INFINITY, f64::min))
}

/// Pairs `(k, n)` with `|θ - n/k - C/k²| <= tol/k²`, `n = round(θk)`. Finite
/// evidence only.
pub fn ec_membership_search(theta: f64, big_c: f64, k_max: u64, tol: f64) -> Result<Vec<(u64, i64)>> {
    if k_max < 2 {
        return Err(Error::InvalidInput("kMax must be at least 2"));
    }
    if !theta.is_finite() || !big_c.is_finite() || !(tol >= 0.0) {
        return Err(Error::InvalidInput("theta, C and tol must be finite, tol >= 0"));
    }
    let mut hits = Vec::new();
    for k in 1..=k_max {
        let kf = k as f64;
        let n = math::round(theta * kf);
        // k² θ - k n - C, with k(θk - n) formed first to limit cancellation.
        let defect = kf * (theta * kf - n) - big_c;
        if defect.abs() <= tol {
            hits.push((k, n as i64));
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        assert_eq!(phi(5, math::TAU, Neutral::Minus), 5);
        assert_eq!(phi(1, math::TAU, Neutral::Plus), 0);
        assert_eq!(phi(3, math::PI, Neutral::Plus), 1);
    }

    #[test]
    fn rational_offsets_match_float() {
        for (p, q) in [(1u64, 1u64), (2, 1), (3, 2), (7, 5)] {
            for c in [Neutral::Plus, Neutral::Minus] {
                let w = math::TAU * q as f64 / p as f64;
                for k in 1..40 {
                    let (n, r) = rational_offset(k, p, q, c);
                    let off = math::TAU * r as f64 / (4 * p) as f64;
                    let direct = k as f64 * w - omega_asymptotic(n, c);
                    assert!((off - direct).abs() < 1e-10, "p={p} q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn rational_examples() {
        let r = rational_period_analysis(1, 1, Neutral::Plus, 1.0).unwrap();
        assert!(r.smoothing);
        assert!((r.v_min - math::PI).abs() < 1e-15);
        let r = rational_period_analysis(2, 1, Neutral::Plus, 1.0).unwrap();
        assert!(!r.smoothing);
        assert_eq!(r.v_min, 0.0);
        let r = rational_period_analysis(1, 1, Neutral::Minus, 1.0).unwrap();
        assert_eq!(r.v_min, 0.0);
        assert!(r.condition_satisfied);
        assert!(matches!(
            rational_period_analysis(4, 2, Neutral::Plus, 1.0),
            Err(Error::NotCoprime { gcd: 2, .. })
        ));
    }

    #[test]
    fn bad_frequency_formula() {
        let k = LinearCoefficients::new(1.0, 0.0, Neutral::Plus);
        let w = bad_frequency_sequence(&k, &[10], &[0.0]).unwrap();
        let expected = 21.0 * math::PI + 1.0 / (21.0 * math::PI);
        assert!((w[0] - expected).abs() < 1e-13);
        let bad = LinearCoefficients::new(1.0, 1.0, Neutral::Plus);
        assert!(matches!(
            bad_frequency_sequence(&bad, &[1], &[0.0]),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
