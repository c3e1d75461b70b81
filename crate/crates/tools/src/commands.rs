//! One function per command. Each writes its artifacts through an
//! [`Emitter`] and returns an error only after writing whatever report the
//! command promises.

use ndde_core::divisors::{diophantine_margin, divisor_entry, rational_period_analysis, DivisorEntry, Frequency};
use ndde_core::energy::energy_series;
use ndde_core::periodic::{
    linear_fourier_solve, nonlinear_small_source_solve, periodic_residual, reduced_ode_solve, FourierSolution,
};
use ndde_core::problem::{equilibrium_solve, validate_problem, Equilibrium};
use ndde_core::spectrum::{classify, Branch, CharacteristicRoot, StabilityVerdict};
use ndde_core::stepper::{classify_long_time, integrate, ndde_residual, LongTimeBehavior};
use ndde_core::{LinearCoefficients, NddeProblem, SourceSpec};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Format, PeriodicMethod, RunConfig};
use crate::error::ToolError;
use crate::output::{Cell, Emitter};

/// JSON has no infinities; non-finite values are written as strings.
fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn equilibrium_json(p: &NddeProblem) -> Value {
    let SourceSpec::Constant(d) = p.source else {
        return Value::Null;
    };
    match equilibrium_solve(&p.f, &p.g, d) {
        Ok(Equilibrium::Point(x)) => json!({ "kind": "point", "d": x }),
        Ok(Equilibrium::DivergesPlus) => json!({ "kind": "diverges_plus" }),
        Ok(Equilibrium::DivergesMinus) => json!({ "kind": "diverges_minus" }),
        Ok(Equilibrium::NoConvergence) => json!({ "kind": "no_convergence" }),
        Err(e) => json!({ "kind": "error", "error": e.kind(), "message": e.to_string() }),
    }
}

pub fn simulate(cfg: &RunConfig, out: &mut Emitter) -> Result<(), ToolError> {
    let pc = cfg.problem.as_ref().expect("checked");
    let p = pc.build()?;
    let n = cfg.numerics.n as usize;
    let history = pc.history(n)?;
    let tr = integrate(&p, &history, cfg.numerics.t_end, n)?;

    if cfg.wants(Format::Csv) {
        let rows: Vec<Vec<Cell>> = (0..tr.len())
            .map(|j| {
                vec![
                    tr.time(j).into(),
                    tr.values()[j].into(),
                    tr.deriv_left()[j].into(),
                    tr.deriv_right()[j].into(),
                    tr.node_residual(j).into(),
                ]
            })
            .collect();
        out.csv("trajectory.csv", &["t", "y", "dy_left", "dy_right", "residual"], &rows)?;
        if p.source.is_zero() {
            let rows: Vec<Vec<Cell>> = energy_series(&tr)?
                .iter()
                .map(|e| {
                    vec![
                        e.t.into(),
                        e.energy.into(),
                        e.potential.into(),
                        e.cumulative_f_squared.into(),
                        e.identity_residual.into(),
                        e.c0.into(),
                    ]
                })
                .collect();
            out.csv("energy.csv", &["t", "E", "F", "cumF2", "identityResidual", "C0"], &rows)?;
        }
    }
    if cfg.wants(Format::Json) {
        let long_time = if cfg.numerics.t_end >= 16.0 {
            match classify_long_time(&tr, cfg.numerics.classify_tol)? {
                LongTimeBehavior::Converges { limit } => json!({ "kind": "converges", "limit": limit }),
                LongTimeBehavior::Diverging { direction } => json!({ "kind": "diverging", "direction": direction }),
                LongTimeBehavior::NoConstantLimit => json!({ "kind": "no_constant_limit" }),
            }
        } else {
            Value::Null
        };
        out.json(
            "summary.json",
            json!({
                "command": "simulate",
                "n": n,
                "t_end": tr.time(tr.len() - 1),
                "final_value": tr.values()[tr.len() - 1],
                "max_residual": ndde_residual(&tr),
                "gamma_bound": p.gamma_bound,
                "validity": [p.validity.lo, p.validity.hi],
                "history_h1_norm_squared": history.h1_norm_squared(),
                "equilibrium": equilibrium_json(&p),
                "long_time": long_time,
            }),
        )?;
    }
    Ok(())
}

fn root_json(r: &CharacteristicRoot) -> Value {
    json!({
        "branch": branch_label(r.branch),
        "re": r.lambda.re,
        "im": r.lambda.im,
        "residual": r.residual,
        "multiplicity": r.multiplicity,
    })
}

fn branch_label(b: Branch) -> String {
    match b {
        Branch::Index(n) => n.to_string(),
        Branch::Real => "real".into(),
        Branch::Zero => "zero".into(),
    }
}

fn verdict_json(v: &StabilityVerdict) -> Value {
    json!({
        "a": v.coefficients.a,
        "b": v.coefficients.b,
        "c": v.coefficients.c.sign(),
        "region": v.region.name(),
        "roots_positive_re": v.signs.positive,
        "roots_negative_re": v.signs.negative,
        "roots_zero_re": v.signs.zero,
        "zero_root_multiplicity": v.signs.zero_root_multiplicity,
        "max_re": number(v.max_re),
        "certified_count": v.roots.certified_count,
        "complete": v.roots.is_complete(),
        "im_range": [v.roots.im_range.lo, v.roots.im_range.hi],
        "re_range": [v.roots.re_range.lo, v.roots.re_range.hi],
        "witnesses": v.witnesses.iter().map(root_json).collect::<Vec<_>>(),
    })
}

pub fn spectrum(cfg: &RunConfig, out: &mut Emitter) -> Result<(), ToolError> {
    let k = cfg.linear.as_ref().expect("checked").coefficients();
    let v = classify(&k, cfg.numerics.n_max)?;
    if cfg.wants(Format::Csv) {
        // Indexed branches carry their index; real roots leave `n` empty.
        let rows: Vec<Vec<Cell>> = v
            .roots
            .roots
            .iter()
            .map(|r| {
                let n = match r.branch {
                    Branch::Index(n) => Cell::Int(n),
                    Branch::Zero | Branch::Real => Cell::Empty,
                };
                vec![
                    n,
                    r.lambda.re.into(),
                    r.lambda.im.into(),
                    r.residual.into(),
                    Cell::Int(r.multiplicity as i64),
                ]
            })
            .collect();
        out.csv("roots.csv", &["n", "re", "im", "residual", "multiplicity"], &rows)?;
    }
    if cfg.wants(Format::Json) {
        out.json("verdict.json", verdict_json(&v))?;
    }
    Ok(())
}

pub fn diagram(cfg: &RunConfig, out: &mut Emitter, pool: &rayon::ThreadPool) -> Result<(), ToolError> {
    let points = cfg.diagram.as_ref().expect("checked").points();
    let n_max = cfg.numerics.n_max;
    let verdicts: Vec<StabilityVerdict> =
        pool.install(|| points.par_iter().map(|k| classify(k, n_max)).collect::<Result<Vec<_>, _>>())?;
    let rows: Vec<Vec<Cell>> = verdicts
        .iter()
        .map(|v| {
            vec![
                v.coefficients.a.into(),
                v.coefficients.b.into(),
                Cell::Int(v.coefficients.c.sign()),
                v.region.name().into(),
                Cell::Int(v.signs.positive as i64),
                Cell::Int(v.signs.negative as i64),
                v.max_re.into(),
            ]
        })
        .collect();
    out.csv(
        "diagram.csv",
        &["a", "b", "c", "region", "nRootsPosRe", "nRootsNegRe", "maxRePart"],
        &rows,
    )
}

pub fn divisors(cfg: &RunConfig, out: &mut Emitter, pool: &rayon::ThreadPool) -> Result<(), ToolError> {
    let k: LinearCoefficients = cfg.linear.as_ref().expect("checked").coefficients();
    let freq = cfg.frequency.as_ref().expect("checked").frequency();
    let k_max = cfg.numerics.k_max as usize;
    let entries: Vec<DivisorEntry> = pool.install(|| {
        (1..=k_max as i64)
            .into_par_iter()
            .map(|m| divisor_entry(&k, freq, m))
            .collect::<Result<Vec<_>, _>>()
    })?;
    if cfg.wants(Format::Csv) {
        let rows: Vec<Vec<Cell>> = entries
            .iter()
            .map(|e| {
                vec![
                    Cell::Int(e.k),
                    Cell::Int(e.phi),
                    e.v.into(),
                    e.signed_product.into(),
                    e.z.into(),
                    e.h_mod.into(),
                ]
            })
            .collect();
        out.csv("divisors.csv", &["k", "phi", "v", "signedProduct", "Z", "hMod"], &rows)?;
    }
    if cfg.wants(Format::Json) {
        let rational = match freq {
            Frequency::RationalPeriod { p, q } => {
                let r = rational_period_analysis(p, q, k.c, k.detuning())?;
                json!({
                    "p": r.p,
                    "q": r.q,
                    "d": r.d,
                    "v_min": r.v_min,
                    "v_min_numerator": r.v_min_numerator,
                    "v_denominator_over_two_pi": 4 * p,
                    "condition_satisfied": r.condition_satisfied,
                    "smoothing": r.smoothing,
                    "distinct_v": r.distinct_v,
                    "distinct_v_numerators": r.distinct_v_numerators,
                })
            }
            Frequency::Angular(_) => Value::Null,
        };
        // The margin is only meaningful over at least 100 modes.
        let margin = if k_max >= 100 {
            number(diophantine_margin(&k, freq, k_max)?)
        } else {
            Value::Null
        };
        let min_h = entries.iter().map(|e| e.h_mod).fold(f64::INFINITY, f64::min);
        out.json(
            "rational_report.json",
            json!({
                "a": k.a,
                "b": k.b,
                "c": k.c.sign(),
                "omega": freq.omega(),
                "k_max": k_max,
                "detuning": k.detuning(),
                "diophantine_margin": margin,
                "min_h_mod": number(min_h),
                "rational": rational,
            }),
        )?;
    }
    Ok(())
}

pub fn periodic(cfg: &RunConfig, out: &mut Emitter) -> Result<(), ToolError> {
    let pc = cfg.problem.as_ref().expect("checked");
    let method = cfg.periodic.as_ref().expect("checked");
    let p = pc.build()?;
    let kmax = cfg.numerics.k as usize;
    let sol: FourierSolution = match method.method {
        PeriodicMethod::Multiplier => {
            let (a, b) = p.linear_slopes().ok_or_else(|| ToolError::Config {
                path: "periodic.method".into(),
                message: "multiplier needs linear f and g".into(),
            })?;
            linear_fourier_solve(&LinearCoefficients::new(a, b, p.c), &p.source, kmax)?
        }
        PeriodicMethod::Reduced => reduced_ode_solve(&p, method.n, kmax)?,
        PeriodicMethod::Picard => {
            nonlinear_small_source_solve(&p, kmax, cfg.numerics.tol, cfg.numerics.max_iter as usize)?
        }
    };
    let points = cfg.numerics.points as usize;
    let period = std::f64::consts::TAU / sol.omega;
    if cfg.wants(Format::Json) {
        let ks: Vec<i64> = (-(kmax as i64)..=kmax as i64).collect();
        out.json(
            "solution.json",
            json!({
                "omega": sol.omega,
                "K": kmax,
                "k": ks,
                "re": ks.iter().map(|&m| sol.coefficient(m).re).collect::<Vec<_>>(),
                "im": ks.iter().map(|&m| sol.coefficient(m).im).collect::<Vec<_>>(),
                "residualL2": sol.residual_l2,
                "iterations": sol.iterations,
            }),
        )?;
        let defect = periodic_residual(&sol, &p, points);
        out.json(
            "residual.json",
            json!({
                "method": method.method,
                "residual_l2": sol.residual_l2,
                "sampled_residual": defect,
                "points": points,
                "tol": cfg.numerics.tol,
                "within_tol": sol.residual_l2 <= cfg.numerics.tol,
            }),
        )?;
    }
    if cfg.wants(Format::Csv) {
        let samples = sol.samples(points);
        let rows: Vec<Vec<Cell>> = samples
            .values
            .iter()
            .enumerate()
            .map(|(j, &y)| vec![(period * j as f64 / points as f64).into(), y.into()])
            .collect();
        out.csv("solution.csv", &["t", "y"], &rows)?;
    }
    Ok(())
}

pub fn validate(cfg: &RunConfig, out: &mut Emitter) -> Result<(), ToolError> {
    let pc = cfg.problem.as_ref().expect("checked");
    let p = pc.build()?;
    let r = validate_problem(&p, cfg.numerics.samples as usize)?;
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "hypothesis": c.hypothesis.name(),
                "strong": c.hypothesis.is_strong(),
                "passed": c.passed,
                "witness": c.witness,
            })
        })
        .collect();
    out.json(
        "validation.json",
        json!({
            "interval": [r.interval.lo, r.interval.hi],
            "samples": r.samples,
            "gamma_bound": r.gamma_bound,
            "derivative_ratio": r.derivative_ratio,
            "basic_passed": r.basic_passed(),
            "all_passed": r.all_passed(),
            "checks": checks,
            "equilibrium": equilibrium_json(&p),
        }),
    )?;
    if !r.basic_passed() {
        let failed: Vec<&str> = r
            .checks
            .iter()
            .filter(|c| !c.passed && !c.hypothesis.is_strong())
            .map(|c| c.hypothesis.name())
            .collect();
        return Err(ToolError::Hypothesis(format!("failed: {}", failed.join(", "))));
    }
    Ok(())
}
