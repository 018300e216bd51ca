//! Level-set front extraction and comparison with the theoretical envelopes.
//!
//! The front position X_θ(t) is the rightmost crossing of the level θ,
//! linearly interpolated between grid cells. Fitted slopes over late time
//! windows are compared against the envelope: an upper curve
//! U(t) = ∫₀ᵗ c⁺(λ)(s) ds and a lower ray L(t) = c_low·t, where c_low is c*
//! for compactly supported or fast-decaying data and ⌊c(λ)⌋ for slow tails.

use serde::{Deserialize, Serialize};

use crate::dynamics::{Field, Observer};
use crate::env::Coefficient;
use crate::error::{Error, Result};
use crate::speed::SpeedCurve;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrontTrace {
    pub theta: f64,
    /// (t, X_θ(t)); recorded only while the front exists and stays out of
    /// the guard band.
    pub points: Vec<(f64, f64)>,
}

/// Rightmost x with u(t,x) >= θ, linearly interpolated; `None` when the
/// level is never reached.
pub fn track_front(field: &Field, theta: f64) -> Option<f64> {
    let n = field.grid.n;
    let u = &field.values;
    for i in (0..n).rev() {
        if u[i] >= theta {
            if i == n - 1 {
                return Some(field.grid.x(i));
            }
            let frac = if u[i] == u[i + 1] { 0.0 } else { (u[i] - theta) / (u[i] - u[i + 1]) };
            return Some(field.grid.x(i) + frac.clamp(0.0, 1.0) * field.grid.dx());
        }
    }
    None
}

/// Observer recording front positions for a set of thresholds.
pub struct FrontTracker {
    pub traces: Vec<FrontTrace>,
    /// Positions at or beyond this point are not trusted and not recorded.
    pub guard_start: f64,
}

impl FrontTracker {
    pub fn new(thetas: &[f64], guard_start: f64) -> Self {
        FrontTracker {
            traces: thetas
                .iter()
                .map(|&theta| FrontTrace { theta, points: Vec::new() })
                .collect(),
            guard_start,
        }
    }

    pub fn trace(&self, theta: f64) -> Option<&FrontTrace> {
        self.traces.iter().find(|tr| (tr.theta - theta).abs() < 1e-12)
    }
}

impl Observer for FrontTracker {
    fn observe(&mut self, field: &Field) {
        for trace in &mut self.traces {
            if let Some(x) = track_front(field, trace.theta) {
                if x < self.guard_start {
                    trace.points.push((field.t, x));
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpeedFit {
    pub window: (f64, f64),
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub n_points: usize,
}

/// Least-squares line through the trace points with t in the window.
pub fn fit_speed(trace: &FrontTrace, t_lo: f64, t_hi: f64) -> Result<SpeedFit> {
    let pts: Vec<(f64, f64)> =
        trace.points.iter().copied().filter(|(t, _)| *t >= t_lo && *t <= t_hi).collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "speed fit needs >= 8 trace points in [{t_lo}, {t_hi}], found {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let st: f64 = pts.iter().map(|p| p.0).sum();
    let sx: f64 = pts.iter().map(|p| p.1).sum();
    let stt: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let stx: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * stt - st * st;
    if denom.abs() < 1e-300 {
        return Err(Error::InsufficientData("degenerate time window".into()));
    }
    let slope = (n * stx - st * sx) / denom;
    let intercept = (sx - slope * st) / n;
    let ss: f64 = pts
        .iter()
        .map(|(t, x)| {
            let r = x - (slope * t + intercept);
            r * r
        })
        .sum();
    Ok(SpeedFit {
        window: (t_lo, t_hi),
        slope,
        intercept,
        residual_rms: (ss / n).sqrt(),
        n_points: pts.len(),
    })
}

/// Decay class of the initial data, as seen by the envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailClass {
    /// Compact support (or any decay at least e^{-λ*x}).
    Compact,
    /// Right tail comparable to e^{-rate·x}.
    Exponential { rate: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelopes {
    pub times: Vec<f64>,
    /// U(t) = ∫₀ᵗ c⁺(λ)(s) ds.
    pub upper: Vec<f64>,
    /// L(t) = c_low·t.
    pub lower: Vec<f64>,
    pub lower_slope: f64,
    /// Mean slope of the upper envelope over the whole grid.
    pub upper_mean_slope: f64,
}

/// Build both envelopes on a time grid.
pub fn theoretical_envelope(
    curve: &SpeedCurve,
    mu: &Coefficient,
    tail: TailClass,
    times: &[f64],
) -> Result<Envelopes> {
    if !curve.star_interior {
        return Err(Error::Unsupported(
            "envelopes undefined: minimizer sits at the abscissa of convergence".into(),
        ));
    }
    let (lambda_eff, lower_slope) = match tail {
        TailClass::Compact => (curve.lambda_star, curve.c_star),
        TailClass::Exponential { rate } if rate >= curve.lambda_star => {
            (curve.lambda_star, curve.c_star)
        }
        TailClass::Exponential { rate } => {
            let slow = crate::speed::least_mean_speed(&curve.kernel, curve.mu_least_mean, rate)?;
            (rate, slow)
        }
    };
    let mut upper = Vec::with_capacity(times.len());
    let mut lower = Vec::with_capacity(times.len());
    for &t in times {
        upper.push(curve.c_plus_integral(mu, lambda_eff, t)?);
        lower.push(lower_slope * t);
    }
    let upper_mean_slope = if times.len() >= 2 {
        let span = times[times.len() - 1] - times[0];
        (upper[times.len() - 1] - upper[0]) / span
    } else {
        f64::NAN
    };
    Ok(Envelopes { times: times.to_vec(), upper, lower, lower_slope, upper_mean_slope })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictCheck {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub bound: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub checks: Vec<VerdictCheck>,
    pub pass: bool,
    pub fitted_slope: f64,
    pub lower_slope: f64,
    pub upper_mean_slope: f64,
    pub eta: f64,
    pub tolerance: f64,
    pub burn_in: f64,
}

/// Compare a measured trace against the envelopes:
/// (a) X_θ(t) <= U(t) + η·t + tol after burn-in,
/// (b) fitted slope within [lower − tol, upper mean + η + tol],
/// (c) for logistic runs, u >= 1 − level_tol on [0, 0.9·c_low·t] at the
///     final recorded time.
#[allow(clippy::too_many_arguments)]
pub fn verdict(
    trace: &FrontTrace,
    envelopes: &Envelopes,
    eta: f64,
    tolerance: f64,
    burn_in: f64,
    fit: &SpeedFit,
    final_field: Option<&Field>,
    level_tol: f64,
) -> Verdict {
    let mut checks = Vec::new();

    // (a) upper envelope: requires matching time grids.
    let mut worst_excess = f64::NEG_INFINITY;
    let mut n_checked = 0usize;
    for (t, x) in trace.points.iter() {
        if *t < burn_in {
            continue;
        }
        if let Some(i) = envelopes.times.iter().position(|s| (s - t).abs() < 1e-9) {
            let excess = x - (envelopes.upper[i] + eta * t + tolerance);
            worst_excess = worst_excess.max(excess);
            n_checked += 1;
        }
    }
    checks.push(VerdictCheck {
        name: "front_below_upper_envelope".into(),
        pass: n_checked > 0 && worst_excess <= 0.0,
        measured: worst_excess,
        bound: 0.0,
        detail: format!("max(X - U - eta*t - tol) over {n_checked} recorded times"),
    });

    // (b) fitted slope inside the envelope band.
    let lo = envelopes.lower_slope - tolerance;
    let hi = envelopes.upper_mean_slope + eta + tolerance;
    checks.push(VerdictCheck {
        name: "fitted_slope_in_band".into(),
        pass: fit.slope >= lo && fit.slope <= hi,
        measured: fit.slope,
        bound: lo,
        detail: format!("band [{lo}, {hi}]"),
    });

    // (c) saturation behind the front at the final time.
    if let Some(field) = final_field {
        let c = 0.9 * envelopes.lower_slope;
        let x_hi = c * field.t;
        let mut min_u = f64::INFINITY;
        let mut i = 0;
        while field.grid.x(i) < x_hi && i < field.grid.n {
            if field.grid.x(i) >= 0.0 {
                min_u = min_u.min(field.values[i]);
            }
            i += 1;
        }
        checks.push(VerdictCheck {
            name: "saturation_behind_front".into(),
            pass: min_u.is_finite() && min_u >= 1.0 - level_tol,
            measured: min_u,
            bound: 1.0 - level_tol,
            detail: format!("min u over [0, {x_hi:.3}] at t = {}", field.t),
        });
    }

    let pass = checks.iter().all(|c| c.pass);
    Verdict {
        checks,
        pass,
        fitted_slope: fit.slope,
        lower_slope: envelopes.lower_slope,
        upper_mean_slope: envelopes.upper_mean_slope,
        eta,
        tolerance,
        burn_in,
    }
}

/// Burn-in rule: max(10 kernel mean-free times, 20% of the run).
pub fn default_burn_in(kbar: f64, t_end: f64) -> f64 {
    (10.0 / kbar).max(0.2 * t_end)
}
