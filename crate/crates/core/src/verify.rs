//! Numerical certificates for the comparison structures.
//!
//! A candidate super- or sub-solution comes with closed forms for w(t,x) and
//! ∂ₜw(t,x). The residual operator
//!
//!   N[w](t,x) = ∂ₜw − (K∗w − K̄w) − w·f(t,w)
//!
//! is sampled on a grid, with K∗w evaluated by adaptive quadrature so the
//! inequality test is independent of the grid solver. A super-solution
//! certifies when min N >= −tol, a sub-solution when max N <= tol.
//!
//! The sub-solution constants are existential in the theory, so the module
//! searches for witnesses: doubling the truncation radii (cosine profile) or
//! the gap constant (two-exponential profile) until a certificate passes or
//! a cap aborts with "not certified".

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{make_initial, BoundaryMode, Field, InitialData, Nonlinearity, Stepper};
use crate::env::Coefficient;
use crate::error::{Error, Result};
use crate::fronts::FrontTrace;
use crate::kernel::KernelSpec;
use crate::quad;
use crate::speed::{c_truncated, SpeedCurve};

/// Bounded adjuster a(t) with a'(t) chosen so that μ + a' is constant for
/// mean-valued coefficients; a ≡ 0 is the right choice for constant μ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Adjuster {
    Zero,
    /// a'(t) = ⟨μ⟩ − μ(t), a(0) = 0.
    MeanDual { mu: Coefficient, mean: f64 },
}

impl Adjuster {
    /// Pick the natural adjuster for a coefficient.
    pub fn for_coefficient(mu: &Coefficient) -> Result<Self> {
        match mu.mean_value() {
            Some(mean) => {
                if matches!(mu.form, crate::env::CoefficientForm::Constant { .. }) {
                    Ok(Adjuster::Zero)
                } else {
                    Ok(Adjuster::MeanDual { mu: mu.clone(), mean })
                }
            }
            None => Err(Error::Unsupported(
                "no bounded adjuster available: coefficient has no mean value".into(),
            )),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Adjuster::Zero => 0.0,
            Adjuster::MeanDual { mu, mean } => {
                mean * t - mu.integral(0.0, t).expect("dual adjuster within horizon")
            }
        }
    }

    pub fn slope(&self, t: f64) -> f64 {
        match self {
            Adjuster::Zero => 0.0,
            Adjuster::MeanDual { mu, mean } => {
                mean - mu.eval(t).expect("dual adjuster within horizon")
            }
        }
    }

    /// Upper bound for sup |a|.
    pub fn sup_abs(&self) -> f64 {
        match self {
            Adjuster::Zero => 0.0,
            Adjuster::MeanDual { mu, .. } => match &mu.form {
                crate::env::CoefficientForm::Periodic { terms, .. }
                | crate::env::CoefficientForm::Quasiperiodic { terms, .. } => terms
                    .iter()
                    .map(|s| 2.0 * s.amplitude.abs() / s.angular_frequency.abs())
                    .sum(),
                _ => 0.0,
            },
        }
    }
}

/// Closed-form comparison candidates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CandidateSolution {
    /// w = A e^{−λ̂ (x − ∫₀ᵗ c(λ̂)(s) ds)}, λ̂ = min(λ, λ*).
    SupersolutionExp {
        amplitude: f64,
        lambda: f64,
        big_l: f64,
        mu: Coefficient,
    },
    /// w = η e^{a(t)} ψ(x − c_{R,B}(γ)·t) with ψ the cosine-tapered
    /// exponential e^{−γξ} cos(πξ/2R) on [−R, R], normalized to max 1.
    SubsolutionCosine {
        gamma: f64,
        big_r: f64,
        big_b: f64,
        eta: f64,
        adjuster: Adjuster,
        speed: f64,
        /// argmax and log of max of the unnormalized profile.
        xi_peak: f64,
        log_peak: f64,
    },
    /// w = max(0, e^{−λ(ξ+a(t))} − e^{−λa(t)+B₀+B₁} e^{−(λ+h)ξ}),
    /// ξ = x − ∫₀ᵗ c_{λ,a}(s) ds; positive exactly on ξ > (B₀+B₁)/h.
    SubsolutionTwoExp {
        lambda: f64,
        h: f64,
        adjuster: Adjuster,
        b0: f64,
        b1: f64,
        big_l: f64,
        mu: Coefficient,
    },
}

impl CandidateSolution {
    pub fn supersolution_exp(
        amplitude: f64,
        lambda: f64,
        curve: &SpeedCurve,
        mu: &Coefficient,
    ) -> Result<Self> {
        if !(amplitude > 0.0) {
            return Err(Error::InvalidInput("amplitude must be positive".into()));
        }
        let l_eff = lambda.min(curve.lambda_star);
        Ok(CandidateSolution::SupersolutionExp {
            amplitude,
            lambda: l_eff,
            big_l: curve.kernel.big_l(l_eff)?,
            mu: mu.clone(),
        })
    }

    pub fn subsolution_cosine(
        kernel: &KernelSpec,
        gamma: f64,
        big_r: f64,
        big_b: f64,
        eta: f64,
        adjuster: Adjuster,
    ) -> Result<Self> {
        let speed = c_truncated(kernel, gamma, big_r, big_b)?;
        // Peak of e^{−γξ} cos(πξ/2R) sits at tan(πξ/2R) = −2Rγ/π.
        let a = std::f64::consts::FRAC_PI_2 / big_r;
        let xi_peak = (-(gamma / a)).atan() / a;
        let log_peak = -gamma * xi_peak + (a * xi_peak).cos().ln();
        Ok(CandidateSolution::SubsolutionCosine {
            gamma,
            big_r,
            big_b,
            eta,
            adjuster,
            speed,
            xi_peak,
            log_peak,
        })
    }

    pub fn subsolution_two_exp(
        kernel: &KernelSpec,
        lambda: f64,
        h: f64,
        adjuster: Adjuster,
        b0: f64,
        b1: f64,
        mu: &Coefficient,
    ) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput("h must be positive".into()));
        }
        Ok(CandidateSolution::SubsolutionTwoExp {
            lambda,
            h,
            adjuster,
            b0,
            b1,
            big_l: kernel.big_l(lambda)?,
            mu: mu.clone(),
        })
    }

    pub fn is_supersolution(&self) -> bool {
        matches!(self, CandidateSolution::SupersolutionExp { .. })
    }

    /// Reference position of the moving frame at time t.
    pub fn center(&self, t: f64) -> f64 {
        match self {
            CandidateSolution::SupersolutionExp { lambda, big_l, mu, .. } => {
                (big_l * t + mu.integral(0.0, t).expect("within horizon")) / lambda
            }
            CandidateSolution::SubsolutionCosine { speed, .. } => speed * t,
            CandidateSolution::SubsolutionTwoExp { lambda, adjuster, big_l, mu, .. } => {
                (big_l * t + mu.integral(0.0, t).expect("within horizon")) / lambda
                    + adjuster.value(t)
            }
        }
    }

    /// w(t, x).
    pub fn value(&self, t: f64, x: f64) -> f64 {
        match self {
            CandidateSolution::SupersolutionExp { amplitude, lambda, .. } => {
                let xi = x - self.center(t);
                amplitude * (-lambda * xi).exp()
            }
            CandidateSolution::SubsolutionCosine {
                gamma,
                big_r,
                eta,
                adjuster,
                xi_peak,
                log_peak,
                ..
            } => {
                let xi = x - self.center(t);
                if xi.abs() >= *big_r {
                    return 0.0;
                }
                let _ = xi_peak;
                let a = std::f64::consts::FRAC_PI_2 / big_r;
                eta * (adjuster.value(t) - gamma * xi - log_peak).exp() * (a * xi).cos()
            }
            CandidateSolution::SubsolutionTwoExp { lambda, h, adjuster, b0, b1, .. } => {
                let xi = x - self.center(t);
                let a_t = adjuster.value(t);
                let e1 = (-lambda * (xi + a_t)).exp();
                let e2 = (-lambda * a_t + b0 + b1 - (lambda + h) * xi).exp();
                (e1 - e2).max(0.0)
            }
        }
    }

    /// ∂ₜw(t, x), defined where w is smooth (w > 0 for the sub-solutions).
    pub fn dt_value(&self, t: f64, x: f64) -> f64 {
        match self {
            CandidateSolution::SupersolutionExp { big_l, mu, .. } => {
                // ∂ₜ w = λ c(λ)(t) w = (L(λ) + μ(t)) w.
                (big_l + mu.eval(t).expect("within horizon")) * self.value(t, x)
            }
            CandidateSolution::SubsolutionCosine {
                gamma,
                big_r,
                eta,
                adjuster,
                speed,
                log_peak,
                ..
            } => {
                let xi = x - self.center(t);
                if xi.abs() >= *big_r {
                    return 0.0;
                }
                let a = std::f64::consts::FRAC_PI_2 / big_r;
                let envelope = eta * (adjuster.value(t) - gamma * xi - log_peak).exp();
                let psi = envelope * (a * xi).cos();
                let dpsi_dxi = envelope * (-gamma * (a * xi).cos() - a * (a * xi).sin());
                adjuster.slope(t) * psi - speed * dpsi_dxi
            }
            CandidateSolution::SubsolutionTwoExp { lambda, h, adjuster, b0, b1, big_l, mu } => {
                let xi = x - self.center(t);
                let a_t = adjuster.value(t);
                let a_p = adjuster.slope(t);
                let e1 = (-lambda * (xi + a_t)).exp();
                let e2 = (-lambda * a_t + b0 + b1 - (lambda + h) * xi).exp();
                if e1 - e2 <= 0.0 {
                    return 0.0;
                }
                // ∂ₜφ = −λ a' φ; ∂ξφ = −λE₁ + (λ+h)E₂; frame speed c_{λ,a}.
                let dphi_dt = -lambda * a_p * (e1 - e2);
                let dphi_dxi = -lambda * e1 + (lambda + h) * e2;
                let c_frame =
                    (big_l + mu.eval(t).expect("within horizon")) / lambda + a_p;
                dphi_dt - c_frame * dphi_dxi
            }
        }
    }

    /// Interval of y over which K(y)·w(t, x−y) carries mass, for quadrature.
    fn conv_window(&self, kernel: &KernelSpec, t: f64, x: f64) -> Option<(f64, f64)> {
        match self {
            CandidateSolution::SupersolutionExp { lambda, .. } => {
                Some(kernel.weighted_support(*lambda))
            }
            CandidateSolution::SubsolutionCosine { gamma, big_r, .. } => {
                let xi = x - self.center(t);
                let (w_lo, w_hi) = kernel.weighted_support(*gamma);
                let lo = w_lo.max(xi - big_r);
                let hi = w_hi.min(xi + big_r);
                (lo < hi).then_some((lo, hi))
            }
            CandidateSolution::SubsolutionTwoExp { lambda, h, b0, b1, .. } => {
                let xi = x - self.center(t);
                let xi_cut = (b0 + b1) / h;
                let (lo1, hi1) = kernel.weighted_support(*lambda);
                let (lo2, hi2) = kernel.weighted_support(lambda + h);
                let lo = lo1.min(lo2);
                let hi = hi1.max(hi2).min(xi - xi_cut);
                (lo < hi).then_some((lo, hi))
            }
        }
    }

    /// Amplitude used to scale tolerances.
    pub fn amplitude(&self) -> f64 {
        match self {
            CandidateSolution::SupersolutionExp { amplitude, .. } => *amplitude,
            CandidateSolution::SubsolutionCosine { eta, adjuster, .. } => {
                eta * adjuster.sup_abs().exp()
            }
            CandidateSolution::SubsolutionTwoExp { .. } => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertStatus {
    Certified,
    Violated,
    /// Quadrature truncation error too large to decide.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub status: CertStatus,
    pub t_range: (f64, f64),
    /// Comoving offset window around the candidate's center.
    pub xi_range: (f64, f64),
    pub n_samples: usize,
    pub n_skipped: usize,
    pub max_signed_residual: f64,
    pub min_signed_residual: f64,
    /// (t, x, N[w]) at the worst point for the certificate direction.
    pub extremum: (f64, f64, f64),
    pub tolerance: f64,
    /// Max over sampled points of w.
    pub scale: f64,
    pub max_quadrature_error: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ResidualParams {
    pub t_lo: f64,
    pub t_hi: f64,
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub nt: usize,
    pub nx: usize,
}

/// Sample N[w] on an (t, ξ) grid in the comoving frame.
///
/// Super-solutions are checked where w <= 1 (larger values dominate any
/// [0,1]-valued solution trivially); sub-solutions are checked on their
/// positivity region.
pub fn residual(
    kernel: &KernelSpec,
    nl: &Nonlinearity,
    cand: &CandidateSolution,
    params: &ResidualParams,
) -> Result<ResidualReport> {
    let kbar = kernel.mass();
    let is_super = cand.is_supersolution();

    // First pass: candidate scale on the sample grid.
    let mut scale = 0.0f64;
    for it in 0..params.nt {
        let t = lerp(params.t_lo, params.t_hi, it, params.nt);
        let center = cand.center(t);
        for ix in 0..params.nx {
            let xi = lerp(params.xi_lo, params.xi_hi, ix, params.nx);
            let w = cand.value(t, center + xi);
            if !is_super || w <= 1.0 {
                scale = scale.max(w);
            }
        }
    }
    if scale == 0.0 {
        return Err(Error::InvalidInput(
            "candidate vanishes on the whole sample window".into(),
        ));
    }
    let quad_tol = 1e-10 * scale;

    let mut max_res = f64::NEG_INFINITY;
    let mut min_res = f64::INFINITY;
    let mut extremum = (f64::NAN, f64::NAN, f64::NAN);
    let mut n_samples = 0usize;
    let mut n_skipped = 0usize;
    let mut max_qerr = 0.0f64;

    for it in 0..params.nt {
        let t = lerp(params.t_lo, params.t_hi, it, params.nt);
        let center = cand.center(t);
        let mu_t = nl.mu().eval(t)?;
        for ix in 0..params.nx {
            let xi = lerp(params.xi_lo, params.xi_hi, ix, params.nx);
            let x = center + xi;
            let w = cand.value(t, x);
            let skip = if is_super { w > 1.0 } else { w <= 0.0 };
            if skip {
                n_skipped += 1;
                continue;
            }
            let conv = match cand.conv_window(kernel, t, x) {
                Some((lo, hi)) => {
                    let q = quad::integrate(
                        |y| kernel.evaluate(y) * cand.value(t, x - y),
                        lo,
                        hi,
                        quad_tol,
                    );
                    max_qerr = max_qerr.max(q.abs_error);
                    q.value
                }
                None => 0.0,
            };
            let n_val =
                cand.dt_value(t, x) - (conv - kbar * w) - w * nl.f_with_rate(t, mu_t, w);
            n_samples += 1;
            if n_val > max_res {
                max_res = n_val;
                if !is_super {
                    extremum = (t, x, n_val);
                }
            }
            if n_val < min_res {
                min_res = n_val;
                if is_super {
                    extremum = (t, x, n_val);
                }
            }
        }
    }

    if n_samples == 0 {
        return Err(Error::InvalidInput("no admissible sample points".into()));
    }

    let tolerance = if is_super { 1e-8 * cand.amplitude() } else { 1e-6 * scale };
    let pass = if is_super { min_res >= -tolerance } else { max_res <= tolerance };
    let status = if max_qerr > 1e-8 * scale {
        CertStatus::Inconclusive
    } else if pass {
        CertStatus::Certified
    } else {
        CertStatus::Violated
    };

    Ok(ResidualReport {
        status,
        t_range: (params.t_lo, params.t_hi),
        xi_range: (params.xi_lo, params.xi_hi),
        n_samples,
        n_skipped,
        max_signed_residual: max_res,
        min_signed_residual: min_res,
        extremum,
        tolerance,
        scale,
        max_quadrature_error: max_qerr,
    })
}

fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        return lo;
    }
    lo + (hi - lo) * i as f64 / (n - 1) as f64
}

/// Smallest amplitude A with A e^{−λx} >= v₀(x) everywhere (times a hair of
/// slack), so the exponential super-solution starts above the initial data.
pub fn dominating_amplitude(init: &InitialData, lambda: f64, x_lo: f64, x_hi: f64) -> f64 {
    let n = 4096;
    let mut amp = 1.0f64;
    for i in 0..=n {
        let x = x_lo + (x_hi - x_lo) * i as f64 / n as f64;
        let v = init.evaluate(x);
        if v > 0.0 {
            amp = amp.max(v * (lambda * x).exp());
        }
    }
    amp * 1.001
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessAttempt {
    pub params: String,
    pub status: CertStatus,
    pub worst_residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub attempts: Vec<WitnessAttempt>,
    pub report: ResidualReport,
}

/// Search radii and amplitude for a certified cosine-profile sub-solution:
/// doubling B and R (cap R <= 1000), shrinking η.
pub fn search_cosine_witness(
    kernel: &KernelSpec,
    nl: &Nonlinearity,
    curve: &SpeedCurve,
    gamma: f64,
) -> Result<(CandidateSolution, WitnessSearch)> {
    if !(gamma > 0.0 && gamma < curve.lambda_star) {
        return Err(Error::InvalidInput(format!(
            "gamma must lie in (0, lambda_star), got {gamma}"
        )));
    }
    let adjuster = Adjuster::for_coefficient(nl.mu())?;
    let (_, sup_hi) = kernel.effective_support(1e-14);
    let t_hi = nl.mu().period().unwrap_or(5.0).max(5.0);

    let mut attempts = Vec::new();
    let mut b = sup_hi.max(4.0);
    const R_CAP: f64 = 1e3;
    while b <= R_CAP {
        let mut r = (2.0 * b).max(25.0);
        while r <= R_CAP {
            for eta in [0.2, 0.05, 0.01] {
                let cand = CandidateSolution::subsolution_cosine(
                    kernel,
                    gamma,
                    r,
                    b,
                    eta,
                    adjuster.clone(),
                )?;
                let params = ResidualParams {
                    t_lo: 0.0,
                    t_hi,
                    xi_lo: -r,
                    xi_hi: r,
                    nt: 24,
                    nx: 440,
                };
                let report = residual(kernel, nl, &cand, &params)?;
                attempts.push(WitnessAttempt {
                    params: format!("gamma={gamma:.6} R={r} B={b} eta={eta}"),
                    status: report.status,
                    worst_residual: report.max_signed_residual,
                    tolerance: report.tolerance,
                });
                if report.status == CertStatus::Certified {
                    return Ok((cand, WitnessSearch { attempts, report }));
                }
            }
            r *= 2.0;
        }
        b *= 2.0;
    }
    Err(Error::NotCertified(format!(
        "cosine sub-solution: no certificate up to R = {R_CAP} ({} attempts)",
        attempts.len()
    )))
}

/// Search the gap constant B₁ for a certified two-exponential sub-solution;
/// h is fixed by the rule h = min(λ, σ−λ, λ*−λ)/2.
pub fn search_two_exp_witness(
    kernel: &KernelSpec,
    nl: &Nonlinearity,
    curve: &SpeedCurve,
    lambda: f64,
) -> Result<(CandidateSolution, WitnessSearch)> {
    if !(lambda > 0.0 && lambda < curve.lambda_star) {
        return Err(Error::InvalidInput(format!(
            "lambda must lie in (0, lambda_star), got {lambda}"
        )));
    }
    let sigma = kernel.abscissa();
    let h = 0.5 * lambda.min(sigma - lambda).min(curve.lambda_star - lambda);
    let adjuster = Adjuster::for_coefficient(nl.mu())?;
    let t_hi = nl.mu().period().unwrap_or(5.0).max(5.0);

    let mut attempts = Vec::new();
    let mut b1 = 1.0;
    while b1 <= 1024.0 {
        let cand = CandidateSolution::subsolution_two_exp(
            kernel,
            lambda,
            h,
            adjuster.clone(),
            0.0,
            b1,
            nl.mu(),
        )?;
        let xi_cut = b1 / h;
        let params = ResidualParams {
            t_lo: 0.0,
            t_hi,
            xi_lo: xi_cut,
            xi_hi: xi_cut + (40.0 / lambda).max(3.0 * xi_cut),
            nt: 24,
            nx: 440,
        };
        let report = residual(kernel, nl, &cand, &params)?;
        attempts.push(WitnessAttempt {
            params: format!("lambda={lambda:.6} h={h:.6} B1={b1}"),
            status: report.status,
            worst_residual: report.max_signed_residual,
            tolerance: report.tolerance,
        });
        if report.status == CertStatus::Certified {
            return Ok((cand, WitnessSearch { attempts, report }));
        }
        b1 *= 2.0;
    }
    Err(Error::NotCertified(format!(
        "two-exponential sub-solution: no certificate up to B1 = 1024 ({} attempts)",
        attempts.len()
    )))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub pass: bool,
    pub max_violation: f64,
    pub checked_times: usize,
    pub t_end: f64,
}

/// Co-evolve an ordered pair and record the worst ordering violation
/// max_x (u_low − u_high) over the run.
#[allow(clippy::too_many_arguments)]
pub fn comparison_test(
    kernel: &KernelSpec,
    nl: &Nonlinearity,
    u0_low: &InitialData,
    u0_high: &InitialData,
    grid: crate::dynamics::Grid,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<ComparisonReport> {
    let mut low = make_initial(u0_low, grid)?;
    let mut high = make_initial(u0_high, grid)?;
    for (a, b) in low.values.iter().zip(high.values.iter()) {
        if a > b {
            return Err(Error::InvalidInput(format!(
                "initial data not ordered: low = {a} > high = {b}"
            )));
        }
    }
    let mut s_low = Stepper::new(kernel, nl.clone(), grid, BoundaryMode::Zero)?;
    let mut s_high = Stepper::new(kernel, nl.clone(), grid, BoundaryMode::Zero)?;
    let n_steps = (t_end / dt).round() as usize;
    let stride = stride.max(1);
    let mut max_violation = 0.0f64;
    let mut checked = 1usize;
    for s in 1..=n_steps {
        s_low.step(&mut low, dt)?;
        s_high.step(&mut high, dt)?;
        if s % stride == 0 || s == n_steps {
            let worst = low
                .values
                .iter()
                .zip(high.values.iter())
                .map(|(a, b)| a - b)
                .fold(f64::NEG_INFINITY, f64::max);
            max_violation = max_violation.max(worst.max(0.0));
            checked += 1;
        }
    }
    Ok(ComparisonReport {
        pass: max_violation <= 1e-10,
        max_violation,
        checked_times: checked,
        t_end,
    })
}

/// Seeded ordered initial-data pairs mixing the canonical constructors.
pub fn random_ordered_pairs(
    seed: u64,
    count: usize,
    x_lo: f64,
    x_hi: f64,
) -> Vec<(InitialData, InitialData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(count);
    for i in 0..count {
        match i % 3 {
            0 => {
                // Same bump, ordered peaks.
                let width = rng.gen_range(5.0..15.0);
                let p_low = rng.gen_range(0.05..0.4);
                let p_high = rng.gen_range(p_low + 0.05..0.9);
                let shift = rng.gen_range(x_lo + 2.0..x_lo + 10.0);
                pairs.push((
                    InitialData::compact_bump(width, p_low).with_shift(shift),
                    InitialData::compact_bump(width, p_high).with_shift(shift),
                ));
            }
            1 => {
                // Random smooth profile vs a pointwise scaling of itself.
                let n = 257;
                let dx = (x_hi - x_lo) * 0.5 / (n - 1) as f64;
                let k = rng.gen_range(2..5);
                let bumps: Vec<(f64, f64, f64)> = (0..k)
                    .map(|_| {
                        (
                            rng.gen_range(x_lo + 5.0..x_lo + 0.4 * (x_hi - x_lo)),
                            rng.gen_range(1.0..4.0),
                            rng.gen_range(0.1..0.6),
                        )
                    })
                    .collect();
                let values: Vec<f64> = (0..n)
                    .map(|j| {
                        let x = x_lo + 2.0 + j as f64 * dx;
                        let v: f64 = bumps
                            .iter()
                            .map(|(c, w, a)| a * (-0.5 * ((x - c) / w).powi(2)).exp())
                            .sum();
                        v.min(0.95)
                    })
                    .collect();
                let scale = rng.gen_range(0.2..0.9);
                let low: Vec<f64> = values.iter().map(|v| v * scale).collect();
                pairs.push((
                    InitialData::custom(x_lo + 2.0, dx, low),
                    InitialData::custom(x_lo + 2.0, dx, values),
                ));
            }
            _ => {
                // Small bump under a dominating plateau with a slow tail.
                let rate = rng.gen_range(0.05..0.15);
                let tail_start = 0.5 * (x_hi - x_lo).min(60.0);
                let amplitude = rng.gen_range(0.6..0.9);
                let beta = amplitude * (-rate * tail_start).exp();
                let width = rng.gen_range(4.0..10.0);
                let peak = rng.gen_range(0.2..0.9) * beta;
                let shift = rng.gen_range(2.0..tail_start - width - 1.0);
                pairs.push((
                    InitialData::compact_bump(width, peak).with_shift(shift),
                    InitialData::plateau_tail(1.0, tail_start, amplitude, rate),
                ));
            }
        }
    }
    pairs
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositivityReport {
    pub pass: bool,
    pub skipped: bool,
    pub reachable_cells: usize,
    pub non_positive_cells: usize,
    pub initial_support: Option<(f64, f64)>,
    pub reachable: Option<(f64, f64)>,
    pub t_probe: f64,
}

/// Strict positivity at t_probe on the region reachable from supp(u₀):
/// per time step positivity spreads by at least one substantial kernel
/// support (K above 1e-6 of its peak; farther cells can underflow and are
/// exempt).
pub fn positivity_test(
    kernel: &KernelSpec,
    nl: &Nonlinearity,
    init: &InitialData,
    grid: crate::dynamics::Grid,
    t_probe: f64,
    dt: f64,
) -> Result<PositivityReport> {
    let mut field = make_initial(init, grid)?;
    let first = field.values.iter().position(|&v| v > 0.0);
    let last = field.values.iter().rposition(|&v| v > 0.0);
    let (i0, i1) = match (first, last) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Ok(PositivityReport {
                pass: true,
                skipped: true,
                reachable_cells: 0,
                non_positive_cells: 0,
                initial_support: None,
                reachable: None,
                t_probe,
            })
        }
    };
    if t_probe <= 0.0 {
        let non_positive =
            field.values[i0..=i1].iter().filter(|&&v| v <= 0.0).count();
        return Ok(PositivityReport {
            pass: non_positive == 0,
            skipped: false,
            reachable_cells: i1 - i0 + 1,
            non_positive_cells: non_positive,
            initial_support: Some((grid.x(i0), grid.x(i1))),
            reachable: Some((grid.x(i0), grid.x(i1))),
            t_probe,
        });
    }

    // Direct convolution: a sum of nonnegative terms cannot produce the
    // negative round-off noise the FFT path leaves in the far field.
    let mut stepper = Stepper::with_path(
        kernel,
        nl.clone(),
        grid,
        BoundaryMode::Zero,
        crate::dynamics::ConvPath::Direct,
    )?;
    let hops = (t_probe / dt).ceil() as usize;
    let n_steps = (t_probe / dt).round() as usize;
    for _ in 0..n_steps {
        stepper.step(&mut field, dt)?;
    }

    let dx = grid.dx();
    let (s_lo, s_hi) = kernel.effective_support(1e-6);
    let m_l = (-s_lo / dx).floor() as usize;
    let m_r = (s_hi / dx).floor() as usize;
    let reach_lo = i0.saturating_sub(hops * m_l);
    let reach_hi = (i1 + hops * m_r).min(grid.n - 1);

    let non_positive =
        field.values[reach_lo..=reach_hi].iter().filter(|&&v| v <= 0.0).count();
    Ok(PositivityReport {
        pass: non_positive == 0,
        skipped: false,
        reachable_cells: reach_hi - reach_lo + 1,
        non_positive_cells: non_positive,
        initial_support: Some((grid.x(i0), grid.x(i1))),
        reachable: Some((grid.x(reach_lo), grid.x(reach_hi))),
        t_probe,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PersistenceReport {
    /// min over the window of u(t, 0).
    pub origin_min: f64,
    /// min over the window of u(t, X(t)).
    pub path_min: f64,
    /// min over the window of min_{x in [0, 0.5·X(t)]} u.
    pub inner_half_min: f64,
    /// min over the window of min_{x in [0, 0.9·X(t)]} u.
    pub inner_09_min: f64,
    pub eps0: f64,
    pub window: (f64, f64),
    pub snapshots_used: usize,
}

/// Liminf proxies over the last half of a run: the value at the origin, the
/// value along the path, and the inner-interval minima for k = 0.5, 0.9.
pub fn persistence_diagnostics(
    snapshots: &[Field],
    path: &FrontTrace,
    eps0: f64,
) -> Result<PersistenceReport> {
    if snapshots.is_empty() || path.points.is_empty() {
        return Err(Error::InsufficientData("need snapshots and a nonempty path".into()));
    }
    let t_end = snapshots.last().unwrap().t;
    let t_lo = 0.5 * t_end;

    let path_at = |t: f64| -> Option<f64> {
        let pts = &path.points;
        if t < pts[0].0 || t > pts[pts.len() - 1].0 {
            return None;
        }
        let i = pts.partition_point(|p| p.0 <= t).saturating_sub(1);
        if i + 1 >= pts.len() {
            return Some(pts[i].1);
        }
        let (t0, x0) = pts[i];
        let (t1, x1) = pts[i + 1];
        let frac = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
        Some(x0 + frac * (x1 - x0))
    };

    let mut origin_min = f64::INFINITY;
    let mut path_min = f64::INFINITY;
    let mut inner_half = f64::INFINITY;
    let mut inner_09 = f64::INFINITY;
    let mut used = 0usize;
    for field in snapshots.iter().filter(|f| f.t >= t_lo) {
        let x_path = match path_at(field.t) {
            Some(x) => x,
            None => continue,
        };
        used += 1;
        origin_min = origin_min.min(field.value_at(0.0));
        path_min = path_min.min(field.value_at(x_path));
        for (k, slot) in [(0.5, &mut inner_half), (0.9, &mut inner_09)] {
            let hi = k * x_path;
            let mut m = f64::INFINITY;
            let mut i = 0;
            while i < field.grid.n && field.grid.x(i) <= hi {
                if field.grid.x(i) >= 0.0 {
                    m = m.min(field.values[i]);
                }
                i += 1;
            }
            *slot = slot.min(m);
        }
    }
    if used == 0 {
        return Err(Error::InsufficientData(
            "path does not cover the second half of the run".into(),
        ));
    }
    Ok(PersistenceReport {
        origin_min,
        path_min,
        inner_half_min: inner_half,
        inner_09_min: inner_09,
        eps0,
        window: (t_lo, t_end),
        snapshots_used: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Grid;
    use crate::speed::minimize_speed;

    fn gaussian() -> KernelSpec {
        KernelSpec::gaussian(1.0, 1.0).unwrap()
    }

    fn reference() -> (KernelSpec, Coefficient, Nonlinearity, SpeedCurve) {
        let k = gaussian();
        let mu = Coefficient::constant(2.0);
        let nl = Nonlinearity::logistic(mu.clone()).unwrap();
        let curve = minimize_speed(&k, 2.0, 16).unwrap();
        (k, mu, nl, curve)
    }

    #[test]
    fn supersolution_residual_nonnegative() {
        let (k, mu, nl, curve) = reference();
        let cand = CandidateSolution::supersolution_exp(5.0, 2.0, &curve, &mu).unwrap();
        let params = ResidualParams {
            t_lo: 0.0,
            t_hi: 8.0,
            xi_lo: -2.0,
            xi_hi: 40.0,
            nt: 40,
            nx: 300,
        };
        let report = residual(&k, &nl, &cand, &params).unwrap();
        assert_eq!(report.status, CertStatus::Certified, "{report:?}");
        assert!(report.min_signed_residual >= -report.tolerance);
        assert!(report.n_samples >= 10_000);
        // For the logistic equation the residual is exactly μ w²; any
        // negative reading is quadrature noise in the far tail.
        assert!(report.min_signed_residual >= -2.0 * report.max_quadrature_error);
        assert!(report.max_signed_residual > 0.1);
    }

    #[test]
    fn supersolution_dominates_initial_data() {
        let (_, mu, _, curve) = reference();
        let init = InitialData::compact_bump(10.0, 0.5);
        let amp = dominating_amplitude(&init, curve.lambda_star, -20.0, 60.0);
        let cand =
            CandidateSolution::supersolution_exp(amp, curve.lambda_star, &curve, &mu).unwrap();
        for i in 0..=400 {
            let x = -20.0 + 80.0 * i as f64 / 400.0;
            assert!(cand.value(0.0, x) >= init.evaluate(x) - 1e-12);
        }
    }

    #[test]
    fn zero_function_zero_residual() {
        let (k, _, _nl, curve) = reference();
        let mu = Coefficient::constant(2.0);
        // A two-exp candidate sampled left of its support is identically 0;
        // the residual operator must see plain zeros there.
        let cand = CandidateSolution::subsolution_two_exp(
            &k,
            0.6,
            0.3,
            Adjuster::Zero,
            0.0,
            4.0,
            &mu,
        )
        .unwrap();
        let _ = curve;
        assert_eq!(cand.value(1.0, cand.center(1.0)), 0.0);
        assert_eq!(cand.dt_value(1.0, cand.center(1.0)), 0.0);
    }

    #[test]
    fn cosine_witness_found_for_reference() {
        let (k, _, nl, curve) = reference();
        let gamma = 0.9 * curve.lambda_star;
        let (cand, search) = search_cosine_witness(&k, &nl, &curve, gamma).unwrap();
        assert_eq!(search.report.status, CertStatus::Certified);
        match &cand {
            CandidateSolution::SubsolutionCosine { speed, .. } => {
                assert!(*speed > 0.0 && *speed < curve.c_star);
            }
            _ => panic!("wrong candidate kind"),
        }
        // Scale bound: 0 <= w <= η e^{sup|a|}.
        let amp = cand.amplitude();
        for i in 0..200 {
            let x = cand.center(1.3) - 30.0 + i as f64 * 0.3;
            let w = cand.value(1.3, x);
            assert!(w >= 0.0 && w <= amp + 1e-12);
        }
    }

    #[test]
    fn two_exp_witness_found_for_reference() {
        let (k, _, nl, curve) = reference();
        let lambda = 0.5 * curve.lambda_star;
        let (cand, search) = search_two_exp_witness(&k, &nl, &curve, lambda).unwrap();
        assert_eq!(search.report.status, CertStatus::Certified);
        // Positivity region: w > 0 exactly for ξ > (B0+B1)/h.
        if let CandidateSolution::SubsolutionTwoExp { h, b0, b1, .. } = &cand {
            let xi_cut = (b0 + b1) / h;
            let c = cand.center(0.0);
            assert_eq!(cand.value(0.0, c + xi_cut - 0.01), 0.0);
            assert!(cand.value(0.0, c + xi_cut + 0.1) > 0.0);
        } else {
            panic!("wrong candidate kind");
        }
    }

    #[test]
    fn perturbed_two_exp_violates() {
        let (k, mu, _, curve) = reference();
        // Steep nonlinearity and the gap constant collapsed to zero: the
        // quadratic term overwhelms the margin and the certificate fails.
        let nl_steep = Nonlinearity::logistic_h(mu.clone(), 4.0).unwrap();
        let lambda = 0.5 * curve.lambda_star;
        let h = 0.5 * lambda.min(curve.lambda_star - lambda);
        let cand = CandidateSolution::subsolution_two_exp(
            &k,
            lambda,
            h,
            Adjuster::Zero,
            0.0,
            0.0,
            &mu,
        )
        .unwrap();
        let params = ResidualParams {
            t_lo: 0.0,
            t_hi: 5.0,
            xi_lo: 0.0,
            xi_hi: 40.0 / lambda,
            nt: 16,
            nx: 640,
        };
        let report = residual(&k, &nl_steep, &cand, &params).unwrap();
        assert_eq!(report.status, CertStatus::Violated, "{report:?}");
        // The witness point is reported with a genuinely positive residual.
        assert!(report.extremum.2 > report.tolerance);
    }

    #[test]
    fn comparison_ordered_pairs_hold() {
        let (k, _, nl, _) = reference();
        let grid = Grid::new(-40.0, 60.0, 1024).unwrap();
        for (lo, hi) in random_ordered_pairs(42, 6, -30.0, 40.0) {
            let report = comparison_test(&k, &nl, &lo, &hi, grid, 5.0, 0.05, 10).unwrap();
            assert!(report.pass, "violation {}", report.max_violation);
        }
    }

    #[test]
    fn comparison_rejects_unordered() {
        let (k, _, nl, _) = reference();
        let grid = Grid::new(-40.0, 60.0, 1024).unwrap();
        let a = InitialData::compact_bump(10.0, 0.6);
        let b = InitialData::compact_bump(10.0, 0.3);
        assert!(matches!(
            comparison_test(&k, &nl, &a, &b, grid, 1.0, 0.05, 10),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn positivity_spreads_beyond_support() {
        let (k, _, nl, _) = reference();
        let grid = Grid::new(-60.0, 80.0, 1024).unwrap();
        let init = InitialData::compact_bump(6.0, 0.5);
        let report = positivity_test(&k, &nl, &init, grid, 1.0, 0.05).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(!report.skipped);
        let (r_lo, r_hi) = report.reachable.unwrap();
        let (s_lo, s_hi) = report.initial_support.unwrap();
        assert!(r_lo < s_lo && r_hi > s_hi);

        // t = 0 degenerates to the initial support.
        let report0 = positivity_test(&k, &nl, &init, grid, 0.0, 0.05).unwrap();
        assert!(report0.pass);
        assert_eq!(report0.initial_support, report0.reachable);
    }

    #[test]
    fn persistence_on_reference_run() {
        use crate::dynamics::{run, SnapshotRecorder};
        use crate::fronts::FrontTracker;

        let (k, _, nl, _) = reference();
        let grid = Grid::new(-60.0, 120.0, 1400).unwrap();
        let init = InitialData::compact_bump(10.0, 0.5);
        let mut snaps = SnapshotRecorder::default();
        let mut tracker = FrontTracker::new(&[0.5], grid.x_max - 45.0);
        let (_, _summary) = run(
            &k,
            &nl,
            &init,
            grid,
            20.0,
            0.05,
            20,
            &mut [&mut snaps, &mut tracker],
        )
        .unwrap();
        let report =
            persistence_diagnostics(&snaps.snapshots, tracker.trace(0.5).unwrap(), 0.1).unwrap();
        assert!(report.origin_min >= 0.5, "{report:?}");
        assert!(report.path_min >= 0.4, "{report:?}");
        assert!(report.inner_half_min >= 0.5, "{report:?}");
        assert!(report.inner_09_min >= 0.4, "{report:?}");
    }
}
