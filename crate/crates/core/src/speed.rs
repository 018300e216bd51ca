//! The speed functional and its minimization.
//!
//! For λ in (0, σ(K)) the instantaneous speed is c(λ)(t) = (L(λ) + μ(t))/λ
//! and its least mean is ⌊c(λ)⌋ = (L(λ) + ⌊μ⌋)/λ. The rightward spreading
//! speed for fast-decaying data is c* = inf_λ ⌊c(λ)⌋, attained at λ*, with
//! the interior-minimizer identity c* = ∫ K(y) e^{λ*y} y dy.

use serde::{Deserialize, Serialize};

use crate::env::{Coefficient, LeastMeanEstimate};
use crate::error::{Error, Result};
use crate::kernel::{KernelSpec, MinorantKernel};
use crate::quad;

/// Scan grid size used to bracket the minimum before golden-section.
const SCAN_POINTS: usize = 64;
/// Golden-section terminates at this bracket width.
const GOLDEN_WIDTH: f64 = 1e-8;
/// A minimizer closer than this to the scan's right edge is not interior.
const INTERIOR_MARGIN: f64 = 1e-4;
/// Hard cap on the λ scan when σ(K) = ∞.
const LAMBDA_CAP: f64 = 50.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpeedCurve {
    pub kernel: KernelSpec,
    pub mu_least_mean: f64,
    /// (λ, ⌊c(λ)⌋) samples on a log-spaced grid.
    pub samples: Vec<(f64, f64)>,
    pub lambda_star: f64,
    pub c_star: f64,
    /// True when λ* lies strictly inside (0, σ(K)); the spreading
    /// predictions of this crate all require it.
    pub star_interior: bool,
}

/// c(λ)(t) = (L(λ) + μ(t))/λ.
pub fn c_lambda_t(kernel: &KernelSpec, mu: &Coefficient, lambda: f64, t: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    Ok((kernel.big_l(lambda)? + mu.eval(t)?) / lambda)
}

/// ⌊c(λ)⌋ = (L(λ) + ⌊μ⌋)/λ. Requires ⌊μ⌋ > K̄.
pub fn least_mean_speed(kernel: &KernelSpec, mu_least_mean: f64, lambda: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let kbar = kernel.mass();
    if mu_least_mean <= kbar {
        return Err(Error::AssumptionViolation(format!(
            "least mean of the growth rate must exceed the kernel mass: {mu_least_mean} <= {kbar}"
        )));
    }
    Ok((kernel.big_l(lambda)? + mu_least_mean) / lambda)
}

fn scan_edges(kernel: &KernelSpec) -> (f64, f64) {
    let sigma = kernel.abscissa();
    let hi = if sigma.is_finite() { sigma * (1.0 - 1e-6) } else { LAMBDA_CAP };
    (1e-4, hi)
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > GOLDEN_WIDTH {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimize λ ↦ ⌊c(λ)⌋ over (0, σ(K)): log-spaced bracketing scan followed
/// by golden-section. The returned curve carries `n_samples` grid values for
/// export and plotting.
pub fn minimize_speed(
    kernel: &KernelSpec,
    mu_least_mean: f64,
    n_samples: usize,
) -> Result<SpeedCurve> {
    let kbar = kernel.mass();
    if mu_least_mean <= kbar {
        return Err(Error::AssumptionViolation(format!(
            "least mean of the growth rate must exceed the kernel mass: {mu_least_mean} <= {kbar}"
        )));
    }
    let (lo, hi) = scan_edges(kernel);
    let f = |lambda: f64| -> f64 {
        match least_mean_speed(kernel, mu_least_mean, lambda) {
            Ok(v) => v,
            Err(_) => f64::INFINITY,
        }
    };

    // Bracket on a log-spaced grid.
    let ratio = (hi / lo).ln() / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| lo * (ratio * i as f64).exp()).collect();
    let vals: Vec<f64> = grid.iter().map(|&l| f(l)).collect();
    let i_min = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty scan");

    let a = if i_min == 0 { grid[0] } else { grid[i_min - 1] };
    let b = if i_min == SCAN_POINTS - 1 { grid[SCAN_POINTS - 1] } else { grid[i_min + 1] };
    let (lambda_star, c_star) = golden_section(&f, a, b);

    let star_interior = hi - lambda_star > INTERIOR_MARGIN;
    if star_interior {
        // Interior minimizer identity: c* equals the tilted first moment.
        let moment = kernel.mgf_derivative(lambda_star)?;
        debug_assert!(
            (c_star - moment).abs() <= 1e-6 * c_star.abs().max(1e-12),
            "interior identity violated: c*={c_star}, M'(λ*)={moment}"
        );
    }

    let n = n_samples.max(2);
    let sratio = (hi / lo).ln() / (n - 1) as f64;
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let l = lo * (sratio * i as f64).exp();
            (l, f(l))
        })
        .collect();

    Ok(SpeedCurve {
        kernel: kernel.clone(),
        mu_least_mean,
        samples,
        lambda_star,
        c_star,
        star_interior,
    })
}

impl SpeedCurve {
    /// Envelope speed c⁺(λ)(t): the curve value at min(λ, λ*).
    pub fn c_plus(&self, mu: &Coefficient, lambda: f64, t: f64) -> Result<f64> {
        if !self.star_interior {
            return Err(Error::Unsupported(
                "speed envelope undefined: minimizer sits at the abscissa of convergence".into(),
            ));
        }
        if lambda <= 0.0 {
            return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
        }
        let l_eff = if lambda >= self.lambda_star { self.lambda_star } else { lambda };
        c_lambda_t(&self.kernel, mu, l_eff, t)
    }

    /// ∫_0^t c⁺(λ)(s) ds in closed form via the coefficient's integral.
    pub fn c_plus_integral(&self, mu: &Coefficient, lambda: f64, t: f64) -> Result<f64> {
        if !self.star_interior {
            return Err(Error::Unsupported(
                "speed envelope undefined: minimizer sits at the abscissa of convergence".into(),
            ));
        }
        if lambda <= 0.0 {
            return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
        }
        let l_eff = if lambda >= self.lambda_star { self.lambda_star } else { lambda };
        Ok((self.kernel.big_l(l_eff)? * t + mu.integral(0.0, t)?) / l_eff)
    }
}

/// Truncated speed c_{R,B}(γ) = (2R/π) ∫_{-B}^{B} K(z) e^{γz} sin(πz/2R) dz.
/// Converges to the tilted first moment as R, B → ∞, hence to c* as γ → λ*.
pub fn c_truncated(kernel: &KernelSpec, gamma: f64, r: f64, b: f64) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::Domain(format!("gamma must be nonnegative, got {gamma}")));
    }
    let sigma = kernel.abscissa();
    if sigma.is_finite() && gamma > sigma * (1.0 - 1e-6) {
        return Err(Error::Domain(format!("gamma = {gamma} too close to the abscissa {sigma}")));
    }
    if !(r > 0.0 && b > 0.0) {
        return Err(Error::Domain("R and B must be positive".into()));
    }
    let (w_lo, w_hi) = kernel.weighted_support(gamma);
    let lo = w_lo.max(-b);
    let hi = w_hi.min(b);
    let factor = 2.0 * r / std::f64::consts::PI;
    let q = quad::integrate(
        |z| kernel.evaluate(z) * (gamma * z).exp() * (std::f64::consts::FRAC_PI_2 * z / r).sin(),
        lo,
        hi,
        quad::DEFAULT_TOL,
    );
    Ok(factor * q.value)
}

/// Autonomous minorant speed c₀ = inf_{λ>0} (Mₖ(λ) − k̄ + m)/λ for the
/// symmetric compactly supported minorant and a constant growth rate m > 0.
pub fn c_autonomous(minorant: &MinorantKernel, m: f64) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::InvalidInput(format!("m must be positive, got {m}")));
    }
    let f = |lambda: f64| (minorant.mgf(lambda) - minorant.mass() + m) / lambda;

    // The objective blows up at both ends; bracket on a log grid.
    let lo = 1e-6;
    let hi = 200.0 / minorant.delta.max(1e-3);
    let n = 128;
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    let mut i_best = 0;
    let mut v_best = f64::INFINITY;
    for (i, &l) in grid.iter().enumerate() {
        let v = f(l);
        if v < v_best {
            v_best = v;
            i_best = i;
        }
    }
    let a = grid[i_best.saturating_sub(1)];
    let b = grid[(i_best + 1).min(n - 1)];
    let (_, c0) = golden_section(&f, a, b);
    Ok(c0)
}

/// Pass/fail record for one hypothesis of the standing assumptions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub checks: Vec<AssumptionCheck>,
    pub all_pass: bool,
    pub kbar: f64,
    pub k_at_zero: f64,
    pub sigma: Option<f64>,
    pub mu_least_mean: f64,
    pub mu_inf_bound: f64,
    pub lambda_star: Option<f64>,
    pub star_interior: Option<bool>,
}

/// Check the kernel hypotheses, the KPP coefficient hypotheses, and the
/// interior-minimizer requirement; a report, never an error.
pub fn check_assumptions(
    kernel: &KernelSpec,
    mu: &Coefficient,
    estimate: &LeastMeanEstimate,
) -> AssumptionReport {
    let mut checks = Vec::new();
    let kbar = kernel.mass();
    let k0 = kernel.evaluate(0.0);
    let sigma = kernel.abscissa();
    let (mu_lo, _) = mu.bounds();

    // Kernel: nonnegative, continuous, integrable (sampled on the effective
    // support; the families are continuous by construction).
    let (s_lo, s_hi) = kernel.effective_support(1e-12);
    let mut nonneg = true;
    for i in 0..=2048 {
        let y = s_lo + (s_hi - s_lo) * i as f64 / 2048.0;
        if kernel.evaluate(y) < 0.0 {
            nonneg = false;
        }
    }
    checks.push(AssumptionCheck {
        name: "kernel_nonnegative_integrable".into(),
        pass: nonneg && kbar.is_finite() && kbar > 0.0,
        detail: format!("mass = {kbar}"),
    });
    checks.push(AssumptionCheck {
        name: "kernel_right_exponential_moment".into(),
        pass: sigma > 0.0,
        detail: format!("sigma = {sigma}"),
    });
    checks.push(AssumptionCheck {
        name: "kernel_positive_at_origin".into(),
        pass: k0 > 0.0,
        detail: format!("K(0) = {k0}"),
    });
    checks.push(AssumptionCheck {
        name: "mu_uniformly_continuous_positive".into(),
        pass: mu.is_uniformly_continuous() && mu_lo > 0.0,
        detail: format!(
            "inf mu >= {mu_lo}, uniformly continuous = {}",
            mu.is_uniformly_continuous()
        ),
    });
    let f4 = estimate.value > kbar;
    checks.push(AssumptionCheck {
        name: "least_mean_exceeds_mass".into(),
        pass: f4,
        detail: format!("least mean {} vs mass {kbar}", estimate.value),
    });

    let (lambda_star, star_interior) = if f4 {
        match minimize_speed(kernel, estimate.value, 2) {
            Ok(curve) => {
                checks.push(AssumptionCheck {
                    name: "minimizer_interior".into(),
                    pass: curve.star_interior,
                    detail: format!("lambda_star = {}, sigma = {sigma}", curve.lambda_star),
                });
                (Some(curve.lambda_star), Some(curve.star_interior))
            }
            Err(e) => {
                checks.push(AssumptionCheck {
                    name: "minimizer_interior".into(),
                    pass: false,
                    detail: format!("minimization failed: {e}"),
                });
                (None, Some(false))
            }
        }
    } else {
        checks.push(AssumptionCheck {
            name: "minimizer_interior".into(),
            pass: false,
            detail: "not evaluated: least mean does not exceed the mass".into(),
        });
        (None, None)
    };

    let all_pass = checks.iter().all(|c| c.pass);
    AssumptionReport {
        checks,
        all_pass,
        kbar,
        k_at_zero: k0,
        sigma: if sigma.is_finite() { Some(sigma) } else { None },
        mu_least_mean: estimate.value,
        mu_inf_bound: mu_lo,
        lambda_star,
        star_interior,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> KernelSpec {
        KernelSpec::gaussian(1.0, 1.0).unwrap()
    }

    /// Dense-grid brute-force minimizer, independent of the golden-section
    /// path; 1e5 log-spaced points.
    fn grid_oracle(kernel: &KernelSpec, mu_lm: f64) -> (f64, f64) {
        let n = 100_000;
        let sigma = kernel.abscissa();
        let hi = if sigma.is_finite() { sigma * (1.0 - 1e-6) } else { 10.0 };
        let lo = 1e-3;
        let ratio = (hi / lo).ln() / (n - 1) as f64;
        let mut best = (f64::NAN, f64::INFINITY);
        for i in 0..n {
            let l = lo * (ratio * i as f64).exp();
            let v = least_mean_speed(kernel, mu_lm, l).unwrap();
            if v < best.1 {
                best = (l, v);
            }
        }
        best
    }

    #[test]
    fn c_lambda_t_examples() {
        let k = gaussian();
        let mu = Coefficient::constant(2.0);
        let v = c_lambda_t(&k, &mu, 1.0, 0.0).unwrap();
        assert!((v - (0.5f64.exp() + 1.0)).abs() < 1e-12);
        // Time independence for constant coefficients.
        assert_eq!(v, c_lambda_t(&k, &mu, 1.0, 57.0).unwrap());
        // Algebraic identity λ·c − μ(t) = L(λ) for any time.
        let p = Coefficient::periodic(2.0, vec![(0.5, 3.0, 0.1)]);
        for t in [0.0, 0.3, 2.7] {
            let c = c_lambda_t(&k, &p, 1.3, t).unwrap();
            let l = 1.3 * c - p.eval(t).unwrap();
            assert!((l - k.big_l(1.3).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn least_mean_speed_f4_gate() {
        let k = gaussian();
        assert!(matches!(least_mean_speed(&k, 0.5, 1.0), Err(Error::AssumptionViolation(_))));
        let v = least_mean_speed(&k, 2.0, 1.0).unwrap();
        assert!((v - (0.5f64.exp() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn least_mean_speed_diverges_at_zero() {
        let k = gaussian();
        let v_small = least_mean_speed(&k, 2.0, 1e-3).unwrap();
        let v_mid = least_mean_speed(&k, 2.0, 1e-1).unwrap();
        assert!(v_small > 10.0 * v_mid);
        // ~ ⌊μ⌋/λ as λ → 0+.
        assert!((v_small * 1e-3 - 2.0).abs() < 1e-2);
    }

    #[test]
    fn minimize_gaussian_matches_grid_oracle() {
        let k = gaussian();
        let curve = minimize_speed(&k, 2.0, 64).unwrap();
        let (l_oracle, c_oracle) = grid_oracle(&k, 2.0);
        assert!(
            (curve.lambda_star - l_oracle).abs() < 1e-3,
            "{} vs {l_oracle}",
            curve.lambda_star
        );
        assert!((curve.c_star - c_oracle).abs() < 1e-6 * c_oracle);
        assert!(curve.star_interior);
        assert!(curve.c_star > 0.0);
        // Reference values for this configuration.
        assert!((curve.lambda_star - 1.216).abs() < 2e-3);
        assert!((curve.c_star - 2.545).abs() < 5e-3);
        // Identity c* = λ* e^{λ*²/2} for the unit Gaussian.
        let ident = curve.lambda_star * (0.5 * curve.lambda_star * curve.lambda_star).exp();
        assert!((curve.c_star - ident).abs() < 1e-6 * curve.c_star);
    }

    #[test]
    fn minimize_tent_matches_grid_oracle() {
        let k = KernelSpec::tent(1.0, 1.0).unwrap();
        let curve = minimize_speed(&k, 2.0, 64).unwrap();
        let (l_oracle, c_oracle) = grid_oracle(&k, 2.0);
        assert!((curve.lambda_star - l_oracle).abs() < 1e-3);
        assert!((curve.c_star - c_oracle).abs() < 1e-6 * c_oracle);
        assert!(curve.star_interior);
        let ident = k.mgf_derivative(curve.lambda_star).unwrap();
        assert!((curve.c_star - ident).abs() < 1e-6 * curve.c_star);
    }

    #[test]
    fn curve_decreasing_left_of_star() {
        let k = gaussian();
        let curve = minimize_speed(&k, 2.0, 64).unwrap();
        let n = 200;
        let mut prev = f64::INFINITY;
        for i in 1..n {
            let l = 0.01 + (curve.lambda_star - 0.02) * i as f64 / n as f64;
            let v = least_mean_speed(&k, 2.0, l).unwrap();
            assert!(v < prev + 1e-8, "not decreasing at λ = {l}");
            prev = v;
        }
        // C¹ flatness at the interior minimizer.
        let h = 1e-4;
        let d = (least_mean_speed(&k, 2.0, curve.lambda_star + h).unwrap()
            - least_mean_speed(&k, 2.0, curve.lambda_star - h).unwrap())
            / (2.0 * h);
        assert!(d.abs() < 1e-4, "derivative at minimizer = {d}");
    }

    #[test]
    fn c_plus_branches() {
        let k = gaussian();
        let mu = Coefficient::constant(2.0);
        let curve = minimize_speed(&k, 2.0, 16).unwrap();
        let ls = curve.lambda_star;
        let at_star = c_lambda_t(&k, &mu, ls, 0.0).unwrap();
        assert_eq!(curve.c_plus(&mu, 2.0 * ls, 0.0).unwrap(), at_star);
        assert_eq!(curve.c_plus(&mu, ls, 0.0).unwrap(), at_star);
        let below = curve.c_plus(&mu, 0.5 * ls, 0.0).unwrap();
        assert_eq!(below, c_lambda_t(&k, &mu, 0.5 * ls, 0.0).unwrap());
        assert!(below > curve.c_star);
    }

    #[test]
    fn c_plus_integral_consistent() {
        let k = gaussian();
        let mu = Coefficient::periodic(2.0, vec![(1.0, 2.0 * std::f64::consts::PI, 0.0)]);
        let curve = minimize_speed(&k, 2.0, 16).unwrap();
        // Numerically integrate c_plus and compare with the closed form.
        let t_end = 3.7;
        let n = 40_000;
        let mut acc = 0.0;
        for i in 0..n {
            let t = t_end * (i as f64 + 0.5) / n as f64;
            acc += curve.c_plus(&mu, 2.0, t).unwrap() * t_end / n as f64;
        }
        let closed = curve.c_plus_integral(&mu, 2.0, t_end).unwrap();
        assert!((acc - closed).abs() < 1e-6, "{acc} vs {closed}");
    }

    #[test]
    fn c_truncated_odd_integrand_zero() {
        let k = gaussian();
        let v = c_truncated(&k, 0.0, 7.0, 5.0).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn c_truncated_converges_to_c_star() {
        let k = gaussian();
        let curve = minimize_speed(&k, 2.0, 16).unwrap();
        let v = c_truncated(&k, curve.lambda_star, 50.0, 50.0).unwrap();
        assert!((v - curve.c_star).abs() < 0.02 * curve.c_star, "{v} vs {}", curve.c_star);

        // Doubling R at fixed B moves the value toward the tilted moment.
        let moment = quad::integrate(
            |z| k.evaluate(z) * (curve.lambda_star * z).exp() * z,
            -12.0,
            14.0,
            1e-12,
        )
        .value;
        let v1 = c_truncated(&k, curve.lambda_star, 25.0, 12.0).unwrap();
        let v2 = c_truncated(&k, curve.lambda_star, 50.0, 12.0).unwrap();
        assert!((v2 - moment).abs() < (v1 - moment).abs());
    }

    #[test]
    fn c_truncated_monotone_ladder() {
        let k = gaussian();
        let curve = minimize_speed(&k, 2.0, 16).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for (r, b) in [(12.5, 12.5), (25.0, 25.0), (50.0, 50.0), (100.0, 100.0)] {
            let v = c_truncated(&k, curve.lambda_star, r, b).unwrap();
            assert!(v >= prev - 1e-6, "ladder not monotone at R=B={r}: {v} < {prev}");
            prev = v;
        }
        assert!(prev <= curve.c_star + 1e-6);
    }

    #[test]
    fn c_autonomous_positive_and_monotone() {
        let g = gaussian();
        let minorant = g.minorant(1.0).unwrap();
        let c1 = c_autonomous(&minorant, 1.0).unwrap();
        assert!(c1 > 0.0);
        let c2 = c_autonomous(&minorant, 2.0).unwrap();
        assert!(c2 >= c1);

        // Brute-force grid oracle for the same objective.
        let f = |l: f64| (minorant.mgf(l) - minorant.mass() + 1.0) / l;
        let mut best = f64::INFINITY;
        for i in 1..200_000 {
            let l = i as f64 * 1e-3;
            best = best.min(f(l));
        }
        assert!((c1 - best).abs() < 1e-5, "{c1} vs oracle {best}");
    }

    #[test]
    fn assumption_report_pass_and_fail() {
        let k = gaussian();
        let mu = Coefficient::constant(2.0);
        let est = mu.least_mean(64.0, 8.0).unwrap();
        let report = check_assumptions(&k, &mu, &est);
        assert!(report.all_pass, "{:?}", report.checks);

        let weak = Coefficient::constant(0.5);
        let est = weak.least_mean(64.0, 8.0).unwrap();
        let report = check_assumptions(&k, &weak, &est);
        assert!(!report.all_pass);
        let f4 = report.checks.iter().find(|c| c.name == "least_mean_exceeds_mass").unwrap();
        assert!(!f4.pass);
    }

    #[test]
    fn boundary_minimizer_reported_not_fatal() {
        // A very narrow tent pushes the true minimizer beyond the λ scan cap,
        // so the result is flagged non-interior and predictions refuse to run.
        let k = KernelSpec::tent(0.05, 1.0).unwrap();
        let curve = minimize_speed(&k, 2.0, 16).unwrap();
        assert!(!curve.star_interior);
        let mu = Coefficient::constant(2.0);
        assert!(matches!(curve.c_plus(&mu, 0.05, 0.0), Err(Error::Unsupported(_))));

        // Finite abscissa with a diverging tilted mass: the minimizer stays
        // interior however close the least mean sits to the mass.
        let l = KernelSpec::laplace(1.0, 0.1, 1.0).unwrap();
        let curve = minimize_speed(&l, 1.05, 16).unwrap();
        assert!(curve.star_interior);
        assert!(curve.lambda_star < l.abscissa());
    }

    #[test]
    fn speed_scaling_homogeneity() {
        let k1 = gaussian();
        let k2 = KernelSpec::gaussian(1.0, 2.0).unwrap();
        let v1 = least_mean_speed(&k1, 2.0, 0.9).unwrap();
        let v2 = least_mean_speed(&k2, 4.0, 0.9).unwrap();
        assert!((v2 - 2.0 * v1).abs() < 1e-12);
    }
}
