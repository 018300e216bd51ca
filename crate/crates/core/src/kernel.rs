//! Dispersal kernels and their integral transforms.
//!
//! A kernel K is a nonnegative, continuous, integrable jump density with at
//! least one finite right exponential moment. The module computes the mass
//! K̄, the abscissa of convergence σ(K), the exponentially weighted integrals
//! M(λ) = ∫ K e^{λy} dy and L(λ) = M(λ) − K̄, the first moment of the tilted
//! kernel, and a symmetric compactly supported minorant used to bound the
//! dynamics from below near the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Relative threshold below which the tilted integrand is truncated.
const TRUNC_REL: f64 = 1e-16;
/// λ must stay this fraction away from a finite abscissa.
const ABSCISSA_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum KernelFamily {
    /// Normal density with the given variance.
    Gaussian { variance: f64 },
    /// Two-sided exponential, rate `rate_left` for y < 0 and `rate_right`
    /// for y >= 0, normalized to unit mass at scale 1.
    Laplace { rate_left: f64, rate_right: f64 },
    /// Triangular bump on [-halfwidth, halfwidth] with apex 1 at scale 1.
    Tent { halfwidth: f64 },
    /// Piecewise-linear interpolation of samples on a uniform y grid,
    /// zero outside the sampled range.
    Tabulated { y_min: f64, dy: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KernelSpec {
    #[serde(flatten)]
    pub family: KernelFamily,
    pub scale: f64,
}

impl KernelSpec {
    pub fn gaussian(variance: f64, scale: f64) -> Result<Self> {
        let k = KernelSpec { family: KernelFamily::Gaussian { variance }, scale };
        k.validate()?;
        Ok(k)
    }

    pub fn laplace(rate_left: f64, rate_right: f64, scale: f64) -> Result<Self> {
        let k = KernelSpec { family: KernelFamily::Laplace { rate_left, rate_right }, scale };
        k.validate()?;
        Ok(k)
    }

    pub fn tent(halfwidth: f64, scale: f64) -> Result<Self> {
        let k = KernelSpec { family: KernelFamily::Tent { halfwidth }, scale };
        k.validate()?;
        Ok(k)
    }

    pub fn tabulated(y_min: f64, dy: f64, values: Vec<f64>, scale: f64) -> Result<Self> {
        let k = KernelSpec { family: KernelFamily::Tabulated { y_min, dy, values }, scale };
        k.validate()?;
        Ok(k)
    }

    /// Parse a two-column CSV `y,value` with a uniform y grid.
    pub fn tabulated_from_csv(text: &str, scale: f64) -> Result<Self> {
        let mut ys = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',');
            let (y, v) = match (cols.next(), cols.next()) {
                (Some(y), Some(v)) => (y.trim(), v.trim()),
                _ => {
                    return Err(Error::InvalidKernel(format!(
                        "csv line {}: expected two columns",
                        lineno + 1
                    )))
                }
            };
            // Tolerate a header row.
            if lineno == 0 && y.parse::<f64>().is_err() {
                continue;
            }
            let y: f64 = y
                .parse()
                .map_err(|_| Error::InvalidKernel(format!("csv line {}: bad y", lineno + 1)))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::InvalidKernel(format!("csv line {}: bad value", lineno + 1)))?;
            ys.push(y);
            vs.push(v);
        }
        if ys.len() < 2 {
            return Err(Error::InvalidKernel("need at least two samples".into()));
        }
        let dy = ys[1] - ys[0];
        for w in ys.windows(2) {
            if ((w[1] - w[0]) - dy).abs() > 1e-9 * dy.abs().max(1.0) {
                return Err(Error::InvalidKernel("sample grid is not uniform".into()));
            }
        }
        Self::tabulated(ys[0], dy, vs, scale)
    }

    /// Two-column CSV of the tabulated samples.
    pub fn tabulated_to_csv(&self) -> Result<String> {
        match &self.family {
            KernelFamily::Tabulated { y_min, dy, values } => {
                let mut out = String::from("y,value\n");
                for (i, v) in values.iter().enumerate() {
                    out.push_str(&format!("{},{}\n", y_min + i as f64 * dy, v * self.scale));
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported("csv export only for tabulated kernels".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidKernel(format!("scale must be positive, got {}", self.scale)));
        }
        match &self.family {
            KernelFamily::Gaussian { variance } => {
                if !(*variance > 0.0 && variance.is_finite()) {
                    return Err(Error::InvalidKernel(format!("variance must be positive, got {variance}")));
                }
            }
            KernelFamily::Laplace { rate_left, rate_right } => {
                if !(*rate_left > 0.0 && rate_left.is_finite()) {
                    return Err(Error::InvalidKernel(format!("rate_left must be positive, got {rate_left}")));
                }
                if !(*rate_right > 0.0 && rate_right.is_finite()) {
                    // rate_right is the abscissa of convergence; zero means
                    // no right exponential moment at all.
                    return Err(Error::AssumptionViolation(format!(
                        "kernel has no right exponential moment (rate_right = {rate_right})"
                    )));
                }
            }
            KernelFamily::Tent { halfwidth } => {
                if !(*halfwidth > 0.0 && halfwidth.is_finite()) {
                    return Err(Error::InvalidKernel(format!("halfwidth must be positive, got {halfwidth}")));
                }
            }
            KernelFamily::Tabulated { y_min, dy, values } => {
                if values.len() < 2 {
                    return Err(Error::InvalidKernel("tabulated kernel needs >= 2 samples".into()));
                }
                if !(*dy > 0.0 && dy.is_finite()) {
                    return Err(Error::InvalidKernel(format!("dy must be positive, got {dy}")));
                }
                if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::InvalidKernel("samples must be finite and nonnegative".into()));
                }
                let y_max = y_min + (values.len() - 1) as f64 * dy;
                if !(*y_min <= 0.0 && 0.0 <= y_max) {
                    return Err(Error::InvalidKernel("sample range must contain y = 0".into()));
                }
                if self.evaluate(0.0) <= 0.0 {
                    return Err(Error::InvalidKernel("K(0) must be positive".into()));
                }
                if self.mass() <= 0.0 {
                    return Err(Error::InvalidKernel("kernel mass must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// K(y).
    pub fn evaluate(&self, y: f64) -> f64 {
        let base = match &self.family {
            KernelFamily::Gaussian { variance } => {
                let v = *variance;
                (-0.5 * y * y / v).exp() / (2.0 * std::f64::consts::PI * v).sqrt()
            }
            KernelFamily::Laplace { rate_left, rate_right } => {
                let (a, b) = (*rate_left, *rate_right);
                let n = a * b / (a + b);
                if y < 0.0 {
                    n * (a * y).exp()
                } else {
                    n * (-b * y).exp()
                }
            }
            KernelFamily::Tent { halfwidth } => (1.0 - y.abs() / halfwidth).max(0.0),
            KernelFamily::Tabulated { y_min, dy, values } => {
                let s = (y - y_min) / dy;
                if s < 0.0 || s > (values.len() - 1) as f64 {
                    0.0
                } else {
                    let i = (s.floor() as usize).min(values.len() - 2);
                    let frac = s - i as f64;
                    values[i] * (1.0 - frac) + values[i + 1] * frac
                }
            }
        };
        self.scale * base
    }

    /// K̄ = ∫ K. Closed form for analytic families, trapezoid (exact for the
    /// piecewise-linear interpolant) for tabulated data.
    pub fn mass(&self) -> f64 {
        let base = match &self.family {
            KernelFamily::Gaussian { .. } => 1.0,
            KernelFamily::Laplace { .. } => 1.0,
            KernelFamily::Tent { halfwidth } => *halfwidth,
            KernelFamily::Tabulated { dy, values, .. } => {
                let n = values.len();
                let inner: f64 = values[1..n - 1].iter().sum();
                dy * (inner + 0.5 * (values[0] + values[n - 1]))
            }
        };
        self.scale * base
    }

    /// Abscissa of convergence σ(K) = sup{γ > 0 : ∫ K e^{γy} < ∞}.
    pub fn abscissa(&self) -> f64 {
        match &self.family {
            KernelFamily::Laplace { rate_right, .. } => *rate_right,
            _ => f64::INFINITY,
        }
    }

    fn check_lambda(&self, lambda: f64) -> Result<()> {
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda must be nonnegative, got {lambda}")));
        }
        let sigma = self.abscissa();
        if sigma.is_finite() && lambda > sigma * (1.0 - ABSCISSA_GUARD) {
            return Err(Error::Domain(format!(
                "lambda = {lambda} too close to the abscissa of convergence {sigma}"
            )));
        }
        Ok(())
    }

    /// M(λ) = ∫ K(y) e^{λy} dy for 0 <= λ < σ(K).
    pub fn mgf(&self, lambda: f64) -> Result<f64> {
        self.check_lambda(lambda)?;
        let base = match &self.family {
            KernelFamily::Gaussian { variance } => (0.5 * lambda * lambda * variance).exp(),
            KernelFamily::Laplace { rate_left, rate_right } => {
                let (a, b) = (*rate_left, *rate_right);
                let n = a * b / (a + b);
                n * (1.0 / (a + lambda) + 1.0 / (b - lambda))
            }
            KernelFamily::Tent { halfwidth } => tent_mgf(*halfwidth, lambda),
            KernelFamily::Tabulated { .. } => {
                return Ok(self.mgf_quadrature(lambda)?.value);
            }
        };
        Ok(self.scale * base)
    }

    /// L(λ) = M(λ) − K̄; identically zero at λ = 0.
    pub fn big_l(&self, lambda: f64) -> Result<f64> {
        if lambda == 0.0 {
            self.check_lambda(lambda)?;
            return Ok(0.0);
        }
        Ok(self.mgf(lambda)? - self.mass())
    }

    /// ∫ K(y) e^{λy} y dy = M'(λ).
    pub fn mgf_derivative(&self, lambda: f64) -> Result<f64> {
        self.check_lambda(lambda)?;
        let base = match &self.family {
            KernelFamily::Gaussian { variance } => {
                lambda * variance * (0.5 * lambda * lambda * variance).exp()
            }
            KernelFamily::Laplace { rate_left, rate_right } => {
                let (a, b) = (*rate_left, *rate_right);
                let n = a * b / (a + b);
                n * (1.0 / ((b - lambda) * (b - lambda)) - 1.0 / ((a + lambda) * (a + lambda)))
            }
            KernelFamily::Tent { halfwidth } => tent_mgf_derivative(*halfwidth, lambda),
            KernelFamily::Tabulated { .. } => {
                let (lo, hi) = self.weighted_support(lambda);
                let r = quad::integrate(
                    |y| self.evaluate(y) * (lambda * y).exp() * y,
                    lo,
                    hi,
                    quad::DEFAULT_TOL,
                );
                return Ok(r.value);
            }
        };
        Ok(self.scale * base)
    }

    /// M(λ) by adaptive quadrature over the truncated weighted support.
    /// Regular path for tabulated kernels, cross-check for the closed forms.
    pub fn mgf_quadrature(&self, lambda: f64) -> Result<quad::QuadResult> {
        self.check_lambda(lambda)?;
        let (lo, hi) = self.weighted_support(lambda);
        Ok(quad::integrate(|y| self.evaluate(y) * (lambda * y).exp(), lo, hi, quad::DEFAULT_TOL))
    }

    /// Interval outside which K(y) e^{λy} is below `TRUNC_REL` of its peak.
    pub fn weighted_support(&self, lambda: f64) -> (f64, f64) {
        let drop = -TRUNC_REL.ln(); // ~36.8 e-foldings
        match &self.family {
            KernelFamily::Gaussian { variance } => {
                // Integrand peaks at y* = λ v with Gaussian shape of variance v.
                let v = *variance;
                let y_star = lambda * v;
                let half = (2.0 * v * drop).sqrt();
                (y_star - half, y_star + half)
            }
            KernelFamily::Laplace { rate_left, rate_right } => {
                let lo = -drop / (rate_left + lambda);
                let hi = drop / (rate_right - lambda);
                (lo, hi)
            }
            KernelFamily::Tent { halfwidth } => (-halfwidth, *halfwidth),
            KernelFamily::Tabulated { y_min, dy, values } => {
                (*y_min, y_min + (values.len() - 1) as f64 * dy)
            }
        }
    }

    /// Interval outside which K itself is below `rel` of its peak.
    pub fn effective_support(&self, rel: f64) -> (f64, f64) {
        let drop = -rel.ln();
        match &self.family {
            KernelFamily::Gaussian { variance } => {
                let half = (2.0 * variance * drop).sqrt();
                (-half, half)
            }
            KernelFamily::Laplace { rate_left, rate_right } => {
                (-drop / rate_left, drop / rate_right)
            }
            KernelFamily::Tent { halfwidth } => (-halfwidth, *halfwidth),
            KernelFamily::Tabulated { y_min, dy, values } => {
                (*y_min, y_min + (values.len() - 1) as f64 * dy)
            }
        }
    }

    /// Mirror image K(-y): swaps left and right tails.
    pub fn reflected(&self) -> Self {
        let family = match &self.family {
            KernelFamily::Laplace { rate_left, rate_right } => KernelFamily::Laplace {
                rate_left: *rate_right,
                rate_right: *rate_left,
            },
            KernelFamily::Tabulated { y_min, dy, values } => {
                let y_max = y_min + (values.len() - 1) as f64 * dy;
                let mut rev = values.clone();
                rev.reverse();
                KernelFamily::Tabulated { y_min: -y_max, dy: *dy, values: rev }
            }
            f => f.clone(),
        };
        KernelSpec { family, scale: self.scale }
    }

    /// Cosine minorant m·cos(πy/2δ) on [-δ, δ], where m = min K on [-δ, δ].
    pub fn minorant(&self, delta: f64) -> Result<MinorantKernel> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
        }
        const GRID: usize = 4096;
        let mut m = f64::INFINITY;
        for i in 0..=GRID {
            let y = -delta + 2.0 * delta * i as f64 / GRID as f64;
            let k = self.evaluate(y);
            if k <= 0.0 {
                return Err(Error::NoMinorant { delta });
            }
            m = m.min(k);
        }
        Ok(MinorantKernel::new(delta, m))
    }
}

fn tent_mgf(h: f64, lambda: f64) -> f64 {
    let x = lambda * h;
    if x.abs() < 1e-4 {
        // 2(cosh x - 1)/x^2 = 1 + x^2/12 + x^4/360 + ...
        h * (1.0 + x * x / 12.0 + x.powi(4) / 360.0)
    } else {
        2.0 * (x.cosh() - 1.0) / (lambda * lambda * h)
    }
}

fn tent_mgf_derivative(h: f64, lambda: f64) -> f64 {
    let x = lambda * h;
    if x.abs() < 1e-4 {
        // d/dλ of h(1 + (λh)^2/12 + (λh)^4/360)
        h * h * h * lambda * (1.0 / 6.0 + x * x / 90.0)
    } else {
        2.0 * x.sinh() / (lambda * lambda) - 4.0 * (x.cosh() - 1.0) / (lambda.powi(3) * h)
    }
}

/// Symmetric, continuous, compactly supported kernel k <= K with
/// supp k = [-δ, δ] and the profile m·cos(πy/2δ).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MinorantKernel {
    pub delta: f64,
    /// Apex value k(0) = min of K over [-δ, δ].
    pub amplitude: f64,
    /// Mass k̄ = 4δm/π.
    pub kbar: f64,
}

impl MinorantKernel {
    pub fn new(delta: f64, amplitude: f64) -> Self {
        let kbar = 4.0 * delta * amplitude / std::f64::consts::PI;
        MinorantKernel { delta, amplitude, kbar }
    }

    pub fn evaluate(&self, y: f64) -> f64 {
        if y.abs() >= self.delta {
            0.0
        } else {
            self.amplitude * (std::f64::consts::FRAC_PI_2 * y / self.delta).cos()
        }
    }

    pub fn mass(&self) -> f64 {
        self.kbar
    }

    /// ∫ k e^{λy} dy = 2 a m cosh(λδ) / (λ² + a²), a = π/2δ.
    pub fn mgf(&self, lambda: f64) -> f64 {
        let a = std::f64::consts::FRAC_PI_2 / self.delta;
        2.0 * a * self.amplitude * (lambda * self.delta).cosh() / (lambda * lambda + a * a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn evaluate_examples() {
        let tent = KernelSpec::tent(1.0, 1.0).unwrap();
        assert_eq!(tent.evaluate(0.0), 1.0);
        assert_eq!(tent.evaluate(2.0), 0.0);
        let tent2 = KernelSpec::tent(1.0, 3.0).unwrap();
        assert_eq!(tent2.evaluate(0.0), 3.0);

        let g = KernelSpec::gaussian(1.0, 1.0).unwrap();
        let expect = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!(rel_err(g.evaluate(0.0), expect) < 1e-15);
    }

    #[test]
    fn mass_closed_forms_match_quadrature() {
        for k in [
            KernelSpec::gaussian(1.0, 1.0).unwrap(),
            KernelSpec::gaussian(2.5, 0.7).unwrap(),
            KernelSpec::tent(1.0, 1.0).unwrap(),
            KernelSpec::tent(0.4, 2.0).unwrap(),
            KernelSpec::laplace(1.0, 3.0, 1.0).unwrap(),
            KernelSpec::laplace(0.5, 2.0, 1.3).unwrap(),
        ] {
            let q = k.mgf_quadrature(0.0).unwrap().value;
            assert!(rel_err(k.mass(), q) < 1e-9, "{:?}: {} vs {}", k.family, k.mass(), q);
        }
        assert!(rel_err(KernelSpec::gaussian(1.0, 1.0).unwrap().mass(), 1.0) < 1e-15);
        assert!(rel_err(KernelSpec::tent(1.0, 1.0).unwrap().mass(), 1.0) < 1e-15);
    }

    #[test]
    fn mass_scaling_linear() {
        let k1 = KernelSpec::laplace(1.0, 2.0, 1.0).unwrap();
        let k2 = KernelSpec::laplace(1.0, 2.0, 2.0).unwrap();
        assert!(rel_err(k2.mass(), 2.0 * k1.mass()) < 1e-15);
    }

    #[test]
    fn abscissa_cases() {
        assert!(KernelSpec::gaussian(1.0, 1.0).unwrap().abscissa().is_infinite());
        assert!(KernelSpec::tent(1.0, 1.0).unwrap().abscissa().is_infinite());
        assert_eq!(KernelSpec::laplace(1.0, 3.0, 1.0).unwrap().abscissa(), 3.0);
        // σ(K) = 0 violates the thin-tail assumption outright.
        assert!(matches!(
            KernelSpec::laplace(1.0, 0.0, 1.0),
            Err(Error::AssumptionViolation(_))
        ));
    }

    #[test]
    fn mgf_at_zero_is_mass() {
        for k in [
            KernelSpec::gaussian(1.0, 1.0).unwrap(),
            KernelSpec::tent(2.0, 0.5).unwrap(),
            KernelSpec::laplace(1.0, 2.0, 1.0).unwrap(),
        ] {
            assert!(rel_err(k.mgf(0.0).unwrap(), k.mass()) < 1e-12);
        }
    }

    #[test]
    fn gaussian_mgf_closed_form() {
        let g = KernelSpec::gaussian(1.0, 1.0).unwrap();
        assert!(rel_err(g.mgf(1.0).unwrap(), 0.5f64.exp()) < 1e-14);
        assert!(rel_err(g.mgf(1.0).unwrap(), g.mgf_quadrature(1.0).unwrap().value) < 1e-9);
        assert!(rel_err(g.big_l(1.0).unwrap(), 0.5f64.exp() - 1.0) < 1e-13);
    }

    #[test]
    fn tent_mgf_closed_form() {
        let t = KernelSpec::tent(1.0, 1.0).unwrap();
        for lambda in [0.3, 1.0, 2.7] {
            let expect = 2.0 * (f64::cosh(lambda) - 1.0) / (lambda * lambda);
            assert!(rel_err(t.mgf(lambda).unwrap(), expect) < 1e-13);
            assert!(rel_err(t.mgf(lambda).unwrap(), t.mgf_quadrature(lambda).unwrap().value) < 1e-9);
        }
    }

    #[test]
    fn laplace_mgf_and_domain() {
        let l = KernelSpec::laplace(1.0, 3.0, 1.0).unwrap();
        assert!(rel_err(l.mgf(1.0).unwrap(), l.mgf_quadrature(1.0).unwrap().value) < 1e-9);
        assert!(matches!(l.mgf(3.0), Err(Error::Domain(_))));
        assert!(matches!(l.mgf(2.9999999), Err(Error::Domain(_))));
        assert!(l.mgf(2.99).is_ok());
    }

    #[test]
    fn big_l_zero_and_sign() {
        for k in [
            KernelSpec::gaussian(1.0, 1.0).unwrap(),
            KernelSpec::tent(1.0, 1.0).unwrap(),
        ] {
            assert_eq!(k.big_l(0.0).unwrap(), 0.0);
            // Symmetric kernel: L(λ) > 0 for λ > 0.
            assert!(k.big_l(0.7).unwrap() > 0.0);
        }
    }

    #[test]
    fn mgf_derivative_matches_finite_differences() {
        let h = 1e-5;
        for k in [
            KernelSpec::gaussian(1.0, 1.0).unwrap(),
            KernelSpec::tent(1.5, 1.0).unwrap(),
            KernelSpec::laplace(1.0, 4.0, 1.0).unwrap(),
        ] {
            for lambda in [0.5, 1.0, 1.8] {
                let fd = (k.mgf(lambda + h).unwrap() - k.mgf(lambda - h).unwrap()) / (2.0 * h);
                let d = k.mgf_derivative(lambda).unwrap();
                assert!(rel_err(d, fd) < 1e-6, "{:?} λ={lambda}: {d} vs {fd}", k.family);
            }
        }
    }

    #[test]
    fn mgf_derivative_odd_at_zero() {
        let g = KernelSpec::gaussian(1.0, 1.0).unwrap();
        assert_eq!(g.mgf_derivative(0.0).unwrap(), 0.0);
        let t = KernelSpec::tent(1.0, 1.0).unwrap();
        assert_eq!(t.mgf_derivative(0.0).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_mgf_derivative_closed_form() {
        let g = KernelSpec::gaussian(1.0, 1.0).unwrap();
        assert!(rel_err(g.mgf_derivative(1.0).unwrap(), 0.5f64.exp()) < 1e-13);
    }

    #[test]
    fn mgf_convexity_on_grid() {
        let k = KernelSpec::laplace(1.0, 3.0, 1.0).unwrap();
        let lambdas: Vec<f64> = (0..40).map(|i| 2.8 * i as f64 / 39.0).collect();
        let vals: Vec<f64> = lambdas.iter().map(|&l| k.mgf(l).unwrap()).collect();
        for i in 1..lambdas.len() - 1 {
            let t = (lambdas[i] - lambdas[i - 1]) / (lambdas[i + 1] - lambdas[i - 1]);
            let chord = vals[i - 1] * (1.0 - t) + vals[i + 1] * t;
            assert!(vals[i] <= chord + 1e-10, "convexity fails at λ={}", lambdas[i]);
        }
    }

    #[test]
    fn homogeneity_in_scale() {
        let base = KernelSpec::gaussian(1.3, 1.0).unwrap();
        let scaled = KernelSpec::gaussian(1.3, 3.5).unwrap();
        for lambda in [0.0, 0.8, 1.6] {
            assert!(rel_err(scaled.mgf(lambda).unwrap(), 3.5 * base.mgf(lambda).unwrap()) < 1e-13);
            assert!(
                (scaled.big_l(lambda).unwrap() - 3.5 * base.big_l(lambda).unwrap()).abs() < 1e-12
            );
            assert!(
                (scaled.mgf_derivative(lambda).unwrap()
                    - 3.5 * base.mgf_derivative(lambda).unwrap())
                .abs()
                    < 1e-12
            );
        }
        assert!(rel_err(scaled.mass(), 3.5 * base.mass()) < 1e-15);
    }

    #[test]
    fn tabulated_roundtrip_and_transforms() {
        // Sampled tent: transforms should be near the analytic tent values.
        let n = 801;
        let dy = 2.0 / (n - 1) as f64;
        let values: Vec<f64> = (0..n).map(|i| {
            let y: f64 = -1.0 + i as f64 * dy;
            (1.0 - y.abs()).max(0.0)
        }).collect();
        let k = KernelSpec::tabulated(-1.0, dy, values, 1.0).unwrap();
        assert!(k.abscissa().is_infinite());
        assert!((k.mass() - 1.0).abs() < 1e-5);
        let analytic = KernelSpec::tent(1.0, 1.0).unwrap();
        for lambda in [0.5, 1.5] {
            assert!(rel_err(k.mgf(lambda).unwrap(), analytic.mgf(lambda).unwrap()) < 1e-4);
        }

        let csv = k.tabulated_to_csv().unwrap();
        let back = KernelSpec::tabulated_from_csv(&csv, 1.0).unwrap();
        assert!(rel_err(back.mass(), k.mass()) < 1e-12);
    }

    #[test]
    fn tabulated_rejects_bad_data() {
        assert!(KernelSpec::tabulated(-1.0, 0.5, vec![0.0, -0.1, 0.0], 1.0).is_err());
        // K(0) = 0 at the only interior point covering zero.
        assert!(KernelSpec::tabulated(-1.0, 1.0, vec![1.0, 0.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn minorant_invariants() {
        let g = KernelSpec::gaussian(1.0, 1.0).unwrap();
        let m = g.minorant(1.0).unwrap();
        // Gaussian decreases in |y|, so the minimum sits at the endpoints.
        assert!(rel_err(m.amplitude, g.evaluate(1.0)) < 1e-9);
        assert_eq!(m.evaluate(1.0), 0.0);
        assert_eq!(m.evaluate(-1.0), 0.0);
        assert!(m.evaluate(0.0) > 0.0);
        assert!(rel_err(m.evaluate(0.0), m.amplitude) < 1e-15);

        // k <= K and evenness on a dense grid.
        let n = 10_001;
        for i in 0..n {
            let y = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let k = m.evaluate(y);
            assert!(k <= g.evaluate(y) + 1e-15, "violation at y={y}");
            assert!((k - m.evaluate(-y)).abs() < 1e-15);
            if y.abs() < 1.0 {
                assert!(k > 0.0);
            }
        }

        // Mass closed form vs quadrature, and the mgf identity.
        let q = quad::integrate(|y| m.evaluate(y), -1.0, 1.0, 1e-12);
        assert!(rel_err(m.mass(), q.value) < 1e-10);
        for lambda in [0.0, 0.7, 2.0] {
            let q = quad::integrate(|y| m.evaluate(y) * (lambda * y).exp(), -1.0, 1.0, 1e-12);
            assert!(rel_err(m.mgf(lambda), q.value) < 1e-9);
        }
    }

    #[test]
    fn minorant_fails_outside_support() {
        let t = KernelSpec::tent(1.0, 1.0).unwrap();
        assert!(matches!(t.minorant(1.0), Err(Error::NoMinorant { .. })));
        assert!(t.minorant(0.5).is_ok());
    }

    #[test]
    fn kernel_json_roundtrip() {
        let k = KernelSpec::laplace(1.0, 3.0, 2.0).unwrap();
        let s = serde_json::to_string(&k).unwrap();
        assert!(s.contains("\"family\":\"laplace\""));
        assert!(s.contains("\"params\""));
        let back: KernelSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn reflected_swaps_tails() {
        let k = KernelSpec::laplace(1.0, 3.0, 1.0).unwrap();
        let r = k.reflected();
        assert_eq!(r.abscissa(), 1.0);
        assert!((r.evaluate(0.5) - k.evaluate(-0.5)).abs() < 1e-15);
    }
}
