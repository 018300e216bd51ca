//! Time-heterogeneous coefficients μ(t) and their least mean.
//!
//! The least mean ⌊μ⌋ = lim_{T→∞} inf_{s>0} (1/T)∫_0^T μ(t+s) dt drives every
//! speed in this crate. The limit is not computable in finite time, so the
//! estimator works through a geometric ladder of window lengths and reports
//! the whole ladder together with a convergence flag.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SinusoidTerm {
    pub amplitude: f64,
    pub angular_frequency: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "form", content = "params", rename_all = "snake_case")]
pub enum CoefficientForm {
    Constant { value: f64 },
    /// offset + Σ aᵢ sin(ωᵢ t + φᵢ) with commensurate frequencies.
    Periodic { offset: f64, terms: Vec<SinusoidTerm> },
    /// Same shape, incommensurate frequencies: has a mean value but no period.
    Quasiperiodic { offset: f64, terms: Vec<SinusoidTerm> },
    /// Piecewise constant values on [bᵢ, bᵢ₊₁), last value extended forever.
    /// `ramp_width` > 0 replaces each jump by a linear ramp on [bᵢ, bᵢ+w].
    Piecewise { breakpoints: Vec<f64>, values: Vec<f64>, ramp_width: f64 },
    /// Piecewise-linear interpolation of samples at t = t0 + i·dt.
    Tabulated { t0: f64, dt: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Coefficient {
    #[serde(flatten)]
    pub form: CoefficientForm,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LeastMeanEstimate {
    pub value: f64,
    /// (window length T, inf over shifts of the window average), ascending T.
    pub window_sequence: Vec<(f64, f64)>,
    pub converged: bool,
    pub tolerance_achieved: f64,
}

impl Coefficient {
    pub fn constant(value: f64) -> Self {
        Coefficient { form: CoefficientForm::Constant { value } }
    }

    pub fn periodic(offset: f64, terms: Vec<(f64, f64, f64)>) -> Self {
        let terms = terms
            .into_iter()
            .map(|(amplitude, angular_frequency, phase)| SinusoidTerm {
                amplitude,
                angular_frequency,
                phase,
            })
            .collect();
        Coefficient { form: CoefficientForm::Periodic { offset, terms } }
    }

    pub fn quasiperiodic(offset: f64, terms: Vec<(f64, f64, f64)>) -> Self {
        let terms = terms
            .into_iter()
            .map(|(amplitude, angular_frequency, phase)| SinusoidTerm {
                amplitude,
                angular_frequency,
                phase,
            })
            .collect();
        Coefficient { form: CoefficientForm::Quasiperiodic { offset, terms } }
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>, ramp_width: f64) -> Result<Self> {
        if breakpoints.len() != values.len() || breakpoints.is_empty() {
            return Err(Error::InvalidInput(
                "piecewise coefficient needs matching nonempty breakpoints/values".into(),
            ));
        }
        for w in breakpoints.windows(2) {
            if w[1] - w[0] <= 0.0 {
                return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
            }
            if ramp_width > w[1] - w[0] {
                return Err(Error::InvalidInput("ramp_width exceeds a segment length".into()));
            }
        }
        if ramp_width < 0.0 {
            return Err(Error::InvalidInput("ramp_width must be nonnegative".into()));
        }
        Ok(Coefficient { form: CoefficientForm::Piecewise { breakpoints, values, ramp_width } })
    }

    /// On/off coefficient equal to 1 on [4^k, 2·4^k) for k = 0..=levels and
    /// 2 elsewhere. Its least mean is 1, strictly below the Cesàro average
    /// (≈ 5/3), which makes it the canonical non-recurrent test input.
    pub fn dyadic_on_off(levels: u32) -> Self {
        let mut breakpoints = vec![0.0];
        let mut values = vec![2.0];
        for k in 0..=levels {
            let a = 4f64.powi(k as i32);
            breakpoints.push(a);
            values.push(1.0);
            breakpoints.push(2.0 * a);
            values.push(2.0);
        }
        Self::piecewise(breakpoints, values, 0.0).expect("constructed increasing breakpoints")
    }

    pub fn tabulated(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !(dt > 0.0) {
            return Err(Error::InvalidInput("tabulated coefficient needs >= 2 samples, dt > 0".into()));
        }
        Ok(Coefficient { form: CoefficientForm::Tabulated { t0, dt, values } })
    }

    /// Parse two-column CSV `t,mu` on a uniform time grid.
    pub fn tabulated_from_csv(text: &str) -> Result<Self> {
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',');
            let (t, v) = match (cols.next(), cols.next()) {
                (Some(t), Some(v)) => (t.trim(), v.trim()),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "csv line {}: expected two columns",
                        lineno + 1
                    )))
                }
            };
            if lineno == 0 && t.parse::<f64>().is_err() {
                continue;
            }
            ts.push(t.parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!("csv line {}: bad t", lineno + 1))
            })?);
            vs.push(v.parse::<f64>().map_err(|_| {
                Error::InvalidInput(format!("csv line {}: bad value", lineno + 1))
            })?);
        }
        if ts.len() < 2 {
            return Err(Error::InvalidInput("need at least two samples".into()));
        }
        let dt = ts[1] - ts[0];
        for w in ts.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1.0) {
                return Err(Error::InvalidInput("time grid is not uniform".into()));
            }
        }
        Self::tabulated(ts[0], dt, vs)
    }

    /// Max time for which the coefficient is defined; infinite for all
    /// analytic forms (piecewise extends its last value).
    pub fn horizon(&self) -> f64 {
        match &self.form {
            CoefficientForm::Tabulated { t0, dt, values } => {
                t0 + (values.len() - 1) as f64 * dt
            }
            _ => f64::INFINITY,
        }
    }

    /// Fundamental period, when one exists.
    pub fn period(&self) -> Option<f64> {
        match &self.form {
            CoefficientForm::Constant { .. } => None,
            CoefficientForm::Periodic { terms, .. } => {
                if terms.is_empty() {
                    return None;
                }
                let mut t = 2.0 * std::f64::consts::PI / terms[0].angular_frequency.abs();
                for term in &terms[1..] {
                    let ti = 2.0 * std::f64::consts::PI / term.angular_frequency.abs();
                    t = real_lcm(t, ti)?;
                }
                Some(t)
            }
            _ => None,
        }
    }

    /// μ(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t > self.horizon() {
            return Err(Error::Domain(format!(
                "t = {t} beyond coefficient horizon {}",
                self.horizon()
            )));
        }
        Ok(match &self.form {
            CoefficientForm::Constant { value } => *value,
            CoefficientForm::Periodic { offset, terms }
            | CoefficientForm::Quasiperiodic { offset, terms } => {
                let mut v = *offset;
                for term in terms {
                    v += term.amplitude * (term.angular_frequency * t + term.phase).sin();
                }
                v
            }
            CoefficientForm::Piecewise { breakpoints, values, ramp_width } => {
                eval_piecewise(breakpoints, values, *ramp_width, t)
            }
            CoefficientForm::Tabulated { t0, dt, values } => {
                let s = ((t - t0) / dt).clamp(0.0, (values.len() - 1) as f64);
                let i = (s.floor() as usize).min(values.len() - 2);
                let frac = s - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        })
    }

    /// ∫_{t0}^{t1} μ(s) ds; closed form for the analytic families.
    pub fn integral(&self, t0: f64, t1: f64) -> Result<f64> {
        if t0 > t1 {
            return Err(Error::Domain(format!("need t0 <= t1, got [{t0}, {t1}]")));
        }
        if t1 > self.horizon() {
            return Err(Error::Domain(format!(
                "t1 = {t1} beyond coefficient horizon {}",
                self.horizon()
            )));
        }
        Ok(match &self.form {
            CoefficientForm::Constant { value } => value * (t1 - t0),
            CoefficientForm::Periodic { offset, terms }
            | CoefficientForm::Quasiperiodic { offset, terms } => {
                let mut v = offset * (t1 - t0);
                for term in terms {
                    let w = term.angular_frequency;
                    v += term.amplitude / w
                        * ((w * t0 + term.phase).cos() - (w * t1 + term.phase).cos());
                }
                v
            }
            CoefficientForm::Piecewise { breakpoints, values, ramp_width } => {
                integral_piecewise(breakpoints, values, *ramp_width, t0, t1)
            }
            CoefficientForm::Tabulated { .. } => {
                // Trapezoid on the sample grid is exact for the interpolant.
                let table = IntegralTable::build(self);
                table.integral(t0, t1)
            }
        })
    }

    /// (lower, upper) bounds on μ; exact for constant/piecewise/tabulated,
    /// offset ± Σ|aᵢ| envelope for sinusoid sums.
    pub fn bounds(&self) -> (f64, f64) {
        match &self.form {
            CoefficientForm::Constant { value } => (*value, *value),
            CoefficientForm::Periodic { offset, terms }
            | CoefficientForm::Quasiperiodic { offset, terms } => {
                let amp: f64 = terms.iter().map(|t| t.amplitude.abs()).sum();
                (offset - amp, offset + amp)
            }
            CoefficientForm::Piecewise { values, .. } => {
                let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            CoefficientForm::Tabulated { values, .. } => {
                let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
        }
    }

    /// Sup norm bound ‖μ‖∞.
    pub fn sup_norm(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs())
    }

    /// True when the form is uniformly continuous by construction. Raw-jump
    /// piecewise coefficients fail and are only admissible in least-mean
    /// experiments, never as growth rates.
    pub fn is_uniformly_continuous(&self) -> bool {
        match &self.form {
            CoefficientForm::Piecewise { values, ramp_width, .. } => {
                values.len() < 2 || *ramp_width > 0.0
            }
            _ => true,
        }
    }

    /// Mean value ⟨μ⟩ for forms that have one (constant part of the sum);
    /// `None` for piecewise/tabulated data, where no structure guarantees it.
    pub fn mean_value(&self) -> Option<f64> {
        match &self.form {
            CoefficientForm::Constant { value } => Some(*value),
            CoefficientForm::Periodic { offset, .. }
            | CoefficientForm::Quasiperiodic { offset, .. } => Some(*offset),
            _ => None,
        }
    }

    /// Least-mean estimate over a geometric ladder of windows T = t_max/2^k,
    /// taking the infimum over a dense grid of shifts s ∈ [0, s_max] at each
    /// level. Converged when the two largest-window values agree to
    /// 1e-3·(sup μ − inf μ + 1).
    pub fn least_mean(&self, t_max: f64, s_max: f64) -> Result<LeastMeanEstimate> {
        if !(t_max > 0.0) || s_max < 0.0 {
            return Err(Error::InvalidInput("need t_max > 0 and s_max >= 0".into()));
        }
        let needed = t_max + s_max;
        if needed > self.horizon() {
            return Err(Error::InsufficientHorizon { needed, have: self.horizon() });
        }

        let table = IntegralTable::build(self);

        // Shift grid: fine enough for a uniformly continuous coefficient;
        // one period of shifts suffices for periodic forms.
        let period = self.period();
        let ds = match period {
            Some(p) => (p / 100.0).min(0.01),
            None => 0.01,
        };
        let s_hi = match period {
            Some(p) => s_max.min(p),
            None => s_max,
        };
        let n_shifts = (s_hi / ds).ceil() as usize + 1;

        const LEVELS: usize = 9;
        let mut ladder = Vec::with_capacity(LEVELS);
        for k in (0..LEVELS).rev() {
            let t_win = t_max / (1u64 << k) as f64;
            let mut inf = f64::INFINITY;
            for i in 0..n_shifts {
                let s = (i as f64 * ds).min(s_hi);
                let t1 = s + t_win;
                // Divide by the realized width so constants average exactly.
                let avg = table.integral(s, t1) / (t1 - s);
                if avg < inf {
                    inf = avg;
                }
            }
            ladder.push((t_win, inf));
        }

        let (lo, hi) = self.bounds();
        let tol = 1e-3 * (hi - lo + 1.0);
        let last = ladder[ladder.len() - 1].1;
        let prev = ladder[ladder.len() - 2].1;
        let achieved = (last - prev).abs();
        Ok(LeastMeanEstimate {
            value: last,
            window_sequence: ladder,
            converged: achieved < tol,
            tolerance_achieved: achieved,
        })
    }

    /// Dual characterization check for periodic coefficients: with
    /// a'(t) = ⟨μ⟩ − μ(t), the function a' + μ is constant and its infimum
    /// equals the period average.
    pub fn dual_least_mean_check(&self, a_slope_bound: f64) -> Result<f64> {
        let (offset, period) = match (&self.form, self.period()) {
            (CoefficientForm::Constant { value }, _) => return Ok(*value),
            (CoefficientForm::Periodic { offset, .. }, Some(p)) => (*offset, p),
            _ => {
                return Err(Error::Unsupported(
                    "dual least-mean check requires a periodic coefficient".into(),
                ))
            }
        };
        const GRID: usize = 4096;
        let mut inf = f64::INFINITY;
        let mut max_slope = 0.0f64;
        for i in 0..=GRID {
            let t = period * i as f64 / GRID as f64;
            let mu = self.eval(t)?;
            let a_prime = offset - mu;
            max_slope = max_slope.max(a_prime.abs());
            inf = inf.min(a_prime + mu);
        }
        if max_slope > a_slope_bound {
            return Err(Error::InvalidInput(format!(
                "optimal adjuster slope {max_slope} exceeds bound {a_slope_bound}"
            )));
        }
        Ok(inf)
    }
}

fn eval_piecewise(breakpoints: &[f64], values: &[f64], ramp_width: f64, t: f64) -> f64 {
    if t < breakpoints[0] {
        return values[0];
    }
    // Index of the last breakpoint <= t.
    let i = match breakpoints.binary_search_by(|b| b.total_cmp(&t)) {
        Ok(i) => i,
        Err(i) => i - 1,
    };
    if i == 0 || ramp_width == 0.0 {
        return values[i];
    }
    let into = t - breakpoints[i];
    if into >= ramp_width {
        values[i]
    } else {
        let frac = into / ramp_width;
        values[i - 1] * (1.0 - frac) + values[i] * frac
    }
}

fn integral_piecewise(breakpoints: &[f64], values: &[f64], ramp_width: f64, t0: f64, t1: f64) -> f64 {
    // Closed form via the antiderivative at the two endpoints.
    antiderivative_piecewise(breakpoints, values, ramp_width, t1)
        - antiderivative_piecewise(breakpoints, values, ramp_width, t0)
}

fn antiderivative_piecewise(breakpoints: &[f64], values: &[f64], ramp_width: f64, t: f64) -> f64 {
    let mut acc = 0.0;
    if t <= breakpoints[0] {
        return values[0] * (t - breakpoints[0]);
    }
    for i in 0..breakpoints.len() {
        let seg_start = breakpoints[i];
        let seg_end = if i + 1 < breakpoints.len() { breakpoints[i + 1] } else { f64::INFINITY };
        if t <= seg_start {
            break;
        }
        let upto = t.min(seg_end);
        if i == 0 || ramp_width == 0.0 {
            acc += values[i] * (upto - seg_start);
            continue;
        }
        // Ramp from values[i-1] to values[i] over [seg_start, seg_start + w].
        let ramp_end = seg_start + ramp_width;
        let ramp_upto = upto.min(ramp_end);
        let d = ramp_upto - seg_start;
        if d > 0.0 {
            let frac = d / ramp_width;
            let v_at = values[i - 1] * (1.0 - frac) + values[i] * frac;
            acc += 0.5 * (values[i - 1] + v_at) * d;
        }
        if upto > ramp_end {
            acc += values[i] * (upto - ramp_end);
        }
    }
    acc
}

/// Precomputed antiderivative lookups so the least-mean scan stays cheap on
/// data-backed coefficients.
enum IntegralTable<'a> {
    Closed(&'a Coefficient),
    Prefix { t0: f64, dt: f64, prefix: Vec<f64>, values: &'a [f64] },
}

impl<'a> IntegralTable<'a> {
    fn build(c: &'a Coefficient) -> Self {
        match &c.form {
            CoefficientForm::Tabulated { t0, dt, values } => {
                let mut prefix = Vec::with_capacity(values.len());
                let mut acc = 0.0;
                prefix.push(0.0);
                for w in values.windows(2) {
                    acc += 0.5 * (w[0] + w[1]) * dt;
                    prefix.push(acc);
                }
                IntegralTable::Prefix { t0: *t0, dt: *dt, prefix, values }
            }
            _ => IntegralTable::Closed(c),
        }
    }

    fn integral(&self, a: f64, b: f64) -> f64 {
        match self {
            IntegralTable::Closed(c) => c.integral(a, b).expect("horizon pre-checked"),
            IntegralTable::Prefix { t0, dt, prefix, values } => {
                self.antiderivative(*t0, *dt, prefix, values, b)
                    - self.antiderivative(*t0, *dt, prefix, values, a)
            }
        }
    }

    fn antiderivative(&self, t0: f64, dt: f64, prefix: &[f64], values: &[f64], t: f64) -> f64 {
        let s = ((t - t0) / dt).clamp(0.0, (values.len() - 1) as f64);
        let i = (s.floor() as usize).min(values.len() - 2);
        let frac = s - i as f64;
        let v0 = values[i];
        let v1 = values[i + 1];
        let v_at = v0 * (1.0 - frac) + v1 * frac;
        prefix[i] + 0.5 * (v0 + v_at) * frac * dt
    }
}

/// Least common multiple of two real periods, via a rational fit of the
/// ratio; `None` when the ratio resists small rationals (incommensurate).
fn real_lcm(a: f64, b: f64) -> Option<f64> {
    let ratio = a / b;
    let (_p, q) = rational_approx(ratio, 1_000, 1e-9)?;
    // a/b = p/q  =>  lcm = a*q = b*p.
    Some(a * q as f64)
}

fn rational_approx(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    for q in 1..=max_den {
        let p = (x * q as f64).round();
        if p > 0.0 && (x - p / q as f64).abs() < tol {
            return Some((p as u64, q));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let c = Coefficient::constant(2.0);
        assert_eq!(c.eval(17.0).unwrap(), 2.0);

        let p = Coefficient::periodic(2.0, vec![(1.0, 2.0 * std::f64::consts::PI, 0.0)]);
        assert!((p.eval(0.25).unwrap() - 3.0).abs() < 1e-14);

        let pw = Coefficient::piecewise(vec![0.0, 5.0], vec![1.0, 2.0], 0.0).unwrap();
        assert_eq!(pw.eval(5.0).unwrap(), 2.0); // right-continuous
        assert_eq!(pw.eval(4.999).unwrap(), 1.0);
    }

    #[test]
    fn integral_examples() {
        let c = Coefficient::constant(2.0);
        assert_eq!(c.integral(0.0, 3.0).unwrap(), 6.0);
        assert_eq!(c.integral(7.0, 7.0).unwrap(), 0.0);

        let p = Coefficient::periodic(2.0, vec![(1.0, 2.0 * std::f64::consts::PI, 0.0)]);
        assert!((p.integral(0.0, 1.0).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn integral_additivity() {
        let p = Coefficient::periodic(1.5, vec![(0.7, 3.0, 0.4), (0.2, 5.0, 1.0)]);
        let pw = Coefficient::piecewise(vec![0.0, 2.0, 4.0], vec![1.0, 3.0, 2.0], 0.5).unwrap();
        for c in [&p, &pw] {
            let (a, b, m) = (0.3, 6.7, 2.9);
            let whole = c.integral(a, b).unwrap();
            let split = c.integral(a, m).unwrap() + c.integral(m, b).unwrap();
            assert!((whole - split).abs() <= 1e-12 * whole.abs().max(1.0));
        }
    }

    #[test]
    fn piecewise_ramp_is_continuous() {
        let pw = Coefficient::piecewise(vec![0.0, 2.0], vec![1.0, 3.0], 0.5).unwrap();
        assert!(pw.is_uniformly_continuous());
        assert_eq!(pw.eval(2.0).unwrap(), 1.0);
        assert_eq!(pw.eval(2.25).unwrap(), 2.0);
        assert_eq!(pw.eval(2.5).unwrap(), 3.0);
        // Quadrature cross-check of the ramp antiderivative.
        let mut acc = 0.0;
        let n = 20_000;
        let (a, b) = (1.7, 3.1);
        for i in 0..n {
            let t = a + (b - a) * (i as f64 + 0.5) / n as f64;
            acc += pw.eval(t).unwrap() * (b - a) / n as f64;
        }
        assert!((pw.integral(a, b).unwrap() - acc).abs() < 1e-4);

        let raw = Coefficient::piecewise(vec![0.0, 2.0], vec![1.0, 3.0], 0.0).unwrap();
        assert!(!raw.is_uniformly_continuous());
    }

    #[test]
    fn tabulated_eval_and_integral() {
        let c = Coefficient::tabulated(0.0, 0.5, vec![1.0, 2.0, 1.0, 3.0]).unwrap();
        assert_eq!(c.horizon(), 1.5);
        assert!((c.eval(0.25).unwrap() - 1.5).abs() < 1e-15);
        assert!(c.eval(2.0).is_err());
        // Exact trapezoid of the interpolant.
        assert!((c.integral(0.0, 1.5).unwrap() - (0.75 + 0.75 + 1.0)).abs() < 1e-14);
        assert!((c.integral(0.25, 0.75).unwrap() - 0.875).abs() < 1e-12);
    }

    #[test]
    fn mean_values() {
        assert_eq!(Coefficient::constant(2.0).mean_value(), Some(2.0));
        let q = Coefficient::quasiperiodic(
            2.0,
            vec![(0.5, 1.0, 0.0), (0.5, std::f64::consts::SQRT_2, 0.0)],
        );
        assert_eq!(q.mean_value(), Some(2.0));
        let p = Coefficient::periodic(3.0, vec![(1.0, 2.0 * std::f64::consts::PI, 0.3)]);
        assert_eq!(p.mean_value(), Some(3.0));
        let pw = Coefficient::piecewise(vec![0.0], vec![1.0], 0.0).unwrap();
        assert_eq!(pw.mean_value(), None);
    }

    #[test]
    fn least_mean_constant_exact() {
        let c = Coefficient::constant(2.5);
        let est = c.least_mean(64.0, 8.0).unwrap();
        assert_eq!(est.value, 2.5);
        assert!(est.converged);
        for (_, v) in &est.window_sequence {
            assert_eq!(*v, 2.5);
        }
    }

    #[test]
    fn least_mean_periodic_matches_mean() {
        let p = Coefficient::periodic(2.0, vec![(1.0, 2.0 * std::f64::consts::PI, 0.0)]);
        let est = p.least_mean(64.0, 8.0).unwrap();
        assert!((est.value - 2.0).abs() < 1e-3, "got {}", est.value);
        assert!(est.converged);
        let (lo, hi) = p.bounds();
        for (_, v) in &est.window_sequence {
            assert!(*v >= lo - 1e-12 && *v <= hi + 1e-12);
        }
    }

    #[test]
    fn least_mean_dyadic_below_cesaro() {
        let c = Coefficient::dyadic_on_off(6);
        let t_max = 4f64.powi(6);
        let est = c.least_mean(t_max, t_max).unwrap();
        assert!(est.value <= 1.1, "ladder value {}", est.value);
        let cesaro = c.integral(0.0, t_max).unwrap() / t_max;
        assert!(cesaro >= 1.5, "cesaro {cesaro}");
        assert!(est.value < cesaro);
    }

    #[test]
    fn least_mean_within_bounds_and_shift_invariant() {
        let p = Coefficient::periodic(2.0, vec![(0.8, 3.0, 0.2)]);
        let est = p.least_mean(60.0, 10.0).unwrap();
        let (lo, hi) = p.bounds();
        assert!(est.value >= lo && est.value <= hi);

        // Shift the coefficient in time via the phases.
        let s0 = 2.5;
        let shifted = Coefficient::periodic(2.0, vec![(0.8, 3.0, 0.2 + 3.0 * s0)]);
        let est2 = shifted.least_mean(60.0, 10.0).unwrap();
        assert!((est.value - est2.value).abs() < 1e-3);
    }

    #[test]
    fn least_mean_additive_under_constants() {
        let p = Coefficient::periodic(2.0, vec![(0.8, 3.0, 0.2)]);
        let q = Coefficient::periodic(2.0 + 0.7, vec![(0.8, 3.0, 0.2)]);
        let a = p.least_mean(60.0, 10.0).unwrap().value;
        let b = q.least_mean(60.0, 10.0).unwrap().value;
        assert!((b - (a + 0.7)).abs() < 1e-9);
    }

    #[test]
    fn least_mean_horizon_error() {
        let c = Coefficient::tabulated(0.0, 1.0, vec![1.0; 11]).unwrap();
        assert!(matches!(
            c.least_mean(8.0, 4.0),
            Err(Error::InsufficientHorizon { .. })
        ));
        assert!(c.least_mean(8.0, 2.0).is_ok());
    }

    #[test]
    fn dual_check_examples() {
        assert_eq!(Coefficient::constant(2.0).dual_least_mean_check(1.0).unwrap(), 2.0);

        let p = Coefficient::periodic(2.0, vec![(1.0, 2.0 * std::f64::consts::PI, 0.0)]);
        let dual = p.dual_least_mean_check(2.0).unwrap();
        assert!((dual - 2.0).abs() < 1e-12);
        let lm = p.least_mean(64.0, 8.0).unwrap().value;
        assert!((dual - lm).abs() < 1e-3);

        let pw = Coefficient::piecewise(vec![0.0], vec![1.0], 0.0).unwrap();
        assert!(matches!(pw.dual_least_mean_check(1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn period_detection() {
        let p = Coefficient::periodic(0.0, vec![(1.0, 2.0 * std::f64::consts::PI, 0.0)]);
        assert!((p.period().unwrap() - 1.0).abs() < 1e-9);
        let p2 = Coefficient::periodic(
            0.0,
            vec![(1.0, 2.0 * std::f64::consts::PI, 0.0), (1.0, 3.0 * 2.0 * std::f64::consts::PI, 0.0)],
        );
        assert!((p2.period().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coefficient_json_roundtrip() {
        let p = Coefficient::periodic(2.0, vec![(1.0, 6.28, 0.0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"form\":\"periodic\""));
        let back: Coefficient = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
