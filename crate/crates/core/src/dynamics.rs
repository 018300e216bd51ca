//! Semi-discrete solver for ∂ₜu = K∗u − K̄u + u·f(t,u) on a truncated grid.
//!
//! Space is handled by sampling the kernel at grid offsets with trapezoid
//! weights. Two convolution implementations are kept and must agree: a
//! direct summation (the default for time stepping) and a cached FFT. The
//! direct path matters for more than speed taste: FFT round-off seeds the
//! far field at ~1e-14, and the KPP growth amplifies any seed like e^{μt},
//! which would poison level-set tracking and the guard band within a few
//! time units. Summing nonnegative terms leaves exact zeros ahead of the
//! front. Time stepping is classical RK4 with a fixed step below the
//! stability bound. The state is projected back into [0,1] after each step
//! and the pre-projection excursion is recorded; it stays at round-off
//! level for stable steps.
//!
//! Outside the grid the solution is taken to be zero. That direction of
//! truncation error only ever lowers the solution, so measured lower bounds
//! stay conservative; a guard band near the right boundary is monitored and
//! the run aborts if mass reaches it.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::env::Coefficient;
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;

/// Relative threshold defining the effective kernel support on the grid.
const SUPPORT_REL: f64 = 1e-14;
/// Contamination level in the guard band that aborts a run.
const GUARD_LEVEL: f64 = 1e-10;
/// Guard band width, in units of the right effective kernel extent.
const GUARD_SUPPORTS: f64 = 5.0;

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(Error::InvalidInput(format!("need x_max > x_min, got [{x_min}, {x_max}]")));
        }
        if n < 16 {
            return Err(Error::InvalidInput(format!("need at least 16 grid points, got {n}")));
        }
        Ok(Grid { x_min, x_max, n })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }
}

/// Solution values u(t, ·) on a grid at one time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Field {
    pub grid: Grid,
    pub t: f64,
    pub values: Vec<f64>,
}

impl Field {
    pub fn constant(grid: Grid, t: f64, value: f64) -> Self {
        Field { grid, t, values: vec![value; grid.n] }
    }

    /// Piecewise-linear interpolation, zero outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        let s = (x - self.grid.x_min) / self.grid.dx();
        if s < 0.0 || s > (self.grid.n - 1) as f64 {
            return 0.0;
        }
        let i = (s.floor() as usize).min(self.grid.n - 2);
        let frac = s - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// How the convolution treats points outside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// u = 0 outside [x_min, x_max]; the production mode.
    Zero,
    /// Wrap around; test mode emulating an infinitely extended constant
    /// or periodic state.
    Periodic,
}

/// KPP reaction term u·f(t,u).
#[derive(Clone)]
pub enum Nonlinearity {
    /// f(t,u) = μ(t)(1 − u); zeros at u = 0 and u = 1.
    Logistic { mu: Coefficient },
    /// f(t,u) = μ(t)(1 − H·u); upper equilibrium at 1/H, H >= 1.
    LogisticH { mu: Coefficient, big_h: f64 },
    /// Arbitrary KPP descriptor with a declared Lipschitz constant. The
    /// closure is validated on a sample grid at construction.
    General {
        mu: Coefficient,
        lipschitz: f64,
        f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Nonlinearity::Logistic { .. } => write!(fm, "Logistic"),
            Nonlinearity::LogisticH { big_h, .. } => write!(fm, "LogisticH(H={big_h})"),
            Nonlinearity::General { lipschitz, .. } => write!(fm, "General(C={lipschitz})"),
        }
    }
}

fn require_growth_rate(mu: &Coefficient) -> Result<()> {
    if !mu.is_uniformly_continuous() {
        return Err(Error::InvalidInput(
            "raw-jump piecewise coefficients are not admissible as growth rates; \
             set a positive ramp width"
                .into(),
        ));
    }
    let (lo, _) = mu.bounds();
    if !(lo > 0.0) {
        return Err(Error::InvalidInput(format!(
            "growth rate must be bounded below by a positive constant, inf bound = {lo}"
        )));
    }
    Ok(())
}

impl Nonlinearity {
    pub fn logistic(mu: Coefficient) -> Result<Self> {
        require_growth_rate(&mu)?;
        Ok(Nonlinearity::Logistic { mu })
    }

    pub fn logistic_h(mu: Coefficient, big_h: f64) -> Result<Self> {
        require_growth_rate(&mu)?;
        if !(big_h >= 1.0) {
            return Err(Error::InvalidInput(format!("H must be >= 1, got {big_h}")));
        }
        Ok(Nonlinearity::LogisticH { mu, big_h })
    }

    pub fn general(
        mu: Coefficient,
        lipschitz: f64,
        f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    ) -> Result<Self> {
        require_growth_rate(&mu)?;
        if !(lipschitz > 0.0) {
            return Err(Error::InvalidInput("Lipschitz constant must be positive".into()));
        }
        // Validate the KPP shape on a sample grid: f(t,0) = μ(t),
        // μ(t) − C·u <= f(t,u) <= μ(t), and f nonincreasing in u.
        for ti in 0..8 {
            let t = ti as f64 * 1.3;
            let mu_t = mu.eval(t)?;
            if (f(t, 0.0) - mu_t).abs() > 1e-9 * mu_t.abs().max(1.0) {
                return Err(Error::InvalidInput(format!("f(t,0) != mu(t) at t = {t}")));
            }
            if f(t, 1.0).abs() > 1e-9 {
                return Err(Error::InvalidInput(format!("f(t,1) != 0 at t = {t}")));
            }
            let mut prev = f64::INFINITY;
            for ui in 0..=32 {
                let u = ui as f64 / 32.0;
                let v = f(t, u);
                if v > mu_t + 1e-9 || v < mu_t - lipschitz * u - 1e-9 {
                    return Err(Error::InvalidInput(format!(
                        "f out of the KPP envelope at (t,u) = ({t},{u})"
                    )));
                }
                if v > prev + 1e-9 {
                    return Err(Error::InvalidInput(format!(
                        "f increasing in u at (t,u) = ({t},{u})"
                    )));
                }
                prev = v;
            }
        }
        Ok(Nonlinearity::General { mu, lipschitz, f })
    }

    pub fn mu(&self) -> &Coefficient {
        match self {
            Nonlinearity::Logistic { mu }
            | Nonlinearity::LogisticH { mu, .. }
            | Nonlinearity::General { mu, .. } => mu,
        }
    }

    /// inf μ bound (h(0)).
    pub fn h0(&self) -> f64 {
        self.mu().bounds().0
    }

    /// Lipschitz constant of u ↦ f(t,u), uniform in t.
    pub fn lipschitz(&self) -> f64 {
        match self {
            Nonlinearity::Logistic { mu } => mu.sup_norm(),
            Nonlinearity::LogisticH { mu, big_h } => big_h * mu.sup_norm(),
            Nonlinearity::General { lipschitz, .. } => *lipschitz,
        }
    }

    /// H = C / h(0).
    pub fn big_h(&self) -> f64 {
        self.lipschitz() / self.h0()
    }

    /// f(t, u), with μ(t) supplied by the caller to keep grid loops cheap.
    #[inline]
    pub fn f_with_rate(&self, t: f64, mu_t: f64, u: f64) -> f64 {
        match self {
            Nonlinearity::Logistic { .. } => mu_t * (1.0 - u),
            Nonlinearity::LogisticH { big_h, .. } => mu_t * (1.0 - big_h * u),
            Nonlinearity::General { f, .. } => f(t, u),
        }
    }

    pub fn f(&self, t: f64, u: f64) -> Result<f64> {
        Ok(self.f_with_rate(t, self.mu().eval(t)?, u))
    }
}

/// Canonical initial-data constructors.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum InitialKind {
    /// Lipschitz tent on (0, width) with apex `peak` at width/2.
    CompactBump { width: f64, peak: f64 },
    /// 0 on (−∞,0], increasing to β on [0, ramp_end], flat β up to
    /// tail_start, then amplitude·e^{−rate·x}; β = amplitude·e^{−rate·tail_start}.
    PlateauTail { ramp_end: f64, tail_start: f64, amplitude: f64, rate: f64 },
    /// 0 on (−∞,0], unit ramp to `amplitude`, then amplitude·e^{−rate·(x−1)}.
    PureExponential { amplitude: f64, rate: f64 },
    /// Piecewise-linear samples, zero outside their range.
    Custom { x0: f64, dx: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InitialData {
    #[serde(flatten)]
    pub kind: InitialKind,
    #[serde(default)]
    pub shift: f64,
}

impl InitialData {
    pub fn compact_bump(width: f64, peak: f64) -> Self {
        InitialData { kind: InitialKind::CompactBump { width, peak }, shift: 0.0 }
    }

    pub fn plateau_tail(ramp_end: f64, tail_start: f64, amplitude: f64, rate: f64) -> Self {
        InitialData {
            kind: InitialKind::PlateauTail { ramp_end, tail_start, amplitude, rate },
            shift: 0.0,
        }
    }

    pub fn pure_exponential(amplitude: f64, rate: f64) -> Self {
        InitialData { kind: InitialKind::PureExponential { amplitude, rate }, shift: 0.0 }
    }

    pub fn custom(x0: f64, dx: f64, values: Vec<f64>) -> Self {
        InitialData { kind: InitialKind::Custom { x0, dx, values }, shift: 0.0 }
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            InitialKind::CompactBump { width, peak } => {
                if !(*width > 0.0) || !(*peak > 0.0 && *peak < 1.0) {
                    return Err(Error::InvalidInput(format!(
                        "compact bump needs width > 0 and peak in (0,1), got ({width}, {peak})"
                    )));
                }
            }
            InitialKind::PlateauTail { ramp_end, tail_start, amplitude, rate } => {
                if !(*ramp_end > 0.0 && ramp_end < tail_start) {
                    return Err(Error::InvalidInput(format!(
                        "plateau needs 0 < ramp_end < tail_start, got ({ramp_end}, {tail_start})"
                    )));
                }
                if !(*amplitude > 0.0 && *amplitude < 1.0) {
                    return Err(Error::InvalidInput(format!(
                        "plateau amplitude must be in (0,1), got {amplitude}"
                    )));
                }
                if !(*rate > 0.0) {
                    return Err(Error::InvalidInput(format!("decay rate must be positive, got {rate}")));
                }
            }
            InitialKind::PureExponential { amplitude, rate } => {
                if !(*amplitude > 0.0 && *amplitude < 1.0) || !(*rate > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "pure exponential needs amplitude in (0,1) and rate > 0, got ({amplitude}, {rate})"
                    )));
                }
            }
            InitialKind::Custom { dx, values, .. } => {
                if values.len() < 2 || !(*dx > 0.0) {
                    return Err(Error::InvalidInput("custom data needs >= 2 samples, dx > 0".into()));
                }
                if values.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
                    return Err(Error::InvalidInput("custom samples must lie in [0,1]".into()));
                }
            }
        }
        Ok(())
    }

    /// v₀(x).
    pub fn evaluate(&self, x: f64) -> f64 {
        let xs = x - self.shift;
        match &self.kind {
            InitialKind::CompactBump { width, peak } => {
                if xs <= 0.0 || xs >= *width {
                    0.0
                } else {
                    peak * (1.0 - (2.0 * xs / width - 1.0).abs())
                }
            }
            InitialKind::PlateauTail { ramp_end, tail_start, amplitude, rate } => {
                let beta = amplitude * (-rate * tail_start).exp();
                if xs <= 0.0 {
                    0.0
                } else if xs <= *ramp_end {
                    beta * xs / ramp_end
                } else if xs <= *tail_start {
                    beta
                } else {
                    amplitude * (-rate * xs).exp()
                }
            }
            InitialKind::PureExponential { amplitude, rate } => {
                if xs <= 0.0 {
                    0.0
                } else if xs <= 1.0 {
                    amplitude * xs
                } else {
                    amplitude * (-rate * (xs - 1.0)).exp()
                }
            }
            InitialKind::Custom { x0, dx, values } => {
                let s = (xs - x0) / dx;
                if s < 0.0 || s > (values.len() - 1) as f64 {
                    0.0
                } else {
                    let i = (s.floor() as usize).min(values.len() - 2);
                    let frac = s - i as f64;
                    values[i] * (1.0 - frac) + values[i + 1] * frac
                }
            }
        }
    }

    /// The rightward decay class: None for compactly supported data,
    /// Some(rate) for an exponential right tail.
    pub fn tail_rate(&self) -> Option<f64> {
        match &self.kind {
            InitialKind::PlateauTail { rate, .. } | InitialKind::PureExponential { rate, .. } => {
                Some(*rate)
            }
            _ => None,
        }
    }
}

/// Sample the initial data on the grid.
pub fn make_initial(init: &InitialData, grid: Grid) -> Result<Field> {
    init.validate()?;
    let values = (0..grid.n).map(|i| init.evaluate(grid.x(i))).collect();
    Ok(Field { grid, t: 0.0, values })
}

/// Kernel sampled at grid offsets with trapezoid weights, plus FFT plans.
pub struct ConvOp {
    n: usize,
    m_left: usize,
    m_right: usize,
    /// w_j K(j·dx) for j = -m_left ..= m_right.
    column: Vec<f64>,
    discrete_mass: f64,
    boundary: BoundaryMode,
    padded: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    spectrum: Vec<Complex<f64>>,
    buf: Vec<Complex<f64>>,
}

impl ConvOp {
    pub fn new(kernel: &KernelSpec, grid: Grid, boundary: BoundaryMode) -> Result<Self> {
        let dx = grid.dx();
        let (lo, hi) = kernel.effective_support(SUPPORT_REL);
        let m_left = (-lo / dx).ceil() as usize;
        let m_right = (hi / dx).ceil() as usize;
        let width = m_left + m_right + 1;
        if width < 8 {
            return Err(Error::Resolution(format!(
                "effective kernel support covers only {width} grid cells (need >= 8); refine dx"
            )));
        }
        if boundary == BoundaryMode::Periodic && width > grid.n {
            return Err(Error::Resolution(
                "kernel support exceeds the periodic domain".into(),
            ));
        }

        let mut column = Vec::with_capacity(width);
        for j in -(m_left as isize)..=(m_right as isize) {
            let w = if j == -(m_left as isize) || j == m_right as isize { 0.5 } else { 1.0 };
            column.push(w * dx * kernel.evaluate(j as f64 * dx));
        }
        let discrete_mass: f64 = column.iter().sum();

        let padded = match boundary {
            BoundaryMode::Zero => (grid.n + width).next_power_of_two(),
            BoundaryMode::Periodic => grid.n,
        };
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(padded);
        let ifft = planner.plan_fft_inverse(padded);

        // Spectrum of the kernel column placed circularly around index 0.
        let mut spec = vec![Complex::new(0.0, 0.0); padded];
        for (idx, &c) in column.iter().enumerate() {
            let j = idx as isize - m_left as isize;
            let pos = j.rem_euclid(padded as isize) as usize;
            spec[pos] += Complex::new(c, 0.0);
        }
        fft.process(&mut spec);

        Ok(ConvOp {
            n: grid.n,
            m_left,
            m_right,
            column,
            discrete_mass,
            boundary,
            padded,
            fft,
            ifft,
            spectrum: spec,
            buf: vec![Complex::new(0.0, 0.0); padded],
        })
    }

    /// Σ_j w_j K(j dx) — the mass of the discrete operator. Grid equilibria
    /// are exact when the reaction uses this mass rather than the analytic
    /// one; the two agree to O(dx²).
    pub fn discrete_mass(&self) -> f64 {
        self.discrete_mass
    }

    /// Extent of the effective support in cells, (left, right).
    pub fn support_cells(&self) -> (usize, usize) {
        (self.m_left, self.m_right)
    }

    /// (K∗u)(x_i) via FFT.
    pub fn apply(&mut self, u: &[f64], out: &mut [f64]) {
        assert_eq!(u.len(), self.n);
        for c in self.buf.iter_mut() {
            *c = Complex::new(0.0, 0.0);
        }
        for (i, &v) in u.iter().enumerate() {
            self.buf[i] = Complex::new(v, 0.0);
        }
        self.fft.process(&mut self.buf);
        for (c, s) in self.buf.iter_mut().zip(self.spectrum.iter()) {
            *c *= s;
        }
        self.ifft.process(&mut self.buf);
        let scale = 1.0 / self.padded as f64;
        for (o, c) in out.iter_mut().zip(self.buf.iter()) {
            *o = c.re * scale;
        }
    }

    /// (K∗u)(x_i) by direct summation; independent of the FFT path.
    pub fn apply_direct(&self, u: &[f64], out: &mut [f64]) {
        assert_eq!(u.len(), self.n);
        let n = self.n as isize;
        for i in 0..self.n {
            let mut acc = 0.0;
            for (idx, &c) in self.column.iter().enumerate() {
                let j = idx as isize - self.m_left as isize;
                let src = i as isize - j;
                let v = match self.boundary {
                    BoundaryMode::Zero => {
                        if src < 0 || src >= n {
                            0.0
                        } else {
                            u[src as usize]
                        }
                    }
                    BoundaryMode::Periodic => u[src.rem_euclid(n) as usize],
                };
                acc += c * v;
            }
            out[i] = acc;
        }
    }
}

/// Free-standing convolution matching the spec surface; direct path.
pub fn convolve(kernel: &KernelSpec, field: &Field) -> Result<Vec<f64>> {
    let op = ConvOp::new(kernel, field.grid, BoundaryMode::Zero)?;
    let mut out = vec![0.0; field.grid.n];
    op.apply_direct(&field.values, &mut out);
    Ok(out)
}

/// Right-hand side K∗u − K̄u + u·f(t,u) at the field's own time.
pub fn rhs(kernel: &KernelSpec, nl: &Nonlinearity, field: &Field) -> Result<Vec<f64>> {
    let mut stepper = Stepper::new(kernel, nl.clone(), field.grid, BoundaryMode::Zero)?;
    let mut out = vec![0.0; field.grid.n];
    stepper.rhs_into(field.t, &field.values, &mut out)?;
    Ok(out)
}

/// Stability bound 0.5/(K̄ + ‖μ‖∞).
pub fn dt_stable(kernel: &KernelSpec, nl: &Nonlinearity) -> f64 {
    0.5 / (kernel.mass() + nl.mu().sup_norm())
}

/// Which convolution implementation a stepper uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvPath {
    /// Sum of nonnegative terms: exact zeros ahead of the front, strict
    /// positivity down to the underflow threshold. Default.
    Direct,
    /// FFT path; fast on wide grids but leaves ~1e-14 absolute noise that
    /// the growth term amplifies. Kept as an independent cross-check.
    Fft,
}

/// Owns the prepared convolution operator and RK4 stage buffers.
pub struct Stepper {
    pub grid: Grid,
    nl: Nonlinearity,
    conv: ConvOp,
    path: ConvPath,
    dt_stable: f64,
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
    /// Largest pre-projection excursion outside [0,1] seen so far.
    pub max_violation: f64,
}

impl Stepper {
    pub fn new(
        kernel: &KernelSpec,
        nl: Nonlinearity,
        grid: Grid,
        boundary: BoundaryMode,
    ) -> Result<Self> {
        Self::with_path(kernel, nl, grid, boundary, ConvPath::Direct)
    }

    pub fn with_path(
        kernel: &KernelSpec,
        nl: Nonlinearity,
        grid: Grid,
        boundary: BoundaryMode,
        path: ConvPath,
    ) -> Result<Self> {
        let conv = ConvOp::new(kernel, grid, boundary)?;
        let dt_stable = dt_stable(kernel, &nl);
        let n = grid.n;
        Ok(Stepper {
            grid,
            nl,
            conv,
            path,
            dt_stable,
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
            max_violation: 0.0,
        })
    }

    pub fn conv(&mut self) -> &mut ConvOp {
        &mut self.conv
    }

    pub fn dt_stable(&self) -> f64 {
        self.dt_stable
    }

    pub fn rhs_into(&mut self, t: f64, u: &[f64], out: &mut [f64]) -> Result<()> {
        match self.path {
            ConvPath::Fft => self.conv.apply(u, out),
            ConvPath::Direct => self.conv.apply_direct(u, out),
        }
        let mu_t = self.nl.mu().eval(t)?;
        let kbar_d = self.conv.discrete_mass;
        for (o, &v) in out.iter_mut().zip(u.iter()) {
            *o += v * (self.nl.f_with_rate(t, mu_t, v) - kbar_d);
        }
        Ok(())
    }

    /// One RK4 step of size dt; projects back into [0,1] and records the
    /// pre-projection excursion.
    pub fn step(&mut self, field: &mut Field, dt: f64) -> Result<()> {
        if dt > self.dt_stable {
            return Err(Error::Stability { dt, dt_stable: self.dt_stable });
        }
        let t = field.t;
        let n = field.values.len();

        // Stages run on `tmp`; destructure to appease the borrow checker.
        let Stepper { conv, nl, path, k1, k2, k3, k4, tmp, .. } = self;
        let path = *path;
        let stage = |conv: &mut ConvOp,
                     t_stage: f64,
                     input: &[f64],
                     out: &mut [f64]|
         -> Result<()> {
            match path {
                ConvPath::Fft => conv.apply(input, out),
                ConvPath::Direct => conv.apply_direct(input, out),
            }
            let mu_t = nl.mu().eval(t_stage)?;
            let kbar_d = conv.discrete_mass;
            for (o, &v) in out.iter_mut().zip(input.iter()) {
                *o += v * (nl.f_with_rate(t_stage, mu_t, v) - kbar_d);
            }
            Ok(())
        };

        stage(conv, t, &field.values, k1)?;
        for i in 0..n {
            tmp[i] = field.values[i] + 0.5 * dt * k1[i];
        }
        stage(conv, t + 0.5 * dt, tmp, k2)?;
        for i in 0..n {
            tmp[i] = field.values[i] + 0.5 * dt * k2[i];
        }
        stage(conv, t + 0.5 * dt, tmp, k3)?;
        for i in 0..n {
            tmp[i] = field.values[i] + dt * k3[i];
        }
        stage(conv, t + dt, tmp, k4)?;

        let sixth = dt / 6.0;
        let mut violation = 0.0f64;
        for i in 0..n {
            let v = field.values[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            violation = violation.max(-v).max(v - 1.0);
            field.values[i] = v.clamp(0.0, 1.0);
        }
        self.max_violation = self.max_violation.max(violation.max(0.0));
        field.t = t + dt;
        Ok(())
    }
}

/// Single RK4 step matching the spec surface.
pub fn step(kernel: &KernelSpec, nl: &Nonlinearity, field: &Field, dt: f64) -> Result<Field> {
    let mut stepper = Stepper::new(kernel, nl.clone(), field.grid, BoundaryMode::Zero)?;
    let mut out = field.clone();
    stepper.step(&mut out, dt)?;
    Ok(out)
}

/// Receives strided immutable snapshots during a run.
pub trait Observer {
    fn observe(&mut self, field: &Field);
}

/// Stores full snapshots at every observation.
#[derive(Default)]
pub struct SnapshotRecorder {
    pub snapshots: Vec<Field>,
}

impl Observer for SnapshotRecorder {
    fn observe(&mut self, field: &Field) {
        self.snapshots.push(field.clone());
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub steps: usize,
    pub final_t: f64,
    pub guard_start: f64,
    pub max_guard_contamination: f64,
    pub max_preprojection_violation: f64,
}

/// Left edge of the right guard band: five effective kernel supports in
/// from x_max. Level-set positions past this point are not trusted.
pub fn guard_start(kernel: &KernelSpec, grid: Grid) -> f64 {
    let (_, hi) = kernel.effective_support(SUPPORT_REL);
    grid.x_max - GUARD_SUPPORTS * hi
}

/// Evolve from the sampled initial data to `t_end`, invoking each observer
/// every `stride` steps (plus the initial and final states). Aborts with
/// `DomainExhausted` if the solution climbs above 1e-10 anywhere in the
/// right guard band.
#[allow(clippy::too_many_arguments)]
pub fn run(
    kernel: &KernelSpec,
    nl: &Nonlinearity,
    init: &InitialData,
    grid: Grid,
    t_end: f64,
    dt: f64,
    stride: usize,
    observers: &mut [&mut dyn Observer],
) -> Result<(Field, RunSummary)> {
    let mut field = make_initial(init, grid)?;
    let mut stepper = Stepper::new(kernel, nl.clone(), grid, BoundaryMode::Zero)?;

    let guard_start = guard_start(kernel, grid);
    if guard_start <= grid.x_min {
        return Err(Error::InvalidInput(
            "grid narrower than the guard band; widen [x_min, x_max]".into(),
        ));
    }
    let guard_idx = ((guard_start - grid.x_min) / grid.dx()).ceil() as usize;

    let mut max_guard = 0.0f64;
    let check_guard = |field: &Field, max_guard: &mut f64| -> Result<()> {
        let m = field.values[guard_idx..].iter().cloned().fold(0.0f64, f64::max);
        *max_guard = max_guard.max(m);
        if m > GUARD_LEVEL {
            return Err(Error::DomainExhausted { t: field.t });
        }
        Ok(())
    };

    check_guard(&field, &mut max_guard)?;
    for obs in observers.iter_mut() {
        obs.observe(&field);
    }

    let n_steps = if t_end <= 0.0 { 0 } else { (t_end / dt).round() as usize };
    let stride = stride.max(1);
    for s in 1..=n_steps {
        stepper.step(&mut field, dt)?;
        if s % stride == 0 || s == n_steps {
            check_guard(&field, &mut max_guard)?;
            for obs in observers.iter_mut() {
                obs.observe(&field);
            }
        }
    }

    let summary = RunSummary {
        steps: n_steps,
        final_t: field.t,
        guard_start,
        max_guard_contamination: max_guard,
        max_preprojection_violation: stepper.max_violation,
    };
    Ok((field, summary))
}
