//! Constant-gain learning recursions applied to observed data.
//!
//! Given a series of inflation observations and a candidate gain, this module
//! reconstructs the agents' belief path: the recursive mean `alpha`, the
//! discounted second moment `r`, the autocorrelation belief `beta`, and the
//! implied one-step predictor `h = alpha + beta^2 (pi - alpha)`. It also
//! propagates the analytic gain-derivatives of each state, which feed the
//! influence-function construction in the inference module.
//!
//! The recursions are seeded with a fictitious period-0 observation equal to
//! the chosen initial value: alpha_0 = pi_0 = a0. That convention forces
//! beta_1 = 0 regardless of how beta and r are initialised, and the whole
//! path forgets a0 at a geometric rate.

use serde::{Deserialize, Serialize};

use crate::domain::Dataset;
use crate::domain::StructuralParams;
use crate::error::{Error, Result};

/// Minimum admissible value of the discounted second moment `r`. Below this
/// the belief update is skipped: the state space requires r > 0, and inputs
/// that keep it at zero (constant series) have a zero-increment update
/// anyway.
pub const R_FLOOR: f64 = 1e-12;

/// How the learning recursion is initialised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitPolicy {
    /// Use the given value for alpha_0 = pi_0.
    Fixed(f64),
    /// Use the first observation of the sample (the default).
    FirstObs,
    /// Treat the initial value as a parameter; resolved by the NLS grid
    /// search, not by the filter itself.
    Estimated,
}

impl Default for InitPolicy {
    fn default() -> Self {
        InitPolicy::FirstObs
    }
}

impl InitPolicy {
    /// Resolve to a concrete initial value, or fail for `Estimated`, which
    /// only has meaning inside the estimation grid.
    pub(crate) fn resolve(&self, pi: &[f64]) -> Result<f64> {
        match self {
            InitPolicy::Fixed(v) => {
                if v.is_finite() {
                    Ok(*v)
                } else {
                    Err(Error::InvalidData("non-finite initial value".into()))
                }
            }
            InitPolicy::FirstObs => Ok(pi[0]),
            InitPolicy::Estimated => Err(Error::InvalidData(
                "InitPolicy::Estimated is resolved by fit_nls, not by the filter".into(),
            )),
        }
    }
}

/// One learner state. Shared by the simulator and the filter so that
/// filtering a simulated path with the true gain reproduces the latent
/// states bit for bit.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SacState {
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub prev_pi: f64,
}

impl SacState {
    pub fn new(a0: f64) -> Self {
        Self {
            alpha: a0,
            beta: 0.0,
            r: 0.0,
            prev_pi: a0,
        }
    }

    /// Advance the state on observation `pi`. Returns `(x_t, updated)` where
    /// `x_t = pi_t - alpha_{t-1}` and `updated` is false when the r-floor
    /// guard skipped the beta update.
    pub fn step(&mut self, pi: f64, gamma: f64) -> (f64, bool) {
        let x = pi - self.alpha;
        let alpha_new = (1.0 - gamma) * self.alpha + gamma * pi;
        let r_new = (1.0 - gamma) * self.r + gamma * x * x;
        let updated = r_new >= R_FLOOR;
        if updated {
            self.beta += gamma / r_new * (x * (self.prev_pi - self.alpha) - self.beta * x * x);
        }
        self.alpha = alpha_new;
        self.r = r_new;
        self.prev_pi = pi;
        (x, updated)
    }

    pub fn h(&self, pi: f64) -> f64 {
        self.alpha + self.beta * self.beta * (pi - self.alpha)
    }
}

/// Gain-derivatives of the learner state, propagated alongside the levels.
#[derive(Debug, Clone, Copy, Default)]
struct SacDerivState {
    alpha_dot: f64,
    r_dot: f64,
    beta_dot: f64,
    prev_x: f64,
}

impl SacDerivState {
    /// Advance the derivative state. Must be called with the *pre-step*
    /// levels (`state`) and the just-computed `x_t`, `r_t`, and guard flag.
    fn step(&mut self, state: &SacState, pi: f64, gamma: f64, x: f64, r_new: f64, updated: bool) {
        let alpha_dot_new = (1.0 - gamma) * self.alpha_dot - state.alpha + pi;
        let r_dot_new = (1.0 - gamma) * self.r_dot + x * (x - 2.0 * gamma * self.alpha_dot) - state.r;
        if updated {
            self.beta_dot += (1.0 / r_new)
                * (1.0 - gamma * r_dot_new / r_new)
                * ((1.0 - gamma) * self.prev_x * x - state.beta * x * x)
                + (gamma / r_new)
                    * (2.0 * state.beta * x * self.alpha_dot
                        - self.alpha_dot * ((1.0 - gamma) * self.prev_x + x)
                        - self.beta_dot * x * x);
        }
        self.alpha_dot = alpha_dot_new;
        self.r_dot = r_dot_new;
        self.prev_x = x;
    }
}

/// Gain-derivative series of a [`LearnerPath`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerDerivs {
    pub alpha_dot: Vec<f64>,
    pub r_dot: Vec<f64>,
    pub beta_dot: Vec<f64>,
    pub h_dot: Vec<f64>,
}

/// Belief path implied by a data series and a candidate gain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerPath {
    pub gamma: f64,
    /// The resolved initial value a0.
    pub init_value: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub r: Vec<f64>,
    /// Surprise series x_t = pi_t - alpha_{t-1}.
    pub x: Vec<f64>,
    /// Predictor series h_t = alpha_t + beta_t^2 (pi_t - alpha_t).
    pub h: Vec<f64>,
    pub derivs: Option<LearnerDerivs>,
}

/// Run the learning recursions over a sample for a fixed gain.
///
/// With `with_derivatives` the analytic derivatives of (alpha, r, beta, h)
/// with respect to the gain are propagated as well.
pub fn run_filter(
    data: &Dataset,
    gamma: f64,
    init: InitPolicy,
    with_derivatives: bool,
) -> Result<LearnerPath> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::OutOfParamSpace {
            field: "gamma",
            value: gamma,
            bound: "gamma in (0, 1)".into(),
        });
    }
    let pi = data.pi();
    let a0 = init.resolve(pi)?;
    let n = pi.len();

    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    let mut x_series = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    let mut derivs = with_derivatives.then(|| LearnerDerivs {
        alpha_dot: Vec::with_capacity(n),
        r_dot: Vec::with_capacity(n),
        beta_dot: Vec::with_capacity(n),
        h_dot: Vec::with_capacity(n),
    });

    let mut state = SacState::new(a0);
    let mut dstate = SacDerivState::default();
    let mut degenerate = 0usize;

    for &p in pi {
        let pre = state;
        let (x, updated) = state.step(p, gamma);
        if !updated && x != 0.0 {
            degenerate += 1;
        }
        if let Some(d) = derivs.as_mut() {
            dstate.step(&pre, p, gamma, x, state.r, updated);
            d.alpha_dot.push(dstate.alpha_dot);
            d.r_dot.push(dstate.r_dot);
            d.beta_dot.push(dstate.beta_dot);
            let hd = (1.0 - state.beta * state.beta) * dstate.alpha_dot
                + 2.0 * state.beta * dstate.beta_dot * (p - state.alpha);
            d.h_dot.push(hd);
        }
        alpha.push(state.alpha);
        beta.push(state.beta);
        r.push(state.r);
        x_series.push(x);
        h.push(state.h(p));
    }

    if 2 * degenerate > n {
        return Err(Error::DegenerateVariance(format!(
            "belief update skipped in {degenerate} of {n} periods"
        )));
    }

    Ok(LearnerPath {
        gamma,
        init_value: a0,
        alpha,
        beta,
        r,
        x: x_series,
        h,
        derivs,
    })
}

/// Regression function and residuals at a structural parameter vector.
///
/// The first observation only seeds the recursion, so both series have
/// length `n - 1` and are aligned with observations t = 2, ..., n.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSeries {
    /// f_t = delta * h_{t-1} + psi * y_t.
    pub f: Vec<f64>,
    /// Residuals u_t = pi_t - f_t.
    pub residuals: Vec<f64>,
}

pub fn regression_function(
    data: &Dataset,
    theta: &StructuralParams,
    init: InitPolicy,
) -> Result<RegressionSeries> {
    let path = run_filter(data, theta.gamma, init, false)?;
    Ok(regression_from_path(data, theta, &path))
}

pub(crate) fn regression_from_path(
    data: &Dataset,
    theta: &StructuralParams,
    path: &LearnerPath,
) -> RegressionSeries {
    let pi = data.pi();
    let y = data.y();
    let m = data.usable_len();
    let mut f = Vec::with_capacity(m);
    let mut residuals = Vec::with_capacity(m);
    for t in 1..data.len() {
        let ft = theta.delta * path.h[t - 1] + theta.psi * y[t];
        f.push(ft);
        residuals.push(pi[t] - ft);
    }
    RegressionSeries { f, residuals }
}

/// Gradient of the regression function in the fixed (gamma, delta, psi)
/// ordering: (delta * h_dot_{t-1}, h_{t-1}, y_t). Length `n - 1`, aligned
/// with observations t = 2, ..., n.
pub fn gradient_series(
    data: &Dataset,
    theta: &StructuralParams,
    init: InitPolicy,
) -> Result<Vec<[f64; 3]>> {
    let path = run_filter(data, theta.gamma, init, true)?;
    let d = path.derivs.as_ref().expect("derivatives requested");
    let y = data.y();
    let mut out = Vec::with_capacity(data.usable_len());
    for t in 1..data.len() {
        out.push([theta.delta * d.h_dot[t - 1], path.h[t - 1], y[t]]);
    }
    Ok(out)
}
