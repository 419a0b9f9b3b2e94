//! Core parameter and data types shared by every other module.
//!
//! The structural vector is fixed as theta = (gamma, delta, psi) and the
//! reduced-form vector as lambda = (delta, psi, rho, sigma_u^2, sigma_eps^2).
//! Every Jacobian, covariance, and influence-function panel in this crate
//! follows these two orderings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Structural parameters of the learning Phillips curve.
///
/// `gamma` is the constant learning gain, `delta` the discount on expected
/// inflation, and `psi` the slope on the driving variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralParams {
    pub gamma: f64,
    pub delta: f64,
    pub psi: f64,
}

impl StructuralParams {
    /// Construct with the basic stability restrictions: gamma in (0,1),
    /// |delta| < 1, psi finite.
    pub fn new(gamma: f64, delta: f64, psi: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::OutOfParamSpace {
                field: "gamma",
                value: gamma,
                bound: "gamma in (0, 1)".into(),
            });
        }
        if !(delta.abs() < 1.0) {
            return Err(Error::OutOfParamSpace {
                field: "delta",
                value: delta,
                bound: "|delta| < 1".into(),
            });
        }
        if !psi.is_finite() {
            return Err(Error::OutOfParamSpace {
                field: "psi",
                value: psi,
                bound: "psi finite".into(),
            });
        }
        Ok(Self { gamma, delta, psi })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.gamma, self.delta, self.psi]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self {
            gamma: v[0],
            delta: v[1],
            psi: v[2],
        }
    }
}

/// Auxiliary parameters: the AR(1) driving process and the shock scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxParams {
    /// AR(1) intercept.
    pub a: f64,
    /// AR(1) persistence.
    pub rho: f64,
    /// Standard deviation of the inflation shock.
    pub sigma_u: f64,
    /// Standard deviation of the AR(1) innovation.
    pub sigma_eps: f64,
}

impl AuxParams {
    pub fn new(a: f64, rho: f64, sigma_u: f64, sigma_eps: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::OutOfParamSpace {
                field: "a",
                value: a,
                bound: "a finite".into(),
            });
        }
        if !(rho.abs() < 1.0) {
            return Err(Error::OutOfParamSpace {
                field: "rho",
                value: rho,
                bound: "|rho| < 1".into(),
            });
        }
        if !(sigma_u > 0.0 && sigma_u.is_finite()) {
            return Err(Error::OutOfParamSpace {
                field: "sigma_u",
                value: sigma_u,
                bound: "sigma_u > 0".into(),
            });
        }
        if !(sigma_eps > 0.0 && sigma_eps.is_finite()) {
            return Err(Error::OutOfParamSpace {
                field: "sigma_eps",
                value: sigma_eps,
                bound: "sigma_eps > 0".into(),
            });
        }
        Ok(Self {
            a,
            rho,
            sigma_u,
            sigma_eps,
        })
    }

    /// Stationary mean of the AR(1) process, a / (1 - rho).
    pub fn stationary_mean(&self) -> f64 {
        self.a / (1.0 - self.rho)
    }
}

/// Reduced-form parameter vector determining the equilibrium map, ordered
/// (delta, psi, rho, sigma_u_sq, sigma_eps_sq). This ordering is a crate-wide
/// contract: every 5-vector Jacobian and covariance uses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lambda {
    pub delta: f64,
    pub psi: f64,
    pub rho: f64,
    pub sigma_u_sq: f64,
    pub sigma_eps_sq: f64,
}

impl Lambda {
    pub fn new(delta: f64, psi: f64, rho: f64, sigma_u_sq: f64, sigma_eps_sq: f64) -> Result<Self> {
        let l = Self {
            delta,
            psi,
            rho,
            sigma_u_sq,
            sigma_eps_sq,
        };
        for (name, v) in [
            ("delta", delta),
            ("psi", psi),
            ("rho", rho),
            ("sigma_u_sq", sigma_u_sq),
            ("sigma_eps_sq", sigma_eps_sq),
        ] {
            if !v.is_finite() {
                return Err(Error::OutOfParamSpace {
                    field: name,
                    value: v,
                    bound: "finite".into(),
                });
            }
        }
        if !(sigma_u_sq > 0.0) {
            return Err(Error::OutOfParamSpace {
                field: "sigma_u_sq",
                value: sigma_u_sq,
                bound: "variance > 0".into(),
            });
        }
        if !(sigma_eps_sq > 0.0) {
            return Err(Error::OutOfParamSpace {
                field: "sigma_eps_sq",
                value: sigma_eps_sq,
                bound: "variance > 0".into(),
            });
        }
        Ok(l)
    }

    pub fn from_parts(theta: &StructuralParams, aux: &AuxParams) -> Result<Self> {
        Self::new(
            theta.delta,
            theta.psi,
            aux.rho,
            aux.sigma_u * aux.sigma_u,
            aux.sigma_eps * aux.sigma_eps,
        )
    }

    pub fn as_array(&self) -> [f64; 5] {
        [
            self.delta,
            self.psi,
            self.rho,
            self.sigma_u_sq,
            self.sigma_eps_sq,
        ]
    }

    pub fn from_array(v: [f64; 5]) -> Self {
        Self {
            delta: v[0],
            psi: v[1],
            rho: v[2],
            sigma_u_sq: v[3],
            sigma_eps_sq: v[4],
        }
    }
}

/// Box constraints Theta = Gamma x Delta x Psi for the NLS search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub delta_lo: f64,
    pub delta_hi: f64,
    pub psi_lo: f64,
    pub psi_hi: f64,
}

impl ParamSpace {
    pub fn new(
        gamma_lo: f64,
        gamma_hi: f64,
        delta_lo: f64,
        delta_hi: f64,
        psi_lo: f64,
        psi_hi: f64,
    ) -> Result<Self> {
        if !(0.0 < gamma_lo && gamma_lo < gamma_hi && gamma_hi < 1.0) {
            return Err(Error::OutOfParamSpace {
                field: "gamma bounds",
                value: gamma_lo,
                bound: "0 < gamma_lo < gamma_hi < 1".into(),
            });
        }
        if !(0.0 < delta_lo && delta_lo < delta_hi && delta_hi < 1.0) {
            return Err(Error::OutOfParamSpace {
                field: "delta bounds",
                value: delta_lo,
                bound: "0 < delta_lo < delta_hi < 1".into(),
            });
        }
        if !(psi_lo < psi_hi && psi_lo.is_finite() && psi_hi.is_finite()) {
            return Err(Error::OutOfParamSpace {
                field: "psi bounds",
                value: psi_lo,
                bound: "psi_lo < psi_hi, both finite".into(),
            });
        }
        Ok(Self {
            gamma_lo,
            gamma_hi,
            delta_lo,
            delta_hi,
            psi_lo,
            psi_hi,
        })
    }

    pub fn contains(&self, theta: &StructuralParams) -> bool {
        self.validate(theta).is_ok()
    }

    fn validate(&self, theta: &StructuralParams) -> Result<()> {
        if theta.gamma < self.gamma_lo || theta.gamma > self.gamma_hi {
            return Err(Error::OutOfParamSpace {
                field: "gamma",
                value: theta.gamma,
                bound: format!("[{}, {}]", self.gamma_lo, self.gamma_hi),
            });
        }
        if theta.delta < self.delta_lo || theta.delta > self.delta_hi {
            return Err(Error::OutOfParamSpace {
                field: "delta",
                value: theta.delta,
                bound: format!("[{}, {}]", self.delta_lo, self.delta_hi),
            });
        }
        if theta.psi < self.psi_lo || theta.psi > self.psi_hi {
            return Err(Error::OutOfParamSpace {
                field: "psi",
                value: theta.psi,
                bound: format!("[{}, {}]", self.psi_lo, self.psi_hi),
            });
        }
        Ok(())
    }

    /// Whether `theta` lies strictly inside the box.
    pub fn interior(&self, theta: &StructuralParams) -> bool {
        theta.gamma > self.gamma_lo
            && theta.gamma < self.gamma_hi
            && theta.delta > self.delta_lo
            && theta.delta < self.delta_hi
            && theta.psi > self.psi_lo
            && theta.psi < self.psi_hi
    }

    /// Clamp `theta` into the box, reporting whether any coordinate moved.
    pub fn project(&self, theta: &StructuralParams) -> (StructuralParams, bool) {
        let g = theta.gamma.clamp(self.gamma_lo, self.gamma_hi);
        let d = theta.delta.clamp(self.delta_lo, self.delta_hi);
        let p = theta.psi.clamp(self.psi_lo, self.psi_hi);
        let moved = g != theta.gamma || d != theta.delta || p != theta.psi;
        (
            StructuralParams {
                gamma: g,
                delta: d,
                psi: p,
            },
            moved,
        )
    }
}

impl Default for ParamSpace {
    /// Default search box: Gamma = [0.001, 0.30], Delta = [0.01, 0.9999],
    /// Psi = [-10, 10]. The gamma range covers the gains typically reported
    /// in empirical work; delta is restricted to positive discounting (use
    /// [`ParamSpace::with_two_sided_delta`] for the two-sided variant).
    fn default() -> Self {
        Self {
            gamma_lo: 0.001,
            gamma_hi: 0.30,
            delta_lo: 0.01,
            delta_hi: 0.9999,
            psi_lo: -10.0,
            psi_hi: 10.0,
        }
    }
}

impl ParamSpace {
    /// Variant of the default space allowing negative discount values.
    /// The two-sided region is approximated by its convex hull; the inner
    /// OLS step never pins delta to zero exactly, so the excluded sliver
    /// around zero is immaterial for search purposes.
    pub fn with_two_sided_delta(mut self) -> Self {
        self.delta_lo = -self.delta_hi;
        self
    }
}

/// Validate a structural parameter vector against a search box.
///
/// Returns the parameters unchanged when they lie inside the closed box,
/// otherwise an error naming the violated bound. Validation is idempotent.
pub fn validate_theta(theta: StructuralParams, space: &ParamSpace) -> Result<StructuralParams> {
    StructuralParams::new(theta.gamma, theta.delta, theta.psi)?;
    space.validate(&theta)?;
    Ok(theta)
}

/// Validate a reduced-form vector. With `require_pos_rho` the persistence
/// must be strictly positive and psi non-zero, the conditions under which at
/// least one equilibrium exists on [0, 1].
pub fn validate_lambda(lambda: Lambda, require_pos_rho: bool) -> Result<Lambda> {
    let l = Lambda::new(
        lambda.delta,
        lambda.psi,
        lambda.rho,
        lambda.sigma_u_sq,
        lambda.sigma_eps_sq,
    )?;
    if !(l.rho.abs() < 1.0) {
        return Err(Error::OutOfParamSpace {
            field: "rho",
            value: l.rho,
            bound: "|rho| < 1".into(),
        });
    }
    if require_pos_rho {
        if !(l.rho > 0.0) {
            return Err(Error::OutOfParamSpace {
                field: "rho",
                value: l.rho,
                bound: "rho in (0, 1)".into(),
            });
        }
        if l.psi == 0.0 {
            return Err(Error::OutOfParamSpace {
                field: "psi",
                value: l.psi,
                bound: "psi != 0".into(),
            });
        }
    }
    Ok(l)
}

/// An observed sample of inflation and slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pi: Vec<f64>,
    y: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(pi: Vec<f64>, y: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if pi.len() != y.len() {
            return Err(Error::InvalidData(format!(
                "series lengths differ: pi has {}, y has {}",
                pi.len(),
                y.len()
            )));
        }
        if pi.len() < 10 {
            return Err(Error::InvalidData(format!(
                "need at least 10 observations, got {}",
                pi.len()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != pi.len() {
                return Err(Error::InvalidData("label length mismatch".into()));
            }
        }
        for (t, (&p, &yy)) in pi.iter().zip(&y).enumerate() {
            if !p.is_finite() || !yy.is_finite() {
                return Err(Error::InvalidData(format!(
                    "non-finite entry at row {} (pi = {p}, y = {yy})",
                    t + 1
                )));
            }
        }
        Ok(Self { pi, y, labels })
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// Number of observations usable by the regression modules. The first
    /// period only seeds the learning recursion, so estimation works with
    /// the remaining `len() - 1` rows (t = 2, ..., n).
    pub fn usable_len(&self) -> usize {
        self.len() - 1
    }
}
