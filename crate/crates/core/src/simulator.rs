//! Synthetic data generation for the learning economy.
//!
//! The data-generating process couples an AR(1) driving variable, the actual
//! law of motion for inflation implied by the agents' beliefs, and the
//! constant-gain learning recursions updating those beliefs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::domain::{AuxParams, StructuralParams};
use crate::error::{Error, Result};
use crate::filter::{SacState, R_FLOOR};

/// Configuration of a single simulated path.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimConfig {
    pub theta: StructuralParams,
    pub aux: AuxParams,
    /// Number of retained periods.
    pub n: usize,
    /// Initial periods simulated and discarded; learner state carries across
    /// the cut.
    #[serde(default)]
    pub burn_in: usize,
    pub seed: u64,
    /// Independent stream index; replication k of a batch uses stream
    /// `base + k` of the same seed.
    #[serde(default)]
    pub stream: u64,
    /// Initial inflation (and initial belief alpha_0). Defaults to 0.
    #[serde(default)]
    pub init_pi: f64,
    /// Initial slack. Defaults to the stationary mean a / (1 - rho).
    #[serde(default)]
    pub init_y: Option<f64>,
    /// With the guard disabled, an r below the floor is an error instead of
    /// a skipped belief update.
    #[serde(default)]
    pub disable_r_guard: bool,
}

impl SimConfig {
    pub fn new(theta: StructuralParams, aux: AuxParams, n: usize, seed: u64) -> Self {
        Self {
            theta,
            aux,
            n,
            burn_in: 0,
            seed,
            stream: 0,
            init_pi: 0.0,
            init_y: None,
            disable_r_guard: false,
        }
    }

    /// Monte Carlo scenario with three distinct equilibria.
    pub fn scenario_a(n: usize, seed: u64) -> Self {
        Self::new(
            StructuralParams {
                gamma: 0.076,
                delta: 0.998,
                psi: 0.090,
            },
            AuxParams {
                a: -0.02,
                rho: 0.93,
                sigma_u: 0.44,
                sigma_eps: 0.76,
            },
            n,
            seed,
        )
    }

    /// Monte Carlo scenario with a simple and a repeated equilibrium.
    pub fn scenario_b(n: usize, seed: u64) -> Self {
        Self::new(
            StructuralParams {
                gamma: 0.076,
                delta: 0.95,
                psi: 0.2734,
            },
            AuxParams {
                a: -0.02,
                rho: 0.9,
                sigma_u: 1.0,
                sigma_eps: 1.0,
            },
            n,
            seed,
        )
    }
}

/// A simulated path: observables, latent learner states, and shocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPath {
    pub pi: Vec<f64>,
    pub y: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub eps: Vec<f64>,
}

impl SimPath {
    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// CSV serialisation with columns t, pi, y, alpha, beta, r, u, eps.
    /// Values use the shortest round-trip representation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,pi,y,alpha,beta,r,u,eps\n");
        for t in 0..self.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                t + 1,
                self.pi[t],
                self.y[t],
                self.alpha[t],
                self.beta[t],
                self.r[t],
                self.u[t],
                self.eps[t]
            ));
        }
        out
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Simulate one path with Gaussian shocks. Deterministic given
/// `(seed, stream)`.
pub fn simulate(config: &SimConfig) -> Result<SimPath> {
    let su = Normal::new(0.0, config.aux.sigma_u).map_err(|_| Error::OutOfParamSpace {
        field: "sigma_u",
        value: config.aux.sigma_u,
        bound: "sigma_u > 0".into(),
    })?;
    let se = Normal::new(0.0, config.aux.sigma_eps).map_err(|_| Error::OutOfParamSpace {
        field: "sigma_eps",
        value: config.aux.sigma_eps,
        bound: "sigma_eps > 0".into(),
    })?;
    simulate_with_shocks(config, su, se)
}

/// Simulate with caller-supplied IID shock distributions for `u` and `eps`.
/// The distributions must already carry the desired scales.
pub fn simulate_with_shocks<Du, De>(config: &SimConfig, shock_u: Du, shock_eps: De) -> Result<SimPath>
where
    Du: Distribution<f64>,
    De: Distribution<f64>,
{
    if config.n == 0 {
        return Err(Error::InvalidData("n must be at least 1".into()));
    }
    StructuralParams::new(config.theta.gamma, config.theta.delta, config.theta.psi)?;
    AuxParams::new(
        config.aux.a,
        config.aux.rho,
        config.aux.sigma_u,
        config.aux.sigma_eps,
    )?;

    let mut rng = rng_for(config.seed, config.stream);
    let theta = config.theta;
    let aux = config.aux;
    let total = config.burn_in + config.n;

    let mut path = SimPath {
        pi: Vec::with_capacity(config.n),
        y: Vec::with_capacity(config.n),
        alpha: Vec::with_capacity(config.n),
        beta: Vec::with_capacity(config.n),
        r: Vec::with_capacity(config.n),
        u: Vec::with_capacity(config.n),
        eps: Vec::with_capacity(config.n),
    };

    let mut state = SacState::new(config.init_pi);
    let mut prev_pi = config.init_pi;
    let mut prev_y = config.init_y.unwrap_or_else(|| aux.stationary_mean());

    for t in 0..total {
        let eps_t = shock_eps.sample(&mut rng);
        let u_t = shock_u.sample(&mut rng);
        let y_t = aux.a + aux.rho * prev_y + eps_t;
        // Actual law of motion given last period's beliefs.
        let pi_t = theta.delta * (state.alpha + state.beta * state.beta * (prev_pi - state.alpha))
            + theta.psi * y_t
            + u_t;
        let (_, updated) = state.step(pi_t, theta.gamma);
        if !updated && config.disable_r_guard {
            return Err(Error::DegenerateVariance(format!(
                "r fell below {R_FLOOR:.0e} at period {} with the guard disabled",
                t + 1
            )));
        }
        prev_pi = pi_t;
        prev_y = y_t;
        if t >= config.burn_in {
            path.pi.push(pi_t);
            path.y.push(y_t);
            path.alpha.push(state.alpha);
            path.beta.push(state.beta);
            path.r.push(state.r);
            path.u.push(u_t);
            path.eps.push(eps_t);
        }
    }

    // The recursion keeps beta inside [-1, 1] on any full-support path; a
    // violation is a bug, not data, so it is reported rather than clipped.
    const TOL_BETA: f64 = 1e-9;
    if let Some(&b) = path
        .beta
        .iter()
        .find(|b| b.abs() > 1.0 + TOL_BETA || !b.is_finite())
    {
        return Err(Error::InvalidData(format!(
            "belief beta left [-1, 1] (beta = {b}); simulated state space violated"
        )));
    }

    Ok(path)
}

/// Simulate `reps` independent replications. Replication k uses stream
/// `config.stream + k`, so results do not depend on evaluation order and a
/// single-replication batch coincides with [`simulate`].
pub fn simulate_batch(config: &SimConfig, reps: usize) -> Result<Vec<SimPath>> {
    if reps == 0 {
        return Err(Error::InvalidData("reps must be at least 1".into()));
    }
    (0..reps)
        .map(|k| {
            let mut c = *config;
            c.stream = config.stream + k as u64;
            simulate(&c)
        })
        .collect()
}

/// Sample from the standard normal, scaled. Exposed for tests that check
/// shock moments without going through a full path.
pub fn gaussian_sample(rng: &mut ChaCha8Rng, sigma: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    sigma * z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Dataset;
    use crate::filter::{run_filter, InitPolicy};

    #[test]
    fn deterministic_given_seed() {
        let cfg = SimConfig::scenario_a(300, 7);
        let p1 = simulate(&cfg).unwrap();
        let p2 = simulate(&cfg).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn batch_rep_zero_matches_simulate() {
        let cfg = SimConfig::scenario_a(100, 11);
        let batch = simulate_batch(&cfg, 2).unwrap();
        assert_eq!(batch[0], simulate(&cfg).unwrap());
        assert_ne!(batch[0], batch[1]);
    }

    #[test]
    fn reconstruction_identities() {
        let cfg = SimConfig::scenario_a(500, 3);
        let p = simulate(&cfg).unwrap();
        let aux = cfg.aux;
        let theta = cfg.theta;
        // y_t = a + rho y_{t-1} + eps_t, exactly.
        for t in 1..p.len() {
            let lhs = p.y[t];
            let rhs = aux.a + aux.rho * p.y[t - 1] + p.eps[t];
            assert_eq!(lhs, rhs);
        }
        // pi_t = delta [alpha_{t-1} + beta_{t-1}^2 (pi_{t-1} - alpha_{t-1})]
        //        + psi y_t + u_t, exactly.
        for t in 1..p.len() {
            let rhs = theta.delta
                * (p.alpha[t - 1] + p.beta[t - 1] * p.beta[t - 1] * (p.pi[t - 1] - p.alpha[t - 1]))
                + theta.psi * p.y[t]
                + p.u[t];
            assert_eq!(p.pi[t], rhs);
        }
        assert_eq!(p.beta[0], 0.0);
        assert!(p.r.iter().all(|&r| r >= 0.0));
    }

    #[test]
    fn filter_reproduces_latent_states_bit_for_bit() {
        let cfg = SimConfig::scenario_a(400, 21);
        let p = simulate(&cfg).unwrap();
        let data = Dataset::new(p.pi.clone(), p.y.clone(), None).unwrap();
        let path = run_filter(&data, cfg.theta.gamma, InitPolicy::Fixed(cfg.init_pi), false).unwrap();
        for t in 0..p.len() {
            assert_eq!(path.alpha[t], p.alpha[t], "alpha at t={t}");
            assert_eq!(path.beta[t], p.beta[t], "beta at t={t}");
            assert_eq!(path.r[t], p.r[t], "r at t={t}");
        }
    }

    #[test]
    fn noise_free_fixed_point_stays_put() {
        // With zero shocks and the economy started at its mean, inflation
        // never moves and beliefs stay degenerate under the guard.
        let theta = StructuralParams {
            gamma: 0.076,
            delta: 0.998,
            psi: 0.090,
        };
        let aux = AuxParams {
            a: -0.02,
            rho: 0.93,
            sigma_u: 1.0, // scale irrelevant; shocks injected as zero below
            sigma_eps: 1.0,
        };
        let mean_pi = theta.psi * aux.a / ((1.0 - aux.rho) * (1.0 - theta.delta));
        let mut cfg = SimConfig::new(theta, aux, 50, 0);
        cfg.init_pi = mean_pi;
        cfg.init_y = Some(aux.stationary_mean());
        // Degenerate "distributions" delivering exactly zero.
        let zero = rand_distr::Uniform::new_inclusive(0.0, 0.0).unwrap();
        let p = simulate_with_shocks(&cfg, zero, zero).unwrap();
        for t in 0..p.len() {
            assert!((p.pi[t] - mean_pi).abs() < 1e-9, "pi drifted at t={t}");
            assert_eq!(p.beta[t], 0.0);
        }
    }

    #[test]
    fn burn_in_carries_learner_state() {
        let mut cfg = SimConfig::scenario_a(200, 5);
        cfg.burn_in = 100;
        let p = simulate(&cfg).unwrap();
        let mut cfg_full = cfg;
        cfg_full.burn_in = 0;
        cfg_full.n = 300;
        let full = simulate(&cfg_full).unwrap();
        assert_eq!(&full.pi[100..], &p.pi[..]);
        assert_eq!(&full.beta[100..], &p.beta[..]);
    }

    #[test]
    fn initial_condition_forgotten_geometrically() {
        // Fast-forgetting parameterisation: the pathwise contraction factor
        // is roughly 1 - gamma (1 - delta) per period, so gamma = 0.2 and
        // delta = 0.5 wash out a shift of 10 well below 1e-6 within 250
        // periods.
        let theta = StructuralParams {
            gamma: 0.2,
            delta: 0.5,
            psi: 1.0,
        };
        let aux = AuxParams {
            a: 0.1,
            rho: 0.5,
            sigma_u: 1.0,
            sigma_eps: 1.0,
        };
        let base = SimConfig::new(theta, aux, 500, 13);
        let mut shifted = base;
        shifted.init_pi = base.init_pi + 10.0;
        let p0 = simulate(&base).unwrap();
        let p1 = simulate(&shifted).unwrap();
        let worst = (250..500)
            .map(|t| (p0.pi[t] - p1.pi[t]).abs())
            .fold(0.0_f64, f64::max);
        assert!(worst < 1e-6, "paths still differ by {worst}");
    }

    #[test]
    fn slow_economies_forget_at_their_geometric_rate() {
        // Scenario A has delta near one, so forgetting is geometric but
        // slow: the gap should shrink by roughly (1 - gamma (1 - delta))^t,
        // clearly below the initial shift but far from zero at t = 500.
        let base = SimConfig::scenario_a(500, 13);
        let mut shifted = base;
        shifted.init_pi = base.init_pi + 10.0;
        let p0 = simulate(&base).unwrap();
        let p1 = simulate(&shifted).unwrap();
        let gap0 = 10.0;
        let gap_end = (p0.pi[499] - p1.pi[499]).abs();
        assert!(gap_end < gap0, "no contraction at all: {gap_end}");
        assert!(gap_end > 0.0);
        // Monotone decay on average: compare first and last quarters.
        let early: f64 = (0..125).map(|t| (p0.pi[t] - p1.pi[t]).abs()).sum::<f64>() / 125.0;
        let late: f64 = (375..500).map(|t| (p0.pi[t] - p1.pi[t]).abs()).sum::<f64>() / 125.0;
        assert!(late < early, "late gap {late} not below early gap {early}");
    }

    #[test]
    fn gaussian_shock_variance() {
        let mut rng = rng_for(99, 0);
        let n = 1_000_000;
        let sigma = 0.44;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let z = gaussian_sample(&mut rng, sigma);
            sum += z;
            sumsq += z * z;
        }
        let var = sumsq / n as f64 - (sum / n as f64).powi(2);
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.01);
    }
}
