//! Inference for the structural parameters and the equilibrium curve.
//!
//! Standard errors come from a numerical Hessian of the NLS objective
//! (second central differences), the presence of the forward-looking term is
//! tested by a sup-F statistic with Gaussian multiplier bootstrap critical
//! values, and uniform confidence bands for the curve beta -> G(beta) are
//! built from feasible influence functions of the reduced-form estimate.

use nalgebra::{Matrix3, SMatrix, SVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::domain::{Dataset, Lambda, ParamSpace, StructuralParams};
use crate::equilibria::{eval_g_derivatives, EquilibriaReport, RootClass};
use crate::error::{Error, Result};
use crate::estimation::{log_grid, objective, ArFit, NlsFit};
use crate::filter::{run_filter, InitPolicy};

type Matrix5 = SMatrix<f64, 5, 5>;
type Vector5 = SVector<f64, 5>;

fn std_normal() -> Normal {
    Normal::standard()
}

/// Two-sided normal quantile z_{1 - alpha/2}.
pub(crate) fn normal_quantile_two_sided(alpha: f64) -> f64 {
    std_normal().inverse_cdf(1.0 - alpha / 2.0)
}

/// Step-size rule for the numerical Hessian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StepRule {
    /// ell_n = n^{-1/4}, which satisfies ell -> 0 with sqrt(n) ell -> inf.
    RootNQuarter,
    Fixed(f64),
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule::RootNQuarter
    }
}

/// Numerical Hessian estimate of A = E[f_dot f_dot'] with diagnostics.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HessianEstimate {
    pub a: [[f64; 3]; 3],
    pub step_used: f64,
    /// True when the requested step had to shrink to keep the gain inside
    /// its admissible range.
    pub step_shrunk: bool,
    pub eigenvalues: [f64; 3],
}

/// Second central differences of a generic objective with per-coordinate
/// steps; exact on quadratics. The raw Hessian of `q` is divided by
/// 2*scale, matching the convention A = (1/2n) d^2 Q.
pub fn hessian_of<F: FnMut(&[f64; 3]) -> Result<f64>>(
    mut q: F,
    theta: &[f64; 3],
    steps: &[f64; 3],
    scale: f64,
) -> Result<Matrix3<f64>> {
    let mut a = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                let mut th = *theta;
                th[i] += si * steps[i];
                th[j] += sj * steps[j];
                q(&th)
            };
            let qpp = corner(1.0, 1.0)?;
            let qmp = corner(-1.0, 1.0)?;
            let qpm = corner(1.0, -1.0)?;
            let qmm = corner(-1.0, -1.0)?;
            let v = (qpp - qmp - qpm + qmm) / (4.0 * steps[i] * steps[j]) / (2.0 * scale);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Ok(a)
}

/// Eigenvalues (ascending) and inverse of a symmetric 3x3 matrix.
fn sym_eigen(a: &Matrix3<f64>) -> ([f64; 3], Matrix3<f64>) {
    let eig = a.symmetric_eigen();
    let mut vals = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let raw = eig.eigenvectors
        * Matrix3::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v))
        * eig.eigenvectors.transpose();
    // Rounding in the triple product can leave a 1-ulp asymmetry.
    let inv = Matrix3::from_fn(|i, j| 0.5 * (raw[(i, j)] + raw[(j, i)]));
    (vals, inv)
}

/// Numerical Hessian of the NLS objective at `theta`, scaled so that it
/// estimates A = E[f_dot f_dot'].
///
/// `step` is the base step. The objective is exactly quadratic in
/// (delta, psi), so those coordinates use the base step as is; the gain
/// coordinate is both small in magnitude and the only one with genuine
/// curvature variation, so its step is scaled by |gamma| and shrunk (with a
/// flag) to keep gamma +/- 2*step inside (0, 1) and the search range.
/// Errors with the eigenvalues when the symmetrized matrix is not positive
/// definite.
pub fn numerical_hessian(
    data: &Dataset,
    theta: &StructuralParams,
    init: InitPolicy,
    step: f64,
    space: &ParamSpace,
) -> Result<HessianEstimate> {
    let g = theta.gamma;
    let gap = (g - space.gamma_lo).min(space.gamma_hi - g).max(0.0);
    let mut eff = (step * 0.25 * g.abs().max(0.02)).min((gap / 2.0).max(1e-5));
    eff = eff.min(0.49 * g).min(0.49 * (1.0 - g));
    let shrunk = eff < step;

    let m = data.usable_len() as f64;
    let th0 = theta.as_array();
    let a = hessian_of(
        |v| {
            objective(
                data,
                &StructuralParams {
                    gamma: v[0],
                    delta: v[1],
                    psi: v[2],
                },
                init,
            )
        },
        &th0,
        &[eff, step, step],
        m,
    )?;
    let (vals, _) = sym_eigen(&a);
    if vals[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite { eigenvalues: vals });
    }
    Ok(HessianEstimate {
        a: [
            [a[(0, 0)], a[(0, 1)], a[(0, 2)]],
            [a[(1, 0)], a[(1, 1)], a[(1, 2)]],
            [a[(2, 0)], a[(2, 1)], a[(2, 2)]],
        ],
        step_used: eff,
        step_shrunk: shrunk,
        eigenvalues: vals,
    })
}

/// Wald-type inference for theta.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WaldReport {
    /// Sigma_n = sigma_u^2 A_n^{-1}.
    pub sigma_hat: [[f64; 3]; 3],
    /// sqrt(Sigma_ii / n) in the (gamma, delta, psi) ordering.
    pub std_errors: [f64; 3],
    /// t-statistics against zero.
    pub t_stats: [f64; 3],
    /// Two-sided normal p-values.
    pub p_values: [f64; 3],
    pub step_size: f64,
    pub step_shrunk: bool,
}

pub fn wald(data: &Dataset, nls: &NlsFit, step_rule: StepRule) -> Result<WaldReport> {
    let n = data.len() as f64;
    let step = match step_rule {
        StepRule::RootNQuarter => n.powf(-0.25),
        StepRule::Fixed(s) => s,
    };
    let space = ParamSpace::default();
    let hess = numerical_hessian(data, &nls.theta_hat, nls.init_used, step, &space)?;
    let a = Matrix3::from_fn(|i, j| hess.a[i][j]);
    let (_, a_inv) = sym_eigen(&a);
    let sigma = a_inv * nls.sigma_u_sq_hat;
    let m = data.usable_len() as f64;
    let mut std_errors = [0.0; 3];
    let mut t_stats = [0.0; 3];
    let mut p_values = [0.0; 3];
    let theta = nls.theta_hat.as_array();
    let norm = std_normal();
    for i in 0..3 {
        let se = (sigma[(i, i)] / m).sqrt();
        std_errors[i] = se;
        t_stats[i] = theta[i] / se;
        p_values[i] = 2.0 * (1.0 - norm.cdf(t_stats[i].abs()));
    }
    Ok(WaldReport {
        sigma_hat: [
            [sigma[(0, 0)], sigma[(0, 1)], sigma[(0, 2)]],
            [sigma[(1, 0)], sigma[(1, 1)], sigma[(1, 2)]],
            [sigma[(2, 0)], sigma[(2, 1)], sigma[(2, 2)]],
        ],
        std_errors,
        t_stats,
        p_values,
        step_size: hess.step_used,
        step_shrunk: hess.step_shrunk,
    })
}

/// sup-F test of the exclusion of the learning predictor (delta = 0), under
/// which the gain is not identified.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupFReport {
    pub statistic: f64,
    pub gamma_argmax: f64,
    pub bootstrap_stats: Vec<f64>,
    pub p_value: f64,
    #[serde(rename = "B")]
    pub b: usize,
}

/// Bootstrap p-value of a statistic against replicate draws.
pub(crate) fn bootstrap_p_value(statistic: f64, replicates: &[f64]) -> f64 {
    let hits = replicates.iter().filter(|&&s| statistic <= s).count();
    hits as f64 / replicates.len() as f64
}

/// Run the sup-F test.
///
/// The statistic is the supremum over the gain grid of
/// F_n(gamma) = n (sigma_tilde^2 - sigma_hat^2(gamma)) / sigma_hat^2(gamma),
/// where sigma_tilde^2 comes from the restricted regression of pi on y alone
/// and sigma_hat^2(gamma) from the profiled objective. Critical values come
/// from a Gaussian multiplier bootstrap with the regressors held fixed:
/// replicate b draws IID standard normals as the dependent variable and
/// computes the squared t-statistic for the exclusion of the predictor
/// residualised on (1, y_t), supping over the same grid.
pub fn supf_test(data: &Dataset, space: &ParamSpace, b_reps: usize, seed: u64) -> Result<SupFReport> {
    if b_reps < 99 {
        return Err(Error::InvalidData(format!(
            "need at least 99 bootstrap replications, got {b_reps}"
        )));
    }
    let n = data.len();
    let m = data.usable_len();
    let pi = data.pi();
    let y = data.y();

    // Restricted fit: pi on y without intercept, t = 2..n.
    let mut syy = 0.0;
    let mut syp = 0.0;
    for t in 1..n {
        syy += y[t] * y[t];
        syp += y[t] * pi[t];
    }
    if syy <= 0.0 {
        return Err(Error::SingularDesign { cond: f64::INFINITY });
    }
    let psi_tilde = syp / syy;
    let mut sigma_tilde_sq = 0.0;
    for t in 1..n {
        let e = pi[t] - psi_tilde * y[t];
        sigma_tilde_sq += e * e;
    }
    sigma_tilde_sq /= m as f64;

    // Centred moments of the partialling design z = (1, y_t).
    let mean_y: f64 = y[1..].iter().sum::<f64>() / m as f64;
    let syy_c: f64 = y[1..].iter().map(|v| (v - mean_y) * (v - mean_y)).sum();
    if syy_c <= 1e-12 * (1.0 + syy / m as f64) {
        return Err(Error::SingularDesign { cond: f64::INFINITY });
    }

    // Reuse the estimation grid over the gain.
    let grid = log_grid(space.gamma_lo, space.gamma_hi, 200);
    struct Slot {
        gamma: f64,
        f_stat: f64,
        h_tilde: Vec<f64>,
        ssq: f64,
    }
    let slots: Result<Vec<Slot>> = grid
        .par_iter()
        .map(|&gamma| {
            let prof = crate::estimation::profiled_objective(data, gamma, InitPolicy::FirstObs)?;
            let sigma_hat_sq = prof.rss / m as f64;
            let f_stat = m as f64 * (sigma_tilde_sq - sigma_hat_sq) / sigma_hat_sq;
            let path = run_filter(data, gamma, InitPolicy::FirstObs, false)?;
            // Partial (1, y_t) out of h_{t-1}.
            let mut mean_h = 0.0;
            for t in 1..n {
                mean_h += path.h[t - 1];
            }
            mean_h /= m as f64;
            let mut shy = 0.0;
            for t in 1..n {
                shy += (path.h[t - 1] - mean_h) * (y[t] - mean_y);
            }
            let slope = shy / syy_c;
            let mut h_tilde = Vec::with_capacity(m);
            let mut ssq = 0.0;
            for t in 1..n {
                let r = (path.h[t - 1] - mean_h) - slope * (y[t] - mean_y);
                h_tilde.push(r);
                ssq += r * r;
            }
            Ok(Slot {
                gamma,
                f_stat,
                h_tilde,
                ssq,
            })
        })
        .collect();
    let slots = slots?;

    let (mut statistic, mut gamma_argmax) = (f64::NEG_INFINITY, grid[0]);
    for s in &slots {
        if s.f_stat > statistic {
            statistic = s.f_stat;
            gamma_argmax = s.gamma;
        }
    }

    let bootstrap_stats: Vec<f64> = (0..b_reps)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let draws: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
            // Residual variance of the draws on z = (1, y).
            let mean_d: f64 = draws.iter().sum::<f64>() / m as f64;
            let mut sdy = 0.0;
            for (t, d) in draws.iter().enumerate() {
                sdy += (d - mean_d) * (y[t + 1] - mean_y);
            }
            let slope = sdy / syy_c;
            let mut rss = 0.0;
            for (t, d) in draws.iter().enumerate() {
                let e = (d - mean_d) - slope * (y[t + 1] - mean_y);
                rss += e * e;
            }
            let s_b_sq = rss / m as f64;
            let mut sup = f64::NEG_INFINITY;
            for slot in &slots {
                if slot.ssq <= 0.0 {
                    continue;
                }
                let num: f64 = draws.iter().zip(&slot.h_tilde).map(|(d, h)| d * h).sum();
                let t2 = num * num / (s_b_sq * slot.ssq);
                if t2 > sup {
                    sup = t2;
                }
            }
            sup
        })
        .collect();

    let p_value = bootstrap_p_value(statistic, &bootstrap_stats);
    Ok(SupFReport {
        statistic,
        gamma_argmax,
        bootstrap_stats,
        p_value,
        b: b_reps,
    })
}

/// Per-observation influence contributions for the reduced-form estimate,
/// ordered as lambda, with their sample covariance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InfluencePanel {
    pub phi: Vec<[f64; 5]>,
    pub omega_hat: [[f64; 5]; 5],
}

impl InfluencePanel {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub(crate) fn omega(&self) -> Matrix5 {
        Matrix5::from_fn(|i, j| self.omega_hat[i][j])
    }
}

/// Build the influence panel.
///
/// The theta-block uses A_n^{-1} f_dot_t u_t (the gain component is computed
/// and dropped when stacking the 5-vector); the rho entry is the
/// demeaned-regressor OLS influence; the two variance entries are centred
/// squared residuals, whose sample means are exactly zero.
pub fn influence_panel(
    data: &Dataset,
    nls: &NlsFit,
    ar: &ArFit,
    hess: &HessianEstimate,
) -> Result<InfluencePanel> {
    let n = data.len();
    let m = data.usable_len();
    let y = data.y();
    let pi = data.pi();
    let theta = nls.theta_hat;

    let a = Matrix3::from_fn(|i, j| hess.a[i][j]);
    let (vals, a_inv) = sym_eigen(&a);
    if vals[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite { eigenvalues: vals });
    }

    let path = run_filter(data, theta.gamma, nls.init_used, true)?;
    let d = path.derivs.as_ref().expect("derivatives requested");

    let mean_lag: f64 = (1..n).map(|t| y[t - 1]).sum::<f64>() / m as f64;
    let s_lag: f64 = (1..n)
        .map(|t| (y[t - 1] - mean_lag) * (y[t - 1] - mean_lag))
        .sum::<f64>()
        / m as f64;
    if s_lag <= 0.0 {
        return Err(Error::SingularDesign { cond: f64::INFINITY });
    }

    let mut phi = Vec::with_capacity(m);
    let mut omega = Matrix5::zeros();
    for t in 1..n {
        let u = pi[t] - theta.delta * path.h[t - 1] - theta.psi * y[t];
        let fdot = nalgebra::Vector3::new(theta.delta * d.h_dot[t - 1], path.h[t - 1], y[t]);
        let theta_inf = a_inv * fdot * u;
        let eps = y[t] - ar.a_hat - ar.rho_hat * y[t - 1];
        let row = [
            theta_inf[1],
            theta_inf[2],
            (y[t - 1] - mean_lag) * eps / s_lag,
            u * u - nls.sigma_u_sq_hat,
            eps * eps - ar.sigma_eps_sq_hat,
        ];
        let rv = Vector5::from_column_slice(&row);
        omega += rv * rv.transpose();
        phi.push(row);
    }
    omega /= m as f64;

    let mut omega_hat = [[0.0; 5]; 5];
    for (i, row) in omega_hat.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = omega[(i, j)];
        }
    }
    Ok(InfluencePanel { phi, omega_hat })
}

/// Pointwise confidence interval for one equilibrium.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RootCi {
    pub beta: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    /// Double roots converge at a non-standard rate; no interval is formed.
    pub nonstandard_rate: bool,
}

/// Delta-method intervals beta_i +/- z sqrt(J' omega J / n) at each simple
/// root; double roots are flagged instead.
pub fn root_pointwise_ci(
    report: &EquilibriaReport,
    panel: &InfluencePanel,
    alpha: f64,
) -> Vec<RootCi> {
    let m = panel.len() as f64;
    let omega = panel.omega();
    let z = normal_quantile_two_sided(alpha);
    report
        .roots
        .iter()
        .map(|r| match (r.class, r.jacobian) {
            (RootClass::Simple, Some(j)) => {
                let jv = Vector5::from_column_slice(&j);
                let var = (jv.transpose() * omega * jv)[(0, 0)];
                let se = (var / m).sqrt();
                RootCi {
                    beta: r.beta,
                    lo: Some(r.beta - z * se),
                    hi: Some(r.beta + z * se),
                    nonstandard_rate: false,
                }
            }
            _ => RootCi {
                beta: r.beta,
                lo: None,
                hi: None,
                nonstandard_rate: true,
            },
        })
        .collect()
}

/// Studentized or percentile uniform band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandMode {
    Studentized,
    Percentile,
}

/// Uniform confidence band for beta -> G(beta).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandResult {
    pub beta_grid: Vec<f64>,
    pub g_hat: Vec<f64>,
    pub s_hat: Vec<f64>,
    pub c_alpha: f64,
    pub band_lo: Vec<f64>,
    pub band_hi: Vec<f64>,
    pub mode: BandMode,
    pub alpha: f64,
    #[serde(rename = "B")]
    pub b: usize,
}

impl BandResult {
    /// Four-column TSV (beta, G, lo, hi), plot-ready.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("beta\tG\tlo\thi\n");
        for i in 0..self.beta_grid.len() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                self.beta_grid[i], self.g_hat[i], self.band_lo[i], self.band_hi[i]
            ));
        }
        out
    }
}

/// Ceiling-index empirical quantile used for bootstrap critical values.
pub(crate) fn ceiling_quantile(sorted: &[f64], level: f64) -> f64 {
    let b = sorted.len();
    let idx = ((level * b as f64).ceil() as usize).clamp(1, b);
    sorted[idx - 1]
}

pub(crate) struct BandPair {
    pub studentized: BandResult,
    pub percentile: BandResult,
}

/// One pass over the multiplier draws producing both band variants. The
/// supremum over the grid reduces to a 5-dimensional computation because
/// each bootstrap process is xi' Phi g_lambda(beta).
pub(crate) fn uniform_band_both(
    lambda: &Lambda,
    panel: &InfluencePanel,
    grid_size: usize,
    alpha: f64,
    b_reps: usize,
    seed: u64,
) -> Result<BandPair> {
    if grid_size < 2 {
        return Err(Error::InvalidData("band grid needs at least 2 points".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidData(format!("alpha = {alpha} outside (0, 1)")));
    }
    let mf = panel.len() as f64;
    let omega = panel.omega();

    let beta_grid: Vec<f64> = (0..grid_size)
        .map(|i| i as f64 / (grid_size - 1) as f64)
        .collect();
    let mut g_hat = Vec::with_capacity(grid_size);
    let mut s_hat = Vec::with_capacity(grid_size);
    let mut glam: Vec<Vector5> = Vec::with_capacity(grid_size);
    for &b in &beta_grid {
        let dv = eval_g_derivatives(b, lambda)?;
        let gl = Vector5::from_column_slice(&dv.g_lambda);
        // s(beta)^2 = g_lambda' omega g_lambda, the exact sample variance of
        // the influence projections m_t(beta).
        let s2 = (gl.transpose() * omega * gl)[(0, 0)];
        g_hat.push(dv.g);
        s_hat.push(s2.max(0.0).sqrt());
        glam.push(gl);
    }
    let min_s = s_hat.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_s < 1e-12 {
        return Err(Error::DegenerateScale(min_s));
    }

    // Bootstrap suprema, studentized and percentile from the same draws.
    let sups: Vec<(f64, f64)> = (0..b_reps)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut w = Vector5::zeros();
            for row in &panel.phi {
                let xi: f64 = StandardNormal.sample(&mut rng);
                w += xi * Vector5::from_column_slice(row);
            }
            let mut sup_s = 0.0_f64;
            let mut sup_p = 0.0_f64;
            for (k, gl) in glam.iter().enumerate() {
                let v = (w.transpose() * gl)[(0, 0)].abs() / mf.sqrt();
                sup_p = sup_p.max(v);
                sup_s = sup_s.max(v / s_hat[k]);
            }
            (sup_s, sup_p)
        })
        .collect();

    let mut t_stud: Vec<f64> = sups.iter().map(|s| s.0).collect();
    let mut t_perc: Vec<f64> = sups.iter().map(|s| s.1).collect();
    t_stud.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t_perc.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let c_s = ceiling_quantile(&t_stud, 1.0 - alpha);
    let c_p = ceiling_quantile(&t_perc, 1.0 - alpha);

    Ok(BandPair {
        studentized: assemble_band(
            &beta_grid,
            &g_hat,
            &s_hat,
            c_s,
            BandMode::Studentized,
            alpha,
            b_reps,
            mf,
        ),
        percentile: assemble_band(
            &beta_grid,
            &g_hat,
            &s_hat,
            c_p,
            BandMode::Percentile,
            alpha,
            b_reps,
            mf,
        ),
    })
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_band(
    beta_grid: &[f64],
    g_hat: &[f64],
    s_hat: &[f64],
    c_alpha: f64,
    mode: BandMode,
    alpha: f64,
    b_reps: usize,
    mf: f64,
) -> BandResult {
    let half: Vec<f64> = match mode {
        BandMode::Studentized => s_hat.iter().map(|s| c_alpha * s / mf.sqrt()).collect(),
        BandMode::Percentile => beta_grid.iter().map(|_| c_alpha / mf.sqrt()).collect(),
    };
    BandResult {
        beta_grid: beta_grid.to_vec(),
        g_hat: g_hat.to_vec(),
        s_hat: s_hat.to_vec(),
        c_alpha,
        band_lo: g_hat.iter().zip(&half).map(|(g, h)| g - h).collect(),
        band_hi: g_hat.iter().zip(&half).map(|(g, h)| g + h).collect(),
        mode,
        alpha,
        b: b_reps,
    }
}

/// Build a uniform confidence band for beta -> G(beta) on [0, 1].
pub fn uniform_band(
    lambda: &Lambda,
    panel: &InfluencePanel,
    grid_size: usize,
    alpha: f64,
    b_reps: usize,
    seed: u64,
    mode: BandMode,
) -> Result<BandResult> {
    let pair = uniform_band_both(lambda, panel, grid_size, alpha, b_reps, seed)?;
    Ok(match mode {
        BandMode::Studentized => pair.studentized,
        BandMode::Percentile => pair.percentile,
    })
}
