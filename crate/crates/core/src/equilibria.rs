//! Behavioural equilibria: fixed points of the autocorrelation map.
//!
//! An equilibrium is a solution in [0, 1] of G(beta; lambda) = 0 with
//! G = beta - F and
//!
//! ```text
//! F(beta) = delta beta^2 + psi^2 rho (1 - delta^2 beta^4) / D(beta),
//! D(beta) = psi^2 (delta rho beta^2 + 1)
//!           + (1 - rho^2)(1 - delta rho beta^2) sigma_u^2 / sigma_eps^2.
//! ```
//!
//! G is a rational function whose numerator is the quartic
//! P(beta) = (beta - delta beta^2) D(beta) - psi^2 rho (1 - delta^2 beta^4),
//! so root finding works on P (no denominator noise) while classification
//! and limit-theory quantities use closed-form derivatives of G.

use serde::{Deserialize, Serialize};

use crate::domain::{AuxParams, Lambda, StructuralParams};
use crate::error::{Error, Result};

/// Tuning parameters for [`find_roots`]. Defaults classify the repeated-root
/// reference configuration as {simple, double} while leaving sampling noise
/// (which moves the curve by O(n^{-1/2})) untouched.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RootOptions {
    /// Sign-scan resolution on [0, 1].
    pub scan_intervals: usize,
    /// Roots closer than this are merged into one double root.
    pub merge_tol: f64,
    /// A root with |G_beta| below this is classified as double.
    pub double_tol: f64,
    /// A critical point of G with |G| below this counts as a touching
    /// (double) root even without a sign change.
    pub touch_tol: f64,
    /// Midpoint |G_beta| threshold for near-double pair detection.
    pub pair_tol: f64,
    /// Target residual |G| for the Newton polish.
    pub root_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            scan_intervals: 10_000,
            merge_tol: 1e-7,
            double_tol: 1e-4,
            touch_tol: 2e-4,
            pair_tol: 0.25,
            root_tol: 1e-12,
        }
    }
}

/// The fixed-point map at a given lambda, in both rational and polynomial
/// form.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GCurve {
    pub lambda: Lambda,
    /// D(beta) = denom_coeffs[0] + denom_coeffs[1] * beta^2.
    pub denom_coeffs: [f64; 2],
    /// Ascending coefficients of P(beta), degree <= 4.
    pub poly_coeffs: [f64; 5],
}

impl GCurve {
    /// Build the curve, verifying that the denominator is strictly positive
    /// on [0, 1]. D is linear in beta^2, so positivity at the endpoints is
    /// sufficient.
    pub fn new(lambda: Lambda) -> Result<Self> {
        let (d0, d2) = denom_parts(&lambda);
        if !(d0 > 0.0) {
            return Err(Error::DegenerateDenominator(d0));
        }
        if !(d0 + d2 > 0.0) {
            return Err(Error::DegenerateDenominator(d0 + d2));
        }
        let Lambda {
            delta, psi, rho, ..
        } = lambda;
        let s = lambda.sigma_u_sq / lambda.sigma_eps_sq;
        let poly_coeffs = [
            -psi * psi * rho,
            d0,
            -delta * d0,
            d2,
            delta * delta * rho * (1.0 - rho * rho) * s,
        ];
        Ok(Self {
            lambda,
            denom_coeffs: [d0, d2],
            poly_coeffs,
        })
    }

    pub fn poly_at(&self, beta: f64) -> f64 {
        let c = &self.poly_coeffs;
        (((c[4] * beta + c[3]) * beta + c[2]) * beta + c[1]) * beta + c[0]
    }

    pub fn denom_at(&self, beta: f64) -> f64 {
        self.denom_coeffs[0] + self.denom_coeffs[1] * beta * beta
    }

    pub fn g(&self, beta: f64) -> f64 {
        eval_g(beta, &self.lambda)
    }

    pub fn g_beta(&self, beta: f64) -> f64 {
        g_derivatives(beta, &self.lambda).g_beta
    }
}

fn denom_parts(lambda: &Lambda) -> (f64, f64) {
    let s = lambda.sigma_u_sq / lambda.sigma_eps_sq;
    let psi2 = lambda.psi * lambda.psi;
    let d0 = psi2 + (1.0 - lambda.rho * lambda.rho) * s;
    let d2 = lambda.delta * lambda.rho * (psi2 - (1.0 - lambda.rho * lambda.rho) * s);
    (d0, d2)
}

/// Evaluate the fixed-point map F(beta; lambda).
pub fn eval_f(beta: f64, lambda: &Lambda) -> Result<f64> {
    let (d0, d2) = denom_parts(lambda);
    let d = d0 + d2 * beta * beta;
    if !(d > 0.0) {
        return Err(Error::DegenerateDenominator(d));
    }
    let delta = lambda.delta;
    let psi2 = lambda.psi * lambda.psi;
    let b2 = beta * beta;
    let numer = psi2 * lambda.rho * (1.0 - delta * delta * b2 * b2);
    Ok(delta * b2 + numer / d)
}

/// G(beta; lambda) = beta - F(beta; lambda), assuming a valid denominator.
pub fn eval_g(beta: f64, lambda: &Lambda) -> f64 {
    let (d0, d2) = denom_parts(lambda);
    let d = d0 + d2 * beta * beta;
    let delta = lambda.delta;
    let psi2 = lambda.psi * lambda.psi;
    let b2 = beta * beta;
    beta - delta * b2 - psi2 * lambda.rho * (1.0 - delta * delta * b2 * b2) / d
}

/// Closed-form derivatives of G at (beta, lambda). The 5-vectors follow the
/// fixed lambda ordering (delta, psi, rho, sigma_u_sq, sigma_eps_sq).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GDerivs {
    pub g: f64,
    pub g_beta: f64,
    pub g_beta_beta: f64,
    pub g_beta3: f64,
    pub g_lambda: [f64; 5],
    pub g_beta_lambda: [f64; 5],
}

/// Compute G and its partial derivatives up to the orders needed by the
/// limit theory: G_beta, G_beta_beta, G_beta^3, G_lambda, and G_beta_lambda.
pub fn eval_g_derivatives(beta: f64, lambda: &Lambda) -> Result<GDerivs> {
    let (d0, d2) = denom_parts(lambda);
    let d = d0 + d2 * beta * beta;
    if !(d > 0.0) {
        return Err(Error::DegenerateDenominator(d));
    }
    Ok(g_derivatives(beta, lambda))
}

fn g_derivatives(beta: f64, lambda: &Lambda) -> GDerivs {
    let Lambda {
        delta,
        psi,
        rho,
        sigma_u_sq: v,
        sigma_eps_sq: w,
    } = *lambda;
    let s = v / w;
    let psi2 = psi * psi;
    let b = beta;
    let b2 = b * b;
    let b3 = b2 * b;
    let b4 = b2 * b2;

    // Numerator and denominator of the rational part, with beta-derivatives.
    let numer = psi2 * rho * (1.0 - delta * delta * b4);
    let numer_b = -4.0 * psi2 * rho * delta * delta * b3;
    let numer_bb = -12.0 * psi2 * rho * delta * delta * b2;
    let numer_bbb = -24.0 * psi2 * rho * delta * delta * b;

    let (d0, d2) = denom_parts(lambda);
    let den = d0 + d2 * b2;
    let den_b = 2.0 * d2 * b;
    let den_bb = 2.0 * d2;

    // Quotient-rule ladder for R = numer / den.
    let r0 = numer / den;
    let r1 = (numer_b - r0 * den_b) / den;
    let r2 = (numer_bb - 2.0 * r1 * den_b - r0 * den_bb) / den;
    let r3 = (numer_bbb - 3.0 * r2 * den_b - 3.0 * r1 * den_bb) / den;

    let g = b - delta * b2 - r0;
    let g_beta = 1.0 - 2.0 * delta * b - r1;
    let g_beta_beta = -2.0 * delta - r2;
    let g_beta3 = -r3;

    // lambda-derivatives of numerator and denominator (and their mixed
    // beta-derivatives), component order (delta, psi, rho, v, w).
    let numer_l = [
        -2.0 * delta * b4 * psi2 * rho,
        2.0 * psi * rho * (1.0 - delta * delta * b4),
        psi2 * (1.0 - delta * delta * b4),
        0.0,
        0.0,
    ];
    let numer_bl = [
        -8.0 * psi2 * rho * delta * b3,
        -8.0 * psi * rho * delta * delta * b3,
        -4.0 * psi2 * delta * delta * b3,
        0.0,
        0.0,
    ];
    let one_m_rho2 = 1.0 - rho * rho;
    let d0_l = [
        0.0,
        2.0 * psi,
        -2.0 * rho * s,
        one_m_rho2 / w,
        -one_m_rho2 * v / (w * w),
    ];
    let d2_l = [
        rho * (psi2 - one_m_rho2 * s),
        2.0 * delta * rho * psi,
        delta * (psi2 - s * (1.0 - 3.0 * rho * rho)),
        -delta * rho * one_m_rho2 / w,
        delta * rho * one_m_rho2 * v / (w * w),
    ];

    let mut g_lambda = [0.0; 5];
    let mut g_beta_lambda = [0.0; 5];
    for i in 0..5 {
        let den_i = d0_l[i] + d2_l[i] * b2;
        let den_bi = 2.0 * d2_l[i] * b;
        // T_i = d(numer/den)/dlambda_i via the quotient rule.
        let u_i = numer_l[i] * den - numer * den_i;
        let t_i = u_i / (den * den);
        let u_bi = numer_bl[i] * den + numer_l[i] * den_b - numer_b * den_i - numer * den_bi;
        let t_bi = (u_bi - 2.0 * u_i * den_b / den) / (den * den);
        // F_lambda picks up the polynomial part only through delta.
        let poly_part = if i == 0 { b2 } else { 0.0 };
        let poly_part_b = if i == 0 { 2.0 * b } else { 0.0 };
        g_lambda[i] = -(poly_part + t_i);
        g_beta_lambda[i] = -(poly_part_b + t_bi);
    }

    GDerivs {
        g,
        g_beta,
        g_beta_beta,
        g_beta3,
        g_lambda,
        g_beta_lambda,
    }
}

/// Multiplicity classification of an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    Simple,
    Double,
}

/// One equilibrium with its local diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootInfo {
    pub beta: f64,
    pub class: RootClass,
    pub g_beta: f64,
    /// First-order Jacobian J = F_lambda / (1 - F_beta); present for simple
    /// roots only (the rate at a double root is non-standard).
    pub jacobian: Option<[f64; 5]>,
}

/// Curvature quantities at a double root, driving its n^{1/4} asymptotics:
/// a = G_bb / 2, b_vec = G_lambda, c = G_bbb / 6, d_vec = G_beta_lambda.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DoubleRootQuantities {
    pub a: f64,
    #[serde(rename = "B")]
    pub b_vec: [f64; 5],
    pub c: f64,
    #[serde(rename = "D")]
    pub d_vec: [f64; 5],
}

/// All equilibria of G(.; lambda) on [0, 1].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriaReport {
    pub lambda: Lambda,
    /// Roots in strictly increasing order.
    pub roots: Vec<RootInfo>,
    pub count: usize,
    pub g_at_zero: f64,
    pub g_at_one: f64,
    /// Whether G(0) < 0 < G(1) held (guaranteed when rho > 0 and psi != 0).
    pub sign_condition_ok: bool,
    pub double_root_quantities: Option<DoubleRootQuantities>,
    /// Midpoint of the detected near-double pair when three roots are
    /// present.
    pub averaged_pair: Option<f64>,
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Locate and classify all equilibria.
///
/// Sign-change roots are isolated on the quartic P by a dense scan and
/// bisection, then polished by Newton steps on G itself. Critical points of
/// G supply touching (double) roots that never cross zero; a critical point
/// qualifies when |G| is below `touch_tol` and no crossing was already found
/// within the implied parabolic half-width.
pub fn find_roots(lambda: &Lambda, opts: &RootOptions) -> Result<EquilibriaReport> {
    let curve = GCurve::new(*lambda)?;
    let g_at_zero = curve.g(0.0);
    let g_at_one = curve.g(1.0);

    let nscan = curve_scan(&curve, opts);
    let (mut candidates, crits) = nscan;

    // Touch detection at critical points.
    for &c in &crits {
        let dv = g_derivatives(c, lambda);
        if dv.g.abs() < opts.touch_tol {
            let a2 = 0.5 * dv.g_beta_beta;
            let halfwidth = if a2.abs() > 1e-12 {
                2.0 * (dv.g.abs() / a2.abs()).sqrt()
            } else {
                0.0
            };
            let exclusion = halfwidth.max(1e-6);
            if candidates
                .iter()
                .all(|&(r, _)| (r - c).abs() > exclusion)
            {
                candidates.push((c, true));
            }
        }
    }

    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // Merge close roots; a merged pair is one double root.
    let mut merged: Vec<(f64, bool)> = Vec::new();
    for (r, forced) in candidates {
        match merged.last_mut() {
            Some((last, last_forced)) if (r - *last).abs() < opts.merge_tol => {
                *last = 0.5 * (*last + r);
                *last_forced = true;
            }
            _ => merged.push((r, forced)),
        }
    }

    if merged.is_empty() {
        return Err(Error::NoRootFound {
            g0: g_at_zero,
            g1: g_at_one,
        });
    }

    let mut roots = Vec::with_capacity(merged.len());
    let mut double_root_quantities = None;
    for (beta, forced_double) in merged {
        let dv = g_derivatives(beta, lambda);
        let class = if forced_double || dv.g_beta.abs() < opts.double_tol {
            RootClass::Double
        } else {
            RootClass::Simple
        };
        let jacobian = match class {
            RootClass::Simple => {
                // J = F_lambda / (1 - F_beta) = -G_lambda / G_beta.
                let mut j = [0.0; 5];
                for i in 0..5 {
                    j[i] = -dv.g_lambda[i] / dv.g_beta;
                }
                Some(j)
            }
            RootClass::Double => {
                if double_root_quantities.is_none() {
                    double_root_quantities = Some(DoubleRootQuantities {
                        a: 0.5 * dv.g_beta_beta,
                        b_vec: dv.g_lambda,
                        c: dv.g_beta3 / 6.0,
                        d_vec: dv.g_beta_lambda,
                    });
                }
                None
            }
        };
        roots.push(RootInfo {
            beta,
            class,
            g_beta: dv.g_beta,
            jacobian,
        });
    }

    let count = roots.len();
    let mut report = EquilibriaReport {
        lambda: *lambda,
        roots,
        count,
        g_at_zero,
        g_at_one,
        sign_condition_ok: g_at_zero < 0.0 && g_at_one > 0.0,
        double_root_quantities,
        averaged_pair: None,
    };
    report.averaged_pair = average_double_pair(&report, opts.pair_tol);
    Ok(report)
}

/// Scan for sign changes of P and critical points of G. Returns
/// `(crossing candidates, critical points)`; candidates carry a
/// `forced_double` flag (false for plain crossings).
fn curve_scan(curve: &GCurve, opts: &RootOptions) -> (Vec<(f64, bool)>, Vec<f64>) {
    let nscan = opts.scan_intervals.max(16);
    let lambda = curve.lambda;
    let mut crossings = Vec::new();
    let mut crits = Vec::new();

    let p = |b: f64| curve.poly_at(b);
    let gb = |b: f64| g_derivatives(b, &lambda).g_beta;

    let mut prev_b = 0.0;
    let mut prev_p = p(0.0);
    let mut prev_gb = gb(0.0);
    if prev_p == 0.0 {
        crossings.push((0.0, false));
    }
    for i in 1..=nscan {
        let b = i as f64 / nscan as f64;
        let pv = p(b);
        let gv = gb(b);
        if pv == 0.0 {
            crossings.push((b, false));
        } else if prev_p * pv < 0.0 {
            let root = newton_polish(curve, bisect(&p, prev_b, b), opts);
            crossings.push((root, false));
        }
        if gv == 0.0 {
            crits.push(b);
        } else if prev_gb * gv < 0.0 {
            crits.push(bisect(&gb, prev_b, b));
        }
        prev_b = b;
        prev_p = pv;
        prev_gb = gv;
    }
    (crossings, crits)
}

fn newton_polish(curve: &GCurve, start: f64, opts: &RootOptions) -> f64 {
    let mut x = start;
    for _ in 0..40 {
        let dv = g_derivatives(x, &curve.lambda);
        if dv.g.abs() < opts.root_tol * 1e-2 || dv.g_beta.abs() < 1e-30 {
            break;
        }
        let next = (x - dv.g / dv.g_beta).clamp(0.0, 1.0);
        if (next - x).abs() < f64::EPSILON * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// Expected inflation at an equilibrium: psi * a / ((1 - rho)(1 - delta)).
pub fn equilibrium_mean(theta: &StructuralParams, aux: &AuxParams) -> Result<f64> {
    let denom = (1.0 - aux.rho) * (1.0 - theta.delta);
    if denom == 0.0 {
        return Err(Error::DivisionByZero("equilibrium mean (rho or delta at 1)"));
    }
    Ok(theta.psi * aux.a / denom)
}

/// Midpoint of the near-double pair in a three-root report: two adjacent
/// roots whose G_beta values have opposite signs and whose midpoint has
/// |G_beta| below `pair_tol`. With several qualifying pairs the flattest
/// midpoint wins. None when the report does not have exactly three roots or
/// no pair qualifies.
pub fn average_double_pair(report: &EquilibriaReport, pair_tol: f64) -> Option<f64> {
    if report.count != 3 {
        return None;
    }
    let mut best: Option<(f64, f64)> = None; // (|G_beta(mid)|, mid)
    for w in report.roots.windows(2) {
        let (r1, r2) = (&w[0], &w[1]);
        if r1.g_beta * r2.g_beta < 0.0 {
            let mid = 0.5 * (r1.beta + r2.beta);
            let slope = g_derivatives(mid, &report.lambda).g_beta.abs();
            if slope < pair_tol && best.map_or(true, |(s, _)| slope < s) {
                best = Some((slope, mid));
            }
        }
    }
    best.map(|(_, mid)| mid)
}

/// Sample the curve beta -> G(beta) as two-column TSV, plot-ready.
pub fn curve_tsv(lambda: &Lambda, points: usize) -> Result<String> {
    GCurve::new(*lambda)?;
    let mut out = String::from("beta\tG\n");
    for i in 0..points {
        let b = i as f64 / (points - 1) as f64;
        out.push_str(&format!("{}\t{}\n", b, eval_g(b, lambda)));
    }
    Ok(out)
}

/// Reference configurations used across tests and the Monte Carlo harness.
pub mod reference {
    use crate::domain::Lambda;

    /// Three well-separated equilibria: {0.1740, 0.8560, 0.9993}.
    pub fn lambda_a() -> Lambda {
        Lambda::new(0.998, 0.090, 0.93, 0.44 * 0.44, 0.76 * 0.76).unwrap()
    }

    /// A simple root at 0.9766 and a repeated root at 0.5551.
    pub fn lambda_b() -> Lambda {
        Lambda::new(0.95, 0.2734, 0.9, 1.0, 1.0).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn f_reduces_to_parabola_without_persistence() {
        let l = Lambda::new(0.8, 1.3, 0.0, 1.0, 2.0).unwrap();
        for b in [0.0, 0.3, 0.7, 1.0] {
            assert_relative_eq!(eval_f(b, &l).unwrap(), 0.8 * b * b, epsilon = 1e-15);
            // G_beta = 1 - 2 delta beta in that case.
            let dv = eval_g_derivatives(b, &l).unwrap();
            assert_relative_eq!(dv.g_beta, 1.0 - 1.6 * b, epsilon = 1e-12);
        }
    }

    #[test]
    fn f_at_zero_matches_closed_form() {
        let l = reference::lambda_a();
        let s = l.sigma_u_sq / l.sigma_eps_sq;
        let expect = l.psi * l.psi * l.rho / (l.psi * l.psi + (1.0 - l.rho * l.rho) * s);
        assert_relative_eq!(eval_f(0.0, &l).unwrap(), expect, epsilon = 1e-15);
    }

    #[test]
    fn rho_derivative_at_zero_matches_closed_form() {
        let l = Lambda::new(0.6, 0.9, 0.0, 1.5, 2.5).unwrap();
        let s = l.sigma_u_sq / l.sigma_eps_sq;
        for b in [0.1, 0.5, 0.9] {
            let dv = eval_g_derivatives(b, &l).unwrap();
            let expect =
                l.psi * l.psi * (1.0 - l.delta * l.delta * b.powi(4)) / (l.psi * l.psi + s);
            // dF/drho = -dG/drho.
            assert_relative_eq!(-dv.g_lambda[2], expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn scenario_a_fixed_point_property() {
        let l = reference::lambda_a();
        let f = eval_f(0.174, &l).unwrap();
        assert!((f - 0.174).abs() < 1e-3);
    }

    #[test]
    fn polynomial_and_rational_forms_agree() {
        let curve = GCurve::new(reference::lambda_a()).unwrap();
        for i in 0..=40 {
            let b = i as f64 / 40.0;
            let via_poly = curve.poly_at(b) / curve.denom_at(b);
            assert!((via_poly - curve.g(b)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        // Central differences on 100 random draws; relative error < 1e-6.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut worst = 0.0_f64;
        for _ in 0..100 {
            let l = Lambda::new(
                rng.random_range(0.05..0.99),
                rng.random_range(0.05..2.0),
                rng.random_range(0.05..0.95),
                rng.random_range(0.3..3.0),
                rng.random_range(0.3..3.0),
            )
            .unwrap();
            let b: f64 = rng.random_range(0.02..0.98);
            let dv = eval_g_derivatives(b, &l).unwrap();
            let rel = |a: f64, fd: f64| (a - fd).abs() / a.abs().max(1.0);

            // Ladder of central differences: each derivative is checked
            // against a first difference of the next-lower analytic one,
            // keeping the finite-difference noise near 1e-10 throughout.
            let hb = 1e-6;
            let fd_gb = (eval_g(b + hb, &l) - eval_g(b - hb, &l)) / (2.0 * hb);
            worst = worst.max(rel(dv.g_beta, fd_gb));
            let fd_gbb = (g_derivatives(b + hb, &l).g_beta - g_derivatives(b - hb, &l).g_beta)
                / (2.0 * hb);
            worst = worst.max(rel(dv.g_beta_beta, fd_gbb));
            let fd_gb3 = (g_derivatives(b + hb, &l).g_beta_beta
                - g_derivatives(b - hb, &l).g_beta_beta)
                / (2.0 * hb);
            worst = worst.max(rel(dv.g_beta3, fd_gb3));
            for i in 0..5 {
                let mut lp = l.as_array();
                let mut lm = l.as_array();
                let h = 1e-6 * lp[i].abs().max(1.0);
                lp[i] += h;
                lm[i] -= h;
                let fd = (eval_g(b, &Lambda::from_array(lp)) - eval_g(b, &Lambda::from_array(lm)))
                    / (2.0 * h);
                worst = worst.max(rel(dv.g_lambda[i], fd));
                let fd_mixed = (g_derivatives(b, &Lambda::from_array(lp)).g_beta
                    - g_derivatives(b, &Lambda::from_array(lm)).g_beta)
                    / (2.0 * h);
                worst = worst.max(rel(dv.g_beta_lambda[i], fd_mixed));
            }
        }
        assert!(worst < 1e-6, "worst relative error {worst}");
    }

    #[test]
    fn scenario_a_roots() {
        let report = find_roots(&reference::lambda_a(), &RootOptions::default()).unwrap();
        assert_eq!(report.count, 3);
        let expected = [0.174, 0.856, 0.999];
        for (r, e) in report.roots.iter().zip(expected) {
            assert!((r.beta - e).abs() < 1e-3, "root {} vs {e}", r.beta);
            assert_eq!(r.class, RootClass::Simple);
            assert!(eval_g(r.beta, &reference::lambda_a()).abs() < 1e-10);
            assert!(r.jacobian.is_some());
        }
        assert!(report.sign_condition_ok);
    }

    #[test]
    fn scenario_b_simple_plus_double() {
        let report = find_roots(&reference::lambda_b(), &RootOptions::default()).unwrap();
        assert_eq!(report.count, 2, "roots: {:?}", report.roots);
        assert!((report.roots[0].beta - 0.5551).abs() < 1e-3);
        assert_eq!(report.roots[0].class, RootClass::Double);
        assert!((report.roots[1].beta - 0.9766).abs() < 1e-3);
        assert_eq!(report.roots[1].class, RootClass::Simple);
        let d = report.double_root_quantities.unwrap();
        assert!((d.a - (-0.5558)).abs() < 1e-3, "a = {}", d.a);
        assert!((d.c - 0.7823).abs() < 1e-3, "c = {}", d.c);
    }

    #[test]
    fn empirical_low_persistence_unique_root() {
        let l = Lambda::new(
            0.90173298,
            0.12586481,
            0.15752518,
            0.4673309 * 0.4673309,
            1.1100973 * 1.1100973,
        )
        .unwrap();
        let report = find_roots(&l, &RootOptions::default()).unwrap();
        assert_eq!(report.count, 1);
        assert!((report.roots[0].beta - 0.01341).abs() < 1e-3);
    }

    #[test]
    fn jacobian_predicts_root_movement() {
        // Perturbing lambda by t*dir moves a simple root by t * J'dir + o(t).
        let l = reference::lambda_a();
        let report = find_roots(&l, &RootOptions::default()).unwrap();
        let dir = [0.001, -0.002, 0.0015, 0.001, -0.001];
        for t in [1e-4, 1e-5] {
            let mut la = l.as_array();
            for i in 0..5 {
                la[i] += t * dir[i];
            }
            let lp = Lambda::from_array(la);
            let moved = find_roots(&lp, &RootOptions::default()).unwrap();
            assert_eq!(moved.count, 3);
            for (r0, r1) in report.roots.iter().zip(&moved.roots) {
                let j = r0.jacobian.unwrap();
                let predicted: f64 = (0..5).map(|i| j[i] * t * dir[i]).sum();
                let actual = r1.beta - r0.beta;
                assert!(
                    (actual - predicted).abs() <= 0.01 * predicted.abs().max(1e-12),
                    "root {}: actual {actual:.3e} vs predicted {predicted:.3e}",
                    r0.beta
                );
            }
        }
    }

    #[test]
    fn equilibrium_mean_values() {
        let theta = StructuralParams {
            gamma: 0.076,
            delta: 0.998,
            psi: 0.090,
        };
        let aux = AuxParams {
            a: -0.02,
            rho: 0.93,
            sigma_u: 0.44,
            sigma_eps: 0.76,
        };
        let m = equilibrium_mean(&theta, &aux).unwrap();
        assert_relative_eq!(m, 0.090 * (-0.02) / ((1.0 - 0.93) * (1.0 - 0.998)), epsilon = 1e-12);
        assert!((m - (-12.857142857)).abs() < 1e-6);

        let zero_a = AuxParams { a: 0.0, ..aux };
        assert_eq!(equilibrium_mean(&theta, &zero_a).unwrap(), 0.0);

        let theta0 = StructuralParams {
            gamma: 0.1,
            delta: 0.0,
            psi: 2.0,
        };
        let aux0 = AuxParams {
            a: 0.5,
            rho: 0.0,
            sigma_u: 1.0,
            sigma_eps: 1.0,
        };
        assert_relative_eq!(equilibrium_mean(&theta0, &aux0).unwrap(), 1.0);
    }

    #[test]
    fn averaged_pair_of_synthetic_symmetric_split() {
        // Exactly representable centre and offset, so the midpoint is exact.
        let centre = 0.5625;
        let eps = 0.0625;
        let l = reference::lambda_b();
        let mk = |beta: f64, slope: f64| RootInfo {
            beta,
            class: RootClass::Simple,
            g_beta: slope,
            jacobian: None,
        };
        let report = EquilibriaReport {
            lambda: l,
            roots: vec![mk(centre - eps, 0.4), mk(centre + eps, -0.35), mk(0.97, 0.39)],
            count: 3,
            g_at_zero: -0.1,
            g_at_one: 0.1,
            sign_condition_ok: true,
            double_root_quantities: None,
            averaged_pair: None,
        };
        let mid = average_double_pair(&report, 0.25).unwrap();
        assert_eq!(mid, centre);
    }

    #[test]
    fn averaged_pair_none_for_single_root() {
        let l = reference::lambda_b();
        let report = EquilibriaReport {
            lambda: l,
            roots: vec![RootInfo {
                beta: 0.97,
                class: RootClass::Simple,
                g_beta: 0.39,
                jacobian: None,
            }],
            count: 1,
            g_at_zero: -0.1,
            g_at_one: 0.1,
            sign_condition_ok: true,
            double_root_quantities: None,
            averaged_pair: None,
        };
        assert!(average_double_pair(&report, 0.25).is_none());
    }

    #[test]
    fn no_root_outside_existence_region() {
        // rho < 0 can push G(0) > 0 and G(1) < 0 jointly... the cleanest
        // no-root case is rho < 0 with G of one sign; construct one and
        // check the error carries the endpoint values.
        let l = Lambda::new(0.9, 0.05, -0.9, 4.0, 0.25).unwrap();
        match find_roots(&l, &RootOptions::default()) {
            Err(Error::NoRootFound { g0, g1 }) => {
                assert!(g0 > 0.0 || g1 < 0.0);
            }
            Ok(report) => {
                // If a root does exist for this lambda the sign condition
                // must have held at one endpoint pair.
                assert!(report.count >= 1);
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
