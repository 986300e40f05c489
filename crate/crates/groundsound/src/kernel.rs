//! Temporal regularization of the halfspace step response.
//!
//! The wavefront singularities of the exact solution are removed by
//! convolving with a smooth unit-mass kernel
//!
//! ```text
//! g_eps(t) = c_s eps / (pi (c_s^2 t^2 + eps^2)),   f_eps = 2 g_eps - g_{2eps},
//! ```
//!
//! whose fourth-order tail decay keeps the late-time error small. The
//! convolution with the piecewise solution has a closed form built from an
//! arctangent term `U` and two log/square-root terms `V`, `W` (with the
//! complex helper `Z`), assembled per smoothing scale as
//!
//! ```text
//! k'(r,t') = (1-nu)/(4 pi mu) [ U(t',ar) + U(t',r)
//!            + iA1 (2 W(t',gr,gr) - W(t',r,gr) - W(t',ar,gr))
//!            - sum_{j=2,3} A_j (V(t',r,k_j r) - V(t',ar,k_j r)) ],   g = gamma,
//! ```
//!
//! with t' = c_s t, and u_eps(r,t) = 2 k'(r,c_s t; eps) - k'(r,c_s t; 2eps).
//! The A_j weights fall straight out of the piecewise solution: iA1 and the
//! A_{2,3} are real in the supported regime, and the combination reproduces
//! the numerical convolution to the oracle tolerance.
//!
//! Everything here is evaluated in order-3 jet arithmetic, so the impulse
//! displacement w_eps = du/dt and acceleration a_eps = d^3 u/dt^3 come out
//! analytically, differentiated term by term through U, V, W and Z.
//!
//! The closed form is only branch-cut-safe for 0 <= nu < 0.2631 (all
//! Rayleigh roots real); outside that range construction still succeeds but
//! closed-form evaluation reports the unsupported regime, while the
//! convolution oracle remains available for any nu.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::jet::{CJet, RJet};
use crate::lamb;
use crate::materials::HalfspaceParams;
use crate::quad;
use crate::real::Real;

/// Upper edge of the branch-safe Poisson range for the closed form.
pub const NU_SUPPORT_MAX: f64 = 0.2631;

/// Minimum surface radius evaluated anywhere (the spatial 1/r singularity
/// at the load point is never sampled).
pub const R_MIN: f64 = 1e-6;

// ------------------------------------------------------------------
// Smoothing kernels in physical time
// ------------------------------------------------------------------

/// Second-order smoothing kernel g_eps(t) (1/s); unit mass over R.
pub fn kernel_g<R: Real>(t: R, eps: R, c_s: R) -> R {
    let u = c_s * t;
    c_s * eps / (R::PI() * (u * u + eps * eps))
}

/// Fourth-order kernel f_eps = 2 g_eps - g_{2 eps} (1/s); unit mass.
pub fn kernel_f<R: Real>(t: R, eps: R, c_s: R) -> R {
    R::of(2.0) * kernel_g(t, eps, c_s) - kernel_g(t, R::of(2.0) * eps, c_s)
}

fn kernel_g_dot<R: Real>(t: R, eps: R, c_s: R) -> R {
    let u = c_s * t;
    let d = u * u + eps * eps;
    -R::of(2.0) * c_s.powi(3) * eps * t / (R::PI() * d * d)
}

fn kernel_g_ddot<R: Real>(t: R, eps: R, c_s: R) -> R {
    let u = c_s * t;
    let d = u * u + eps * eps;
    R::of(2.0) * c_s.powi(3) * eps * (R::of(3.0) * u * u - eps * eps) / (R::PI() * d * d * d)
}

/// d f_eps / dt.
pub fn kernel_f_dot<R: Real>(t: R, eps: R, c_s: R) -> R {
    R::of(2.0) * kernel_g_dot(t, eps, c_s) - kernel_g_dot(t, R::of(2.0) * eps, c_s)
}

/// d^2 f_eps / dt^2.
pub fn kernel_f_ddot<R: Real>(t: R, eps: R, c_s: R) -> R {
    R::of(2.0) * kernel_g_ddot(t, eps, c_s) - kernel_g_ddot(t, R::of(2.0) * eps, c_s)
}

fn kernel_g_cdf<R: Real>(t: R, eps: R, c_s: R) -> R {
    R::of(0.5) + (c_s * t / eps).atan() / R::PI()
}

/// Running integral of f_eps from -infinity to t.
pub fn kernel_f_cdf<R: Real>(t: R, eps: R, c_s: R) -> R {
    R::of(2.0) * kernel_g_cdf(t, eps, c_s) - kernel_g_cdf(t, R::of(2.0) * eps, c_s)
}

// ------------------------------------------------------------------
// Closed-form building blocks (t' = c_s t carries length units)
// ------------------------------------------------------------------

/// U(t', sigma) = 1/(2r) + arctan((t'-sigma)/eps) / (pi r).
pub fn closed_form_u<R: Real>(t_prime: R, sigma: R, eps: R, r: R) -> R {
    R::of(0.5) / r + ((t_prime - sigma) / eps).atan() / (R::PI() * r)
}

/// Z(t', alpha) = sqrt(alpha^2 + (eps - i t')^2), principal branch.
pub fn closed_form_z<R: Real>(t_prime: R, alpha: R, eps: R) -> Complex<R> {
    let q = Complex::new(eps, -t_prime);
    (Complex::new(alpha * alpha, R::zero()) + q * q).sqrt()
}

/// V(t', s, alpha): antiderivative in s of g_eps(t'-s)/sqrt(s^2-alpha^2),
/// valid for s >= alpha.
pub fn closed_form_v<R: Real>(t_prime: R, s: R, alpha: R, eps: R) -> Result<R> {
    if s < alpha {
        return Err(Error::Domain(format!(
            "V requires s >= alpha, got s = {s}, alpha = {alpha}"
        )));
    }
    let i = Complex::new(R::zero(), R::one());
    let q = Complex::new(eps, -t_prime);
    let z = closed_form_z(t_prime, alpha, eps);
    let beta = (s * s - alpha * alpha).sqrt();
    let l1 = Complex::new(eps, s - t_prime).ln();
    let arg = Complex::new(alpha * alpha, R::zero())
        - i * q * Complex::new(s, R::zero())
        - i * z * Complex::new(beta, R::zero());
    Ok(((arg.ln() - l1) / (z * Complex::new(R::PI(), R::zero()))).re)
}

/// W(t', s, alpha): antiderivative in s of g_eps(t'-s)/sqrt(alpha^2-s^2),
/// valid for s <= alpha.
pub fn closed_form_w<R: Real>(t_prime: R, s: R, alpha: R, eps: R) -> Result<R> {
    if s > alpha {
        return Err(Error::Domain(format!(
            "W requires s <= alpha, got s = {s}, alpha = {alpha}"
        )));
    }
    let i = Complex::new(R::zero(), R::one());
    let q = Complex::new(eps, -t_prime);
    let z = closed_form_z(t_prime, alpha, eps);
    let beta = (alpha * alpha - s * s).sqrt();
    let l1 = Complex::new(eps, s - t_prime).ln();
    let arg = Complex::new(alpha * alpha, R::zero()) - i * q * Complex::new(s, R::zero())
        + z * Complex::new(beta, R::zero());
    Ok(-((arg.ln() - l1) / (z * Complex::new(R::PI(), R::zero()))).im)
}

// Jet variants sharing a precomputed Z jet per alpha.

fn q_jet<R: Real>(t_prime: R, eps: R) -> CJet<R> {
    let mut j = CJet::constant(Complex::new(eps, -t_prime));
    j.d1 = Complex::new(R::zero(), -R::one());
    j
}

fn z_jet<R: Real>(q: CJet<R>, alpha: R) -> CJet<R> {
    (CJet::constant_re(alpha * alpha) + q * q).sqrt()
}

fn l1_jet<R: Real>(t_prime: R, s: R, eps: R) -> CJet<R> {
    let mut arg = CJet::constant(Complex::new(eps, s - t_prime));
    arg.d1 = Complex::new(R::zero(), -R::one());
    arg.ln()
}

fn v_jet<R: Real>(q: CJet<R>, z: CJet<R>, zr: CJet<R>, l1: CJet<R>, s: R, alpha: R) -> RJet<R> {
    let beta = (s * s - alpha * alpha).sqrt();
    let arg = CJet::constant_re(alpha * alpha)
        + q.scale(Complex::new(R::zero(), -s))
        + z.scale(Complex::new(R::zero(), -beta));
    ((arg.ln() - l1) * zr).re().scaled(R::one() / R::PI())
}

fn w_jet<R: Real>(q: CJet<R>, z: CJet<R>, zr: CJet<R>, l1: CJet<R>, s: R, alpha: R) -> RJet<R> {
    let beta = (alpha * alpha - s * s).sqrt();
    let arg = CJet::constant_re(alpha * alpha)
        + q.scale(Complex::new(R::zero(), -s))
        + z.scale(Complex::new(beta, R::zero()));
    ((arg.ln() - l1) * zr).im().scaled(-R::one() / R::PI())
}

fn u_jet<R: Real>(t_prime: R, sigma: R, eps: R, r: R) -> RJet<R> {
    let x = t_prime - sigma;
    let d = x * x + eps * eps;
    let pi = R::PI();
    RJet {
        v: R::of(0.5) / r + (x / eps).atan() / (pi * r),
        d1: eps / (pi * d) / r,
        d2: -(R::of(2.0) * eps * x) / (pi * d * d) / r,
        d3: R::of(2.0) * eps * (R::of(3.0) * x * x - eps * eps) / (pi * d * d * d) / r,
    }
}

// ------------------------------------------------------------------
// The regularized field
// ------------------------------------------------------------------

/// Values of the regularized kernels at one (r, t), for a unit load /
/// unit impulse (caller applies the physical impulse J).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval<R: Real> {
    /// Regularized step response u_eps (m per N).
    pub u: R,
    /// Impulse displacement response w_eps = du/dt.
    pub w: R,
    /// Impulse acceleration response a_eps = d^3 u/dt^3.
    pub a: R,
}

/// Closed-form weights, present only in the branch-safe regime.
#[derive(Debug, Clone, Copy)]
struct ClosedFormWeights<R: Real> {
    /// i A_1 (real: A_1 is purely imaginary).
    ia1: R,
    /// A_2, A_3 with their root slots.
    a2: R,
    a3: R,
    kappa2: R,
    kappa3: R,
}

/// A halfspace plus a smoothing length: everything needed to evaluate the
/// regularized response.
#[derive(Debug, Clone)]
pub struct RegularizedField<R: Real> {
    pub halfspace: HalfspaceParams<R>,
    /// Smoothing length eps (m); the kernel argument is c_s t.
    pub epsilon: R,
    weights: Option<ClosedFormWeights<R>>,
}

impl<R: Real> RegularizedField<R> {
    /// Build a field. Any Poisson ratio in [0, 0.5) is accepted; the
    /// closed-form evaluators additionally require nu < 0.2631.
    pub fn new(halfspace: HalfspaceParams<R>, epsilon: R) -> Result<Self> {
        if !(epsilon > R::zero()) {
            return Err(Error::Domain(format!(
                "smoothing length must be positive, got {epsilon}"
            )));
        }
        let nu = halfspace.poisson;
        let weights = if halfspace.all_real && nu.as_f64() < NU_SUPPORT_MAX {
            let i = Complex::new(R::zero(), R::one());
            let ia1 = i * halfspace.coeffs[0];
            let a2 = halfspace.coeffs[1];
            let a3 = halfspace.coeffs[2];
            let tol = R::of(1e-9);
            let imag_ok = ia1.im.abs() < tol * (R::one() + ia1.re.abs())
                && a2.im.abs() < tol * (R::one() + a2.re.abs())
                && a3.im.abs() < tol * (R::one() + a3.re.abs());
            let kappa2 = halfspace.kappa_sq[1].re;
            let kappa3 = halfspace.kappa_sq[2].re;
            if imag_ok && kappa2 > R::zero() && kappa3 > R::zero() {
                Some(ClosedFormWeights {
                    ia1: ia1.re,
                    a2: a2.re,
                    a3: a3.re,
                    kappa2: kappa2.sqrt(),
                    kappa3: kappa3.sqrt(),
                })
            } else {
                None
            }
        } else {
            None
        };
        Ok(Self {
            halfspace,
            epsilon,
            weights,
        })
    }

    /// Whether the closed form applies (nu inside the branch-safe range).
    pub fn closed_form_supported(&self) -> bool {
        self.weights.is_some()
    }

    pub fn poisson(&self) -> R {
        self.halfspace.poisson
    }

    fn weights(&self) -> Result<&ClosedFormWeights<R>> {
        self.weights.as_ref().ok_or(Error::UnsupportedRegime {
            nu: self.halfspace.poisson.as_f64(),
        })
    }

    fn check_radius(&self, r: R) -> Result<()> {
        if r < R::of(R_MIN) {
            return Err(Error::Domain(format!(
                "surface radius {r} below the evaluation guard {R_MIN} m"
            )));
        }
        Ok(())
    }

    /// k'(r, t') jets for one smoothing scale.
    fn kprime_jet(&self, w: &ClosedFormWeights<R>, eps: R, r: R, t_prime: R) -> RJet<R> {
        let hs = &self.halfspace;
        let a = hs.speed_ratio;
        let gamma = hs.gamma;
        let q = q_jet(t_prime, eps);

        let mut acc = u_jet(t_prime, a * r, eps, r).add(u_jet(t_prime, r, eps, r));

        let l1_g = l1_jet(t_prime, gamma * r, eps);
        let l1_r = l1_jet(t_prime, r, eps);
        let l1_a = l1_jet(t_prime, a * r, eps);

        // W block, alpha = gamma r (shared Z).
        let zg = z_jet(q, gamma * r);
        let zgr = zg.recip();
        let w_gg = w_jet(q, zg, zgr, l1_g, gamma * r, gamma * r);
        let w_rg = w_jet(q, zg, zgr, l1_r, r, gamma * r);
        let w_ag = w_jet(q, zg, zgr, l1_a, a * r, gamma * r);
        acc = acc.add(
            w_gg.scaled(R::of(2.0))
                .add(w_rg.scaled(-R::one()))
                .add(w_ag.scaled(-R::one()))
                .scaled(w.ia1),
        );

        // V blocks, alpha = kappa_j r for j = 2, 3.
        for (kappa, aj) in [(w.kappa2, w.a2), (w.kappa3, w.a3)] {
            let alpha = kappa * r;
            let z = z_jet(q, alpha);
            let zr = z.recip();
            let v_r = v_jet(q, z, zr, l1_r, r, alpha);
            let v_a = v_jet(q, z, zr, l1_a, a * r, alpha);
            acc = acc.add(v_r.add(v_a.scaled(-R::one())).scaled(-aj));
        }

        let pref = (R::one() - hs.poisson) / (R::of(4.0) * R::PI() * hs.shear_modulus);
        acc.scaled(pref)
    }

    /// Full evaluation: u_eps and its first and third time derivatives.
    pub fn eval(&self, r: R, t: R) -> Result<KernelEval<R>> {
        self.check_radius(r)?;
        let w = *self.weights()?;
        let c_s = self.halfspace.c_s;
        let t_prime = c_s * t;
        let k1 = self.kprime_jet(&w, self.epsilon, r, t_prime);
        let k2 = self.kprime_jet(&w, R::of(2.0) * self.epsilon, r, t_prime);
        let two = R::of(2.0);
        Ok(KernelEval {
            u: two * k1.v - k2.v,
            w: c_s * (two * k1.d1 - k2.d1),
            a: c_s.powi(3) * (two * k1.d3 - k2.d3),
        })
    }

    /// Regularized step response u_eps(r, t).
    pub fn u_eps(&self, r: R, t: R) -> Result<R> {
        Ok(self.eval(r, t)?.u)
    }

    /// Impulse displacement response w_eps(r, t) = du_eps/dt.
    pub fn w_eps(&self, r: R, t: R) -> Result<R> {
        Ok(self.eval(r, t)?.w)
    }

    /// Impulse acceleration response a_eps(r, t) = d^3 u_eps/dt^3.
    pub fn a_eps(&self, r: R, t: R) -> Result<R> {
        Ok(self.eval(r, t)?.a)
    }

    /// Coefficient of the 1/r surface singularity of u_eps near the origin:
    /// u_eps(r, t) -> q_u(t)/r as r -> 0, with q_u = (1-nu)/(2 pi mu) F_f(t).
    pub fn origin_coefficient_u(&self, t: R) -> R {
        let hs = &self.halfspace;
        (R::one() - hs.poisson) / (R::of(2.0) * R::PI() * hs.shear_modulus)
            * kernel_f_cdf(t, self.epsilon, hs.c_s)
    }

    /// Same coefficient for a_eps: q_a = (1-nu)/(2 pi mu) f_eps''(t).
    pub fn origin_coefficient_a(&self, t: R) -> R {
        let hs = &self.halfspace;
        (R::one() - hs.poisson) / (R::of(2.0) * R::PI() * hs.shear_modulus)
            * kernel_f_ddot(t, self.epsilon, hs.c_s)
    }

    /// Numerical convolution u_eps = f_eps * u_n by adaptive quadrature,
    /// with splits at the three wavefronts and a square-root rule at the
    /// R-front singularity. Valid for every nu in [0, 0.5). The tolerance
    /// is absolute on the dimensionless (unit static prefactor) response.
    pub fn convolution_oracle(&self, r: R, t: R) -> Result<R> {
        self.check_radius(r)?;
        let hs = &self.halfspace;
        let wf = lamb::wavefront_times(hs, r);
        let eps = self.epsilon;
        let c_s = hs.c_s;
        let tol = R::of(1e-8);

        // Dimensionless integrand: f_eps(t - s) G(c_s s / r).
        let shape = |s: R| lamb::pekeris_shape(hs, c_s * s / r) * kernel_f(t - s, eps, c_s);

        // Segment [t_p, t_s] with an extra split at the kernel centre.
        let mut pts = vec![wf.t_p];
        if t > wf.t_p && t < wf.t_s {
            pts.push(t);
        }
        pts.push(wf.t_s);
        let seg1 = quad::integrate_split(&shape, &pts, tol)?;

        // Segment [t_s, t_r]: (gamma - tau)^(-1/2) divergence at the upper
        // end; substitute s = t_r - xi^2 and keep a split at the kernel
        // centre inside the transformed variable.
        let g = |xi: R| {
            let s = wf.t_r - xi * xi;
            shape(s) * R::of(2.0) * xi
        };
        let xi_max = (wf.t_r - wf.t_s).sqrt();
        let mut pts2 = vec![R::zero()];
        if t > wf.t_s && t < wf.t_r {
            let xi_t = (wf.t_r - t).sqrt();
            if xi_t > R::zero() && xi_t < xi_max {
                pts2.push(xi_t);
            }
        }
        pts2.push(xi_max);
        let seg2 = quad::integrate_split(&g, &pts2, tol)?;

        // Tail [t_r, infinity): G = 1 exactly, so the integral is the
        // kernel CDF evaluated at t - t_r.
        let tail = kernel_f_cdf(t - wf.t_r, eps, c_s);

        Ok(lamb::static_displacement(hs, r) * (seg1 + seg2 + tail))
    }

    /// Quadrant checks from the branch-cut analysis, swept over a grid of
    /// (r, t') points at both smoothing scales. A violation would indicate
    /// a principal-branch crossing; the supported regime has none.
    pub fn branch_safety_scan(&self, radii: &[R], t_steps: usize) -> Result<BranchScan<R>> {
        let w = *self.weights()?;
        let hs = &self.halfspace;
        let a = hs.speed_ratio;
        let gamma = hs.gamma;
        let mut scan = BranchScan {
            points: 0,
            checks: 0,
            violations: Vec::new(),
        };
        let near = R::of(1e-12);
        for &r in radii {
            let t_lo = -gamma * r;
            let t_hi = R::of(2.5) * gamma * r;
            for i in 0..t_steps {
                let frac = R::of(i as f64) / R::of((t_steps - 1).max(1) as f64);
                let tp = t_lo + (t_hi - t_lo) * frac;
                scan.points += 1;
                for scale in [self.epsilon, R::of(2.0) * self.epsilon] {
                    let q = Complex::new(scale, -tp);
                    // Z radicands for every alpha in play.
                    for alpha in [gamma * r, w.kappa2 * r, w.kappa3 * r] {
                        let rad = Complex::new(alpha * alpha, R::zero()) + q * q;
                        scan.checks += 1;
                        if rad.re < R::zero() && rad.im.abs() <= near * rad.norm() {
                            scan.record(tp, alpha, alpha, "Z radicand near negative real axis");
                        }
                    }
                    // First log argument: positive real part.
                    for s in [gamma * r, r, a * r] {
                        scan.checks += 1;
                        let q1 = Complex::new(scale, s - tp);
                        if q1.re <= R::zero() {
                            scan.record(tp, s, R::zero(), "first log argument Re <= 0");
                        }
                    }
                    // V second log: negative imaginary part.
                    for kappa in [w.kappa2, w.kappa3] {
                        let alpha = kappa * r;
                        let z = (Complex::new(alpha * alpha, R::zero()) + q * q).sqrt();
                        for s in [r, a * r] {
                            scan.checks += 1;
                            let beta = (s * s - alpha * alpha).sqrt();
                            let i = Complex::new(R::zero(), R::one());
                            let arg = Complex::new(alpha * alpha, R::zero())
                                - i * q * Complex::new(s, R::zero())
                                - i * z * Complex::new(beta, R::zero());
                            if arg.im >= R::zero() {
                                scan.record(tp, s, alpha, "V log argument Im >= 0");
                            }
                        }
                    }
                    // W second log: never in the second quadrant.
                    {
                        let alpha = gamma * r;
                        let z = (Complex::new(alpha * alpha, R::zero()) + q * q).sqrt();
                        for s in [gamma * r, r, a * r] {
                            scan.checks += 1;
                            let beta = (alpha * alpha - s * s).max(R::zero()).sqrt();
                            let i = Complex::new(R::zero(), R::one());
                            let arg = Complex::new(alpha * alpha, R::zero())
                                - i * q * Complex::new(s, R::zero())
                                + z * Complex::new(beta, R::zero());
                            if arg.re < R::zero() && arg.im > R::zero() {
                                scan.record(tp, s, alpha, "W log argument in second quadrant");
                            }
                        }
                    }
                }
            }
        }
        Ok(scan)
    }
}

/// Outcome of a branch-cut safety sweep.
#[derive(Debug, Clone)]
pub struct BranchScan<R: Real> {
    /// Number of (r, t') grid points visited.
    pub points: usize,
    /// Number of individual quadrant conditions evaluated.
    pub checks: usize,
    pub violations: Vec<BranchViolation<R>>,
}

#[derive(Debug, Clone)]
pub struct BranchViolation<R: Real> {
    pub t_prime: R,
    pub s: R,
    pub alpha: R,
    pub kind: &'static str,
}

impl<R: Real> BranchScan<R> {
    fn record(&mut self, t_prime: R, s: R, alpha: R, kind: &'static str) {
        if self.violations.len() < 100 {
            self.violations.push(BranchViolation {
                t_prime,
                s,
                alpha,
                kind,
            });
        }
    }
}
