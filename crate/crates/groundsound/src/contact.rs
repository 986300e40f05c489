//! Hertzian impact model: impulse magnitude, contact timescale, smoothing
//! length, and the ball's rigid-body acceleration profile.
//!
//! The half-sine Hertz force is replaced by the fourth-order temporal
//! kernel with its width tied to the contact timescale, `4 eps = c_s t_c`,
//! which keeps the jerk continuous. The impulse is `(1 + kappa) m v_n`.

use crate::error::{Error, Result};
use crate::kernel::{kernel_f, kernel_f_cdf, kernel_f_dot};
use crate::materials::{HalfspaceParams, Material};
use crate::real::Real;
use crate::scenario::ScenarioConfig;

/// One impulsive ground impact.
#[derive(Debug, Clone)]
pub struct ContactEvent<R: Real> {
    /// Impact location on the ground plane z = 0.
    pub impact_point: [R; 3],
    /// Time of impact (s).
    pub impact_time: R,
    /// Impulse J = (1 + kappa) m v_n (N s).
    pub impulse: R,
    /// Contact timescale t_c (s).
    pub timescale: R,
    /// Regularization length eps = c_s t_c / 4 (m), with the ground's c_s.
    pub epsilon: R,
    /// Normal impact speed (m/s).
    pub normal_velocity: R,
    /// Ball mass (kg).
    pub mass: R,
    /// Ball radius a0 (m).
    pub ball_radius: R,
    /// Effective contact stiffness E* (Pa).
    pub effective_stiffness: R,
    /// Ground shear wave speed used for the kernel (m/s).
    pub ground_cs: R,
}

/// Effective Hertz stiffness: 1/E* = (1-nu1^2)/E1 + (1-nu2^2)/E2.
pub fn effective_stiffness<R: Real>(obj: &Material<R>, gnd: &Material<R>) -> R {
    let term = |m: &Material<R>| (R::one() - m.poisson * m.poisson) / m.youngs_modulus;
    R::one() / (term(obj) + term(gnd))
}

/// Hertz contact timescale t_c = 2.87 (m^2 / (a0 E*^2 v_n))^(1/5).
pub fn contact_timescale<R: Real>(mass: R, a0: R, e_star: R, v_n: R) -> R {
    R::of(2.87) * (mass * mass / (a0 * e_star * e_star * v_n)).powf(R::of(0.2))
}

/// Maximum Hertz contact radius (15 m v_n^2 a0^2 / (16 E*))^(1/5);
/// diagnostic only — temporal regularization does the smoothing.
pub fn contact_radius<R: Real>(mass: R, a0: R, e_star: R, v_n: R) -> R {
    (R::of(15.0 / 16.0) * mass * v_n * v_n * a0 * a0 / e_star).powf(R::of(0.2))
}

impl<R: Real> ContactEvent<R> {
    /// Build an event from materials and impact kinematics.
    #[allow(clippy::too_many_arguments)]
    pub fn from_impact(
        obj: &Material<R>,
        gnd: &Material<R>,
        ground_cs: R,
        ball_radius: R,
        v_n: R,
        restitution: R,
        impact_point: [R; 3],
        impact_time: R,
    ) -> Result<Self> {
        if !(v_n > R::zero()) {
            return Err(Error::Domain(format!(
                "no impact: normal velocity must be positive, got {v_n}"
            )));
        }
        let mass = obj.density * R::of(4.0 / 3.0) * R::PI() * ball_radius.powi(3);
        let e_star = effective_stiffness(obj, gnd);
        let t_c = contact_timescale(mass, ball_radius, e_star, v_n);
        Ok(Self::with_timescale(
            mass,
            ball_radius,
            v_n,
            restitution,
            t_c,
            ground_cs,
            e_star,
            impact_point,
            impact_time,
        ))
    }

    /// Build an event with a prescribed contact timescale (used for the
    /// fixed-timescale material comparisons and parameter sweeps).
    #[allow(clippy::too_many_arguments)]
    pub fn with_timescale(
        mass: R,
        ball_radius: R,
        v_n: R,
        restitution: R,
        timescale: R,
        ground_cs: R,
        effective_stiffness: R,
        impact_point: [R; 3],
        impact_time: R,
    ) -> Self {
        Self {
            impact_point,
            impact_time,
            impulse: (R::one() + restitution) * mass * v_n,
            timescale,
            epsilon: ground_cs * timescale / R::of(4.0),
            normal_velocity: v_n,
            mass,
            ball_radius,
            effective_stiffness,
            ground_cs,
        }
    }

    /// Normal force on the ground, f(t) = J f_eps(t - t_impact) (N).
    pub fn ground_force(&self, t: R) -> R {
        self.impulse * kernel_f(t - self.impact_time, self.epsilon, self.ground_cs)
    }

    /// Running force integral up to t (N s); saturates at J.
    pub fn ground_impulse_cdf(&self, t: R) -> R {
        self.impulse * kernel_f_cdf(t - self.impact_time, self.epsilon, self.ground_cs)
    }

    /// Ball rigid-body acceleration a(t) = -f(t)/m (m/s^2).
    pub fn ball_acceleration(&self, t: R) -> R {
        -self.ground_force(t) / self.mass
    }

    /// Ball jerk da/dt (m/s^3), analytic.
    pub fn ball_jerk(&self, t: R) -> R {
        -self.impulse * kernel_f_dot(t - self.impact_time, self.epsilon, self.ground_cs)
            / self.mass
    }

    /// Kernel time width eps / c_s = t_c / 4 (s).
    pub fn kernel_time_scale(&self) -> R {
        self.epsilon / self.ground_cs
    }
}

/// Derive the contact event of a single-impact scenario.
pub fn hertz_event<R: Real>(
    scenario: &ScenarioConfig<R>,
    hs: &HalfspaceParams<R>,
) -> Result<ContactEvent<R>> {
    let imp = scenario.impact();
    ContactEvent::from_impact(
        &scenario.object,
        &scenario.ground,
        hs.c_s,
        scenario.ball_radius,
        imp.normal_speed,
        scenario.restitution,
        imp.point,
        imp.time,
    )
}

/// Contact events for every impact in a (possibly multi-ball) scenario.
pub fn hertz_events<R: Real>(
    scenario: &ScenarioConfig<R>,
    hs: &HalfspaceParams<R>,
) -> Result<Vec<ContactEvent<R>>> {
    scenario
        .impacts
        .iter()
        .map(|imp| {
            ContactEvent::from_impact(
                &scenario.object,
                &scenario.ground,
                hs.c_s,
                scenario.ball_radius,
                imp.normal_speed,
                scenario.restitution,
                imp.point,
                imp.time,
            )
        })
        .collect()
}
