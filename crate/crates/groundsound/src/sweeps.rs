//! Parameter sweeps: ground-vs-ball intensity as a function of listening
//! angle, ground shear speed, and contact timescale, with the log-log slope
//! and knee fits used to characterize them.

use crate::contact::ContactEvent;
use crate::error::Result;
use crate::materials::{derive_halfspace, HalfspaceParams, Material};
use crate::radiation::{
    ball_dipole_pressure, rayleigh_ground_pressure, AirParams, RayleighOptions,
};
use crate::real::Real;

/// One sweep: intensities (time-integrated squared pressure) of the ground
/// and ball sounds along a swept axis.
#[derive(Debug, Clone)]
pub struct SweepResult<R: Real> {
    pub axis_name: &'static str,
    pub axis: Vec<R>,
    pub ground_intensity: Vec<R>,
    pub ball_intensity: Vec<R>,
}

impl<R: Real> SweepResult<R> {
    /// Ratio ground/ball in dB at index i.
    pub fn ratio_db(&self, i: usize) -> R {
        R::of(10.0) * (self.ground_intensity[i] / self.ball_intensity[i]).log10()
    }
}

/// Least-squares slope of log10(y) against log10(x) over the points with
/// x inside [lo, hi].
pub fn loglog_slope<R: Real>(xs: &[R], ys: &[R], lo: R, hi: R) -> R {
    let mut n = R::zero();
    let mut sx = R::zero();
    let mut sy = R::zero();
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        if x >= lo && x <= hi && y > R::zero() {
            let lx = x.log10();
            let ly = y.log10();
            n += R::one();
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Knee of a "rise then plateau" log-log curve: intersection of the
/// low-end power-law fit with the high-end plateau level.
pub fn fit_knee<R: Real>(xs: &[R], ys: &[R], slope_window: (R, R), plateau_from: R) -> R {
    // Low-side fit: log y = m log x + b.
    let m = loglog_slope(xs, ys, slope_window.0, slope_window.1);
    let mut b = R::zero();
    let mut n = R::zero();
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        if x >= slope_window.0 && x <= slope_window.1 && y > R::zero() {
            b += y.log10() - m * x.log10();
            n += R::one();
        }
    }
    let b = b / n;
    // Plateau level.
    let mut level = R::zero();
    let mut np = R::zero();
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        if x >= plateau_from && y > R::zero() {
            level += y.log10();
            np += R::one();
        }
    }
    let level = level / np;
    R::of(10.0).powf((level - b) / m)
}

/// Common physical inputs for a sweep around one impact scenario.
#[derive(Debug, Clone)]
pub struct SweepContext<R: Real> {
    pub ground: Material<R>,
    pub halfspace: HalfspaceParams<R>,
    pub event: ContactEvent<R>,
    pub air: AirParams<R>,
    /// Listening distance from the impact point (m).
    pub distance: R,
    pub radial_per_eps: R,
    /// Surface truncation radius for the c_s and t_c sweeps: a fixed
    /// integration patch keeps the swept quantity the only variable (the
    /// supersonic annulus otherwise radiates more the farther the
    /// integration follows it).
    pub surface_extent: R,
}

impl<R: Real> SweepContext<R> {
    fn ground_intensity(
        &self,
        event: &ContactEvent<R>,
        hs: &HalfspaceParams<R>,
        listener: [R; 3],
        rate: R,
        duration: R,
        r_max: Option<R>,
    ) -> Result<R> {
        let mut opts = RayleighOptions::new(rate, duration);
        opts.radial_per_eps = self.radial_per_eps;
        opts.r_max = r_max;
        let tr = rayleigh_ground_pressure(event, hs, listener, self.air, &opts)?;
        Ok(tr.energy())
    }

    fn ball_intensity(
        &self,
        event: &ContactEvent<R>,
        listener: [R; 3],
        rate: R,
        duration: R,
        reflective: bool,
    ) -> Result<R> {
        let tr = ball_dipole_pressure(event, listener, reflective, self.air, rate, duration)?;
        Ok(tr.energy())
    }

    fn default_rate_duration(&self, event: &ContactEvent<R>, cs: R, gamma: R) -> (R, R) {
        let t_c = event.timescale;
        let z = self.distance;
        let rate = (R::of(24.0) / t_c).max(R::of(96_000.0)).min(R::of(2.4e6));
        // Flight time, the contact pulse with its fourth-order tails, and a
        // bounded allowance for the surface ring-down.
        let tail = (R::of(12.0) * z * gamma / cs).max(R::of(1e-3)).min(R::of(5e-3));
        let duration = z / self.air.speed + R::of(24.0) * t_c + tail;
        (rate, duration)
    }

    /// Intensities against listening elevation angle (degrees; 90 is
    /// directly overhead) at fixed distance.
    pub fn sweep_angle(&self, angles_deg: &[R]) -> Result<SweepResult<R>> {
        let (rate, duration) =
            self.default_rate_duration(&self.event, self.halfspace.c_s, self.halfspace.gamma);
        let mut out = SweepResult {
            axis_name: "angle_deg",
            axis: angles_deg.to_vec(),
            ground_intensity: Vec::new(),
            ball_intensity: Vec::new(),
        };
        for &deg in angles_deg {
            let th = deg * R::PI() / R::of(180.0);
            let listener = [
                self.distance * th.cos(),
                R::zero(),
                self.distance * th.sin(),
            ];
            out.ground_intensity.push(self.ground_intensity(
                &self.event,
                &self.halfspace,
                listener,
                rate,
                duration,
                None,
            )?);
            out.ball_intensity
                .push(self.ball_intensity(&self.event, listener, rate, duration, true)?);
        }
        Ok(out)
    }

    /// Ground intensity against the ground shear speed, holding the shear
    /// modulus, Poisson ratio and contact timescale fixed (the density
    /// varies implicitly). The ball sound does not depend on c_s.
    pub fn sweep_cs(&self, speeds: &[R]) -> Result<SweepResult<R>> {
        let listener = [R::zero(), R::zero(), self.distance];
        let mut out = SweepResult {
            axis_name: "c_s",
            axis: speeds.to_vec(),
            ground_intensity: Vec::new(),
            ball_intensity: Vec::new(),
        };
        let mu = self.halfspace.shear_modulus;
        let e = self.ground.youngs_modulus;
        let nu = self.ground.poisson;
        for &cs in speeds {
            let rho = mu / (cs * cs);
            let ground = Material::new("swept", e, nu, rho)?;
            let hs = derive_halfspace(&ground)?;
            let mut ev = self.event.clone();
            ev.ground_cs = hs.c_s;
            ev.epsilon = hs.c_s * ev.timescale / R::of(4.0);
            let (rate, duration) = self.default_rate_duration(&ev, hs.c_s, hs.gamma);
            out.ground_intensity.push(self.ground_intensity(
                &ev,
                &hs,
                listener,
                rate,
                duration,
                Some(self.surface_extent),
            )?);
            out.ball_intensity
                .push(self.ball_intensity(&ev, listener, rate, duration, true)?);
        }
        Ok(out)
    }

    /// Intensities against the contact timescale at fixed impulse.
    pub fn sweep_tc(&self, timescales: &[R]) -> Result<SweepResult<R>> {
        let listener = [R::zero(), R::zero(), self.distance];
        let mut out = SweepResult {
            axis_name: "t_c",
            axis: timescales.to_vec(),
            ground_intensity: Vec::new(),
            ball_intensity: Vec::new(),
        };
        for &tc in timescales {
            let mut ev = self.event.clone();
            ev.timescale = tc;
            ev.epsilon = ev.ground_cs * tc / R::of(4.0);
            let (rate, duration) =
                self.default_rate_duration(&ev, self.halfspace.c_s, self.halfspace.gamma);
            out.ground_intensity.push(self.ground_intensity(
                &ev,
                &self.halfspace,
                listener,
                rate,
                duration,
                Some(self.surface_extent),
            )?);
            out.ball_intensity
                .push(self.ball_intensity(&ev, listener, rate, duration, false)?);
        }
        Ok(out)
    }
}
