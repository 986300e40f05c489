//! Free-field sound synthesis.
//!
//! The ground sound comes from the Rayleigh integral over the halfspace
//! surface: every surface patch contributes its regularized normal
//! acceleration, delayed by the acoustic flight time and weighted by
//! 1/(2 pi R'). The impacting ball's own acceleration noise is modelled as
//! a compact translating sphere (an acoustic dipole), optionally with its
//! reflection image through the ground plane, which turns the pair into a
//! longitudinal quadrupole above hard ground.

use rayon::prelude::*;

use crate::contact::ContactEvent;
use crate::error::{Error, Result};
use crate::kernel::{RegularizedField, R_MIN};
use crate::materials::{derive_halfspace, HalfspaceParams, Material, MaterialDb};
use crate::real::Real;
use crate::scenario::STANDARD_GRAVITY;

/// Air parameters for radiation.
#[derive(Debug, Clone, Copy)]
pub struct AirParams<R: Real> {
    /// Density rho_0 (kg/m^3).
    pub density: R,
    /// Speed of sound c_0 (m/s).
    pub speed: R,
}

impl<R: Real> Default for AirParams<R> {
    fn default() -> Self {
        Self {
            density: R::of(1.2),
            speed: R::of(343.0),
        }
    }
}

/// Uniformly sampled acoustic pressure at a listening point.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureTrace<R: Real> {
    pub sample_rate: R,
    pub start_time: R,
    pub samples: Vec<R>,
}

impl<R: Real> PressureTrace<R> {
    pub fn zeros(sample_rate: R, start_time: R, len: usize) -> Self {
        Self {
            sample_rate,
            start_time,
            samples: vec![R::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> R {
        self.start_time + R::of(i as f64) / self.sample_rate
    }

    /// Deposit a value at an arbitrary time, linearly split between the two
    /// adjacent samples. Contributions outside the trace are dropped.
    pub fn deposit(&mut self, time: R, value: R) {
        let pos = (time - self.start_time) * self.sample_rate;
        let idx = pos.floor();
        let frac = pos - idx;
        let i = idx.as_f64();
        if i >= -1.0 && i < self.samples.len() as f64 {
            let i0 = i as isize;
            if i0 >= 0 {
                self.samples[i0 as usize] += value * (R::one() - frac);
            }
            let i1 = i0 + 1;
            if i1 >= 0 && (i1 as usize) < self.samples.len() {
                self.samples[i1 as usize] += value * frac;
            }
        }
    }

    /// Time-integrated squared pressure (Pa^2 s).
    pub fn energy(&self) -> R {
        self.samples.iter().map(|&p| p * p).sum::<R>() / self.sample_rate
    }

    pub fn peak_abs(&self) -> R {
        self.samples
            .iter()
            .fold(R::zero(), |m, &p| m.max(p.abs()))
    }

    pub fn scaled(&self, k: R) -> Self {
        Self {
            sample_rate: self.sample_rate,
            start_time: self.start_time,
            samples: self.samples.iter().map(|&p| p * k).collect(),
        }
    }

    /// Sample-wise sum; traces must share rate, start and length.
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.samples.len(), other.samples.len());
        for (a, b) in self.samples.iter_mut().zip(other.samples.iter()) {
            *a += *b;
        }
    }
}

/// Relative intensity 10 log10( E(ground) / E(ball) ) in dB, with the
/// time-integrated squared pressure as the intensity measure.
pub fn intensity_db<R: Real>(ground: &PressureTrace<R>, ball: &PressureTrace<R>) -> Result<R> {
    if ground.sample_rate != ball.sample_rate || ground.len() != ball.len() {
        return Err(Error::Domain(
            "intensity comparison needs equal sample rates and lengths".into(),
        ));
    }
    let eb = ball.energy();
    if !(eb > R::zero()) {
        return Err(Error::Domain(
            "silent ball trace: relative intensity undefined".into(),
        ));
    }
    Ok(R::of(10.0) * (ground.energy() / eb).log10())
}

/// Relative peak intensity 20 log10( max|p_ground| / max|p_ball| ) in dB.
/// The material comparison table follows this transient-peak measure: the
/// energy measure diverges with the integration extent for supersonic
/// grounds (the expanding surface annulus keeps radiating), while peak
/// amplitudes are extent-independent and reproduce the reference ordering.
pub fn peak_intensity_db<R: Real>(
    ground: &PressureTrace<R>,
    ball: &PressureTrace<R>,
) -> Result<R> {
    let pb = ball.peak_abs();
    if !(pb > R::zero()) {
        return Err(Error::Domain(
            "silent ball trace: relative intensity undefined".into(),
        ));
    }
    Ok(R::of(20.0) * (ground.peak_abs() / pb).log10())
}

/// Annular surface quadrature grid: geometric spacing near the origin
/// (resolving the 1/r surface amplitude), uniform spacing of eps/n beyond
/// 10 eps.
#[derive(Debug, Clone)]
pub struct RadialGrid<R: Real> {
    /// (node radius, annulus area) pairs.
    pub nodes: Vec<(R, R)>,
    pub r_min: R,
    pub r_max: R,
}

impl<R: Real> RadialGrid<R> {
    pub fn new(r_min: R, r_max: R, eps: R, per_eps: R, geo_per_octave: usize) -> Self {
        assert!(r_min > R::zero() && r_max > r_min);
        let mut edges = vec![r_min];
        let ratio = R::of(2.0).powf(R::one() / R::of(geo_per_octave as f64));
        let geo_end = (R::of(10.0) * eps).min(r_max);
        let mut e = r_min;
        while e < geo_end {
            e = (e * ratio).min(geo_end);
            edges.push(e);
        }
        if e < r_max {
            let dr = eps / per_eps;
            let n = ((r_max - e) / dr).ceil().as_f64() as usize;
            let n = n.max(1);
            let dr = (r_max - e) / R::of(n as f64);
            for i in 1..=n {
                edges.push(e + dr * R::of(i as f64));
            }
        }
        let mut nodes = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            let node = (w[0] + w[1]) * R::of(0.5);
            let area = R::PI() * (w[1] * w[1] - w[0] * w[0]);
            nodes.push((node, area));
        }
        Self {
            nodes,
            r_min,
            r_max,
        }
    }

    /// Total area covered; equals the annulus between r_min and r_max.
    pub fn total_area(&self) -> R {
        self.nodes.iter().map(|&(_, a)| a).sum()
    }
}

/// Quality/extent options for the Rayleigh integral.
#[derive(Debug, Clone)]
pub struct RayleighOptions<R: Real> {
    pub sample_rate: R,
    pub duration: R,
    /// Radial nodes per regularization length.
    pub radial_per_eps: R,
    /// Innermost evaluated radius.
    pub r_min: R,
    /// Surface truncation radius; `None` picks 1.2 x (R-front travel over
    /// the trace duration).
    pub r_max: Option<R>,
    /// Replace the 1/r surface field inside this radius by its
    /// mean-preserving linear ramp (origin-robustness experiment).
    pub origin_ramp: Option<R>,
}

impl<R: Real> RayleighOptions<R> {
    pub fn new(sample_rate: R, duration: R) -> Self {
        Self {
            sample_rate,
            duration,
            radial_per_eps: R::of(8.0),
            r_min: R::of(1e-4),
            r_max: None,
            origin_ramp: None,
        }
    }
}

/// Ground sound at a listening point via the discretized Rayleigh integral
/// with retarded-time accumulation.
pub fn rayleigh_ground_pressure<R: Real>(
    event: &ContactEvent<R>,
    hs: &HalfspaceParams<R>,
    listener: [R; 3],
    air: AirParams<R>,
    opts: &RayleighOptions<R>,
) -> Result<PressureTrace<R>> {
    if !(listener[2] > R::zero()) {
        return Err(Error::Domain(
            "listener must be strictly above the ground plane".into(),
        ));
    }
    let field = RegularizedField::new(hs.clone(), event.epsilon)?;
    if !field.closed_form_supported() {
        return Err(Error::UnsupportedRegime {
            nu: hs.poisson.as_f64(),
        });
    }
    let c_r = hs.rayleigh_speed();
    let auto_r_max = (R::of(1.2) * c_r * opts.duration)
        .max(R::of(10.0) * event.epsilon)
        .max(R::of(2.0) * listener[2]);
    let r_max = match opts.r_max {
        Some(user) => {
            if user < c_r * opts.duration {
                eprintln!(
                    "warning: truncation radius {user} does not cover the R-wavefront over the trace ({} needed); low-frequency energy will be missing",
                    c_r * opts.duration
                );
            }
            user
        }
        None => auto_r_max,
    };
    let grid = RadialGrid::new(opts.r_min, r_max, event.epsilon, opts.radial_per_eps, 24);

    let n_samples = (opts.duration * opts.sample_rate).ceil().as_f64() as usize;
    let dx = listener[0] - event.impact_point[0];
    let dy = listener[1] - event.impact_point[1];
    let rho_l = (dx * dx + dy * dy).sqrt();
    let on_axis = rho_l < R::of(1e-9);
    let phi0 = dy.atan2(dx);
    let z = listener[2];

    let j = event.impulse;
    let t0 = event.impact_time;
    let rate = opts.sample_rate;
    let two_pi = R::of(2.0) * R::PI();

    // Per-ring source evaluation: the surface only moves while the
    // wavefront fan passes, so the kernel is tabulated on an oversampled
    // window around [t_p, t_r] (plus fourth-order tails) and the output
    // gathers it back at the exact retarded times with cubic
    // interpolation. The subsonic-ground regime lives on near-perfect
    // cancellation between neighbouring annuli, which nearest-sample or
    // linear deposits visibly break.
    let oversample = R::of(4.0);
    let src_rate = rate * oversample;
    // Fourth-order kernel tails: 64 widths keep the truncated amplitude
    // below 1e-6 of the peak; very long kernels cap the margin in absolute
    // time (12 widths are still below 1e-3).
    let s_t = event.kernel_time_scale();
    let margin = (R::of(64.0) * s_t).min(R::of(12.0) * s_t + R::of(2e-3));
    let duration = opts.duration;
    let gamma = hs.gamma;
    let a_ratio = hs.speed_ratio;
    let c_s = hs.c_s;

    let chunk = grid
        .nodes
        .len()
        .div_ceil(4 * rayon::current_num_threads().max(1))
        .max(1);
    let partials: Vec<Vec<R>> = grid
        .nodes
        .par_chunks(chunk)
        .map(|rings| {
            let mut buf = vec![R::zero(); n_samples];
            let mut table: Vec<R> = Vec::new();
            for &(r_node, area) in rings {
                // Activity window of this ring in absolute time.
                let w_start = t0 + r_node * a_ratio / c_s - margin;
                let w_end = (t0 + r_node * gamma / c_s + margin).min(duration);
                if w_end <= w_start {
                    continue;
                }
                let n_src = ((w_end - w_start) * src_rate).ceil().as_f64() as usize + 4;
                table.clear();
                table.reserve(n_src);
                for k in 0..n_src {
                    let t = w_start + R::of(k as f64) / src_rate;
                    let mut a = field
                        .a_eps(r_node, t - t0)
                        .expect("supported regime checked above");
                    if let Some(h) = opts.origin_ramp {
                        if r_node < h {
                            let q = field.origin_coefficient_a(t - t0);
                            let ramp = R::one() - r_node / h;
                            a = a - q * ramp / r_node + R::of(3.0) * q * ramp / h;
                        }
                    }
                    table.push(j * a);
                }
                let gather = |buf: &mut [R], delay: R, gain: R| {
                    let m_lo = ((w_start + delay) * rate).floor().as_f64().max(0.0) as usize;
                    let m_hi = (((w_end + delay) * rate).ceil().as_f64() as usize).min(n_samples);
                    for (m, slot) in buf.iter_mut().enumerate().take(m_hi).skip(m_lo) {
                        let ts = R::of(m as f64) / rate - delay;
                        let x = (ts - w_start) * src_rate;
                        let i = x.floor();
                        let u = x - i;
                        let i = i.as_f64() as isize;
                        if i < 1 || (i + 2) as usize >= table.len() {
                            continue;
                        }
                        let i = i as usize;
                        // Catmull-Rom through the four surrounding samples.
                        let (p0, p1, p2, p3) =
                            (table[i - 1], table[i], table[i + 1], table[i + 2]);
                        let half = R::of(0.5);
                        let v = p1
                            + u * half
                                * (p2 - p0
                                    + u * (R::of(2.0) * p0 - R::of(5.0) * p1
                                        + R::of(4.0) * p2
                                        - p3
                                        + u * (R::of(3.0) * (p1 - p2) + p3 - p0)));
                        *slot += gain * v;
                    }
                };
                if on_axis {
                    let rr = (r_node * r_node + z * z).sqrt();
                    gather(&mut buf, rr / air.speed, air.density * area / (two_pi * rr));
                } else {
                    // Azimuthal quadrature of the ring.
                    let n_phi_f = (two_pi * r_node * rho_l * rate
                        / ((r_node - rho_l).hypot(z).max(z) * air.speed))
                        .ceil()
                        .as_f64();
                    let n_phi = (n_phi_f as usize).clamp(32, 256);
                    let seg_area = area / R::of(n_phi as f64);
                    for mphi in 0..n_phi {
                        let phi = phi0
                            + two_pi * (R::of(mphi as f64) + R::of(0.5)) / R::of(n_phi as f64);
                        let px = r_node * phi.cos();
                        let py = r_node * phi.sin();
                        let ex = px - dx;
                        let ey = py - dy;
                        let rr = (ex * ex + ey * ey + z * z).sqrt();
                        gather(
                            &mut buf,
                            rr / air.speed,
                            air.density * seg_area / (two_pi * rr),
                        );
                    }
                }
            }
            buf
        })
        .collect();

    let mut out = PressureTrace::zeros(rate, R::zero(), n_samples);
    for p in partials {
        for (a, b) in out.samples.iter_mut().zip(p.iter()) {
            *a += *b;
        }
    }

    // Analytic patch for the innermost disc r < r_min: the field there is
    // q_a(t)/r (its ramp-flattened version contributes only O(r_min^2/H)),
    // integrating to 2 pi q_a r_min through the origin-to-listener path.
    if opts.origin_ramp.is_none() {
        let rr = (rho_l * rho_l + z * z).sqrt();
        let delay = rr / air.speed;
        let gain = air.density * opts.r_min / rr;
        for (k, slot) in out.samples.iter_mut().enumerate() {
            let t = R::of(k as f64) / rate;
            let q = field.origin_coefficient_a(t - delay - t0);
            *slot += j * gain * q;
        }
    }
    Ok(out)
}

/// Acceleration noise of the impacting ball as a compact dipole, optionally
/// with its reflection image through the ground plane (a longitudinal
/// quadrupole above hard ground).
pub fn ball_dipole_pressure<R: Real>(
    event: &ContactEvent<R>,
    listener: [R; 3],
    ground_reflective: bool,
    air: AirParams<R>,
    sample_rate: R,
    duration: R,
) -> Result<PressureTrace<R>> {
    let a0 = event.ball_radius;
    let center = [
        event.impact_point[0],
        event.impact_point[1],
        event.impact_point[2] + a0,
    ];
    let d = dist(listener, center);
    if d <= a0 {
        return Err(Error::Domain(
            "listener lies inside the impacting ball".into(),
        ));
    }
    let n = (duration * sample_rate).ceil().as_f64() as usize;
    let mut trace = PressureTrace::zeros(sample_rate, R::zero(), n);

    let mut sources: Vec<([R; 3], R)> = vec![(center, R::one())];
    if ground_reflective {
        let image = [
            event.impact_point[0],
            event.impact_point[1],
            event.impact_point[2] - a0,
        ];
        // The image dipole axis is mirrored through the plane.
        sources.push((image, -R::one()));
    }

    let pref = air.density * a0 * a0 * a0 * R::of(0.5);
    for (k, slot) in trace.samples.iter_mut().enumerate() {
        let t = R::of(k as f64) / sample_rate;
        let mut p = R::zero();
        for &(src, axis_sign) in &sources {
            let r = dist(listener, src);
            let cos_theta = axis_sign * (listener[2] - src[2]) / r;
            let tr = t - (r - a0) / air.speed;
            let acc = event.ball_acceleration(tr);
            let jerk = event.ball_jerk(tr);
            p += pref * cos_theta * (-acc / (r * r) + jerk / (air.speed * r));
        }
        *slot = p;
    }
    Ok(trace)
}

fn dist<R: Real>(a: [R; 3], b: [R; 3]) -> R {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Which regularized field a surface integral runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeKind {
    /// Push-load volume displacement: integral of u_eps (m^3 per N).
    Displacement,
    /// Impulse volume displacement: integral of w_eps.
    ImpulseDisplacement,
    /// Momentum-flux style integral of a_eps.
    MomentumFlux,
}

/// Area-weighted integral of the regularized field over the surface disc.
/// `r_max` must cover the R-wavefront at time t (error otherwise); `None`
/// picks an automatic radius with margin.
pub fn volume_integral<R: Real>(
    field: &RegularizedField<R>,
    t: R,
    r_max: Option<R>,
    kind: VolumeKind,
    origin_ramp: Option<R>,
) -> Result<R> {
    let hs = &field.halfspace;
    let r_front = hs.rayleigh_speed() * t.max(R::zero());
    // The disturbed region reaches out to the P-front (the fastest); the
    // automatic radius covers it with margin, while anything less than
    // R-front coverage is rejected outright.
    let p_front = hs.c_p * t.max(R::zero());
    let auto =
        (p_front * R::of(1.2) + R::of(10.0) * field.epsilon).max(R::of(20.0) * field.epsilon);
    let r_max = match r_max {
        Some(user) => {
            if user < r_front {
                return Err(Error::Truncation(format!(
                    "surface integral radius {user} does not cover the R-wavefront {r_front} at t = {t}"
                )));
            }
            user
        }
        None => auto,
    };
    let r_min = R::of(R_MIN);

    let eval = |r: R| -> R {
        let e = field.eval(r, t).expect("field evaluation inside guard");
        let mut v = match kind {
            VolumeKind::Displacement => e.u,
            VolumeKind::ImpulseDisplacement => e.w,
            VolumeKind::MomentumFlux => e.a,
        };
        if let Some(h) = origin_ramp {
            if r < h {
                let q = match kind {
                    VolumeKind::Displacement => field.origin_coefficient_u(t),
                    VolumeKind::ImpulseDisplacement => {
                        // dq_u/dt = (1-nu)/(2 pi mu) f_eps(t)
                        (R::one() - hs.poisson)
                            / (R::of(2.0) * R::PI() * hs.shear_modulus)
                            * crate::kernel::kernel_f(t, field.epsilon, hs.c_s)
                    }
                    VolumeKind::MomentumFlux => field.origin_coefficient_a(t),
                };
                let ramp = R::one() - r / h;
                v = v - q * ramp / r + R::of(3.0) * q * ramp / h;
            }
        }
        v * R::of(2.0) * R::PI() * r
    };

    // Splits at the smoothed wavefront radii.
    let c_s = hs.c_s;
    let mut pts = vec![r_min];
    if t > R::zero() {
        for front_r in [
            c_s * t / hs.gamma,
            c_s * t,
            c_s * t / hs.speed_ratio,
        ] {
            if front_r > r_min && front_r < r_max {
                pts.push(front_r);
            }
        }
    }
    pts.push(r_max);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Tolerance scaled to the field magnitude and disc size.
    let s_t = field.epsilon / c_s;
    let deriv_scale = match kind {
        VolumeKind::Displacement => R::one(),
        VolumeKind::ImpulseDisplacement => R::one() / s_t,
        VolumeKind::MomentumFlux => R::one() / (s_t * s_t * s_t),
    };
    let magnitude = (R::one() - hs.poisson) / hs.shear_modulus * r_max * deriv_scale;
    let tol = R::of(1e-9) * magnitude;

    let bulk = crate::quad::integrate_split(&eval, &pts, tol)?;
    // Inner disc below the evaluation guard: the field is q/r there, so the
    // area integral is 2 pi q r_min (or the ramp equivalent).
    let q = match kind {
        VolumeKind::Displacement => field.origin_coefficient_u(t),
        VolumeKind::ImpulseDisplacement => {
            (R::one() - hs.poisson) / (R::of(2.0) * R::PI() * hs.shear_modulus)
                * crate::kernel::kernel_f(t, field.epsilon, c_s)
        }
        VolumeKind::MomentumFlux => field.origin_coefficient_a(t),
    };
    let inner = match origin_ramp {
        // Ramp-modified field is finite at the origin: O(r_min^2 / h).
        Some(h) if h > r_min => R::of(4.0) * R::PI() * q * r_min * r_min / h,
        _ => R::of(2.0) * R::PI() * q * r_min,
    };
    Ok(bulk + inner)
}

// ------------------------------------------------------------------
// Material comparison matrix
// ------------------------------------------------------------------

/// Options for the ground-vs-ball material comparison.
#[derive(Debug, Clone)]
pub struct MatrixOptions<R: Real> {
    /// Contact timescale held constant across all pairs.
    pub timescale: R,
    /// Ground Poisson's ratio override (closed-form regime).
    pub ground_poisson: R,
    pub listener: [R; 3],
    pub ball_radius: R,
    pub normal_speed: R,
    pub restitution: R,
    pub air: AirParams<R>,
    pub sample_rate: R,
    pub duration: R,
    pub radial_per_eps: R,
    pub reflective: bool,
}

impl<R: Real> Default for MatrixOptions<R> {
    fn default() -> Self {
        Self {
            timescale: R::of(1.633e-4),
            ground_poisson: R::of(0.25),
            listener: [R::zero(), R::zero(), R::of(0.2)],
            ball_radius: R::of(0.01),
            normal_speed: R::of((2.0 * STANDARD_GRAVITY * 0.15).sqrt()),
            restitution: R::of(0.5),
            air: AirParams::default(),
            sample_rate: R::of(96_000.0),
            duration: R::of(0.006),
            radial_per_eps: R::of(8.0),
            reflective: true,
        }
    }
}

/// Relative-intensity table over ball x ground material pairs, with the
/// louder-than-ball (>= 0 dB) and audibility (>= -13 dB) classifications.
#[derive(Debug, Clone)]
pub struct MaterialMatrix<R: Real> {
    pub names: Vec<String>,
    pub db: Vec<Vec<R>>,
    pub louder: Vec<Vec<bool>>,
    pub audible: Vec<Vec<bool>>,
}

/// Most sensitive just-noticeable-difference level for the audibility
/// classification (dB).
pub const JND_DB: f64 = -13.0;

fn matrix_event<R: Real>(
    ball: &Material<R>,
    ground_cs: R,
    opts: &MatrixOptions<R>,
) -> ContactEvent<R> {
    let mass = ball.density * R::of(4.0 / 3.0) * R::PI() * opts.ball_radius.powi(3);
    ContactEvent::with_timescale(
        mass,
        opts.ball_radius,
        opts.normal_speed,
        opts.restitution,
        opts.timescale,
        ground_cs,
        R::zero(),
        [R::zero(); 3],
        R::zero(),
    )
}

/// Compute the full ball x ground relative-intensity matrix.
///
/// The ground kernel scales linearly in the impulse, so each ground needs a
/// single unit-impulse Rayleigh trace; the ball trace is shared (with the
/// timescale fixed, the ball acceleration (1+kappa) v_n f_eps(t) does not
/// depend on its mass).
pub fn material_matrix<R: Real>(
    db: &MaterialDb<R>,
    opts: &MatrixOptions<R>,
) -> Result<MaterialMatrix<R>> {
    let names: Vec<String> = db.iter().map(|m| m.name.clone()).collect();

    // Shared ball trace from an arbitrary reference ball.
    let reference = db.iter().next().expect("non-empty database");
    let ref_event = matrix_event(reference, R::one(), opts);
    let ball_trace = ball_dipole_pressure(
        &ref_event,
        opts.listener,
        opts.reflective,
        opts.air,
        opts.sample_rate,
        opts.duration,
    )?;

    // Unit-impulse ground traces per ground material.
    let mut unit_ground: Vec<PressureTrace<R>> = Vec::with_capacity(names.len());
    for gm in db.iter() {
        let mut ground = gm.clone();
        ground.poisson = opts.ground_poisson;
        let hs = derive_halfspace(&ground)?;
        let mut ev = matrix_event(reference, hs.c_s, opts);
        ev.impulse = R::one();
        let ropts = RayleighOptions {
            radial_per_eps: opts.radial_per_eps,
            ..RayleighOptions::new(opts.sample_rate, opts.duration)
        };
        unit_ground.push(rayleigh_ground_pressure(
            &ev,
            &hs,
            opts.listener,
            opts.air,
            &ropts,
        )?);
    }

    let mut dbm = Vec::with_capacity(names.len());
    let mut louder = Vec::with_capacity(names.len());
    let mut audible = Vec::with_capacity(names.len());
    for bm in db.iter() {
        let ev = matrix_event(bm, R::one(), opts);
        let j = ev.impulse;
        let mut row_db = Vec::with_capacity(names.len());
        let mut row_loud = Vec::with_capacity(names.len());
        let mut row_aud = Vec::with_capacity(names.len());
        for ug in &unit_ground {
            let ground_trace = ug.scaled(j);
            let v = peak_intensity_db(&ground_trace, &ball_trace)?;
            row_db.push(v);
            row_loud.push(v >= R::zero());
            row_aud.push(v >= R::of(JND_DB));
        }
        dbm.push(row_db);
        louder.push(row_loud);
        audible.push(row_aud);
    }
    Ok(MaterialMatrix {
        names,
        db: dbm,
        louder,
        audible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::hertz_event;
    use crate::materials::builtin_materials;
    use crate::scenario::load_scenario;

    fn table_setup() -> (
        crate::scenario::ScenarioConfig<f64>,
        HalfspaceParams<f64>,
        ContactEvent<f64>,
    ) {
        let db = MaterialDb::from_materials(builtin_materials());
        let sc =
            load_scenario::<f64>(include_str!("../scenarios/ball_drop_wood.cfg"), &db, &[])
                .unwrap();
        let hs = derive_halfspace(&sc.ground).unwrap();
        let ev = hertz_event(&sc, &hs).unwrap();
        (sc, hs, ev)
    }

    fn quick_opts() -> RayleighOptions<f64> {
        let mut o = RayleighOptions::new(48_000.0, 0.003);
        o.radial_per_eps = 4.0;
        o
    }

    #[test]
    fn grid_covers_disc_area() {
        let g = RadialGrid::<f64>::new(1e-4, 12.0, 0.1, 8.0, 24);
        let expect = std::f64::consts::PI * (12.0f64.powi(2) - 1e-8);
        assert!((g.total_area() - expect).abs() / expect < 1e-12);
        assert!(g.nodes.len() > 900);
    }

    #[test]
    fn zero_impulse_gives_silence() {
        let (_, hs, mut ev) = table_setup();
        ev.impulse = 0.0;
        let tr =
            rayleigh_ground_pressure(&ev, &hs, [0.0, 0.0, 0.2], AirParams::default(), &quick_opts())
                .unwrap();
        assert!(tr.samples.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn impulse_linearity_is_exact() {
        let (_, hs, ev) = table_setup();
        let mut ev2 = ev.clone();
        ev2.impulse = 2.0 * ev.impulse;
        let air = AirParams::default();
        let t1 = rayleigh_ground_pressure(&ev, &hs, [0.0, 0.0, 0.2], air, &quick_opts()).unwrap();
        let t2 = rayleigh_ground_pressure(&ev2, &hs, [0.0, 0.0, 0.2], air, &quick_opts()).unwrap();
        for (a, b) in t1.samples.iter().zip(t2.samples.iter()) {
            assert_eq!(2.0 * *a, *b);
        }
    }

    #[test]
    fn ground_trace_is_causal() {
        let (_, hs, ev) = table_setup();
        let tr =
            rayleigh_ground_pressure(&ev, &hs, [0.0, 0.0, 0.2], AirParams::default(), &quick_opts())
                .unwrap();
        let peak = tr.peak_abs();
        // Quiet before the acoustic flight time minus three kernel widths.
        let t_arrival = 0.2 / 343.0 - 3.0 * 4.0 * ev.kernel_time_scale();
        let mut early_max = 0.0f64;
        for (k, &p) in tr.samples.iter().enumerate() {
            if tr.time(k) < t_arrival {
                early_max = early_max.max(p.abs());
            }
        }
        assert!(
            early_max < 1e-3 * peak,
            "early {early_max:e} vs peak {peak:e}"
        );
    }

    /// Swapping the 1/r origin region for its mean-preserving ramp leaves
    /// the synthesis unchanged. For the pressure trace this holds as long
    /// as the swapped disc stays small against the acoustic wavelength
    /// (c0 eps/c_s ~ 1.4 cm here); a larger disc redistributes source mass
    /// across arrival phases. The surface integral itself is preserved
    /// exactly for every radius, which the volume-displacement check below
    /// pins at 0.1%.
    #[test]
    fn origin_ramp_robustness() {
        let (_, hs, ev) = table_setup();
        let air = AirParams::default();
        let base =
            rayleigh_ground_pressure(&ev, &hs, [0.0, 0.0, 0.2], air, &quick_opts()).unwrap();
        let peak = base.peak_abs();
        for (h, tol) in [(0.01, 2.5e-3), (0.02, 1e-2)] {
            let mut o = quick_opts();
            o.origin_ramp = Some(h);
            let modded =
                rayleigh_ground_pressure(&ev, &hs, [0.0, 0.0, 0.2], air, &o).unwrap();
            let max_dev = base
                .samples
                .iter()
                .zip(modded.samples.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(
                max_dev < tol * peak,
                "H = {h}: deviation {max_dev:e} vs peak {peak:e}"
            );
        }
        // Volume displacement identical within 0.1% for every tested H.
        let field = RegularizedField::new(hs.clone(), ev.epsilon).unwrap();
        let s_t = ev.kernel_time_scale();
        for h in [0.01, 0.02, 0.10] {
            for t in [5.0 * s_t, 30.0 * s_t, 90.0 * s_t] {
                let d0 =
                    volume_integral(&field, t, None, VolumeKind::Displacement, None).unwrap();
                let d1 =
                    volume_integral(&field, t, None, VolumeKind::Displacement, Some(h)).unwrap();
                assert!(
                    (d0 - d1).abs() < 1e-3 * d0.abs(),
                    "H = {h}, t = {t}: {d0:e} vs {d1:e}"
                );
            }
        }
    }

    #[test]
    fn mu_scaling_moves_ground_not_ball() {
        let (sc, hs, ev) = table_setup();
        // Quadruple mu at fixed c_s and nu: E x4, rho x4.
        let mut m2 = sc.ground.clone();
        m2.youngs_modulus *= 4.0;
        m2.density *= 4.0;
        let hs2 = derive_halfspace(&m2).unwrap();
        assert_eq!(hs.c_s, hs2.c_s);
        let air = AirParams::default();
        let t1 = rayleigh_ground_pressure(&ev, &hs, [0.0, 0.0, 0.2], air, &quick_opts()).unwrap();
        let t2 = rayleigh_ground_pressure(&ev, &hs2, [0.0, 0.0, 0.2], air, &quick_opts()).unwrap();
        for (a, b) in t1.samples.iter().zip(t2.samples.iter()) {
            assert_eq!(*a, 4.0 * *b);
        }
        // Ball trace does not reference the ground stiffness at fixed t_c.
        let b1 = ball_dipole_pressure(&ev, [0.0, 0.0, 0.2], true, air, 48_000.0, 0.003).unwrap();
        let b2 = ball_dipole_pressure(&ev, [0.0, 0.0, 0.2], true, air, 48_000.0, 0.003).unwrap();
        assert_eq!(b1.samples, b2.samples);
    }

    #[test]
    fn ball_angular_factor_and_symmetry() {
        let (_, _, ev) = table_setup();
        let air = AirParams::default();
        // Listener level with the ball centre, absorptive mode: cos = 0.
        let level = ball_dipole_pressure(
            &ev,
            [0.15, 0.0, ev.ball_radius],
            false,
            air,
            48_000.0,
            0.002,
        )
        .unwrap();
        assert!(level.peak_abs() == 0.0);
        // Mirror symmetry in the plane.
        let p1 =
            ball_dipole_pressure(&ev, [0.1, 0.05, 0.12], true, air, 48_000.0, 0.002).unwrap();
        let p2 =
            ball_dipole_pressure(&ev, [-0.1, -0.05, 0.12], true, air, 48_000.0, 0.002).unwrap();
        assert_eq!(p1.samples, p2.samples);
        // Inside the ball is rejected.
        assert!(
            ball_dipole_pressure(&ev, [0.0, 0.0, 0.012], true, air, 48_000.0, 0.002).is_err()
        );
    }

    #[test]
    fn ball_falloff_exponents() {
        // Synthetic slow event so the near/far windows clear the ball
        // radius: near field ~ 1/r^2, far field ~ 1/r.
        let ev = ContactEvent::<f64>::with_timescale(
            0.03, 1e-4, 1.7, 0.5, 1e-3, 2000.0, 0.0, [0.0; 3], 0.0,
        );
        let air = AirParams::default();
        let c0_tc = 343.0 * ev.timescale;
        let peak_at = |r: f64| {
            // Window long enough for the pulse to arrive at this range.
            let dur = (r - ev.ball_radius) / 343.0 + 30.0 * ev.timescale;
            ball_dipole_pressure(&ev, [0.0, 0.0, r], false, air, 2e5, dur)
                .unwrap()
                .peak_abs()
        };
        let near = (peak_at(8e-3 * c0_tc) / peak_at(1.2e-2 * c0_tc)).ln()
            / ((1.2e-2f64 / 8e-3).ln());
        assert!((near - 2.0).abs() < 0.1, "near-field slope {near}");
        let far = (peak_at(8e2 * c0_tc) / peak_at(1.2e3 * c0_tc)).ln() / ((1.2e3f64 / 8e2).ln());
        assert!((far - 1.0).abs() < 0.1, "far-field slope {far}");
    }

    #[test]
    fn identical_traces_compare_at_zero_db() {
        let t = PressureTrace {
            sample_rate: 48_000.0,
            start_time: 0.0,
            samples: vec![0.1, -0.2, 0.4],
        };
        assert_eq!(intensity_db(&t, &t).unwrap(), 0.0);
        let silent = PressureTrace::zeros(48_000.0, 0.0, 3);
        assert!(intensity_db(&t, &silent).is_err());
    }

    #[test]
    fn deposit_splits_linearly() {
        let mut t = PressureTrace::<f64>::zeros(10.0, 0.0, 4);
        t.deposit(0.125, 1.0);
        assert!((t.samples[1] - 0.75).abs() < 1e-15);
        assert!((t.samples[2] - 0.25).abs() < 1e-15);
        // Out of range is dropped.
        t.deposit(5.0, 1.0);
        t.deposit(-1.0, 1.0);
    }

    #[test]
    fn volume_displacement_is_causal_and_linear_in_time() {
        let (_, hs, ev) = table_setup();
        let field = RegularizedField::new(hs.clone(), ev.epsilon).unwrap();
        let s_t = ev.kernel_time_scale();
        // Late-time linear growth: D(t)/t approaches a constant.
        let t1 = 60.0 * s_t;
        let t2 = 120.0 * s_t;
        let d1 = volume_integral(&field, t1, None, VolumeKind::Displacement, None).unwrap();
        let d2 = volume_integral(&field, t2, None, VolumeKind::Displacement, None).unwrap();
        assert!(((d2 / t2) / (d1 / t1) - 1.0).abs() < 0.02, "{d1:e} {d2:e}");
        // Before the impact (minus kernel tails) the integral is tiny.
        let early = volume_integral(&field, -40.0 * s_t, None, VolumeKind::Displacement, None)
            .unwrap();
        assert!(early.abs() < 1e-3 * d1.abs());
        // Coverage violation reported.
        assert!(matches!(
            volume_integral(&field, t1, Some(0.01), VolumeKind::Displacement, None),
            Err(Error::Truncation(_))
        ));
    }

    /// Late-time ramp rate against the independent 1-D change-of-variables
    /// oracle K = (1-nu) c_s / mu * integral G(tau) tau^-2 dtau.
    #[test]
    fn volume_ramp_rate_matches_oracle() {
        let (_, hs, ev) = table_setup();
        let field = RegularizedField::new(hs.clone(), ev.epsilon).unwrap();
        let s_t = ev.kernel_time_scale();
        let t = 150.0 * s_t;
        let d = volume_integral(&field, t, None, VolumeKind::Displacement, None).unwrap();
        // Oracle: integral of G over tau with the singular piece handled by
        // the sqrt rule near gamma.
        let g = |tau: f64| crate::lamb::pekeris_shape(&hs, tau) / (tau * tau);
        let a = hs.speed_ratio;
        let k_int = crate::quad::integrate_split(&g, &[a, 1.0], 1e-12).unwrap()
            + crate::quad::integrate_sqrt_singular_upper(&g, 1.0, hs.gamma, 1e-10).unwrap()
            + crate::quad::integrate(&g, hs.gamma, 1e6, 1e-10).unwrap()
            + 1e-6; // tail of integral 1/tau^2 from 1e6 to infinity
        let k = (1.0 - hs.poisson) * hs.c_s / hs.shear_modulus * k_int;
        assert!(
            (d / t - k).abs() / k < 5e-3,
            "ramp rate {:e} vs oracle {k:e}",
            d / t
        );
    }
}
