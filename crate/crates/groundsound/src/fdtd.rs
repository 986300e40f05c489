//! A small 3-D finite-difference time-domain acoustic wavesolver with
//! Neumann boundaries driven by pluggable "acoustic shaders".
//!
//! The scheme is the explicit second-order leapfrog discretization of
//!
//! ```text
//! p_tt / c0^2 = lap(p) + (alpha/c0) lap(p_t),        x in air,
//! dp/dn = -rho0 a_n,                                  x on boundaries,
//! ```
//!
//! with the boundary condition folded into ghost values: an air cell next
//! to a solid face receives rho0 a_n / dx in its Laplacian, where a_n is
//! the boundary's normal acceleration (normal pointing into the air),
//! sampled from the registered shaders. The outer boundary is a rigid wall
//! wrapped in a graded absorbing sponge layer.

use rayon::prelude::*;

use crate::contact::ContactEvent;
use crate::error::{Error, Result};
use crate::kernel::{RegularizedField, R_MIN};
use crate::materials::HalfspaceParams;
use crate::radiation::PressureTrace;
use crate::real::Real;
use crate::scenario::ScenarioConfig;

/// Boundary normal acceleration supplier. `normal` points from the solid
/// into the air; implementations must be deterministic and finite.
pub trait AcousticShader<R: Real>: Send + Sync {
    fn normal_accel(&self, point: [R; 3], normal: [R; 3], t: R) -> R;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Air,
    Solid,
}

/// One air/solid interface face.
#[derive(Debug, Clone, Copy)]
struct BoundaryFace<R: Real> {
    cell: u32,
    point: [R; 3],
    normal: [R; 3],
}

/// Rectangular FDTD grid.
pub struct WaveGrid<R: Real> {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: R,
    pub origin: [R; 3],
    pub c0: R,
    pub rho0: R,
    /// Air viscosity damping coefficient alpha (m).
    pub alpha: R,
    pub dt: R,
    kind: Vec<CellKind>,
    sponge: Vec<R>,
    sponge_cells: usize,
    sponge_walls: [bool; 6],
    p_prev: Vec<R>,
    p_cur: Vec<R>,
    lap_prev: Vec<R>,
    scratch: Vec<R>,
    faces: Vec<BoundaryFace<R>>,
    steps_taken: usize,
    baseline: R,
}

impl<R: Real> WaveGrid<R> {
    /// All-air grid; `cfl` scales the stable step dt = cfl dx/(c0 sqrt(3)).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        nx: usize,
        ny: usize,
        nz: usize,
        dx: R,
        origin: [R; 3],
        c0: R,
        rho0: R,
        alpha: R,
        cfl: R,
        sponge_cells: usize,
    ) -> Self {
        let n = nx * ny * nz;
        let dt = cfl * dx / (c0 * R::of(3.0).sqrt());
        let mut grid = Self {
            nx,
            ny,
            nz,
            dx,
            origin,
            c0,
            rho0,
            alpha,
            dt,
            kind: vec![CellKind::Air; n],
            sponge: vec![R::one(); n],
            sponge_cells,
            sponge_walls: [true; 6],
            p_prev: vec![R::zero(); n],
            p_cur: vec![R::zero(); n],
            lap_prev: vec![R::zero(); n],
            scratch: vec![R::zero(); n],
            faces: Vec::new(),
            steps_taken: 0,
            baseline: R::zero(),
        };
        grid.build_sponge();
        grid.rebuild_faces();
        grid
    }

    /// Restrict the absorbing layer to a subset of the outer walls
    /// (order: x-, x+, y-, y+, z-, z+). Walls backed by solid geometry,
    /// like the ground plane, must not absorb the field radiating off it.
    pub fn set_sponge_walls(&mut self, walls: [bool; 6]) {
        self.sponge_walls = walls;
        self.build_sponge();
    }

    /// Flat index of cell (i, j, k).
    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * self.nx + i
    }

    /// Centre coordinates of cell (i, j, k).
    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> [R; 3] {
        let h = R::of(0.5);
        [
            self.origin[0] + (R::of(i as f64) + h) * self.dx,
            self.origin[1] + (R::of(j as f64) + h) * self.dx,
            self.origin[2] + (R::of(k as f64) + h) * self.dx,
        ]
    }

    /// Cell containing a position, if inside the grid.
    pub fn locate(&self, p: [R; 3]) -> Option<(usize, usize, usize)> {
        let mut out = [0usize; 3];
        for (d, slot) in out.iter_mut().enumerate() {
            let f = ((p[d] - self.origin[d]) / self.dx).floor().as_f64();
            if f < 0.0 {
                return None;
            }
            let i = f as usize;
            let n = [self.nx, self.ny, self.nz][d];
            if i >= n {
                return None;
            }
            *slot = i;
        }
        Some((out[0], out[1], out[2]))
    }

    fn build_sponge(&mut self) {
        let width = self.sponge_cells;
        self.sponge.iter_mut().for_each(|s| *s = R::one());
        if width == 0 {
            return;
        }
        // Graded damping: strongest at the outer shell.
        let sigma_max = R::of(0.35);
        let big = usize::MAX;
        for k in 0..self.nz {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let dists = [
                        if self.sponge_walls[0] { i } else { big },
                        if self.sponge_walls[1] { self.nx - 1 - i } else { big },
                        if self.sponge_walls[2] { j } else { big },
                        if self.sponge_walls[3] { self.ny - 1 - j } else { big },
                        if self.sponge_walls[4] { k } else { big },
                        if self.sponge_walls[5] { self.nz - 1 - k } else { big },
                    ];
                    let depth = dists.into_iter().min().unwrap();
                    if depth < width {
                        let x = R::of((width - depth) as f64) / R::of(width as f64);
                        let idx = self.idx(i, j, k);
                        self.sponge[idx] = R::one() - sigma_max * x * x;
                    }
                }
            }
        }
    }

    /// Mark every cell whose centre satisfies the predicate as solid, then
    /// rebuild the boundary face list.
    pub fn classify_solid<F: Fn([R; 3]) -> bool>(&mut self, is_solid: F) {
        for k in 0..self.nz {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let idx = self.idx(i, j, k);
                    if is_solid(self.cell_center(i, j, k)) {
                        self.kind[idx] = CellKind::Solid;
                    }
                }
            }
        }
        self.rebuild_faces();
    }

    fn rebuild_faces(&mut self) {
        self.faces.clear();
        let h = R::of(0.5) * self.dx;
        for k in 0..self.nz {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let idx = self.idx(i, j, k);
                    if self.kind[idx] != CellKind::Air {
                        continue;
                    }
                    let center = self.cell_center(i, j, k);
                    let neighbors: [(isize, isize, isize); 6] = [
                        (-1, 0, 0),
                        (1, 0, 0),
                        (0, -1, 0),
                        (0, 1, 0),
                        (0, 0, -1),
                        (0, 0, 1),
                    ];
                    for (di, dj, dk) in neighbors {
                        let ni = i as isize + di;
                        let nj = j as isize + dj;
                        let nk = k as isize + dk;
                        if ni < 0
                            || nj < 0
                            || nk < 0
                            || ni >= self.nx as isize
                            || nj >= self.ny as isize
                            || nk >= self.nz as isize
                        {
                            continue; // domain edge: rigid wall
                        }
                        let nidx = self.idx(ni as usize, nj as usize, nk as usize);
                        if self.kind[nidx] == CellKind::Solid {
                            // Normal points from the solid into this cell.
                            let normal = [
                                -R::of(di as f64),
                                -R::of(dj as f64),
                                -R::of(dk as f64),
                            ];
                            let point = [
                                center[0] + R::of(di as f64) * h,
                                center[1] + R::of(dj as f64) * h,
                                center[2] + R::of(dk as f64) * h,
                            ];
                            self.faces.push(BoundaryFace {
                                cell: idx as u32,
                                point,
                                normal,
                            });
                        }
                    }
                }
            }
        }
    }

    pub fn time(&self) -> R {
        R::of(self.steps_taken as f64) * self.dt
    }

    pub fn pressure(&self) -> &[R] {
        &self.p_cur
    }

    /// Add to the current pressure field (initial conditions / soft
    /// sources). Also seeds the previous level so the addition starts at
    /// rest when used as an initial condition.
    pub fn add_pressure<F: Fn([R; 3]) -> R>(&mut self, f: F, seed_prev: bool) {
        for k in 0..self.nz {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let idx = self.idx(i, j, k);
                    if self.kind[idx] == CellKind::Air {
                        let v = f(self.cell_center(i, j, k));
                        self.p_cur[idx] += v;
                        if seed_prev {
                            self.p_prev[idx] += v;
                        }
                    }
                }
            }
        }
    }

    /// Soft point source: add a value to one cell's current pressure.
    pub fn inject(&mut self, i: usize, j: usize, k: usize, value: R) {
        let idx = self.idx(i, j, k);
        if self.kind[idx] == CellKind::Air {
            self.p_cur[idx] += value;
        }
    }

    /// Advance one timestep, sampling boundary acceleration from the given
    /// shaders (their contributions add).
    pub fn step(&mut self, shaders: &[&dyn AcousticShader<R>]) -> Result<()> {
        let nxy = self.nx * self.ny;
        let nx = self.nx;
        let ny = self.ny;
        let nz = self.nz;
        let inv_dx2 = R::one() / (self.dx * self.dx);

        // Bulk Laplacian with rigid-wall (zero-flux) treatment of solid and
        // out-of-domain neighbors.
        {
            let p = &self.p_cur;
            let kind = &self.kind;
            self.scratch
                .par_chunks_mut(nxy)
                .enumerate()
                .for_each(|(k, slab)| {
                    for j in 0..ny {
                        for i in 0..nx {
                            let li = j * nx + i;
                            let idx = (k * ny + j) * nx + i;
                            if kind[idx] != CellKind::Air {
                                slab[li] = R::zero();
                                continue;
                            }
                            let pc = p[idx];
                            let mut acc = R::zero();
                            if i > 0 && kind[idx - 1] == CellKind::Air {
                                acc += p[idx - 1] - pc;
                            }
                            if i + 1 < nx && kind[idx + 1] == CellKind::Air {
                                acc += p[idx + 1] - pc;
                            }
                            if j > 0 && kind[idx - nx] == CellKind::Air {
                                acc += p[idx - nx] - pc;
                            }
                            if j + 1 < ny && kind[idx + nx] == CellKind::Air {
                                acc += p[idx + nx] - pc;
                            }
                            if k > 0 && kind[idx - nxy] == CellKind::Air {
                                acc += p[idx - nxy] - pc;
                            }
                            if k + 1 < nz && kind[idx + nxy] == CellKind::Air {
                                acc += p[idx + nxy] - pc;
                            }
                            slab[li] = acc * inv_dx2;
                        }
                    }
                });
        }

        // Shader-driven boundary flux.
        if !shaders.is_empty() && !self.faces.is_empty() {
            let t = self.time();
            let rho_over_dx = self.rho0 / self.dx;
            let contributions: Vec<(u32, R)> = self
                .faces
                .par_iter()
                .map(|f| {
                    let mut a_n = R::zero();
                    for s in shaders {
                        a_n += s.normal_accel(f.point, f.normal, t);
                    }
                    (f.cell, rho_over_dx * a_n)
                })
                .collect();
            for (cell, c) in contributions {
                self.scratch[cell as usize] += c;
            }
        }

        // Leapfrog update written into p_prev (which becomes p_next).
        {
            let c_dt = self.c0 * self.dt;
            let w_wave = c_dt * c_dt;
            let w_visc = self.alpha * self.c0 * self.dt;
            let p_cur = &self.p_cur;
            let lap = &self.scratch;
            let lap_prev = &self.lap_prev;
            let kind = &self.kind;
            let sponge = &self.sponge;
            self.p_prev
                .par_chunks_mut(nxy)
                .enumerate()
                .for_each(|(k, slab)| {
                    let base = k * nxy;
                    for (li, slot) in slab.iter_mut().enumerate() {
                        let idx = base + li;
                        if kind[idx] != CellKind::Air {
                            *slot = R::zero();
                            continue;
                        }
                        let next = R::of(2.0) * p_cur[idx] - *slot
                            + w_wave * lap[idx]
                            + w_visc * (lap[idx] - lap_prev[idx]);
                        *slot = next * sponge[idx];
                    }
                });
            // Damp the now-previous level too so the sponge acts on the
            // propagating pair.
            self.p_cur
                .par_chunks_mut(nxy)
                .enumerate()
                .for_each(|(k, slab)| {
                    let base = k * nxy;
                    for (li, slot) in slab.iter_mut().enumerate() {
                        *slot *= sponge[base + li];
                    }
                });
        }
        std::mem::swap(&mut self.p_prev, &mut self.p_cur);
        std::mem::swap(&mut self.lap_prev, &mut self.scratch);
        self.steps_taken += 1;

        // Instability detector.
        let max_p = self
            .p_cur
            .iter()
            .fold(R::zero(), |m, &v| m.max(v.abs()));
        if !max_p.is_finite() {
            return Err(Error::Instability {
                steps: self.steps_taken,
                growth: f64::INFINITY,
            });
        }
        if self.baseline == R::zero() {
            self.baseline = max_p;
        } else if max_p > R::of(1e6) * self.baseline {
            return Err(Error::Instability {
                steps: self.steps_taken,
                growth: (max_p / self.baseline).as_f64(),
            });
        }
        Ok(())
    }

    /// Discrete leapfrog energy of the (p_prev, p_cur) pair; decays
    /// monotonically once sources shut off (damping on).
    pub fn discrete_energy(&self) -> R {
        let nxy = self.nx * self.ny;
        let c_dt = self.c0 * self.dt;
        let inv_dx2 = R::one() / (self.dx * self.dx);
        let mut kinetic = R::zero();
        let mut potential = R::zero();
        for k in 0..self.nz {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let idx = self.idx(i, j, k);
                    if self.kind[idx] != CellKind::Air {
                        continue;
                    }
                    let dv = (self.p_cur[idx] - self.p_prev[idx]) / c_dt;
                    kinetic += dv * dv;
                    // Face gradients toward +x, +y, +z air neighbors.
                    if i + 1 < self.nx && self.kind[idx + 1] == CellKind::Air {
                        potential += (self.p_cur[idx + 1] - self.p_cur[idx])
                            * (self.p_prev[idx + 1] - self.p_prev[idx])
                            * inv_dx2;
                    }
                    if j + 1 < self.ny && self.kind[idx + self.nx] == CellKind::Air {
                        potential += (self.p_cur[idx + self.nx] - self.p_cur[idx])
                            * (self.p_prev[idx + self.nx] - self.p_prev[idx])
                            * inv_dx2;
                    }
                    if k + 1 < self.nz && self.kind[idx + nxy] == CellKind::Air {
                        potential += (self.p_cur[idx + nxy] - self.p_cur[idx])
                            * (self.p_prev[idx + nxy] - self.p_prev[idx])
                            * inv_dx2;
                    }
                }
            }
        }
        (kinetic + potential) * R::of(0.5)
    }

    /// Sum of squared discrete Laplacians: a high-frequency energy proxy.
    pub fn high_freq_energy(&self) -> R {
        let nxy = self.nx * self.ny;
        let inv_dx2 = R::one() / (self.dx * self.dx);
        let mut total = R::zero();
        for k in 0..self.nz {
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let idx = self.idx(i, j, k);
                    if self.kind[idx] != CellKind::Air {
                        continue;
                    }
                    let pc = self.p_cur[idx];
                    let mut acc = R::zero();
                    let mut nb = |cond: bool, nidx: usize| {
                        if cond && self.kind[nidx] == CellKind::Air {
                            acc += self.p_cur[nidx] - pc;
                        }
                    };
                    nb(i > 0, idx.wrapping_sub(1));
                    nb(i + 1 < self.nx, idx + 1);
                    nb(j > 0, idx.wrapping_sub(self.nx));
                    nb(j + 1 < self.ny, idx + self.nx);
                    nb(k > 0, idx.wrapping_sub(nxy));
                    nb(k + 1 < self.nz, idx + nxy);
                    let l = acc * inv_dx2;
                    total += l * l;
                }
            }
        }
        total
    }
}

// ------------------------------------------------------------------
// Shaders
// ------------------------------------------------------------------

/// Ground surface shader: J a_eps(r, t - t_impact) per contact impulse,
/// projected on the face normal's vertical component. Quiet outside a
/// generous activity window around the wavefront passage (the kernel's
/// fourth-order tails are negligible there).
pub struct GroundShader<R: Real> {
    entries: Vec<(ContactEvent<R>, RegularizedField<R>)>,
    r_floor: R,
}

impl<R: Real> GroundShader<R> {
    pub fn new(
        events: &[ContactEvent<R>],
        hs: &HalfspaceParams<R>,
        r_floor: R,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(events.len());
        for ev in events {
            let field = RegularizedField::new(hs.clone(), ev.epsilon)?;
            if !field.closed_form_supported() {
                return Err(Error::UnsupportedRegime {
                    nu: hs.poisson.as_f64(),
                });
            }
            entries.push((ev.clone(), field));
        }
        Ok(Self {
            entries,
            r_floor: r_floor.max(R::of(R_MIN)),
        })
    }

    /// Vertical surface acceleration at in-plane radius r from one impact.
    pub fn vertical_accel(&self, entry: usize, r: R, t: R) -> R {
        let (ev, field) = &self.entries[entry];
        let r = r.max(self.r_floor);
        let dt = t - ev.impact_time;
        let hs = &field.halfspace;
        let margin = R::of(80.0) * ev.kernel_time_scale();
        let t_p = r * hs.speed_ratio / hs.c_s;
        let t_r = r * hs.gamma / hs.c_s;
        if dt < t_p - margin || dt > t_r + margin {
            return R::zero();
        }
        ev.impulse * field.a_eps(r, dt).expect("supported regime")
    }
}

impl<R: Real> AcousticShader<R> for GroundShader<R> {
    fn normal_accel(&self, point: [R; 3], normal: [R; 3], t: R) -> R {
        let mut total = R::zero();
        for i in 0..self.entries.len() {
            let (ev, _) = &self.entries[i];
            let dx = point[0] - ev.impact_point[0];
            let dy = point[1] - ev.impact_point[1];
            let r = (dx * dx + dy * dy).sqrt();
            total += self.vertical_accel(i, r, t);
        }
        total * normal[2]
    }
}

/// Rigid-ball shader: the ball's translational acceleration projected on
/// the face normal, a(t) (normal . z).
pub struct BallShader<R: Real> {
    events: Vec<ContactEvent<R>>,
    /// Match radius for assigning faces to balls.
    radius: R,
}

impl<R: Real> BallShader<R> {
    pub fn new(events: &[ContactEvent<R>], dx: R) -> Self {
        let radius = events
            .first()
            .map(|e| e.ball_radius)
            .unwrap_or_else(R::zero)
            + R::of(1.5) * dx;
        Self {
            events: events.to_vec(),
            radius,
        }
    }

    fn center(ev: &ContactEvent<R>) -> [R; 3] {
        [
            ev.impact_point[0],
            ev.impact_point[1],
            ev.impact_point[2] + ev.ball_radius,
        ]
    }
}

impl<R: Real> AcousticShader<R> for BallShader<R> {
    fn normal_accel(&self, point: [R; 3], normal: [R; 3], t: R) -> R {
        for ev in &self.events {
            let c = Self::center(ev);
            let dx = point[0] - c[0];
            let dy = point[1] - c[1];
            let dz = point[2] - c[2];
            if (dx * dx + dy * dy + dz * dz).sqrt() <= self.radius {
                let margin = R::of(80.0) * ev.kernel_time_scale();
                if (t - ev.impact_time).abs() > margin {
                    return R::zero();
                }
                return ev.ball_acceleration(t) * normal[2];
            }
        }
        R::zero()
    }
}

// ------------------------------------------------------------------
// Scene runner
// ------------------------------------------------------------------

/// Which shaders drive a run; geometry is identical in all modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneMode {
    GroundOnly,
    BallOnly,
    Combined,
}

pub struct SceneOutput<R: Real> {
    pub traces: Vec<PressureTrace<R>>,
    /// (step index, nx, ny, slice values) for each exported snapshot.
    pub snapshots: Vec<(usize, usize, usize, Vec<R>)>,
    pub dt: R,
    pub steps: usize,
}

/// Build the desk-scale scene grid for a scenario: solid ground filling
/// z < 0 (the plane z = 0 is a face) and one rasterized ball per impact,
/// resting at its impact position.
pub fn build_scene_grid<R: Real>(scenario: &ScenarioConfig<R>) -> WaveGrid<R> {
    let o = &scenario.fdtd;
    let dx = o.spacing;
    let nx = (o.extent[0] / dx).round().as_f64() as usize;
    let ny = (o.extent[1] / dx).round().as_f64() as usize;
    let nz = (o.extent[2] / dx).round().as_f64() as usize;
    let origin = [
        -o.extent[0] * R::of(0.5),
        -o.extent[1] * R::of(0.5),
        -R::of(3.0) * dx,
    ];
    let mut grid = WaveGrid::new(
        nx.max(8),
        ny.max(8),
        nz.max(8),
        dx,
        origin,
        scenario.air_speed,
        scenario.air_density,
        R::of(2e-6),
        o.cfl,
        8,
    );
    // The ground plane fills the bottom; do not absorb along it.
    grid.set_sponge_walls([true, true, true, true, false, true]);
    let a0 = scenario.ball_radius;
    let centers: Vec<[R; 3]> = scenario
        .impacts
        .iter()
        .map(|imp| [imp.point[0], imp.point[1], imp.point[2] + a0])
        .collect();
    grid.classify_solid(|c| {
        if c[2] < R::zero() {
            return true;
        }
        centers.iter().any(|b| {
            let dx0 = c[0] - b[0];
            let dy0 = c[1] - b[1];
            let dz0 = c[2] - b[2];
            (dx0 * dx0 + dy0 * dy0 + dz0 * dz0).sqrt() <= a0
        })
    });
    grid
}

/// Run a scenario scene. Solo modes toggle shader sets only; the geometry
/// (ground plane plus every ball) is shared, so solo traces superpose to
/// the combined one.
pub fn run_scene<R: Real>(
    scenario: &ScenarioConfig<R>,
    hs: &HalfspaceParams<R>,
    events: &[ContactEvent<R>],
    mode: SceneMode,
) -> Result<SceneOutput<R>> {
    let mut grid = build_scene_grid(scenario);
    let ground = GroundShader::new(events, hs, grid.dx * R::of(0.5))?;
    let ball = BallShader::new(events, grid.dx);
    let shaders: Vec<&dyn AcousticShader<R>> = match mode {
        SceneMode::GroundOnly => vec![&ground],
        SceneMode::BallOnly => vec![&ball],
        SceneMode::Combined => vec![&ground, &ball],
    };

    let mics: Vec<usize> = scenario
        .fdtd
        .mics
        .iter()
        .map(|&m| {
            grid.locate(m)
                .map(|(i, j, k)| grid.idx(i, j, k))
                .ok_or_else(|| {
                    Error::ConfigGeneral(format!(
                        "microphone {m:?} lies outside the wavesolver domain"
                    ))
                })
        })
        .collect::<Result<_>>()?;

    let steps = (scenario.fdtd.duration / grid.dt).ceil().as_f64() as usize;
    let mut traces: Vec<PressureTrace<R>> = mics
        .iter()
        .map(|_| PressureTrace::zeros(R::one() / grid.dt, grid.dt, 0))
        .collect();
    let snap_k = scenario
        .fdtd
        .snapshot_z
        .and_then(|z| grid.locate([R::zero(), R::zero(), z]).map(|(_, _, k)| k));
    let mut snapshots = Vec::new();

    for step in 0..steps {
        grid.step(&shaders)?;
        for (t, &cell) in traces.iter_mut().zip(mics.iter()) {
            t.samples.push(grid.pressure()[cell]);
        }
        if let Some(k) = snap_k {
            if scenario.fdtd.snapshot_every > 0 && step % scenario.fdtd.snapshot_every == 0 {
                let nxy = grid.nx * grid.ny;
                let slice = grid.pressure()[k * nxy..(k + 1) * nxy].to_vec();
                snapshots.push((step, grid.nx, grid.ny, slice));
            }
        }
    }
    Ok(SceneOutput {
        traces,
        snapshots,
        dt: grid.dt,
        steps,
    })
}
