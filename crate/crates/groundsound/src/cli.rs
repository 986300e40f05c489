//! Command-line front end: wires scenario files to the synthesis pipelines
//! and emits CSV/WAV data sets plus a run manifest.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::contact::{contact_radius, hertz_event, hertz_events};
use crate::error::{Error, Result};
use crate::fdtd::{run_scene, SceneMode};
use crate::io::{write_csv, write_slices, write_trace_csv, write_wav, Manifest};
use crate::kernel::RegularizedField;
use crate::lamb;
use crate::materials::{derive_halfspace, MaterialDb};
use crate::radiation::{
    ball_dipole_pressure, intensity_db, material_matrix, peak_intensity_db,
    rayleigh_ground_pressure, AirParams, MatrixOptions, PressureTrace, RayleighOptions,
};
use crate::scenario::{load_scenario, ScenarioConfig};
use crate::sweeps::{fit_knee, loglog_slope, SweepContext};

const DEFAULT_SCENARIO: &str = include_str!("../scenarios/ball_drop_wood.cfg");

#[derive(Parser, Debug)]
#[command(
    name = "groundsound",
    version,
    about = "Impact sound of an elastic-halfspace ground: kernels, contact, radiation, wavesolver"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Scenario config file (defaults to the built-in steel-on-wood drop).
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Override scenario values: section.key=value (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a scenario; print the resolved parameters.
    Validate,
    /// Surface displacement response at one radius: regularized (t,u,w,a)
    /// CSV, or the exact piecewise solution with --exact.
    Response {
        /// Surface radius (m).
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Emit the exact (unregularized) solution instead.
        #[arg(long)]
        exact: bool,
        /// Override the smoothing length (m); defaults to the contact event's.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Number of output samples.
        #[arg(long, default_value_t = 2000)]
        points: usize,
    },
    /// Print the derived contact event table (m, v_n, t_c, eps, J, r_c).
    Contact,
    /// Ground sound via the Rayleigh integral, per listening point.
    Rayleigh,
    /// Ball acceleration noise via the dipole/image model.
    Ball {
        /// Model the ground as absorptive (no image source).
        #[arg(long)]
        absorptive: bool,
    },
    /// Ground and ball sound at the first listening point plus their
    /// relative intensity in dB.
    Compare,
    /// Full ball x ground material relative-intensity matrix.
    Matrix,
    /// Intensity sweeps along one axis with slope/knee fits.
    Sweep {
        /// Swept axis: angle | cs | tc.
        #[arg(long)]
        axis: String,
        /// Number of sweep points (axis-appropriate default otherwise).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Run the FDTD wavesolver scene and record the microphones.
    Fdtd {
        /// Also write ground-only and ball-only solo traces.
        #[arg(long)]
        solo: bool,
    },
    /// Branch-cut quadrant safety scan of the closed-form kernel.
    BranchScan {
        /// Poisson's ratio to scan (default: the scenario ground's).
        #[arg(long)]
        nu: Option<f64>,
        /// Approximate number of (r, t') grid points.
        #[arg(long, default_value_t = 1_000_000)]
        points: usize,
    },
}

/// Entry point used by main(); returns the process exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // Usage and parse problems are configuration errors.
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Load the scenario (file or embedded default) with overrides applied.
fn load(common: &Common) -> Result<(MaterialDb<f64>, ScenarioConfig<f64>)> {
    let db = MaterialDb::load_default()?;
    let text = match &common.scenario {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT_SCENARIO.to_string(),
    };
    let overrides: Vec<(String, String)> = common
        .set
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| {
                    Error::ConfigGeneral(format!("--set needs key=value, got '{s}'"))
                })
        })
        .collect::<Result<_>>()?;
    let sc = load_scenario(&text, &db, &overrides)?;
    Ok((db, sc))
}

fn base_manifest(sc: &ScenarioConfig<f64>) -> Result<(Manifest, crate::HalfspaceParams64)> {
    let hs = derive_halfspace(&sc.ground)?;
    let ev = hertz_event(sc, &hs)?;
    let mut m = Manifest::new();
    m.set("ground_material", &sc.ground.name);
    m.set("object_material", &sc.object.name);
    m.set_scalar("ground_youngs_modulus", sc.ground.youngs_modulus);
    m.set_scalar("ground_poisson", sc.ground.poisson);
    m.set_scalar("ground_density", sc.ground.density);
    m.set_scalar("shear_modulus", hs.shear_modulus);
    m.set_scalar("c_s", hs.c_s);
    m.set_scalar("c_p", hs.c_p);
    m.set_scalar("c_r", hs.rayleigh_speed());
    m.set_scalar("speed_ratio_a", hs.speed_ratio);
    m.set_scalar("gamma", hs.gamma);
    m.set_scalar("ball_radius", sc.ball_radius);
    m.set_scalar("restitution", sc.restitution);
    m.set_scalar("normal_velocity", ev.normal_velocity);
    m.set_scalar("ball_mass", ev.mass);
    m.set_scalar("impulse", ev.impulse);
    m.set_scalar("contact_timescale", ev.timescale);
    m.set_scalar("epsilon", ev.epsilon);
    m.set_scalar("effective_stiffness", ev.effective_stiffness);
    m.set_scalar(
        "contact_radius",
        contact_radius(ev.mass, ev.ball_radius, ev.effective_stiffness, ev.normal_velocity),
    );
    m.set_scalar("air_density", sc.air_density);
    m.set_scalar("air_speed", sc.air_speed);
    m.set_scalar("sample_rate", sc.sample_rate);
    m.set_scalar("duration", sc.duration);
    m.set("impacts", sc.impacts.len());
    Ok((m, hs))
}

fn rayleigh_opts(sc: &ScenarioConfig<f64>) -> RayleighOptions<f64> {
    let mut o = RayleighOptions::new(sc.sample_rate, sc.duration);
    o.radial_per_eps = sc.radial_per_eps;
    o.r_max = sc.r_max;
    o
}

fn air(sc: &ScenarioConfig<f64>) -> AirParams<f64> {
    AirParams {
        density: sc.air_density,
        speed: sc.air_speed,
    }
}

/// Ground trace at a listener: superposition over all impacts.
fn ground_trace(
    sc: &ScenarioConfig<f64>,
    hs: &crate::HalfspaceParams64,
    listener: [f64; 3],
) -> Result<PressureTrace<f64>> {
    let events = hertz_events(sc, hs)?;
    let opts = rayleigh_opts(sc);
    let mut total: Option<PressureTrace<f64>> = None;
    for ev in &events {
        let tr = rayleigh_ground_pressure(ev, hs, listener, air(sc), &opts)?;
        match &mut total {
            Some(acc) => acc.add_assign(&tr),
            None => total = Some(tr),
        }
    }
    Ok(total.expect("at least one impact"))
}

/// Ball trace at a listener: superposition over all impacts.
fn ball_trace(
    sc: &ScenarioConfig<f64>,
    hs: &crate::HalfspaceParams64,
    listener: [f64; 3],
    reflective: bool,
) -> Result<PressureTrace<f64>> {
    let events = hertz_events(sc, hs)?;
    let mut total: Option<PressureTrace<f64>> = None;
    for ev in &events {
        let tr = ball_dipole_pressure(
            ev,
            listener,
            reflective,
            air(sc),
            sc.sample_rate,
            sc.duration,
        )?;
        match &mut total {
            Some(acc) => acc.add_assign(&tr),
            None => total = Some(tr),
        }
    }
    Ok(total.expect("at least one impact"))
}

pub fn run(cli: Cli) -> Result<i32> {
    if let Some(n) = cli.common.threads {
        // Ignore failure if a pool already exists (tests call run() twice).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    std::fs::create_dir_all(&cli.common.out)?;
    let out = cli.common.out.clone();
    let (db, sc) = load(&cli.common)?;
    let (mut manifest, hs) = base_manifest(&sc)?;

    let mut exit = 0;
    match cli.command {
        Command::Validate => {
            println!("scenario OK: {} on {}", sc.object.name, sc.ground.name);
            println!("  c_s = {:.6} m/s, gamma = {:.6}", hs.c_s, hs.gamma);
            let ev = hertz_event(&sc, &hs)?;
            println!(
                "  t_c = {:.6e} s, eps = {:.6e} m, J = {:.6e} N s",
                ev.timescale, ev.epsilon, ev.impulse
            );
        }
        Command::Response {
            radius,
            exact,
            epsilon,
            points,
        } => {
            let ev = hertz_event(&sc, &hs)?;
            let eps = epsilon.unwrap_or(ev.epsilon);
            let wf = lamb::wavefront_times(&hs, radius);
            let t_end = 3.0 * wf.t_r;
            let times: Vec<f64> = (0..points)
                .map(|i| t_end * i as f64 / (points - 1).max(1) as f64)
                .collect();
            manifest.set_scalar("response_radius", radius);
            manifest.set_scalar("response_epsilon", eps);
            if exact {
                let u: Vec<f64> = times
                    .iter()
                    .map(|&t| lamb::pekeris_displacement(&hs, radius, t))
                    .collect::<Result<_>>()?;
                write_csv(&out.join("response_exact.csv"), &["t", "u"], &[&times, &u])?;
                println!("wrote {}", out.join("response_exact.csv").display());
            } else {
                let field = RegularizedField::new(hs.clone(), eps)?;
                let mut u = Vec::with_capacity(points);
                let mut w = Vec::with_capacity(points);
                let mut a = Vec::with_capacity(points);
                for &t in &times {
                    let e = field.eval(radius, t)?;
                    u.push(e.u);
                    w.push(e.w);
                    a.push(e.a);
                }
                write_csv(
                    &out.join("response.csv"),
                    &["t", "u", "w", "a"],
                    &[&times, &u, &w, &a],
                )?;
                println!("wrote {}", out.join("response.csv").display());
            }
        }
        Command::Contact => {
            let ev = hertz_event(&sc, &hs)?;
            let r_c = contact_radius(
                ev.mass,
                ev.ball_radius,
                ev.effective_stiffness,
                ev.normal_velocity,
            );
            println!("contact event ({} on {}):", sc.object.name, sc.ground.name);
            println!("  mass            m   = {:.6e} kg", ev.mass);
            println!("  normal velocity v_n = {:.6e} m/s", ev.normal_velocity);
            println!("  contact time    t_c = {:.6e} s", ev.timescale);
            println!("  smoothing       eps = {:.6e} m", ev.epsilon);
            println!("  impulse         J   = {:.6e} N s", ev.impulse);
            println!("  contact radius  r_c = {:.6e} m", r_c);
            println!("  eff. stiffness  E*  = {:.6e} Pa", ev.effective_stiffness);
        }
        Command::Rayleigh => {
            for (i, &lp) in sc.listening_points.iter().enumerate() {
                let tr = ground_trace(&sc, &hs, lp)?;
                write_trace_csv(&out.join(format!("ground_{i}.csv")), &tr)?;
                write_wav(&out.join(format!("ground_{i}.wav")), &tr, Some(10.0))?;
                manifest.set_scalar(&format!("ground_{i}_peak_pa"), tr.peak_abs());
                manifest.set_scalar(&format!("ground_{i}_energy"), tr.energy());
            }
            println!("wrote ground traces for {} listener(s)", sc.listening_points.len());
        }
        Command::Ball { absorptive } => {
            for (i, &lp) in sc.listening_points.iter().enumerate() {
                let tr = ball_trace(&sc, &hs, lp, !absorptive)?;
                write_trace_csv(&out.join(format!("ball_{i}.csv")), &tr)?;
                write_wav(&out.join(format!("ball_{i}.wav")), &tr, Some(10.0))?;
                manifest.set_scalar(&format!("ball_{i}_peak_pa"), tr.peak_abs());
                manifest.set_scalar(&format!("ball_{i}_energy"), tr.energy());
            }
            println!("wrote ball traces for {} listener(s)", sc.listening_points.len());
        }
        Command::Compare => {
            let lp = sc.listening_points[0];
            let ground = ground_trace(&sc, &hs, lp)?;
            let ball = ball_trace(&sc, &hs, lp, true)?;
            let db_energy = intensity_db(&ground, &ball)?;
            let db_peak = peak_intensity_db(&ground, &ball)?;
            write_trace_csv(&out.join("ground.csv"), &ground)?;
            write_trace_csv(&out.join("ball.csv"), &ball)?;
            let mut combined = ground.clone();
            combined.add_assign(&ball);
            write_trace_csv(&out.join("combined.csv"), &combined)?;
            write_wav(&out.join("ground.wav"), &ground, Some(10.0))?;
            write_wav(&out.join("ball.wav"), &ball, Some(10.0))?;
            write_wav(&out.join("combined.wav"), &combined, Some(10.0))?;
            manifest.set_scalar("ground_vs_ball_peak_db", db_peak);
            manifest.set_scalar("ground_vs_ball_energy_db", db_energy);
            println!("ground vs ball: {db_peak:.2} dB (peak), {db_energy:.2} dB (energy)");
        }
        Command::Matrix => {
            let opts = MatrixOptions {
                listener: sc.listening_points[0],
                air: air(&sc),
                sample_rate: sc.sample_rate,
                duration: sc.duration,
                radial_per_eps: sc.radial_per_eps,
                ..MatrixOptions::default()
            };
            let m = material_matrix(&db, &opts)?;
            // Long-format CSV mirroring the 8x8 table.
            let mut rows: Vec<String> = Vec::new();
            for (bi, b) in m.names.iter().enumerate() {
                for (gi, g) in m.names.iter().enumerate() {
                    rows.push(format!(
                        "{b},{g},{:.6},{},{}",
                        m.db[bi][gi],
                        i32::from(m.louder[bi][gi]),
                        i32::from(m.audible[bi][gi])
                    ));
                }
            }
            let text = format!(
                "ball,ground,db,louder_than_ball,audible\n{}\n",
                rows.join("\n")
            );
            std::fs::write(out.join("matrix.csv"), text)?;
            println!("ball \\ ground relative intensity (dB):");
            print!("{:>10}", "");
            for g in &m.names {
                print!("{g:>10}");
            }
            println!();
            for (bi, b) in m.names.iter().enumerate() {
                print!("{b:>10}");
                for gi in 0..m.names.len() {
                    print!("{:>10.2}", m.db[bi][gi]);
                }
                println!();
            }
        }
        Command::Sweep { axis, points } => {
            let ev = hertz_event(&sc, &hs)?;
            let lp = sc.listening_points[0];
            let distance = (lp[0] * lp[0] + lp[1] * lp[1] + lp[2] * lp[2]).sqrt();
            let ctx = SweepContext {
                ground: sc.ground.clone(),
                halfspace: hs.clone(),
                event: ev.clone(),
                air: air(&sc),
                distance,
                radial_per_eps: sc.radial_per_eps,
                surface_extent: 1.0,
            };
            let result = match axis.as_str() {
                "angle" => {
                    let n = points.unwrap_or(13);
                    let angles: Vec<f64> = if n == 13 {
                        vec![
                            2.5, 5.0, 7.5, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0, 60.0,
                            75.0, 90.0,
                        ]
                    } else {
                        (0..n)
                            .map(|i| 2.5 + (90.0 - 2.5) * i as f64 / (n - 1).max(1) as f64)
                            .collect()
                    };
                    ctx.sweep_angle(&angles)?
                }
                "cs" => {
                    let n = points.unwrap_or(20);
                    let speeds: Vec<f64> = (0..n)
                        .map(|i| {
                            100.0 * (30_000.0f64 / 100.0).powf(i as f64 / (n - 1).max(1) as f64)
                        })
                        .collect();
                    let r = ctx.sweep_cs(&speeds)?;
                    let guess = 3.5 * (sc.air_speed * distance / ev.timescale).sqrt();
                    let slope = loglog_slope(&r.axis, &r.ground_intensity, 100.0, guess / 4.0);
                    let knee = fit_knee(
                        &r.axis,
                        &r.ground_intensity,
                        (100.0, guess / 4.0),
                        3.0 * guess,
                    );
                    manifest.set_scalar("cs_low_slope", slope);
                    manifest.set_scalar("cs_knee", knee);
                    println!("low-c_s intensity slope = {slope:.3}, knee = {knee:.0} m/s");
                    r
                }
                "tc" => {
                    let n = points.unwrap_or(13);
                    let tcs: Vec<f64> = (0..n)
                        .map(|i| {
                            2e-5 * (6.4e-3f64 / 2e-5).powf(i as f64 / (n - 1).max(1) as f64)
                        })
                        .collect();
                    let r = ctx.sweep_tc(&tcs)?;
                    let cross = distance / sc.air_speed;
                    let gl = loglog_slope(&r.axis, &r.ground_intensity, 2e-5, cross / 4.0);
                    let bl = loglog_slope(&r.axis, &r.ball_intensity, 2e-5, cross / 4.0);
                    let bh = loglog_slope(&r.axis, &r.ball_intensity, 4.0 * cross, 1.0);
                    manifest.set_scalar("tc_ground_low_slope", gl);
                    manifest.set_scalar("tc_ball_low_slope", bl);
                    manifest.set_scalar("tc_ball_high_slope", bh);
                    println!(
                        "low-t_c slopes: ground {gl:.3}, ball {bl:.3}; high-t_c ball {bh:.3}"
                    );
                    r
                }
                other => {
                    return Err(Error::ConfigGeneral(format!(
                        "unknown sweep axis '{other}' (use angle | cs | tc)"
                    )))
                }
            };
            let ratios: Vec<f64> = (0..result.axis.len()).map(|i| result.ratio_db(i)).collect();
            write_csv(
                &out.join(format!("sweep_{axis}.csv")),
                &[result.axis_name, "ground_intensity", "ball_intensity", "ratio_db"],
                &[
                    &result.axis,
                    &result.ground_intensity,
                    &result.ball_intensity,
                    &ratios,
                ],
            )?;
            println!("wrote {}", out.join(format!("sweep_{axis}.csv")).display());
        }
        Command::Fdtd { solo } => {
            let events = hertz_events(&sc, &hs)?;
            let modes: Vec<(SceneMode, &str)> = if solo {
                vec![
                    (SceneMode::GroundOnly, "ground"),
                    (SceneMode::BallOnly, "ball"),
                    (SceneMode::Combined, "combined"),
                ]
            } else {
                vec![(SceneMode::Combined, "combined")]
            };
            for (mode, name) in modes {
                let run = run_scene(&sc, &hs, &events, mode)?;
                for (i, tr) in run.traces.iter().enumerate() {
                    write_trace_csv(&out.join(format!("fdtd_{name}_{i}.csv")), tr)?;
                    write_wav(&out.join(format!("fdtd_{name}_{i}.wav")), tr, Some(10.0))?;
                    manifest.set_scalar(&format!("fdtd_{name}_{i}_peak_pa"), tr.peak_abs());
                }
                if !run.snapshots.is_empty() {
                    write_slices(&out, &run.snapshots, sc.fdtd.spacing)?;
                }
                manifest.set_scalar(&format!("fdtd_{name}_dt"), run.dt);
                manifest.set(&format!("fdtd_{name}_steps"), run.steps);
            }
            println!("wrote wavesolver traces for {} mic(s)", sc.fdtd.mics.len());
        }
        Command::BranchScan { nu, points } => {
            let nu = nu.unwrap_or(sc.ground.poisson);
            let mut ground = sc.ground.clone();
            ground.poisson = nu;
            let hs_scan = derive_halfspace(&ground)?;
            let ev = hertz_event(&sc, &hs)?;
            let field = RegularizedField::new(hs_scan, ev.epsilon)?;
            let n_r = (points as f64).sqrt().round() as usize;
            let n_t = points.div_ceil(n_r.max(1));
            let radii: Vec<f64> = (0..n_r)
                .map(|i| 1e-3 * (1e4f64).powf(i as f64 / (n_r - 1).max(1) as f64))
                .collect();
            let scan = field.branch_safety_scan(&radii, n_t)?;
            let mut report = String::new();
            report.push_str(&format!("nu = {nu}\n"));
            report.push_str(&format!("points = {}\n", scan.points));
            report.push_str(&format!("checks = {}\n", scan.checks));
            report.push_str(&format!("violations = {}\n", scan.violations.len()));
            for v in &scan.violations {
                report.push_str(&format!(
                    "violation: {} at t'={:e}, s={:e}, alpha={:e}\n",
                    v.kind, v.t_prime, v.s, v.alpha
                ));
            }
            std::fs::write(out.join("branch_scan.txt"), &report)?;
            println!(
                "branch scan (nu = {nu}): {} points, {} checks, {} violations",
                scan.points,
                scan.checks,
                scan.violations.len()
            );
            if !scan.violations.is_empty() {
                exit = 2;
            }
        }
    }
    manifest.write(&out.join("manifest.txt"))?;
    Ok(exit)
}
