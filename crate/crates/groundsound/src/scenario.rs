//! Scenario configuration: a flat, human-editable key-value format with
//! sections, SI units only.
//!
//! ```text
//! [ground]
//! material = wood          # name in the material database
//! poisson = 0.25           # optional field overrides
//!
//! [object]
//! material = steel
//! radius = 0.01            # ball radius a0 (m)
//! drop_height = 0.15       # exactly one of drop_height / speed
//! restitution = 0.5
//!
//! [contact]
//! impact_point = 0 0 0
//! impact_time = 0.0
//! # multi-impact scenes instead list one `event = x y z time drop_height`
//! # per impact; the [object] drop_height/speed must then be omitted.
//!
//! [listening]
//! point = 0 0 0.2          # repeatable
//!
//! [output]
//! sample_rate = 96000
//! duration = 0.006
//! air_density = 1.2
//! air_speed = 343
//! radial_per_eps = 8       # radial nodes per regularization length
//! r_max = 0                # 0 = automatic truncation radius
//!
//! [fdtd]
//! spacing = 0.005
//! extent = 0.32 0.32 0.32
//! duration = 0.0015
//! cfl = 0.9
//! mic = 0 0 0.2            # repeatable; defaults to listening points
//! snapshot_z = 0.05        # optional slice export height
//! snapshot_every = 50
//! ```
//!
//! Unknown sections or keys are rejected with the offending line number.

use crate::error::{Error, Result};
use crate::materials::{Material, MaterialDb};
use crate::real::Real;

/// One parsed `key = value` occurrence.
#[derive(Debug, Clone)]
struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
}

/// Split config text into section/key/value entries. Comments start with
/// `#` or `;`. Repeated keys are kept in order.
fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find(['#', ';']) {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let s = stripped.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(name) = s.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(Error::Config {
                line,
                message: format!("malformed section header '{raw}'"),
            })?;
            section = name.trim().to_lowercase();
            if section.is_empty() {
                return Err(Error::Config {
                    line,
                    message: "empty section name".into(),
                });
            }
            continue;
        }
        let (key, value) = s.split_once('=').ok_or(Error::Config {
            line,
            message: format!("expected 'key = value', got '{s}'"),
        })?;
        if section.is_empty() {
            return Err(Error::Config {
                line,
                message: "key outside of any [section]".into(),
            });
        }
        entries.push(Entry {
            section: section.clone(),
            key: key.trim().to_lowercase(),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(entries)
}

fn parse_scalar<R: Real>(e: &Entry) -> Result<R> {
    e.value.parse::<f64>().map(R::of).map_err(|_| Error::Config {
        line: e.line,
        message: format!("'{}' is not a number for key '{}'", e.value, e.key),
    })
}

fn parse_vec3<R: Real>(e: &Entry) -> Result<[R; 3]> {
    let parts: Vec<&str> = e.value.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Config {
            line: e.line,
            message: format!("key '{}' needs three numbers, got '{}'", e.key, e.value),
        });
    }
    let mut out = [R::zero(); 3];
    for (slot, p) in out.iter_mut().zip(parts.iter()) {
        *slot = p.parse::<f64>().map(R::of).map_err(|_| Error::Config {
            line: e.line,
            message: format!("'{p}' is not a number for key '{}'", e.key),
        })?;
    }
    Ok(out)
}

/// Parse a material database file: repeated `[material]` sections with
/// name / youngs_modulus / poisson / density keys.
pub(crate) fn parse_material_db<R: Real>(text: &str) -> Result<Vec<Material<R>>> {
    let entries = parse_entries(text)?;
    let mut materials: Vec<Material<R>> = Vec::new();
    let mut cur: Option<(Option<String>, Option<R>, Option<R>, Option<R>, usize)> = None;

    let finish = |cur: &mut Option<(Option<String>, Option<R>, Option<R>, Option<R>, usize)>,
                  out: &mut Vec<Material<R>>|
     -> Result<()> {
        if let Some((name, e, nu, rho, line)) = cur.take() {
            let missing = |what: &str| Error::Config {
                line,
                message: format!("[material] section is missing '{what}'"),
            };
            let m = Material::new(
                &name.ok_or_else(|| missing("name"))?,
                e.ok_or_else(|| missing("youngs_modulus"))?,
                nu.ok_or_else(|| missing("poisson"))?,
                rho.ok_or_else(|| missing("density"))?,
            )?;
            out.push(m);
        }
        Ok(())
    };

    for e in &entries {
        if e.section != "material" {
            return Err(Error::Config {
                line: e.line,
                message: format!("unknown section '[{}]' in material database", e.section),
            });
        }
        // A fresh section begins when `name` repeats.
        if e.key == "name" && cur.as_ref().is_some_and(|c| c.0.is_some()) {
            finish(&mut cur, &mut materials)?;
        }
        if cur.is_none() {
            cur = Some((None, None, None, None, e.line));
        }
        let slot = cur.as_mut().unwrap();
        match e.key.as_str() {
            "name" => slot.0 = Some(e.value.to_lowercase()),
            "youngs_modulus" => slot.1 = Some(parse_scalar(e)?),
            "poisson" => slot.2 = Some(parse_scalar(e)?),
            "density" => slot.3 = Some(parse_scalar(e)?),
            other => {
                return Err(Error::Config {
                    line: e.line,
                    message: format!("unknown key '{other}' in [material]"),
                })
            }
        }
    }
    finish(&mut cur, &mut materials)?;
    if materials.is_empty() {
        return Err(Error::ConfigGeneral("material database is empty".into()));
    }
    Ok(materials)
}

/// One impact in a scene. Single-ball scenarios have exactly one.
#[derive(Debug, Clone)]
pub struct ImpactSpec<R: Real> {
    pub point: [R; 3],
    pub time: R,
    /// Normal impact speed (m/s), already resolved from drop height if the
    /// config gave one.
    pub normal_speed: R,
}

/// FDTD solver options.
#[derive(Debug, Clone)]
pub struct FdtdOptions<R: Real> {
    /// Grid spacing (m).
    pub spacing: R,
    /// Domain extent (m) in x, y, z.
    pub extent: [R; 3],
    /// Simulated duration (s).
    pub duration: R,
    /// CFL safety factor; stable below 1/sqrt(3) scaled bound.
    pub cfl: R,
    /// Microphone positions; defaults to the listening points.
    pub mics: Vec<[R; 3]>,
    /// Optional pressure-slice export: height and step interval.
    pub snapshot_z: Option<R>,
    pub snapshot_every: usize,
}

/// Full experiment description.
#[derive(Debug, Clone)]
pub struct ScenarioConfig<R: Real> {
    pub ground: Material<R>,
    pub object: Material<R>,
    /// Ball radius a0 (m).
    pub ball_radius: R,
    /// Restitution coefficient in [0, 1].
    pub restitution: R,
    /// Impacts (single entry unless the config lists `event` lines).
    pub impacts: Vec<ImpactSpec<R>>,
    pub listening_points: Vec<[R; 3]>,
    pub sample_rate: R,
    pub duration: R,
    pub air_density: R,
    pub air_speed: R,
    /// Radial nodes per regularization length in the Rayleigh integral.
    pub radial_per_eps: R,
    /// Override for the surface truncation radius; `None` = automatic.
    pub r_max: Option<R>,
    pub fdtd: FdtdOptions<R>,
}

/// Standard gravity used to turn drop heights into impact speeds.
pub const STANDARD_GRAVITY: f64 = 9.80665;

impl<R: Real> ScenarioConfig<R> {
    /// First (or only) impact.
    pub fn impact(&self) -> &ImpactSpec<R> {
        &self.impacts[0]
    }
}

/// Parse scenario text against a material database, after applying `--set
/// section.key=value` style overrides.
pub fn load_scenario<R: Real>(
    text: &str,
    db: &MaterialDb<R>,
    overrides: &[(String, String)],
) -> Result<ScenarioConfig<R>> {
    let mut entries = parse_entries(text)?;
    for (path, value) in overrides {
        let (section, key) = path.split_once('.').ok_or_else(|| {
            Error::ConfigGeneral(format!("override '{path}' must look like section.key"))
        })?;
        let section = section.trim().to_lowercase();
        let key = key.trim().to_lowercase();
        // Replace every existing occurrence, or append.
        let mut replaced = false;
        for e in entries.iter_mut() {
            if e.section == section && e.key == key {
                e.value = value.clone();
                replaced = true;
            }
        }
        if !replaced {
            entries.push(Entry {
                section,
                key,
                value: value.clone(),
                line: 0,
            });
        }
    }
    build_scenario(&entries, db)
}

fn build_scenario<R: Real>(entries: &[Entry], db: &MaterialDb<R>) -> Result<ScenarioConfig<R>> {
    let mut ground: Option<Material<R>> = None;
    let mut object: Option<Material<R>> = None;
    let mut ball_radius: Option<R> = None;
    let mut drop_height: Option<R> = None;
    let mut speed: Option<R> = None;
    let mut restitution = R::of(0.5);
    let mut impact_point = [R::zero(); 3];
    let mut impact_time = R::zero();
    let mut events: Vec<(usize, [R; 3], R, R)> = Vec::new();
    let mut listening: Vec<[R; 3]> = Vec::new();
    let mut sample_rate = R::of(96_000.0);
    let mut duration = R::of(0.006);
    let mut air_density = R::of(1.2);
    let mut air_speed = R::of(343.0);
    let mut radial_per_eps = R::of(8.0);
    let mut r_max: Option<R> = None;
    let mut fd_spacing = R::of(0.005);
    let mut fd_extent = [R::of(0.32); 3];
    let mut fd_duration = R::of(0.0015);
    let mut fd_cfl = R::of(0.9);
    let mut fd_mics: Vec<[R; 3]> = Vec::new();
    let mut fd_snap_z: Option<R> = None;
    let mut fd_snap_every = 50usize;

    let material_from = |e: &Entry, name: &str| -> Result<Material<R>> {
        db.get(name).cloned().map_err(|err| Error::Config {
            line: e.line,
            message: err.to_string(),
        })
    };

    for e in entries {
        match (e.section.as_str(), e.key.as_str()) {
            ("ground", "material") => ground = Some(material_from(e, &e.value)?),
            ("ground", "youngs_modulus") => {
                ground_field(&mut ground, e)?.youngs_modulus = parse_scalar(e)?
            }
            ("ground", "poisson") => ground_field(&mut ground, e)?.poisson = parse_scalar(e)?,
            ("ground", "density") => ground_field(&mut ground, e)?.density = parse_scalar(e)?,
            ("object", "material") => object = Some(material_from(e, &e.value)?),
            ("object", "youngs_modulus") => {
                object_field(&mut object, e)?.youngs_modulus = parse_scalar(e)?
            }
            ("object", "poisson") => object_field(&mut object, e)?.poisson = parse_scalar(e)?,
            ("object", "density") => object_field(&mut object, e)?.density = parse_scalar(e)?,
            ("object", "radius") => ball_radius = Some(parse_scalar(e)?),
            ("object", "drop_height") => drop_height = Some(parse_scalar(e)?),
            ("object", "speed") => speed = Some(parse_scalar(e)?),
            ("object", "restitution") => restitution = parse_scalar(e)?,
            ("contact", "impact_point") => impact_point = parse_vec3(e)?,
            ("contact", "impact_time") => impact_time = parse_scalar(e)?,
            ("contact", "event") => {
                let parts: Vec<&str> = e.value.split_whitespace().collect();
                if parts.len() != 5 {
                    return Err(Error::Config {
                        line: e.line,
                        message: "event needs five numbers: x y z time drop_height".into(),
                    });
                }
                let mut nums = [0.0f64; 5];
                for (slot, p) in nums.iter_mut().zip(parts.iter()) {
                    *slot = p.parse().map_err(|_| Error::Config {
                        line: e.line,
                        message: format!("'{p}' is not a number in event"),
                    })?;
                }
                events.push((
                    e.line,
                    [R::of(nums[0]), R::of(nums[1]), R::of(nums[2])],
                    R::of(nums[3]),
                    R::of(nums[4]),
                ));
            }
            ("listening", "point") => listening.push(parse_vec3(e)?),
            ("output", "sample_rate") => sample_rate = parse_scalar(e)?,
            ("output", "duration") => duration = parse_scalar(e)?,
            ("output", "air_density") => air_density = parse_scalar(e)?,
            ("output", "air_speed") => air_speed = parse_scalar(e)?,
            ("output", "radial_per_eps") => radial_per_eps = parse_scalar(e)?,
            ("output", "r_max") => {
                let v = parse_scalar(e)?;
                r_max = if v > R::zero() { Some(v) } else { None };
            }
            ("fdtd", "spacing") => fd_spacing = parse_scalar(e)?,
            ("fdtd", "extent") => fd_extent = parse_vec3(e)?,
            ("fdtd", "duration") => fd_duration = parse_scalar(e)?,
            ("fdtd", "cfl") => fd_cfl = parse_scalar(e)?,
            ("fdtd", "mic") => fd_mics.push(parse_vec3(e)?),
            ("fdtd", "snapshot_z") => fd_snap_z = Some(parse_scalar(e)?),
            ("fdtd", "snapshot_every") => {
                fd_snap_every = e.value.parse().map_err(|_| Error::Config {
                    line: e.line,
                    message: format!("'{}' is not an integer", e.value),
                })?
            }
            (section, key) => {
                return Err(Error::Config {
                    line: e.line,
                    message: format!("unknown key '{key}' in section [{section}]"),
                })
            }
        }
    }

    let ground = ground.ok_or_else(|| Error::ConfigGeneral("missing [ground] material".into()))?;
    let object = object.ok_or_else(|| Error::ConfigGeneral("missing [object] material".into()))?;
    ground.validate()?;
    object.validate()?;
    let ball_radius =
        ball_radius.ok_or_else(|| Error::ConfigGeneral("missing [object] radius".into()))?;
    if !(ball_radius > R::zero()) {
        return Err(Error::ConfigGeneral("ball radius must be positive".into()));
    }
    if restitution < R::zero() || restitution > R::one() {
        return Err(Error::ConfigGeneral(
            "restitution must lie in [0, 1]".into(),
        ));
    }

    let speed_of = |h: R, line: usize| -> Result<R> {
        if !(h > R::zero()) {
            return Err(Error::Config {
                line,
                message: "drop height must be positive".into(),
            });
        }
        Ok((R::of(2.0 * STANDARD_GRAVITY) * h).sqrt())
    };

    let impacts: Vec<ImpactSpec<R>> = if events.is_empty() {
        let v_n = match (drop_height, speed) {
            (Some(h), None) => speed_of(h, 0)?,
            (None, Some(v)) => v,
            (Some(_), Some(_)) => {
                return Err(Error::ConfigGeneral(
                    "give exactly one of drop_height / speed, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::ConfigGeneral(
                    "give exactly one of drop_height / speed".into(),
                ))
            }
        };
        vec![ImpactSpec {
            point: impact_point,
            time: impact_time,
            normal_speed: v_n,
        }]
    } else {
        if drop_height.is_some() || speed.is_some() {
            return Err(Error::ConfigGeneral(
                "multi-impact scenes carry per-event drop heights; remove [object] drop_height/speed".into(),
            ));
        }
        let mut out = Vec::with_capacity(events.len());
        for (line, point, time, height) in events {
            out.push(ImpactSpec {
                point,
                time,
                normal_speed: speed_of(height, line)?,
            });
        }
        out
    };

    for imp in &impacts {
        if imp.point[2] != R::zero() {
            return Err(Error::ConfigGeneral(format!(
                "impact points must lie on the ground plane z = 0, got z = {}",
                imp.point[2]
            )));
        }
    }

    if listening.is_empty() {
        return Err(Error::ConfigGeneral(
            "at least one [listening] point is required".into(),
        ));
    }
    for p in &listening {
        if !(p[2] > R::zero()) {
            return Err(Error::ConfigGeneral(format!(
                "listening points must lie strictly above the ground plane, got z = {}",
                p[2]
            )));
        }
    }
    if !(sample_rate > R::zero()) || !(duration > R::zero()) {
        return Err(Error::ConfigGeneral(
            "sample_rate and duration must be positive".into(),
        ));
    }

    let fd_mics = if fd_mics.is_empty() {
        listening.clone()
    } else {
        fd_mics
    };

    Ok(ScenarioConfig {
        ground,
        object,
        ball_radius,
        restitution,
        impacts,
        listening_points: listening,
        sample_rate,
        duration,
        air_density,
        air_speed,
        radial_per_eps,
        r_max,
        fdtd: FdtdOptions {
            spacing: fd_spacing,
            extent: fd_extent,
            duration: fd_duration,
            cfl: fd_cfl,
            mics: fd_mics,
            snapshot_z: fd_snap_z,
            snapshot_every: fd_snap_every,
        },
    })
}

fn ground_field<'a, R: Real>(
    ground: &'a mut Option<Material<R>>,
    e: &Entry,
) -> Result<&'a mut Material<R>> {
    ground.as_mut().ok_or(Error::Config {
        line: e.line,
        message: "set [ground] material before overriding its fields".into(),
    })
}

fn object_field<'a, R: Real>(
    object: &'a mut Option<Material<R>>,
    e: &Entry,
) -> Result<&'a mut Material<R>> {
    object.as_mut().ok_or(Error::Config {
        line: e.line,
        message: "set [object] material before overriding its fields".into(),
    })
}
