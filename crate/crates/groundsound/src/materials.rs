//! Material database and elastic-halfspace parameter derivation.
//!
//! A ground material is characterized by (E, nu, rho). From these we derive
//! the shear modulus, the P/S wave speeds, the three roots of the Rayleigh
//! equation in kappa^2, and the residue-like coefficients A_j that appear in
//! the surface displacement solution. Everything downstream (the exact
//! Pekeris evaluation and the regularized kernels) consumes a
//! [`HalfspaceParams`].

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Elastic constants of an isotropic solid.
#[derive(Debug, Clone, PartialEq)]
pub struct Material<R: Real> {
    pub name: String,
    /// Young's modulus E (Pa).
    pub youngs_modulus: R,
    /// Poisson's ratio nu (dimensionless), 0 <= nu < 0.5.
    pub poisson: R,
    /// Density rho (kg/m^3).
    pub density: R,
}

impl<R: Real> Material<R> {
    pub fn new(name: &str, youngs_modulus: R, poisson: R, density: R) -> Result<Self> {
        let m = Self {
            name: name.to_lowercase(),
            youngs_modulus,
            poisson,
            density,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.youngs_modulus > R::zero()) || !self.youngs_modulus.is_finite() {
            return Err(Error::InvalidMaterial(format!(
                "{}: Young's modulus must be positive, got {}",
                self.name, self.youngs_modulus
            )));
        }
        if !(self.poisson >= R::zero() && self.poisson < R::of(0.5)) {
            return Err(Error::InvalidMaterial(format!(
                "{}: Poisson's ratio must lie in [0, 0.5), got {}",
                self.name, self.poisson
            )));
        }
        if !(self.density > R::zero()) || !self.density.is_finite() {
            return Err(Error::InvalidMaterial(format!(
                "{}: density must be positive, got {}",
                self.name, self.density
            )));
        }
        Ok(())
    }

    /// Shear modulus mu = E / (2(1+nu)).
    pub fn shear_modulus(&self) -> R {
        self.youngs_modulus / (R::of(2.0) * (R::one() + self.poisson))
    }

    /// Shear wave speed c_s = sqrt(mu/rho).
    pub fn shear_speed(&self) -> R {
        (self.shear_modulus() / self.density).sqrt()
    }
}

/// Roots of the Rayleigh equation in x = kappa^2,
/// `16(1-a^2) x^3 - 8(3-2a^2) x^2 + 8x - 1 = 0`.
#[derive(Debug, Clone, Copy)]
pub struct RayleighRoots<R: Real> {
    /// Ordered so the largest real root (gamma^2) comes first. For the
    /// complex-pair regime the conjugates follow, positive imaginary part
    /// second.
    pub kappa_sq: [Complex<R>; 3],
    /// True iff all three roots are real (nu < 0.2631 regime).
    pub all_real: bool,
}

/// Derived wave parameters of a halfspace ground material.
#[derive(Debug, Clone)]
pub struct HalfspaceParams<R: Real> {
    /// Shear modulus mu (Pa).
    pub shear_modulus: R,
    /// Compression wave speed c_p (m/s).
    pub c_p: R,
    /// Shear wave speed c_s (m/s).
    pub c_s: R,
    /// Speed ratio a = c_s/c_p = sqrt((1-2nu)/(2-2nu)).
    pub speed_ratio: R,
    /// Poisson's ratio the parameters were derived from.
    pub poisson: R,
    /// The three Rayleigh roots kappa_j^2 (gamma^2 first).
    pub kappa_sq: [Complex<R>; 3],
    /// True iff all roots are real.
    pub all_real: bool,
    /// gamma = c_s/c_r, ratio of shear to Rayleigh wave speed, > 1.
    pub gamma: R,
    /// Coefficients A_j matching the root ordering.
    pub coeffs: [Complex<R>; 3],
}

impl<R: Real> HalfspaceParams<R> {
    /// Rayleigh wave speed c_r = c_s / gamma.
    pub fn rayleigh_speed(&self) -> R {
        self.c_s / self.gamma
    }
}

/// Speed ratio a(nu) = sqrt((1-2nu)/(2-2nu)).
pub fn speed_ratio<R: Real>(nu: R) -> R {
    ((R::one() - R::of(2.0) * nu) / (R::of(2.0) - R::of(2.0) * nu)).sqrt()
}

/// Solve a general cubic `c3 x^3 + c2 x^2 + c1 x + c0 = 0` with real
/// coefficients. Cardano's method in complex arithmetic seeds three roots,
/// each polished by a few Newton steps on the original cubic.
fn solve_cubic<R: Real>(c3: R, c2: R, c1: R, c0: R) -> [Complex<R>; 3] {
    let cx = |re: R, im: R| Complex::new(re, im);
    let b = c2 / c3;
    let c = c1 / c3;
    let d = c0 / c3;

    // Depressed cubic y^3 + p y + q, x = y - b/3.
    let third = R::one() / R::of(3.0);
    let p = c - b * b * third;
    let q = R::of(2.0) * b * b * b / R::of(27.0) - b * c * third + d;

    let disc = cx(q * q / R::of(4.0) + p * p * p / R::of(27.0), R::zero());
    let s = disc.sqrt();
    let half_q = cx(-q / R::of(2.0), R::zero());
    // Pick the larger-magnitude cube-root argument to avoid cancellation.
    let u_cubed = if (half_q + s).norm_sqr() >= (half_q - s).norm_sqr() {
        half_q + s
    } else {
        half_q - s
    };

    let shift = cx(-b * third, R::zero());
    let mut roots = if u_cubed.norm() == R::zero() {
        [shift; 3]
    } else {
        let u = u_cubed.powf(third);
        let omega = cx(R::of(-0.5), R::of(0.75).sqrt());
        let mut out = [Complex::new(R::zero(), R::zero()); 3];
        let mut w = Complex::new(R::one(), R::zero());
        for slot in &mut out {
            let uk = u * w;
            let y = uk - cx(p * third, R::zero()) / uk;
            *slot = y + shift;
            w = w * omega;
        }
        out
    };

    // Newton polish on the original cubic.
    for root in &mut roots {
        let mut x = *root;
        let mut best = x;
        let mut best_res = R::infinity();
        for _ in 0..12 {
            let f = ((cx(c3, R::zero()) * x + cx(c2, R::zero())) * x + cx(c1, R::zero())) * x
                + cx(c0, R::zero());
            let res = f.norm();
            if res < best_res {
                best_res = res;
                best = x;
            }
            let df = (cx(R::of(3.0) * c3, R::zero()) * x + cx(R::of(2.0) * c2, R::zero())) * x
                + cx(c1, R::zero());
            if df.norm() == R::zero() {
                break;
            }
            x = x - f / df;
        }
        *root = best;
    }
    roots
}

/// Roots of the Rayleigh equation for a given speed ratio `a`.
///
/// Ordering: real roots sorted descending with the largest real root first
/// (that root is gamma^2); in the complex regime the single real root leads
/// and the conjugate pair follows.
pub fn rayleigh_roots<R: Real>(a: R) -> RayleighRoots<R> {
    debug_assert!(a > R::zero() && a <= R::of(1.0 / std::f64::consts::SQRT_2 + 1e-12));
    let a2 = a * a;
    let c3 = R::of(16.0) * (R::one() - a2);
    let c2 = -R::of(8.0) * (R::of(3.0) - R::of(2.0) * a2);
    let c1 = R::of(8.0);
    let c0 = -R::one();
    let mut roots = solve_cubic(c3, c2, c1, c0);

    // Snap near-real roots onto the real axis before classifying.
    let scale = roots
        .iter()
        .map(|z| z.norm())
        .fold(R::one(), |m, v| m.max(v));
    let snap = R::of(1e-7) * scale;
    for z in &mut roots {
        if z.im.abs() <= snap {
            *z = Complex::new(z.re, R::zero());
        }
    }

    let all_real = roots.iter().all(|z| z.im == R::zero());
    // Descending real part, real roots preferred for the leading slot; the
    // conjugate pair keeps +Im before -Im for determinism.
    roots.sort_by(|x, y| {
        let xk = (x.im != R::zero(), -x.re, -x.im);
        let yk = (y.im != R::zero(), -y.re, -y.im);
        xk.partial_cmp(&yk).expect("finite roots")
    });
    RayleighRoots {
        kappa_sq: roots,
        all_real,
    }
}

/// Coefficient A_j = (kappa_j^2 - 1/2)^2 sqrt(a^2 - kappa_j^2)
///                   / ((kappa_j^2 - kappa_i^2)(kappa_j^2 - kappa_k^2)),
/// with principal square roots and complex arithmetic throughout.
pub fn coeff_a<R: Real>(j: usize, roots: &RayleighRoots<R>, a: R) -> Result<Complex<R>> {
    assert!(j < 3, "root index out of range");
    let ks = &roots.kappa_sq;
    let scale = ks.iter().map(|z| z.norm()).fold(R::one(), |m, v| m.max(v));
    let kj = ks[j];
    let others: [Complex<R>; 2] = match j {
        0 => [ks[1], ks[2]],
        1 => [ks[0], ks[2]],
        _ => [ks[0], ks[1]],
    };
    let denom = (kj - others[0]) * (kj - others[1]);
    if denom.norm() < R::of(1e-9) * scale * scale {
        return Err(Error::Domain(
            "repeated Rayleigh roots: A_j coefficient is degenerate".into(),
        ));
    }
    let half = Complex::new(R::of(0.5), R::zero());
    let a2 = Complex::new(a * a, R::zero());
    let num = (kj - half) * (kj - half) * (a2 - kj).sqrt();
    Ok(num / denom)
}

/// Derive all halfspace wave parameters from a material.
pub fn derive_halfspace<R: Real>(material: &Material<R>) -> Result<HalfspaceParams<R>> {
    material.validate()?;
    let nu = material.poisson;
    let mu = material.shear_modulus();
    let c_s = (mu / material.density).sqrt();
    let a = speed_ratio(nu);
    let c_p = c_s / a;
    let roots = rayleigh_roots(a);
    let gamma_sq = roots.kappa_sq[0].re;
    if !(gamma_sq > R::one()) {
        return Err(Error::Domain(format!(
            "Rayleigh root gamma^2 = {gamma_sq} is not > 1; material {:?} is outside the solver's regime",
            material.name
        )));
    }
    let coeffs = [
        coeff_a(0, &roots, a)?,
        coeff_a(1, &roots, a)?,
        coeff_a(2, &roots, a)?,
    ];
    Ok(HalfspaceParams {
        shear_modulus: mu,
        c_p,
        c_s,
        speed_ratio: a,
        poisson: nu,
        kappa_sq: roots.kappa_sq,
        all_real: roots.all_real,
        gamma: gamma_sq.sqrt(),
        coeffs,
    })
}

/// Residual of the Rayleigh cubic at x, relative to its largest coefficient.
pub fn rayleigh_residual<R: Real>(a: R, x: Complex<R>) -> R {
    let a2 = a * a;
    let c3 = R::of(16.0) * (R::one() - a2);
    let c2 = -R::of(8.0) * (R::of(3.0) - R::of(2.0) * a2);
    let c1 = R::of(8.0);
    let c0 = -R::one();
    let cc = |v: R| Complex::new(v, R::zero());
    let p = ((cc(c3) * x + cc(c2)) * x + cc(c1)) * x + cc(c0);
    let max_coeff = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    p.norm() / max_coeff
}

// ------------------------------------------------------------------
// Material database
// ------------------------------------------------------------------

/// The material table shipped with the crate, embedded from
/// `data/materials.cfg` (same key-value format as scenario files).
const MATERIALS_CFG: &str = include_str!("../data/materials.cfg");

/// Environment variable naming an alternative material database file.
pub const MATERIALS_ENV: &str = "GROUNDSOUND_MATERIALS";

/// Ordered, name-keyed material database.
#[derive(Debug, Clone)]
pub struct MaterialDb<R: Real> {
    materials: Vec<Material<R>>,
}

impl<R: Real> MaterialDb<R> {
    pub fn from_materials(materials: Vec<Material<R>>) -> Self {
        Self { materials }
    }

    /// Parse a database in the scenario key-value format (repeated
    /// `[material]` sections).
    pub fn parse(text: &str) -> Result<Self> {
        let materials = crate::scenario::parse_material_db(text)?;
        Ok(Self { materials })
    }

    /// The built-in table, or the file named by `GROUNDSOUND_MATERIALS`
    /// when that variable is set.
    pub fn load_default() -> Result<Self> {
        if let Ok(path) = std::env::var(MATERIALS_ENV) {
            let text = std::fs::read_to_string(&path)?;
            return Self::parse(&text);
        }
        Self::parse(MATERIALS_CFG)
    }

    /// Case-insensitive lookup; a few long-form aliases map onto the short
    /// database keys.
    pub fn get(&self, name: &str) -> Result<&Material<R>> {
        let key = name.trim().to_lowercase();
        let key = match key.as_str() {
            "stainless steel" | "stainless-steel" => "steel",
            "plastic (abs)" | "abs" => "plastic",
            "paraffin wax" | "paraffin" => "wax",
            "mdf" => "wood",
            other => other,
        };
        self.materials
            .iter()
            .find(|m| m.name == key)
            .ok_or_else(|| Error::InvalidMaterial(format!("unknown material '{name}'")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Material<R>> {
        self.materials.iter()
    }

    pub fn len(&self) -> usize {
        self.materials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.materials.is_empty()
    }
}

/// The built-in materials in database order.
pub fn builtin_materials<R: Real>() -> Vec<Material<R>> {
    MaterialDb::parse(MATERIALS_CFG)
        .expect("embedded material database is well-formed")
        .materials
}
