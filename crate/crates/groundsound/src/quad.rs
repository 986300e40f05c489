//! Adaptive Gauss-Kronrod quadrature (15-point rule) with interval splits
//! and a square-root substitution for integrable endpoint singularities.
//! Used by the convolution oracle and the volume-displacement diagnostics.

use crate::error::{Error, Result};
use crate::real::Real;

// Standard 7/15 Gauss-Kronrod abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of one Kronrod panel: estimate plus error bound.
fn kronrod_panel<R: Real, F: Fn(R) -> R>(f: &F, a: R, b: R) -> (R, R) {
    let center = (a + b) * R::of(0.5);
    let half = (b - a) * R::of(0.5);
    let fc = f(center);
    let mut kronrod = fc * R::of(WGK[7]);
    let mut gauss = fc * R::of(WG[3]);
    let mut resabs = kronrod.abs();
    let mut fvals = [R::zero(); 14];
    for i in 0..7 {
        let dx = half * R::of(XGK[i]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fvals[2 * i] = f1;
        fvals[2 * i + 1] = f2;
        let sum = f1 + f2;
        kronrod += sum * R::of(WGK[i]);
        resabs += (f1.abs() + f2.abs()) * R::of(WGK[i]);
        if i % 2 == 1 {
            gauss += sum * R::of(WG[i / 2]);
        }
    }
    let mean = kronrod * R::of(0.5);
    let mut resasc = (fc - mean).abs() * R::of(WGK[7]);
    for i in 0..7 {
        resasc += ((fvals[2 * i] - mean).abs() + (fvals[2 * i + 1] - mean).abs()) * R::of(WGK[i]);
    }
    let value = kronrod * half;
    let mut err = ((kronrod - gauss) * half).abs();
    let resasc = resasc * half.abs();
    if resasc != R::zero() && err != R::zero() {
        let scale = (R::of(200.0) * err / resasc).powf(R::of(1.5));
        err = if scale < R::one() {
            resasc * scale
        } else {
            resasc
        };
    }
    let resabs = resabs * half.abs();
    let floor = R::of(50.0) * R::epsilon() * resabs;
    (value, err.max(floor))
}

/// Adaptive integration of `f` over [a, b] to an absolute tolerance.
pub fn integrate<R: Real, F: Fn(R) -> R>(f: &F, a: R, b: R, abs_tol: R) -> Result<R> {
    integrate_split(f, &[a, b], abs_tol)
}

/// Adaptive integration with interval splits at the given breakpoints
/// (sorted ascending; first and last are the integration bounds).
pub fn integrate_split<R: Real, F: Fn(R) -> R>(f: &F, points: &[R], abs_tol: R) -> Result<R> {
    assert!(points.len() >= 2, "need at least the two endpoints");
    struct Panel<R> {
        a: R,
        b: R,
        value: R,
        err: R,
    }
    let mut panels: Vec<Panel<R>> = Vec::new();
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, err) = kronrod_panel(f, w[0], w[1]);
        panels.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }
    let max_panels = 4000;
    loop {
        let total_err: R = panels.iter().map(|p| p.err).sum();
        if total_err <= abs_tol {
            return Ok(panels.iter().map(|p| p.value).sum());
        }
        if panels.len() >= max_panels || total_err.is_nan() {
            return Err(Error::Quadrature {
                requested: abs_tol.as_f64(),
                achieved: total_err.as_f64(),
            });
        }
        // Split the worst panel (NaN errors sort as worst).
        let mut worst = 0;
        let mut worst_err = R::neg_infinity();
        for (i, p) in panels.iter().enumerate() {
            let e = if p.err.is_nan() { R::infinity() } else { p.err };
            if e > worst_err {
                worst_err = e;
                worst = i;
            }
        }
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = (a + b) * R::of(0.5);
        if mid <= a || mid >= b {
            // Interval exhausted below floating-point resolution.
            return Err(Error::Quadrature {
                requested: abs_tol.as_f64(),
                achieved: total_err.as_f64(),
            });
        }
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (value, err) = kronrod_panel(f, lo, hi);
            panels.push(Panel {
                a: lo,
                b: hi,
                value,
                err,
            });
        }
    }
}

/// Integrate `f` over [a, b] where `f` has an integrable inverse-square-root
/// singularity at the UPPER endpoint b: substitute t = b - xi^2.
pub fn integrate_sqrt_singular_upper<R: Real, F: Fn(R) -> R>(
    f: &F,
    a: R,
    b: R,
    abs_tol: R,
) -> Result<R> {
    let width = b - a;
    if width <= R::zero() {
        return Ok(R::zero());
    }
    let xi_max = width.sqrt();
    let g = |xi: R| {
        let t = b - xi * xi;
        let t = if t < a { a } else { t };
        f(t) * R::of(2.0) * xi
    };
    integrate(&g, R::zero(), xi_max, abs_tol)
}

/// Same with the singularity at the LOWER endpoint a: t = a + xi^2.
pub fn integrate_sqrt_singular_lower<R: Real, F: Fn(R) -> R>(
    f: &F,
    a: R,
    b: R,
    abs_tol: R,
) -> Result<R> {
    let width = b - a;
    if width <= R::zero() {
        return Ok(R::zero());
    }
    let xi_max = width.sqrt();
    let g = |xi: R| {
        let t = a + xi * xi;
        let t = if t > b { b } else { t };
        f(t) * R::of(2.0) * xi
    };
    integrate(&g, R::zero(), xi_max, abs_tol)
}
