//! Order-3 Taylor "jet" arithmetic over complex numbers.
//!
//! A `CJet` carries a value and its first three derivatives with respect to
//! one real parameter. Propagating jets through the closed-form kernel
//! expressions yields the exact analytic time derivatives term by term
//! (Leibniz rule for products, Faa di Bruno through sqrt/log/recip), so the
//! impulse displacement and acceleration come out of a single evaluation
//! with no finite differencing.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::real::Real;

/// Complex value plus derivatives d1..d3 with respect to a real parameter.
#[derive(Debug, Clone, Copy)]
pub struct CJet<R: Real> {
    pub v: Complex<R>,
    pub d1: Complex<R>,
    pub d2: Complex<R>,
    pub d3: Complex<R>,
}

/// Real value plus derivatives, for assembled (Re/Im-projected) results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RJet<R: Real> {
    pub v: R,
    pub d1: R,
    pub d2: R,
    pub d3: R,
}

impl<R: Real> CJet<R> {
    pub fn constant(v: Complex<R>) -> Self {
        let z = Complex::new(R::zero(), R::zero());
        Self {
            v,
            d1: z,
            d2: z,
            d3: z,
        }
    }

    pub fn constant_re(v: R) -> Self {
        Self::constant(Complex::new(v, R::zero()))
    }

    /// The differentiation variable itself.
    pub fn variable(v: R) -> Self {
        let z = Complex::new(R::zero(), R::zero());
        Self {
            v: Complex::new(v, R::zero()),
            d1: Complex::new(R::one(), R::zero()),
            d2: z,
            d3: z,
        }
    }

    pub fn scale(self, c: Complex<R>) -> Self {
        Self {
            v: self.v * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
            d3: self.d3 * c,
        }
    }

    /// Chain rule through an outer function with derivatives f1..f3 at v.
    fn compose(self, f0: Complex<R>, f1: Complex<R>, f2: Complex<R>, f3: Complex<R>) -> Self {
        let g1 = self.d1;
        let g2 = self.d2;
        let g3 = self.d3;
        let three = Complex::new(R::of(3.0), R::zero());
        Self {
            v: f0,
            d1: f1 * g1,
            d2: f2 * g1 * g1 + f1 * g2,
            d3: f3 * g1 * g1 * g1 + three * f2 * g1 * g2 + f1 * g3,
        }
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        let w = self.v.sqrt();
        let half = Complex::new(R::of(0.5), R::zero());
        let f1 = half / w;
        let f2 = -f1 / self.v * half;
        let f3 = f2 / self.v * Complex::new(R::of(-1.5), R::zero());
        self.compose(w, f1, f2, f3)
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        let f1 = Complex::new(R::one(), R::zero()) / self.v;
        let f2 = -f1 * f1;
        let f3 = Complex::new(R::of(2.0), R::zero()) * f1 * f1 * f1;
        self.compose(self.v.ln(), f1, f2, f3)
    }

    /// 1/self.
    pub fn recip(self) -> Self {
        let f0 = Complex::new(R::one(), R::zero()) / self.v;
        let f1 = -f0 * f0;
        let f2 = -Complex::new(R::of(2.0), R::zero()) * f1 * f0;
        let f3 = -Complex::new(R::of(3.0), R::zero()) * f2 * f0;
        self.compose(f0, f1, f2, f3)
    }

    pub fn re(self) -> RJet<R> {
        RJet {
            v: self.v.re,
            d1: self.d1.re,
            d2: self.d2.re,
            d3: self.d3.re,
        }
    }

    pub fn im(self) -> RJet<R> {
        RJet {
            v: self.v.im,
            d1: self.d1.im,
            d2: self.d2.im,
            d3: self.d3.im,
        }
    }
}

impl<R: Real> Add for CJet<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d3: self.d3 + o.d3,
        }
    }
}

impl<R: Real> Sub for CJet<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
            d3: self.d3 - o.d3,
        }
    }
}

impl<R: Real> Neg for CJet<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
            d3: -self.d3,
        }
    }
}

impl<R: Real> Mul for CJet<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let three = Complex::new(R::of(3.0), R::zero());
        let two = Complex::new(R::of(2.0), R::zero());
        Self {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + two * self.d1 * o.d1 + self.v * o.d2,
            d3: self.d3 * o.v + three * self.d2 * o.d1 + three * self.d1 * o.d2 + self.v * o.d3,
        }
    }
}

impl<R: Real> RJet<R> {
    pub fn zero() -> Self {
        Self {
            v: R::zero(),
            d1: R::zero(),
            d2: R::zero(),
            d3: R::zero(),
        }
    }

    pub fn scaled(self, c: R) -> Self {
        Self {
            v: self.v * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
            d3: self.d3 * c,
        }
    }

    pub fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
            d3: self.d3 + o.d3,
        }
    }
}
