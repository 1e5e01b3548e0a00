//! Second-order complex jets: forward-mode differentiation for analytic maps.
//!
//! A [`Jet2`] carries (f(z), f'(z), f''(z)) through arithmetic and the
//! elementary analytic functions, so cumulant transforms evaluated on jets
//! yield exact-to-roundoff derivatives with no step size and no subtractive
//! cancellation. This plays the role complex-step differentiation plays for
//! real-valued code: an infinitesimal probe direction orthogonal to the value.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub type C64 = Complex64;

/// Value, first and second derivative of an analytic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: C64,
    pub d: C64,
    pub dd: C64,
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2 {
        v: C64::new(0.0, 0.0),
        d: C64::new(0.0, 0.0),
        dd: C64::new(0.0, 0.0),
    };

    /// The identity function at `z`: value z, derivative 1.
    pub fn var(z: C64) -> Self {
        Jet2 {
            v: z,
            d: C64::new(1.0, 0.0),
            dd: C64::new(0.0, 0.0),
        }
    }

    pub fn konst(c: C64) -> Self {
        Jet2 {
            v: c,
            d: C64::new(0.0, 0.0),
            dd: C64::new(0.0, 0.0),
        }
    }

    pub fn real(c: f64) -> Self {
        Self::konst(C64::new(c, 0.0))
    }

    pub fn recip(self) -> Self {
        let g = self.v;
        let g2 = g * g;
        Jet2 {
            v: 1.0 / g,
            d: -self.d / g2,
            dd: (2.0 * self.d * self.d - g * self.dd) / (g2 * g),
        }
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let d = self.d / (2.0 * s);
        Jet2 {
            v: s,
            d,
            dd: self.dd / (2.0 * s) - self.d * self.d / (4.0 * s * s * s),
        }
    }

    /// Principal branch of self^p for real exponent p.
    pub fn powf(self, p: f64) -> Self {
        let w = self.v.powf(p);
        let wm1 = self.v.powf(p - 1.0);
        let wm2 = self.v.powf(p - 2.0);
        Jet2 {
            v: w,
            d: p * wm1 * self.d,
            dd: p * (p - 1.0) * wm2 * self.d * self.d + p * wm1 * self.dd,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet2 {
            v: e,
            d: e * self.d,
            dd: e * (self.d * self.d + self.dd),
        }
    }

    pub fn norm_max(self) -> f64 {
        self.v.norm().max(self.d.norm()).max(self.dd.norm())
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            d: self.d + o.d,
            dd: self.dd + o.dd,
        }
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, o: Jet2) {
        *self = *self + o;
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - o.v,
            d: self.d - o.d,
            dd: self.dd - o.dd,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            d: -self.d,
            dd: -self.dd,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
            dd: self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        Jet2 {
            v: self.v * s,
            d: self.d * s,
            dd: self.dd * s,
        }
    }
}

impl Mul<C64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: C64) -> Jet2 {
        Jet2 {
            v: self.v * s,
            d: self.d * s,
            dd: self.dd * s,
        }
    }
}
