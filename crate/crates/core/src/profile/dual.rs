use std::ops::{Add, Div, Mul, Neg, Sub};

/// Second-order forward-mode dual number: a value with its first and second
/// derivatives along one scalar variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Dual2 {
    pub const fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    pub const fn variable(v: f64) -> Self {
        Self { v, d1: 1.0, d2: 0.0 }
    }

    pub fn is_constant(&self) -> bool {
        self.d1 == 0.0 && self.d2 == 0.0
    }

    /// Chain rule for `g(self)` given `g`, `g'`, `g''` at `self.v`.
    #[inline]
    pub fn chain(self, g: f64, dg: f64, d2g: f64) -> Self {
        Self { v: g, d1: dg * self.d1, d2: d2g * self.d1 * self.d1 + dg * self.d2 }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Natural logarithm; caller guarantees `v > 0`.
    pub fn ln(self) -> Self {
        let inv = 1.0 / self.v;
        self.chain(self.v.ln(), inv, -inv * inv)
    }

    /// Square root; caller guarantees `v >= 0`.
    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let ds = 0.5 / s;
        self.chain(s, ds, -0.5 * ds / self.v)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tanh(self) -> Self {
        let t = self.v.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    /// Power with a constant exponent.
    pub fn powf(self, c: f64) -> Self {
        if c == 0.0 {
            return Self::constant(1.0);
        }
        let g = self.v.powf(c);
        let dg = if c == 1.0 { 1.0 } else { c * self.v.powf(c - 1.0) };
        let d2g = if c == 1.0 {
            0.0
        } else if c == 2.0 {
            2.0
        } else {
            c * (c - 1.0) * self.v.powf(c - 2.0)
        };
        self.chain(g, dg, d2g)
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.v / o.v;
        let d1 = (self.d1 - q * o.d1) / o.v;
        let d2 = (self.d2 - 2.0 * d1 * o.d1 - q * o.d2) / o.v;
        Self { v: q, d1, d2 }
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}
