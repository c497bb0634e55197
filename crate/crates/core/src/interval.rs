//! Real intervals and rectangular complex intervals.
//!
//! Plain round-to-nearest arithmetic; callers compare enclosures against a
//! relative exclusion margin that absorbs the rounding error.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn hull(a: f64, b: f64) -> Self {
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Distance from `x` to the interval (zero inside).
    pub fn distance_to(&self, x: f64) -> f64 {
        (self.lo - x).max(x - self.hi).max(0.0)
    }

    pub fn union(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn scale(&self, k: f64) -> Interval {
        Interval::hull(self.lo * k, self.hi * k)
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        Interval {
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re: Interval,
    pub im: Interval,
}

impl Rect {
    pub fn point(z: Complex64) -> Self {
        Rect {
            re: Interval::point(z.re),
            im: Interval::point(z.im),
        }
    }

    pub fn zero() -> Self {
        Rect::point(Complex64::new(0.0, 0.0))
    }

    pub fn hull_of(points: impl IntoIterator<Item = Complex64>) -> Option<Rect> {
        points
            .into_iter()
            .map(Rect::point)
            .reduce(|a, b| a.union(&b))
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            re: self.re.union(&other.re),
            im: self.im.union(&other.im),
        }
    }

    pub fn width(&self) -> f64 {
        self.re.width().max(self.im.width())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    /// Euclidean distance from the origin to the rectangle.
    pub fn distance_to_origin(&self) -> f64 {
        self.re.distance_to(0.0).hypot(self.im.distance_to(0.0))
    }

    /// Scaling by a nonnegative real is exact on rectangles.
    pub fn scale(&self, k: f64) -> Rect {
        Rect {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }

    /// Largest modulus over the rectangle.
    pub fn max_norm(&self) -> f64 {
        let x = self.re.lo.abs().max(self.re.hi.abs());
        let y = self.im.lo.abs().max(self.im.hi.abs());
        x.hypot(y)
    }
}

impl Add for Rect {
    type Output = Rect;

    fn add(self, rhs: Rect) -> Rect {
        Rect {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Add<Complex64> for Rect {
    type Output = Rect;

    fn add(self, rhs: Complex64) -> Rect {
        self + Rect::point(rhs)
    }
}

impl Sub for Rect {
    type Output = Rect;

    fn sub(self, rhs: Rect) -> Rect {
        Rect {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for Rect {
    type Output = Rect;

    fn mul(self, rhs: Rect) -> Rect {
        Rect {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

/// Horner evaluation of ascending real coefficients over a rectangle.
pub fn eval_rect(coeffs: &[f64], z: Rect) -> Rect {
    coeffs
        .iter()
        .rev()
        .fold(Rect::zero(), |acc, &c| acc * z + Complex64::new(c, 0.0))
}
