//! Dense univariate polynomials with real coefficients.
//!
//! Coefficients are stored in ascending order: `coeffs[k]` multiplies `s^k`.
//! Every constructor and arithmetic operation returns the canonical form, in
//! which the highest stored coefficient is nonzero (the zero polynomial has no
//! coefficients at all).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which top coefficients are trimmed.
pub const TRIM_TOL: f64 = 1e-12;

/// Relative backward-error bound every computed root must satisfy.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;

const MAX_ITERATIONS: usize = 500;

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients and canonicalizes it.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        Polynomial::new(vec![0.0, 1.0])
    }

    /// Expands `Π (s - r)` over real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Polynomial::one(), |acc, &r| {
            &acc * &Polynomial::new(vec![-r, 1.0])
        })
    }

    /// Expands `Π (s - r)` over complex roots; conjugate pairs must be
    /// present for the imaginary parts to cancel, which is checked.
    pub fn from_complex_roots(roots: &[Complex64]) -> Result<Self> {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (k, &c) in acc.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            acc = next;
        }
        let scale = acc.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if acc.iter().any(|c| c.im.abs() > 1e-9 * scale.max(1.0)) {
            return Err(Error::Domain(
                "complex roots must come in conjugate pairs".into(),
            ));
        }
        Ok(Polynomial::new(acc.into_iter().map(|c| c.re).collect()))
    }

    fn trim(&mut self) {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let cutoff = TRIM_TOL * max;
        while let Some(&last) = self.coeffs.last() {
            if last.abs() <= cutoff {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Polynomial whose coefficients are the absolute values of these.
    pub fn abs_coeffs(&self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c.abs()).collect(),
        }
    }

    /// `(1 - lambda) * p0 + lambda * p1`.
    pub fn convex_combination(p0: &Polynomial, p1: &Polynomial, lambda: f64) -> Result<Polynomial> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Parameter(format!(
                "convex weight {lambda} outside [0, 1]"
            )));
        }
        Ok(Polynomial::lerp(p0, p1, lambda))
    }

    /// Unchecked affine interpolation, used where `lambda` is already known
    /// to lie in the unit interval.
    pub(crate) fn lerp(p0: &Polynomial, p1: &Polynomial, lambda: f64) -> Polynomial {
        let len = p0.coeffs.len().max(p1.coeffs.len());
        Polynomial::new(
            (0..len)
                .map(|k| (1.0 - lambda) * p0.coeff(k) + lambda * p1.coeff(k))
                .collect(),
        )
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn evaluate_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value and first derivative at `z` in a single Horner pass.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| {
            (p * z + c, dp * z + p)
        })
    }

    /// `Σ |a_k| |z|^k`, the natural magnitude against which residuals are judged.
    pub fn magnitude_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    /// Cauchy bound `1 + max_k |a_k / a_d|` on the magnitude of every root.
    pub fn cauchy_bound(&self) -> Option<f64> {
        let d = self.degree()?;
        let lead = self.leading().abs();
        Some(
            1.0 + self.coeffs[..d]
                .iter()
                .map(|c| c.abs() / lead)
                .fold(0.0, f64::max),
        )
    }

    /// All complex roots with multiplicity.
    ///
    /// Every returned root `r` satisfies
    /// `|p(r)| <= ROOT_RESIDUAL_TOL * Σ |a_k| |r|^k`; a failure to reach that
    /// bound is reported as [`Error::Numerical`].
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let d = self
            .degree()
            .ok_or_else(|| Error::Domain("roots of the zero polynomial".into()))?;
        // exact zeros at the origin
        let zeros = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        let reduced = &self.coeffs[zeros..];
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
        roots.extend(match d - zeros {
            0 => Vec::new(),
            1 => vec![Complex64::new(-reduced[0] / reduced[1], 0.0)],
            2 => quadratic_roots(reduced[0], reduced[1], reduced[2]).to_vec(),
            _ => aberth(reduced),
        });
        for r in &roots {
            let residual = self.evaluate(*r).norm();
            let scale = self.magnitude_scale(*r);
            if !residual.is_finite() || residual > ROOT_RESIDUAL_TOL * scale {
                return Err(Error::Numerical(format!(
                    "root {r} of {self} has residual {residual:e} (scale {scale:e})"
                )));
            }
        }
        Ok(roots)
    }
}

fn quadratic_roots(c: f64, b: f64, a: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        // avoid cancellation
        let q = -0.5 * (b + b.signum() * sq);
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Aberth–Ehrlich simultaneous iteration followed by a Newton polish.
/// `coeffs` must have degree at least 1 and a nonzero constant term.
fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let p = Polynomial {
        coeffs: coeffs.to_vec(),
    };
    let lead = coeffs[d].abs();
    let radius = (coeffs[0].abs() / lead).powf(1.0 / d as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let abs = Polynomial {
        coeffs: coeffs.iter().map(|c| c.abs()).collect(),
    };
    let mut done = vec![false; d];
    for _ in 0..MAX_ITERATIONS {
        let mut converged = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (pv, dpv) = p.evaluate_with_derivative(z[k]);
            // residual at rounding level
            if pv.norm() <= 8.0 * f64::EPSILON * abs.evaluate_real(z[k].norm()) {
                done[k] = true;
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() > 1e-15 * z[k].norm().max(1e-300) {
                converged = false;
            } else {
                done[k] = true;
            }
        }
        if converged {
            break;
        }
    }

    for root in z.iter_mut() {
        for _ in 0..3 {
            let (pv, dpv) = p.evaluate_with_derivative(*root);
            let step = pv / dpv;
            if !step.is_finite() {
                break;
            }
            let candidate = *root - step;
            if p.evaluate(candidate).norm() < pv.norm() {
                *root = candidate;
            } else {
                break;
            }
        }
    }
    z
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}s")?,
                _ => write!(f, "{a}s^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}
